from __future__ import annotations

import json

from typing import TYPE_CHECKING

import pytest


if TYPE_CHECKING:
    from cleo.testers.command_tester import CommandTester

    from tests.types import CommandTesterFactory


@pytest.fixture
def tester(command_tester_factory: CommandTesterFactory) -> CommandTester:
    return command_tester_factory("count")


def test_count_box(tester: CommandTester) -> None:
    assert tester.execute("--p 5 --n 3 --X 150 --rootless 2,3") == 0

    data = json.loads(tester.io.fetch_output())
    assert data["kind"] == "BoxCount"
    assert data["exact"] == 12800
    assert data["main_term"] == {"num": "12800", "den": "1"}
    assert data["spec"]["rootless_at"] == [2, 3]


def test_count_rooted(tester: CommandTester) -> None:
    assert tester.execute("--p 5 --n 3 --X 150 --rooted 2") == 0

    data = json.loads(tester.io.fetch_output())
    assert data["main_term"] == {"num": "129600", "den": "1"}
    assert data["exact"] == 129600


def test_count_aligned(tester: CommandTester) -> None:
    assert tester.execute("--p 5 --n 3 --k 1 --rootless 2,3") == 0

    data = json.loads(tester.io.fetch_output())
    assert data["kind"] == "AlignedCount"
    assert data["formula"] == 12800
    assert data["enumerated"] == 12800
    assert data["verified"] is True
    assert tester.io.fetch_error() == ""


def test_count_aligned_above_cap(tester: CommandTester) -> None:
    args = "--p 5 --n 3 --k 2 --rootless 2,3 --enumeration-cap 100000"

    assert tester.execute(args) == 0

    data = json.loads(tester.io.fetch_output())
    assert data["formula"] == 102400
    assert data["verified"] is False
    assert "only the density count" in tester.io.fetch_error()


@pytest.mark.parametrize(
    ("args", "status"),
    [
        ("--p 5 --n 3 --X 150 --rootless 2 --rooted 2", 3),
        ("--p 5 --n 3 --X 150 --rootless 7", 3),
        ("--p 5 --n 3 --X 150 --rootless two", 2),
        ("--p 5 --n 3 --rootless 2", 2),
        ("--p 5 --n 3 --k 0", 3),
        ("--p 5 --n 3 --X 150 --enumeration-cap 10000", 3),
    ],
)
def test_count_exit_codes(tester: CommandTester, args: str, status: int) -> None:
    assert tester.execute(args) == status
