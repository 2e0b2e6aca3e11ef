from __future__ import annotations

import json

from typing import TYPE_CHECKING

import pytest


if TYPE_CHECKING:
    from cleo.testers.command_tester import CommandTester

    from tests.types import CommandTesterFactory


@pytest.fixture
def tester(command_tester_factory: CommandTesterFactory) -> CommandTester:
    return command_tester_factory("bounds")


def test_bounds(tester: CommandTester) -> None:
    assert tester.execute("--p 5 --n 3") == 0

    data = json.loads(tester.io.fetch_output())
    assert data["kind"] == "LowerBoundReport"
    assert data["bound_T1"] == {"num": "2", "den": "27"}
    assert data["bound"] == {"num": "2", "den": "27"}
    assert data["gcd_ok"] is True

    error = tester.io.fetch_error()
    assert "epsilon(p) is at least 1" in error
    assert "epsilon_hat(p) is at least 1" in error


def test_bounds_at_large_prime(tester: CommandTester) -> None:
    assert tester.execute("--p 100000007 --n 3") == 0

    data = json.loads(tester.io.fetch_output())
    assert data["epsilon_approx"] == pytest.approx(0.0196, abs=5e-4)
    assert data["epsilon_vacuous"] is False
    assert "epsilon(p) is" not in tester.io.fetch_error()


@pytest.mark.parametrize(("args", "status"), [("--p 3 --n 3", 3), ("--p 5", 2)])
def test_bounds_exit_codes(tester: CommandTester, args: str, status: int) -> None:
    assert tester.execute(args) == status
