from __future__ import annotations

from typing import TYPE_CHECKING

import pytest

from heilbronn_survey.oracle import CHECKS
from heilbronn_survey.oracle import OracleCheck
from heilbronn_survey.oracle import OracleFailure
from heilbronn_survey.oracle import naive_residues
from heilbronn_survey.oracle import run_checks


if TYPE_CHECKING:
    from pytest_mock import MockerFixture


QUICK_CHECKS = [
    "density-table",
    "rootless-brute-force",
    "exceptional-primes",
    "power-residues",
    "criterion",
    "theorem2",
    "aligned-count",
    "effective-bound",
]

SLOW_CHECKS = [
    "theorem2-main-term",
    "theorem1-density",
    "witness-soundness",
    "corollary",
    "determinism",
]


def test_check_names_are_unique() -> None:
    names = [check.name for check in CHECKS]

    assert len(names) == len(set(names))
    assert sorted(names) == sorted(QUICK_CHECKS + SLOW_CHECKS)


@pytest.mark.parametrize("name", QUICK_CHECKS)
def test_quick_checks_pass(name: str) -> None:
    (result,) = run_checks(names=[name])

    assert result.passed, result.detail
    assert result.name == name


@pytest.mark.slow
@pytest.mark.parametrize("name", SLOW_CHECKS)
def test_slow_checks_pass(name: str) -> None:
    (result,) = run_checks(names=[name])

    assert result.passed, result.detail


def test_run_checks_reports_failures(mocker: MockerFixture) -> None:
    def broken(full: bool) -> str:
        raise OracleFailure("mismatch")

    mocker.patch(
        "heilbronn_survey.oracle.CHECKS",
        (
            OracleCheck("broken", "always fails", broken),
            OracleCheck("fine", "always passes", lambda full: "ok"),
        ),
    )

    results = list(run_checks(full=True))

    assert [(r.name, r.passed, r.detail) for r in results] == [
        ("broken", False, "mismatch"),
        ("fine", True, "ok"),
    ]


def test_run_checks_filters_by_name() -> None:
    assert list(run_checks(names=[])) == []


def test_naive_residues() -> None:
    assert naive_residues(7, 2) == {1, 2, 4}
    assert naive_residues(7, 3) == {1, 6}


@pytest.mark.slow
@pytest.mark.parametrize("full", [False, True])
def test_theorem1_density_checks_the_unaligned_height(full: bool) -> None:
    (result,) = run_checks(full=full, names=["theorem1-density"])

    assert result.passed, result.detail
    assert result.detail.endswith("at X=1000")
