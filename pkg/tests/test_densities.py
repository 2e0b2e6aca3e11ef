from __future__ import annotations

import itertools
import math

from fractions import Fraction

import pytest

from sympy import nextprime

from heilbronn_survey.densities import RationalInterval
from heilbronn_survey.densities import at_most_one_rootless
from heilbronn_survey.densities import count_rootless
from heilbronn_survey.densities import count_rootless_closed_form
from heilbronn_survey.densities import density_bounds
from heilbronn_survey.densities import density_report
from heilbronn_survey.densities import dubickas_density
from heilbronn_survey.densities import eisenstein_density
from heilbronn_survey.densities import epsilon
from heilbronn_survey.densities import epsilon_hat
from heilbronn_survey.densities import epsilon_sharp
from heilbronn_survey.densities import fourth_root_floor
from heilbronn_survey.densities import primes_upto
from heilbronn_survey.densities import rootless_density
from heilbronn_survey.exceptions import PreconditionError
from tests.helpers import naive_rootless_count


@pytest.mark.parametrize(
    ("p", "n", "expected"),
    [
        (2, 1, 0),
        (2, 2, 1),
        (3, 1, 0),
        (3, 2, 3),
        (5, 3, 40),
        (3, 5, 72),
        (5, 4, 205),
        (7, 2, 21),
    ],
)
def test_count_rootless(p: int, n: int, expected: int) -> None:
    assert count_rootless(p, n) == expected


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_count_rootless_agrees_with_brute_force(p: int, n: int) -> None:
    assert count_rootless(p, n) == naive_rootless_count(p, n)


@pytest.mark.parametrize(("p", "n"), [(2, 2), (2, 7), (3, 3), (3, 6), (5, 5), (5, 8)])
def test_closed_form_for_large_degree(p: int, n: int) -> None:
    assert count_rootless_closed_form(p, n) == count_rootless(p, n)


def test_closed_form_needs_large_degree() -> None:
    with pytest.raises(PreconditionError):
        count_rootless_closed_form(5, 3)


@pytest.mark.parametrize("n", range(2, 10))
def test_rootless_density_at_two_is_a_quarter(n: int) -> None:
    assert rootless_density(2, n) == Fraction(1, 4)


@pytest.mark.parametrize("n", range(3, 10))
def test_rootless_density_at_three_stabilizes(n: int) -> None:
    assert rootless_density(3, n) == Fraction(8, 27)


def test_rootless_density_values() -> None:
    assert rootless_density(5, 3) == Fraction(8, 25)
    assert rootless_density(3, 2) == Fraction(1, 3)


@pytest.mark.parametrize(
    ("p", "n", "expected"),
    [
        (5, 3, Fraction(4, 625)),
        (2, 2, Fraction(1, 8)),
        (3, 1, Fraction(2, 9)),
    ],
)
def test_eisenstein_density(p: int, n: int, expected: Fraction) -> None:
    assert eisenstein_density(p, n) == expected
    assert eisenstein_density(p, n) == Fraction(1, p**n) - Fraction(1, p ** (n + 1))


@pytest.mark.parametrize("p", primes_upto(50))
@pytest.mark.parametrize("n", range(2, 9))
def test_density_bounds_enclose_rootless_density(p: int, n: int) -> None:
    lo, hi = density_bounds(p, n)

    assert lo <= rootless_density(p, n) <= hi
    assert Fraction(1, 4) <= lo
    assert hi < Fraction(1, 2)


@pytest.mark.parametrize("p", primes_upto(50))
def test_alternating_terms_strictly_decrease(p: int) -> None:
    terms = [Fraction(math.comb(p, k), p**k) for k in range(1, p + 1)]

    assert all(a > b for a, b in zip(terms, terms[1:]))


def test_density_bounds_need_degree_two() -> None:
    with pytest.raises(PreconditionError):
        density_bounds(5, 1)


def test_dubickas_density_truncations() -> None:
    assert dubickas_density(2, 2).lo == Fraction(1, 8)
    assert dubickas_density(2, 3).lo == Fraction(41, 216)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_dubickas_density_intervals_are_nested(n: int) -> None:
    intervals = [dubickas_density(n, bound) for bound in (2, 3, 5, 10, 20, 50, 100)]

    for coarse, fine in zip(intervals, intervals[1:]):
        assert coarse.contains(fine)
        assert fine.width < coarse.width


def test_dubickas_density_needs_degree_two() -> None:
    with pytest.raises(PreconditionError):
        dubickas_density(1, 10)


@pytest.mark.parametrize(
    ("p", "expected"),
    [(2, 1), (15, 1), (17, 2), (81, 2), (82, 3), (625, 4), (626, 5), (10**8 + 7, 100)],
)
def test_fourth_root_floor(p: int, expected: int) -> None:
    assert fourth_root_floor(p) == expected


def test_epsilon_is_vacuous_for_small_primes() -> None:
    # no prime q with q^4 < p
    assert epsilon(5) == 1
    assert epsilon(13) == 1


def test_epsilon_at_large_prime() -> None:
    value = epsilon(10**8 + 7)

    assert value == 26 * Fraction(3, 4) ** 25
    assert float(value) == pytest.approx(0.0195, abs=5e-4)


def test_epsilon_at_seventeen() -> None:
    # 2^4 < 17, so only q = 2 is used
    assert epsilon(17) == Fraction(3, 2)


def test_epsilon_requires_a_prime() -> None:
    with pytest.raises(PreconditionError):
        epsilon(626)


def test_epsilon_decreases_with_more_primes() -> None:
    # the first primes past 5^4, 7^4, 11^4 and 19^4: 3, 4, 5 and 8 primes below
    # the fourth root
    primes = sorted(
        {int(nextprime(y**4)) for y in (5, 7, 11, 19)}
        | {int(nextprime(y**4 + 500)) for y in (5, 7, 11)}
    )
    values = [epsilon(p) for p in primes]

    assert all(fourth_root_floor(p) >= 5 for p in primes)
    for (p1, e1), (p2, e2) in itertools.combinations(zip(primes, values), 2):
        assert p1 < p2
        assert e2 <= e1
    assert values[0] == Fraction(27, 16)
    assert values[-1] < 1


def test_epsilon_hat() -> None:
    assert epsilon_hat(5, 2.5) == 2 * Fraction(3, 4)
    assert epsilon_hat(10**9 + 7, 3) == 3 * Fraction(9, 16)

    with pytest.raises(PreconditionError):
        epsilon_hat(3)


def test_epsilon_hat_defaults_to_fourth_root_of_log() -> None:
    assert epsilon_hat(10007) == 1
    assert epsilon_hat(10**8 + 7) == Fraction(3, 2)


def test_epsilon_sharp_never_exceeds_one() -> None:
    for p in (5, 17, 97, 631, 10007):
        for n in (2, 3, 5):
            assert 0 < epsilon_sharp(p, n) <= 1


def test_at_most_one_rootless() -> None:
    assert at_most_one_rootless([]) == 1
    assert at_most_one_rootless([Fraction(1, 4)]) == 1

    quarter, third = Fraction(1, 4), Fraction(1, 3)
    assert at_most_one_rootless([quarter, third]) == 1 - quarter * third


def test_primes_upto() -> None:
    assert primes_upto(1) == ()
    assert primes_upto(20) == (2, 3, 5, 7, 11, 13, 17, 19)
    assert len(primes_upto(100)) == 25


def test_rational_interval() -> None:
    interval = RationalInterval(Fraction(1, 3), Fraction(1, 2))

    assert interval.width == Fraction(1, 6)
    assert interval.midpoint == Fraction(5, 12)
    assert interval.contains(Fraction(2, 5))
    assert not interval.contains(Fraction(3, 5))
    assert interval.contains(RationalInterval(Fraction(2, 5), Fraction(9, 20)))

    with pytest.raises(ValueError):
        RationalInterval(Fraction(1), Fraction(0))


def test_density_report() -> None:
    report = density_report(5, 4)

    assert report.A == 205
    assert report.C == Fraction(205, 625)
    assert report.E == Fraction(4, 5**5)
    assert report.bounds is not None
    assert report.bounds.contains(report.C)
    assert report.epsilon == 1
    assert report.epsilon_vacuous
    assert report.epsilon_hat is not None


def test_density_report_for_small_inputs() -> None:
    report = density_report(3, 1)

    assert report.bounds is None
    assert report.epsilon_hat is None
    assert report.A == 0


@pytest.mark.parametrize(("p", "n"), [(4, 3), (1, 3), (5, 0)])
def test_density_report_rejects_bad_input(p: int, n: int) -> None:
    with pytest.raises(PreconditionError):
        density_report(p, n)
