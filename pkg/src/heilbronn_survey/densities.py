from __future__ import annotations

import math

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING

from sympy import isprime
from sympy import primepi
from sympy import primerange

from heilbronn_survey.exceptions import PreconditionError


if TYPE_CHECKING:
    from collections.abc import Iterable


#: Uniform lower bound on C_q(n) for n >= 2, attained at q = 2.
UNIFORM_ROOTLESS_BOUND = Fraction(1, 4)


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"Empty interval [{self.lo}, {self.hi}].")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value: Fraction | RationalInterval) -> bool:
        if isinstance(value, RationalInterval):
            return self.lo <= value.lo and value.hi <= self.hi

        return self.lo <= value <= self.hi


def require_prime(value: int, name: str = "p") -> None:
    if value < 2 or not isprime(value):
        raise PreconditionError(f"{name} must be prime, got {value}.")


@lru_cache(maxsize=None)
def primes_upto(bound: int) -> tuple[int, ...]:
    """
    All primes q <= bound, ascending.
    """
    if bound < 2:
        return ()

    return tuple(int(q) for q in primerange(2, bound + 1))


@lru_cache(maxsize=None)
def prime_pi(x: int) -> int:
    if x < 2:
        return 0

    return int(primepi(x))


def count_rootless(p: int, n: int) -> int:
    """
    Number A_p(n) of monic degree n polynomials over F_p without a root in F_p,
    by inclusion-exclusion over the linear factors x - r.
    """
    _require_degree(n)
    if p < 2:
        raise PreconditionError(f"Expected a prime p >= 2, got {p}.")

    return sum(
        (-1) ** k * math.comb(p, k) * p ** (n - k) for k in range(min(n, p) + 1)
    )


def count_rootless_closed_form(p: int, n: int) -> int:
    """
    (p - 1)^p p^(n - p), valid once every linear factor can divide (n >= p).
    """
    if n < p:
        raise PreconditionError(f"The closed form needs n >= p, got n={n}, p={p}.")

    return (p - 1) ** p * p ** (n - p)


def rootless_density(p: int, n: int) -> Fraction:
    return Fraction(count_rootless(p, n), p**n)


def eisenstein_density(p: int, n: int) -> Fraction:
    """
    Density E_p(n) = 1/p^n - 1/p^(n+1) of p-Eisenstein coefficient tuples mod p^2.
    """
    _require_degree(n)
    if p < 2:
        raise PreconditionError(f"Expected a prime p >= 2, got {p}.")

    return Fraction(p - 1, p ** (n + 1))


def dubickas_density(n: int, bound: int) -> RationalInterval:
    """
    Certified enclosure of the density 1 - prod_p (1 - 1/p^n + 1/p^(n+1)) of
    Eisenstein polynomials among all monic degree n polynomials.

    The product is evaluated exactly over p <= bound; every further factor lowers
    the product by less than 1/p^n, and sum_{m > B} m^-n <= 1 / ((n-1) B^(n-1)).
    """
    if n < 2:
        raise PreconditionError(f"The density needs n >= 2, got {n}.")
    if bound < 2:
        raise PreconditionError(f"Truncation bound must be at least 2, got {bound}.")

    product = Fraction(1)
    for p in primes_upto(bound):
        product *= 1 - Fraction(1, p**n) + Fraction(1, p ** (n + 1))

    lo = 1 - product
    tail = Fraction(1, (n - 1) * bound ** (n - 1))

    return RationalInterval(lo, lo + tail)


def density_bounds(p: int, n: int) -> tuple[Fraction, Fraction]:
    if n < 2:
        raise PreconditionError(f"The bounds on C_p(n) need n >= 2, got {n}.")
    if p < 2:
        raise PreconditionError(f"Expected a prime p >= 2, got {p}.")

    return Fraction(p * p - 1, 3 * p * p), Fraction(p - 1, 2 * p)


def fourth_root_floor(p: int) -> int:
    """
    Largest integer Y with Y^4 < p.
    """
    y = math.isqrt(math.isqrt(p))
    # isqrt(isqrt(p)) is floor(p^(1/4)); step down when it is exact
    return y if y**4 < p else y - 1


def epsilon(p: int) -> Fraction:
    """
    Upper bound on the proportion of p-Eisenstein polynomials that escape the
    pairwise witness search over primes below p^(1/4), using C_q(n) >= 1/4.
    """
    require_prime(p)

    return _epsilon_from_count(prime_pi(fourth_root_floor(p)))


def default_pair_parameter(p: int) -> float:
    """
    Y = (log p)^(1/4), the choice that makes epsilon_hat(p) -> 0.
    """
    return math.log(p) ** 0.25


def epsilon_hat(p: int, y: float | None = None) -> Fraction:
    if p < 5:
        raise PreconditionError(f"epsilon_hat needs p >= 5, got {p}.")
    if y is None:
        y = default_pair_parameter(p)
    if y < 1:
        raise PreconditionError(f"The pair parameter Y must be at least 1, got {y}.")

    return _epsilon_from_count(prime_pi(math.floor(y)))


def epsilon_sharp(p: int, n: int) -> Fraction:
    """
    n-aware version of epsilon(p): the exact proportion of residue classes that
    are rootless at no more than one prime q <= Y, Y^4 < p.
    """
    _require_degree(n)
    densities = [rootless_density(q, n) for q in primes_upto(fourth_root_floor(p))]

    return at_most_one_rootless(densities)


def at_most_one_rootless(densities: Iterable[Fraction]) -> Fraction:
    values = list(densities)
    none = Fraction(1)
    for c in values:
        none *= 1 - c

    exactly_one = Fraction(0)
    for j, c in enumerate(values):
        term = c
        for i, other in enumerate(values):
            if i != j:
                term *= 1 - other
        exactly_one += term

    return none + exactly_one


@dataclass(frozen=True)
class DensityReport:
    p: int
    n: int
    A: int
    C: Fraction
    E: Fraction
    bounds: RationalInterval | None
    epsilon: Fraction
    epsilon_hat: Fraction | None
    epsilon_sharp: Fraction
    epsilon_vacuous: bool


def density_report(p: int, n: int) -> DensityReport:
    """
    Every local density and effective bound for one (p, n).
    """
    require_prime(p)
    _require_degree(n)

    bounds = None
    if n >= 2:
        bounds = RationalInterval(*density_bounds(p, n))
    eps = epsilon(p)

    return DensityReport(
        p=p,
        n=n,
        A=count_rootless(p, n),
        C=rootless_density(p, n),
        E=eisenstein_density(p, n),
        bounds=bounds,
        epsilon=eps,
        epsilon_hat=epsilon_hat(p) if p >= 5 else None,
        epsilon_sharp=epsilon_sharp(p, n),
        epsilon_vacuous=eps >= 1,
    )


def _epsilon_from_count(t: int) -> Fraction:
    return (1 + t) * Fraction(3, 4) ** t


def _require_degree(n: int) -> None:
    if n < 1:
        raise PreconditionError(f"Expected a degree n >= 1, got {n}.")
