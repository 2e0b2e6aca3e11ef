from __future__ import annotations

import math

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import TYPE_CHECKING
from typing import ClassVar

from heilbronn_survey.decomposition import Decomposition
from heilbronn_survey.decomposition import adjust_for_criterion
from heilbronn_survey.decomposition import decompositions
from heilbronn_survey.decomposition import frobenius_decompose
from heilbronn_survey.densities import primes_upto
from heilbronn_survey.densities import require_prime
from heilbronn_survey.exceptions import HeilbronnError
from heilbronn_survey.exceptions import PreconditionError
from heilbronn_survey.polynomial import has_root_mod
from heilbronn_survey.polynomial import is_eisenstein_at


if TYPE_CHECKING:
    from collections.abc import Iterable
    from collections.abc import Iterator

    from heilbronn_survey.polynomial import MonicIntPolynomial


DEFAULT_PAIR_BOUND = 20

#: Recorded with every verdict: the recipe treats a root-free reduction at q1 and
#: q2 as enough for u*q1 and -v*q2 to be non-norms.
NON_NORM_ASSUMPTION = (
    "q1 and q2 are non-norms because f has no root modulo either; a = u*q1 and"
    " -b = -v*q2 are then taken to be non-norms as well"
)


class Route(str, Enum):
    THEOREM1 = "theorem1"
    THEOREM2 = "theorem2"
    DIRECT_SCAN = "direct-scan"


class InconclusiveReason(str, Enum):
    NO_PRIME_PAIR = "no-prime-pair"
    ALL_PAIRS_HAVE_ROOTS = "all-pairs-have-roots"
    NO_RESIDUE_ADMISSIBLE_U = "no-residue-admissible-u"
    P_TOO_SMALL = "p-too-small"


# When pairs fail for different reasons the verdict reports the one that got furthest.
_REASON_PRIORITY = (
    InconclusiveReason.NO_RESIDUE_ADMISSIBLE_U,
    InconclusiveReason.P_TOO_SMALL,
    InconclusiveReason.ALL_PAIRS_HAVE_ROOTS,
    InconclusiveReason.NO_PRIME_PAIR,
)


@dataclass(frozen=True)
class HeilbronnWitness:
    p: int
    n: int
    q1: int
    q2: int
    u: int
    v: int
    a: int
    b: int
    g: int
    route: Route = Route.THEOREM1
    adjusted: bool = False

    @classmethod
    def from_decomposition(
        cls,
        d: Decomposition,
        n: int,
        route: Route = Route.THEOREM1,
        adjusted: bool = False,
    ) -> HeilbronnWitness:
        return cls(
            p=d.p,
            n=n,
            q1=d.q1,
            q2=d.q2,
            u=d.u,
            v=d.v,
            a=d.a,
            b=d.b,
            g=residue_order(d.p, n),
            route=route,
            adjusted=adjusted,
        )


@dataclass(frozen=True)
class HeilbronnVerdict:
    """
    Either a witness that Heilbronn's criterion applies, or the reason the
    pairwise search came back empty. An inconclusive verdict says nothing about
    the field itself.
    """

    JSON_PROPERTIES: ClassVar[tuple[str, ...]] = ("applies",)

    p: int
    n: int
    pair_bound: int
    rootless: tuple[int, ...]
    witness: HeilbronnWitness | None = None
    reason: InconclusiveReason | None = None
    residue_rechecked: bool = False
    assumption: str = NON_NORM_ASSUMPTION

    def __post_init__(self) -> None:
        if (self.witness is None) == (self.reason is None):
            raise ValueError("A verdict carries exactly one of a witness or a reason.")

    @property
    def applies(self) -> bool:
        return self.witness is not None


@dataclass(frozen=True)
class Theorem2Search:
    p: int
    n: int
    q1: int
    q2: int
    X: Fraction
    witness: Decomposition | None
    reason: InconclusiveReason | None
    adjusted: bool = False
    residue_rechecked: bool = False


@dataclass(frozen=True)
class Theorem2Report:
    """
    Exact count of admissible u next to its predicted main term and the
    Polya-Vinogradov error allowance.
    """

    JSON_PROPERTIES: ClassVar[tuple[str, ...]] = ("within_error",)

    p: int
    n: int
    q1: int
    q2: int
    g: int
    X: Fraction
    count: int
    main: float
    error: float
    pv_constant: float
    witness: Decomposition | None
    reason: InconclusiveReason | None
    adjusted: bool = False
    residue_rechecked: bool = False

    @property
    def within_error(self) -> bool:
        return abs(self.count - self.main) <= self.error


@dataclass(frozen=True)
class GcdCondition:
    g: int
    bound: float
    holds: bool
    hypothesis_bound: float
    hypothesis: bool


def residue_order(p: int, n: int) -> int:
    if p < 3:
        raise PreconditionError(f"Expected an odd prime p, got {p}.")
    if n < 1:
        raise PreconditionError(f"Expected a degree n >= 1, got {n}.")

    return math.gcd(p - 1, n)


def is_nth_power_residue(a: int, p: int, n: int) -> bool:
    if a % p == 0:
        raise PreconditionError(f"p={p} divides a={a}.")

    g = residue_order(p, n)
    if g == 1:
        return True

    return pow(a % p, (p - 1) // g, p) == 1


def residue_count(p: int, n: int) -> int:
    return (p - 1) // residue_order(p, n)


def theorem2_range(p: int, q1: int, q2: int) -> Fraction:
    """
    The bound X = p/q1 - 2*q2 on u, which keeps u + 2*q2 below p/q1.
    """
    return Fraction(p, q1) - 2 * q2


def admissible_us(p: int, n: int, q1: int, q2: int) -> Iterator[int]:
    """
    The u < X with gcd(u, q1) = 1, q1*u = p (mod q2) and u*q1 an n-th power
    residue modulo p, ascending.
    """
    _require_theorem2_pair(p, q1, q2)

    bound = theorem2_range(p, q1, q2)
    target = p % q2
    for u in range(1, math.ceil(bound)):
        if u % q1 == 0 or (q1 * u) % q2 != target:
            continue
        if is_nth_power_residue(u * q1, p, n):
            yield u


def count_admissible(p: int, n: int, q1: int, q2: int) -> int:
    return sum(1 for _ in admissible_us(p, n, q1, q2))


def theorem2_search(p: int, n: int, q1: int, q2: int) -> Theorem2Search:
    bound = theorem2_range(p, q1, q2)
    if bound <= 1:
        _require_theorem2_pair(p, q1, q2)
        return Theorem2Search(
            p, n, q1, q2, bound, None, InconclusiveReason.P_TOO_SMALL
        )

    rechecked = False
    for u in admissible_us(p, n, q1, q2):
        v = (p - u * q1) // q2
        adjusted = adjust_for_criterion(Decomposition(p, q1, q2, u, v))
        if adjusted.u != u and not is_nth_power_residue(adjusted.a, p, n):
            # the shifted a' lost the residue property: keep scanning
            rechecked = True
            continue

        return Theorem2Search(
            p,
            n,
            q1,
            q2,
            bound,
            adjusted.verify(),
            None,
            adjusted=adjusted.u != u,
            residue_rechecked=rechecked,
        )

    return Theorem2Search(
        p,
        n,
        q1,
        q2,
        bound,
        None,
        InconclusiveReason.NO_RESIDUE_ADMISSIBLE_U,
        residue_rechecked=rechecked,
    )


def theorem2_witness(p: int, n: int, q1: int, q2: int) -> tuple[int, int] | None:
    witness = theorem2_search(p, n, q1, q2).witness
    if witness is None:
        return None

    return witness.u, witness.v


def main_term_and_error(
    p: int, n: int, q1: int, q2: int, pv_constant: float = 1.0
) -> tuple[float, float]:
    """
    Expected number of admissible u < X and the Polya-Vinogradov error for
    the modulus m = p*q1*q2.
    """
    g = residue_order(p, n)
    bound = p / q1 - 2 * q2
    main = bound * (q1 - 1) / q1 / q2 / g
    m = p * q1 * q2

    return main, pv_constant * math.sqrt(m) * math.log(m)


def theorem2_report(
    p: int, n: int, q1: int, q2: int, pv_constant: float = 1.0
) -> Theorem2Report:
    search = theorem2_search(p, n, q1, q2)
    main, error = main_term_and_error(p, n, q1, q2, pv_constant)

    return Theorem2Report(
        p=p,
        n=n,
        q1=q1,
        q2=q2,
        g=residue_order(p, n),
        X=search.X,
        count=count_admissible(p, n, q1, q2),
        main=main,
        error=error,
        pv_constant=pv_constant,
        witness=search.witness,
        reason=search.reason,
        adjusted=search.adjusted,
        residue_rechecked=search.residue_rechecked,
    )


def gcd_condition(p: int, n: int, y: float, pv_constant: float = 1.0) -> GcdCondition:
    if p < 5:
        raise PreconditionError(f"Expected a prime p >= 5, got {p}.")
    if y < 2:
        raise PreconditionError(f"The pair parameter Y must be at least 2, got {y}.")

    g = residue_order(p, n)
    root_p = math.sqrt(p)
    bound = root_p / (2 * pv_constant * y**3 * math.log(p * y * y)) - 1 / (
        pv_constant * root_p * math.log(p)
    )
    hypothesis_bound = root_p / math.log(p) ** 2

    return GcdCondition(
        g=g,
        bound=bound,
        holds=g < bound,
        hypothesis_bound=hypothesis_bound,
        hypothesis=g < hypothesis_bound,
    )


def gcd_condition_holds(p: int, n: int, y: float, pv_constant: float = 1.0) -> bool:
    return gcd_condition(p, n, y, pv_constant).holds


def theorem2_hypothesis(p: int, n: int) -> bool:
    return residue_order(p, n) < math.sqrt(p) / math.log(p) ** 2


def criterion_primes(p: int, pair_bound: int) -> tuple[int, ...]:
    return primes_upto(min(pair_bound, p - 1))


def prime_pairs(p: int, pair_bound: int) -> Iterator[tuple[int, int]]:
    yield from combinations(criterion_primes(p, pair_bound), 2)


def criterion_verdict(
    f: MonicIntPolynomial, p: int, pair_bound: int = DEFAULT_PAIR_BOUND
) -> HeilbronnVerdict:
    require_prime(p)
    if p < 5:
        raise PreconditionError(
            f"Heilbronn's criterion never applies for p={p}; expected p >= 5."
        )
    if not is_eisenstein_at(f, p):
        raise PreconditionError(f"x^{f.degree} + ... ({f}) is not {p}-Eisenstein.")

    rootless = tuple(
        q for q in criterion_primes(p, pair_bound) if not has_root_mod(f, q)
    )

    return verdict_for_rootless(p, f.degree, rootless, pair_bound)


@lru_cache(maxsize=4096)
def verdict_for_rootless(
    p: int, n: int, rootless: tuple[int, ...], pair_bound: int
) -> HeilbronnVerdict:
    """
    The verdict for any p-Eisenstein polynomial of degree n whose set of
    root-free primes q <= min(pair_bound, p - 1) is exactly ``rootless``.
    """
    g = residue_order(p, n)
    root_free = set(rootless)
    failures: set[InconclusiveReason] = set()
    rechecked = False

    for q1, q2 in prime_pairs(p, pair_bound):
        first = _first_decomposition(p, q1, q2)
        if first is None:
            failures.add(InconclusiveReason.NO_PRIME_PAIR)
            continue
        if q1 not in root_free or q2 not in root_free:
            failures.add(InconclusiveReason.ALL_PAIRS_HAVE_ROOTS)
            continue

        if g == 1:
            witness = HeilbronnWitness.from_decomposition(first, n)
            return HeilbronnVerdict(p, n, pair_bound, rootless, witness=witness)

        search = theorem2_search(p, n, q1, q2)
        rechecked = rechecked or search.residue_rechecked
        if search.witness is not None:
            witness = HeilbronnWitness.from_decomposition(
                search.witness, n, route=Route.THEOREM2, adjusted=search.adjusted
            )
            return HeilbronnVerdict(
                p, n, pair_bound, rootless, witness=witness, residue_rechecked=rechecked
            )

        for d in _residue_decompositions(p, n, q1, q2):
            witness = HeilbronnWitness.from_decomposition(d, n, route=Route.DIRECT_SCAN)
            return HeilbronnVerdict(
                p, n, pair_bound, rootless, witness=witness, residue_rechecked=rechecked
            )

        failures.add(search.reason or InconclusiveReason.NO_RESIDUE_ADMISSIBLE_U)

    return HeilbronnVerdict(
        p,
        n,
        pair_bound,
        rootless,
        reason=_dominant_reason(failures),
        residue_rechecked=rechecked,
    )


def witness_problems(f: MonicIntPolynomial, witness: HeilbronnWitness) -> list[str]:
    """
    Re-derive every witness property from f and modular arithmetic alone.
    """
    w = witness
    problems = []
    if f.degree != w.n:
        problems.append(f"degree {f.degree} != n={w.n}")
    if not is_eisenstein_at(f, w.p):
        problems.append(f"f is not {w.p}-Eisenstein")
    if w.a != w.u * w.q1 or w.b != w.v * w.q2:
        problems.append("a, b do not match u*q1, v*q2")
    if w.a + w.b != w.p:
        problems.append(f"a + b = {w.a + w.b} != p={w.p}")
    if w.u < 1 or w.v < 1:
        problems.append("u and v must be positive")
    if math.gcd(w.u, w.q1) != 1 or math.gcd(w.v, w.q2) != 1:
        problems.append("coprimality of (u, q1) or (v, q2) fails")
    if w.g != math.gcd(w.p - 1, w.n):
        problems.append(f"g={w.g} != gcd(p-1, n)")
    if w.a % w.p == 0 or pow(w.a, (w.p - 1) // w.g, w.p) != 1:
        problems.append(f"a={w.a} is not an n-th power residue mod {w.p}")
    for q in (w.q1, w.q2):
        if has_root_mod(f, q):
            problems.append(f"f has a root modulo q={q}")

    return problems


def verify_witness(f: MonicIntPolynomial, witness: HeilbronnWitness) -> None:
    problems = witness_problems(f, witness)
    if problems:
        raise WitnessError(f"Invalid witness {witness}: {'; '.join(problems)}.")


@lru_cache(maxsize=None)
def _first_decomposition(p: int, q1: int, q2: int) -> Decomposition | None:
    return frobenius_decompose(p, q1, q2)


def _residue_decompositions(
    p: int, n: int, q1: int, q2: int
) -> Iterator[Decomposition]:
    for d in decompositions(p, q1, q2):
        if is_nth_power_residue(d.a, p, n):
            yield d


def _dominant_reason(failures: Iterable[InconclusiveReason]) -> InconclusiveReason:
    seen = set(failures)
    for reason in _REASON_PRIORITY:
        if reason in seen:
            return reason

    return InconclusiveReason.NO_PRIME_PAIR


def _require_theorem2_pair(p: int, q1: int, q2: int) -> None:
    if not q1 < q2 < p:
        raise PreconditionError(f"Expected q1 < q2 < p, got q1={q1}, q2={q2}, p={p}.")
    require_prime(q1, "q1")
    require_prime(q2, "q2")
    require_prime(p, "p")


class WitnessError(HeilbronnError):
    pass
