from __future__ import annotations

import math
import time

from collections import Counter
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from itertools import count
from typing import TYPE_CHECKING
from typing import Any
from typing import ClassVar

import numpy as np

from cleo.io.null_io import NullIO
from sympy import isprime

from heilbronn_survey import __version__
from heilbronn_survey.criterion import DEFAULT_PAIR_BOUND
from heilbronn_survey.criterion import criterion_primes
from heilbronn_survey.criterion import residue_order
from heilbronn_survey.criterion import theorem2_hypothesis
from heilbronn_survey.criterion import verdict_for_rootless
from heilbronn_survey.densities import eisenstein_density
from heilbronn_survey.densities import epsilon
from heilbronn_survey.densities import epsilon_hat
from heilbronn_survey.densities import epsilon_sharp
from heilbronn_survey.densities import require_prime
from heilbronn_survey.densities import rootless_density
from heilbronn_survey.exceptions import HeilbronnError
from heilbronn_survey.exceptions import PreconditionError
from heilbronn_survey.polynomial import MonicIntPolynomial
from heilbronn_survey.walker import INT64_SAFE_BOUND
from heilbronn_survey.walker import EisensteinBox
from heilbronn_survey.walker import count_patterns
from heilbronn_survey.walker import primes_of
from heilbronn_survey.walker import require_within_cap
from heilbronn_survey.walker import rootless_matrix


if TYPE_CHECKING:
    from collections.abc import Iterable
    from collections.abc import Sequence

    from cleo.io.io import IO
    from numpy.typing import NDArray


DEFAULT_ENUMERATION_CAP = 10**8

#: Size limit of the box (2km)^n below which aligned counts are also enumerated.
ALIGNED_ENUMERATION_LIMIT = 10**8

#: Explicit constant standing in for the O-term of the box count.
ERROR_CONSTANT = 4

#: Largest number of criterion primes for which the main-term density is summed
#: over all rootless patterns.
MAIN_TERM_PRIME_LIMIT = 16

#: Theorem 1's unconditional lower bound C_2(n) C_3(n) for odd n >= 3.
TWO_TWENTY_SEVENTHS = Fraction(2, 27)

MODE_EXHAUSTIVE = "exhaustive"
MODE_MONTECARLO = "mc"


@dataclass(frozen=True)
class LocalSpec:
    """
    Local conditions on p-Eisenstein polynomials of degree n: no root modulo
    every q in ``rootless_at``, at least one root modulo every q in ``rooted_at``.
    """

    p: int
    n: int
    rootless_at: tuple[int, ...] = ()
    rooted_at: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rootless_at", tuple(sorted(set(self.rootless_at))))
        object.__setattr__(self, "rooted_at", tuple(sorted(set(self.rooted_at))))
        require_prime(self.p)
        if self.n < 1:
            raise PreconditionError(f"Expected a degree n >= 1, got {self.n}.")
        if set(self.rootless_at) & set(self.rooted_at):
            raise PreconditionError(
                "A prime cannot be both rootless and rooted:"
                f" {sorted(set(self.rootless_at) & set(self.rooted_at))}."
            )
        for q in self.primes:
            require_prime(q, "q")
            if q >= self.p:
                raise PreconditionError(
                    f"Local primes must be below p={self.p}, got {q}."
                )

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted(self.rootless_at + self.rooted_at))

    @property
    def modulus(self) -> int:
        return self.p * self.p * math.prod(self.primes)

    def density(self) -> Fraction:
        density = eisenstein_density(self.p, self.n)
        for q in self.rootless_at:
            density *= rootless_density(q, self.n)
        for q in self.rooted_at:
            density *= 1 - rootless_density(q, self.n)

        return density

    def accepts(self, rootless: Iterable[int]) -> bool:
        found = set(rootless)
        return found.issuperset(self.rootless_at) and not found & set(self.rooted_at)


@dataclass(frozen=True)
class AlignedCount:
    JSON_PROPERTIES: ClassVar[tuple[str, ...]] = ("verified",)

    spec: LocalSpec
    k: int
    modulus: int
    formula: int
    enumerated: int | None

    @property
    def verified(self) -> bool:
        return self.enumerated is not None

    @property
    def count(self) -> int:
        return self.formula


@dataclass(frozen=True)
class BoxCount:
    spec: LocalSpec
    X: int
    exact: int
    main_term: Fraction
    error_bound: int


@dataclass(frozen=True)
class LowerBoundReport:
    JSON_PROPERTIES: ClassVar[tuple[str, ...]] = ("bound",)

    p: int
    n: int
    g: int
    gcd_ok: bool
    bound_T1: Fraction | None
    bound_T2: Fraction
    t2_hypothesis: bool
    epsilon: Fraction
    epsilon_hat: Fraction
    epsilon_sharp: Fraction
    epsilon_vacuous: bool
    epsilon_hat_vacuous: bool

    @property
    def bound(self) -> Fraction:
        return self.bound_T1 if self.bound_T1 is not None else self.bound_T2


@dataclass(frozen=True)
class SurveyReport:
    """
    Outcome of one density experiment: how many p-Eisenstein polynomials of
    degree n and height at most X the criterion applies to.
    """

    p: int
    n: int
    X: int
    X_used: int
    pair_bound: int
    mode: str
    total_eisenstein: int
    applies_count: int
    delta: Fraction
    theoretical_lower_bound: Fraction
    main_term_density: Fraction | None = None
    epsilon: Fraction | None = None
    standard_error: float | None = None
    seed: int | None = None
    samples: int | None = None
    alignment_modulus: int | None = None
    alignment_fallback: bool = False
    reasons: dict[str, int] = field(default_factory=dict)
    routes: dict[str, int] = field(default_factory=dict)
    config: dict[str, Any] = field(default_factory=dict)
    version: str = __version__
    wall_time: float = 0.0

    def __post_init__(self) -> None:
        if not 0 <= self.applies_count <= self.total_eisenstein:
            raise ValueError(
                f"applies_count={self.applies_count} outside"
                f" [0, {self.total_eisenstein}]."
            )


def main_term(spec: LocalSpec, X: int) -> Fraction:
    if X < 1:
        raise PreconditionError(f"The height bound X must be positive, got {X}.")

    return spec.density() * (2 * X) ** spec.n


def error_bound(spec: LocalSpec, X: int) -> int:
    n = spec.n
    return ERROR_CONSTANT * n * 2**n * spec.modulus * (2 * X) ** (n - 1)


def count_box(
    spec: LocalSpec,
    X: int,
    threads: int = 1,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> int:
    """
    Number of p-Eisenstein tuples in (-X, X]^n satisfying the local conditions.
    """
    box = EisensteinBox(spec.p, spec.n, X)
    require_within_cap(box, enumeration_cap)
    patterns = count_patterns(box, spec.primes, threads=threads)

    return sum(
        total
        for pattern, total in patterns.items()
        if spec.accepts(primes_of(pattern, spec.primes))
    )


def box_count(
    spec: LocalSpec,
    X: int,
    threads: int = 1,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> BoxCount:
    return BoxCount(
        spec=spec,
        X=X,
        exact=count_box(spec, X, threads=threads, enumeration_cap=enumeration_cap),
        main_term=main_term(spec, X),
        error_bound=error_bound(spec, X),
    )


def exact_count_aligned(
    spec: LocalSpec,
    k: int,
    threads: int = 1,
    enumeration_limit: int = ALIGNED_ENUMERATION_LIMIT,
) -> AlignedCount:
    """
    Count the tuples of (-km, km]^n, m = p^2 prod q, satisfying the spec: once
    from the product of local densities, and once by enumeration when the box
    is small enough. The two counts must agree.
    """
    if k < 1:
        raise PreconditionError(f"Expected k >= 1, got {k}.")

    m = spec.modulus
    side = 2 * k * m
    exact = spec.density() * side**spec.n
    if exact.denominator != 1:
        raise CountMismatchError(f"Density count {exact} is not an integer.")
    formula = exact.numerator

    enumerated = None
    if side**spec.n <= enumeration_limit:
        enumerated = count_box(
            spec, k * m, threads=threads, enumeration_cap=side**spec.n
        )
        if enumerated != formula:
            raise CountMismatchError(
                f"Enumeration found {enumerated} tuples but the local densities"
                f" predict {formula} for {spec} with k={k}."
            )

    return AlignedCount(spec, k, m, formula, enumerated)


def lower_bound_report(p: int, n: int) -> LowerBoundReport:
    require_prime(p)
    if p < 5:
        raise PreconditionError(f"Expected a prime p >= 5, got {p}.")
    if n < 2:
        raise PreconditionError(f"Surveys need n >= 2, got {n}.")

    g = residue_order(p, n)
    eps = epsilon(p)
    eps_hat = epsilon_hat(p)

    bound_t1 = None
    if n % 2 == 1 and g == 1:
        bound_t1 = max(TWO_TWENTY_SEVENTHS, _clamp(1 - eps))

    return LowerBoundReport(
        p=p,
        n=n,
        g=g,
        gcd_ok=g == 1,
        bound_T1=bound_t1,
        bound_T2=_clamp(1 - eps_hat),
        t2_hypothesis=theorem2_hypothesis(p, n),
        epsilon=eps,
        epsilon_hat=eps_hat,
        epsilon_sharp=epsilon_sharp(p, n),
        epsilon_vacuous=eps >= 1,
        epsilon_hat_vacuous=eps_hat >= 1,
    )


def main_term_density(p: int, n: int, pair_bound: int) -> Fraction | None:
    """
    Limiting proportion of the criterion's successes predicted by the local
    densities, summed over every pattern of root-free primes.
    """
    primes = criterion_primes(p, pair_bound)
    if len(primes) > MAIN_TERM_PRIME_LIMIT:
        return None

    densities = [rootless_density(q, n) for q in primes]
    total = Fraction(0)
    for pattern in range(1 << len(primes)):
        rootless = primes_of(pattern, primes)
        if not verdict_for_rootless(p, n, rootless, pair_bound).applies:
            continue
        weight = Fraction(1)
        for j, c in enumerate(densities):
            weight *= c if pattern >> j & 1 else 1 - c
        total += weight

    return total


def exhaustive_survey(
    p: int,
    n: int,
    X: int,
    pair_bound: int = DEFAULT_PAIR_BOUND,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
    threads: int = 1,
    config: dict[str, Any] | None = None,
    io: IO | None = None,
) -> SurveyReport:
    io = io or NullIO()
    _require_survey(p, n)
    started = time.perf_counter()

    box = EisensteinBox(p, n, X)
    if box.size == 0:
        raise PreconditionError(
            f"The box (-{X}, {X}]^{n} holds no {p}-Eisenstein tuples;"
            f" X must be at least p={p}."
        )
    require_within_cap(box, enumeration_cap)
    primes = criterion_primes(p, pair_bound)
    if io.is_verbose():
        io.write_error_line(
            f"<comment>Enumerating {box.size} Eisenstein tuples over"
            f" {threads} worker(s), criterion primes {list(primes)}</comment>"
        )

    patterns = count_patterns(box, primes, threads=threads)
    applies, reasons, routes = _tally(p, n, pair_bound, primes, patterns)
    _log_timing(io, started)

    return SurveyReport(
        p=p,
        n=n,
        X=X,
        X_used=X,
        pair_bound=pair_bound,
        mode=MODE_EXHAUSTIVE,
        total_eisenstein=box.size,
        applies_count=applies,
        delta=Fraction(applies, box.size),
        theoretical_lower_bound=lower_bound_report(p, n).bound,
        main_term_density=main_term_density(p, n, pair_bound),
        epsilon=epsilon(p),
        reasons=reasons,
        routes=routes,
        config=dict(config or {}),
        wall_time=time.perf_counter() - started,
    )


def sampling_modulus(p: int, X: int, pair_bound: int) -> tuple[int, bool]:
    """
    The alignment modulus for sampling and whether it had to fall back to p^2.
    """
    full = p * p * math.prod(criterion_primes(p, pair_bound))
    if X >= full:
        return full, False
    if X >= p * p:
        return p * p, True

    raise PreconditionError(
        f"Monte Carlo sampling needs X >= p^2 = {p * p}, got X={X}."
    )


def sample_columns(
    p: int, n: int, half_width: int, samples: int, seed: int
) -> list[NDArray[Any]]:
    """
    Draw ``samples`` coefficient tuples uniformly from the p-Eisenstein tuples of
    (-half_width, half_width]^n; half_width must be a multiple of p^2.
    Column i holds the a_i of every sample.
    """
    if samples < 1:
        raise PreconditionError(
            f"Expected a positive number of samples, got {samples}."
        )

    if half_width >= INT64_SAFE_BOUND:
        raise PreconditionError(
            f"X={half_width} is too large for fixed-width sampling at p={p}."
        )

    k = half_width // p
    rng = np.random.Generator(np.random.PCG64(seed & 0xFFFFFFFFFFFFFFFF))
    # a_0 = p*k with k in (-K, K] not divisible by p: index the p - 1 units in each
    # block of p consecutive k
    j = rng.integers(0, 2 * k // p * (p - 1), size=samples, dtype=np.int64)
    constant = (-k + (j // (p - 1)) * p + 1 + j % (p - 1)) * p
    columns = [constant]
    for _ in range(1, n):
        columns.append(rng.integers(-k + 1, k + 1, size=samples, dtype=np.int64) * p)

    return columns


def sample_polynomials(
    p: int,
    n: int,
    X: int,
    samples: int,
    seed: int,
    pair_bound: int = DEFAULT_PAIR_BOUND,
) -> list[MonicIntPolynomial]:
    modulus, _ = sampling_modulus(p, X, pair_bound)
    columns = sample_columns(p, n, modulus * (X // modulus), samples, seed)
    rows = np.stack(columns, axis=1).tolist()

    return [MonicIntPolynomial(row) for row in rows]


def montecarlo_survey(
    p: int,
    n: int,
    X: int,
    pair_bound: int = DEFAULT_PAIR_BOUND,
    seed: int = 0,
    samples: int = 10**4,
    config: dict[str, Any] | None = None,
    io: IO | None = None,
) -> SurveyReport:
    io = io or NullIO()
    _require_survey(p, n)
    if samples < 1:
        raise PreconditionError(
            f"Expected a positive number of samples, got {samples}."
        )
    started = time.perf_counter()

    modulus, fallback = sampling_modulus(p, X, pair_bound)
    half_width = modulus * (X // modulus)
    if fallback:
        io.write_error_line(
            f"<warning>X={X} is below the full alignment modulus; sampling is aligned"
            f" to p^2={modulus} only and the root conditions are nearly, not exactly,"
            " uniform.</warning>"
        )
    if io.is_verbose():
        io.write_error_line(
            f"<comment>Sampling {samples} tuples from (-{half_width}, {half_width}]^{n}"
            f" with seed {seed}</comment>"
        )

    primes = criterion_primes(p, pair_bound)
    columns = sample_columns(p, n, half_width, samples, seed)
    values, totals = np.unique(rootless_matrix(columns, primes), return_counts=True)
    patterns = Counter(dict(zip(values.tolist(), totals.tolist())))
    applies, reasons, routes = _tally(p, n, pair_bound, primes, patterns)
    _log_timing(io, started)

    estimate = Fraction(applies, samples)
    return SurveyReport(
        p=p,
        n=n,
        X=X,
        X_used=half_width,
        pair_bound=pair_bound,
        mode=MODE_MONTECARLO,
        total_eisenstein=samples,
        applies_count=applies,
        delta=estimate,
        theoretical_lower_bound=lower_bound_report(p, n).bound,
        main_term_density=main_term_density(p, n, pair_bound),
        epsilon=epsilon(p),
        standard_error=math.sqrt(float(estimate * (1 - estimate)) / samples),
        seed=seed,
        samples=samples,
        alignment_modulus=modulus,
        alignment_fallback=fallback,
        reasons=reasons,
        routes=routes,
        config=dict(config or {}),
        wall_time=time.perf_counter() - started,
    )


def corollary_prime(n: int, start: int = 5) -> int:
    """
    Least prime p >= start with p = -1 (mod 2n), for which gcd(p - 1, n) = 2
    when n is even.
    """
    if n < 1:
        raise PreconditionError(f"Expected n >= 1, got {n}.")

    for k in count(1):
        p = 2 * n * k - 1
        if p >= start and isprime(p):
            return p

    raise AssertionError("unreachable")


def _tally(
    p: int,
    n: int,
    pair_bound: int,
    primes: Sequence[int],
    patterns: Counter[int],
) -> tuple[int, dict[str, int], dict[str, int]]:
    applies = 0
    reasons: Counter[str] = Counter()
    routes: Counter[str] = Counter()
    for pattern, total in sorted(patterns.items()):
        verdict = verdict_for_rootless(p, n, primes_of(pattern, primes), pair_bound)
        if verdict.witness is not None:
            applies += total
            routes[verdict.witness.route.value] += total
        elif verdict.reason is not None:
            reasons[verdict.reason.value] += total

    return applies, dict(sorted(reasons.items())), dict(sorted(routes.items()))


def _log_timing(io: IO, started: float) -> None:
    if io.is_very_verbose():
        io.write_error_line(
            f"<comment>Classified patterns in"
            f" {time.perf_counter() - started:.3f}s</comment>"
        )


def _require_survey(p: int, n: int) -> None:
    require_prime(p)
    if p < 5:
        raise PreconditionError(f"Surveys need p >= 5, got {p}.")
    if n < 2:
        raise PreconditionError(f"Surveys need n >= 2, got {n}.")


def _clamp(value: Fraction) -> Fraction:
    return min(Fraction(1), max(Fraction(0), value))


class CountMismatchError(HeilbronnError):
    pass
