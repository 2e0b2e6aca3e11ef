from __future__ import annotations

import itertools
import math
import time

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from heilbronn_survey.criterion import count_admissible
from heilbronn_survey.criterion import criterion_primes
from heilbronn_survey.criterion import criterion_verdict
from heilbronn_survey.criterion import is_nth_power_residue
from heilbronn_survey.criterion import main_term_and_error
from heilbronn_survey.criterion import theorem2_search
from heilbronn_survey.criterion import verdict_for_rootless
from heilbronn_survey.criterion import verify_witness
from heilbronn_survey.decomposition import frobenius_decompose
from heilbronn_survey.densities import count_rootless
from heilbronn_survey.densities import count_rootless_closed_form
from heilbronn_survey.densities import dubickas_density
from heilbronn_survey.densities import eisenstein_density
from heilbronn_survey.densities import epsilon
from heilbronn_survey.densities import primes_upto
from heilbronn_survey.densities import rootless_density
from heilbronn_survey.exceptions import HeilbronnError
from heilbronn_survey.polynomial import MonicIntPolynomial
from heilbronn_survey.survey import LocalSpec
from heilbronn_survey.survey import corollary_prime
from heilbronn_survey.survey import exact_count_aligned
from heilbronn_survey.survey import exhaustive_survey
from heilbronn_survey.survey import lower_bound_report
from heilbronn_survey.survey import main_term
from heilbronn_survey.survey import montecarlo_survey
from heilbronn_survey.survey import sample_columns
from heilbronn_survey.walker import primes_of
from heilbronn_survey.walker import rootless_matrix


if TYPE_CHECKING:
    from collections.abc import Callable
    from collections.abc import Iterable
    from collections.abc import Iterator


@dataclass(frozen=True)
class OracleResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


@dataclass(frozen=True)
class OracleCheck:
    """
    A named brute-force check. ``run`` takes the ``full`` flag, returns a short
    summary and raises ``OracleFailure`` on a mismatch.
    """

    name: str
    description: str
    run: Callable[[bool], str]


def naive_has_root(coeffs: Iterable[int], q: int) -> bool:
    values = list(coeffs)
    n = len(values)

    return any(
        (r**n + sum(c * r**i for i, c in enumerate(values))) % q == 0 for r in range(q)
    )


def naive_rootless_count(p: int, n: int) -> int:
    return sum(
        1
        for coeffs in itertools.product(range(p), repeat=n)
        if not naive_has_root(coeffs, p)
    )


def naive_residues(p: int, n: int) -> set[int]:
    return {pow(x, n, p) for x in range(1, p)}


def check_density_table(full: bool) -> str:
    for n in range(2, 9):
        _expect(rootless_density(2, n) == Fraction(1, 4), f"C_2({n}) != 1/4")
    for n in range(3, 9):
        _expect(rootless_density(3, n) == Fraction(8, 27), f"C_3({n}) != 8/27")
    _expect(rootless_density(5, 3) == Fraction(8, 25), "C_5(3) != 8/25")
    _expect(count_rootless(2, 2) == 1, "A_2(2) != 1")
    _expect(count_rootless(5, 3) == 40, "A_5(3) != 40")
    _expect(count_rootless(3, 5) == 72, "A_3(5) != 72")
    _expect(eisenstein_density(5, 3) == Fraction(4, 625), "E_5(3) != 4/625")
    _expect(eisenstein_density(2, 2) == Fraction(1, 8), "E_2(2) != 1/8")
    _expect(eisenstein_density(3, 1) == Fraction(2, 9), "E_3(1) != 2/9")
    _expect(dubickas_density(2, 2).lo == Fraction(1, 8), "Dubickas lo(2, 2) != 1/8")
    _expect(
        dubickas_density(2, 3).lo == Fraction(41, 216), "Dubickas lo(2, 3) != 41/216"
    )

    return "C_2 = 1/4, C_3 = 8/27, C_5(3) = 8/25"


def check_rootless_brute_force(full: bool) -> str:
    top = 6 if full else 4
    checked = 0
    for p in primes_upto(7):
        for n in range(1, top + 1):
            expected = naive_rootless_count(p, n)
            _expect(
                count_rootless(p, n) == expected,
                f"A_{p}({n}) = {count_rootless(p, n)}, brute force {expected}",
            )
            if n >= p:
                _expect(
                    count_rootless_closed_form(p, n) == expected,
                    f"closed form disagrees at p={p}, n={n}",
                )
            checked += 1

    return f"{checked} (p, n) pairs with p <= 7, n <= {top}"


def check_exceptional_primes(full: bool) -> str:
    top = 10**4 if full else 10**3
    exceptional = [p for p in primes_upto(35) if p > 3 and not _decomposes(p, 2, 3)]
    _expect(exceptional == [7, 11, 19], f"exceptional primes {exceptional}")
    for p in primes_upto(top):
        if p >= 36:
            _expect(_decomposes(p, 2, 3), f"no decomposition of {p} over (2, 3)")
    for q1, q2 in ((2, 5), (2, 7), (3, 5), (3, 7), (5, 7)):
        for p in primes_upto(top):
            if p >= q1 * q1 * q2 * q2:
                _expect(
                    _decomposes(p, q1, q2), f"no decomposition of {p} over {q1, q2}"
                )
    d = frobenius_decompose(37, 2, 3)
    _expect(d is not None and (d.u, d.v) == (11, 5), f"37 over (2, 3) gave {d}")

    return f"exceptions {{7, 11, 19}}; complete up to {top}"


def check_residues(full: bool) -> str:
    top = 97
    for p in primes_upto(top):
        if p < 3:
            continue
        for n in range(1, 11):
            residues = naive_residues(p, n)
            for a in range(1, p):
                _expect(
                    is_nth_power_residue(a, p, n) == (a in residues),
                    f"residue test wrong for a={a}, p={p}, n={n}",
                )
            _expect(
                len(residues) == (p - 1) // math.gcd(p - 1, n),
                f"residue count wrong for p={p}, n={n}",
            )

    return f"all a mod p for odd p <= {top}, n <= 10"


def check_criterion_examples(full: bool) -> str:
    verdict = criterion_verdict(MonicIntPolynomial((5, 5, 0)), 5, 3)
    w = verdict.witness
    _expect(
        w is not None
        and (w.q1, w.q2, w.u, w.v, w.a, w.b, w.g) == (2, 3, 1, 1, 2, 3, 1),
        f"x^3 + 5x + 5 at p=5 gave {verdict}",
    )
    verdict = criterion_verdict(MonicIntPolynomial((5, 5, 5)), 5, 3)
    _expect(
        verdict.reason is not None and verdict.reason.value == "all-pairs-have-roots",
        f"x^3 + 5x^2 + 5x + 5 at p=5 gave {verdict}",
    )
    verdict = criterion_verdict(MonicIntPolynomial((7, 7, 0)), 7, 3)
    _expect(
        verdict.reason is not None and verdict.reason.value == "no-prime-pair",
        f"x^3 + 7x + 7 at p=7 gave {verdict}",
    )

    return "p=5 witness (2, 3, 1, 1); p=7 without a (2, 3) pair"


def check_theorem2_examples(full: bool) -> str:
    _expect(count_admissible(101, 3, 2, 3) == 8, "count(101, 3, 2, 3) != 8")
    _expect(count_admissible(13, 2, 2, 3) == 0, "count(13, 2, 2, 3) != 0")
    search = theorem2_search(13, 2, 2, 3)
    _expect(
        search.witness is None and search.reason is not None
        and search.reason.value == "p-too-small",
        f"p=13 gave {search}",
    )

    squares = naive_residues(101, 2)
    expected = next(
        u
        for u in range(1, 45)
        if u % 2 == 1 and (2 * u) % 3 == 101 % 3 and (2 * u) % 101 in squares
    )
    search = theorem2_search(101, 2, 2, 3)
    _expect(
        search.witness is not None and search.witness.u == expected,
        f"p=101, n=2 gave {search}, expected u={expected}",
    )
    main, _ = main_term_and_error(101, 3, 2, 3)
    _expect(abs(main - 44.5 / 6) < 1e-12, f"main term {main} != 7.4166...")

    return f"p=101: count 8, minimal quadratic u={expected}"


def check_theorem2_main_term(full: bool) -> str:
    top = 10**4 if full else 2000
    tested = 0
    for p in primes_upto(top):
        if p <= 50:
            continue
        for n in (2, 3):
            for q1, q2 in ((2, 3), (2, 5), (3, 5)):
                if Fraction(p, q1) - 2 * q2 <= 2:
                    continue
                count = count_admissible(p, n, q1, q2)
                main, error = main_term_and_error(p, n, q1, q2)
                _expect(
                    abs(count - main) <= error,
                    f"|{count} - {main:.3f}| > {error:.3f} at p={p}, n={n}, {q1, q2}",
                )
                tested += 1

    return f"{tested} tuples with 50 < p < {top}"


def check_aligned_counts(full: bool) -> str:
    spec = LocalSpec(5, 3, rootless_at=(2, 3))
    aligned = exact_count_aligned(spec, 1)
    _expect(
        aligned.formula == 12800 and aligned.enumerated == 12800,
        f"aligned count {aligned}",
    )
    aligned = exact_count_aligned(LocalSpec(5, 3), 6)
    _expect(aligned.formula == 172800 and aligned.enumerated == 172800, f"{aligned}")
    rooted = main_term(LocalSpec(5, 3, rooted_at=(2,)), 150)
    _expect(rooted == 129600, f"rooted main term {rooted} != 129600")

    return "12800 of 172800 tuples by density and by enumeration"


def check_theorem1_density(full: bool) -> str:
    report = exhaustive_survey(5, 3, 150, pair_bound=3)
    _expect(report.total_eisenstein == 172800, f"total {report.total_eisenstein}")
    _expect(report.applies_count == 12800, f"applies {report.applies_count}")
    _expect(report.delta == Fraction(2, 27), f"delta {report.delta} != 2/27")

    report = exhaustive_survey(5, 3, 1000, pair_bound=3)
    gap = abs(float(report.delta) - 2 / 27)
    _expect(gap <= 0.005, f"|delta - 2/27| = {gap:.5f} at X=1000")

    return f"delta = 2/27 at X=150; gap {gap:.5f} at X=1000"


def check_effective_bound(full: bool) -> str:
    p = 10**8 + 7
    expected = 26 * Fraction(3, 4) ** 25
    _expect(epsilon(p) == expected, f"epsilon({p}) = {epsilon(p)}")
    report = lower_bound_report(p, 3)
    _expect(report.bound_T1 == 1 - expected, f"bound_T1 = {report.bound_T1}")
    _expect(
        lower_bound_report(5, 3).bound_T1 == Fraction(2, 27), "bound_T1(5, 3) != 2/27"
    )
    report = lower_bound_report(13, 12)
    _expect(report.g == 12 and not report.t2_hypothesis, f"p=13, n=12 gave {report}")

    return f"epsilon(10^8+7) ~ {float(expected):.6f}"


def check_witness_soundness(full: bool) -> str:
    samples = 10**5 if full else 2000
    cases = [(p, n) for p in (5, 7, 13, 101) for n in (3, 5)]
    per_case = samples // len(cases)
    checked = 0
    for index, (p, n) in enumerate(cases):
        primes = criterion_primes(p, 20)
        columns = sample_columns(p, n, p * p * 100, per_case, seed=index)
        patterns = rootless_matrix(columns, primes).tolist()
        rows = np.stack(columns, axis=1).tolist()
        for row, pattern in zip(rows, patterns):
            verdict = verdict_for_rootless(p, n, primes_of(pattern, primes), 20)
            if verdict.witness is None:
                continue
            f = MonicIntPolynomial(row)
            verify_witness(f, verdict.witness)
            for q in (verdict.witness.q1, verdict.witness.q2):
                _expect(not naive_has_root(row, q), f"{f} has a root modulo {q}")
            checked += 1
        # the vectorised patterns agree with the scalar path
        head = MonicIntPolynomial(rows[0])
        _expect(
            criterion_verdict(head, p, 20)
            == verdict_for_rootless(p, n, primes_of(patterns[0], primes), 20),
            f"vectorised and scalar verdicts differ for {head}",
        )

    return f"{checked} witnesses re-validated out of {per_case * len(cases)} samples"


def check_corollary(full: bool) -> str:
    n = 4
    p = corollary_prime(n)
    _expect(p == 7 and math.gcd(p - 1, n) == 2, f"corollary prime {p}")
    samples = 10**4 if full else 2000
    report = montecarlo_survey(p, n, 1470 * 100, pair_bound=20, seed=0, samples=samples)
    _expect(report.applies_count > 0, f"no witnesses among {samples} samples at p={p}")

    return f"p={p}: {report.applies_count} of {samples} samples"


def check_determinism(full: bool) -> str:
    samples = 10**4 if full else 1000
    first = montecarlo_survey(5, 3, 10**6, pair_bound=3, seed=42, samples=samples)
    second = montecarlo_survey(5, 3, 10**6, pair_bound=3, seed=42, samples=samples)
    _expect(
        _without_timing(first) == _without_timing(second), "seeded runs differ"
    )
    gap = abs(float(first.delta) - 2 / 27)
    _expect(
        gap <= 4 * (first.standard_error or 0) + 1e-12,
        f"estimate {float(first.delta):.5f} is {gap:.5f} away from 2/27",
    )

    return f"seed 42: {first.applies_count} of {samples}, identical twice"


CHECKS: tuple[OracleCheck, ...] = (
    OracleCheck("density-table", "exact local densities", check_density_table),
    OracleCheck(
        "rootless-brute-force",
        "inclusion-exclusion count against enumeration over F_p",
        check_rootless_brute_force,
    ),
    OracleCheck(
        "exceptional-primes",
        "decompositions over (2, 3) and completeness past q1^2 q2^2",
        check_exceptional_primes,
    ),
    OracleCheck("power-residues", "residue test against brute force", check_residues),
    OracleCheck("criterion", "worked criterion verdicts", check_criterion_examples),
    OracleCheck("theorem2", "worked Theorem 2 scans", check_theorem2_examples),
    OracleCheck(
        "theorem2-main-term",
        "admissible counts within the Polya-Vinogradov allowance",
        check_theorem2_main_term,
    ),
    OracleCheck("aligned-count", "aligned box counts", check_aligned_counts),
    OracleCheck("theorem1-density", "exhaustive survey at p=5", check_theorem1_density),
    OracleCheck("effective-bound", "epsilon and lower bounds", check_effective_bound),
    OracleCheck(
        "witness-soundness",
        "independent re-validation of sampled witnesses",
        check_witness_soundness,
    ),
    OracleCheck("corollary", "positive proportion for n=4", check_corollary),
    OracleCheck("determinism", "seeded Monte Carlo runs", check_determinism),
)


def run_checks(
    full: bool = False, names: Iterable[str] | None = None
) -> Iterator[OracleResult]:
    selected = set(names) if names is not None else None
    for check in CHECKS:
        if selected is not None and check.name not in selected:
            continue
        started = time.perf_counter()
        try:
            detail = check.run(full)
            passed = True
        except HeilbronnError as e:
            detail = str(e)
            passed = False

        yield OracleResult(
            check.name, passed, detail, round(time.perf_counter() - started, 3)
        )


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise OracleFailure(message)


def _decomposes(p: int, q1: int, q2: int) -> bool:
    return frobenius_decompose(p, q1, q2) is not None


def _without_timing(report: object) -> dict[str, object]:
    data = dict(vars(report))
    data.pop("wall_time", None)

    return data


class OracleFailure(HeilbronnError):
    pass
