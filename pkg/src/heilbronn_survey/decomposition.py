from __future__ import annotations

import math

from dataclasses import dataclass
from typing import ClassVar

from heilbronn_survey.densities import primes_upto
from heilbronn_survey.densities import require_prime
from heilbronn_survey.exceptions import HeilbronnError
from heilbronn_survey.exceptions import PreconditionError


@dataclass(frozen=True)
class Decomposition:
    """
    A splitting p = u*q1 + v*q2 with q1 not dividing u and q2 not dividing v.
    """

    p: int
    q1: int
    q2: int
    u: int
    v: int

    @property
    def a(self) -> int:
        return self.u * self.q1

    @property
    def b(self) -> int:
        return self.v * self.q2

    def problems(self) -> list[str]:
        problems = []
        if not self.q1 < self.q2 < self.p:
            problems.append(f"expected q1 < q2 < p, got {self.q1}, {self.q2}, {self.p}")
        if self.u < 1 or self.v < 1:
            problems.append(f"u and v must be positive, got u={self.u}, v={self.v}")
        if self.a + self.b != self.p:
            problems.append(f"{self.u}*{self.q1} + {self.v}*{self.q2} != {self.p}")
        if math.gcd(self.u, self.q1) != 1:
            problems.append(f"q1={self.q1} divides u={self.u}")
        if math.gcd(self.v, self.q2) != 1:
            problems.append(f"q2={self.q2} divides v={self.v}")

        return problems

    def is_valid(self) -> bool:
        return not self.problems()

    def verify(self) -> Decomposition:
        problems = self.problems()
        if problems:
            raise DecompositionError(
                f"Invalid decomposition of {self.p}: {'; '.join(problems)}."
            )

        return self


def frobenius_decompose(p: int, q1: int, q2: int) -> Decomposition | None:
    """
    The decomposition p = u*q1 + v*q2 with the smallest admissible u,
    or None if there is none.
    """
    _require_pair(p, q1, q2)

    for u in range(1, (p - q2) // q1 + 1):
        if u % q1 == 0:
            continue
        rest = p - u * q1
        if rest % q2 != 0:
            continue
        v = rest // q2
        if v % q2 == 0:
            continue

        return Decomposition(p, q1, q2, u, v).verify()

    return None


def decompositions(p: int, q1: int, q2: int) -> list[Decomposition]:
    """
    Every decomposition of p over (q1, q2), ordered by u.
    """
    _require_pair(p, q1, q2)

    found = []
    for u in range(1, (p - q2) // q1 + 1):
        rest = p - u * q1
        if u % q1 == 0 or rest % q2 != 0 or (rest // q2) % q2 == 0:
            continue
        found.append(Decomposition(p, q1, q2, u, rest // q2))

    return found


@dataclass(frozen=True)
class DecompositionSearch:
    """
    Outcome of looking for a decomposition of p over (q1, q2).
    """

    JSON_PROPERTIES: ClassVar[tuple[str, ...]] = ("found", "u", "v", "guaranteed")

    p: int
    q1: int
    q2: int
    decomposition: Decomposition | None
    threshold: int

    @property
    def found(self) -> bool:
        return self.decomposition is not None

    @property
    def u(self) -> int | None:
        return self.decomposition.u if self.decomposition is not None else None

    @property
    def v(self) -> int | None:
        return self.decomposition.v if self.decomposition is not None else None

    @property
    def guaranteed(self) -> bool:
        return self.p >= self.threshold


def search_decomposition(p: int, q1: int, q2: int) -> DecompositionSearch:
    return DecompositionSearch(
        p=p,
        q1=q1,
        q2=q2,
        decomposition=frobenius_decompose(p, q1, q2),
        threshold=guarantee_threshold(q1, q2),
    )


def guarantee_threshold(q1: int, q2: int) -> int:
    if not q1 < q2:
        raise PreconditionError(f"Expected q1 < q2, got q1={q1}, q2={q2}.")

    return q1 * q1 * q2 * q2


def exceptional_primes(q1: int, q2: int) -> list[int]:
    """
    Primes q2 < p < q1^2 q2^2 admitting no decomposition over (q1, q2).
    """
    threshold = guarantee_threshold(q1, q2)

    return [
        p
        for p in primes_upto(threshold - 1)
        if p > q2 and frobenius_decompose(p, q1, q2) is None
    ]


def adjust_for_criterion(d: Decomposition) -> Decomposition:
    """
    Repair a splitting p = u*q1 + v*q2 in which q2 may divide v by trading
    q1*q2 between the two parts, once or twice.

    Requires gcd(u, q1) = 1 and u + 2*q2 < p/q1, which keeps all parts positive.
    """
    if d.u * d.q1 + d.v * d.q2 != d.p:
        raise DecompositionError(f"{d.u}*{d.q1} + {d.v}*{d.q2} != {d.p}.")

    for shift in range(3):
        u = d.u + shift * d.q2
        v = d.v - shift * d.q1
        if v < 1:
            break
        candidate = Decomposition(d.p, d.q1, d.q2, u, v)
        if candidate.is_valid():
            return candidate

    raise DecompositionError(
        f"No valid decomposition among the adjustments of u={d.u}, v={d.v} for"
        f" p={d.p}, q1={d.q1}, q2={d.q2}: gcd(u, q1) must be 1 and u + 2*q2 < p/q1."
    )


def _require_pair(p: int, q1: int, q2: int) -> None:
    if not q1 < q2 < p:
        raise PreconditionError(f"Expected q1 < q2 < p, got q1={q1}, q2={q2}, p={p}.")
    require_prime(q1, "q1")
    require_prime(q2, "q2")
    require_prime(p, "p")


class DecompositionError(HeilbronnError):
    pass
