from __future__ import annotations

import itertools

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING
from typing import Any

import numpy as np

from heilbronn_survey.exceptions import PreconditionError


if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray


#: Cells (tuples times residue columns) of the trailing table evaluated as one block.
TRAILING_CELL_LIMIT = 1 << 22

#: Beyond this magnitude coefficients are kept as Python integers.
INT64_SAFE_BOUND = 1 << 62


@dataclass(frozen=True)
class EisensteinBox:
    """
    The p-Eisenstein coefficient tuples in the half-open box (-X, X]^n:
    a_0 runs over the multiples of p that are not multiples of p^2, every
    other coefficient over the multiples of p.
    """

    p: int
    n: int
    X: int

    def __post_init__(self) -> None:
        if self.X < 1:
            raise PreconditionError(
                f"The height bound X must be positive, got {self.X}."
            )
        if self.n < 1:
            raise PreconditionError(f"Expected a degree n >= 1, got {self.n}.")

    @property
    def multiple_count(self) -> int:
        return _multiples_in_box(self.p, self.X)

    @property
    def constant_count(self) -> int:
        return self.multiple_count - _multiples_in_box(self.p * self.p, self.X)

    @property
    def size(self) -> int:
        return self.constant_count * self.multiple_count ** (self.n - 1)

    def multiples(self) -> NDArray[Any]:
        p = self.p
        lo = (-self.X) // p + 1
        hi = self.X // p
        if self.X < INT64_SAFE_BOUND:
            return np.arange(lo, hi + 1, dtype=np.int64) * p

        return np.array([k * p for k in range(lo, hi + 1)], dtype=object)

    def constants(self) -> NDArray[Any]:
        values = self.multiples()
        return values[values % (self.p * self.p) != 0]


def require_within_cap(box: EisensteinBox, cap: int) -> None:
    if box.size > cap:
        raise EnumerationCapError(
            f"The box holds {box.size} Eisenstein tuples for p={box.p}, n={box.n},"
            f" X={box.X}, above the enumeration cap of {cap}."
            " Use the Monte Carlo mode (--mode mc) instead."
        )


def pattern_of(rootless: Sequence[bool]) -> int:
    return sum(1 << j for j, flag in enumerate(rootless) if flag)


def primes_of(pattern: int, primes: Sequence[int]) -> tuple[int, ...]:
    return tuple(q for j, q in enumerate(primes) if pattern >> j & 1)


def count_patterns(
    box: EisensteinBox,
    primes: Sequence[int],
    threads: int = 1,
    chunks: int | None = None,
) -> Counter[int]:
    """
    Count the tuples of the box by rootless pattern: bit j of a pattern is set
    when the polynomial has no root modulo primes[j].

    The a_0 axis is split into contiguous chunks; counts of disjoint chunks add up,
    so the result does not depend on the number of workers.
    """
    primes = tuple(primes)
    constant_count = box.constant_count
    chunks = max(1, min(chunks or threads, constant_count))
    edges = [constant_count * i // chunks for i in range(chunks + 1)]
    jobs = [(box, primes, edges[i], edges[i + 1]) for i in range(chunks)]

    total: Counter[int] = Counter()
    if threads <= 1 or len(jobs) == 1:
        for job in jobs:
            total.update(_count_chunk(job))

        return total

    with ProcessPoolExecutor(max_workers=threads) as executor:
        for partial in executor.map(_count_chunk, jobs):
            total.update(partial)

    return total


def rootless_matrix(
    columns: Sequence[NDArray[Any]], primes: Sequence[int]
) -> NDArray[Any]:
    """
    Rootless patterns of explicitly listed polynomials: ``columns[i]`` holds the
    coefficient a_i of every polynomial.
    """
    n = len(columns)
    patterns = np.zeros(len(columns[0]), dtype=np.int64)
    for j, q in enumerate(primes):
        residues = [np.asarray(column % q, dtype=np.int64) for column in columns]
        rooted = np.zeros(len(columns[0]), dtype=bool)
        for r in range(q):
            value = np.full(len(columns[0]), pow(r, n, q), dtype=np.int64)
            for i, residue in enumerate(residues):
                value = (value + residue * pow(r, i, q)) % q
            rooted |= value == 0
        patterns |= np.where(rooted, 0, 1 << j)

    return patterns


def _count_chunk(job: tuple[EisensteinBox, tuple[int, ...], int, int]) -> Counter[int]:
    box, primes, start, stop = job
    n = box.n
    constants = box.constants()[start:stop]
    multiples = box.multiples()

    columns = [(q, r) for q in primes for r in range(q)]
    block_limit = max(1, TRAILING_CELL_LIMIT // max(1, len(columns)))

    trailing = 0
    if n > 1:
        trailing = 1
        while trailing < n - 1 and len(multiples) ** (trailing + 1) <= block_limit:
            trailing += 1
    leading = n - 1 - trailing

    keys, weights = _trailing_classes(multiples, n, trailing, columns)

    residues = {q: np.asarray(multiples % q, dtype=np.int64).tolist() for q in primes}
    constant_residues = {
        q: np.asarray(constants % q, dtype=np.int64).tolist() for q in primes
    }

    counts: Counter[int] = Counter()
    index_ranges = [range(len(constants))] + [range(len(multiples))] * leading
    for prefix in itertools.product(*index_ranges):
        patterns = np.zeros(len(weights), dtype=np.int64)
        column = 0
        for j, q in enumerate(primes):
            rooted = np.zeros(len(weights), dtype=bool)
            for r in range(q):
                # value of the leading part of f at r; the trailing part must cancel it
                head = pow(r, n, q) + constant_residues[q][prefix[0]]
                for i in range(1, leading + 1):
                    head += residues[q][prefix[i]] * pow(r, i, q)
                rooted |= keys[:, column] == (-head) % q
                column += 1
            patterns |= np.where(rooted, 0, 1 << j)

        values, inverse = np.unique(patterns, return_inverse=True)
        sums = np.zeros(len(values), dtype=np.int64)
        np.add.at(sums, inverse.reshape(-1), weights)
        for value, total in zip(values.tolist(), sums.tolist()):
            counts[value] += total

    return counts


def _trailing_classes(
    multiples: NDArray[Any],
    n: int,
    trailing: int,
    columns: Sequence[tuple[int, int]],
) -> tuple[NDArray[Any], NDArray[Any]]:
    """
    Collapse the trailing coefficients a_{n-trailing}, ..., a_{n-1} into classes
    of equal partial values sum a_i r^i mod q for every column (q, r).

    Returns the distinct rows and how many trailing tuples share each row.
    """
    first = n - trailing
    size = len(multiples) ** trailing
    if not columns or trailing == 0:
        return np.zeros((1, max(len(columns), 1)), dtype=np.int64), np.array(
            [size], dtype=np.int64
        )

    dtype = np.int16 if max(q for q, _ in columns) < 1 << 15 else np.int64
    table = np.empty((size, len(columns)), dtype=dtype)
    for c, (q, r) in enumerate(columns):
        residues = np.asarray(multiples % q, dtype=np.int64)
        partial = np.zeros(1, dtype=np.int64)
        for i in range(first, n):
            term = residues * pow(r, i, q) % q
            partial = ((partial[:, None] + term[None, :]) % q).reshape(-1)
        table[:, c] = partial

    rows, counts = np.unique(table, axis=0, return_counts=True)

    return rows, counts.astype(np.int64)


def _multiples_in_box(d: int, x: int) -> int:
    # multiples of d in (-x, x]
    return x // d - (-x) // d


class EnumerationCapError(PreconditionError):
    pass
