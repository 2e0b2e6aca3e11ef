from __future__ import annotations

import itertools

from typing import TYPE_CHECKING


if TYPE_CHECKING:
    from collections.abc import Iterator
    from collections.abc import Sequence


def naive_has_root(coeffs: Sequence[int], q: int) -> bool:
    n = len(coeffs)
    for r in range(q):
        value = r**n
        for i, c in enumerate(coeffs):
            value += c * r**i
        if value % q == 0:
            return True

    return False


def naive_rootless_count(p: int, n: int) -> int:
    return sum(
        1
        for coeffs in itertools.product(range(p), repeat=n)
        if not naive_has_root(coeffs, p)
    )


def naive_eisenstein_tuples(p: int, n: int, X: int) -> Iterator[tuple[int, ...]]:
    """
    Every p-Eisenstein coefficient tuple in (-X, X]^n, by plain filtering.
    """
    values = range(-X + 1, X + 1)
    for coeffs in itertools.product(values, repeat=n):
        if all(c % p == 0 for c in coeffs) and coeffs[0] % (p * p) != 0:
            yield coeffs


def naive_count_box(
    p: int,
    n: int,
    X: int,
    rootless_at: Sequence[int] = (),
    rooted_at: Sequence[int] = (),
) -> int:
    return sum(
        1
        for coeffs in naive_eisenstein_tuples(p, n, X)
        if not any(naive_has_root(coeffs, q) for q in rootless_at)
        and all(naive_has_root(coeffs, q) for q in rooted_at)
    )
