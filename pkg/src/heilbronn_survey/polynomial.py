from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from heilbronn_survey.exceptions import InvalidArgumentError
from heilbronn_survey.exceptions import PreconditionError


if TYPE_CHECKING:
    from collections.abc import Iterable


@dataclass(frozen=True)
class MonicIntPolynomial:
    """
    A monic polynomial x^n + a_{n-1} x^{n-1} + ... + a_1 x + a_0 over the integers.

    Coefficients are stored ascending (a_0 first) and the leading 1 is implicit,
    so ``MonicIntPolynomial((5, 5, 0))`` is x^3 + 5x + 5.
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]) -> None:
        values = tuple(coeffs)
        if not values:
            raise PreconditionError("A monic polynomial needs degree at least 1.")
        for value in values:
            if isinstance(value, bool) or not isinstance(value, int):
                raise PreconditionError(
                    f"Coefficients must be integers, got {value!r}."
                )
        object.__setattr__(self, "coeffs", values)

    @classmethod
    def parse(cls, text: str) -> MonicIntPolynomial:
        """
        Parse the comma-separated ascending form "a0,a1,...,a{n-1}".
        """
        parts = [part.strip() for part in text.split(",")]
        if any(not part for part in parts):
            raise InvalidArgumentError(
                f'Invalid polynomial "{text}": expected comma-separated integers'
                ' "a0,a1,...,a{n-1}".'
            )
        try:
            return cls(int(part) for part in parts)
        except ValueError as e:
            raise InvalidArgumentError(f'Invalid polynomial "{text}": {e}') from e

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def evaluate(self, x: int) -> int:
        value = 1
        for coeff in reversed(self.coeffs):
            value = value * x + coeff

        return value

    def reduce(self, q: int) -> ResiduePolynomial:
        return ResiduePolynomial(q, tuple(coeff % q for coeff in self.coeffs))

    def pretty(self) -> str:
        terms = [_monomial(1, self.degree)]
        for power in range(self.degree - 1, -1, -1):
            coeff = self.coeffs[power]
            if coeff == 0:
                continue
            sign = "-" if coeff < 0 else "+"
            terms.append(f"{sign} {_monomial(abs(coeff), power)}")

        return " ".join(terms)

    def __str__(self) -> str:
        return ",".join(str(coeff) for coeff in self.coeffs)


@dataclass(frozen=True)
class ResiduePolynomial:
    """
    The reduction of a monic polynomial modulo a prime q.
    """

    modulus: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise PreconditionError(f"Modulus must be at least 2, got {self.modulus}.")
        if any(not 0 <= coeff < self.modulus for coeff in self.coeffs):
            raise PreconditionError(
                f"Residues must lie in [0, {self.modulus - 1}], got {self.coeffs}."
            )

    def evaluate(self, r: int) -> int:
        q = self.modulus
        value = 1
        for coeff in reversed(self.coeffs):
            value = (value * r + coeff) % q

        return value

    def roots(self) -> list[int]:
        return [r for r in range(self.modulus) if self.evaluate(r) == 0]

    def has_root(self) -> bool:
        return any(self.evaluate(r) == 0 for r in range(self.modulus))


def height(f: MonicIntPolynomial) -> int:
    return max(1, *(abs(coeff) for coeff in f.coeffs))


def is_eisenstein_at(f: MonicIntPolynomial, p: int) -> bool:
    if p < 2:
        raise PreconditionError(f"Expected a prime p >= 2, got {p}.")

    a0 = f.coeffs[0]
    return all(coeff % p == 0 for coeff in f.coeffs) and a0 % (p * p) != 0


def has_root_mod(f: MonicIntPolynomial, q: int) -> bool:
    if q < 2:
        raise PreconditionError(f"Expected a prime q >= 2, got {q}.")

    return f.reduce(q).has_root()


def _monomial(coeff: int, power: int) -> str:
    if power == 0:
        return str(coeff)
    variable = "x" if power == 1 else f"x^{power}"
    if coeff == 1:
        return variable

    return f"{coeff}*{variable}"
