"""Base-p digits, carries, and p-adic valuations of multinomial coefficients.

Valuations are computed from the carries of the base-p column addition of
the parts (Kummer for two parts, Dickson in general).  Legendre's factorial
formula is kept alongside as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


def base_p_digits(k: int, p: int, width: int | None = None) -> list[int]:
    """Little-endian base-p digits of k, optionally zero-padded to ``width``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    digits = []
    while k:
        k, d = divmod(k, p)
        digits.append(d)
    if width is not None:
        if len(digits) > width:
            raise ValueError(f"{len(digits)} digits do not fit in width {width}")
        digits += [0] * (width - len(digits))
    return digits


@dataclass(frozen=True)
class CarryRecord:
    """Column addition of ``addends`` in base p.

    ``carries[j - 1]`` is the carry into the p^j place, for j = 1 .. len;
    ``digits`` are the digits of the sum.  Carries can exceed 1 when there
    are more than two addends.
    """

    p: int
    addends: tuple[int, ...]
    carries: tuple[int, ...]
    digits: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.carries)

    def carry_into(self, j: int) -> int:
        """Carry into the p^j place (0 for j = 0 or beyond the last column)."""
        return self.carries[j - 1] if 1 <= j <= len(self.carries) else 0

    def is_consistent(self) -> bool:
        """Recompute every column: digit sum + carry in = digit + p * carry out."""
        width = len(self.digits)
        cols = [base_p_digits(a, self.p, width) for a in self.addends]
        for j in range(width):
            lhs = sum(c[j] for c in cols) + self.carry_into(j)
            if lhs != self.digits[j] + self.p * self.carry_into(j + 1):
                return False
        return sum(d * self.p**j for j, d in enumerate(self.digits)) == sum(self.addends)


def carry_record(addends: Sequence[int], p: int) -> CarryRecord:
    addends = tuple(int(a) for a in addends)
    if any(a < 0 for a in addends):
        raise ValueError("addends must be non-negative")
    width = len(base_p_digits(sum(addends), p))
    cols = [base_p_digits(a, p, width) for a in addends]
    carry, carries, digits = 0, [], []
    for j in range(width):
        carry, d = divmod(sum(c[j] for c in cols) + carry, p)
        digits.append(d)
        carries.append(carry)
    # the top column never carries out: the sum fits in ``width`` digits
    return CarryRecord(p, addends, tuple(carries[:-1]) if carries else (), tuple(digits))


def multinomial_valuation(parts: Sequence[int], p: int) -> int:
    """v_p of (sum parts)! / prod(part!), as the total number of carries."""
    return carry_record(parts, p).total


def factorial_valuation(n: int, p: int) -> int:
    """v_p(n!) = sum_i floor(n / p^i)."""
    total, pk = 0, p
    while pk <= n:
        total += n // pk
        pk *= p
    return total


def legendre_valuation_oracle(parts: Sequence[int], p: int) -> int:
    """v_p of the multinomial via factorial valuations; a test oracle."""
    return factorial_valuation(sum(parts), p) - sum(factorial_valuation(k, p) for k in parts)
