"""Arithmetic in the finite field F_q, q = p^t.

Elements are identified by integer indices.  The index of an element is its
coordinate vector in the polynomial basis 1, x, ..., x^(t-1) read as a base-p
number, low degree first: ``index = c_0 + c_1 p + ... + c_(t-1) p^(t-1)``.
Index 0 is zero and index 1 is one.

Multiplication goes through exp/log tables of a primitive element and
addition through a Zech logarithm table, so every operation is a table
lookup.  All ``FieldSpec`` methods accept ints or numpy integer arrays and
broadcast like numpy ufuncs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_ORDER = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, t)`` with ``q == p**t``; raise ValueError otherwise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    t, rest = 0, q
    while rest % p == 0:
        rest //= p
        t += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, t


# -- polynomials over F_p as little-endian coefficient tuples ---------------

def _poly_mod(a: list[int], mod: Sequence[int], p: int) -> list[int]:
    a = list(a)
    deg = len(mod) - 1
    for i in range(len(a) - 1, deg - 1, -1):
        c = a[i] % p
        if c:
            for j in range(deg + 1):
                a[i - deg + j] = (a[i - deg + j] - c * mod[j]) % p
    return [c % p for c in a[:deg]] + [0] * max(0, deg - len(a))


def _poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_mod(out, mod, p)


def _divides(d: Sequence[int], f: Sequence[int], p: int) -> bool:
    return not any(_poly_mod(list(f), d, p))


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    t = len(poly) - 1
    if t < 1 or poly[-1] % p != 1:
        return False
    for d in range(1, t // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if _divides(list(low) + [1], poly, p):
                return False
    return True


def irreducible_polynomials(p: int, t: int) -> list[tuple[int, ...]]:
    """All monic irreducibles of degree t, sorted low-degree-first."""
    found = []
    for low in itertools.product(range(p), repeat=t):
        poly = tuple(low) + (1,)
        if is_irreducible(poly, p):
            found.append(poly)
    return found


def default_modulus(p: int, t: int) -> tuple[int, ...]:
    """The lexicographically smallest monic irreducible of degree t over F_p,
    coefficients compared low-degree-first."""
    for low in itertools.product(range(p), repeat=t):
        poly = tuple(low) + (1,)
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldSpec:
    """The field F_q with its lookup tables.  Immutable after construction."""

    def __init__(self, p: int, t: int, modulus: Sequence[int], max_order: int = MAX_ORDER):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if t < 1:
            raise ValueError(f"t={t} must be at least 1")
        q = p**t
        if q > max_order:
            raise ValueError(f"q={q} exceeds the field size bound {max_order}")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != t + 1 or not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is not a monic irreducible of degree {t}")
        self.p, self.t, self.q = p, t, q
        self.modulus = modulus

        powers = p ** np.arange(t)
        self.digits = np.array(
            [[(i // p**k) % p for k in range(t)] for i in range(q)], dtype=np.int64
        ).reshape(q, t)
        self._powers = powers

        self.generator, exp = self._find_primitive()
        order = q - 1
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(order)
        # doubled so that exp[i + j] never needs a reduction for i, j < order
        self.exp = np.concatenate([exp, exp])
        self.log = log

        # zech[k] = log(1 + g^k), or -1 when 1 + g^k = 0
        succ = ((self.digits[exp] + self.digits[1]) % p) @ powers
        self.zech = np.where(succ == 0, -1, log[succ])

        self._neg = ((-self.digits) % p) @ powers
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % order]
        self._inv = inv
        self._frob = np.stack([self._pow_table(p**i) for i in range(t)])

        for arr in (self.digits, self.exp, self.log, self.zech, self._neg, self._inv, self._frob):
            arr.setflags(write=False)

    def _find_primitive(self) -> tuple[int, np.ndarray]:
        p, q = self.p, self.q
        if q == 2:
            return 1, np.array([1], dtype=np.int64)
        for g in range(2, q):
            gd = list(self.digits[g])
            seq = [1]
            cur = list(self.digits[1])
            for _ in range(q - 2):
                cur = _poly_mulmod(cur, gd, self.modulus, p)
                idx = sum(c * p**k for k, c in enumerate(cur))
                if idx == 1:
                    break
                seq.append(idx)
            else:
                return g, np.array(seq, dtype=np.int64)
        raise AssertionError("no primitive element")  # pragma: no cover

    def _pow_table(self, k: int) -> np.ndarray:
        tab = np.zeros(self.q, dtype=np.int64)
        tab[1:] = self.exp[(self.log[1:] * k) % (self.q - 1)]
        if k == 0:
            tab[0] = 1
        return tab

    # -- identity --------------------------------------------------------

    def _key(self):
        return (self.p, self.t, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FieldSpec(p={self.p}, t={self.t}, modulus={self.modulus})"

    # -- elements --------------------------------------------------------

    def __call__(self, index: int) -> "Scalar":
        if not 0 <= index < self.q:
            raise ValueError(f"{index} is not an element index of F_{self.q}")
        return Scalar(int(index), self)

    def elements(self) -> list["Scalar"]:
        return [Scalar(i, self) for i in range(self.q)]

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        """Index of the element with the given polynomial-basis coefficients."""
        coeffs = list(coeffs) + [0] * (self.t - len(coeffs))
        return int(np.dot(np.asarray(coeffs[: self.t]) % self.p, self._powers))

    def from_int(self, k: int) -> int:
        """Index of the image of the integer k under Z -> F_q."""
        return k % self.p

    def to_digits(self, a):
        return self.digits[np.asarray(a)]

    def from_digits(self, d):
        return (np.asarray(d) % self.p) @ self._powers

    # -- vectorised arithmetic on indices --------------------------------

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self.log[a], self.log[b]
        z = self.zech[(lb - la) % (self.q - 1)]
        res = np.where(z < 0, 0, self.exp[(la + np.maximum(z, 0)) % (self.q - 1)])
        res = np.where(a == 0, b, np.where(b == 0, a, res))
        return res if res.ndim else int(res)

    def neg(self, a):
        res = self._neg[np.asarray(a, dtype=np.int64)]
        return res if res.ndim else int(res)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        res = self.exp[self.log[a] + self.log[b]]
        res = np.where((a == 0) | (b == 0), 0, res)
        return res if res.ndim else int(res)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in F_%d" % self.q)
        res = self._inv[a]
        return res if res.ndim else int(res)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        """a**k with 0**0 == 1; the exponent is reduced mod q-1 only for nonzero a."""
        a = np.asarray(a, dtype=np.int64)
        k = int(k)
        if k < 0 and np.any(a == 0):
            raise ZeroDivisionError("negative power of zero")
        res = self.exp[(self.log[a] * k) % (self.q - 1)]
        res = np.where(a == 0, 1 if k == 0 else 0, res)
        return res if res.ndim else int(res)

    def frobenius(self, a, i: int = 1):
        """a**(p**i), with i reduced mod t (negative i allowed)."""
        res = self._frob[i % self.t][np.asarray(a, dtype=np.int64)]
        return res if res.ndim else int(res)

    def sum(self, a, axis=None):
        """Additive reduction, done digit-wise since addition is F_p-linear."""
        d = self.digits[np.asarray(a, dtype=np.int64)]
        if axis is None:
            s = d.reshape(-1, self.t).sum(axis=0)
        else:
            ax = axis if axis >= 0 else axis - 1
            s = d.sum(axis=ax)
        res = (s % self.p) @ self._powers
        return res if np.ndim(res) else int(res)

    def power_sum(self, k: int) -> int:
        """sum over all alpha in F_q of alpha**k (with 0**0 == 1)."""
        return self.sum(self.pow(np.arange(self.q), k))


def field_build(p: int, t: int = 1, modulus: Sequence[int] | None = None,
                max_order: int = MAX_ORDER) -> FieldSpec:
    """Build F_(p^t).  The modulus defaults to :func:`default_modulus`."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if t < 1:
        raise ValueError(f"t={t} must be at least 1")
    if p**t > max_order:
        raise ValueError(f"q={p**t} exceeds the field size bound {max_order}")
    if modulus is None:
        modulus = default_modulus(p, t)
    return FieldSpec(p, t, modulus, max_order=max_order)


@dataclass(frozen=True)
class Scalar:
    """A single element of a field, with operator overloads."""

    index: int
    field: FieldSpec

    def _other(self, other) -> int:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise ValueError("operands belong to different fields")
            return other.index
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def _wrap(self, idx) -> "Scalar":
        return Scalar(int(idx), self.field)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.index, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.index, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.index))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.index, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.index, o))

    def __neg__(self):
        return self._wrap(self.field.neg(self.index))

    def __pow__(self, k: int):
        return self._wrap(self.field.pow(self.index, k))

    def inverse(self) -> "Scalar":
        return self._wrap(self.field.inv(self.index))

    def frobenius(self, i: int = 1) -> "Scalar":
        return self._wrap(self.field.frobenius(self.index, i))

    def __bool__(self):
        return self.index != 0

    def __repr__(self):
        return f"F{self.field.q}({self.index})"


# Function-style aliases mirroring the operator overloads.

def _check(a: Scalar, b: Scalar) -> None:
    if a.field != b.field:
        raise ValueError("operands belong to different fields")


def add(a: Scalar, b: Scalar) -> Scalar:
    _check(a, b)
    return a + b


def mul(a: Scalar, b: Scalar) -> Scalar:
    _check(a, b)
    return a * b


def neg(a: Scalar) -> Scalar:
    return -a


def inv(a: Scalar) -> Scalar:
    return a.inverse()


def pow(a: Scalar, k: int) -> Scalar:  # noqa: A001
    return a**k


def frobenius(a: Scalar, i: int = 1) -> Scalar:
    return a.frobenius(i)
