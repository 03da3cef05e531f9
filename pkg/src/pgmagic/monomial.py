"""The monomial basis of the functions P^n(q) -> F_q and its s-tuples.

A monomial X^b restricts to a function on projective points when (q-1)
divides |b|.  Reducing X_i^q = X_i and dropping the product of all X_i^(q-1)
(which is a combination of the others once the zero vector is excluded)
leaves one basis monomial per point.

The Frobenius map x -> x^p acts on exponents by rotating the base-p digits
of every b_j ("twist").  The s-tuple of a nonconstant monomial records the
degrees of its inverse twists divided by q-1.

Function values are taken in F_q rather than its algebraic closure: every
value at an F_q-rational point already lies in F_q and ranks of F_q-matrices
do not change under field extension.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bounds import check_cells
from .exactla import MatrixFq
from .numtheory import carry_record
from .projgeom import Geometry, ProjPoint

STuple = tuple[int, ...]


@dataclass(frozen=True)
class Monomial:
    b: tuple[int, ...]
    geom: Geometry

    def __post_init__(self):
        q, n = self.geom.q, self.geom.n
        b = tuple(int(x) for x in self.b)
        object.__setattr__(self, "b", b)
        if len(b) != n + 1:
            raise ValueError(f"exponent vector must have length {n + 1}")
        if any(not 0 <= x <= q - 1 for x in b):
            raise ValueError(f"exponents must lie in [0, {q - 1}]")
        if sum(b) % (q - 1):
            raise ValueError(f"degree {sum(b)} is not divisible by q-1={q - 1}")
        if b == (q - 1,) * (n + 1):
            raise ValueError("X_0^(q-1)...X_n^(q-1) is not a basis monomial")

    @property
    def degree(self) -> int:
        return sum(self.b)

    @property
    def is_constant(self) -> bool:
        return not any(self.b)

    def __str__(self):
        return "b=" + ",".join(map(str, self.b))

    @classmethod
    def parse(cls, text: str, geom: Geometry) -> "Monomial":
        """Read the ``b=2,2,0`` serialization (the ``b=`` prefix is optional)."""
        text = text.strip()
        if text.startswith("b="):
            text = text[2:]
        return cls(tuple(int(x) for x in text.split(",")), geom)


def enumerate_basis(geom: Geometry) -> list[Monomial]:
    """All basis monomials (constant included) in lexicographic order of b."""
    q, n = geom.q, geom.n
    check_cells(q ** (n + 1), f"exponent vectors for P^{n}({q})")
    top = (q - 1,) * (n + 1)
    return [
        Monomial(b, geom)
        for b in itertools.product(range(q), repeat=n + 1)
        if sum(b) % (q - 1) == 0 and b != top
    ]


def evaluate(m: Monomial, p: ProjPoint) -> int:
    """Value of m at the canonical representative of p (0**0 == 1)."""
    if len(p) != m.geom.n + 1:
        raise ValueError("point does not belong to this geometry")
    F = m.geom.field
    val = 1
    for x, e in zip(p, m.b):
        val = F.mul(val, F.pow(x, e))
    return int(val)


def to_function_vector(m: Monomial) -> np.ndarray:
    """Values of m on all points, in canonical point order."""
    F = m.geom.field
    pts = m.geom.point_array
    vals = np.ones(len(pts), dtype=np.int64)
    for j, e in enumerate(m.b):
        if e:
            vals = F.mul(vals, F.pow(pts[:, j], e))
    return vals


def evaluation_matrix(geom: Geometry, monomials: Sequence[Monomial] | None = None) -> MatrixFq:
    if monomials is None:
        monomials = enumerate_basis(geom)
    return MatrixFq(geom.field, np.array([to_function_vector(m) for m in monomials]))


def _twist_exponent(e: int, p: int, q: int) -> int:
    if e == 0:
        return 0
    r = (e * p) % (q - 1)
    return r if r else q - 1


def twist(m: Monomial, times: int = 1) -> Monomial:
    """Frobenius on exponents: b_j -> p*b_j, taken in {1..q-1} for b_j != 0.

    Negative ``times`` gives the inverse twist.  The constant is fixed.
    """
    p, t, q = m.geom.field.p, m.geom.field.t, m.geom.q
    b = m.b
    for _ in range(times % t):
        b = tuple(_twist_exponent(e, p, q) for e in b)
    return Monomial(b, m.geom)


def s_tuple(m: Monomial) -> STuple:
    """s_i = deg(twist^(-i) m) / (q-1) for i = 0 .. t-1."""
    if m.is_constant:
        raise ValueError("the constant monomial has no s-tuple")
    q, t = m.geom.q, m.geom.field.t
    return tuple(twist(m, -i).degree // (q - 1) for i in range(t))


def carry_s_tuple(m: Monomial) -> STuple:
    """The tuple (r_t + 1, r_1 + 1, ..., r_(t-1) + 1) built from the carries
    r_j into the p^j place of the base-p sum b_0 + ... + b_n."""
    if m.is_constant:
        raise ValueError("the constant monomial has no s-tuple")
    rec = carry_record(m.b, m.geom.field.p)
    t = m.geom.field.t
    return (rec.carry_into(t) + 1,) + tuple(rec.carry_into(i) + 1 for i in range(1, t))


def carry_consistency(m: Monomial) -> bool:
    """Whether :func:`s_tuple` agrees with :func:`carry_s_tuple`.

    Only asserted in the regime n <= q-1.  Agreement holds exactly when the
    degree multiple s_0 is at most p; for n <= p that is automatic.
    """
    if m.geom.n > m.geom.q - 1:
        raise ValueError("carry correspondence is only defined for n <= q-1")
    return s_tuple(m) == carry_s_tuple(m)


def leq(s: STuple, s2: STuple) -> bool:
    """Componentwise partial order."""
    if len(s) != len(s2):
        raise ValueError("tuples of different length")
    return all(a <= b for a, b in zip(s, s2))


def s_tuples(geom: Geometry) -> dict[Monomial, STuple]:
    return {m: s_tuple(m) for m in enumerate_basis(geom) if not m.is_constant}


def realized_H(geom: Geometry) -> set[STuple]:
    return set(s_tuples(geom).values())


def y_dimension(geom: Geometry, s: STuple, table: dict | None = None) -> int:
    """Number of nonconstant basis monomials whose s-tuple is <= s."""
    table = s_tuples(geom) if table is None else table
    return sum(leq(s2, s) for s2 in table.values())


def l_dimension(geom: Geometry, s: STuple, table: dict | None = None) -> int:
    """dim Y(s) minus the monomials strictly below s."""
    table = s_tuples(geom) if table is None else table
    return y_dimension(geom, s, table) - sum(
        leq(s2, s) and s2 != s for s2 in table.values()
    )


def componentwise_max(tuples: Iterable[STuple]) -> STuple:
    return tuple(max(col) for col in zip(*tuples))


def printed_H_report(geom: Geometry) -> dict[str, list[STuple]]:
    """Realized s-tuples that break each clause of the printed set-builder
    description of H, clause by clause:

    ``range``: 1 <= s_i <= n-1; ``step``: p*s_(i+1) - s_i <= n(q-1)
    (indices cyclic); ``constant_n-1``: all entries equal to n-1.
    """
    n, p, q = geom.n, geom.field.p, geom.q
    out: dict[str, list[STuple]] = {"range": [], "step": [], "constant_n-1": []}
    for s in sorted(realized_H(geom)):
        t = len(s)
        if any(not 1 <= x <= n - 1 for x in s):
            out["range"].append(s)
        if any(p * s[(i + 1) % t] - s[i] > n * (q - 1) for i in range(t)):
            out["step"].append(s)
        if all(x == n - 1 for x in s):
            out["constant_n-1"].append(s)
    return out
