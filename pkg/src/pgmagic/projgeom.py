"""Points, flats and the linear group action for P^n(q).

Points are tuples of field indices in canonical form (first nonzero
coordinate equal to 1) and are listed in lexicographic order of those
tuples.  An r-flat is stored as the unique RREF basis of its (r+1)-dimensional
subspace; flats are listed by pivot set, then by free entries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

import numpy as np

from .bounds import check_cells
from .exactla import MatrixFq, rank, rref
from .gf import FieldSpec

ProjPoint = tuple[int, ...]


def gaussian_binomial(a: int, b: int, q: int) -> int:
    """Number of b-dimensional subspaces of F_q^a."""
    if not 0 <= b <= a:
        raise ValueError(f"need 0 <= b <= a, got a={a}, b={b}")
    num = den = 1
    for i in range(b):
        num *= q ** (a - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@dataclass(frozen=True)
class Flat:
    """An r-flat given by its RREF basis (rows are field-index tuples)."""

    r: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)


@dataclass(frozen=True)
class GroupElement:
    matrix: MatrixFq


@dataclass(eq=False)
class Geometry:
    """P^n(q) over a fixed field, with cached canonical enumerations."""

    n: int
    field: FieldSpec
    _flat_cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"projective dimension must be at least 1, got {self.n}")

    def __eq__(self, other):
        return isinstance(other, Geometry) and (self.n, self.field) == (other.n, other.field)

    def __hash__(self):
        return hash((self.n, self.field))

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def num_points(self) -> int:
        return (self.q ** (self.n + 1) - 1) // (self.q - 1)

    @cached_property
    def points(self) -> list[ProjPoint]:
        return enumerate_points(self)

    @cached_property
    def point_index(self) -> dict[ProjPoint, int]:
        return {pt: i for i, pt in enumerate(self.points)}

    @cached_property
    def point_array(self) -> np.ndarray:
        """Points stacked as a |P| x (n+1) array of field indices."""
        return np.array(self.points, dtype=np.int64).reshape(-1, self.n + 1)

    def flats(self, r: int) -> list[Flat]:
        if r not in self._flat_cache:
            self._flat_cache[r] = enumerate_flats(self, r)
        return self._flat_cache[r]

    def normalize(self, vecs) -> np.ndarray:
        """Scale nonzero row vectors so their first nonzero entry is 1."""
        F = self.field
        vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
        nz = vecs != 0
        if not nz.any(axis=1).all():
            raise ValueError("the zero vector is not a projective point")
        lead = vecs[np.arange(len(vecs)), nz.argmax(axis=1)]
        return F.mul(vecs, F.inv(lead)[:, None])

    def index_of(self, vecs) -> np.ndarray:
        """Canonical point indices of nonzero coordinate vectors (rows)."""
        canon = self.normalize(vecs)
        weights = self.q ** np.arange(self.n, -1, -1, dtype=np.int64)
        codes = canon @ weights
        return self._code_to_index[codes]

    @cached_property
    def _code_to_index(self) -> np.ndarray:
        weights = self.q ** np.arange(self.n, -1, -1, dtype=np.int64)
        table = np.full(self.q ** (self.n + 1), -1, dtype=np.int64)
        table[self.point_array @ weights] = np.arange(self.num_points)
        return table


def enumerate_points(geom: Geometry) -> list[ProjPoint]:
    q, n = geom.q, geom.n
    check_cells(geom.num_points, f"points of P^{n}({q})")
    pts = []
    for lead in range(n + 1):
        prefix = (0,) * lead + (1,)
        for rest in itertools.product(range(q), repeat=n - lead):
            pts.append(prefix + rest)
    return sorted(pts)


def enumerate_flats(geom: Geometry, r: int) -> list[Flat]:
    n, q = geom.n, geom.q
    if not 0 <= r <= n - 1:
        raise ValueError(f"flat dimension r={r} must lie in [0, {n - 1}]")
    check_cells(gaussian_binomial(n + 1, r + 1, q), f"{r}-flats of P^{n}({q})")
    flats = []
    for piv in itertools.combinations(range(n + 1), r + 1):
        pset = set(piv)
        slots = [(i, j) for i, c in enumerate(piv) for j in range(c + 1, n + 1) if j not in pset]
        for vals in itertools.product(range(q), repeat=len(slots)):
            rows = [[0] * (n + 1) for _ in piv]
            for i, c in enumerate(piv):
                rows[i][c] = 1
            for (i, j), v in zip(slots, vals):
                rows[i][j] = v
            flats.append(Flat(r, tuple(tuple(row) for row in rows)))
    return flats


def canonical_flat(geom: Geometry, vectors: Sequence[Sequence[int]]) -> Flat:
    """The flat spanned by the given vectors (any spanning set)."""
    R, piv = rref(MatrixFq(geom.field, np.asarray(vectors, dtype=np.int64)))
    if not piv:
        raise ValueError("vectors span the zero subspace")
    return Flat(len(piv) - 1, tuple(tuple(row) for row in R.data[: len(piv)].tolist()))


def incident(geom: Geometry, p: ProjPoint, W: Flat) -> bool:
    """True iff the point lies in the flat, by reducing against the RREF basis."""
    if len(p) != geom.n + 1 or any(len(row) != geom.n + 1 for row in W.basis):
        raise ValueError("dimension mismatch between point and flat")
    F = geom.field
    v = np.asarray(p, dtype=np.int64)
    for row, c in zip(W.basis, W.pivots):
        if v[c]:
            v = F.sub(v, F.mul(int(v[c]), np.asarray(row, dtype=np.int64)))
    return not v.any()


def incident_by_rank(geom: Geometry, p: ProjPoint, W: Flat) -> bool:
    """Incidence by the stacked rank test; independent of :func:`incident`."""
    M = MatrixFq(geom.field, np.vstack([np.asarray(W.basis), np.asarray(p)[None, :]]))
    return rank(M) == W.r + 1


def flat_point_indices(geom: Geometry, W: Flat) -> np.ndarray:
    """Indices of all points on W, sorted, via the span of its basis."""
    F = geom.field
    B = np.asarray(W.basis, dtype=np.int64)
    coeffs = np.array(list(itertools.product(range(geom.q), repeat=W.r + 1))[1:], dtype=np.int64)
    vecs = F.sum(F.mul(coeffs[:, :, None], B[None, :, :]), axis=1)
    return np.unique(geom.index_of(vecs))


# -- group action -----------------------------------------------------------

def group_element(geom: Geometry, matrix) -> GroupElement:
    M = matrix if isinstance(matrix, MatrixFq) else MatrixFq(geom.field, matrix)
    if M.shape != (geom.n + 1, geom.n + 1):
        raise ValueError(f"expected a {geom.n + 1}x{geom.n + 1} matrix")
    if rank(M) != geom.n + 1:
        raise ValueError("matrix is singular")
    return GroupElement(M)


def apply_group(geom: Geometry, g: GroupElement, p: ProjPoint) -> ProjPoint:
    if g.matrix.shape != (geom.n + 1, geom.n + 1) or len(p) != geom.n + 1:
        raise ValueError("dimension mismatch")
    w = g.matrix.matvec(np.asarray(p, dtype=np.int64))
    return tuple(int(x) for x in geom.normalize(w)[0])


def point_permutation(geom: Geometry, g: GroupElement) -> np.ndarray:
    """perm[i] = index of g applied to point i."""
    images = g.matrix.matvec(geom.point_array.T).T
    return geom.index_of(images)


def random_group_element(geom: Geometry, seed) -> GroupElement:
    """Uniform element of GL_(n+1)(q) by rejection sampling.

    ``seed`` may be an int or a ``numpy.random.Generator``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    k = geom.n + 1
    while True:
        M = MatrixFq(geom.field, rng.integers(0, geom.q, size=(k, k)))
        if rank(M) == k:
            return GroupElement(M)


def standard_generators(geom: Geometry) -> list[GroupElement]:
    """Generators of GL_(n+1)(q): a transposition, a cycle, the transvection
    e_1 -> e_1 + e_0, and diag(g, 1, ..., 1) for a primitive g."""
    k = geom.n + 1
    gens = []
    swap = np.eye(k, dtype=np.int64)
    swap[[0, 1]] = swap[[1, 0]]
    gens.append(swap)
    gens.append(np.roll(np.eye(k, dtype=np.int64), 1, axis=0))
    tv = np.eye(k, dtype=np.int64)
    tv[0, 1] = 1
    gens.append(tv)
    if geom.q > 2:
        d = np.eye(k, dtype=np.int64)
        d[0, 0] = geom.field.generator
        gens.append(d)
    return [GroupElement(MatrixFq(geom.field, m)) for m in gens]


def geometry(n: int, p: int, t: int = 1, modulus=None) -> Geometry:
    """Shorthand for ``Geometry(n, field_build(p, t, modulus))``."""
    from .gf import field_build

    return Geometry(n, field_build(p, t, modulus))
