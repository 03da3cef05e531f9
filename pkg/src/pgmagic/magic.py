"""Pseudomagic functions: incidence matrices, classification and checks.

A function f on the points of P^n(q) is r-pseudomagic when its sum over
every r-flat is one common value c (the magic sum).  Those with c = 0 form
the kernel of the point/r-flat incidence matrix A_r.  A nonconstant basis
monomial lies in that kernel exactly when the smallest entry of its s-tuple
is at most r; this module computes both sides and compares them.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field as dc_field
from math import gcd
from typing import Sequence

import numpy as np

from .bounds import DEFAULT_SEARCH_EXHAUSTIVE, check_cells
from .exactla import IntMatrix, MatrixFq, kernel_basis, kernel_count_mod_m, nullity, rank, rref
from .gf import field_build
from .monomial import (
    Monomial,
    enumerate_basis,
    s_tuple,
    s_tuples,
    to_function_vector,
)
from .projgeom import (
    Flat,
    Geometry,
    flat_point_indices,
    point_permutation,
    random_group_element,
    standard_generators,
)


def _check_r(geom: Geometry, r: int) -> None:
    if not 0 < r < geom.n:
        raise ValueError(f"need 0 < r < n={geom.n}, got r={r}")


@dataclass(eq=False)
class IncidenceMatrix:
    """A_r: rows are r-flats, columns are points, both in canonical order."""

    inner: MatrixFq
    geom: Geometry
    r: int
    flats: list[Flat] = dc_field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.inner.shape

    @property
    def zero_one(self) -> np.ndarray:
        return self.inner.data

    def integer_lift(self) -> IntMatrix:
        return IntMatrix.from_array(self.inner.data)

    def apply(self, f) -> np.ndarray:
        """Per-flat sums of f (a value vector, or a |P| x k block of them).

        A_r is 0/1, so the sums are integer sums of base-p digits taken mod p.
        """
        F = self.geom.field
        f = np.asarray(f, dtype=np.int64)
        if f.shape[0] != self.shape[1]:
            raise ValueError(f"function has {f.shape[0]} values, expected {self.shape[1]}")
        digits = F.digits[f]
        if f.ndim == 1:
            s = self.zero_one @ digits
        else:
            s = np.einsum("wp,pkt->wkt", self.zero_one, digits)
        return F.from_digits(s % F.p)


def build_incidence(geom: Geometry, r: int) -> IncidenceMatrix:
    _check_r(geom, r)
    flats = geom.flats(r)
    check_cells(len(flats) * geom.num_points, f"A_{r} of P^{geom.n}({geom.q})")
    A = np.zeros((len(flats), geom.num_points), dtype=np.int64)
    for i, W in enumerate(flats):
        A[i, flat_point_indices(geom, W)] = 1
    return IncidenceMatrix(MatrixFq(geom.field, A), geom, r, flats)


def apply_incidence(A: IncidenceMatrix, f) -> np.ndarray:
    return A.apply(f)


@dataclass(frozen=True)
class MagicReport:
    is_pseudomagic: bool
    magic_sum: int | None = None
    failing_flat: int | None = None


def magic_report(A: IncidenceMatrix, f) -> MagicReport:
    sums = A.apply(f)
    diff = np.flatnonzero(sums != sums[0])
    if diff.size:
        return MagicReport(False, None, int(diff[0]))
    return MagicReport(True, int(sums[0]), None)


def classify_monomial(m: Monomial, r: int) -> bool:
    """Predicted membership of m in r-Mag_0: min over the s-tuple <= r."""
    _check_r(m.geom, r)
    return min(s_tuple(m)) <= r


# -- dimensions --------------------------------------------------------------

def mag0_dim_linear(geom: Geometry, r: int) -> int:
    return nullity(build_incidence(geom, r).inner)


def mag0_dim_combinatorial(geom: Geometry, r: int) -> int:
    _check_r(geom, r)
    return sum(min(s) <= r for s in s_tuples(geom).values())


def mag_dim(geom: Geometry, r: int) -> int:
    """Dimension of all r-pseudomagic functions: kernel of [A_r | 1],
    whose solutions (f, c) are exactly f with constant flat sums -c."""
    A = build_incidence(geom, r)
    aug = np.hstack([A.zero_one, np.ones((A.shape[0], 1), dtype=np.int64)])
    return nullity(MatrixFq(geom.field, aug))


def mag_dim_affine(geom: Geometry, r: int) -> int:
    """Same dimension by solving A_r f = c*1 for every c in F_q.

    Solutions for all c together form a space of q**dim elements: each
    solvable c contributes q**dim(Ker) of them.
    """
    A = build_incidence(geom, r)
    base = rank(A.inner)
    solvable = 0
    for c in range(geom.q):
        aug = np.hstack([A.zero_one, np.full((A.shape[0], 1), c, dtype=np.int64)])
        solvable += rank(MatrixFq(geom.field, aug)) == base
    k = A.shape[1] - base
    total, dim = solvable * geom.q**k, 0
    while total % geom.q == 0:
        total //= geom.q
        dim += 1
    if total != 1:
        raise ArithmeticError("solution set size is not a power of q")
    return dim


@dataclass
class TheoremReport:
    n: int
    q: int
    r: int
    monomials_checked: int
    mismatches: list = dc_field(default_factory=list)
    dim_linear: int = 0
    dim_combinatorial: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.dim_linear == self.dim_combinatorial

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def kernel_membership(A: IncidenceMatrix, monomials: Sequence[Monomial]) -> list[bool]:
    """Direct check of A_r * m == 0 for each monomial's value vector."""
    if not monomials:
        return []
    block = np.stack([to_function_vector(m) for m in monomials], axis=1)
    return [not col.any() for col in A.apply(block).T]


def verify_theorem_main(geom: Geometry, r: int) -> TheoremReport:
    A = build_incidence(geom, r)
    monos = [m for m in enumerate_basis(geom) if not m.is_constant]
    actual = kernel_membership(A, monos)
    report = TheoremReport(geom.n, geom.q, r, len(monos))
    for m, in_kernel in zip(monos, actual):
        predicted = classify_monomial(m, r)
        if predicted != in_kernel:
            report.mismatches.append(
                {"b": list(m.b), "s": list(s_tuple(m)), "predicted": predicted, "in_kernel": in_kernel}
            )
    report.dim_linear = nullity(A.inner)
    report.dim_combinatorial = mag0_dim_combinatorial(geom, r)
    return report


# -- group orbits ------------------------------------------------------------

def group_permutations(geom: Geometry, n_random: int = 4, seed=0) -> list[np.ndarray]:
    """Point permutations of the standard GL generators plus seeded random ones."""
    rng = np.random.default_rng(seed)
    gens = standard_generators(geom) + [random_group_element(geom, rng) for _ in range(n_random)]
    return [point_permutation(geom, g) for g in gens]


def span_closure(geom: Geometry, vectors, perms: Sequence[np.ndarray]) -> MatrixFq:
    """RREF basis of the smallest permutation-stable subspace containing vectors."""
    F = geom.field
    R, piv = rref(MatrixFq(F, np.atleast_2d(np.asarray(vectors, dtype=np.int64))))
    basis = R.data[: len(piv)]
    while True:
        images = [basis[:, perm] for perm in perms]
        R, piv = rref(MatrixFq(F, np.vstack([basis] + images)))
        if len(piv) == len(basis):
            return MatrixFq(F, R.data[: len(piv)])
        basis = R.data[: len(piv)]


def orbit_span_dim(m: Monomial | np.ndarray, n_random: int = 4, seed=0,
                   geom: Geometry | None = None) -> int:
    """Dimension of the span of the GL_(n+1)(q)-orbit of a function.

    Accepts a monomial, or a value vector together with ``geom``.
    """
    if isinstance(m, Monomial):
        geom, vec = m.geom, to_function_vector(m)
    else:
        if geom is None:
            raise ValueError("a value vector needs its geometry")
        vec = np.asarray(m, dtype=np.int64)
    if not vec.any():
        return 0
    return span_closure(geom, vec, group_permutations(geom, n_random, seed)).rows


# -- coefficient groups Z/m ----------------------------------------------------

@dataclass
class TorsionReport:
    """Counts of Z/m-valued labelings for the integer incidence matrix.

    ``kernel_count`` counts labelings with every flat sum 0 and
    ``labeling_count`` those with any common flat sum.  A constant c has
    flat sums ``points_per_flat * c``, so the constants alone put
    gcd(points_per_flat, m) elements in the kernel.
    """

    n: int
    q: int
    p: int
    r: int
    m: int
    gcd_with_p: int
    points_per_flat: int
    kernel_count: int
    labeling_count: int
    fp_nullity: int

    @property
    def constants_in_kernel(self) -> int:
        return gcd(self.points_per_flat, self.m)

    @property
    def ok(self) -> bool:
        """Coprime m: the labelings are exactly the m constants.
        m = p: the kernel has p**(nullity over F_p) elements."""
        if self.gcd_with_p == 1:
            return self.labeling_count == self.m and self.kernel_count == self.constants_in_kernel
        if self.m == self.p:
            return self.kernel_count == self.p**self.fp_nullity
        return True

    def to_dict(self) -> dict:
        d = asdict(self)
        d["constants_in_kernel"] = self.constants_in_kernel
        d["ok"] = self.ok
        return d


def check_no_p_torsion(geom: Geometry, r: int, m: int) -> TorsionReport:
    A = build_incidence(geom, r)
    lift = A.integer_lift()
    kernel = kernel_count_mod_m(lift, m)
    labelings = kernel_count_mod_m(lift.hstack([-1] * A.shape[0]), m)
    p = geom.field.p
    fp_null = nullity(MatrixFq(field_build(p), A.zero_one))
    per_flat = (geom.q ** (r + 1) - 1) // (geom.q - 1)
    return TorsionReport(geom.n, geom.q, p, r, m, gcd(m, p), per_flat, kernel, labelings, fp_null)


# -- injective labelings ------------------------------------------------------

@dataclass
class SearchReport:
    status: str  # "impossible" | "found" | "exhausted" | "budget_spent"
    mode: str  # "pigeonhole" | "exhaustive" | "random"
    d: int
    num_points: int
    kernel_dim: int
    search_space: int
    tested: int = 0
    witness_coords: list | None = None
    witness_values: list | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def is_injective(q: int, vectors: Sequence[np.ndarray]) -> bool:
    """Whether the combined map point -> (v_1, ..., v_d) is injective."""
    codes = np.zeros(len(vectors[0]), dtype=np.int64)
    for v in vectors:
        codes = codes * q + np.asarray(v, dtype=np.int64)
    return np.unique(codes).size == codes.size


def search_injective(geom: Geometry, r: int, d: int, budget: int = 100_000, seed=0,
                     exhaustive_limit: int = DEFAULT_SEARCH_EXHAUSTIVE) -> SearchReport:
    """Look for d functions in r-Mag_0 that jointly separate all points.

    Kernel vectors are addressed by their coordinates in the kernel basis.
    When the number of coordinate tuples q**(d*k) is at most
    ``exhaustive_limit`` the whole space is searched (as multisets, with
    pruning); otherwise ``budget`` seeded random tuples are tried.
    """
    _check_r(geom, r)
    F, q, P = geom.field, geom.q, geom.num_points
    A = build_incidence(geom, r)
    basis = kernel_basis(A.inner)
    k = len(basis)
    space = q ** (d * k)
    report = SearchReport("impossible", "pigeonhole", d, P, k, space)
    if d < 1 or q**d < P:
        return report
    K = np.array(basis, dtype=np.int64).reshape(k, P)

    def combine(coeffs: np.ndarray) -> np.ndarray:
        if k == 0:
            return np.zeros((len(coeffs), P), dtype=np.int64)
        return F.sum(F.mul(coeffs[:, :, None], K[None, :, :]), axis=1)

    def found(coeffs, vecs):
        report.status = "found"
        report.witness_coords = [[int(x) for x in c] for c in coeffs]
        report.witness_values = [[int(x) for x in v] for v in vecs]
        return report

    if space <= exhaustive_limit:
        report.mode = "exhaustive"
        all_coeffs = np.array(list(itertools.product(range(q), repeat=k)), dtype=np.int64).reshape(-1, k)
        all_vecs = combine(all_coeffs)
        # depth-first over nondecreasing vector indices; a fibre larger than
        # q**(remaining copies) can never be separated
        stack = [(0, 0, np.zeros(P, dtype=np.int64), ())]
        while stack:
            depth, start, codes, chosen = stack.pop()
            if depth == d:
                return found(all_coeffs[list(chosen)], all_vecs[list(chosen)])
            cap = q ** (d - depth - 1)
            children = []
            for i in range(start, len(all_vecs)):
                if report.tested >= budget:
                    report.status = "budget_spent"
                    return report
                report.tested += 1
                new = codes * q + all_vecs[i]
                if np.unique(new, return_counts=True)[1].max() <= cap:
                    children.append((depth + 1, i, new, chosen + (i,)))
            stack.extend(reversed(children))
        report.status = "exhausted"
        return report

    report.mode = "random"
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        report.tested += 1
        coeffs = rng.integers(0, q, size=(d, k))
        vecs = combine(coeffs)
        if is_injective(q, vecs):
            return found(coeffs, vecs)
    report.status = "budget_spent"
    return report
