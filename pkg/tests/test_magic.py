import itertools

import numpy as np
import pytest

from pgmagic.exactla import MatrixFq, in_row_space, kernel_basis
from pgmagic.magic import (
    build_incidence,
    apply_incidence,
    check_no_p_torsion,
    classify_monomial,
    group_permutations,
    is_injective,
    kernel_membership,
    mag0_dim_combinatorial,
    mag0_dim_linear,
    mag_dim,
    mag_dim_affine,
    magic_report,
    orbit_span_dim,
    search_injective,
    verify_theorem_main,
)
from pgmagic.monomial import Monomial, enumerate_basis, s_tuple, to_function_vector, y_dimension
from pgmagic.projgeom import Flat, canonical_flat, geometry

SMALL = [(2, 2, 1), (2, 3, 1), (2, 2, 2), (3, 2, 1)]


def brute_kernel(A, m):
    """All Z/m labelings with every flat sum 0, by enumeration."""
    cols = A.shape[1]
    xs = np.array(list(itertools.product(range(m), repeat=cols)), dtype=np.int64)
    return int(np.all((xs @ A.zero_one.T) % m == 0, axis=1).sum())


def brute_labelings(A, m):
    cols = A.shape[1]
    xs = np.array(list(itertools.product(range(m), repeat=cols)), dtype=np.int64)
    sums = (xs @ A.zero_one.T) % m
    return int(np.all(sums == sums[:, :1], axis=1).sum())


@pytest.mark.parametrize("n,p,r,shape,row_sum", [(2, 2, 1, (7, 7), 3), (3, 2, 2, (15, 15), 7), (3, 2, 1, (35, 15), 3)])
def test_incidence_shapes(n, p, r, shape, row_sum):
    A = build_incidence(geometry(n, p), r)
    assert A.shape == shape
    assert np.all(A.zero_one.sum(axis=1) == row_sum)
    assert set(np.unique(A.zero_one).tolist()) <= {0, 1}


def test_incidence_rejects_r():
    geom = geometry(2, 2)
    for r in (0, 2, -1):
        with pytest.raises(ValueError):
            build_incidence(geom, r)


def test_incidence_is_deterministic():
    a = build_incidence(geometry(2, 3), 1)
    b = build_incidence(geometry(2, 3), 1)
    assert a.inner == b.inner and a.flats == b.flats


def test_apply_length_mismatch():
    A = build_incidence(geometry(2, 2), 1)
    with pytest.raises(ValueError):
        apply_incidence(A, [0] * 6)


@pytest.mark.parametrize("n,p,t", SMALL)
def test_zero_and_constant_functions(n, p, t):
    geom = geometry(n, p, t)
    for r in range(1, n):
        A = build_incidence(geom, r)
        rep = magic_report(A, np.zeros(geom.num_points, dtype=int))
        assert rep.is_pseudomagic and rep.magic_sum == 0 and rep.failing_flat is None
        rep = magic_report(A, np.ones(geom.num_points, dtype=int))
        assert rep.is_pseudomagic and rep.magic_sum == 1


def test_line_sum_of_square_monomial_q3():
    geom = geometry(2, 3)
    A = build_incidence(geom, 1)
    m = Monomial((2, 2, 0), geom)
    sums = apply_incidence(A, to_function_vector(m))
    line = A.flats.index(canonical_flat(geom, [(1, 0, 0), (0, 1, 0)]))
    assert sums[line] == 2
    rep = magic_report(A, to_function_vector(m))
    assert not rep.is_pseudomagic and rep.magic_sum is None and rep.failing_flat is not None


def test_magic_report_points_at_failure():
    geom = geometry(2, 2)
    A = build_incidence(geom, 1)
    f = np.zeros(geom.num_points, dtype=int)
    f[0] = 1
    rep = magic_report(A, f)
    assert not rep.is_pseudomagic
    sums = apply_incidence(A, f)
    assert sums[rep.failing_flat] != sums[0]


def test_classify_examples():
    g2 = geometry(2, 2)
    assert classify_monomial(Monomial((1, 0, 0), g2), 1)
    assert not classify_monomial(Monomial((1, 1, 0), g2), 1)
    assert classify_monomial(Monomial((2, 2, 2), geometry(2, 2, 2)), 1)
    assert not classify_monomial(Monomial((2, 2, 0), geometry(2, 3)), 1)
    with pytest.raises(ValueError):
        classify_monomial(Monomial((0, 0, 0), g2), 1)


@pytest.mark.parametrize("n,p,t,r,dim", [(2, 2, 1, 1, 3), (2, 2, 2, 1, 11), (3, 2, 1, 2, 10), (2, 3, 1, 1, 6)])
def test_mag0_dimensions(n, p, t, r, dim):
    geom = geometry(n, p, t)
    assert mag0_dim_linear(geom, r) == mag0_dim_combinatorial(geom, r) == dim


@pytest.mark.parametrize("n,p,t,r,dim", [(2, 2, 1, 1, 4), (2, 3, 1, 1, 7), (2, 2, 2, 1, 12), (3, 2, 1, 1, 5)])
def test_mag_dim(n, p, t, r, dim):
    geom = geometry(n, p, t)
    assert mag_dim(geom, r) == mag_dim_affine(geom, r) == dim == mag0_dim_linear(geom, r) + 1


@pytest.mark.parametrize("n,p,t,r,count", [(2, 3, 1, 1, 12), (3, 2, 1, 1, 14), (3, 2, 1, 2, 14), (2, 2, 2, 1, 20)])
def test_verify_examples(n, p, t, r, count):
    rep = verify_theorem_main(geometry(n, p, t), r)
    assert rep.monomials_checked == count
    assert rep.mismatches == [] and rep.ok
    d = rep.to_dict()
    assert d["ok"] and d["dim_linear"] == d["dim_combinatorial"]


def test_kernel_membership_agrees_with_kernel_basis():
    geom = geometry(2, 2, 2)
    A = build_incidence(geom, 1)
    monos = [m for m in enumerate_basis(geom) if not m.is_constant]
    K = MatrixFq(geom.field, np.array(kernel_basis(A.inner)))
    for m, member in zip(monos, kernel_membership(A, monos)):
        assert member == in_row_space(K, to_function_vector(m))
    assert kernel_membership(A, []) == []


def test_orbit_examples():
    g2 = geometry(2, 2)
    assert orbit_span_dim(Monomial((1, 0, 0), g2)) == 3 == y_dimension(g2, (1,))
    g4 = geometry(2, 2, 2)
    assert orbit_span_dim(Monomial((3, 0, 0), g4)) == 9 == y_dimension(g4, (1, 1))
    assert orbit_span_dim(np.ones(g4.num_points, dtype=int), geom=g4) == 1
    assert orbit_span_dim(np.zeros(7, dtype=int), geom=g2) == 0
    with pytest.raises(ValueError):
        orbit_span_dim(np.ones(7, dtype=int))


@pytest.mark.parametrize("n,p,t", SMALL)
def test_orbit_span_is_independent_of_seed(n, p, t):
    geom = geometry(n, p, t)
    for m in enumerate_basis(geom)[1::4]:
        assert orbit_span_dim(m, seed=1) == orbit_span_dim(m, n_random=0) == y_dimension(geom, s_tuple(m))


def test_torsion_oracles_fano():
    geom = geometry(2, 2)
    A = build_incidence(geom, 1)
    for m in (2, 3, 4, 5):
        rep = check_no_p_torsion(geom, 1, m)
        assert rep.kernel_count == brute_kernel(A, m)
        assert rep.labeling_count == brute_labelings(A, m)
        assert rep.ok
    assert check_no_p_torsion(geom, 1, 2).kernel_count == 8
    # three points per line: constants c with 3c = 0 survive mod 3
    assert check_no_p_torsion(geom, 1, 3).kernel_count == 3
    assert check_no_p_torsion(geom, 1, 5).kernel_count == 1


def test_torsion_oracle_q3_mod2():
    geom = geometry(2, 3)
    A = build_incidence(geom, 1)
    rep = check_no_p_torsion(geom, 1, 2)
    assert rep.kernel_count == brute_kernel(A, 2) == 2
    assert rep.labeling_count == brute_labelings(A, 2) == 2
    assert rep.constants_in_kernel == 2 and rep.ok


@pytest.mark.parametrize(
    "n,p,t,r,m",
    [(2, 2, 1, 1, 3), (2, 2, 1, 1, 5), (2, 2, 1, 1, 7), (2, 3, 1, 1, 2), (2, 3, 1, 1, 4), (2, 3, 1, 1, 5), (3, 2, 1, 2, 3)],
)
def test_coprime_kernel_is_constants_killed_by_flat_size(n, p, t, r, m):
    geom = geometry(n, p, t)
    rep = check_no_p_torsion(geom, r, m)
    assert rep.labeling_count == m
    assert rep.kernel_count == rep.constants_in_kernel == np.gcd(rep.points_per_flat, m)
    A = build_incidence(geom, r)
    if m ** A.shape[1] <= 2**21:
        assert rep.kernel_count == brute_kernel(A, m)
        assert rep.labeling_count == brute_labelings(A, m)


@pytest.mark.parametrize("n,p,t,r", [(2, 2, 1, 1), (2, 3, 1, 1), (3, 2, 1, 2)])
def test_contrast_case_m_equals_p(n, p, t, r):
    geom = geometry(n, p, t)
    rep = check_no_p_torsion(geom, r, p)
    assert rep.kernel_count == p**rep.fp_nullity > 1
    assert rep.to_dict()["ok"]


@pytest.mark.parametrize("n,p,t", SMALL + [(3, 3, 1)])
def test_m_r_behaviour(n, p, t):
    geom = geometry(n, p, t)
    q, F = geom.q, geom.field
    for r in range(1, n):
        b = (q - 1,) * (r + 1) + (0,) * (n - r)
        A = build_incidence(geom, r)
        sums = apply_incidence(A, to_function_vector(Monomial(b, geom)))
        eye = np.eye(n + 1, dtype=int)
        w = A.flats.index(Flat(r, tuple(map(tuple, eye[: r + 1].tolist()))))
        w2 = A.flats.index(canonical_flat(geom, eye[1 : r + 2]))
        expect = F.neg(F.from_int((q - 1) ** (r + 1) % p))
        assert sums[w] == expect != 0
        assert sums[w2] == 0


@pytest.mark.parametrize("n,p,t", [(3, 2, 1), (3, 3, 1), (4, 2, 1)])
def test_monotonicity(n, p, t):
    geom = geometry(n, p, t)
    kernels = {r: kernel_basis(build_incidence(geom, r).inner) for r in range(1, n)}
    for r, r2 in itertools.combinations(range(1, n), 2):
        big = MatrixFq(geom.field, np.array(kernels[r2]))
        assert all(in_row_space(big, v) for v in kernels[r])
        assert len(kernels[r]) < len(kernels[r2])


@pytest.mark.parametrize("n,p,t", SMALL + [(2, 3, 2)])
def test_frobenius_and_group_stability(n, p, t):
    geom = geometry(n, p, t)
    perms = group_permutations(geom, n_random=5, seed=7)
    for r in range(1, n):
        A = build_incidence(geom, r)
        basis = np.array(kernel_basis(A.inner))
        assert not apply_incidence(A, geom.field.frobenius(basis).T).any()
        for perm in perms:
            assert not apply_incidence(A, basis[:, perm].T).any()


@pytest.mark.parametrize("n,p,t", SMALL + [(3, 3, 1)])
def test_degree_rule(n, p, t):
    geom = geometry(n, p, t)
    q = geom.q
    for r in range(1, n):
        monos = [m for m in enumerate_basis(geom) if m.degree == r * (q - 1)]
        assert monos and all(kernel_membership(build_incidence(geom, r), monos))


def test_search_pigeonhole():
    rep = search_injective(geometry(2, 2), 1, 1)
    assert rep.status == "impossible" and rep.mode == "pigeonhole" and rep.tested == 0
    assert search_injective(geometry(2, 2), 1, 2).status == "impossible"


def test_search_exhaustive_fano_matches_oracle():
    geom = geometry(2, 2)
    A = build_incidence(geom, 1)
    K = np.array(kernel_basis(A.inner))
    vecs = [np.array(c) @ K % 2 for c in itertools.product((0, 1), repeat=3)]
    oracle = any(is_injective(2, triple) for triple in itertools.product(vecs, repeat=3))
    rep = search_injective(geom, 1, 3)
    assert rep.mode == "exhaustive" and rep.search_space == 2**9
    assert (rep.status == "found") == oracle
    assert is_injective(2, rep.witness_values)
    for v in rep.witness_values:
        assert not apply_incidence(A, v).any()


def test_search_exhaustive_in_p3_2():
    # P^3(2) with r=1: Ker A_1 has dimension 4, and 4 copies are needed for 15 points
    geom = geometry(3, 2)
    rep = search_injective(geom, 1, 4)
    assert rep.mode == "exhaustive"
    K = np.array(kernel_basis(build_incidence(geom, 1).inner))
    assert K.shape[0] == 4
    # the coordinate functions are linear forms in Ker A_1, so a witness exists
    assert rep.status == "found"


def test_search_random_mode_is_seeded():
    geom = geometry(2, 3)
    a = search_injective(geom, 1, 3, budget=2000, seed=5, exhaustive_limit=10)
    b = search_injective(geom, 1, 3, budget=2000, seed=5, exhaustive_limit=10)
    assert a.mode == "random" and a.to_dict() == b.to_dict()
    assert a.status == "found"


def test_search_budget():
    rep = search_injective(geometry(2, 3), 1, 3, budget=1, seed=0, exhaustive_limit=10)
    assert rep.tested == 1 and rep.status in {"found", "budget_spent"}


def test_zero_tuple_not_injective():
    assert not is_injective(2, [np.zeros(7, dtype=int)] * 3)
    assert is_injective(3, [np.array([0, 1, 2])])
