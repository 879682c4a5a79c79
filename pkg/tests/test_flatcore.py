import random
from fractions import Fraction as F

import pytest

from flatiso import catalog, exprio, flatcore
from flatiso.errors import DegenerateJacobian, NoRescalingFound
from flatiso.flatcore import (PotentialVF, build_saito_matrices,
                              check_extended_wdvv, check_flat_normalization,
                              check_saito_relations, flat_coords_from_okubo,
                              frobenius_check, mat_det, mat_identity,
                              mat_is_zero, mat_scale, mat_sub)


def test_klein_matrices(klein, klein_matrices):
    ring = klein.ring
    t = ring.gens()
    m = klein_matrices
    # row n of C is (t1, t2, t3)
    for j in range(3):
        assert m.C[2][j] == t[j]
    # B^(3) = I
    assert mat_is_zero(mat_sub(m.Btilde[2], mat_identity(ring, 3)))
    # T11 = t1^2 t2 / 2 - t3
    assert m.T[0][0] == t[0] ** 2 * t[1] / 2 - t[2]
    # T entry weights 1 + w_j - w_i
    w = m.weights
    for i in range(3):
        for j in range(3):
            e = m.T[i][j]
            assert e.is_zero() or e.is_homogeneous(1 + w[j] - w[i])


def test_t11_matches_rational_evaluation(klein, klein_matrices):
    # independent oracle: T11 = -(1 + w1 - w1) dg1/dt1 at random rational points
    rng = random.Random(11)
    lhs = klein_matrices.T[0][0]
    rhs = -klein.g[0].partial(0)
    for _ in range(20):
        pt = tuple(F(rng.randrange(-9, 10), rng.randrange(1, 8)) for _ in range(3))
        assert lhs.subs_var(0, pt[0]).subs_var(1, pt[1]).subs_var(2, pt[2]) == \
            rhs.subs_var(0, pt[0]).subs_var(1, pt[1]).subs_var(2, pt[2])


def test_wdvv_all_pass(klein):
    rep = check_extended_wdvv(klein)
    assert rep.unit_ok and rep.homogeneity_ok and rep.commutators_ok
    assert rep.saito_relations_ok and rep.flat_normalization_ok
    assert rep.is_solution


def test_wdvv_trivial_n2(trivial_n2):
    rep = check_extended_wdvv(trivial_n2)
    assert rep.is_solution
    m = build_saito_matrices(trivial_n2)
    assert check_saito_relations(m)
    assert check_flat_normalization(m)


def test_wdvv_perturbed_klein(perturbed_klein):
    rep = check_extended_wdvv(perturbed_klein)
    # t1^7 has weight 2 = 1 + w3, so homogeneity survives but commutators break
    assert rep.homogeneity_ok
    assert not rep.commutators_ok
    assert rep.failing_commutators() == [(1, 2)]
    m = build_saito_matrices(perturbed_klein)
    assert not check_saito_relations(m)


def test_flat_normalization_hand_built(klein_matrices):
    m = klein_matrices
    assert check_flat_normalization(m)
    ring = m.ring
    bad = [row[:] for row in m.T]
    bad[2][0] = bad[2][0] + ring.one()
    broken = flatcore.SaitoMatrices(ring=ring, C=m.C, Btilde=m.Btilde,
                                    T=bad, Binf=m.Binf)
    assert not check_flat_normalization(broken)


def test_multiplication_matrix_symmetry(klein_matrices):
    # B^(k)_ij = B^(i)_kj: both are the mixed second partial of g_j
    B = klein_matrices.Btilde
    for k in range(3):
        for i in range(3):
            for j in range(3):
                assert (B[k][i][j] - B[i][k][j]).is_zero()


def test_saito_relations_catalog_subset():
    for eid in ("H3", "LT26", "LT27"):
        pvf = catalog.catalog_get(eid).pvf
        m = build_saito_matrices(pvf)
        assert check_saito_relations(m)


def test_rescaling_covariance(klein):
    # c_j g_j(c1^-1 t1, ..., t_n) is again a solution, for random rational c
    ring = klein.ring
    rng = random.Random(5)
    for _ in range(3):
        c = [F(rng.randrange(1, 6), rng.randrange(1, 4)) for _ in range(2)] + [F(1)]
        g2 = []
        for j, gj in enumerate(klein.g):
            e = gj
            out = ring.zero()
            for mono, coeff in e.num.items():
                scale = F(1)
                for i in range(2):
                    scale *= (F(1) / c[i]) ** mono[i + 1]
                out = out + ring.from_raw({mono: coeff * scale})
            g2.append(out * c[j])
        pvf2 = PotentialVF(ring=ring, g=g2, name="rescaled")
        assert check_extended_wdvv(pvf2).is_solution


# ---------------------------------------------------------------------------
# prepotential
# ---------------------------------------------------------------------------

def test_frobenius_h3_exact(h3):
    pre = frobenius_check(h3)
    assert pre is not None
    stored = exprio.parse_expr(h3.meta["prepotential"], h3.ring)
    assert (pre.F - stored).is_zero()
    assert pre.u == [F(1)] * 3 and pre.c == [F(1)] * 3
    assert pre.r == F(-3, 5)
    # EF = (1 - 2r) F
    assert pre.F.euler() == pre.F * (1 - 2 * pre.r)


def test_frobenius_klein_absent(klein):
    # 2/7 + 1 != 2 * 3/7: the weight pairing fails
    assert frobenius_check(klein) is None


def test_frobenius_n2_inconsistent(trivial_n2):
    # pairing holds trivially for n = 2 but no rescaling symmetrizes C
    with pytest.raises(NoRescalingFound):
        frobenius_check(trivial_n2)


def test_frobenius_nontrivial_rescaling(h3):
    # rescale the icosahedral field by c = (2, 3, 1): C stops being
    # persymmetric, and the search must recover pair products
    # u = (1, 2/9, 1) (normalized so u_3 = 1); the per-coordinate split
    # needs sqrt(2)/3, which is not rational, so c is None but F is exact
    ring = h3.ring
    c = [F(2), F(3), F(1)]
    g2 = []
    for j, gj in enumerate(h3.g):
        out = ring.zero()
        for mono, coeff in gj.num.items():
            scale = F(1)
            for i in range(2):
                scale *= (F(1) / c[i]) ** mono[i + 1]
            out = out + ring.from_raw({mono: coeff * scale})
        g2.append(out * c[j])
    pvf2 = PotentialVF(ring=ring, g=g2, name="H3-rescaled")
    assert check_extended_wdvv(pvf2).is_solution
    pre = frobenius_check(pvf2)
    assert pre is not None
    assert pre.u == [F(1), F(2, 9), F(1)]
    assert pre.c is None
    for i in range(3):
        assert (pre.F.partial(i) - g2[2 - i] * pre.u[i]).is_zero()
    assert pre.F.euler() == pre.F * (1 - 2 * pre.r)


# ---------------------------------------------------------------------------
# flat coordinates from a general-coordinates T
# ---------------------------------------------------------------------------

def test_flat_coords_identity_on_flat_input(klein, klein_matrices):
    # in flat coordinates T_nj = -w_j t_j, so the formula returns t_j itself
    w = klein.weights
    lam = [wj - 1 for wj in w]   # lambda_j - lambda_n + 1 = w_j
    res = flat_coords_from_okubo(klein_matrices.T, lam,
                                 points=[(1.0, 0.5, 0.2)])
    t = klein.ring.gens()
    for j in range(3):
        assert res.coords[j] == t[j]
    expected = F((-1) ** 3) * w[0] * w[1] * w[2]
    assert res.jacobian == klein.ring.const(expected)
    assert abs(res.jacobian_values[0] - complex(expected)) < 1e-12


def test_flat_coords_degenerate():
    from flatiso.ring import Ring
    ring = Ring(["1/2", "1"])
    one = ring.one()
    T = [[one, one], [one, one]]        # constant: all partials vanish
    with pytest.raises(DegenerateJacobian):
        flat_coords_from_okubo(T, [F(-1, 2), F(0)], points=[(0.3, 0.4)])


def test_mat_det_oracle(klein_matrices):
    # permanent-style expansion agrees with the cofactor determinant
    import itertools
    M = mat_scale(klein_matrices.T, F(-1))
    ring = klein_matrices.ring
    acc = ring.zero()
    for p in itertools.permutations(range(3)):
        sgn = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if p[i] > p[j]:
                    sgn = -sgn
        term = ring.one()
        for i in range(3):
            term = term * M[i][p[i]]
        acc = acc + term * sgn
    assert acc == mat_det(M)
