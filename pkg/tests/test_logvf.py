import random
from fractions import Fraction as F

import pytest

from flatiso import catalog
from flatiso.errors import NotMonic, RowNotLogarithmic
from flatiso.flatcore import SaitoMatrices, build_saito_matrices, mat_scale
from flatiso.logvf import (DivisorData, discriminant, is_logarithmic,
                           log_ratio, logvf_identities, saito_criterion,
                           trace_identity_defects)
from flatiso.ring import Ring


def test_discriminant_klein(klein_matrices):
    d = discriminant(klein_matrices)
    assert d.h.degree_in(2) == 3
    assert d.h.is_homogeneous(3)
    lead = d.h.coeffs_in(2)[3]
    assert lead == klein_matrices.ring.one()


def test_discriminant_n1():
    ring = Ring(["1"])
    t1 = ring.var(0)
    m = SaitoMatrices(ring=ring, C=[[t1]], Btilde=[[[ring.one()]]],
                      T=[[-t1]], Binf=[F(1)])
    d = discriminant(m)
    assert d.h == t1


def test_not_monic_raises():
    ring = Ring(["1"])
    t1 = ring.var(0)
    m = SaitoMatrices(ring=ring, C=[[t1]], Btilde=[[[ring.one()]]],
                      T=[[-t1 * 2]], Binf=[F(1)])
    with pytest.raises(NotMonic):
        discriminant(m)


def test_euler_field_logarithmic(klein, klein_matrices):
    d = discriminant(klein_matrices)
    w = klein.weights
    t = klein.ring.gens()
    euler = [t[i] * w[i] for i in range(3)]
    assert is_logarithmic(euler, d)
    assert log_ratio(euler, d) == 3


def test_is_logarithmic_simple_cases():
    ring = Ring(["2/7", "3/7", "1"])
    t3 = ring.var(2)
    d = DivisorData(h=t3 ** 3, ring=ring)
    assert is_logarithmic([ring.one(), ring.zero(), ring.zero()], d)
    assert not is_logarithmic([ring.zero(), ring.zero(), ring.one()], d)
    # V = t3 d/dt3: V h = 3 h
    assert is_logarithmic([ring.zero(), ring.zero(), t3], d)
    assert log_ratio([ring.zero(), ring.zero(), t3], d) == 3


def test_saito_criterion_diagonal():
    ring = Ring(["2/7", "3/7", "1"])
    t3 = ring.var(2)
    d = DivisorData(h=t3 ** 3, ring=ring)
    MV = [[t3 if i == j else ring.zero() for j in range(3)] for i in range(3)]
    assert saito_criterion(MV, d) == 1
    MV2 = [row[:] for row in MV]
    MV2[0] = MV2[1]
    assert saito_criterion(MV2, d) is None


def test_saito_criterion_minus_t_catalog():
    for eid in ("LT8", "LT30", "H3p", "LT19"):
        m = build_saito_matrices(catalog.catalog_get(eid).pvf)
        d = discriminant(m)
        assert saito_criterion(mat_scale(m.T, F(-1)), d) == 1


def test_saito_criterion_row_not_logarithmic(klein_matrices):
    d = discriminant(klein_matrices)
    ring = klein_matrices.ring
    MV = [[ring.zero()] * 3 for _ in range(3)]
    MV[0][0] = ring.var(2)   # d/dt3-only field is not logarithmic for this h
    with pytest.raises(RowNotLogarithmic):
        saito_criterion(MV, d)


def test_identities_klein(klein_matrices):
    rep = logvf_identities(klein_matrices)
    assert rep.all_ok
    defects = trace_identity_defects(klein_matrices)
    assert all(v.is_zero() for v in defects.values())


def test_identity_iii_explicit(klein_matrices):
    # V_2 h / h = - d s_1 / d t_2 where s_1 is minus the t3^2-coefficient of h
    d = discriminant(klein_matrices)
    M = mat_scale(klein_matrices.T, F(-1))
    v2 = M[1]                       # V_2 = row n+1-2
    s1 = -d.h.coeffs_in(2)[2]
    assert log_ratio(v2, d) == -s1.partial(1)


def test_tn_free_logarithmic_fields_vanish(klein_matrices):
    # a nonzero field with t3-free coefficients cannot be logarithmic
    d = discriminant(klein_matrices)
    ring = klein_matrices.ring
    rng = random.Random(1234)
    for _ in range(10):
        v = []
        for i in range(3):
            e = ring.zero()
            for _ in range(2):
                c = F(rng.randrange(-5, 6), rng.randrange(1, 4))
                e = e + ring.const(c) * ring.var(0) ** rng.randrange(0, 3) \
                    * ring.var(1) ** rng.randrange(0, 3)
            v.append(e)
        if all(x.is_zero() for x in v):
            continue
        assert not is_logarithmic(v, d)
