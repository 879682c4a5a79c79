import numpy as np
import pytest

from flatiso import catalog, p6
from flatiso.errors import EntryIdenticallyZero, InsufficientSamples
from flatiso.flatcore import build_saito_matrices, mat_adjugate


def entry_setup(eid):
    e = catalog.catalog_get(eid)
    m = build_saito_matrices(e.pvf)
    return e, m


def test_roots_of_h_vieta_klein():
    e, m = entry_setup("LT8")
    from flatiso.logvf import discriminant
    h = discriminant(m).h
    hc = h.coeffs_in(2)
    pt = (1.0, 1.0)
    roots = p6.roots_of_h(m, pt)
    full = pt + (0.0,)
    # sum of roots = -coeff of t3^2; product = -constant coefficient (cubic)
    assert abs(sum(roots) + hc[2].eval(full)) < 1e-12
    prod = roots[0] * roots[1] * roots[2]
    assert abs(prod + hc[0].eval(full)) < 1e-10


def test_roots_ordering_and_continuation():
    e, m = entry_setup("LT8")
    r1 = p6.roots_of_h(m, (1.0, 0.4))
    assert list(np.argsort([x.real for x in r1])) == [0, 1, 2]
    r2 = p6.roots_of_h(m, (1.0, 0.41), prev_roots=r1)
    assert np.abs(np.array(r2) - np.array(r1)).max() < 0.1


def test_adjugate_entries_linear_in_t3():
    # the off-diagonal entries of h B^(3) have t3-degree <= 1, symbolically
    for eid in ("LT8", "H3", "LT30", "H3p"):
        e, m = entry_setup(eid)
        adj = mat_adjugate(m.T)
        for i in range(3):
            for j in range(3):
                if i != j:
                    assert adj[i][j].degree_in(2) <= 1


def test_entry_column_three_rejected():
    e, m = entry_setup("LT8")
    lam = p6.default_lambda(e.pvf.ring.weights)   # lambda_3 = 0
    with pytest.raises(EntryIdenticallyZero):
        p6.extract_p6_solution(m, lam, (1, 3), e.default_path.points)


def test_extraction_finite_and_regular():
    e, m = entry_setup("LT8")
    lam = p6.default_lambda(e.pvf.ring.weights)
    samples = p6.extract_p6_solution(m, lam, (1, 2), e.default_path.points,
                                     svals=e.path_svals)
    assert len(samples) == 41
    for s in samples:
        assert np.isfinite(s.y.real) and np.isfinite(s.y.imag)
        assert min(abs(s.t), abs(s.t - 1)) > 1e-3


def test_residual_below_tolerance_and_sensitivity():
    e, m = entry_setup("LT8")
    lam = p6.default_lambda(e.pvf.ring.weights)
    samples = p6.extract_p6_solution(m, lam, (1, 2), e.default_path.points,
                                     svals=e.path_svals)
    params = p6.p6_parameters(m, e.default_path.points[0])
    res = p6.p6_residual(samples, params)
    assert res < 1e-6
    # perturbing y by 1e-3 must blow the residual past 1e-4
    for s in samples:
        s.y = s.y + 1e-3
    res_bad = p6.p6_residual(samples, params)
    assert res_bad > 1e-4


def test_relabeling_roots_keeps_residual_small():
    # relabeling z_1 <-> z_2 changes the cross-ratios and the theta
    # assignment (theta_0' = r_2 etc.) but not the matrix entry or the
    # Okubo diagonal; the relabeled run must still satisfy PVI
    e, m = entry_setup("LT8")
    lam = p6.default_lambda(e.pvf.ring.weights)
    first = p6.roots_of_h(m, e.default_path.points[0])
    prev = np.array([first[1], first[0], first[2]])
    samples = p6.extract_p6_solution(m, lam, (1, 2), e.default_path.points,
                                     svals=e.path_svals, initial_roots=prev)
    sampler = p6.StructureSampler(m)
    sampler._prev_roots = prev
    params = p6.p6_parameters(m, e.default_path.points[0], lam=lam,
                              sampler=sampler)
    res = p6.p6_residual(samples, params)
    assert res < 1e-6
    # the relabeled t really is the 0 <-> 1 swapped cross-ratio
    plain = p6.extract_p6_solution(m, lam, (1, 2), e.default_path.points[:5],
                                   svals=e.path_svals[:5])
    t_plain, t_swapped = plain[0].t, samples[0].t
    assert abs(t_swapped - (1 - t_plain)) < 1e-9


def test_weighted_scaling_invariance():
    # t_i -> c^(w_i d) t_i leaves the cross-ratios invariant (weight-zero data)
    e, m = entry_setup("LT8")
    lam = p6.default_lambda(e.pvf.ring.weights)
    samples = p6.extract_p6_solution(m, lam, (1, 2), e.default_path.points,
                                     svals=e.path_svals)
    c, d = 1.3, 7          # weights k/7: c^(w d) has integer exponents
    w = [float(x) for x in e.pvf.ring.weights]
    scaled_path = [(tp[0] * c ** (w[0] * d), tp[1] * c ** (w[1] * d))
                   for tp in e.default_path.points]
    scaled = p6.extract_p6_solution(m, lam, (1, 2), scaled_path,
                                    svals=e.path_svals)
    for a, b in zip(samples, scaled):
        assert abs(a.t - b.t) < 1e-10
        assert abs(a.y - b.y) < 1e-10


def test_parameters_klein():
    e, m = entry_setup("LT8")
    params = p6.p6_parameters(m, e.default_path.points[0])
    # theta_inf = w1 - w2 = -1/7
    assert abs(params.thetainf - (2 / 7 - 3 / 7)) < 1e-12
    # trace identity: sum r_i = -sum lambda_i (trace of -Binf under conjugation)
    lam = p6.default_lambda(e.pvf.ring.weights)
    assert abs(sum(params.r) + sum(complex(x) for x in lam)) < 1e-12
    # parameter dictionary consistency
    assert abs(params.alpha - 0.5 * (params.thetainf - 1) ** 2) < 1e-14
    assert abs(params.beta + 0.5 * params.theta0 ** 2) < 1e-14
    assert abs(params.gamma - 0.5 * params.theta1 ** 2) < 1e-14
    assert abs(params.delta - 0.5 * (1 - params.thetat ** 2)) < 1e-14


def test_parameters_constant_along_path():
    e, m = entry_setup("H3pp")
    sampler = p6.StructureSampler(m, z_seed=e.z_seed)
    p1 = p6.p6_parameters(m, e.default_path.points[0], sampler=sampler)
    p2 = p6.p6_parameters(m, e.default_path.points[-1], sampler=sampler)
    assert abs(np.array(p1.r) - np.array(p2.r)).max() < 1e-8


def test_pvi_limit_fixture_y_equals_t():
    # y = t with alpha = beta = gamma = 0, delta = 1/2 solves PVI as a limit:
    # rhs(t + eps) stays bounded and goes to 0 with eps
    params = p6.P6Params.from_thetas(0, 0, 0, 1)
    params.delta = 0.5
    params.alpha = params.beta = params.gamma = 0.0
    t = 2.3
    vals = [abs(p6.pvi_rhs(t, t + eps, 1.0, params))
            for eps in (1e-2, 1e-3, 1e-4)]
    assert vals[0] < 1e-1
    assert vals[2] < vals[0]
    assert vals[2] < 1e-3


def test_pvi_exact_family_sqrt_t():
    # y = sqrt(t) solves PVI whenever alpha + beta = 0, gamma + delta = 1/2
    params = p6.P6Params.from_thetas(0.5, 0.5, 0.5, 1.5)
    assert abs(params.alpha - 1 / 8) < 1e-15 and abs(params.beta + 1 / 8) < 1e-15
    assert abs(params.gamma - 1 / 8) < 1e-15 and abs(params.delta - 3 / 8) < 1e-15
    ts = np.linspace(2.0, 3.0, 101)
    samples = []
    for s, t in enumerate(ts):
        samples.append(p6.P6Sample(s=float(t), tprime=(0, 0), roots=(0, 0, 0),
                                   z_entry=0, t=t, y=np.sqrt(t)))
    p6._differentiate_samples(samples)
    res = p6.p6_residual(samples, params)
    assert res < 1e-9


def test_insufficient_samples():
    params = p6.P6Params.from_thetas(0, 0, 0, 1)
    few = [p6.P6Sample(s=float(k), tprime=(0, 0), roots=(0, 0, 0), z_entry=0,
                       t=2.0 + k, y=1.0) for k in range(3)]
    with pytest.raises(InsufficientSamples):
        p6.p6_residual(few, params)


def test_csv_and_json_reports():
    e, m = entry_setup("LT8")
    lam = p6.default_lambda(e.pvf.ring.weights)
    samples = p6.extract_p6_solution(m, lam, (1, 2),
                                     e.default_path.points[:7],
                                     svals=e.path_svals[:7])
    csv = p6.samples_to_csv(samples)
    assert csv.splitlines()[0] == "s,t1,t2,t,y,dy,d2y,residual"
    assert len(csv.splitlines()) == 8
    params = p6.p6_parameters(m, e.default_path.points[0])
    blob = p6.params_to_json(params)
    assert set(blob) >= {"theta", "alpha", "beta", "gamma", "delta", "r"}


def test_entry_survey_reports_all_six():
    e, m = entry_setup("LT8")
    lam = p6.default_lambda(e.pvf.ring.weights)
    survey = p6.entry_survey(m, lam, e.default_path.points,
                             svals=e.path_svals)
    assert set(survey) == {"1,2", "2,1", "1,3", "3,1", "2,3", "3,2"}
    # the lambda_3 = 0 normalization kills column 3
    assert survey["1,3"] == {"error": "EntryIdenticallyZero"}
    assert survey["2,3"] == {"error": "EntryIdenticallyZero"}
    # the default branch satisfies its dictionary tightly; others are
    # reported without any equivalence assertion
    assert survey["1,2"]["residual"] < 1e-6
    assert survey["3,1"]["residual"] < 1e-4
