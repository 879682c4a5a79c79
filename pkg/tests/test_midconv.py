import numpy as np
import pytest

from flatiso import catalog, isomono as iso, midconv as mc
from flatiso.errors import ConditionDViolation, ResonantLambda
from flatiso.flatcore import build_saito_matrices


def klein_rank_one(point=(1.0, 0.5)):
    e = catalog.catalog_get("LT8")
    m = build_saito_matrices(e.pvf)
    lam = list(e.pvf.ring.weights)
    return mc.rank_one_from_structure(m, point, lam, z_seed=e.z_seed)


def test_truncation_shapes_and_conditions():
    snap, sys1, family = klein_rank_one()
    assert sys1.n == 3
    assert all(G.shape == (2, 2) for G in sys1.residues)
    # (D4): residues sum to -Gamma_inf = -diag(w1 - 1, w2 - 1)
    total = sum(sys1.residues) + np.diag(sys1.Gamma_inf)
    assert np.abs(total).max() < 1e-12
    w = [float(x) for x in catalog.catalog_get("LT8").pvf.ring.weights]
    assert np.abs(sys1.Gamma_inf - np.array([w[0] - 1, w[1] - 1])).max() < 1e-12
    for G in sys1.residues:
        s = np.linalg.svd(G, compute_uv=False)
        assert s[1] < 1e-9 * max(1.0, s[0])


def test_truncation_rejects_rank_one_input():
    snap = iso.OkuboNumeric(n=1, point=(0.0,), T=np.eye(1), Btilde=[np.eye(1)],
                            Binf=np.array([0.5 + 0j]), z=np.array([0.3 + 0j]),
                            P=np.eye(1), residues=[np.array([[-0.5 + 0j]])],
                            traces=np.array([-0.5 + 0j]))
    with pytest.raises(ConditionDViolation):
        mc.truncate_okubo(snap)


def test_middle_convolution_roundtrip():
    snap, sys1, family = klein_rank_one()
    lam_w = [complex(x) for x in catalog.catalog_get("LT8").pvf.ring.weights]
    out = mc.middle_convolution(sys1, -lam_w[2])
    # Gamma_inf = diag(w1, w2, 1) exactly by construction
    assert np.abs(np.sort_complex(out.Gamma_inf)
                  - np.sort_complex(np.array(lam_w))).max() < 1e-12
    # the residue-trace multiset matches the original snapshot
    assert np.abs(np.sort_complex(out.traces())
                  - np.sort_complex(snap.traces)).max() < 1e-8
    for G in out.residues:
        s = np.linalg.svd(G, compute_uv=False)
        assert s[1] < 1e-8 * max(1.0, s[0])
    total = sum(out.residues) + np.diag(out.Gamma_inf)
    assert np.abs(total).max() < 1e-10
    assert out.pivot_column >= 1


def test_resonant_lambda_rejected():
    snap, sys1, family = klein_rank_one()
    with pytest.raises(ResonantLambda):
        mc.middle_convolution(sys1, sys1.Gamma_inf[0])
    with pytest.raises(ResonantLambda):
        mc.middle_convolution(sys1, 0.0)


def test_invariant_subspaces():
    snap, sys1, family = klein_rank_one()
    rep = mc.invariant_subspace_check(sys1, -1.0, family=family)
    # generic lambda: dim K = n(n-2) = 3, dim L = 0
    assert rep.dim_K == 3
    assert rep.dim_L == 0
    assert rep.max_defect < 1e-6


def test_invariance_at_multiple_points():
    e = catalog.catalog_get("LT8")
    m = build_saito_matrices(e.pvf)
    lam = list(e.pvf.ring.weights)
    for pt in ((1.0, 0.42), (1.0, 0.5), (1.0, 0.58)):
        snap, sys1, family = mc.rank_one_from_structure(m, pt, lam)
        rep = mc.invariant_subspace_check(sys1, -1.0, family=family)
        assert rep.max_defect < 1e-6


def test_n2_kernel_dimension():
    # two singular points, 1x1 residues: K has dimension n(n-2) = 0
    lam = np.array([0.7 + 0j])
    resid = [np.array([[-0.3 + 0j]]), np.array([[-0.4 + 0j]])]
    sys2 = mc.RankOneSystem(n=2, residues=resid, Gamma_inf=lam,
                            z=np.array([0.0 + 0j, 1.0 + 0j]),
                            z_grad=np.zeros((2, 0)), point=(0.0,))
    K = mc.kernel_stack_basis(sys2)
    assert K.shape[1] == 0


def test_output_integrability_along_short_path():
    # middle-convolved residues satisfy Schlesinger along a short path,
    # modulo the scalar epsilon gauge the output is defined up to
    e = catalog.catalog_get("LT8")
    m = build_saito_matrices(e.pvf)
    lam = list(e.pvf.ring.weights)
    svals = np.linspace(0.49, 0.51, 9)
    outs = []
    prev_roots = None
    for s in svals:
        snap, sys1, _ = mc.rank_one_from_structure(m, (1.0, s), lam,
                                                   initial_roots=prev_roots)
        prev_roots = snap.z
        outs.append(mc.middle_convolution(sys1, -1.0))
    res = mc.output_integrability_defect(outs, svals)
    assert res < 1e-8


def test_json_bundles():
    snap, sys1, family = klein_rank_one()
    out = mc.middle_convolution(sys1, -1.0)
    blob1 = mc.rank_one_to_json(sys1)
    blob2 = mc.convolution_to_json(out)
    assert len(blob1["residues"]) == 3 and len(blob1["residues"][0]) == 2
    assert len(blob2["residues"]) == 3 and len(blob2["residues"][0]) == 3
    assert blob2["lambda"] == [-1.0, 0.0]
