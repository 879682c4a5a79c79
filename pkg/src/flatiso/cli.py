"""Command-line front end.

Verbs: verify-wdvv, saito, logvf, extract-p6, params, schlesinger, midconv,
jm-roundtrip, catalog.  Machine-readable JSON goes to stdout (or --json FILE);
a one-line human summary goes to stderr.  Exit codes: 0 all requested checks
pass, 1 a check failed, 2 input error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import catalog as cat
from . import exprio, flatcore, isomono, logvf, midconv, p6
from .errors import (BlowUp, DenominatorNotUnit, EigenvalueCollision,
                     FlatIsoError, ParseError, RootCollision,
                     RootNotConverged, SchemaError, StepUnderflow,
                     TrackingLost, UnknownId)

NUMERIC_ERRORS = (RootCollision, RootNotConverged, StepUnderflow, BlowUp,
                  EigenvalueCollision, TrackingLost)
INPUT_ERRORS = (UnknownId, ParseError, SchemaError, DenominatorNotUnit,
                FileNotFoundError, json.JSONDecodeError, KeyError, ValueError)

DEFAULT_SEED = 20240901


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="flatiso",
        description="flat-structure verification and Painleve VI extraction")
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p, path=False, entry=False, seed=False):
        p.add_argument("--catalog", metavar="ID", help="catalog entry id")
        p.add_argument("--input", metavar="FILE",
                       help="potential-vector-field JSON document")
        p.add_argument("--json", metavar="FILE",
                       help="write the JSON report here instead of stdout")
        p.add_argument("--tol-residual", type=float, default=1e-6,
                       help="residual tolerance for numeric checks")
        if path:
            p.add_argument("--path", metavar="FILE",
                           help="sampling path JSON (t1, t2_start, t2_end, points, z_seed)")
        if entry:
            p.add_argument("--entry", metavar="I,J", default=None,
                           help="matrix entry for the PVI extraction, e.g. 1,2")
        if seed:
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        return p

    common(sub.add_parser("verify-wdvv", help="exact extended-WDVV check"))
    common(sub.add_parser("saito", help="build matrices; structure relations"))
    common(sub.add_parser("logvf", help="discriminant and logarithmic-field identities"))
    common(sub.add_parser("extract-p6", help="PVI samples along a path"),
           path=True, entry=True)
    common(sub.add_parser("params", help="PVI parameters at the path start"), path=True)
    common(sub.add_parser("schlesinger", help="Schlesinger residual along a path"),
           path=True)
    common(sub.add_parser("midconv", help="truncation + middle-convolution round trip"),
           path=True)
    jm = sub.add_parser("jm-roundtrip",
                        help="PVI Hamiltonian integration and 2x2 Schlesinger check")
    jm.add_argument("--json", metavar="FILE")
    jm.add_argument("--tol-residual", type=float, default=1e-6)
    jm.add_argument("--seed", type=int, default=DEFAULT_SEED)
    jm.add_argument("--steps", type=int, default=400)
    c = sub.add_parser("catalog", help="list or verify the corpus")
    c.add_argument("action", choices=["list", "verify"])
    c.add_argument("--catalog", metavar="ID")
    c.add_argument("--all", action="store_true")
    c.add_argument("--depth", default="symbolic",
                   choices=["symbolic", "numeric", "full"])
    c.add_argument("--json", metavar="FILE")
    return ap


def _resolve_input(args):
    """(pvf, path points, svals, z_seed, entry_choice) from the flags."""
    if getattr(args, "catalog", None):
        entry = cat.catalog_get(args.catalog)
        pvf = entry.pvf
        points = entry.default_path.points
        svals = entry.path_svals
        seed = entry.z_seed
        choice = entry.p6_entry
    elif getattr(args, "input", None):
        with open(args.input) as f:
            pvf = exprio.parse_pvf(f.read())
        points = svals = None
        seed = None
        choice = (1, 2)
    else:
        raise SchemaError("one of --catalog or --input is required")
    if getattr(args, "path", None):
        with open(args.path) as f:
            dp = json.load(f)
        svals = np.linspace(dp["t2_start"], dp["t2_end"], int(dp["points"]))
        points = [(dp["t1"], s) for s in svals]
        seed = (None if dp.get("z_seed") is None
                else complex(dp["z_seed"][0], dp["z_seed"][1]))
    if getattr(args, "entry", None):
        i, j = (int(x) for x in args.entry.split(","))
        choice = (i, j)
    if points is None and args.verb in ("extract-p6", "params", "schlesinger",
                                        "midconv"):
        raise SchemaError("--path is required with --input for this verb")
    return pvf, points, svals, seed, choice


def _emit(args, report, summary):
    text = json.dumps(report, indent=1, sort_keys=True, default=str)
    if getattr(args, "json", None):
        with open(args.json, "w") as f:
            f.write(text + "\n")
    else:
        print(text)
    print(summary, file=sys.stderr)


# ---------------------------------------------------------------------------
# verb implementations (each returns (exit_code, report, summary))
# ---------------------------------------------------------------------------

def _run_verify_wdvv(args):
    pvf, *_ = _resolve_input(args)
    rep = flatcore.check_extended_wdvv(pvf)
    report = {
        "check": "verify-wdvv", "name": pvf.name,
        "tolerances": {"symbolic": "exact"},
        "unit_ok": rep.unit_ok, "homogeneity_ok": rep.homogeneity_ok,
        "commutators_ok": rep.commutators_ok,
        "failing_commutators": [list(pq) for pq in rep.failing_commutators()],
        "saito_relations_ok": rep.saito_relations_ok,
        "flat_normalization_ok": rep.flat_normalization_ok,
        "pass": rep.is_solution,
    }
    return (0 if rep.is_solution else 1, report,
            f"extended WDVV: {'PASS' if rep.is_solution else 'FAIL'} ({pvf.name})")


def _run_saito(args):
    pvf, *_ = _resolve_input(args)
    m = flatcore.build_saito_matrices(pvf)
    ok_rel = flatcore.check_saito_relations(m)
    ok_norm = flatcore.check_flat_normalization(m)
    report = {
        "check": "saito", "name": pvf.name,
        "tolerances": {"symbolic": "exact"},
        "saito_relations_ok": ok_rel, "flat_normalization_ok": ok_norm,
        "C": exprio.serialize_matrix(m.C), "T": exprio.serialize_matrix(m.T),
        "Binf": [str(w) for w in m.Binf],
        "pass": ok_rel and ok_norm,
    }
    return (0 if report["pass"] else 1, report,
            f"saito relations: {'PASS' if report['pass'] else 'FAIL'} ({pvf.name})")


def _run_logvf(args):
    pvf, *_ = _resolve_input(args)
    m = flatcore.build_saito_matrices(pvf)
    d = logvf.discriminant(m)
    lrep = logvf.logvf_identities(m)
    crit = logvf.saito_criterion(flatcore.mat_scale(m.T, -1), d)
    trace_ok = all(v.is_zero() for v in logvf.trace_identity_defects(m).values())
    ok = lrep.all_ok and crit == 1 and trace_ok
    report = {
        "check": "logvf", "name": pvf.name,
        "tolerances": {"symbolic": "exact"},
        "h": exprio.format_elem(d.h),
        "h_weight": str(d.h.weight()),
        "identities_failed": lrep.failed,
        "saito_criterion_c": None if crit is None else str(crit),
        "trace_identity_ok": trace_ok,
        "pass": ok,
    }
    return (0 if ok else 1, report,
            f"logvf identities: {'PASS' if ok else 'FAIL'} ({pvf.name})")


def _run_extract_p6(args):
    pvf, points, svals, seed, choice = _resolve_input(args)
    m = flatcore.build_saito_matrices(pvf)
    lam = p6.default_lambda(pvf.ring.weights)
    samples = p6.extract_p6_solution(m, lam, choice, points, z_seed=seed,
                                     svals=svals)
    params = p6.p6_parameters(m, points[0], lam=lam,
                              sampler=p6.StructureSampler(m, z_seed=seed),
                              entry_choice=choice)
    residual = p6.p6_residual(samples, params)
    ok = residual < args.tol_residual
    report = {
        "check": "extract-p6", "name": pvf.name, "entry": list(choice),
        "tolerances": {"pvi_residual": args.tol_residual},
        "params": p6.params_to_json(params),
        "samples_csv": p6.samples_to_csv(samples),
        "pvi_residual": residual,
        "pass": ok,
    }
    return (0 if ok else 1, report,
            f"PVI residual {residual:.3e} ({'PASS' if ok else 'FAIL'})")


def _run_params(args):
    pvf, points, svals, seed, choice = _resolve_input(args)
    m = flatcore.build_saito_matrices(pvf)
    params = p6.p6_parameters(m, points[0],
                              sampler=p6.StructureSampler(m, z_seed=seed),
                              entry_choice=choice)
    report = {
        "check": "params", "name": pvf.name,
        "tolerances": {"eigen_identities": 1e-10},
        "params": p6.params_to_json(params),
        "pass": True,
    }
    return 0, report, "PVI parameters computed"


def _run_schlesinger(args):
    pvf, points, svals, seed, choice = _resolve_input(args)
    m = flatcore.build_saito_matrices(pvf)
    lam = p6.default_lambda(pvf.ring.weights)
    snaps = isomono.snapshots_along(m, points, lam, z_seed=seed)
    res = isomono.schlesinger_residual(snaps, svals=svals)
    ok = res < args.tol_residual
    report = {
        "check": "schlesinger", "name": pvf.name,
        "tolerances": {"schlesinger_residual": args.tol_residual},
        "schlesinger_residual": res,
        "pass": ok,
    }
    return (0 if ok else 1, report,
            f"Schlesinger residual {res:.3e} ({'PASS' if ok else 'FAIL'})")


def _run_midconv(args):
    pvf, points, svals, seed, choice = _resolve_input(args)
    m = flatcore.build_saito_matrices(pvf)
    lam_w = list(pvf.ring.weights)
    mid = len(points) // 2
    snap, sys1, family = midconv.rank_one_from_structure(
        m, points[mid], lam_w, z_seed=seed)
    out = midconv.middle_convolution(sys1, -lam_w[-1])
    ginf_err = float(np.abs(np.sort_complex(out.Gamma_inf)
                            - np.sort_complex(np.array(lam_w, dtype=complex))).max())
    tr_err = float(np.abs(np.sort_complex(out.traces())
                          - np.sort_complex(snap.traces)).max())
    inv = midconv.invariant_subspace_check(sys1, -lam_w[-1], family=family)
    ok = ginf_err < 1e-8 and tr_err < 1e-8 and inv.max_defect < args.tol_residual
    report = {
        "check": "midconv", "name": pvf.name,
        "tolerances": {"recovery": 1e-8, "invariance": args.tol_residual},
        "gamma_inf_error": ginf_err, "trace_error": tr_err,
        "invariance_defect": inv.max_defect,
        "dim_K": inv.dim_K, "dim_L": inv.dim_L,
        "result": midconv.convolution_to_json(out),
        "pass": ok,
    }
    return (0 if ok else 1, report,
            f"midconv round trip ({'PASS' if ok else 'FAIL'})")


def _run_jm_roundtrip(args):
    rng = np.random.default_rng(args.seed)
    th = tuple(rng.normal(0, 0.35, 3) + 1j * rng.normal(0, 0.1, 3))
    k2 = rng.normal(0, 0.35) + 1j * rng.normal(0, 0.1)
    k1 = -(k2 + sum(th))
    init = (2.1 + 0.4j + 0.2 * rng.normal(), 0.3 + 0.1j + 0.1 * rng.normal(), 1.0)
    ts, ys, zs, ks = isomono.integrate_p6_hamiltonian(
        th, (k1, k2), init, 2.0, 2.4, steps=args.steps)
    params = p6.P6Params.from_thetas(th[0], th[1], th[2], k1 - k2)
    h = ts[1] - ts[0]
    pvi = 0.0
    for k in range(2, len(ts) - 2):
        y5 = ys[k - 2:k + 3]
        dy = (-y5[4] + 8 * y5[3] - 8 * y5[1] + y5[0]) / (12 * h)
        d2y = (-y5[4] + 16 * y5[3] - 30 * y5[2] + 16 * y5[1] - y5[0]) / (12 * h * h)
        pvi = max(pvi, abs(d2y - p6.pvi_rhs(ts[k], ys[k], dy, params)))
    snaps = isomono.jm_family_snapshots(ts, ys, zs, ks, th, (k1, k2))
    schles = isomono.schlesinger_residual(snaps, svals=ts)
    ok = pvi < args.tol_residual and schles < args.tol_residual
    final = isomono.jm_build(ys[-1], zs[-1], ks[-1], th, (k1, k2), ts[-1])
    report = {
        "check": "jm-roundtrip", "seed": args.seed,
        "tolerances": {"pvi_residual": args.tol_residual,
                       "schlesinger_residual": args.tol_residual,
                       "structure_identities": 1e-12},
        "thetas": [[x.real, x.imag] for x in th],
        "kappas": [[k1.real, k1.imag], [k2.real, k2.imag]],
        "pvi_residual": pvi, "schlesinger_residual": schles,
        "trajectory_csv": isomono.trajectory_to_csv(ts, ys, zs, ks),
        "final_system": isomono.jmsystem_to_json(final),
        "pass": ok,
    }
    return (0 if ok else 1, report,
            f"jm round trip pvi={pvi:.2e} schlesinger={schles:.2e} "
            f"({'PASS' if ok else 'FAIL'})")


def _run_catalog(args):
    if args.action == "list":
        report = {"check": "catalog-list", "ids": cat.catalog_list(),
                  "pass": True}
        return 0, report, " ".join(cat.catalog_list())
    ids = cat.catalog_list() if (args.all or not args.catalog) else [args.catalog]
    reports = {}
    ok = True
    for eid in ids:
        reports[eid] = cat.catalog_verify(eid, args.depth)
        ok = ok and reports[eid]["pass"]
    report = {"check": "catalog-verify", "depth": args.depth,
              "tolerances": dict(cat.TOLERANCES),
              "entries": reports, "pass": ok}
    return (0 if ok else 1, report,
            f"catalog verify [{args.depth}]: "
            + " ".join(f"{k}={'ok' if v['pass'] else 'FAIL'}"
                       for k, v in reports.items()))


VERBS = {
    "verify-wdvv": _run_verify_wdvv,
    "saito": _run_saito,
    "logvf": _run_logvf,
    "extract-p6": _run_extract_p6,
    "params": _run_params,
    "schlesinger": _run_schlesinger,
    "midconv": _run_midconv,
    "jm-roundtrip": _run_jm_roundtrip,
    "catalog": _run_catalog,
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        code, report, summary = VERBS[args.verb](args)
    except NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except FlatIsoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(args, report, summary)
    return code


if __name__ == "__main__":
    sys.exit(main())
