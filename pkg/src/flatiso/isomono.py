"""Numeric Okubo/Pfaffian machinery.

Residue decomposition of the z-equation, exact integrability checks, RK4
integration of Pfaffian systems with a Liouville determinant guard,
Schlesinger residuals along isomonodromic families, the Okubo normal form
of a rank-one Fuchsian system, and the 2x2 Jimbo-Miwa parametrization
linking Schlesinger flow to the PVI Hamiltonian system.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import (BlowUp, DegenerateTheta, EigenvalueCollision,
                     FactorizationFailed, InsufficientSamples,
                     InverseMismatch, PoleAtY, RankViolation, StepUnderflow,
                     TrackingLost)
from .flatcore import SaitoMatrices, mat_commutator, mat_is_zero, mat_partial
from .p6 import StructureSampler, residues_from_frame

RESIDUE_TOL = 1e-10
RANK_TOL = 1e-9
TRACE_GUARD = 1e-6


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass
class PathSpec:
    points: list
    max_step: float = 0.05
    tolerance: float = 1e-10

    def __post_init__(self):
        pts = [tuple(complex(c) for c in p) for p in self.points]
        for a, b in zip(pts, pts[1:]):
            step = max(abs(x - y) for x, y in zip(a, b))
            if step > self.max_step + 1e-12:
                raise ValueError(f"path step {step} exceeds max_step {self.max_step}")
        self.points = pts


@dataclass
class OkuboNumeric:
    """Numeric snapshot of an Okubo system at a base point."""

    n: int
    point: tuple
    T: np.ndarray
    Btilde: List[np.ndarray]
    Binf: np.ndarray                  # diagonal entries
    z: np.ndarray                     # eigenvalues of T, tracked order
    P: np.ndarray                     # eigenvector matrix, columns follow z
    residues: List[np.ndarray]
    traces: np.ndarray

    def validate(self, strict=True):
        lam = self.Binf
        total = sum(self.residues) + np.diag(lam)
        if np.abs(total).max() > RESIDUE_TOL:
            raise RankViolation("residues do not sum to -Binf")
        for i, b in enumerate(self.residues):
            s = np.linalg.svd(b, compute_uv=False)
            if len(s) > 1 and s[1] > RANK_TOL * max(s[0], 1.0):
                raise RankViolation(f"residue {i+1} has numerical rank >= 2")
        if strict:
            for i, r in enumerate(self.traces):
                if min(abs(r - 1), abs(r + 1)) < TRACE_GUARD:
                    raise RankViolation(f"trace r_{i+1} within {TRACE_GUARD} of +-1")
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    d = lam[i] - lam[j]
                    for mm in range(-10, 11):
                        if abs(d - mm) < TRACE_GUARD:
                            raise EigenvalueCollision(
                                f"lambda_{i+1} - lambda_{j+1} within {TRACE_GUARD} "
                                f"of the integer {mm}")
        return self


# ---------------------------------------------------------------------------
# residue decomposition
# ---------------------------------------------------------------------------

def residue_decomposition(m: SaitoMatrices, point, lam, z_seed=None,
                          sampler: Optional[StructureSampler] = None,
                          strict=True) -> OkuboNumeric:
    """Rank-one residues B_i = -P E_i P^{-1} Binf of the Okubo z-equation."""
    if sampler is None:
        sampler = StructureSampler(m, z_seed=z_seed)
    point = tuple(point)
    try:
        roots, P = sampler.frame(point)
    except Exception as exc:
        raise EigenvalueCollision(str(exc)) from exc
    lamv = np.array([complex(x) for x in lam])
    res = residues_from_frame(roots, P, lamv)
    traces = np.array([np.trace(b) for b in res])
    Tval = np.array(sampler.t0_matrix(point))
    B = [np.array([[sampler.eval_elem(e, point) for e in row] for row in bt])
         for bt in m.Btilde]
    snap = OkuboNumeric(n=m.n, point=point, T=Tval, Btilde=B, Binf=lamv,
                        z=np.array(roots), P=P, residues=res, traces=traces)
    return snap.validate(strict=strict)


def snapshots_along(m: SaitoMatrices, path, lam, z_seed=None, strict=True):
    """Residue snapshots with a single continuation-ordered sampler."""
    sampler = StructureSampler(m, z_seed=z_seed)
    return [residue_decomposition(m, p, lam, sampler=sampler, strict=strict)
            for p in path]


# ---------------------------------------------------------------------------
# symbolic integrability check
# ---------------------------------------------------------------------------

@dataclass
class IntegrabilityReport:
    commute_T_ok: bool
    commute_B_ok: bool
    residue_relation_ok: bool          # dT/dx_i + B^(i) + [B^(i), Binf] = 0
    closedness_ok: bool                # dB^(i)/dx_j symmetric
    failed: List[str] = field(default_factory=list)

    @property
    def all_ok(self):
        return not self.failed


def check_integrability(m: SaitoMatrices, lam=None) -> IntegrabilityReport:
    """Exact verification of the Okubo integrability equations in the ring.

    lam is the Okubo diagonal; shifting it by a scalar does not change any of
    the equations, so the flat-structure weights are the default.
    """
    n = m.n
    lam = [Fraction(x) for x in (lam if lam is not None else m.weights)]
    B = m.Btilde
    failed = []
    ok_T = all(mat_is_zero(mat_commutator(m.T, B[i])) for i in range(n))
    if not ok_T:
        failed.append("commute_T")
    ok_B = all(mat_is_zero(mat_commutator(B[i], B[j]))
               for i in range(n) for j in range(i + 1, n))
    if not ok_B:
        failed.append("commute_B")
    ok_rel = True
    for i in range(n):
        dT = mat_partial(m.T, i)
        for r in range(n):
            for c in range(n):
                defect = dT[r][c] + B[i][r][c] + B[i][r][c] * (lam[c] - lam[r])
                if not defect.is_zero():
                    ok_rel = False
    if not ok_rel:
        failed.append("residue_relation")
    ok_closed = all(mat_is_zero(
        [[B[i][r][c].partial(j) - B[j][r][c].partial(i) for c in range(n)]
         for r in range(n)])
        for i in range(n) for j in range(i + 1, n))
    if not ok_closed:
        failed.append("closedness")
    return IntegrabilityReport(commute_T_ok=ok_T, commute_B_ok=ok_B,
                               residue_relation_ok=ok_rel,
                               closedness_ok=ok_closed, failed=failed)


# ---------------------------------------------------------------------------
# Pfaffian integration (RK4 with step halving and a Liouville guard)
# ---------------------------------------------------------------------------

def integrate_pfaffian(system: Callable[[float], np.ndarray], s0, s1, Y0,
                       tol=1e-10, min_step=1e-9, liouville_tol=1e-6):
    """Fundamental solution of dY/ds = A(s) Y from s0 to s1.

    system(s) returns the connection matrix A(s) along the (already
    parametrized) path.  The determinant is checked against exp(int tr A)
    accumulated with the same stepping.
    """
    Y = np.array(Y0, dtype=complex)
    s = float(s0)
    h = (float(s1) - float(s0)) / 16 or 1e-3
    logdet = 0j

    def rk4(s, h, Y):
        k1 = system(s) @ Y
        k2 = system(s + h / 2) @ (Y + h / 2 * k1)
        k3 = system(s + h / 2) @ (Y + h / 2 * k2)
        k4 = system(s + h) @ (Y + h * k3)
        return Y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    def tr4(s, h):
        a = np.trace(system(s))
        b = np.trace(system(s + h / 2))
        c = np.trace(system(s + h))
        return h / 6 * (a + 4 * b + c)

    direction = 1.0 if s1 >= s0 else -1.0
    h *= direction
    while (s1 - s) * direction > 1e-14:
        if (s + h - s1) * direction > 0:
            h = s1 - s
        full = rk4(s, h, Y)
        half = rk4(s + h / 2, h / 2, rk4(s, h / 2, Y))
        err = np.abs(full - half).max() / max(1.0, np.abs(half).max())
        if err > tol * abs(h):
            h /= 2
            if abs(h) < min_step:
                raise StepUnderflow(f"step underflow at s = {s}")
            continue
        logdet += tr4(s, h)
        Y = half
        s += h
        if err < tol * abs(h) / 16:
            h *= 2
    det = np.linalg.det(Y)
    target = np.exp(logdet) * np.linalg.det(np.array(Y0, dtype=complex))
    if abs(det - target) > liouville_tol * max(1.0, abs(target)):
        raise StepUnderflow(
            f"Liouville check failed: det {det} vs exp(int tr) {target}")
    return Y


def okubo_z_system(snapshot: OkuboNumeric):
    """A(z) = sum_i residue_i / (z - z_i) as a callable for a z-path."""
    def A(zval):
        out = np.zeros((snapshot.n, snapshot.n), dtype=complex)
        for zi, Bi in zip(snapshot.z, snapshot.residues):
            out += Bi / (zval - zi)
        return out
    return A


def monodromy_on_loop(snapshot: OkuboNumeric, center, radius, steps=None,
                      tol=1e-10):
    """Fundamental-solution monodromy around a circle |z - center| = radius."""
    A = okubo_z_system(snapshot)
    Y = np.eye(snapshot.n, dtype=complex)

    def system(theta):
        zval = center + radius * np.exp(1j * theta)
        dz = 1j * radius * np.exp(1j * theta)
        return A(zval) * dz

    return integrate_pfaffian(system, 0.0, 2 * np.pi, Y, tol=tol)


# ---------------------------------------------------------------------------
# Schlesinger residual
# ---------------------------------------------------------------------------

def _stencil_d1(vals, h):
    return (-vals[4] + 8 * vals[3] - 8 * vals[1] + vals[0]) / (12 * h)


def schlesinger_residual(snapshots: Sequence, svals=None) -> float:
    """Max defect of dB_i/ds = sum_j [B_j, B_i] (z_i' - z_j')/(z_i - z_j).

    snapshots may be OkuboNumeric values or (z, residues) pairs on a uniform
    grid of the path parameter.
    """
    if len(snapshots) < 5:
        raise InsufficientSamples("need at least 5 snapshots")
    zs, Bs = [], []
    for snap in snapshots:
        if isinstance(snap, OkuboNumeric):
            zs.append(np.asarray(snap.z))
            Bs.append([np.asarray(b) for b in snap.residues])
        else:
            z, res = snap
            zs.append(np.asarray(z, dtype=complex))
            Bs.append([np.asarray(b, dtype=complex) for b in res])
    n = len(zs[0])
    if svals is None:
        svals = list(range(len(snapshots)))
    h = svals[1] - svals[0]
    for a, b in zip(svals, svals[1:]):
        if abs((b - a) - h) > 1e-9 * max(1.0, abs(h)):
            raise ValueError("snapshots must be uniform in the path parameter")
    for k in range(1, len(zs)):
        if np.abs(zs[k] - zs[k - 1]).max() > 0.5 * max(
                1.0, float(np.abs(zs[k - 1]).max())):
            raise TrackingLost(f"roots jumped between snapshots {k-1} and {k}")
    worst = 0.0
    for k in range(2, len(snapshots) - 2):
        zdot = _stencil_d1([zs[k + d] for d in (-2, -1, 0, 1, 2)], h)
        for i in range(n):
            dBi = _stencil_d1([Bs[k + d][i] for d in (-2, -1, 0, 1, 2)], h)
            rhs = np.zeros_like(dBi)
            for j in range(n):
                if j == i:
                    continue
                com = Bs[k][j] @ Bs[k][i] - Bs[k][i] @ Bs[k][j]
                rhs += com * (zdot[i] - zdot[j]) / (zs[k][i] - zs[k][j])
            worst = max(worst, float(np.abs(dBi - rhs).max()))
    return worst


# ---------------------------------------------------------------------------
# Okubo normal form (rank-one Fuchsian -> Okubo type)
# ---------------------------------------------------------------------------

def okubo_normal_form(residues: Sequence[np.ndarray], Binf_diag):
    """P from the rank-one factor columns; the system becomes Okubo type.

    Each residue must factor as -b_i a_i Binf with Binf = -sum residues
    diagonal and invertible; then P = (b-columns) has the a-rows as inverse
    and P^-1 (z - diag z_i)^-1 ... the transformed system is
    -(z - diag(z_i))^{-1} (P^{-1} Binf P).
    """
    lam = np.asarray(Binf_diag, dtype=complex)
    if np.any(np.abs(lam) < 1e-12):
        raise FactorizationFailed("Binf must be invertible (lambda_i != 0)")
    n = len(residues)
    if len(lam) != n:
        raise FactorizationFailed("need as many residues as diagonal entries")
    total = sum(np.asarray(b, dtype=complex) for b in residues) + np.diag(lam)
    if np.abs(total).max() > 1e-8:
        raise FactorizationFailed("residues do not sum to -Binf")
    bs, as_ = [], []
    for i, B in enumerate(residues):
        M = -np.asarray(B, dtype=complex) @ np.diag(1 / lam)
        u, s, vh = np.linalg.svd(M)
        if len(s) > 1 and s[1] > 1e-8 * max(1.0, s[0]):
            raise RankViolation(f"residue {i+1} is not rank one")
        bs.append(u[:, 0] * s[0])
        as_.append(vh[0, :])
    P = np.column_stack(bs)
    A = np.vstack(as_)
    if np.abs(P @ A - np.eye(n)).max() > 1e-10:
        raise InverseMismatch("b-columns and a-rows are not inverse matrices")
    return P, A @ np.diag(lam) @ P


# ---------------------------------------------------------------------------
# Jimbo-Miwa 2x2 parametrization
# ---------------------------------------------------------------------------

@dataclass
class JMSystem:
    A0: np.ndarray
    A1: np.ndarray
    At: np.ndarray
    thetas: tuple
    kappas: tuple
    t: complex
    y: complex
    ztilde: complex
    k: complex
    internal: dict

    @property
    def Ainf(self):
        return -(self.A0 + self.A1 + self.At)

    def validate(self, tol=1e-10):
        k1, k2 = self.kappas
        off = max(abs(self.Ainf[0, 1]), abs(self.Ainf[1, 0]))
        if off > tol:
            raise InverseMismatch(f"A_inf off-diagonal {off} exceeds {tol}")
        if abs(self.Ainf[0, 0] - k1) > 1e-8 or abs(self.Ainf[1, 1] - k2) > 1e-8:
            raise InverseMismatch("A_inf diagonal does not match kappas")
        for A, th in zip((self.A0, self.A1, self.At), self.thetas):
            if abs(np.trace(A) - th) > tol:
                raise InverseMismatch("trace of a residue does not match theta")
        return self


def jm_build(y, ztilde, k, thetas, kappas, t) -> JMSystem:
    """Assemble (A_0, A_1, A_t) from the scalar Jimbo-Miwa data.

    Requires kappa_1 + kappa_2 + theta_0 + theta_1 + theta_t = 0 and
    theta_inf = kappa_1 - kappa_2 != 0; y must stay off {0, 1, t}.
    """
    th0, th1, tht = (complex(x) for x in thetas)
    k1, k2 = (complex(x) for x in kappas)
    y, ztilde, k, t = complex(y), complex(ztilde), complex(k), complex(t)
    if abs(k1 + k2 + th0 + th1 + tht) > 1e-12:
        raise DegenerateTheta("kappa_1 + kappa_2 + sum(theta) must vanish")
    thinf = k1 - k2
    if abs(thinf) < 1e-12:
        raise DegenerateTheta("theta_inf = kappa_1 - kappa_2 must not vanish")
    if min(abs(y), abs(y - 1), abs(y - t)) < 1e-12:
        raise PoleAtY(f"y = {y} hits a pole for t = {t}")
    zz = ztilde - th0 / y - th1 / (y - 1) - tht / (y - t)
    quad = y * (y - 1) * (y - t) * zz * zz
    z0 = (y / (t * thinf)) * (
        quad + (th1 * (y - t) + t * tht * (y - 1)
                - 2 * k2 * (y - 1) * (y - t)) * zz
        + k2 * k2 * (y - t - 1) - k2 * (th1 + t * tht))
    z1 = (-(y - 1) / ((t - 1) * thinf)) * (
        quad + ((th1 + thinf) * (y - t) + t * tht * (y - 1)
                - 2 * k2 * (y - 1) * (y - t)) * zz
        + k2 * k2 * (y - t) - k2 * (th1 + t * tht) - k1 * k2)
    zt = ((y - t) / (t * (t - 1) * thinf)) * (
        quad + (th1 * (y - t) + t * (tht + thinf) * (y - 1)
                - 2 * k2 * (y - 1) * (y - t)) * zz
        + k2 * k2 * (y - 1) - k2 * (th1 + t * tht) - t * k1 * k2)
    for name, val in (("z0", z0), ("z1", z1), ("zt", zt)):
        if abs(val) < 1e-300:
            raise DegenerateTheta(f"{name} vanishes; u,v,w are undefined")
    u = k * y / (t * z0)
    v = -k * (y - 1) / ((t - 1) * z1)
    w = k * (y - t) / (t * (t - 1) * zt)

    def residue(zi, thi, ui):
        return np.array([[zi + thi, -ui * zi],
                         [(zi + thi) / ui, -zi]], dtype=complex)

    sys = JMSystem(A0=residue(z0, th0, u), A1=residue(z1, th1, v),
                   At=residue(zt, tht, w), thetas=(th0, th1, tht),
                   kappas=(k1, k2), t=t, y=y, ztilde=ztilde, k=k,
                   internal={"u": u, "v": v, "w": w,
                             "z0": z0, "z1": z1, "zt": zt, "zztilde": zz})
    return sys.validate()


def p6_hamiltonian_rhs(t, y, ztilde, logk, thetas, kappas):
    th0, th1, tht = thetas
    k1, k2 = kappas
    thinf = k1 - k2
    dy = (y * (y - 1) * (y - t) / (t * (t - 1))
          * (2 * ztilde - th0 / y - th1 / (y - 1) - (tht - 1) / (y - t)))
    dz = (1 / (t * (t - 1))) * (
        (-3 * y * y + 2 * (1 + t) * y - t) * ztilde * ztilde
        + ((2 * y - 1 - t) * th0 + (2 * y - t) * th1
           + (2 * y - 1) * (tht - 1)) * ztilde
        - k1 * (k2 + 1))
    dlogk = (thinf - 1) * (y - t) / (t * (t - 1))
    return dy, dz, dlogk


def integrate_p6_hamiltonian(thetas, kappas, init, t0, t1, steps=400,
                             tol=1e-10, min_step=1e-9):
    """RK4 trajectory of (y, ztilde, k) of the PVI Hamiltonian system.

    init = (y0, ztilde0, k0); returns (ts, ys, zs, ks) sampled on the uniform
    grid, integrating each grid interval with step-halving adaptivity (local
    error per unit step below tol).  Eliminating ztilde, y(t) solves PVI with
    alpha = (theta_inf - 1)^2 / 2 etc.
    """
    th = tuple(complex(x) for x in thetas)
    kp = tuple(complex(x) for x in kappas)
    y, zt, k = (complex(x) for x in init)
    state = np.array([y, zt, np.log(k)], dtype=complex)
    ts = np.linspace(float(t0), float(t1), steps + 1)

    def f(t, st):
        yv, zv, lk = st
        if min(abs(yv), abs(yv - 1), abs(yv - t)) < 1e-9:
            raise BlowUp(f"y too close to a pole at t = {t}")
        dy, dz, dlk = p6_hamiltonian_rhs(t, yv, zv, lk, th, kp)
        return np.array([dy, dz, dlk], dtype=complex)

    def rk4(t, h, st):
        k1v = f(t, st)
        k2v = f(t + h / 2, st + h / 2 * k1v)
        k3v = f(t + h / 2, st + h / 2 * k2v)
        k4v = f(t + h, st + h * k3v)
        return st + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)

    out = [state.copy()]
    for i in range(steps):
        t, target = ts[i], ts[i + 1]
        h = target - t
        while (target - t) * np.sign(target - ts[i]) > 1e-14:
            if abs(h) > abs(target - t):
                h = target - t
            full = rk4(t, h, state)
            half = rk4(t + h / 2, h / 2, rk4(t, h / 2, state))
            err = np.abs(full - half).max() / max(1.0, float(np.abs(half).max()))
            if err > tol * abs(h):
                h /= 2
                if abs(h) < min_step:
                    raise StepUnderflow(f"step underflow at t = {t}")
                continue
            state, t = half, t + h
            if err < tol * abs(h) / 16:
                h *= 2
        if np.abs(state[:2]).max() > 1e8:
            raise BlowUp(f"trajectory blew up at t = {target}")
        out.append(state.copy())
    arr = np.array(out)
    return ts, arr[:, 0], arr[:, 1], np.exp(arr[:, 2])


def jm_family_snapshots(ts, ys, zs, ks, thetas, kappas):
    """(z, residues) pairs for the Schlesinger residual of a JM trajectory."""
    snaps = []
    for t, y, zt, k in zip(ts, ys, zs, ks):
        sys = jm_build(y, zt, k, thetas, kappas, t)
        snaps.append((np.array([0.0, 1.0, t], dtype=complex),
                      [sys.A0, sys.A1, sys.At]))
    return snaps


# ---------------------------------------------------------------------------
# report helpers
# ---------------------------------------------------------------------------

def trajectory_to_csv(ts, ys, zs, ks) -> str:
    lines = ["t,y_re,y_im,ztilde_re,ztilde_im,k_re,k_im"]
    for t, y, z, k in zip(ts, ys, zs, ks):
        lines.append(f"{t:.16g},{y.real:.16g},{y.imag:.16g},"
                     f"{z.real:.16g},{z.imag:.16g},{k.real:.16g},{k.imag:.16g}")
    return "\n".join(lines) + "\n"


def jmsystem_to_json(sys: JMSystem) -> dict:
    def mat(a):
        return [[[a[i, j].real, a[i, j].imag] for j in range(2)] for i in range(2)]
    def pair(v):
        v = complex(v)
        return [v.real, v.imag]
    return {"A0": mat(sys.A0), "A1": mat(sys.A1), "At": mat(sys.At),
            "thetas": [pair(x) for x in sys.thetas],
            "kappas": [pair(x) for x in sys.kappas],
            "t": pair(sys.t), "y": pair(sys.y),
            "ztilde": pair(sys.ztilde), "k": pair(sys.k)}
