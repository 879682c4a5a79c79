"""Discriminants, logarithmic vector fields and the Saito-matrix identities.

The divisor is cut out by h = det(-T), a monic degree-n polynomial in the
last variable.  A vector field V = sum v_k d/dt_k is logarithmic when h
divides Vh exactly; the rows of -T (in reversed order, V_{n+1-i} = row i)
give the standard generator system, with V_1 the Euler field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .errors import NotMonic, RowNotLogarithmic
from .flatcore import SaitoMatrices, mat_det, mat_scale
from .ring import Ring, RingElem


@dataclass
class DivisorData:
    h: RingElem            # monic degree-n in the last variable
    ring: Ring

    @property
    def n(self):
        return self.ring.nvars


@dataclass
class VectorFieldMatrix:
    """Rows encode vector fields: V_{n+1-i} = sum_j M[i][j] d/dt_j."""

    M: list


@dataclass
class LogVfReport:
    euler_row_ok: bool
    v1_h_ok: bool
    vi_ratios_ok: bool
    weight_duality_ok: bool
    failed: List[str] = field(default_factory=list)

    @property
    def all_ok(self):
        return not self.failed


# ---------------------------------------------------------------------------
# divisor and divisibility
# ---------------------------------------------------------------------------

def discriminant(m: SaitoMatrices) -> DivisorData:
    """h = det(-T), checked monic in t_n and weighted homogeneous of weight n."""
    h = mat_det(mat_scale(m.T, Fraction(-1)))
    n = m.n
    last = n - 1
    if h.degree_in(last) != n:
        raise NotMonic(f"det(-T) has degree {h.degree_in(last)} in t{n}, expected {n}")
    lead = h.coeffs_in(last)[n]
    if not (lead - 1).is_zero():
        raise NotMonic("det(-T) is not monic in the last variable")
    if not h.is_homogeneous(n):
        raise NotMonic(f"det(-T) is not weighted homogeneous of weight {n}")
    return DivisorData(h=h, ring=m.ring)


def divmod_main_var(f: RingElem, h: RingElem, var: int):
    """Long division f = q*h + r by a divisor monic in t_{var+1}."""
    ring = f.ring
    hc = h.coeffs_in(var)
    d = len(hc) - 1
    q = ring.zero()
    r = f
    t = ring.var(var)
    while True:
        rc = r.coeffs_in(var)
        dr = len(rc) - 1
        if r.is_zero() or dr < d:
            return q, r
        lead = rc[dr]
        mono = lead * t ** (dr - d)
        q = q + mono
        r = r - mono * h


def is_logarithmic(V, d: DivisorData) -> bool:
    """True iff h divides Vh = sum_k V[k] dh/dt_k exactly."""
    ring = d.ring
    vh = ring.zero()
    for k, vk in enumerate(V):
        vh = vh + vk * d.h.partial(k)
    _, r = divmod_main_var(vh, d.h, ring.nvars - 1)
    return r.is_zero()


def log_ratio(V, d: DivisorData) -> RingElem:
    """(Vh)/h for a logarithmic field; raises if the division is not exact."""
    ring = d.ring
    vh = ring.zero()
    for k, vk in enumerate(V):
        vh = vh + vk * d.h.partial(k)
    q, r = divmod_main_var(vh, d.h, ring.nvars - 1)
    if not r.is_zero():
        raise RowNotLogarithmic(-1)
    return q


def saito_criterion(MV: VectorFieldMatrix, d: DivisorData) -> Optional[Fraction]:
    """det(MV) = c*h for a nonzero rational c, if the rows are logarithmic."""
    from .flatcore import _proportionality_constant
    M = MV.M if isinstance(MV, VectorFieldMatrix) else MV
    for i, row in enumerate(M):
        if not is_logarithmic(row, d):
            raise RowNotLogarithmic(i)
    det = mat_det(M)
    if det.is_zero():
        return None
    c = _proportionality_constant(det, d.h)
    return c if c else None


# ---------------------------------------------------------------------------
# the generator-system identities
# ---------------------------------------------------------------------------

def logvf_identities(m: SaitoMatrices) -> LogVfReport:
    """Euler row, V_1 h = n h, the s_1-derivative ratios, and weight duality."""
    ring = m.ring
    n = m.n
    w = m.weights
    t = ring.gens()
    d = discriminant(m)
    M = mat_scale(m.T, Fraction(-1))          # row i encodes V_{n+1-i}
    failed = []

    # (i) V_1 = Euler field: row n of -T is (w_1 t_1, ..., w_n t_n)
    euler_row_ok = all((M[n - 1][j] - t[j] * w[j]).is_zero() for j in range(n))
    if not euler_row_ok:
        failed.append("euler_row")

    # (ii) V_1 h = n h
    v1 = M[n - 1]
    v1_ok = (log_ratio(v1, d) - n).is_zero()
    if not v1_ok:
        failed.append("v1_h")

    # (iii) for i > 1: (V_i h)/h = -d s_1/d t_{n-i+1}, s_1 the t_n^{n-1} coeff of -h
    hc = d.h.coeffs_in(n - 1)
    s1 = -hc[n - 1]
    ratios_ok = True
    for i in range(2, n + 1):
        vi = M[n - i]
        ratio = log_ratio(vi, d)
        if not (ratio + s1.partial(n - i + 1 - 1)).is_zero():
            ratios_ok = False
            failed.append(f"vi_ratio_{i}")

    # (iv) weight duality via entry weights: w(M_ij) = 1 - w_i + w_j
    duality_ok = True
    for i in range(n):
        for j in range(n):
            e = M[i][j]
            if not e.is_zero() and not e.is_homogeneous(1 - w[i] + w[j]):
                duality_ok = False
                failed.append(f"entry_weight_{i+1}{j+1}")
    return LogVfReport(euler_row_ok=euler_row_ok, v1_h_ok=v1_ok,
                       vi_ratios_ok=ratios_ok, weight_duality_ok=duality_ok,
                       failed=failed)


def trace_identity_defects(m: SaitoMatrices) -> Dict[int, RingElem]:
    """Defects of V_k h - (-1)^(n+1) tr(B^(k)) h; all zero for a flat structure.

    V_k here is the k-th row of -T applied to d/dt, the only alignment that
    matches the weight of tr(B^(k)); for n = 3 the sign factor is +1.
    """
    ring = m.ring
    n = m.n
    d = discriminant(m)
    M = mat_scale(m.T, Fraction(-1))
    sign = Fraction((-1) ** (n + 1))
    out = {}
    for k in range(1, n + 1):
        vk = M[k - 1]
        vh = ring.zero()
        for j in range(n):
            vh = vh + vk[j] * d.h.partial(j)
        tr = sum((m.Btilde[k - 1][i][i] for i in range(n)), ring.zero())
        out[k] = vh - tr * d.h * sign
    return out
