"""Induced metric and Gaussian curvature of embedded projector surfaces.

The pullback of the flat metric of R^(N^2-1) through the canonical embedding
is conformal, g = tr(dP dbarP) |dxi|^2 up to the fixed factor 2, whenever
tr(dP dP) vanishes.  Curvature is computed two ways: exactly, as a rational
function via K = -4 (g d dbar g - dg dbar g) / g^3, and numerically by
central differences on ln g as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateMetric, IndexOutOfRange, NonContiguousIndices,
                     PoleAtPoint)
from .symalg import ConjPoly, ConjRational, one_plus_s_power

CURVATURE_SPREAD_TOL_EXACT = 1e-10
CURVATURE_SPREAD_TOL_FD = 1e-6


@dataclass(frozen=True)
class MetricField:
    """Induced metric components g_pp = tr(dP dP), g_pm = tr(dP dbarP),
    g_mm = conj(g_pp).  Conformal exactly when g_pp vanishes identically;
    the surface metric is then g_pm |dxi|^2 up to a fixed real factor."""

    n: int
    g_pp: ConjRational
    g_pm: ConjRational
    g_mm: ConjRational

    def eval(self, z):
        return self.g_pm.eval(z).real

    def eval_many(self, zs):
        return self.g_pm.eval_many(np.asarray(zs, dtype=complex)).real


@dataclass(frozen=True)
class CurvatureResult:
    """Exact curvature with its grid constancy assessment."""

    K: ConjRational
    constant: bool
    spread: float
    K_const: float = None
    A_const: float = None


def _derivative_factors(mat):
    """(A, B, den) with dP = A/den^2 entrywise... more precisely returns
    polynomial matrices A, B and a polynomial den such that dP = A/den and
    dbarP = B/den, exploiting a shared entry denominator.

    When the shared denominator is a power (1+|xi|^2)^m the derivative
    quotient is reduced analytically, d(N/q) = (dN (1+s) - m xibar N) /
    (1+s)^(m+1), keeping degrees and coefficient scales small so the final
    cancellation stays shallow.  Returns None if no shared denominator.
    """
    nd = mat.numden()
    if nd is None:
        return None
    nums, q = nd
    n = len(nums)
    m = one_plus_s_power(q)
    if m is not None:
        one_plus_s = ConjPoly.one_plus_s()
        xi, xb = ConjPoly.xi(), ConjPoly.xibar()
        A = [[nums[i][j].d() * one_plus_s - nums[i][j] * xb * float(m)
              for j in range(n)] for i in range(n)]
        B = [[nums[i][j].dbar() * one_plus_s - nums[i][j] * xi * float(m)
              for j in range(n)] for i in range(n)]
        return A, B, one_plus_s ** (m + 1)
    dq, dbq = q.d(), q.dbar()
    A = [[nums[i][j].d() * q - nums[i][j] * dq for j in range(n)]
         for i in range(n)]
    B = [[nums[i][j].dbar() * q - nums[i][j] * dbq for j in range(n)]
         for i in range(n)]
    return A, B, q * q


def _trace_dPdbarP(mat):
    """tr(dP dbarP) over a shared polynomial denominator when available.

    With dP = A/den and dbarP = B/den the trace is a single rational with
    denominator den^2 and one final cancellation; this avoids the rounding
    that entrywise rational reduction compounds in deep expression trees.
    Falls back to entrywise arithmetic otherwise.
    """
    fac = _derivative_factors(mat)
    if fac is None:
        return (mat.d() @ mat.dbar()).trace()
    A, B, den = fac
    n = len(A)
    acc = ConjPoly.zero()
    for i in range(n):
        for j in range(n):
            acc = acc + A[i][j] * B[j][i]
    return ConjRational(acc, den * den)


def _snap_power_form(g, tol=1e-9):
    """Replace g by the exact c (1+s)^a / (1+s)^b form when its numerator
    and denominator both match one within relative tol.

    Long cancellation chains leave relative dirt around 1e-10 on results
    whose true form is this one; snapping restores exactness so curvature
    constancy is not polluted downstream.  Non-matching g is returned as is.
    """
    b = one_plus_s_power(g.den, tol)
    if b is None:
        return g
    scale = g.num.max_abs()
    sig = [k for k, v in g.num.coeffs.items() if abs(v) > tol * scale]
    if not sig or any(i != j for i, j in sig):
        return g
    di = max(i for i, _ in sig)
    # the constant term has the shortest error chain through cancellation,
    # so it is the most accurate estimate of the overall constant
    c = g.num.coeffs.get((0, 0))
    if c is None or c == 0.0:
        return g
    target = ConjPoly.one_plus_s() ** di
    for k in set(g.num.coeffs) | set(target.coeffs):
        want = target.coeffs.get(k, 0.0) * c
        if abs(g.num.coeffs.get(k, 0.0) - want) > tol * scale:
            return g
    if di >= b:
        return ConjRational._raw(ConjPoly.one_plus_s() ** (di - b) * c,
                                 ConjPoly.const(1.0))
    return ConjRational._raw(ConjPoly.const(c),
                             ConjPoly.one_plus_s() ** (b - di))


def _trace_dPdP(mat):
    """tr(dP dP) with the same shared-denominator strategy."""
    fac = _derivative_factors(mat)
    if fac is None:
        return (mat.d() @ mat.d()).trace()
    A, _, den = fac
    n = len(A)
    acc = ConjPoly.zero()
    for i in range(n):
        for j in range(n):
            acc = acc + A[i][j] * A[j][i]
    return ConjRational(acc, den * den)


def induced_metric(P):
    """All components of the metric induced by the canonical embedding."""
    g_pm = _snap_power_form(_trace_dPdbarP(P.mat))
    g_pp = _trace_dPdP(P.mat)
    return MetricField(n=P.n, g_pp=g_pp, g_pm=g_pm, g_mm=g_pp.conj())


def energy_density(P):
    """Action density tr(dP dbarP); equals the metric conformal factor."""
    return induced_metric(P).g_pm


def conformality_check(P):
    """Identity test of tr(dP dP) == 0 (isothermal coordinates); holds for
    every tower-built projector by orthogonality of the tower members."""
    m = induced_metric(P)
    res = m.g_pp.coeff_norm() / max(m.g_pm.coeff_norm(), 1.0)
    return {"conformal": res <= 1e-10, "residual": res}


def gaussian_curvature(metric):
    """K = -4 (g d dbar g - dg dbar g) / g^3, exact in the rational class.

    Assembled in factored polynomial form from g = a/b: with
    C(p) = p d dbar p - dp dbar p, the curvature is
    K = -4 (C(a) b^2 - C(b) a^2) / (a^3 b), built with shallow polynomial
    arithmetic so coefficients stay well conditioned.  Accepts a MetricField
    or the conformal factor itself."""
    g_pm = metric.g_pm if isinstance(metric, MetricField) else metric
    if g_pm.coeff_norm() <= 1e-14:
        raise DegenerateMetric("conformal factor vanishes identically")
    a, b = g_pm.num, g_pm.den
    Ca = a * a.d().dbar() - a.d() * a.dbar()
    Cb = b * b.d().dbar() - b.d() * b.dbar()
    num = (Ca * (b * b) - Cb * (a * a)) * (-4.0)
    return ConjRational(num, a * a * a * b)


def curvature_grid(metric, radius=3.0, resolution=41):
    """Exact curvature sampled on the square grid [-radius, radius]^2.

    Returns (points, values); pole points of the curvature (zeros of g)
    surface as NaN instead of aborting the scan.
    """
    K = gaussian_curvature(metric)
    axis = np.linspace(-radius, radius, resolution)
    re, im = np.meshgrid(axis, axis, indexing="ij")
    pts = (re + 1j * im).ravel()
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            vals = K.eval_many(pts).real
    except PoleAtPoint:
        vals = np.empty(len(pts))
        for i, z in enumerate(pts):
            try:
                vals[i] = K.eval(z).real
            except (PoleAtPoint, OverflowError):
                vals[i] = np.nan
    return pts, vals


def curvature_spread(metric, radius=3.0, resolution=41):
    """Max - min of the exact curvature over the scan grid (NaN-free)."""
    _, vals = curvature_grid(metric, radius, resolution)
    vals = vals[np.isfinite(vals)]
    if len(vals) == 0:
        raise DegenerateMetric("curvature undefined on the whole grid")
    return float(np.max(vals) - np.min(vals))


def assess_curvature(metric, radius=3.0, resolution=41,
                     tol=CURVATURE_SPREAD_TOL_EXACT):
    """Exact curvature plus a grid constancy verdict.

    When the spread over the scan grid is below tol the surface is reported
    as constant-curvature, with the constant K and the metric constant
    A = 8 / K filled in from a generic evaluation point.
    """
    K = gaussian_curvature(metric)
    spread = curvature_spread(metric, radius, resolution)
    constant = spread <= tol
    K_const = A_const = None
    if constant:
        K_const = float(K.eval(0.37 + 0.21j).real)
        if K_const != 0.0:
            A_const = 8.0 / K_const
    return CurvatureResult(K=K, constant=constant, spread=spread,
                           K_const=K_const, A_const=A_const)


def curvature_report(P, radius=3.0, resolution=41):
    """JSON-ready curvature summary for a projector surface."""
    metric = induced_metric(P)
    res = assess_curvature(metric, radius, resolution)
    comp = ([[int(i), float(w)] for i, w in P.composition]
            if P.composition else None)
    return {"N": P.n,
            "composition": comp,
            "A": res.A_const,
            "K": res.K_const,
            "constant": res.constant,
            "spread": res.spread}


def curvature_fd(metric, points, h=1e-3):
    """Finite-difference curvature oracle: K = -(1/g) Lap(ln g) with a
    fourth-order 9-point Laplacian on ln g.  Independent of the rational
    derivative machinery."""
    points = np.asarray(points, dtype=complex)
    out = np.empty(len(points))
    offs = np.array([0.0, h, -h, 2 * h, -2 * h,
                     1j * h, -1j * h, 2j * h, -2j * h])
    # central + (1, 16, -1)-weighted axis samples, both axes
    w = np.array([-60.0, 16.0, 16.0, -1.0, -1.0,
                  16.0, 16.0, -1.0, -1.0]) / (12.0 * h ** 2)
    for i, z in enumerate(points):
        g = metric.eval_many(z + offs)
        if np.any(g <= 0.0):
            out[i] = np.nan
            continue
        out[i] = -(w @ np.log(g)) / g[0]
    return out


# ---------------------------------------------------------------------------
# Closed forms for towers of the rational-normal (Veronese-type) generator
# ---------------------------------------------------------------------------

def veronese_metric_constant(n, indices, weights=None):
    """The constant A with g = A / (1 + |xi|^2)^2 for a weighted sum of
    tower projectors sum_i alpha_i P_i of the Veronese tower:

        A = sum_(i=0..n-2) (i+1)(n-1-i) (alpha_i - alpha_(i+1))^2.

    The index set must be a contiguous run for the projector sum to carry
    the closed-form constant-curvature metric reported here.
    """
    indices = list(indices)
    for i in indices:
        if not 0 <= i <= n - 1:
            raise IndexOutOfRange(f"index {i} outside 0..{n - 1}")
    srt = sorted(indices)
    if srt != list(range(srt[0], srt[-1] + 1)):
        raise NonContiguousIndices(f"indices {indices} are not contiguous")
    if weights is None:
        weights = [1.0] * len(indices)
    alpha = np.zeros(n)
    for i, w in zip(indices, weights):
        alpha[i] = w
    return float(sum((i + 1) * (n - 1 - i) * (alpha[i] - alpha[i + 1]) ** 2
                     for i in range(n - 1)))


def veronese_curvature_constant(n, indices, weights=None):
    """Constant Gaussian curvature K = 8 / A of the tower-sum surface."""
    A = veronese_metric_constant(n, indices, weights)
    if A == 0.0:
        raise DegenerateMetric("metric constant vanishes")
    return 8.0 / A
