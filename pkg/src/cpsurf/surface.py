"""Surface coordinates in R^(N^2-1) from projector fields.

Off-diagonal coordinates come straight from the entries; the N-1 diagonal
coordinates use the canonical triangular map X = A * diag(P) + b whose
quadratic form sum X^2 is the constant C(N, r) = 2r(N-r)/N.  Also here:
first-row reconstructions for rank 1 and rank N-1, the reduced-case linear
relations, and the contour-integral construction with its path-independence
certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (InconsistentRow, LeadingEntryOne, NotReducedCase,
                     PoleOnContour, PoleAtPoint, RankMismatch, RankOutOfRange,
                     ZeroLeadingEntry)
from .projector import ProjectorField, euler_lagrange_residual, RESIDUAL_TOL
from .symalg import ConjRational, RationalMatrix

QUAD_TOL = 1e-10
GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def offdiag_pairs(n):
    """Lexicographic (i, j) pairs, 1-based, i < j."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


@dataclass(frozen=True)
class SurfaceChart:
    """Canonical diagonal-coordinate chart: X = A * diag(P) + b."""

    n: int
    r: int
    A: np.ndarray
    b: np.ndarray
    C: float


def canonical_chart(n, r):
    """Triangular chart with X_1 = P_11 - P_NN; validates its invariants."""
    if not 1 <= r <= n - 1:
        raise RankOutOfRange(f"rank {r} outside 1..{n - 1}")
    A = np.zeros((n - 1, n - 1))
    for i in range(1, n):
        ci = math.sqrt(2.0 / (i * (i + 1)))
        A[i - 1, i - 1] = ci * (i + 1)
        for j in range(i + 1, n):
            A[i - 1, j - 1] = ci
    b = np.array([-r * math.sqrt(2.0 / (i * (i + 1))) for i in range(1, n)])
    C = 2.0 * r * (n - r) / n

    gram = A.T @ A
    expect = np.full((n - 1, n - 1), 2.0) + 2.0 * np.eye(n - 1)
    if not np.allclose(gram, expect, atol=1e-12):
        raise AssertionError("chart Gram matrix violated")
    if not np.allclose(b, -2.0 * r * np.linalg.solve(A.T, np.ones(n - 1)),
                       atol=1e-12):
        raise AssertionError("chart shift vector violated")
    if abs(b @ b - 2.0 * r * (r - 1) - C) > 1e-12:
        raise AssertionError("chart constant violated")
    return SurfaceChart(n=n, r=r, A=A, b=b, C=C)


@dataclass(frozen=True)
class SurfacePoint:
    """Embedded coordinates at one sample point."""

    xi: complex
    X_diag: np.ndarray      # X_1 .. X_(N-1)
    X_plus: np.ndarray      # (X_ij)+ in offdiag_pairs order
    X_minus: np.ndarray     # (X_ij)-
    C: float

    def quadratic_residual(self):
        total = (self.X_diag @ self.X_diag + self.X_plus @ self.X_plus
                 + self.X_minus @ self.X_minus)
        return abs(total - self.C)


def embed_matrix(mat, chart, xi=complex("nan")):
    """Embed one numeric Hermitian idempotent matrix."""
    n = chart.n
    diag = np.real(np.diagonal(mat))
    if abs(diag.sum() - chart.r) > 1e-8:
        raise RankMismatch(f"trace {diag.sum():.6f} != chart rank {chart.r}")
    X_diag = chart.A @ diag[:-1] + chart.b
    pairs = offdiag_pairs(n)
    X_plus = np.array([2.0 * mat[i - 1, j - 1].real for i, j in pairs])
    X_minus = np.array([-2.0 * mat[i - 1, j - 1].imag for i, j in pairs])
    return SurfacePoint(xi=xi, X_diag=X_diag, X_plus=X_plus, X_minus=X_minus,
                        C=chart.C)


def embed(P, chart, xi):
    """Embed a projector field at the point xi."""
    if P.n != chart.n:
        raise RankMismatch("projector dimension does not match chart")
    if P.idempotent and P.rank != chart.r:
        raise RankMismatch(f"projector rank {P.rank} != chart rank {chart.r}")
    return embed_matrix(P.eval(xi), chart, xi)


def unembed_diagonal(X_diag, chart):
    """All N diagonal entries from the N-1 canonical diagonal coordinates."""
    X_diag = np.asarray(X_diag, dtype=float)
    head = np.linalg.solve(chart.A, X_diag - chart.b)
    return np.append(head, chart.r - head.sum())


def x_diag_rational(P, chart):
    """Diagonal coordinates as exact rational functions of (xi, xibar)."""
    n = chart.n
    out = []
    for i in range(1, n):
        ci = math.sqrt(2.0 / (i * (i + 1)))
        acc = P.mat[i - 1, i - 1] * float(i + 1)
        for j in range(i + 1, n):
            acc = acc + P.mat[j - 1, j - 1]
        out.append((acc - float(chart.r)) * ci)
    return out


# ---------------------------------------------------------------------------
# First-row reconstructions (point level)
# ---------------------------------------------------------------------------

def rank1_reconstruct(first_row, tol=1e-9):
    """Full rank-1 projector matrix from its first row.

    P_ij = conj(P_1i) P_1j / P_11; requires P_11 > 0 and the normalization
    sum_j |P_1j|^2 = P_11.
    """
    row = np.asarray(first_row, dtype=complex)
    p11 = row[0].real
    if abs(row[0].imag) > tol or p11 <= 0.0:
        if abs(p11) <= tol:
            raise ZeroLeadingEntry("P_11 = 0: first-row chart is singular")
        raise InconsistentRow("P_11 must be real positive")
    if abs(np.sum(np.abs(row) ** 2) - p11) > tol * max(1.0, p11):
        raise InconsistentRow("sum |P_1j|^2 != P_11")
    return np.outer(np.conj(row), row) / p11


def rank_nminus1_reconstruct(first_row, tol=1e-9):
    """Rank-(N-1) projector from its first row via Q = I - P:
    Q_ij = conj(Q_1i) Q_1j / (Q_11 - 1), Q_ii = 1 + |Q_1i|^2 / (Q_11 - 1)."""
    row = np.asarray(first_row, dtype=complex)
    q11 = row[0].real
    if abs(q11 - 1.0) <= tol:
        raise LeadingEntryOne("Q_11 = 1: first-row chart is singular")
    n = len(row)
    p_row = -row
    p_row[0] = 1.0 - q11
    return np.eye(n) - rank1_reconstruct(p_row, tol)


def rank1_coordinate_relations(first_row, tol=1e-9):
    """Verify the independent-coordinate relations of the rank-1 case.

    Checks the off-diagonal products
        (X_kl)+ = ((X_1k)+ (X_1l)+ + (X_1k)- (X_1l)-) / (2 P_11)
        (X_kl)- = ((X_1k)+ (X_1l)- - (X_1k)- (X_1l)+) / (2 P_11)
    and the diagonal relation
        X_1 = (2 P_11 - 1) + sum_(j=2..N-1) ((X_1j)+^2 + (X_1j)-^2) / (4 P_11)
    against the coordinates of the reconstructed matrix.  Returns the max
    residual over all relations.
    """
    mat = rank1_reconstruct(first_row, tol)
    n = mat.shape[0]
    p11 = mat[0, 0].real
    xp = {(i, j): 2.0 * mat[i - 1, j - 1].real for i, j in offdiag_pairs(n)}
    xm = {(i, j): -2.0 * mat[i - 1, j - 1].imag for i, j in offdiag_pairs(n)}
    worst = 0.0
    for k in range(2, n + 1):
        for el in range(k + 1, n + 1):
            plus = (xp[(1, k)] * xp[(1, el)] + xm[(1, k)] * xm[(1, el)]) / (2 * p11)
            minus = (xp[(1, k)] * xm[(1, el)] - xm[(1, k)] * xp[(1, el)]) / (2 * p11)
            worst = max(worst, abs(plus - xp[(k, el)]), abs(minus - xm[(k, el)]))
    x1 = mat[0, 0].real - mat[n - 1, n - 1].real
    cand = (2 * p11 - 1.0) + sum(xp[(1, j)] ** 2 + xm[(1, j)] ** 2
                                 for j in range(2, n)) / (4 * p11)
    worst = max(worst, abs(x1 - cand))
    return worst


# ---------------------------------------------------------------------------
# Reduced-case linear relations among diagonal coordinates
# ---------------------------------------------------------------------------

_REDUCED_RELATIONS = {
    # n: list of (name, {index: coefficient}) meaning sum coeff*X_i == 0
    3: [("X1_vanishes", {1: 1.0})],
    5: [("X1_vanishes", {1: 1.0}),
        ("X2_from_X3_X4", {2: 1.0, 3: -1.0 / (2 * math.sqrt(2)),
                           4: -math.sqrt(15) / (2 * math.sqrt(2))})],
    7: [("X1_vanishes", {1: 1.0}),
        ("X2_from_X4_X5_X6", {2: 1.0, 4: -math.sqrt(2.0 / 15.0),
                              5: -3.0 / (2 * math.sqrt(5)),
                              6: -math.sqrt(7) / 2.0}),
        ("X3_from_X4_X5", {3: 1.0, 4: -1.0 / math.sqrt(15),
                           5: -2.0 * math.sqrt(2) / math.sqrt(5)})],
}


def reduced_linear_relations(n, P, chart=None, tol=QUAD_TOL):
    """Verify the linear relations among diagonal coordinates of the middle
    (reduced) Veronese projector, identically in xi."""
    if n % 2 == 0:
        raise NotReducedCase("reduced case requires odd N")
    mid = (n - 1) // 2
    if P.composition and (len(P.composition) != 1
                          or P.composition[0][0] != mid):
        raise NotReducedCase(f"expected the middle projector P_{mid}")
    if chart is None:
        chart = canonical_chart(n, max(P.rank, 1))
    xs = x_diag_rational(P, chart)
    scale = max(max(x.coeff_norm() for x in xs), 1.0)
    results = []
    for name, combo in _REDUCED_RELATIONS.get(n, [("X1_vanishes", {1: 1.0})]):
        acc = ConjRational(0.0)
        for idx, coeff in combo.items():
            acc = acc + xs[idx - 1] * coeff
        res = acc.coeff_norm() / scale
        results.append({"identity_name": name, "holds": res <= tol,
                        "residual": res})
    return {"n": n, "relations": results,
            "all_hold": all(r["holds"] for r in results)}


# ---------------------------------------------------------------------------
# Contour-integral surface
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LineIntegralResult:
    X: np.ndarray            # anti-Hermitian matrix coordinates
    harmonic: bool
    el_residual: float


def _current_matrix(P, k_choice):
    if k_choice == "commutator":
        return P.mat.dbar().commutator(P.mat)
    if k_choice == "swapped":
        # deliberately wrong 1-form (holomorphic derivative in the
        # antiholomorphic slot): not closed, so the integral becomes path
        # dependent even for harmonic P
        return P.mat.d().commutator(P.mat)
    raise ValueError(f"unknown current choice {k_choice!r}")


def current_closedness_residual(P, k_choice="commutator"):
    """Residual of dbar(K^dag) - d(K) = 0 as an identity of rationals.

    Closedness of the 1-form i (K^dag dxi + K dxibar) is exactly what makes
    the line-integral surface path independent, so this is the symbolic
    counterpart of the two-contour numeric check.
    """
    K = _current_matrix(P, k_choice)
    res = K.dagger().dbar() - K.d()
    return res.coeff_norm() / max(K.coeff_norm(), 1.0)


def line_integral_surface(P, endpoint, contour=None, k_choice="commutator",
                          base=0j, panel=0.25):
    """X(xi) = i * integral over the contour of (K^dag dxi' + K dxibar').

    The contour is a polyline from base to endpoint (default: straight
    segment).  Composite 16-point Gauss-Legendre per panel.  Non-harmonic
    projectors are integrated anyway but flagged (path dependence expected).
    """
    el = euler_lagrange_residual(P)
    harmonic = el <= RESIDUAL_TOL
    if contour is None:
        contour = [base, endpoint]
    K = _current_matrix(P, k_choice)
    n = P.n
    X = np.zeros((n, n), dtype=complex)
    for a, b in zip(contour[:-1], contour[1:]):
        a, b = complex(a), complex(b)
        length = abs(b - a)
        if length == 0.0:
            continue
        panels = max(1, int(np.ceil(length / panel)))
        edges = np.linspace(0.0, 1.0, panels + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid = 0.5 * (lo + hi)
            hw = 0.5 * (hi - lo)
            ts = mid + hw * GL_NODES
            pts = a + ts * (b - a)
            try:
                kv = K.eval_many(pts)                 # (16, n, n)
            except PoleAtPoint as exc:
                raise PoleOnContour(str(exc)) from exc
            kdag = np.conj(np.swapaxes(kv, -1, -2))
            integrand = 1j * (kdag * (b - a) + kv * np.conj(b - a))
            X += hw * np.einsum("q,qij->ij", GL_WEIGHTS, integrand)
    return LineIntegralResult(X=X, harmonic=harmonic, el_residual=el)


def integral_reference(P, endpoint, base=0j):
    """-i * (P(endpoint) - P(base)): what the integral must equal for a
    selfdual (front-sum) projector with the commutator current."""
    return -1j * (P.eval(endpoint) - P.eval(base))


def path_independence(P, endpoint, base=0j, k_choice="commutator"):
    """Integrate along a straight and an L-shaped contour; report the
    largest entrywise disagreement."""
    straight = [base, endpoint]
    corner = complex(endpoint.real, base.imag)
    if abs(corner - base) < 1e-12 or abs(corner - endpoint) < 1e-12:
        # axis-aligned segment: the rectangle corners are collinear with the
        # endpoints, so detour through a genuine off-segment corner instead
        corner = base + (endpoint - base) * (0.5 + 0.5j)
    lshape = [base, corner, endpoint]
    r1 = line_integral_surface(P, endpoint, straight, k_choice, base)
    r2 = line_integral_surface(P, endpoint, lshape, k_choice, base)
    return {"max_disagreement": float(np.max(np.abs(r1.X - r2.X))),
            "harmonic": r1.harmonic, "el_residual": r1.el_residual,
            "X_straight": r1.X, "X_lshape": r2.X}


def direct_surface(P):
    """The identity packaging xi -> X = P(xi) (weighted sums included)."""
    return lambda xi: P.eval(xi)


# ---------------------------------------------------------------------------
# Grid sampling (CLI export backend)
# ---------------------------------------------------------------------------

def grid_points(radius, resolution):
    """Square grid on [-radius, radius]^2 in (xi1, xi2), row-major."""
    axis = np.linspace(-radius, radius, resolution)
    re, im = np.meshgrid(axis, axis, indexing="ij")
    return (re + 1j * im).ravel()


def sample_grid(P, chart, radius, resolution, threads=1):
    """Evaluate the embedding on the grid; returns (points, rows) where each
    row is the concatenation [X_1..X_(N-1), (X_ij)+, (X_ij)- pairwise].

    With threads > 1 the grid is split into contiguous chunks evaluated on a
    thread pool; the assembled output order is independent of scheduling."""
    pts = grid_points(radius, resolution)
    if threads > 1 and len(pts) > threads:
        from concurrent.futures import ThreadPoolExecutor

        chunks = np.array_split(pts, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(P.eval_many, chunks))
        vals = np.concatenate(parts, axis=0)
    else:
        vals = P.eval_many(pts)                   # (npts, n, n)
    n = chart.n
    diag = np.real(np.einsum("...ii->...i", vals))
    tr = diag.sum(axis=-1)
    if np.max(np.abs(tr - chart.r)) > 1e-8:
        raise RankMismatch("trace does not match chart rank on the grid")
    X_diag = diag[:, :-1] @ chart.A.T + chart.b
    pairs = offdiag_pairs(n)
    cols = [X_diag]
    for i, j in pairs:
        e = vals[:, i - 1, j - 1]
        cols.append(np.stack([2.0 * e.real, -2.0 * e.imag], axis=1))
    rows = np.hstack(cols)
    return pts, rows


def quadratic_residuals(rows, C):
    return np.abs(np.sum(rows ** 2, axis=1) - C)
