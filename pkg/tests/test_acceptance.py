"""Acceptance gate: one test per criterion, one printed verdict line each.

Expected values are tagged by provenance in comments:
  [PAPER]   value quoted by the source material (closed forms, constants)
  [DERIVED] value computed through an independent oracle and frozen here
  [TRIVIAL] value forced by definitions
"""

import math
import time

import numpy as np
import pytest

from cpsurf.geometry import (assess_curvature, curvature_spread,
                             induced_metric, veronese_metric_constant)
from cpsurf.harmonic import (HoloVector, symmetry_relation_check, tower,
                             veronese, veronese_norm_sq)
from cpsurf.projector import (conservation_check_homogeneous,
                              euler_lagrange_residual, rank1,
                              reduced_structure_report, sum_projector)
from cpsurf.surface import (canonical_chart, embed_matrix, path_independence,
                            rank1_reconstruct, reduced_linear_relations,
                            unembed_diagonal)
from cpsurf.symalg import ConjPoly, ConjRational, RationalVector

TOWERS = {n: tower(veronese(n)) for n in range(2, 9)}


def verdict(capfd, idx, name, ok):
    with capfd.disabled():
        print(f"criterion {idx:2d} [{name}]: {'PASS' if ok else 'FAIL'}")
    assert ok, f"criterion {idx} ({name}) failed"


def nonharmonic_projector():
    v = RationalVector([ConjRational(ConjPoly.const(1.0)),
                        ConjRational(ConjPoly.xi() + ConjPoly.xibar())])
    return rank1(v)


def test_c01_canonical_quadratic(capfd):
    # sum X^2 = 2r(N-r)/N at 200 random points, all N <= 8, all ranks
    # [TRIVIAL: the constant is forced by the chart construction]
    rng = np.random.default_rng(0)
    pts = rng.standard_normal(200) + 1j * rng.standard_normal(200)
    t0 = time.monotonic()
    worst = 0.0
    for n in range(2, 9):
        tw = TOWERS[n]
        for r in range(1, n):
            P = sum_projector(tw, list(range(r)))
            chart = canonical_chart(n, r)
            mats = P.eval_many(pts)
            res = max(embed_matrix(m, chart).quadratic_residual()
                      for m in mats)
            worst = max(worst, res)
    elapsed = time.monotonic() - t0
    verdict(capfd, 1, "canonical quadratic constant",
            worst < 1e-10 and elapsed < 30.0)


def test_c02_curvature_constants(capfd):
    # A(3, P_1) = 4 and A(4, P_1+P_2) = 6 [PAPER], hence K = 2 and 4/3
    one_plus_s_sq = ConjRational(ConjPoly.one_plus_s() ** 2)
    ok = True
    for n, comp, A_want, K_want in ((3, [1], 4.0, 2.0),
                                    (4, [1, 2], 6.0, 4.0 / 3.0)):
        P = sum_projector(TOWERS[n], comp)
        m = induced_metric(P)
        ident = m.g_pm * one_plus_s_sq - A_want      # rational identity
        ok &= ident.coeff_norm() < 1e-12
        res = assess_curvature(m)
        ok &= res.constant
        ok &= abs(res.K_const - K_want) < 1e-12 * K_want
        ok &= abs(veronese_metric_constant(n, comp) - A_want) < 1e-12
    verdict(capfd, 2, "constant curvature values", ok)


def test_c03_norm_law(capfd):
    # |raise^k f|^2 = (N-1)! k!/(N-k-1)! (1+s)^(N-1-2k) [PAPER closed form]
    ok = True
    for n in range(2, 9):
        for k, m in enumerate(TOWERS[n]):
            cf = veronese_norm_sq(n, k)
            diff = m.norm_sq - cf
            ok &= diff.coeff_norm() < 1e-12 * max(cf.coeff_norm(), 1.0)
    verdict(capfd, 3, "tower norm law", ok)


def test_c04_antidiagonal_symmetry(capfd):
    # raise^(N-1-k) f = (-1)^k gamma A conj(raise^k f) [PAPER], with a
    # sign-flip negative control that must fail loudly
    ok = True
    for n in range(2, 9):
        for k in range(n):
            rep = symmetry_relation_check(n, k, members=TOWERS[n])
            ok &= rep["holds"]
    bad = symmetry_relation_check(4, 1, flip_sign=True, members=TOWERS[4])
    ok &= (not bad["holds"]) and bad["residual"] > 1e-2
    verdict(capfd, 4, "antidiagonal symmetry", ok)


def golden_cp2_matrix():
    # [PAPER] 2 (1+s)^2 P_1 for N=3; the printed (1,3) entry has the wrong
    # sign (Hermiticity against the printed (3,1) entry fixes it to -4 xb^2)
    s2 = 2.0 * math.sqrt(2.0)
    xi, xb = ConjPoly.xi(), ConjPoly.xibar()
    s = ConjPoly.monomial(1.0, 1, 1)
    one = ConjPoly.const(1.0)
    return [
        [s * 4.0, xb * (one - s) * (-s2), ConjPoly.monomial(-4.0, 0, 2)],
        [xi * (one - s) * (-s2), (one - s) * (one - s) * 2.0,
         xb * (one - s) * s2],
        [ConjPoly.monomial(-4.0, 2, 0), xi * (one - s) * s2, s * 4.0],
    ]


def golden_cp3_matrix():
    # [PAPER] (1+s)^3 (P_1 + P_2) for N=4, transcribed entrywise
    r3 = math.sqrt(3.0)
    xi, xb = ConjPoly.xi(), ConjPoly.xibar()
    s = ConjPoly.monomial(1.0, 1, 1)
    one = ConjPoly.const(1.0)
    d11 = (s + s * s) * 3.0                       # 3 s (1 + s)
    d22 = one + ConjPoly.monomial(1.0, 3, 3)      # 1 + s^3
    a = xb * (one - s * s) * (-r3)                # -sqrt3 xb (1 - s^2)
    b = xb * xb * (one + s) * (-r3)               # -sqrt3 xb^2 (1 + s)
    zero = ConjPoly.zero()
    return [
        [d11, a, b, zero],
        [a.conj(), d22, zero, b],
        [b.conj(), zero, d22, a * (-1.0)],
        [zero, b.conj(), a.conj() * (-1.0), d11],
    ]


def test_c05_golden_matrices(capfd):
    ok = True
    for n, comp, golden, factor in ((3, [1], golden_cp2_matrix(), 2.0),
                                    (4, [1, 2], golden_cp3_matrix(), 1.0)):
        P = sum_projector(TOWERS[n], comp)
        nums, den = P.mat.numden()
        # normalizer recovery: the golden matrices equal factor * (1+s)^(n-1)
        # times the projector, so compare numerators on the shared lattice
        scale = max(g.max_abs() for row in golden for g in row)
        for i in range(n):
            for j in range(n):
                diff = nums[i][j] * factor - golden[i][j]
                ok &= diff.max_abs() < 1e-12 * scale
        rep = reduced_structure_report(P)
        ok &= rep["all_hold"]
        ok &= rep["independent_real_parameters"] == 5   # surfaces in R^5
    verdict(capfd, 5, "golden matrices and R^5 structure", ok)


def test_c06_reduced_relations(capfd):
    ok = True
    for n in (5, 7):
        tw = TOWERS[n]
        P = sum_projector(tw, [(n - 1) // 2])
        rep = reduced_linear_relations(n, P, tol=1e-10)
        ok &= rep["all_hold"]
        ok &= all(r["residual"] < 1e-10 for r in rep["relations"])
    verdict(capfd, 6, "reduced linear relations", ok)


def test_c07_path_independence(capfd):
    t0 = time.monotonic()
    ok = True
    tw = TOWERS[4]
    for comp in ([0], [0, 1]):
        P = sum_projector(tw, comp)
        rep = path_independence(P, 1.0 + 0j)
        ok &= rep["harmonic"] and rep["max_disagreement"] < 1e-8
    bad = path_independence(nonharmonic_projector(), 1.0 + 0j)
    ok &= (not bad["harmonic"]) and bad["max_disagreement"] > 1e-3
    ok &= (time.monotonic() - t0) < 10.0
    verdict(capfd, 7, "contour path independence", ok)


def test_c08_nonconstant_curvature(capfd):
    # f = (1, xi, xi^3): base projector has genuinely varying curvature
    # [DERIVED: frozen grid spread 28.72 from the independent fd oracle]
    f = HoloVector.from_coeff_lists([[1.0], [0.0, 1.0],
                                     [0.0, 0.0, 0.0, 1.0]])
    m = induced_metric(rank1(f.as_rational_vector()))
    spread = curvature_spread(m)
    verdict(capfd, 8, "nonconstant curvature detected", spread > 1e-2)


def test_c09_euler_lagrange_and_conservation(capfd):
    # EL identity for every tower member; the homogeneous conservation law
    # for the holomorphic representative (it does not extend to mixed
    # members, see the negative-control analysis in the repo notes)
    ok = True
    for n in range(2, 7):
        tw = TOWERS[n]
        for k in range(n):
            ok &= euler_lagrange_residual(rank1(tw[k])) < 1e-10
        ok &= conservation_check_homogeneous(
            veronese(n).as_rational_vector()) < 1e-10
    v = RationalVector([ConjRational(ConjPoly.const(1.0)),
                        ConjRational(ConjPoly.xi() + ConjPoly.xibar())])
    ok &= euler_lagrange_residual(rank1(v)) > 1e-2
    ok &= conservation_check_homogeneous(v) > 1e-2
    verdict(capfd, 9, "Euler-Lagrange and conservation", ok)


def test_c10_round_trip_and_reconstruction(capfd):
    ok = True
    rng = np.random.default_rng(10)
    for _ in range(100):
        n = int(rng.integers(2, 9))
        r = int(rng.integers(1, n))
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        q, _ = np.linalg.qr(m)
        proj = q[:, :r] @ q[:, :r].conj().T
        chart = canonical_chart(n, r)
        pt = embed_matrix(proj, chart)
        diag = unembed_diagonal(pt.X_diag, chart)
        ok &= np.max(np.abs(diag - np.diagonal(proj).real)) < 1e-12
    P = rank1(TOWERS[3][0])
    pts = rng.standard_normal(50) + 1j * rng.standard_normal(50)
    for z in pts:
        mat = P.eval(z)
        rec = rank1_reconstruct(mat[0])
        ok &= np.max(np.abs(rec - mat)) < 1e-10
    verdict(capfd, 10, "round trip and rank-1 reconstruction", ok)
