"""Tests for projector fields and their algebraic identities."""

import numpy as np
import pytest

from cpsurf.errors import DuplicateIndex, IndexOutOfRange, ZeroVector
from cpsurf.harmonic import tower, veronese
from cpsurf.projector import (commutator_identity_residual,
                              completeness_residual,
                              conservation_check_homogeneous,
                              constraint_equations_residual,
                              euler_lagrange_residual, hermiticity_residual,
                              idempotency_residual, rank1,
                              reduced_structure_report, selfduality_residual,
                              sum_projector, trace_derivative_residual,
                              trace_rank_residual)
from cpsurf.symalg import ConjPoly, ConjRational, RationalVector

TOL = 1e-10
TOWERS = {n: tower(veronese(n)) for n in range(2, 7)}
RNG = np.random.default_rng(3)
POINTS = RNG.standard_normal(30) + 1j * RNG.standard_normal(30)


def bad_vector():
    # not holomorphic, not a tower member: negative-control source
    return RationalVector([ConjRational(ConjPoly.const(1.0)),
                           ConjRational(ConjPoly.xi() + ConjPoly.xibar())])


def test_rank1_numeric_projector_properties():
    P = rank1(TOWERS[4][2])
    mats = P.eval_many(POINTS)
    for m in mats:
        assert np.max(np.abs(m @ m - m)) < 1e-12
        assert np.max(np.abs(m - m.conj().T)) < 1e-12
        assert abs(np.trace(m) - 1.0) < 1e-12


def test_rank1_symbolic_residuals():
    for n, tw in TOWERS.items():
        for k in range(n):
            P = rank1(tw[k])
            assert idempotency_residual(P) < TOL, (n, k)
            assert hermiticity_residual(P) < TOL
            assert trace_rank_residual(P) < TOL


def test_rank1_rejects_zero():
    with pytest.raises(ZeroVector):
        rank1(RationalVector([ConjRational(0.0), ConjRational(0.0)]))


def test_sum_projector_rank_and_idempotency():
    tw = TOWERS[5]
    P = sum_projector(tw, [0, 2, 4])
    assert P.rank == 3 and P.idempotent
    assert idempotency_residual(P) < TOL
    assert trace_rank_residual(P) < TOL


def test_sum_projector_index_guards():
    tw = TOWERS[3]
    with pytest.raises(DuplicateIndex):
        sum_projector(tw, [0, 0])
    with pytest.raises(IndexOutOfRange):
        sum_projector(tw, [5])


def test_weighted_sum_not_idempotent():
    tw = TOWERS[3]
    P = sum_projector(tw, [0, 1], weights=[1.0, 2.0])
    assert not P.idempotent
    assert idempotency_residual(P) > 1e-2


def test_completeness():
    for n, tw in TOWERS.items():
        assert completeness_residual(tw) < TOL, n


def test_euler_lagrange_all_members_and_front_sums():
    for n in (3, 5):
        tw = TOWERS[n]
        for k in range(n):
            assert euler_lagrange_residual(rank1(tw[k])) < TOL, (n, k)
        for r in range(1, n):
            P = sum_projector(tw, list(range(r)))
            assert euler_lagrange_residual(P) < TOL, (n, r)


def test_euler_lagrange_negative_control():
    assert euler_lagrange_residual(rank1(bad_vector())) > 1e-2


def test_selfduality_front_sums_only():
    tw = TOWERS[4]
    for r in range(1, 4):
        assert selfduality_residual(sum_projector(tw, list(range(r)))) < TOL
    # a middle member alone is not selfdual
    assert selfduality_residual(sum_projector(tw, [1])) > 1e-2


def test_single_member_commutator_identity():
    # [dP_k, P_k] = d(P_k + 2 sum_(j<k) P_j)
    tw = TOWERS[4]
    for k in range(1, 4):
        P_k = sum_projector(tw, [k])
        front = sum_projector(tw, list(range(k)))
        assert commutator_identity_residual(P_k, front.mat) < TOL, k


def test_trace_derivative_identity():
    for n in (3, 4, 6):
        tw = TOWERS[n]
        for k in range(n):
            assert trace_derivative_residual(tw, k) < TOL, (n, k)


def test_conservation_holomorphic_and_negative_control():
    for n in (3, 4, 5, 6):
        res = conservation_check_homogeneous(veronese(n).as_rational_vector())
        assert res < TOL, n
    assert conservation_check_homogeneous(bad_vector()) > 1e-2


def test_point_constraint_equations():
    P = sum_projector(TOWERS[5], [1, 3])
    assert constraint_equations_residual(P, POINTS) < 1e-12


def test_reduced_structure_report_counts():
    # middle projectors of the two golden cases: 5 independent coordinates
    rep3 = reduced_structure_report(sum_projector(TOWERS[3], [1]))
    assert rep3["all_hold"]
    assert rep3["independent_real_parameters"] == 5
    rep4 = reduced_structure_report(sum_projector(TOWERS[4], [1, 2]))
    assert rep4["all_hold"]
    assert rep4["independent_real_parameters"] == 5


def test_reduced_structure_negative_control():
    # a front sum has no antidiagonal template
    rep = reduced_structure_report(sum_projector(TOWERS[4], [0, 1]))
    assert not rep["all_hold"]
