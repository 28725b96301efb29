"""Tests for the raising tower and its closed-form structure."""

import math

import numpy as np
import pytest

from cpsurf.errors import DimensionTooSmall, IndexOutOfRange, ZeroVector
from cpsurf.harmonic import (HoloVector, antidiagonal_matrix,
                             component_formula_report, norm_ratio_constant,
                             p_plus, symmetry_relation_check, tower, veronese,
                             veronese_inner_partial, veronese_norm_sq)

TOWERS = {n: tower(veronese(n)) for n in range(2, 7)}


def test_veronese_components():
    # entries sqrt(binom(n-1, r)) xi^r
    f = veronese(4)
    z = 0.6 + 0.1j
    want = [math.sqrt(math.comb(3, r)) * z ** r for r in range(4)]
    got = [e.eval(z) for e in f.entries]
    assert np.max(np.abs(np.array(got) - np.array(want))) < 1e-13


def test_dimension_guards():
    with pytest.raises(DimensionTooSmall):
        veronese(1)
    with pytest.raises(ZeroVector):
        HoloVector.from_coeff_lists([[0.0], [0.0]])


def test_raising_operator_numeric():
    # P+ v = dv - (v~.dv / |v|^2) v, checked against a numpy evaluation
    f = veronese(3).as_rational_vector()
    m1 = p_plus(f)
    z, h = 0.5 + 0.4j, 1e-6

    def num_vec(v, w):
        return np.array([e.eval(w) for e in v])

    fv = num_vec(f, z)
    dfv = 0.5 * ((num_vec(f, z + h) - num_vec(f, z - h)) / (2 * h)
                 - 1j * (num_vec(f, z + 1j * h) - num_vec(f, z - 1j * h))
                 / (2 * h))
    expect = dfv - (np.vdot(fv, dfv) / np.vdot(fv, fv)) * fv
    got = m1.eval(z)
    assert np.max(np.abs(got - expect)) < 1e-6


def test_tower_orthogonality():
    tw = TOWERS[5]
    z = -0.3 + 0.8j
    vecs = [np.array([e.eval(z) for e in m.vec]) for m in tw]
    for a in range(5):
        for b in range(a + 1, 5):
            ip = np.vdot(vecs[a], vecs[b])
            assert abs(ip) < 1e-10 * (np.linalg.norm(vecs[a])
                                      * np.linalg.norm(vecs[b]) + 1.0)


def test_norm_closed_form_identity():
    for n, tw in TOWERS.items():
        for k, m in enumerate(tw):
            cf = veronese_norm_sq(n, k)
            diff = m.norm_sq - cf
            assert diff.coeff_norm() < 1e-12 * max(cf.coeff_norm(), 1.0), \
                (n, k)


def test_norm_ratio_constant():
    tw = TOWERS[4]
    z = 0.2 + 0.9j
    for i in range(1, 4):
        ratio = (tw[i].norm_sq / tw[i - 1].norm_sq).eval(z).real
        want = norm_ratio_constant(4, i) / (1.0 + abs(z) ** 2) ** 2
        assert abs(ratio - want) < 1e-10


def test_inner_partial_closed_form():
    # (raise^k f)~ . d(raise^k f) closed form against direct computation
    for n in (3, 5):
        tw = TOWERS[n]
        for k in range(n):
            direct = tw[k].vec.inner(tw[k].vec.d())
            cf = veronese_inner_partial(n, k)
            diff = direct - cf
            assert diff.coeff_norm() < 1e-10 * max(cf.coeff_norm(), 1.0), \
                (n, k)


def test_antidiagonal_matrix_orthogonal():
    for n in (3, 4, 5):
        A = antidiagonal_matrix(n)
        assert np.allclose(A.T @ A, np.eye(n))


def test_symmetry_relation_and_negative_control():
    for n in (3, 4, 6):
        tw = TOWERS[n]
        for k in range(n):
            rep = symmetry_relation_check(n, k, members=tw)
            assert rep["holds"], (n, k, rep)
        bad = symmetry_relation_check(n, 1, flip_sign=True, members=tw)
        assert not bad["holds"] and bad["residual"] > 1e-2


def test_component_closed_form_matches_recurrence():
    for n in (3, 4, 5):
        rep = component_formula_report(n, members=TOWERS[n])
        assert rep["all_match"], rep["mismatches"]


def test_closed_form_index_guards():
    with pytest.raises(IndexOutOfRange):
        veronese_norm_sq(4, 4)
    with pytest.raises(IndexOutOfRange):
        norm_ratio_constant(4, 0)
