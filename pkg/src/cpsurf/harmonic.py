"""Holomorphic inputs and the raising-operator tower of sigma-model solutions.

Starting from a nonconstant holomorphic vector f in C^N, repeated application
of the raising operator

    raise_once(v) = d(v) - (v^dag . d(v) / |v|^2) v

produces the full family v, raise(v), ..., raise^{N-1}(v) of mutually
orthogonal solution vectors; raise^N(v) vanishes identically.  For the
Veronese input the norms, inner products and an antidiagonal conjugation
symmetry all have closed forms, implemented here as cross-checks against the
recurrence (which is the ground truth).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionTooSmall, IndexOutOfRange, TowerDegenerate, ZeroVector
from .symalg import (COEFF_TOL, ONE_PLUS_S, ConjPoly, ConjRational,
                     RationalVector)


@dataclass(frozen=True)
class HoloVector:
    """Holomorphic polynomial map C -> C^N (every entry has zero xibar-degree)."""

    n: int
    entries: tuple

    def __post_init__(self):
        if self.n < 2:
            raise DimensionTooSmall(f"need n >= 2, got {self.n}")
        if len(self.entries) != self.n:
            raise ValueError("entry count does not match dimension")
        for e in self.entries:
            if any(j != 0 for (_, j) in e.coeffs):
                raise ValueError("entries must be holomorphic (no xibar)")
        if all(not e.coeffs for e in self.entries):
            raise ZeroVector("zero holomorphic vector")

    @classmethod
    def from_coeff_lists(cls, coeff_lists):
        """One ascending-degree complex coefficient list per component."""
        entries = tuple(ConjPoly.from_holo_coeffs(c) for c in coeff_lists)
        return cls(len(coeff_lists), entries)

    def as_rational_vector(self):
        return RationalVector(list(self.entries))


@dataclass(frozen=True)
class MixedSolution:
    """Tower member k with its components and cached norm-square."""

    k: int
    vec: RationalVector
    norm_sq: ConjRational = field(default=None)

    def __post_init__(self):
        if self.norm_sq is None:
            object.__setattr__(self, "norm_sq", self.vec.norm_sq())


def veronese(n):
    """Holomorphic generator with entries sqrt(C(n-1, r)) xi^r, r = 0..n-1."""
    if n < 2:
        raise DimensionTooSmall(f"need n >= 2, got {n}")
    entries = tuple(ConjPoly.monomial(math.sqrt(math.comb(n - 1, r)), r)
                    for r in range(n))
    return HoloVector(n, entries)


def _common_den(v):
    """Split a RationalVector into (numerator polys, shared denominator)."""
    dens = [e.den for e in v]
    first = dens[0].coeffs
    if all(d.coeffs == first for d in dens[1:]):
        return [e.num for e in v], dens[0]
    nums = []
    for i, e in enumerate(v):
        p = e.num
        for j, d in enumerate(dens):
            if j != i:
                p = p * d
        nums.append(p)
    den = dens[0]
    for d in dens[1:]:
        den = den * d
    return nums, den


def _integral_gcd(polys):
    """gcd of all coefficients if every one is a (complex) integer, else 0."""
    vals = []
    for p in polys:
        for c in p.coeffs.values():
            for x in (c.real, c.imag):
                r = round(x)
                if abs(x - r) > 1e-9 or abs(r) > 2 ** 52:
                    return 0
                if r:
                    vals.append(abs(int(r)))
    if not vals:
        return 0
    g = 0
    for v in vals:
        g = math.gcd(g, v)
        if g == 1:
            return 1
    return g


def _snap_integral(p):
    """Round every coefficient to the nearest (complex) integer."""
    return ConjPoly({k: complex(round(c.real), round(c.imag))
                     for k, c in p.coeffs.items()})


def _cancel_vector(nums, den, tol=COEFF_TOL):
    """Joint cancellation of a poly vector over a shared denominator.

    Strips common monomials and common (1+|xi|^2) powers, then rescales: by
    the integer coefficient gcd when everything is integral (keeps the
    recurrence exact), by the denominator's leading coefficient otherwise.
    Returns (nums, den, alpha) where alpha restores the original value:
    original = alpha * new.
    """
    from .symalg import _div_one_plus_s, _grlex_key

    nums = [p.chop(tol) for p in nums]
    den = den.chop(tol)
    keys = [k for p in nums for k in p.coeffs] + list(den.coeffs)
    mi = min((i for i, _ in keys), default=0)
    mj = min((j for _, j in keys), default=0)
    if mi or mj:
        shift = lambda p: ConjPoly({(i - mi, j - mj): v
                                    for (i, j), v in p.coeffs.items()})
        nums = [shift(p) for p in nums]
        den = shift(den)
    while True:
        d2 = _div_one_plus_s(den, tol)
        if d2 is None:
            break
        n2 = []
        for p in nums:
            q = _div_one_plus_s(p, tol)
            if q is None:
                break
            n2.append(q)
        else:
            nums, den = n2, d2
            continue
        break
    alpha = 1.0
    gn = _integral_gcd(nums)
    gd = _integral_gcd([den])
    if gn >= 1:
        # snap to the lattice even when the gcd is 1: this removes float
        # dirt from the sqrt-weight split before it can compound
        nums = [_snap_integral(p * (1.0 / gn)) for p in nums]
        alpha *= gn
    if gd >= 1:
        den = _snap_integral(den * (1.0 / gd))
        alpha /= gd
    if gn == 0 or gd == 0:
        lead = den.coeffs[max(den.coeffs, key=_grlex_key)]
        if lead != 1.0:
            inv = 1.0 / lead
            nums = [p * inv for p in nums]
            den = den * inv
            den.coeffs[max(den.coeffs, key=_grlex_key)] = 1.0
    return nums, den, alpha


def _p_plus_numden(nums, den, weights, tol=COEFF_TOL):
    """Raising operator on the (numerators, shared denominator) form with a
    diagonal weight metric (weights[r] multiplies component r in inner
    products).

    raise(u/d) = [ (u^dag u) du - (u^dag . du) u ] / (d * u^dag u):
    pure polynomial arithmetic, so cancellation stays exact on the integer
    lattice.  Returns (nums, den, alpha) with true = alpha * nums/den.
    """
    du = [p.d() for p in nums]
    nsq = ConjPoly.zero()
    ip = ConjPoly.zero()
    for b, u, v in zip(weights, nums, du):
        c = u.conj() * b
        nsq = nsq + c * u
        ip = ip + c * v
    w = [nsq * dv - ip * u for u, dv in zip(nums, du)]
    return _cancel_vector(w, den * nsq, tol)


def _tower_numden(nums0, weights, n):
    """Levels of the weighted-lattice tower: list of (nums, den, alpha)."""
    levels = []
    nums, den, alpha = list(nums0), ConjPoly.const(1.0), 1.0
    for k in range(n):
        scale = max(den.max_abs(), 1.0)
        if all(p.is_zero(COEFF_TOL * 100, scale) for p in nums):
            raise TowerDegenerate(k)
        levels.append((nums, den, alpha))
        if k < n - 1:
            nums, den, step = _p_plus_numden(nums, den, weights)
            alpha *= step
    return levels


def p_plus(v):
    """One application of the raising operator to a rational vector."""
    if isinstance(v, HoloVector):
        v = v.as_rational_vector()
    if v.is_zero():
        raise ZeroVector("raising operator on the zero vector")
    nums, den = _common_den(v)
    w, g, alpha = _p_plus_numden(nums, den, [1.0] * len(nums))
    return RationalVector([ConjRational(p * alpha, g) for p in w])


def tower(f):
    """All N levels v, raise(v), ..., raise^{N-1}(v) as MixedSolutions.

    Raises TowerDegenerate if a level below N-1 vanishes identically (input
    with a common factor or degenerate derivative jets).

    For the Veronese generator the square-root weights are pulled out as a
    diagonal so the recurrence runs on exact integer coefficients; the
    resulting members are identical to raising the weighted vector directly.
    """
    if not isinstance(f, HoloVector):
        raise TypeError("tower expects a HoloVector")
    n = f.n
    weights, nums0 = _split_weights(f)
    levels = _tower_numden(nums0, weights, n)
    members = []
    roots = [math.sqrt(b) for b in weights]
    for k, (nums, den, alpha) in enumerate(levels):
        vec = RationalVector([ConjRational(p * (alpha * w), den)
                              for p, w in zip(nums, roots)])
        members.append(MixedSolution(k, vec))
    return members


def _split_weights(f):
    """Factor each entry as sqrt(weight) * primitive polynomial when the
    entry is a positive multiple of an integral polynomial; fall back to
    weight 1 otherwise."""
    weights = []
    nums = []
    for e in f.entries:
        m = e.max_abs()
        if m == 0.0:
            weights.append(1.0)
            nums.append(e)
            continue
        # try to recognize c * (integral primitive poly) with c > 0 real
        lead = e.coeffs[e.leading_key()]
        if abs(lead.imag) < 1e-12 * abs(lead) and lead.real > 0:
            prim = e * (1.0 / lead.real)
            w = lead.real ** 2
            # keep the lattice exactly integral (sqrt-binomial weights)
            if _integral_gcd([prim]) != 0 and abs(w - round(w)) < 1e-9:
                weights.append(float(round(w)))
                nums.append(_snap_integral(prim))
                continue
        weights.append(1.0)
        nums.append(e)
    return weights, nums


def veronese_norm_sq(n, k):
    """Closed-form |raise^k(f)|^2 = (n-1)! k! / (n-k-1)! * (1+|xi|^2)^(n-1-2k)."""
    if not 0 <= k <= n - 1:
        raise IndexOutOfRange(f"k={k} outside 0..{n - 1}")
    c = math.factorial(n - 1) * math.factorial(k) / math.factorial(n - 1 - k)
    e = n - 1 - 2 * k
    if e >= 0:
        return ConjRational(ONE_PLUS_S ** e * c)
    return ConjRational(ConjPoly.const(c), ONE_PLUS_S ** (-e))


def veronese_inner_partial(n, k):
    """Closed-form (raise^k f)^dag . d(raise^k f)."""
    if not 0 <= k <= n - 1:
        raise IndexOutOfRange(f"k={k} outside 0..{n - 1}")
    c = (math.factorial(n - 1) * math.factorial(k) / math.factorial(n - 1 - k)
         * (n - (2 * k + 1)))
    e = n - 2 - 2 * k
    num = ConjPoly.xibar() * c
    if e >= 0:
        return ConjRational(num * ONE_PLUS_S ** e)
    return ConjRational(num, ONE_PLUS_S ** (-e))


def norm_ratio_constant(n, i):
    """|raise^i f|^2 / |raise^(i-1) f|^2 = i(n-i) / (1+|xi|^2)^2 for Veronese."""
    if not 1 <= i <= n - 1:
        raise IndexOutOfRange(f"i={i} outside 1..{n - 1}")
    return i * (n - i)


def antidiagonal_matrix(n):
    """Orthogonal antidiagonal sign matrix A_(j, n-j+1) = (-1)^(n+j), 1-based."""
    mat = np.zeros((n, n))
    for j in range(1, n + 1):
        mat[j - 1, n - j] = (-1.0) ** (n + j)
    return mat


def symmetry_relation_check(n, k, flip_sign=False, members=None):
    """Verify raise^(n-1-k) f = (-1)^k gamma * A * conj(raise^k f) (Veronese).

    gamma is the closed-form ratio of normalization factors; flip_sign injects
    a wrong sign as a negative control.  Returns a report dict; failure is
    data, not an error.
    """
    if not 0 <= k <= n - 1:
        raise IndexOutOfRange(f"k={k} outside 0..{n - 1}")
    if members is None:
        members = tower(veronese(n))
    lhs = members[n - 1 - k].vec
    rhs_base = members[k].vec.conj()

    c = math.factorial(n - 1 - k) / math.factorial(k)
    e = 1 - n + 2 * k
    if e >= 0:
        gamma = ConjRational(ONE_PLUS_S ** e * c)
    else:
        gamma = ConjRational(ConjPoly.const(c), ONE_PLUS_S ** (-e))
    sign = (-1.0) ** k
    if flip_sign:
        sign = -sign

    amat = antidiagonal_matrix(n)
    residual = 0.0
    ok = True
    for i in range(n):
        # row i of A has a single entry at column n-1-i
        rhs = rhs_base[n - 1 - i] * (sign * amat[i, n - 1 - i]) * gamma
        diff = lhs[i] - rhs
        scale = max(lhs[i].coeff_norm(), rhs.coeff_norm(), 1.0)
        res = diff.coeff_norm() / scale
        residual = max(residual, res)
        if not lhs[i].equals(rhs, COEFF_TOL * 10):
            ok = False
    return {"identity_name": f"antidiagonal_symmetry(n={n}, k={k})",
            "holds": ok, "residual": residual}


def veronese_component_formula(n, k):
    """Explicit closed-form components of raise^k(f) for the Veronese input.

    Returns a list of ConjRational (one per component r) or None entries where
    the formula produces a negative xi power with nonzero coefficient (it
    should not; such a case is a formula defect and is reported upstream).
    """
    s = ConjPoly({(1, 1): 1.0})
    out = []
    for r in range(n):
        # alpha accumulated as a polynomial in |xi|^2
        alpha = ConjPoly.zero()
        for el in range(k + 1):
            prod = 1.0
            for i in range(el + 1):
                prod *= (r + i - n)
            for j in range(el, k + 1):
                prod *= (r - k + j + 1)
            term = math.comb(k, el) * prod
            if term != 0:
                alpha = alpha + s ** el * term
        alpha = alpha * (1.0 / ((r + 1) * (r - n)))
        w = math.sqrt(math.comb(n - 1, r))
        # multiply by xi^(r-k): shift exponents, flag negatives
        shifted = {}
        bad = False
        for (i, j), v in alpha.coeffs.items():
            i2 = i + r - k
            if i2 < 0:
                bad = True
                break
            shifted[(i2, j)] = v * w
        if bad:
            out.append(None)
            continue
        out.append(ConjRational(ConjPoly(shifted), ONE_PLUS_S ** k))
    return out


def component_formula_report(n, members=None):
    """Compare the closed-form components against the recurrence for every
    (k, r); mismatches are recorded, never patched."""
    if members is None:
        members = tower(veronese(n))
    mismatches = []
    for k in range(n):
        closed = veronese_component_formula(n, k)
        for r in range(n):
            if closed[r] is None:
                mismatches.append({"n": n, "k": k, "r": r,
                                   "reason": "negative power in closed form"})
                continue
            if not members[k].vec[r].equals(closed[r], COEFF_TOL * 10):
                mismatches.append({"n": n, "k": k, "r": r,
                                   "reason": "coefficient mismatch"})
    return {"n": n, "checked": n * n, "mismatches": mismatches,
            "all_match": not mismatches}
