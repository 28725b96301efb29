"""Exact arithmetic for polynomials and rational functions in the conjugate
pair (xi, xibar).

Everything downstream (tower vectors, projectors, metrics) is carried by
these two classes.  Coefficients are double-precision complex; identity
testing is tolerance-based (cross-multiplied coefficient comparison plus
confirmation at random sample points).

Monomial order is graded lexicographic with xi before xibar; canonical
rational form has a denominator with leading coefficient exactly 1, all
scaling absorbed into the numerator.
"""

from __future__ import annotations

import heapq

import numpy as np

from .errors import PoleAtPoint

COEFF_TOL = 1e-12
POLE_TOL = 1e-12
N_EQUALITY_SAMPLES = 20

# Fixed sample points for rational-identity confirmation (away from the
# unit circle and the origin to avoid accidental degeneracies).
_rng = np.random.default_rng(20100615)
SAMPLE_POINTS = (_rng.standard_normal(N_EQUALITY_SAMPLES)
                 + 1j * _rng.standard_normal(N_EQUALITY_SAMPLES)) * 0.8 + 0.1


def _grlex_key(key):
    i, j = key
    return (i + j, i)


class ConjPoly:
    """Sparse polynomial in (xi, xibar): dict (deg_xi, deg_xibar) -> complex."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            self.coeffs = {}
        else:
            self.coeffs = {k: complex(v) for k, v in coeffs.items() if v != 0}

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c, i, j=0):
        return cls({(i, j): c})

    @classmethod
    def xi(cls):
        return cls({(1, 0): 1.0})

    @classmethod
    def xibar(cls):
        return cls({(0, 1): 1.0})

    @classmethod
    def one_plus_s(cls):
        """1 + xi*xibar, i.e. 1 + |xi|^2."""
        return cls({(0, 0): 1.0, (1, 1): 1.0})

    @classmethod
    def from_holo_coeffs(cls, coeffs):
        """Holomorphic polynomial sum_k coeffs[k] * xi^k."""
        return cls({(k, 0): c for k, c in enumerate(coeffs)})

    # -- ring arithmetic ----------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ConjPoly):
            other = ConjPoly.const(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            w = out.get(k, 0.0) + v
            if w == 0:
                out.pop(k, None)
            else:
                out[k] = w
        p = ConjPoly.__new__(ConjPoly)
        p.coeffs = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = ConjPoly.__new__(ConjPoly)
        p.coeffs = {k: -v for k, v in self.coeffs.items()}
        return p

    def __sub__(self, other):
        if not isinstance(other, ConjPoly):
            other = ConjPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ConjPoly):
            c = complex(other)
            p = ConjPoly.__new__(ConjPoly)
            p.coeffs = {} if c == 0 else {k: v * c for k, v in self.coeffs.items()}
            return p
        out = {}
        for (a1, b1), v1 in self.coeffs.items():
            for (a2, b2), v2 in other.coeffs.items():
                k = (a1 + a2, b1 + b2)
                w = out.get(k, 0.0) + v1 * v2
                if w == 0:
                    out.pop(k, None)
                else:
                    out[k] = w
        p = ConjPoly.__new__(ConjPoly)
        p.coeffs = out
        return p

    __rmul__ = __mul__

    def __pow__(self, n):
        if not (isinstance(n, int) and n >= 0):
            raise ValueError("only nonnegative integer powers")
        result = ConjPoly.const(1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- calculus and conjugation ---------------------------------------

    def d(self):
        """Wirtinger derivative in xi (xibar held constant)."""
        return ConjPoly({(i - 1, j): i * v
                         for (i, j), v in self.coeffs.items() if i > 0})

    def dbar(self):
        """Wirtinger derivative in xibar (xi held constant)."""
        return ConjPoly({(i, j - 1): j * v
                         for (i, j), v in self.coeffs.items() if j > 0})

    def conj(self):
        """Swap xi <-> xibar and conjugate coefficients."""
        return ConjPoly({(j, i): v.conjugate()
                         for (i, j), v in self.coeffs.items()})

    # -- evaluation -----------------------------------------------------

    def eval(self, z):
        z = complex(z)
        zb = z.conjugate()
        return sum(v * z ** i * zb ** j for (i, j), v in self.coeffs.items())

    def eval_many(self, zs):
        """Vectorized evaluation on an ndarray of complex points."""
        zs = np.asarray(zs, dtype=complex)
        out = np.zeros(zs.shape, dtype=complex)
        zb = np.conj(zs)
        for (i, j), v in self.coeffs.items():
            out += v * zs ** i * zb ** j
        return out

    def eval_abs(self, z):
        """sum |c| |z|^(i+j): local magnitude scale of the evaluation."""
        a = abs(complex(z))
        return sum(abs(v) * a ** (i + j) for (i, j), v in self.coeffs.items())

    def eval_abs_many(self, zs):
        a = np.abs(np.asarray(zs, dtype=complex))
        out = np.zeros(a.shape)
        for (i, j), v in self.coeffs.items():
            out += abs(v) * a ** (i + j)
        return out

    # -- structure queries ------------------------------------------------

    def is_zero(self, tol=0.0, scale=1.0):
        if not self.coeffs:
            return True
        return self.max_abs() <= tol * scale

    def max_abs(self):
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def degrees(self):
        """(max deg in xi, max deg in xibar); (-1, -1) for the zero poly."""
        if not self.coeffs:
            return (-1, -1)
        return (max(i for i, _ in self.coeffs), max(j for _, j in self.coeffs))

    def leading_key(self):
        return max(self.coeffs, key=_grlex_key)

    def chop(self, tol=COEFF_TOL):
        """Drop coefficients tiny relative to the largest one."""
        m = self.max_abs()
        if m == 0.0:
            return self
        return ConjPoly({k: v for k, v in self.coeffs.items()
                         if abs(v) > tol * m})

    def equals(self, other, tol=COEFF_TOL):
        diff = self - other
        scale = max(self.max_abs(), other.max_abs(), 1.0)
        return diff.is_zero(tol, scale)

    def __repr__(self):
        if not self.coeffs:
            return "ConjPoly(0)"
        terms = []
        for k in sorted(self.coeffs, key=_grlex_key):
            i, j = k
            terms.append(f"({self.coeffs[k]:.6g})*xi^{i}*xb^{j}")
        return "ConjPoly(" + " + ".join(terms) + ")"


ONE = ConjPoly.const(1.0)
ONE_PLUS_S = ConjPoly.one_plus_s()


# unit-circle points t with xi = t, xibar = -1/t, where 1 + xi*xibar = 0;
# a polynomial divisible by (1 + xi*xibar) vanishes there identically.
# The generic pairs (z, w) calibrate the typical magnitude of p off the
# zero set so the test is relative to the polynomial, not its coefficients.
_PAIR_POINTS = np.exp(1j * (0.7 + 1.9 * np.arange(8)))
_GENERIC_Z = np.exp(1j * (0.4 + 2.3 * np.arange(8)))
_GENERIC_W = np.exp(1j * (1.1 + 3.1 * np.arange(8)))


def _pair_eval(p, zs, ws):
    vals = np.zeros(len(zs), dtype=complex)
    for (i, j), c in p.coeffs.items():
        vals += c * zs ** i * ws ** j
    return vals


def _divisible_by_one_plus_s(p, tol=COEFF_TOL):
    """Divisibility by (1 + xi*xibar) decided by evaluation on its zero set
    (xi and xibar treated as independent variables).  Evaluation does not
    accumulate error the way coefficient peeling does, so the decision stays
    sharp even after long chains of arithmetic.
    """
    if not p.coeffs:
        return True
    on_zero = np.max(np.abs(_pair_eval(p, _PAIR_POINTS, -1.0 / _PAIR_POINTS)))
    generic = np.max(np.abs(_pair_eval(p, _GENERIC_Z, _GENERIC_W)))
    if generic == 0.0:
        return True
    return bool(on_zero <= 1e2 * tol * generic)


def _div_one_plus_s(p, tol=COEFF_TOL, abs_tol=None):
    """Quotient p / (1 + xi*xibar), or None if not divisible.

    Divisibility is certified first by evaluation on the divisor's zero set;
    the quotient is then produced by peeling terms lowest-grlex-first (each
    peel writes one step up the (i+1, j+1) diagonal, so a single ascending
    sweep suffices).  The certified-noise remainder outside the quotient
    degree box is dropped.

    abs_tol pins the coefficient noise floor in absolute terms: repeated
    peeling shrinks the coefficients but not the rounding error inherited
    from the original operands.
    """
    if not p.coeffs:
        return p
    if not _divisible_by_one_plus_s(p, tol):
        return None
    di, dj = p.degrees()
    scale = p.max_abs()
    if abs_tol is None:
        abs_tol = tol * scale
    rem = dict(p.coeffs)
    quot = {}
    heap = [(_grlex_key(k), k) for k in rem]
    heapq.heapify(heap)
    queued = set(rem)
    while heap:
        _, k = heapq.heappop(heap)
        c = rem.pop(k, 0.0)
        if abs(c) <= abs_tol:
            continue
        i, j = k
        if i >= di or j >= dj:
            return None
        quot[k] = c
        up = (i + 1, j + 1)
        rem[up] = rem.get(up, 0.0) - c
        if up not in queued:
            queued.add(up)
            heapq.heappush(heap, (_grlex_key(up), up))
    return ConjPoly(quot)


def _strip_common_monomial(num, den):
    keys = list(num.coeffs) + list(den.coeffs)
    if not keys:
        return num, den
    mi = min(i for i, _ in keys)
    mj = min(j for _, j in keys)
    if mi == 0 and mj == 0:
        return num, den
    shift = lambda p: ConjPoly({(i - mi, j - mj): v for (i, j), v in p.coeffs.items()})
    return shift(num), shift(den)


def cancel(num, den, tol=COEFF_TOL):
    """Cheap cancellation: common monomial factors and (1+|xi|^2) powers,
    then denominator made monic under the graded-lex order."""
    num = num.chop(tol)
    den = den.chop(tol)
    if not den.coeffs:
        raise ZeroDivisionError("zero denominator")
    if not num.coeffs:
        return ConjPoly.zero(), ONE
    num, den = _strip_common_monomial(num, den)
    num_floor = tol * num.max_abs()
    den_floor = tol * den.max_abs()
    while len(den.coeffs) > 1:
        d2 = _div_one_plus_s(den, tol, abs_tol=den_floor)
        if d2 is None:
            break
        n2 = _div_one_plus_s(num, tol, abs_tol=num_floor)
        if n2 is None:
            break
        num, den = n2, d2
    lead = den.coeffs[den.leading_key()]
    if lead != 1.0:
        inv = 1.0 / lead
        num = num * inv
        den = den * inv
        # pin the leading coefficient exactly
        den.coeffs[den.leading_key()] = 1.0
    return num, den


class ConjRational:
    """Quotient of two ConjPoly, kept in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, ConjPoly):
            num = ConjPoly.const(num)
        if den is None:
            den = ONE
        elif not isinstance(den, ConjPoly):
            den = ConjPoly.const(den)
        self.num, self.den = cancel(num, den)

    @classmethod
    def _raw(cls, num, den):
        r = cls.__new__(cls)
        r.num, r.den = num, den
        return r

    @classmethod
    def from_poly(cls, p):
        return cls._raw(p.chop(), ONE)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ConjRational):
            other = ConjRational(other)
        if self.den.coeffs == other.den.coeffs:
            return ConjRational(self.num + other.num, self.den)
        return ConjRational(self.num * other.den + other.num * self.den,
                            self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ConjRational._raw(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, ConjRational):
            other = ConjRational(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ConjRational):
            if isinstance(other, ConjPoly):
                other = ConjRational.from_poly(other)
            else:
                c = complex(other)
                return ConjRational._raw(self.num * c, self.den)
        return ConjRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ConjRational):
            other = ConjRational(other)
        return ConjRational(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return ConjRational(other) / self

    # -- calculus and conjugation ----------------------------------------

    def d(self):
        return ConjRational(self.num.d() * self.den - self.num * self.den.d(),
                            self.den * self.den)

    def dbar(self):
        return ConjRational(self.num.dbar() * self.den - self.num * self.den.dbar(),
                            self.den * self.den)

    def conj(self):
        return ConjRational(self.num.conj(), self.den.conj())

    # -- evaluation -------------------------------------------------------

    def eval(self, z, pole_tol=POLE_TOL):
        dv = self.den.eval(z)
        if abs(dv) < pole_tol * max(1e-300, self.den.eval_abs(z)):
            raise PoleAtPoint(f"denominator vanishes at {z}")
        return self.num.eval(z) / dv

    def eval_many(self, zs, pole_tol=POLE_TOL):
        dv = self.den.eval_many(zs)
        if np.any(np.abs(dv) < pole_tol *
                  np.maximum(1e-300, self.den.eval_abs_many(zs))):
            raise PoleAtPoint("denominator vanishes on the sample set")
        return self.num.eval_many(zs) / dv

    # -- structure -------------------------------------------------------

    def is_zero(self, tol=COEFF_TOL):
        return self.num.is_zero(tol, max(1.0, self.den.max_abs()))

    def is_constant(self, tol=COEFF_TOL):
        diff = self.num - self.den * self.constant_part()
        return diff.is_zero(tol, max(self.num.max_abs(), 1.0))

    def constant_part(self):
        """Value at a fixed generic sample point (exact for constants)."""
        for z in SAMPLE_POINTS:
            try:
                return self.eval(z)
            except PoleAtPoint:
                continue
        return 0.0 + 0.0j

    def coeff_norm(self):
        """Magnitude measure used for residual scalarization."""
        return self.num.max_abs() / max(1.0, self.den.max_abs())

    def equals(self, other, tol=COEFF_TOL):
        """Identity test: cross-multiplied coefficient comparison plus
        confirmation at fixed random sample points; both must pass."""
        if not isinstance(other, ConjRational):
            other = ConjRational(other)
        cross = self.num * other.den - other.num * self.den
        scale = max(self.num.max_abs() * other.den.max_abs(),
                    other.num.max_abs() * self.den.max_abs(), 1.0)
        if not cross.is_zero(tol, scale):
            return False
        try:
            a = self.eval_many(SAMPLE_POINTS)
            b = other.eval_many(SAMPLE_POINTS)
        except PoleAtPoint:
            return True  # coefficient test already passed
        ref = np.maximum(np.abs(a) + np.abs(b), 1.0)
        return bool(np.all(np.abs(a - b) <= 1e4 * tol * ref))

    def __repr__(self):
        return f"ConjRational({self.num!r} / {self.den!r})"


R_ZERO = ConjRational(0.0)
R_ONE = ConjRational(1.0)


# ---------------------------------------------------------------------------
# Vectors and matrices of rationals.  Thin wrappers over nested lists; shapes
# are small (N <= 8) so entrywise arithmetic is fine.
# ---------------------------------------------------------------------------

def _as_rational(x):
    if isinstance(x, ConjRational):
        return x
    if isinstance(x, ConjPoly):
        return ConjRational.from_poly(x)
    return ConjRational(x)


class RationalVector:
    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = [_as_rational(e) for e in entries]

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def d(self):
        return RationalVector([e.d() for e in self.entries])

    def dbar(self):
        return RationalVector([e.dbar() for e in self.entries])

    def conj(self):
        return RationalVector([e.conj() for e in self.entries])

    def scale(self, c):
        return RationalVector([e * c for e in self.entries])

    def __add__(self, other):
        return RationalVector([a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return RationalVector([a - b for a, b in zip(self.entries, other.entries)])

    def inner(self, other):
        """Hermitian inner product self^dagger . other."""
        acc = R_ZERO
        for a, b in zip(self.entries, other.entries):
            acc = acc + a.conj() * b
        return acc

    def norm_sq(self):
        return self.inner(self)

    def is_zero(self, tol=COEFF_TOL):
        return all(e.is_zero(tol) for e in self.entries)

    def eval(self, z):
        return np.array([e.eval(z) for e in self.entries], dtype=complex)

    def outer(self, other):
        """self (x) other^dagger as a RationalMatrix."""
        oc = [e.conj() for e in other.entries]
        return RationalMatrix([[a * b for b in oc] for a in self.entries])

    def coeff_norm(self):
        return max(e.coeff_norm() for e in self.entries)


class RationalMatrix:
    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [[_as_rational(e) for e in row] for row in rows]

    @classmethod
    def zeros(cls, n, m=None):
        m = n if m is None else m
        return cls([[R_ZERO] * m for _ in range(n)])

    @classmethod
    def identity(cls, n):
        return cls([[R_ONE if i == j else R_ZERO for j in range(n)]
                    for i in range(n)])

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other):
        return RationalMatrix([[a + b for a, b in zip(r1, r2)]
                               for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return RationalMatrix([[a - b for a, b in zip(r1, r2)]
                               for r1, r2 in zip(self.rows, other.rows)])

    def scale(self, c):
        return RationalMatrix([[e * c for e in row] for row in self.rows])

    def __matmul__(self, other):
        n, k = self.shape
        k2, m = other.shape
        assert k == k2
        cols = list(zip(*other.rows))
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = R_ZERO
                for a, b in zip(self.rows[i], cols[j]):
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return RationalMatrix(out)

    def dagger(self):
        n, m = self.shape
        return RationalMatrix([[self.rows[i][j].conj() for i in range(n)]
                               for j in range(m)])

    def d(self):
        return RationalMatrix([[e.d() for e in row] for row in self.rows])

    def dbar(self):
        return RationalMatrix([[e.dbar() for e in row] for row in self.rows])

    def trace(self):
        acc = R_ZERO
        for i in range(len(self.rows)):
            acc = acc + self.rows[i][i]
        return acc

    def commutator(self, other):
        return (self @ other) - (other @ self)

    def eval(self, z):
        return np.array([[e.eval(z) for e in row] for row in self.rows],
                        dtype=complex)

    def eval_many(self, zs):
        zs = np.asarray(zs, dtype=complex)
        n, m = self.shape
        out = np.empty(zs.shape + (n, m), dtype=complex)
        for i in range(n):
            for j in range(m):
                out[..., i, j] = self.rows[i][j].eval_many(zs)
        return out

    def coeff_norm(self):
        return max(e.coeff_norm() for row in self.rows for e in row)

    def is_zero(self, tol=COEFF_TOL):
        return all(e.is_zero(tol) for row in self.rows for e in row)

    def is_hermitian(self, tol=COEFF_TOL):
        n, m = self.shape
        if n != m:
            return False
        return all(self.rows[i][j].equals(self.rows[j][i].conj(), tol)
                   for i in range(n) for j in range(i, n))

    def equals(self, other, tol=COEFF_TOL):
        return all(a.equals(b, tol)
                   for r1, r2 in zip(self.rows, other.rows)
                   for a, b in zip(r1, r2))

    def max_residual(self, scale=1.0):
        """Max over entries of the coefficient norm, relative to scale."""
        return self.coeff_norm() / max(scale, 1e-300)

    def numden(self):
        """(numerator ConjPoly matrix, shared denominator) or None.

        Succeeds when all entry denominators coincide or are powers of
        (1 + |xi|^2); the shared denominator is then snapped exact, which
        lets callers run long computations in pure polynomial arithmetic
        and cancel once at the end instead of compounding rounding at
        every intermediate reduction.
        """
        n, m = self.shape
        dens = [self.rows[i][j].den for i in range(n) for j in range(m)]
        first = dens[0].coeffs
        if all(d.coeffs == first for d in dens[1:]):
            return [[e.num for e in row] for row in self.rows], dens[0]
        powers = [one_plus_s_power(d) for d in dens]
        if any(p is None for p in powers):
            return None
        top = max(powers)
        nums = []
        it = iter(powers)
        for row in self.rows:
            nums.append([e.num * ONE_PLUS_S ** (top - next(it)) for e in row])
        return nums, ONE_PLUS_S ** top


def one_plus_s_power(p, tol=1e-9):
    """m if p equals (1 + xi*xibar)^m within relative tol, else None."""
    if not p.coeffs:
        return None
    di, dj = p.degrees()
    if di != dj:
        return None
    target = (ONE_PLUS_S ** di).coeffs
    scale = p.max_abs()
    for k in set(p.coeffs) | set(target):
        if abs(p.coeffs.get(k, 0.0) - target.get(k, 0.0)) > tol * scale:
            return None
    return di
