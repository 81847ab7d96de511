"""Complex polynomial and rational-function arithmetic.

Everything downstream (matrix symbols, curve traces, operator sections,
defining equations) is built on the types here:

* ``CPoly``    -- univariate polynomial, float64 or exact Gaussian-rational
                  coefficients, ascending degree order.
* ``CRatFun``  -- reduced quotient of two ``CPoly``.
* ``PolyMatrix`` -- small matrix with ``CPoly`` entries (determinants,
                  adjugates for symbolic matrix inversion).
* ``BivarPoly`` -- bivariate polynomial with real-type symmetry support.

plus the root finder (companion matrix + Newton polish), Sylvester
resultants in both backends, and tensor-grid bivariate interpolation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

import numpy as np

from .errors import (ConditioningError, DegenerateInput, DegreeBoundError,
                     LeadingDropWarning)
from .exact import GaussianRational, as_complex, is_exact

TRIM_REL = 1e-12


def _is_exact_seq(coeffs) -> bool:
    return len(coeffs) > 0 and all(is_exact(c) for c in coeffs)


class CPoly:
    """Univariate polynomial; coeffs[k] multiplies t**k.

    The backend is inferred from the coefficients: a tuple of
    ``GaussianRational`` is the exact backend, anything else is converted
    to complex float64. Mixed arithmetic degrades to float.
    """

    __slots__ = ("coeffs", "backend")

    def __init__(self, coeffs, trim: bool = True):
        coeffs = list(coeffs)
        if not coeffs:
            coeffs = [0.0]
        if _is_exact_seq(coeffs):
            backend = "exact"
        else:
            backend = "float"
            coeffs = [complex(as_complex(c)) for c in coeffs]
        if trim:
            coeffs = _trim(coeffs, backend)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "backend", backend)

    def __setattr__(self, *a):
        raise AttributeError("CPoly is immutable")

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zero(backend: str = "float") -> "CPoly":
        return CPoly([GaussianRational(0)] if backend == "exact" else [0.0])

    @staticmethod
    def one(backend: str = "float") -> "CPoly":
        return CPoly([GaussianRational(1)] if backend == "exact" else [1.0])

    @staticmethod
    def variable(backend: str = "float") -> "CPoly":
        if backend == "exact":
            return CPoly([GaussianRational(0), GaussianRational(1)])
        return CPoly([0.0, 1.0])

    @staticmethod
    def from_roots(roots, lead=1.0) -> "CPoly":
        p = CPoly([lead])
        for r in roots:
            p = p * CPoly([-r, 1.0])
        return p

    # -- basic structure ---------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.backend == "exact":
            return all(c.is_zero() for c in self.coeffs)
        return all(abs(c) <= tol for c in self.coeffs)

    def max_abs(self) -> float:
        if self.backend == "exact":
            return max(float(c.abs2()) for c in self.coeffs) ** 0.5
        return max(abs(c) for c in self.coeffs)

    def to_float(self) -> "CPoly":
        if self.backend == "float":
            return self
        return CPoly([complex(c) for c in self.coeffs])

    def float_coeffs(self) -> np.ndarray:
        return np.array([as_complex(c) for c in self.coeffs], dtype=complex)

    # -- arithmetic ----------------------------------------------------------
    def _coerce_pair(self, other):
        if not isinstance(other, CPoly):
            other = CPoly([other], trim=False)
        if self.backend == other.backend:
            return self, other
        return self.to_float(), other.to_float()

    def __add__(self, other):
        a, b = self._coerce_pair(other)
        n = max(len(a.coeffs), len(b.coeffs))
        zero = GaussianRational(0) if a.backend == "exact" else 0.0
        ca = list(a.coeffs) + [zero] * (n - len(a.coeffs))
        cb = list(b.coeffs) + [zero] * (n - len(b.coeffs))
        return CPoly([x + y for x, y in zip(ca, cb)])

    __radd__ = __add__

    def __neg__(self):
        return CPoly([-c for c in self.coeffs], trim=False)

    def __sub__(self, other):
        a, b = self._coerce_pair(other)
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._coerce_pair(other)
        return b + (-a)

    def __mul__(self, other):
        a, b = self._coerce_pair(other)
        if a.backend == "float":
            return CPoly(np.convolve(np.asarray(a.coeffs), np.asarray(b.coeffs)))
        out = [GaussianRational(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(b.coeffs):
                out[i + j] = out[i + j] + x * y
        return CPoly(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        a, b = self._coerce_pair(other)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if a.degree < b.degree:
            return CPoly.zero(a.backend), a
        rem = list(a.coeffs)
        db, lead = b.degree, b.coeffs[-1]
        zero = GaussianRational(0) if a.backend == "exact" else 0.0
        quot = [zero] * (a.degree - db + 1)
        for k in range(a.degree - db, -1, -1):
            q = rem[k + db] / lead
            quot[k] = q
            if (q.is_zero() if a.backend == "exact" else q == 0):
                continue
            for j in range(db + 1):
                rem[k + j] = rem[k + j] - q * b.coeffs[j]
        return CPoly(quot), CPoly(rem[:db] if db else [zero])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, k: int):
        out = CPoly.one(self.backend)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- analysis ------------------------------------------------------------
    def __call__(self, t):
        if self.backend == "exact" and is_exact(t):
            acc = GaussianRational(0)
            for c in reversed(self.coeffs):
                acc = acc * t + c
            return acc
        c = self.float_coeffs()
        t = np.asarray(t, dtype=complex)
        acc = np.zeros_like(t)
        for ck in c[::-1]:
            acc = acc * t + ck
        return acc if acc.shape else complex(acc)

    def derivative(self) -> "CPoly":
        if self.degree == 0:
            return CPoly.zero(self.backend)
        return CPoly([(k * c if self.backend == "float" else c * GaussianRational(k))
                      for k, c in enumerate(self.coeffs)][1:])

    def conj(self) -> "CPoly":
        """Coefficient-conjugated polynomial p^(t) with p^(conj t) = conj p(t)."""
        if self.backend == "exact":
            return CPoly([c.conjugate() for c in self.coeffs], trim=False)
        return CPoly([c.conjugate() for c in self.coeffs], trim=False)

    def reversed(self, n: int | None = None) -> "CPoly":
        """t^n * p(1/t); n defaults to the degree."""
        if n is None:
            n = self.degree
        if n < self.degree:
            raise ValueError("reversal order below degree")
        zero = GaussianRational(0) if self.backend == "exact" else 0.0
        pad = [zero] * (n - self.degree)
        return CPoly(pad + list(self.coeffs[::-1]))

    def monic(self) -> "CPoly":
        lead = self.coeffs[-1]
        if self.backend == "exact":
            if lead.is_zero():
                raise ZeroDivisionError("zero polynomial has no monic form")
        elif lead == 0:
            raise ZeroDivisionError("zero polynomial has no monic form")
        return CPoly([c / lead for c in self.coeffs], trim=False)

    def gcd(self, other: "CPoly") -> "CPoly":
        """Exact Euclidean gcd; float inputs use root matching (see CRatFun)."""
        a, b = self._coerce_pair(other)
        if a.backend == "float":
            return _float_gcd(a, b)
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def __eq__(self, other):
        if not isinstance(other, CPoly):
            return NotImplemented
        a, b = self._coerce_pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"CPoly({list(self.coeffs)!r})"


def _trim(coeffs, backend):
    if backend == "exact":
        n = len(coeffs)
        while n > 1 and coeffs[n - 1].is_zero():
            n -= 1
        return coeffs[:n]
    top = max(abs(c) for c in coeffs)
    tol = TRIM_REL * top
    n = len(coeffs)
    while n > 1 and abs(coeffs[n - 1]) <= tol:
        n -= 1
    return coeffs[:n]


def _float_gcd(a: CPoly, b: CPoly) -> CPoly:
    """Greatest common divisor by matching root clusters (float backend)."""
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.degree == 0 or b.degree == 0:
        return CPoly.one()
    ra = [r for r, m in poly_roots(a) for _ in range(m)]
    rb = [r for r, m in poly_roots(b) for _ in range(m)]
    common = []
    for r in ra:
        if not rb:
            break
        j = int(np.argmin([abs(r - s) for s in rb]))
        if abs(r - rb[j]) <= 1e-8 * (1.0 + abs(r)):
            common.append(0.5 * (r + rb[j]))
            rb.pop(j)
    return CPoly.from_roots(common)


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

def poly_roots(p: CPoly | Sequence, tol_root: float = 1e-9):
    """All roots with multiplicities, as [(root, multiplicity), ...].

    Companion-matrix eigenvalues with one Newton polish step; clusters of
    radius 1e-6*(1+|r|) are merged into multiple roots. Raises
    ``DegenerateInput`` for constant input. Each simple returned root r
    satisfies |p(r)| <= tol_root * max|coeff|.
    """
    if not isinstance(p, CPoly):
        p = CPoly(p)
    p = p.to_float()
    c = p.float_coeffs()
    if len(c) <= 1 or np.all(c == 0):
        raise DegenerateInput("root finding needs degree >= 1")
    n = len(c) - 1
    cm = c / c[-1]
    comp = np.zeros((n, n), dtype=complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -cm[:-1]
    roots = np.linalg.eigvals(comp)

    dp = p.derivative()
    polished = []
    for r in roots:
        pr = p(r)
        dpr = dp(r)
        if abs(dpr) > 1e-14 * (1.0 + abs(pr)):
            r2 = r - pr / dpr
            if abs(p(r2)) < abs(pr):
                r = r2
        polished.append(r)

    # cluster into multiplicities
    used = [False] * n
    clusters = []
    order = sorted(range(n), key=lambda i: (polished[i].real, polished[i].imag))
    for i in order:
        if used[i]:
            continue
        group = [polished[i]]
        used[i] = True
        for j in order:
            if used[j]:
                continue
            if abs(polished[j] - group[0]) <= 1e-6 * (1.0 + abs(group[0])):
                group.append(polished[j])
                used[j] = True
        clusters.append((complex(np.mean(group)), len(group)))

    # Roots of multiplicity mu split like eps^(1/mu) under coefficient
    # noise, possibly beyond the clustering radius. Candidates near a
    # higher-order zero (detected from scaled derivative values) are first
    # pulled toward it by polishing on a derivative, re-clustered, and the
    # merged cluster is finally polished on the (mult-1)-th derivative,
    # where the zero is simple.
    refined = []
    for r, mult in clusters:
        order = max(mult, _vanishing_order(p, r))
        if order > 1:
            dk = p
            for _ in range(order - 1):
                dk = dk.derivative()
            cand = newton_polish(dk, r, steps=6)
            if abs(cand - r) < 1e-4 * (1.0 + abs(r)):
                r = cand
        refined.append((r, mult))
    merged: list[list] = []
    for r, mult in refined:
        for c in merged:
            if abs(r - c[0]) <= 1e-6 * (1.0 + abs(r)):
                c[0] = (c[0] * c[1] + r * mult) / (c[1] + mult)
                c[1] += mult
                break
        else:
            merged.append([r, mult])
    for c in merged:
        if c[1] > 1:
            dk = p
            for _ in range(c[1] - 1):
                dk = dk.derivative()
            cand = newton_polish(dk, c[0], steps=6)
            if abs(cand - c[0]) < 1e-4 * (1.0 + abs(c[0])):
                c[0] = cand

    norm = p.max_abs()
    out = []
    for r, mult in sorted(merged, key=lambda rm: (rm[0].real, rm[0].imag)):
        if mult == 1 and abs(p(r)) > tol_root * norm:
            # one extra polish round for stragglers
            for _ in range(3):
                d = dp(r)
                if abs(d) == 0:
                    break
                r = r - p(r) / d
        out.append((complex(r), mult))
    return out


def newton_polish(p: CPoly, r: complex, steps: int = 3) -> complex:
    dp = p.derivative()
    for _ in range(steps):
        d = dp(r)
        if abs(d) == 0:
            break
        step = p(r) / d
        r = r - step
        if abs(step) < 1e-16 * (1.0 + abs(r)):
            break
    return complex(r)


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class CRatFun:
    """Quotient num/den stored in reduced form with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce: bool = True):
        if den is None:
            den = CPoly.one(num.backend if isinstance(num, CPoly) else "float")
        if not isinstance(num, CPoly):
            num = CPoly([num] if np.isscalar(num) else num)
        if not isinstance(den, CPoly):
            den = CPoly([den] if np.isscalar(den) else den)
        if den.is_zero():
            raise ZeroDivisionError("CRatFun with zero denominator")
        if num.backend != den.backend:
            num, den = num.to_float(), den.to_float()
        if reduce:
            num, den = _reduce(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("CRatFun is immutable")

    @property
    def backend(self):
        return self.num.backend

    @staticmethod
    def constant(c, backend="float") -> "CRatFun":
        if backend == "exact":
            return CRatFun(CPoly([GaussianRational.coerce(c)]))
        return CRatFun(CPoly([c]))

    @staticmethod
    def variable(backend="float") -> "CRatFun":
        return CRatFun(CPoly.variable(backend))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def to_float(self) -> "CRatFun":
        return CRatFun(self.num.to_float(), self.den.to_float(), reduce=False)

    # -- arithmetic --------------------------------------------------------
    def _pair(self, other):
        if not isinstance(other, CRatFun):
            if isinstance(other, CPoly):
                other = CRatFun(other)
            else:
                other = CRatFun.constant(other, self.backend if not isinstance(other, complex) else "float")
        return self, other

    def __add__(self, other):
        a, b = self._pair(other)
        return CRatFun(a.num * b.den + b.num * a.den, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return CRatFun(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        a, b = self._pair(other)
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._pair(other)
        return b + (-a)

    def __mul__(self, other):
        a, b = self._pair(other)
        return CRatFun(a.num * b.num, a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._pair(other)
        if b.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return CRatFun(a.num * b.den, a.den * b.num)

    def __rtruediv__(self, other):
        a, b = self._pair(other)
        return b / a

    # -- analysis ------------------------------------------------------------
    def __call__(self, t):
        return self.num(t) / self.den(t)

    def poles(self):
        """Denominator roots with multiplicities (reduced form)."""
        if self.den.degree == 0:
            return []
        return poly_roots(self.den)

    def residue(self, pole: complex) -> complex:
        """Residue at a simple pole of the reduced function."""
        dden = self.den.derivative()
        return complex(self.num(pole) / dden(pole))

    def conj(self) -> "CRatFun":
        return CRatFun(self.num.conj(), self.den.conj(), reduce=False)

    def reflect(self) -> "CRatFun":
        """conj(f(1/conj(t))) as a rational function of t.

        On |t|=1 this equals conj(f(t)); it is the scalar building block of
        the boundary adjoint of a matrix symbol.
        """
        n, d = self.num.conj(), self.den.conj()
        k = max(n.degree, d.degree)
        return CRatFun(n.reversed(k), d.reversed(k))

    def derivative(self) -> "CRatFun":
        return CRatFun(self.num.derivative() * self.den - self.num * self.den.derivative(),
                       self.den * self.den)

    def __eq__(self, other):
        if not isinstance(other, CRatFun):
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __repr__(self):
        return f"CRatFun({self.num!r}, {self.den!r})"


def _reduce(num: CPoly, den: CPoly):
    if num.backend == "exact":
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num // g, den // g
        lead = den.coeffs[-1]
        return CPoly([c / lead for c in num.coeffs], trim=False), \
            CPoly([c / lead for c in den.coeffs], trim=False)
    # float backend: deflate common factors at the denominator roots.
    # The numerator's vanishing order at each pole candidate is read off
    # its derivative values there (robust against the eps^(1/m) splitting
    # of multiple roots), then both sides are synthetically divided.
    if num.is_zero():
        return CPoly.zero(), CPoly.one()
    if den.degree > 0 and num.degree > 0:
        for rho, k in poly_roots(den):
            c = min(k, _vanishing_order(num, rho))
            for _ in range(c):
                num = _deflate(num, rho)
                den = _deflate(den, rho)
    lead = den.coeffs[-1]
    return CPoly([c / lead for c in num.coeffs], trim=False), \
        CPoly([c / lead for c in den.coeffs], trim=False)


def _vanishing_order(p: CPoly, rho: complex, rel: float = 1e-7) -> int:
    """Order of the zero of p at rho, decided from scaled derivative values.

    All derivatives up to the degree enter the normalization, so a zero of
    any multiplicity is recognized even though its clustered roots split
    like eps^(1/m).
    """
    vals = []
    fact = 1.0
    q = p
    for j in range(p.degree + 1):
        vals.append(abs(q(rho)) / fact)
        q = q.derivative()
        fact *= (j + 1)
    vmax = max(max(vals), p.max_abs() * 1e-30)
    order = 0
    for v in vals[:-1] if len(vals) > 1 else vals:
        if v > rel * vmax:
            break
        order += 1
    return order


def _deflate(p: CPoly, rho: complex) -> CPoly:
    """Synthetic division of p by (t - rho), dropping the tiny remainder."""
    c = list(p.float_coeffs())
    out = [0j] * (len(c) - 1)
    acc = c[-1]
    for i in range(len(c) - 2, -1, -1):
        out[i] = acc
        acc = c[i] + rho * acc
    return CPoly(out)


# ---------------------------------------------------------------------------
# Sylvester resultants
# ---------------------------------------------------------------------------

def sylvester_numeric(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Sylvester matrix of two numeric polynomials (ascending coeffs)."""
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    nf, ng = len(f) - 1, len(g) - 1
    if nf < 0 or ng < 0 or (nf == 0 and ng == 0):
        raise DegenerateInput("resultant needs two nonzero polynomials")
    S = np.zeros((nf + ng, nf + ng), dtype=complex)
    for i in range(ng):
        S[i, i:i + nf + 1] = f[::-1]
    for i in range(nf):
        S[ng + i, i:i + ng + 1] = g[::-1]
    return S


def resultant_numeric(f, g) -> complex:
    """det of the Sylvester matrix, LU with partial pivoting."""
    if isinstance(f, CPoly):
        f = f.float_coeffs()
    if isinstance(g, CPoly):
        g = g.float_coeffs()
    f = np.trim_zeros(np.asarray(f, complex), "b")
    g = np.trim_zeros(np.asarray(g, complex), "b")
    if len(f) == 0 or len(g) == 0:
        return 0.0 + 0.0j
    if len(f) == 1 and len(g) == 1:
        return 1.0 + 0.0j
    if len(f) == 1:
        return f[0] ** (len(g) - 1)
    if len(g) == 1:
        return g[0] ** (len(f) - 1)
    return complex(np.linalg.det(sylvester_numeric(f, g)))


def sylvester_det_fixed(f, g, exact: bool = False):
    """Sylvester determinant at declared degrees (no trimming).

    Treats f, g as polynomials of degree len-1 even when leading
    coefficients vanish; as a function of parameters entering the
    coefficients this IS a polynomial, which evaluation-interpolation
    requires. Trimming would silently switch to the resultant of lower
    degree and break the interpolation.
    """
    nf, ng = len(f) - 1, len(g) - 1
    if exact:
        zero = GaussianRational(0)
        S = [[zero] * (nf + ng) for _ in range(nf + ng)]
        for i in range(ng):
            for j, c in enumerate(list(f)[::-1]):
                S[i][i + j] = c
        for i in range(nf):
            for j, c in enumerate(list(g)[::-1]):
                S[ng + i][i + j] = c
        return det_bareiss_exact(S)
    f = np.asarray(f, complex)
    g = np.asarray(g, complex)
    S = np.zeros((nf + ng, nf + ng), dtype=complex)
    for i in range(ng):
        S[i, i:i + nf + 1] = f[::-1]
    for i in range(nf):
        S[ng + i, i:i + ng + 1] = g[::-1]
    return complex(np.linalg.det(S))


def det_bareiss_exact(M) -> GaussianRational:
    """Fraction-free Bareiss determinant over GaussianRational entries."""
    M = [list(row) for row in M]
    n = len(M)
    if n == 0:
        return GaussianRational(1)
    sign = 1
    denom = GaussianRational(1)
    for k in range(n - 1):
        if M[k][k].is_zero():
            piv = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if piv is None:
                return GaussianRational(0)
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / denom
            M[i][k] = GaussianRational(0)
        denom = M[k][k]
    d = M[n - 1][n - 1]
    return d if sign == 1 else -d


def resultant_exact(f: Sequence[GaussianRational], g: Sequence[GaussianRational]) -> GaussianRational:
    f = list(f)
    g = list(g)
    while len(f) > 1 and f[-1].is_zero():
        f.pop()
    while len(g) > 1 and g[-1].is_zero():
        g.pop()
    nf, ng = len(f) - 1, len(g) - 1
    if nf == 0 and ng == 0:
        return GaussianRational(1)
    if nf == 0:
        return f[0] ** ng
    if ng == 0:
        return g[0] ** nf
    zero = GaussianRational(0)
    S = [[zero] * (nf + ng) for _ in range(nf + ng)]
    for i in range(ng):
        for j, c in enumerate(f[::-1]):
            S[i][i + j] = c
    for i in range(nf):
        for j, c in enumerate(g[::-1]):
            S[ng + i][i + j] = c
    return det_bareiss_exact(S)


def lagrange_interpolate(nodes, values, backend="float") -> CPoly:
    """Interpolating polynomial through (nodes[i], values[i])."""
    if backend == "exact":
        acc = CPoly.zero("exact")
        one = GaussianRational(1)
        for i, xi in enumerate(nodes):
            li = CPoly([one])
            denom = GaussianRational(1)
            for j, xj in enumerate(nodes):
                if j == i:
                    continue
                li = li * CPoly([-xj, one])
                denom = denom * (xi - xj)
            acc = acc + li * CPoly([values[i] / denom])
        return acc
    nodes = np.asarray(nodes, complex)
    V = np.vander(nodes, len(nodes), increasing=True)
    coef = np.linalg.solve(V, np.asarray(values, complex))
    return CPoly(coef)


def resultant(f_coeffs: Sequence[CPoly], g_coeffs: Sequence[CPoly]) -> CPoly:
    """Resultant in t of f(t) = sum f_coeffs[j](s) t^j and g likewise.

    Returns a ``CPoly`` in the parameter s. Evaluation-interpolation:
    the Sylvester determinant is computed at enough parameter values
    (Bareiss over Gaussian rationals in the exact backend, LU in float)
    and interpolated back. A leading coefficient that vanishes
    identically in s is dropped with a ``LeadingDropWarning``.
    """
    f = [c if isinstance(c, CPoly) else CPoly([c]) for c in f_coeffs]
    g = [c if isinstance(c, CPoly) else CPoly([c]) for c in g_coeffs]
    exact = all(c.backend == "exact" for c in f + g)

    def strip(cs):
        dropped = False
        while len(cs) > 1 and cs[-1].is_zero():
            cs = cs[:-1]
            dropped = True
        return cs, dropped

    f, df = strip(f)
    g, dg = strip(g)
    if df or dg:
        warnings.warn("leading coefficient vanishes identically in the parameter",
                      LeadingDropWarning)
    if all(c.is_zero() for c in f) or all(c.is_zero() for c in g):
        raise DegenerateInput("resultant of the zero polynomial")

    deg_f, deg_g = len(f) - 1, len(g) - 1
    sf = max(c.degree for c in f)
    sg = max(c.degree for c in g)
    bound = deg_g * sf + deg_f * sg

    if exact:
        nodes = []
        k = 0
        while len(nodes) < bound + 1:
            nodes.append(GaussianRational(k))
            if k > 0 and len(nodes) < bound + 1:
                nodes.append(GaussianRational(-k))
            k += 1
        vals = []
        for s in nodes:
            fc = [c(s) for c in f]
            gc = [c(s) for c in g]
            vals.append(resultant_exact(fc, gc))
        return lagrange_interpolate(nodes, vals, backend="exact")

    nodes = 1.0 * np.exp(2j * np.pi * np.arange(bound + 1) / (bound + 1))
    vals = [resultant_numeric([c(s) for c in f], [c(s) for c in g]) for s in nodes]
    return lagrange_interpolate(nodes, vals, backend="float")


# ---------------------------------------------------------------------------
# polynomial matrices
# ---------------------------------------------------------------------------

class PolyMatrix:
    """Dense matrix of CPoly entries; just enough linear algebra for m <= 4."""

    def __init__(self, entries):
        self.entries = [list(row) for row in entries]
        self.shape = (len(self.entries), len(self.entries[0]))

    @staticmethod
    def identity(m: int, backend="float") -> "PolyMatrix":
        one, zero = CPoly.one(backend), CPoly.zero(backend)
        return PolyMatrix([[one if i == j else zero for j in range(m)] for i in range(m)])

    @staticmethod
    def from_constant(M, backend="float") -> "PolyMatrix":
        if backend == "exact":
            return PolyMatrix([[CPoly([GaussianRational.coerce(x)]) for x in row] for row in M])
        return PolyMatrix([[CPoly([complex(x)]) for x in row] for row in M])

    def __add__(self, other):
        return PolyMatrix([[a + b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return PolyMatrix([[a - b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.entries, other.entries)])

    def __matmul__(self, other):
        n, k = self.shape
        k2, m = other.shape
        assert k == k2
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = self.entries[i][0] * other.entries[0][j]
                for l in range(1, k):
                    acc = acc + self.entries[i][l] * other.entries[l][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def scale(self, p: CPoly) -> "PolyMatrix":
        return PolyMatrix([[p * e for e in row] for row in self.entries])

    def evaluate(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=complex)
        n, m = self.shape
        out = np.zeros(t.shape + (n, m), dtype=complex)
        for i in range(n):
            for j in range(m):
                out[..., i, j] = self.entries[i][j](t)
        return out

    def det(self) -> CPoly:
        n, m = self.shape
        assert n == m
        if n == 1:
            return self.entries[0][0]
        acc = None
        for j in range(n):
            minor = PolyMatrix([row[:j] + row[j + 1:] for row in self.entries[1:]])
            term = self.entries[0][j] * minor.det()
            if j % 2:
                term = -term
            acc = term if acc is None else acc + term
        return acc

    def adjugate(self) -> "PolyMatrix":
        n, m = self.shape
        assert n == m
        if n == 1:
            return PolyMatrix([[CPoly.one(self.entries[0][0].backend)]])
        cof = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                rows = [r for r in range(n) if r != i]
                cols = [c for c in range(n) if c != j]
                minor = PolyMatrix([[self.entries[r][c] for c in cols] for r in rows])
                d = minor.det()
                cof[j][i] = d if (i + j) % 2 == 0 else -d  # transposed in place
        return PolyMatrix(cof)


# ---------------------------------------------------------------------------
# bivariate polynomials
# ---------------------------------------------------------------------------

class BivarPoly:
    """Q(z,w) = sum a[j][k] z^j w^k (rows: z-degree, cols: w-degree)."""

    def __init__(self, coeffs, trim: bool = True):
        rows = [list(r) for r in coeffs]
        flat = [c for r in rows for c in r]
        if flat and all(is_exact(c) for c in flat):
            self.backend = "exact"
            self.coeffs = rows
        else:
            self.backend = "float"
            self.coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
        if trim:
            self._trim()

    def _trim(self):
        if self.backend == "exact":
            rows = self.coeffs
            while len(rows) > 1 and all(c.is_zero() for c in rows[-1]):
                rows.pop()
            while len(rows[0]) > 1 and all(r[-1].is_zero() for r in rows):
                for r in rows:
                    r.pop()
            self.coeffs = rows
        else:
            A = self.coeffs
            top = np.abs(A).max()
            tol = TRIM_REL * top if top > 0 else 0.0
            nz, nw = A.shape
            while nz > 1 and np.all(np.abs(A[nz - 1, :]) <= tol):
                nz -= 1
            while nw > 1 and np.all(np.abs(A[:nz, nw - 1]) <= tol):
                nw -= 1
            self.coeffs = A[:nz, :nw].copy()

    @property
    def deg_z(self) -> int:
        return (len(self.coeffs) if self.backend == "exact" else self.coeffs.shape[0]) - 1

    @property
    def deg_w(self) -> int:
        return (len(self.coeffs[0]) if self.backend == "exact" else self.coeffs.shape[1]) - 1

    @staticmethod
    def constant(c, backend="float") -> "BivarPoly":
        if backend == "exact":
            return BivarPoly([[GaussianRational.coerce(c)]])
        return BivarPoly([[complex(c)]])

    @staticmethod
    def var_z(backend="float") -> "BivarPoly":
        if backend == "exact":
            return BivarPoly([[GaussianRational(0)], [GaussianRational(1)]])
        return BivarPoly([[0.0], [1.0]])

    @staticmethod
    def var_w(backend="float") -> "BivarPoly":
        if backend == "exact":
            return BivarPoly([[GaussianRational(0), GaussianRational(1)]])
        return BivarPoly([[0.0, 1.0]])

    def to_float(self) -> "BivarPoly":
        if self.backend == "float":
            return self
        return BivarPoly([[complex(c) for c in row] for row in self.coeffs])

    def float_coeffs(self) -> np.ndarray:
        if self.backend == "float":
            return self.coeffs
        return np.array([[complex(c) for c in row] for row in self.coeffs])

    def _pair(self, other):
        if not isinstance(other, BivarPoly):
            other = BivarPoly.constant(other, self.backend if not isinstance(other, complex) else "float")
        if self.backend == other.backend:
            return self, other
        return self.to_float(), other.to_float()

    def __add__(self, other):
        a, b = self._pair(other)
        if a.backend == "float":
            nz = max(a.coeffs.shape[0], b.coeffs.shape[0])
            nw = max(a.coeffs.shape[1], b.coeffs.shape[1])
            A = np.zeros((nz, nw), complex)
            A[:a.coeffs.shape[0], :a.coeffs.shape[1]] += a.coeffs
            A[:b.coeffs.shape[0], :b.coeffs.shape[1]] += b.coeffs
            return BivarPoly(A)
        nz = max(len(a.coeffs), len(b.coeffs))
        nw = max(len(a.coeffs[0]), len(b.coeffs[0]))
        zero = GaussianRational(0)
        A = [[zero] * nw for _ in range(nz)]
        for rows in (a.coeffs, b.coeffs):
            for j, row in enumerate(rows):
                for k, c in enumerate(row):
                    A[j][k] = A[j][k] + c
        return BivarPoly(A)

    __radd__ = __add__

    def __neg__(self):
        if self.backend == "float":
            return BivarPoly(-self.coeffs, trim=False)
        return BivarPoly([[-c for c in row] for row in self.coeffs], trim=False)

    def __sub__(self, other):
        a, b = self._pair(other)
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._pair(other)
        return b + (-a)

    def __mul__(self, other):
        a, b = self._pair(other)
        if a.backend == "float":
            from scipy.signal import convolve2d
            return BivarPoly(convolve2d(a.coeffs, b.coeffs))
        nz = len(a.coeffs) + len(b.coeffs) - 1
        nw = len(a.coeffs[0]) + len(b.coeffs[0]) - 1
        zero = GaussianRational(0)
        A = [[zero] * nw for _ in range(nz)]
        for j1, r1 in enumerate(a.coeffs):
            for k1, c1 in enumerate(r1):
                if c1.is_zero():
                    continue
                for j2, r2 in enumerate(b.coeffs):
                    for k2, c2 in enumerate(r2):
                        A[j1 + j2][k1 + k2] = A[j1 + j2][k1 + k2] + c1 * c2
        return BivarPoly(A)

    __rmul__ = __mul__

    def __call__(self, z, w):
        if self.backend == "exact" and is_exact(z) and is_exact(w):
            acc = GaussianRational(0)
            for row in reversed(self.coeffs):
                racc = GaussianRational(0)
                for c in reversed(row):
                    racc = racc * w + c
                acc = acc * z + racc
            return acc
        A = self.float_coeffs()
        z = np.asarray(z, complex)
        w = np.asarray(w, complex)
        acc = np.zeros(np.broadcast(z, w).shape, complex)
        for row in A[::-1]:
            racc = np.zeros_like(acc)
            for c in row[::-1]:
                racc = racc * w + c
            acc = acc * z + racc
        return acc if acc.shape else complex(acc)

    # -- real-type structure -------------------------------------------------
    def involution_conjugate(self) -> "BivarPoly":
        """Q^dagger(z,w) = sum conj(a_jk) z^k w^j."""
        if self.backend == "exact":
            n = max(len(self.coeffs), len(self.coeffs[0]))
            zero = GaussianRational(0)
            A = [[zero] * n for _ in range(n)]
            for j, row in enumerate(self.coeffs):
                for k, c in enumerate(row):
                    A[k][j] = c.conjugate()
            return BivarPoly(A)
        n = max(self.coeffs.shape)
        A = np.zeros((n, n), complex)
        A[:self.coeffs.shape[0], :self.coeffs.shape[1]] = self.coeffs
        return BivarPoly(A.T.conj())

    def real_type_defect(self) -> float:
        """max |a_jk - conj(a_kj)|; zero iff the polynomial is of real type."""
        d = self - self.involution_conjugate()
        if d.backend == "exact":
            return 0.0 if all(c.is_zero() for row in d.coeffs for c in row) else 1.0
        return float(np.abs(d.coeffs).max())

    def is_real_type(self, tol: float = 0.0) -> bool:
        return self.real_type_defect() <= tol

    def symmetrize(self):
        """Scale by a constant to enforce a_kj = conj(a_jk); return (poly, defect).

        The zero set is unchanged. Works whenever Q^dagger = mu*Q for a
        unimodular constant mu, which holds for defining polynomials of
        real-type curves.
        """
        if self.backend == "exact":
            # exact path: find mu from the largest entry; only mu in {1,-1,i,-i}
            # keeps the result Gaussian-rational.
            flat = [(j, k) for j, row in enumerate(self.coeffs) for k, c in enumerate(row)
                    if not c.is_zero()]
            qd = self.involution_conjugate()
            j, k = flat[0]
            mu = qd.coeffs[j][k] / self.coeffs[j][k]
            for cand in (GaussianRational(1), GaussianRational(-1),
                         GaussianRational(0, 1), GaussianRational(0, -1)):
                if cand * cand == mu:
                    out = BivarPoly([[c / cand for c in row] for row in self.coeffs])
                    return out, out.real_type_defect()
            return self.to_float().symmetrize()
        A = self.coeffs
        j, k = np.unravel_index(np.argmax(np.abs(A)), A.shape)
        scale = 1.0 / abs(A[j, k])
        qd = self.involution_conjugate()
        n = max(A.shape)
        Ap = np.zeros((n, n), complex)
        Ap[:A.shape[0], :A.shape[1]] = A
        mu = qd.coeffs[j, k] / A[j, k]
        c = np.exp(0.5j * np.angle(mu))
        out = BivarPoly(Ap * (scale / c))
        return out, out.real_type_defect()

    def __repr__(self):
        return f"BivarPoly(deg_z={self.deg_z}, deg_w={self.deg_w}, backend={self.backend})"


@dataclass
class BivarFitResult:
    poly: BivarPoly
    node_residual: float
    validation_residual: float


def bivar_fit(evaluator: Callable, deg_z: int, deg_w: int, *,
              backend: str = "float", radius: float = 1.0,
              cond_threshold: float = 1e12) -> BivarFitResult:
    """Recover a bivariate polynomial from point evaluations.

    Tensor interpolation on (deg_z+1) x (deg_w+1) nodes; float backend uses
    scaled roots of unity (the Vandermonde is then a unitary DFT matrix up
    to scaling), the exact backend small Gaussian integers with exact
    solves. The residual on a disjoint validation grid is reported so
    callers can detect degree-bound violations.
    """
    if backend == "exact":
        def int_nodes(n):
            out = []
            k = 0
            while len(out) < n:
                out.append(GaussianRational(k))
                if k > 0 and len(out) < n:
                    out.append(GaussianRational(-k))
                k += 1
            return out

        zn = int_nodes(deg_z + 1)
        wn = int_nodes(deg_w + 1)
        vals = [[evaluator(zi, wi) for wi in wn] for zi in zn]
        # interpolate rows in w, then columns in z
        row_polys = [lagrange_interpolate(wn, row, backend="exact") for row in vals]
        zero = GaussianRational(0)
        A = [[zero] * (deg_w + 1) for _ in range(deg_z + 1)]
        for k in range(deg_w + 1):
            col = [rp.coeffs[k] if k < len(rp.coeffs) else zero for rp in row_polys]
            cz = lagrange_interpolate(zn, col, backend="exact")
            for j, c in enumerate(cz.coeffs):
                A[j][k] = c
        poly = BivarPoly(A)
        return BivarFitResult(poly, 0.0, 0.0)

    zn = radius * np.exp(2j * np.pi * np.arange(deg_z + 1) / (deg_z + 1))
    wn = radius * np.exp(2j * np.pi * np.arange(deg_w + 1) / (deg_w + 1))
    W = np.array([[complex(evaluator(zi, wi)) for wi in wn] for zi in zn])
    Vz = np.vander(zn, deg_z + 1, increasing=True)
    Vw = np.vander(wn, deg_w + 1, increasing=True)
    condz = np.linalg.cond(Vz)
    condw = np.linalg.cond(Vw)
    if max(condz, condw) > cond_threshold:
        raise ConditioningError(
            f"interpolation condition {max(condz, condw):.2e} above threshold; "
            "consider the exact backend")
    A = np.linalg.solve(Vz, W)
    A = np.linalg.solve(Vw, A.T).T
    poly = BivarPoly(A)
    scale = max(np.abs(W).max(), 1e-300)
    node_res = float(np.abs(poly(zn[:, None], wn[None, :]) - W).max() / scale)

    zv = radius * np.exp(1j * (2 * np.pi * np.arange(deg_z + 1) + np.pi) / (deg_z + 1))
    wv = radius * np.exp(1j * (2 * np.pi * np.arange(deg_w + 1) + np.pi) / (deg_w + 1))
    Wv = np.array([[complex(evaluator(zi, wi)) for wi in wv] for zi in zv])
    val_res = float(np.abs(poly(zv[:, None], wv[None, :]) - Wv).max()
                    / max(np.abs(Wv).max(), scale, 1e-300))
    return BivarFitResult(poly, node_res, val_res)


def binom(n: int, k: int) -> int:
    return comb(n, k)
