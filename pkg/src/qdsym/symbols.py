"""Rational matrix symbols on the unit circle.

Blaschke-Potapov products, compositions F(t) = psi(t, B(t)), membership
classification for the class of non-degenerate analytic rational normal
symbols, and matrix Fourier coefficients (residue expansion cross-checked
against the FFT).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Callable, Optional

import numpy as np

from .errors import (BoundaryPole, IllPosedComposition, InvalidFactor,
                     QdsymError)
from .polys import CPoly, CRatFun, PolyMatrix, poly_roots

UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class BlaschkeFactorSpec:
    """One elementary factor b(t) P + (I - P), b(t) = xi (t-a)/(1 - conj(a) t)."""

    a: complex
    xi: complex
    P: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "xi", complex(self.xi))
        object.__setattr__(self, "P", np.asarray(self.P, dtype=complex))

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.P).real))

    def validate(self):
        if abs(self.a) >= 1:
            raise InvalidFactor(f"zero location |a|={abs(self.a)} not in the open disc")
        if abs(abs(self.xi) - 1) > UNITARITY_TOL:
            raise InvalidFactor("xi is not unimodular")
        P = self.P
        if P.shape[0] != P.shape[1]:
            raise InvalidFactor("P must be square")
        if np.linalg.norm(P - P.conj().T) > UNITARITY_TOL * (1 + np.linalg.norm(P)):
            raise InvalidFactor("P is not Hermitian")
        if np.linalg.norm(P @ P - P) > UNITARITY_TOL * (1 + np.linalg.norm(P)):
            raise InvalidFactor("P is not idempotent")


class BlaschkePotapov:
    """v * prod_n (b_n(t) P_n + (I - P_n)): rational inner matrix function."""

    def __init__(self, v: np.ndarray, factors: list[BlaschkeFactorSpec]):
        self.v = np.asarray(v, dtype=complex)
        self.factors = list(factors)
        self.m = self.v.shape[0]

    @property
    def degree(self) -> int:
        """Zero count of det B in the disc (with multiplicity)."""
        return sum(f.rank for f in self.factors)

    def det_zeros(self) -> list[complex]:
        out = []
        for f in self.factors:
            out.extend([f.a] * f.rank)
        return out

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=complex)
        eye = np.eye(self.m, dtype=complex)
        out = np.broadcast_to(self.v, t.shape + (self.m, self.m)).copy()
        for f in self.factors:
            b = f.xi * (t - f.a) / (1 - np.conj(f.a) * t)
            fac = b[..., None, None] * f.P + (eye - f.P)
            out = out @ fac
        return out

    def partial_product(self, n: int) -> Callable:
        """Evaluator for v * factors[0..n-1] (prefix products, model bases)."""
        prefix = BlaschkePotapov(self.v, self.factors[:n])
        return prefix

    def entries(self) -> tuple[PolyMatrix, CPoly]:
        """(N, d) with B = N(t)/d(t), N a polynomial matrix, d scalar."""
        m = self.m
        N = PolyMatrix.from_constant(self.v)
        d = CPoly.one()
        eye = np.eye(m, dtype=complex)
        for f in self.factors:
            # xi (t - a) P + (1 - conj(a) t)(I - P), over 1 - conj(a) t
            num = PolyMatrix([[CPoly([-f.xi * f.a * f.P[i, j], f.xi * f.P[i, j]])
                               + CPoly([eye[i, j] - f.P[i, j],
                                        -np.conj(f.a) * (eye[i, j] - f.P[i, j])])
                               for j in range(m)] for i in range(m)])
            N = N @ num
            d = d * CPoly([1.0, -np.conj(f.a)])
        return N, d

    def as_symbol(self) -> "MatrixSymbol":
        N, d = self.entries()
        entries = [[CRatFun(N.entries[i][j], d) for j in range(self.m)]
                   for i in range(self.m)]
        return MatrixSymbol(entries, evaluator=self.__call__)

    def boundary_unitarity_defect(self, samples: int = 64, rng=None) -> float:
        if rng is None:
            rng = np.random.default_rng(42)
        t = np.exp(2j * np.pi * rng.random(samples))
        B = self(t)
        eye = np.eye(self.m)
        return float(np.linalg.norm(np.swapaxes(B.conj(), -1, -2) @ B - eye,
                                    axis=(-2, -1)).max())


def bp_build(v: np.ndarray, factors: list[BlaschkeFactorSpec]) -> BlaschkePotapov:
    """Validated Blaschke-Potapov product; raises InvalidFactor on bad data."""
    v = np.asarray(v, dtype=complex)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise InvalidFactor("v must be square")
    if np.linalg.norm(v.conj().T @ v - np.eye(v.shape[0])) > UNITARITY_TOL * v.shape[0]:
        raise InvalidFactor("v is not unitary")
    for f in factors:
        f.validate()
        if f.P.shape[0] != v.shape[0]:
            raise InvalidFactor("projection size does not match v")
    return BlaschkePotapov(v, factors)


@dataclass
class ScalarBivarRational:
    """psi(t, eta) = num(t, eta) / den(t, eta), both bivariate polynomials."""

    num: "BivarPoly"
    den: "BivarPoly"

    def __post_init__(self):
        from .polys import BivarPoly
        if not isinstance(self.num, BivarPoly) or not isinstance(self.den, BivarPoly):
            raise TypeError("num/den must be BivarPoly in (t, eta)")
        if self.den.to_float().float_coeffs().any() is False:
            raise ZeroDivisionError("psi with zero denominator")

    def __call__(self, t, eta):
        return self.num(t, eta) / self.den(t, eta)

    @property
    def eta_degree(self) -> int:
        return max(self.num.deg_w, self.den.deg_w)


@dataclass
class Classification:
    normal: Optional[bool]
    analytic_closed_disc: Optional[bool]
    nondegenerate: Optional[bool]
    margins: dict = field(default_factory=dict)

    @property
    def ndarn_member(self) -> Optional[bool]:
        vals = (self.normal, self.analytic_closed_disc, self.nondegenerate)
        if any(v is False for v in vals):
            return False
        if any(v is None for v in vals):
            return None
        return True


class MatrixSymbol:
    """m x m rational matrix function with entrywise CRatFun storage.

    An optional fast evaluator (used by psi-composed symbols) bypasses the
    entrywise rational evaluation, which matters on large grids.
    """

    def __init__(self, entries, evaluator: Optional[Callable] = None,
                 flags: Optional[Classification] = None):
        self.entries = [list(row) for row in entries]
        self.m = len(self.entries)
        for row in self.entries:
            if len(row) != self.m:
                raise ValueError("entries must form a square grid")
        self.evaluator = evaluator
        self.flags = flags

    # -- constructors --------------------------------------------------------
    @staticmethod
    def from_scalar(f: CRatFun) -> "MatrixSymbol":
        return MatrixSymbol([[f]])

    @staticmethod
    def shift(m: int = 1) -> "MatrixSymbol":
        t = CRatFun.variable()
        zero = CRatFun.constant(0.0)
        return MatrixSymbol([[t if i == j else zero for j in range(m)] for i in range(m)])

    @staticmethod
    def constant(M) -> "MatrixSymbol":
        M = np.asarray(M, dtype=complex)
        return MatrixSymbol([[CRatFun.constant(M[i, j]) for j in range(M.shape[1])]
                             for i in range(M.shape[0])])

    # -- evaluation ------------------------------------------------------------
    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=complex)
        if self.evaluator is not None:
            return self.evaluator(t)
        return self.eval_entrywise(t)

    def eval_entrywise(self, t) -> np.ndarray:
        """Evaluate through the reduced entries (safe at cancelled poles)."""
        t = np.asarray(t, dtype=complex)
        out = np.zeros(t.shape + (self.m, self.m), dtype=complex)
        for i in range(self.m):
            for j in range(self.m):
                out[..., i, j] = self.entries[i][j](t)
        return out

    # -- pole structure ----------------------------------------------------------
    def poles(self) -> list[tuple[complex, int]]:
        """Union of entry poles, clustered, with the max multiplicity per cluster."""
        raw = []
        for row in self.entries:
            for e in row:
                raw.extend(e.poles())
        clusters: list[list] = []
        for p, mult in raw:
            for c in clusters:
                if abs(p - c[0]) <= 1e-8 * (1.0 + abs(p)):
                    c[1] = max(c[1], mult)
                    break
            else:
                clusters.append([p, mult])
        return sorted([(c[0], c[1]) for c in clusters],
                      key=lambda pm: (abs(pm[0]), np.angle(pm[0])))

    def poles_in_disc(self) -> list[tuple[complex, int]]:
        return [(p, m) for p, m in self.poles() if abs(p) < 1 - 1e-12]

    def boundary_adjoint(self) -> "MatrixSymbol":
        """Rational G with G(t) = F(t)* on |t| = 1 (entrywise reflect + transpose)."""
        ev = None
        if self.evaluator is not None:
            base = self.evaluator

            def ev(t):
                t = np.asarray(t, dtype=complex)
                vals = base(1.0 / np.conj(t))
                return np.swapaxes(vals.conj(), -1, -2)

        return MatrixSymbol([[self.entries[j][i].reflect() for j in range(self.m)]
                             for i in range(self.m)], evaluator=ev)

    def frob_scale(self, samples: int = 32) -> float:
        t = np.exp(2j * np.pi * np.arange(samples) / samples)
        return float(np.linalg.norm(self(t), axis=(-2, -1)).max())


def compose_psi(psi: ScalarBivarRational, B: BlaschkePotapov) -> MatrixSymbol:
    """F(t) = psi(t, B(t)) as a rational matrix symbol.

    Numerator and denominator of psi are lifted to polynomial matrices by
    substituting B = N/d and clearing d; the matrix inverse is carried out
    once symbolically through the adjugate. A fast evaluator solving
    den(t,B(t)) X = num(t,B(t)) pointwise is attached for grid work.
    """
    m = B.m
    N, d = B.entries()
    K = psi.eta_degree
    num_c = psi.num.to_float().float_coeffs()
    den_c = psi.den.to_float().float_coeffs()

    def lift(coeffs) -> PolyMatrix:
        # sum_k c_k(t) N(t)^k d(t)^(K-k), with c_k(t) the t-poly at eta-power k
        acc = None
        Npow = PolyMatrix.identity(m)
        for k in range(K + 1):
            ck = CPoly(coeffs[:, k]) if k < coeffs.shape[1] else CPoly.zero()
            if not ck.is_zero():
                term = Npow.scale(ck * d ** (K - k))
                acc = term if acc is None else acc + term
            if k < K:
                Npow = Npow @ N
        if acc is None:
            acc = PolyMatrix.identity(m).scale(CPoly.zero())
        return acc

    P_num = lift(num_c)
    P_den = lift(den_c)
    det_den = P_den.det()
    if det_den.is_zero(tol=1e-13 * max(det_den.max_abs(), 1.0)) or det_den.max_abs() == 0:
        raise IllPosedComposition("den(t, B(t)) is singular identically")
    adj = P_den.adjugate()
    prod = P_num @ adj
    entries = [[CRatFun(prod.entries[i][j], det_den) for j in range(m)]
               for i in range(m)]

    nc = np.asarray(num_c, complex)
    dc = np.asarray(den_c, complex)

    def evaluator(t):
        t = np.asarray(t, dtype=complex)
        Bt = B(t)
        eye = np.eye(m, dtype=complex)

        def matpoly(c):
            acc = np.zeros(t.shape + (m, m), dtype=complex)
            Bk = np.broadcast_to(eye, t.shape + (m, m)).copy()
            for k in range(K + 1):
                ck = np.asarray(CPoly(c[:, k])(t), dtype=complex) \
                    if k < c.shape[1] else np.zeros_like(t)
                acc = acc + ck[..., None, None] * Bk
                if k < K:
                    Bk = Bk @ Bt
            return acc

        numM = matpoly(nc)
        denM = matpoly(dc)
        # F = num * den^-1  <=>  den^T X^T = num^T
        sol = np.linalg.solve(np.swapaxes(denM, -1, -2), np.swapaxes(numM, -1, -2))
        return np.swapaxes(sol, -1, -2)

    return MatrixSymbol(entries, evaluator=evaluator)


def classify_symbol(F: MatrixSymbol, seed: int = 42,
                    tol_normal: float = 1e-9, samples: int = 64) -> Classification:
    """Normality / analyticity / non-degeneracy flags for a rational symbol.

    Normality is sampled on the circle with relative tolerance
    tol_normal*(1+||F||^2); analyticity comes from the entry pole set;
    non-degeneracy intersects spectra at seeded pseudo-random interior
    points and re-tests surviving candidates on a denser set.
    """
    rng = np.random.default_rng(seed)
    margins = {}

    t = np.exp(2j * np.pi * np.arange(samples) / samples)
    vals = F(t)
    valsH = np.swapaxes(vals.conj(), -1, -2)
    comm = vals @ valsH - valsH @ vals
    scale = 1.0 + np.linalg.norm(vals, axis=(-2, -1)) ** 2
    defect = float((np.linalg.norm(comm, axis=(-2, -1)) / scale).max())
    margins["normal_defect"] = defect
    if defect <= tol_normal:
        normal = True
    elif defect >= 10 * tol_normal:
        normal = False
    else:
        normal = None

    poles = F.poles()
    margins["pole_moduli"] = [abs(p) for p, _ in poles]
    analytic: Optional[bool] = True
    for p, _ in poles:
        r = abs(p)
        if r <= 1 - 1e-8:
            analytic = False
            break
        if r < 1 + 1e-8:
            analytic = None
    # non-degeneracy: a constant present in the spectrum everywhere
    pts = 0.9 * np.sqrt(rng.random(8)) * np.exp(2j * np.pi * rng.random(8))
    pts = np.array([p for p in pts if _clear_of_poles(p, poles)])
    specs = [np.linalg.eigvals(F(p)) for p in pts]
    candidates = list(specs[0])
    for sp in specs[1:]:
        candidates = [c for c in candidates if np.min(np.abs(sp - c)) <= 1e-6]
        if not candidates:
            break
    nondeg = True
    if candidates:
        pts2 = 0.95 * np.sqrt(rng.random(64)) * np.exp(2j * np.pi * rng.random(64))
        pts2 = np.array([p for p in pts2 if _clear_of_poles(p, poles)])
        for c in candidates:
            if all(np.min(np.abs(np.linalg.eigvals(F(p)) - c)) <= 1e-5 for p in pts2):
                nondeg = False
                margins["degenerate_constant"] = complex(c)
                break
    out = Classification(normal, analytic, nondeg, margins)
    F.flags = out
    return out


def _clear_of_poles(p, poles, gap=1e-3):
    return all(abs(p - q) > gap for q, _ in poles)


# ---------------------------------------------------------------------------
# Fourier coefficients
# ---------------------------------------------------------------------------

def _entry_fourier(f: CRatFun, n_min: int, n_max: int) -> dict[int, complex]:
    """Laurent coefficients on the unit circle via partial fractions."""
    out = {n: 0.0 + 0.0j for n in range(n_min, n_max + 1)}
    q, r = divmod(f.num, f.den)
    if not q.is_zero():
        for k, c in enumerate(q.coeffs):
            if n_min <= k <= n_max:
                out[k] += c
    if f.den.degree == 0:
        return out
    poles = poly_roots(f.den)
    den_lead = f.den.coeffs[-1]

    def proper(t):
        return r(t) / f.den(t)

    for idx, (p, s_max) in enumerate(poles):
        others = [pp for j, (pp, _) in enumerate(poles) if j != idx]
        sep = min([abs(p - pp) for pp in others], default=2.0)
        rad = min(0.25 * sep, 0.1 * (1.0 + abs(p)))
        K = 256
        th = 2 * np.pi * np.arange(K) / K
        ring = p + rad * np.exp(1j * th)
        rot = rad * np.exp(1j * th)
        vals = proper(ring)
        for s in range(1, s_max + 1):
            A = complex(np.mean(vals * (ring - p) ** (s - 1) * rot))
            if abs(A) < 1e-14 * (1.0 + abs(den_lead)):
                continue
            if abs(p) < 1:
                # 1/(t-p)^s = sum_k C(s-1+k,k) p^k t^(-s-k)
                for n in range(n_min, min(-s, n_max) + 1):
                    k = -n - s
                    out[n] += A * comb(s - 1 + k, k) * p ** k
            else:
                # 1/(t-p)^s = (-1)^s p^(-s) sum_k C(s-1+k,k) (t/p)^k
                for n in range(max(0, n_min), n_max + 1):
                    out[n] += A * (-1) ** s * comb(s - 1 + n, n) * p ** (-s - n)
    return out


def fourier_coeffs(F: MatrixSymbol, n_min: int, n_max: int,
                   nfft: int | None = None, cross_tol: float = 1e-9) -> dict[int, np.ndarray]:
    """Matrix Fourier coefficients c_n for n_min <= n <= n_max.

    Two independent computations: partial fractions (exact pole structure)
    and the FFT on a power-of-two boundary grid. They must agree within
    cross_tol relative; disagreement means a pole too close to the circle
    or corrupted entries, and raises.
    """
    for p, _ in F.poles():
        if abs(abs(p) - 1.0) < 1e-8:
            raise BoundaryPole(f"pole at {p} within 1e-8 of the unit circle")
    m = F.m
    res = {n: np.zeros((m, m), dtype=complex) for n in range(n_min, n_max + 1)}
    for i in range(m):
        for j in range(m):
            ent = _entry_fourier(F.entries[i][j], n_min, n_max)
            for n, c in ent.items():
                res[n][i, j] = c

    if nfft is None:
        nfft = 4096
    need = 4 * max(abs(n_min), abs(n_max)) + 64
    while nfft < need:
        nfft *= 2
    t = np.exp(2j * np.pi * np.arange(nfft) / nfft)
    vals = F(t)
    ch = np.fft.fft(vals, axis=0) / nfft
    scale = 1.0 + float(np.abs(ch).max())
    worst = 0.0
    for n in range(n_min, n_max + 1):
        diff = np.abs(ch[n % nfft] - res[n]).max()
        worst = max(worst, diff / scale)
    if worst > cross_tol:
        raise QdsymError(
            f"residue/FFT Fourier paths disagree by {worst:.3e} (tol {cross_tol:g})")
    return res
