"""Quadrature-domain scenarios: nodes, weights, identities, defining equations.

Three concrete constructions are packaged:

* a simply connected domain F(D), F(t) = t + beta/(t - a) with |a| > 1;
* a one-connected domain from a 2x2 Blaschke product of degree two and the
  Zhukovsky-like scalar map psi, parametrized by (lambda, a, c, L) and a
  disc root gamma_1 of D = q^2 - 4 p r;
* a 3x3 analytic normal symbol with three boundary components.

Defining equations of the curves are produced by eliminating the
parameter t with resultants and interpolating the (z, w) dependence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .curves import CurveTrace, GridSpec, grid_centers, trace_branches, winding_grid
from .errors import (DegenerateCurve, DegreeBoundError, InvalidTestFunction,
                     PreconditionViolation)
from .exact import GaussianRational, is_exact
from .polys import (BivarPoly, CPoly, CRatFun, bivar_fit, poly_roots,
                    sylvester_det_fixed)
from .symbols import (BlaschkeFactorSpec, MatrixSymbol, ScalarBivarRational,
                      bp_build, classify_symbol, compose_psi)


def _try_exact(x) -> Optional[GaussianRational]:
    try:
        return GaussianRational.coerce(x)
    except TypeError:
        if isinstance(x, complex) and x.imag == 0:
            return None
        return None


def _as_complex(x) -> complex:
    if is_exact(x):
        return complex(x)
    if isinstance(x, Fraction):
        return complex(float(x))
    return complex(x)


# ---------------------------------------------------------------------------
# Example 1: simply connected
# ---------------------------------------------------------------------------

@dataclass
class Example1Scenario:
    a: complex
    beta: complex
    F: MatrixSymbol
    Fexpr: CRatFun
    Fstar: CRatFun
    trace: CurveTrace
    univalent: bool
    exact: Optional[tuple] = None           # (a, beta) as GaussianRational
    details: dict = field(default_factory=dict)


def example1_build(a, beta, n_trace: int = 2048) -> Example1Scenario:
    """Scenario for F(t) = t + beta/(t-a); requires |a| > 1 and beta != 0.

    The univalence flag comes from a boundary self-intersection test on
    the traced curve (an analytic map of the disc with a simple image
    boundary is univalent); failure is reported, not raised.
    """
    a_ex, b_ex = _try_exact(a), _try_exact(beta)
    a, beta = _as_complex(a), _as_complex(beta)
    if abs(a) <= 1:
        raise PreconditionViolation(f"|a| = {abs(a)} must exceed 1")
    if beta == 0:
        raise PreconditionViolation("beta must be nonzero")

    num = CPoly([beta, -a, 1.0])                 # t^2 - a t + beta
    den = CPoly([-a, 1.0])
    Fexpr = CRatFun(num, den)
    F = MatrixSymbol.from_scalar(Fexpr)
    classify_symbol(F)
    Fstar = Fexpr.reflect()

    trace = trace_branches(F, n_init=n_trace)
    simple, self_int = _curve_simple(trace.branches[0])
    scn = Example1Scenario(
        a=a, beta=beta, F=F, Fexpr=Fexpr, Fstar=Fstar, trace=trace,
        univalent=simple,
        exact=(a_ex, b_ex) if (a_ex is not None and b_ex is not None) else None,
        details={"self_intersections": self_int})
    return scn


def _curve_simple(poly: np.ndarray) -> tuple[bool, int]:
    """Is the closed polyline simple? Star-shaped fast path, then a
    neighbor-filtered segment intersection count."""
    z = poly
    centroid = z.mean()
    darg = np.diff(np.unwrap(np.angle(z - centroid)))
    total = darg.sum()
    # monotone argument alone admits limacon-type inner loops (total 4pi);
    # a simple star-shaped curve must close after exactly one turn
    if (np.all(darg > 0) or np.all(darg < 0)) and abs(abs(total) - 2 * np.pi) < 1e-6:
        return True, 0
    n = len(z) - 1
    a, b = z[:-1], z[1:]
    from scipy.spatial import cKDTree
    mids = 0.5 * (a + b)
    lens = np.abs(b - a)
    tree = cKDTree(np.c_[mids.real, mids.imag])
    pairs = tree.query_pairs(2.0 * lens.max(), output_type="ndarray")
    hits = 0
    for i, j in pairs:
        if abs(i - j) <= 1 or (i == 0 and j == n - 1) or (j == 0 and i == n - 1):
            continue
        if _segments_cross(a[i], b[i], a[j], b[j]):
            hits += 1
    return hits == 0, hits


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(u, v, w):
        return np.sign(((v - u).conjugate() * (w - u)).imag)
    return (orient(p1, p2, q1) * orient(p1, p2, q2) < 0
            and orient(q1, q2, p1) * orient(q1, q2, p2) < 0)


@dataclass
class NodeWeightSet:
    nodes: list
    weights: list
    orders: list

    @property
    def total_weight(self) -> complex:
        return sum(self.weights)

    def apply(self, f: Callable) -> complex:
        # simple poles only here: sum_k c_k f(z_k)
        return sum(w * f(z) for w, z in zip(self.weights, self.nodes))


def schwartz_nodes_weights(s: Example1Scenario) -> NodeWeightSet:
    """Nodes F(0), F(1/conj(a)) with weights pi * residues of the Schwartz
    function, computed in the t variable through w(z) dz = F_*(t) F'(t) dt."""
    if not s.univalent:
        raise PreconditionViolation("scenario not univalent; no quadrature identity")
    a = s.a
    t1, t2 = 0.0 + 0.0j, 1.0 / np.conj(a)
    nodes = [complex(s.Fexpr(t1)), complex(s.Fexpr(t2))]
    prod = s.Fstar * s.Fexpr.derivative()
    weights = [np.pi * prod.residue(t1), np.pi * prod.residue(t2)]
    return NodeWeightSet(nodes, weights, [1, 1])


def _interior_cells(trace: CurveTrace, nx: int, ny: int):
    """Centers of grid cells with winding 1, plus the cell area."""
    bbox = trace.bounding_box(0.05)
    xs, ys, dx, dy = grid_centers(bbox, nx, ny)
    W = winding_grid(trace.cycle_polylines(), xs, ys)
    Z = xs[None, :] + 1j * ys[:, None]
    return Z[W == 1], dx * dy


def verify_quadrature_identity(s: Example1Scenario, fs: list,
                               grid: GridSpec = GridSpec(nx=2048, ny=2048),
                               nw: NodeWeightSet | None = None) -> list[float]:
    """Relative residuals of  integral_Omega f dA = sum c_k f(z_k).

    The integral is a membership-masked midpoint rule with Richardson
    extrapolation across two grid levels. Rational test functions are
    screened for poles inside the closed domain.
    """
    from .curves import winding_from_trace

    if nw is None:
        nw = schwartz_nodes_weights(s)
    trace = s.trace
    pts = trace.all_points()
    cells_f, area_f = _interior_cells(trace, grid.nx, grid.ny)
    cells_c, area_c = _interior_cells(trace, grid.nx // 2, grid.ny // 2)
    out = []
    for f in fs:
        if isinstance(f, CRatFun):
            for p, _ in f.poles():
                too_close = np.abs(pts - p).min() < 1e-6 * (1 + abs(p))
                if too_close or winding_from_trace(trace, p) == 1:
                    raise InvalidTestFunction(f"test function pole {p} inside the domain")
        fine = complex(np.sum(f(cells_f)) * area_f)
        coarse = complex(np.sum(f(cells_c)) * area_c)
        integral = 2.0 * fine - coarse
        rhs = nw.apply(f)
        out.append(abs(integral - rhs) / (1.0 + abs(integral)))
    return out


def measure_area(trace: CurveTrace, nx: int = 2048, ny: int = 2048) -> float:
    """Grid-measured area of the winding-1 region."""
    cells, cell_area = _interior_cells(trace, nx, ny)
    return float(len(cells) * cell_area)


# ---------------------------------------------------------------------------
# Example 2: one-connected
# ---------------------------------------------------------------------------

@dataclass
class Example2Scenario:
    lam: complex
    a: float
    c: float
    L: complex
    gamma1: complex
    all_roots: list
    disc_roots: list
    p: CPoly
    q: CPoly
    r: CPoly
    D: CPoly
    psi: ScalarBivarRational
    B: object
    F: MatrixSymbol
    details: dict = field(default_factory=dict)


def example2_build(lam, a, c, L, branch_pick: int = 0) -> Example2Scenario:
    """One-connected scenario from the degree-two matrix Blaschke product.

    D = q^2 - 4 p r must have four distinct roots off the circle, in pairs
    (gamma, 1/conj(gamma)); gamma_1 is the branch_pick-th disc root sorted
    by argument.
    """
    lam, L = complex(lam), complex(L)
    a, c = float(a), float(c)
    # The reference parameter set lambda = 0.8i is purely imaginary, so the
    # operative constraints are membership in the disc and lambda != 0;
    # degenerate parameter choices surface as DegenerateCurve below.
    if abs(lam) >= 1:
        raise PreconditionViolation("lambda must lie in the open disc")
    if lam == 0:
        raise PreconditionViolation("lambda must be nonzero")
    if a <= 0 or c < 0:
        raise PreconditionViolation("need a > 0 and c >= 0")
    if abs(a * a + c * c - 1.0) > 1e-12:
        raise PreconditionViolation("a^2 + c^2 = 1 is required")
    if L == 0:
        raise PreconditionViolation("L must be nonzero")

    lb = np.conj(lam)
    p = CPoly([1.0, 0.0, -lb ** 2])
    r = CPoly([-lam ** 2, 0.0, 1.0])
    q = CPoly([c * c * (1 - lam ** 2), 2 * a * a * (1 - abs(lam) ** 2),
               c * c * (1 - lb ** 2)])
    D = q * q - 4.0 * p * r

    roots = [rt for rt, mult in poly_roots(D) for _ in range(mult)]
    if len(roots) != 4 or min(
            abs(x - y) for i, x in enumerate(roots) for y in roots[i + 1:]) < 1e-8:
        raise DegenerateCurve("roots of D must be distinct")
    if any(abs(abs(rt) - 1.0) < 1e-8 for rt in roots):
        raise DegenerateCurve("root of D on the unit circle")
    disc = sorted([rt for rt in roots if abs(rt) < 1], key=lambda z: np.angle(z))
    if len(disc) != 2:
        raise DegenerateCurve(f"expected two disc roots of D, found {len(disc)}")
    pair_defect = max(min(abs(1.0 / np.conj(g) - rt) for rt in roots) for g in disc)
    gamma1 = disc[branch_pick % len(disc)]

    tau = CPoly([-gamma1, 1.0])
    Ltau = L * tau
    num = BivarPoly(np.column_stack([(-q + Ltau).float_coeffs(),
                                     _pad(2.0 * p, 3)]))
    den = BivarPoly(np.column_stack([(-q - Ltau).float_coeffs(),
                                     _pad(2.0 * p, 3)]))
    psi = ScalarBivarRational(num, den)

    ell1 = np.array([1.0, 0.0])
    ell2 = np.array([c, a])
    Q1 = np.outer(ell1, ell1.conj())
    Q2 = np.outer(ell2, ell2.conj())
    B = bp_build(np.eye(2), [BlaschkeFactorSpec(lam, 1.0, Q1),
                             BlaschkeFactorSpec(-lam, 1.0, Q2)])
    F = compose_psi(psi, B)
    classify_symbol(F)
    return Example2Scenario(lam, a, c, L, gamma1, roots, disc, p, q, r, D,
                            psi, B, F, details={"pair_defect": pair_defect})


def _pad(p: CPoly, n: int) -> np.ndarray:
    c = p.float_coeffs()
    out = np.zeros(n, complex)
    out[:len(c)] = c
    return out


@dataclass
class ZBranches:
    thetas: np.ndarray
    z_plus: np.ndarray
    z_minus: np.ndarray
    sigma: np.ndarray
    product_defect: float


def trace_z_branches(s: Example2Scenario, n: int = 4096) -> ZBranches:
    """z_+/- on the circle from the two continuous branches of sqrt(D).

    The square root is continuity-tracked (sign chosen to minimize the
    jump); the branch with the larger mean modulus is the outer curve
    z_+. Pointwise z_+ z_- = 1; the defect is reported.
    """
    th = np.linspace(0.0, 2 * np.pi, n + 1)
    t = np.exp(1j * th)
    Dv = s.D(t)
    if np.abs(Dv).min() < 1e-12 * max(1.0, np.abs(Dv).max()):
        raise DegenerateCurve("D vanishes on the unit circle")
    sigma = np.empty_like(Dv)
    sigma[0] = np.sqrt(Dv[0])
    for i in range(1, len(Dv)):
        cand = np.sqrt(Dv[i])
        sigma[i] = cand if abs(cand - sigma[i - 1]) <= abs(cand + sigma[i - 1]) else -cand
    Ltau = s.L * (t - s.gamma1)
    z_a = (sigma + Ltau) / (sigma - Ltau)
    z_b = (-sigma + Ltau) / (-sigma - Ltau)
    if np.abs(z_a).mean() < np.abs(z_b).mean():
        z_a, z_b = z_b, z_a
    defect = float(np.abs(z_a * z_b - 1.0).max())
    return ZBranches(th, z_a, z_b, sigma, defect)


@dataclass
class UnivalenceReport:
    passed: bool
    min_arg_step: float
    pole_free: bool
    pole_candidates: list
    details: dict = field(default_factory=dict)


def univalence_check(s: Example2Scenario, n: int = 4096) -> UnivalenceReport:
    """Both admissibility conditions, checked independently.

    (a) arg z_+(e^{i theta}) strictly increases over the full circle;
    (b) z has no pole on the |t|<1 part of the spectral curve: the zeros
    of sigma - L(t - gamma_1) away from the branch point gamma_1 are the
    disc roots of (D - L^2 (t-gamma_1)^2) / (t - gamma_1); there must be
    none.
    """
    br = trace_z_branches(s, n)
    darg = np.diff(np.unwrap(np.angle(br.z_plus)))
    min_step = float(darg.min())
    increasing = bool(np.all(darg > 0))

    tau = CPoly([-s.gamma1, 1.0])
    expr = s.D - (s.L * s.L) * (tau * tau)
    quot, rem = divmod(expr, tau)
    rem_sz = rem.max_abs() / max(expr.max_abs(), 1e-300)
    cands = [rt for rt, _ in poly_roots(quot)]
    inside = [rt for rt in cands if abs(rt) <= 1 + 1e-8]
    pole_free = len(inside) == 0
    return UnivalenceReport(
        passed=increasing and pole_free,
        min_arg_step=min_step,
        pole_free=pole_free,
        pole_candidates=cands,
        details={"deflation_residual": float(rem_sz),
                 "branch_product_defect": br.product_defect})


# ---------------------------------------------------------------------------
# defining equations by resultant elimination
# ---------------------------------------------------------------------------

@dataclass
class DefiningEquation:
    Q: BivarPoly
    symmetry_defect: float
    curve_residual: float
    fit_validation: float
    spurious_z: list
    spurious_w: list


def _elim_linear(curve_A: "BivarPoly", curve_B: "BivarPoly", curve_C: "BivarPoly",
                 lin_D: "BivarPoly", lin_E: "BivarPoly") -> "BivarPoly":
    """Res_eta(A eta^2 + B eta + C, D eta + E) = A E^2 - B E D + C D^2."""
    return curve_A * lin_E * lin_E - curve_B * lin_E * lin_D + curve_C * lin_D * lin_D


def _param_poly_rows(X: BivarPoly) -> list[CPoly]:
    """Rows of a (t, s)-bivariate polynomial as CPoly in s per power of t."""
    A = X.float_coeffs()
    return [CPoly(A[j]) for j in range(A.shape[0])]


def defining_equation(s, deg_z: int | None = None, deg_w: int | None = None,
                      n_check: int = 256, backend: str = "auto") -> DefiningEquation:
    """Polynomial Q(z, w) = Res_t(X_z, Y_w) vanishing on the curve.

    X_z relates t and z on the curve, Y_w relates t and w; the resultant
    eliminates t. Candidate spurious factors of the form (z - z0) or
    (w - w0) are detected by slicing and reported, never removed. The
    result is validated on curve samples not used in its construction and
    normalized to real-type form.
    """
    if isinstance(s, Example1Scenario):
        Xrows, Yrows, exact_data = _example1_relations(s, backend)
        dz = deg_z if deg_z is not None else 2
        dw = deg_w if deg_w is not None else 2
        th = np.linspace(0, 2 * np.pi, n_check + 1)[:-1] + 0.123
        tt = np.exp(1j * th)
        zc = s.Fexpr(tt)
        wc = s.Fstar(tt)
    elif isinstance(s, Example2Scenario):
        Xrows, Yrows = _example2_relations(s)
        exact_data = None
        dz = deg_z if deg_z is not None else 12
        dw = deg_w if deg_w is not None else 12
        br = trace_z_branches(s, n_check)
        zc = np.concatenate([br.z_plus[:-1], br.z_minus[:-1]])
        wc = np.conj(zc)
    else:
        raise TypeError("unsupported scenario")

    if exact_data is not None and backend != "float":
        Xe, Ye = exact_data

        def ev_exact(z, w):
            fc = [cp(z) for cp in Xe]
            gc = [cp(w) for cp in Ye]
            return sylvester_det_fixed(fc, gc, exact=True)

        fit = bivar_fit(ev_exact, dz, dw, backend="exact")
    else:
        def ev(z, w):
            fc = np.array([cp(z) for cp in Xrows])
            gc = np.array([cp(w) for cp in Yrows])
            return sylvester_det_fixed(fc, gc)

        fit = bivar_fit(ev, dz, dw, radius=1.13)
    Q = fit.poly
    if fit.validation_residual > 1e-8:
        raise DegreeBoundError(
            f"validation residual {fit.validation_residual:.2e}: degree bounds "
            f"({dz},{dw}) too small")

    Qn, defect = Q.symmetrize()
    box = _box_max(Qn, zc)
    res = float(np.abs(Qn(zc, wc)).max() / box)
    if res > 1e-6:
        raise DegreeBoundError(f"curve residual {res:.2e} beyond 1e-6")

    sz = _spurious_candidates(Qn, axis="z")
    sw = _spurious_candidates(Qn, axis="w")
    return DefiningEquation(Qn, defect, res, fit.validation_residual, sz, sw)


def _example1_relations(s: Example1Scenario, backend=None):
    # X_z(t): z (t - a) - (t^2 - a t + beta);  Y_w(t): w t (1 - conj(a) t)
    # - (1 - conj(a) t) - conj(beta) t^2
    a, beta = s.a, s.beta
    ab, bb = np.conj(a), np.conj(beta)
    Xrows = [CPoly([-beta, -a]), CPoly([a, 1.0]), CPoly([-1.0])]
    Yrows = [CPoly([-1.0]), CPoly([ab, 1.0]), CPoly([-bb, -ab])]
    exact_data = None
    if s.exact is not None:
        ae, be = s.exact
        abe, bbe = ae.conjugate(), be.conjugate()
        one = GaussianRational(1)
        Xe = [CPoly([-be, -ae]), CPoly([ae, one]), CPoly([-one])]
        Ye = [CPoly([-one]), CPoly([abe, one]), CPoly([-bbe, -abe])]
        exact_data = (Xe, Ye)
    return Xrows, Yrows, exact_data


def _example2_relations(s: Example2Scenario):
    # eliminate eta between p eta^2 - q eta + r = 0 and the psi relations
    z1 = BivarPoly.var_w()          # the second variable plays z (or w)
    one = BivarPoly.constant(1.0)

    def lift_t(p: CPoly) -> BivarPoly:
        return BivarPoly(p.float_coeffs()[:, None])

    P, Qp, Rp = lift_t(s.p), lift_t(s.q), lift_t(s.r)
    tau = lift_t(CPoly([-s.gamma1, 1.0]))
    # X: 2 p (z-1) eta - q (z-1) - L tau (z+1) = 0
    Dl = 2.0 * P * (z1 - one)
    El = -1.0 * Qp * (z1 - one) - s.L * tau * (z1 + one)
    X = _elim_linear(P, -1.0 * Qp, Rp, Dl, El)

    # Y: w in terms of (1/t, 1/eta) with conjugated coefficients, cleared by t^2 eta
    ph = lift_t(s.p.conj().reversed(2))
    qh = lift_t(s.q.conj().reversed(2))
    tauh = lift_t(CPoly([0.0, np.conj(s.L), -np.conj(s.L) * np.conj(s.gamma1)]))
    Dlw = -1.0 * (qh * (z1 - one) + tauh * (z1 + one))
    Elw = 2.0 * ph * (z1 - one)
    Y = _elim_linear(P, -1.0 * Qp, Rp, Dlw, Elw)
    return _param_poly_rows(X), _param_poly_rows(Y)


def _box_max(Q: BivarPoly, zc: np.ndarray) -> float:
    xs = np.linspace(zc.real.min(), zc.real.max(), 48)
    ys = np.linspace(zc.imag.min(), zc.imag.max(), 48)
    Z = xs[None, :] + 1j * ys[:, None]
    return max(float(np.abs(Q(Z, np.conj(Z))).max()), 1e-300)


def _spurious_candidates(Q: BivarPoly, axis: str, tol: float = 1e-6) -> list:
    """Common roots of all slices: candidates for (z-z0) or (w-w0) factors."""
    A = Q.float_coeffs()
    rng = np.random.default_rng(7)
    slices = []
    for _ in range(3):
        u = np.exp(2j * np.pi * rng.random()) * 1.1
        if axis == "z":
            coeffs = np.array([sum(A[j, k] * u ** k for k in range(A.shape[1]))
                               for j in range(A.shape[0])])
        else:
            coeffs = np.array([sum(A[j, k] * u ** j for j in range(A.shape[0]))
                               for k in range(A.shape[1])])
        if np.abs(coeffs).max() < 1e-12:
            continue
        try:
            slices.append([rt for rt, _ in poly_roots(CPoly(coeffs))])
        except Exception:
            return []
    if len(slices) < 2:
        return []
    cands = []
    for rt in slices[0]:
        if all(min(abs(rt - x) for x in sl) < tol * (1 + abs(rt)) for sl in slices[1:]):
            cands.append(complex(rt))
    return cands


# ---------------------------------------------------------------------------
# Ahlfors-type curve sampling
# ---------------------------------------------------------------------------

@dataclass
class AhlforsSample:
    z: complex
    w: complex
    t: complex
    mult: int


def make_reflected_grid(base: np.ndarray) -> np.ndarray:
    """Close a t-grid under t -> 1/conj(t) (no zeros allowed)."""
    base = np.asarray(base, dtype=complex)
    return np.concatenate([base, 1.0 / np.conj(base)])


def ahlfors_curve_sample(F: MatrixSymbol, t_grid, angle_tol: float = 1e-6) -> list[AhlforsSample]:
    """Points (z, w, t) with a common eigenvector of F(t) and F*(1/conj(t)).

    On |t| = 1 every returned point satisfies w = conj(z) (fixed points of
    the curve involution); the sampled set is closed under the involution
    (z, w, t) -> (conj w, conj z, 1/conj t) when the grid is.
    """
    G = F.boundary_adjoint()
    out = []
    for t in np.asarray(t_grid, dtype=complex):
        try:
            zv, zvec = np.linalg.eig(F(np.array(t)))
            wv, wvec = np.linalg.eig(G(np.array(t)))
        except np.linalg.LinAlgError:
            continue
        for i in range(len(zv)):
            for j in range(len(wv)):
                c = abs(np.vdot(zvec[:, i], wvec[:, j]))
                ang = np.arccos(min(1.0, c))
                if ang < angle_tol:
                    out.append(AhlforsSample(complex(zv[i]), complex(wv[j]),
                                             complex(t), 1))
    merged: list[AhlforsSample] = []
    for smp in out:
        for m in merged:
            if (abs(m.z - smp.z) < 1e-10 and abs(m.w - smp.w) < 1e-10
                    and abs(m.t - smp.t) < 1e-10):
                m.mult += 1
                break
        else:
            merged.append(smp)
    return merged


# ---------------------------------------------------------------------------
# Example 3
# ---------------------------------------------------------------------------

def example3_build(eps2: complex = np.exp(2j * np.pi / 3)) -> MatrixSymbol:
    """3x3 symbol t + B(t) for the degree-three Blaschke product with rank-one
    projections onto l1 = (12/13, -5/13, 0) and its cyclic shifts."""
    l1 = np.array([12 / 13, -5 / 13, 0.0])
    l2 = np.array([0.0, 12 / 13, -5 / 13])
    l3 = np.array([-5 / 13, 0.0, 12 / 13])
    Qs = [np.outer(l, l.conj()) for l in (l1, l2, l3)]
    lam = 1.0 / 10.0
    B = bp_build(np.eye(3), [
        BlaschkeFactorSpec(lam, 1j, Qs[0]),
        BlaschkeFactorSpec(-lam, eps2, Qs[1]),
        BlaschkeFactorSpec(0.0, 1.0, Qs[2]),
    ])
    num = BivarPoly([[0.0, 1.0], [1.0, 0.0]])       # t + eta
    den = BivarPoly([[1.0]])
    F = compose_psi(ScalarBivarRational(num, den), B)
    classify_symbol(F)
    return F
