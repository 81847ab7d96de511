"""Matrix parameters (C, Lambda) of the subnormal Toeplitz operator.

Pipeline: the boundary adjoint G of an NDARN symbol is factored as
G = h alpha^{-1} with alpha a Blaschke-Potapov product whose zeros are the
disc poles of G (residue-killing, one elementary factor per remaining
pole); the model space M = H^2_m minus alpha H^2_m gets its explicit
orthonormal rational basis (Malmquist-Walsh); compressions of the
multiplication by G to M yield Lambda*, the Hankel part yields R and
C = R*R. The discriminant det(C - (w - Lambda*)(z - Lambda)) is expanded
as a real-type bivariate polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (EmptyModelSpace, FactorizationAmbiguous,
                     PreconditionViolation, QdsymError, SymmetryViolation)
from .exact import GaussianRational, is_exact
from .polys import BivarPoly, CPoly, CRatFun, bivar_fit, newton_polish
from .sections import hankel_section
from .symbols import (BlaschkeFactorSpec, BlaschkePotapov, MatrixSymbol,
                      classify_symbol)


@dataclass
class CoprimeFactorization:
    """F*(boundary) = h(t) alpha(t)^{-1} with alpha inner, h analytic, coprime."""

    alpha: BlaschkePotapov
    h: MatrixSymbol
    hankel_rank: int
    diagnostics: dict = field(default_factory=dict)


def _laurent_matrix(func, w, s, radius, K=256):
    """(1/2 pi i) contour integral of func(t) (t-w)^(s-1) dt around w."""
    th = 2 * np.pi * np.arange(K) / K
    ring = w + radius * np.exp(1j * th)
    rot = radius * np.exp(1j * th)
    vals = func(ring)
    return (vals * ((ring - w) ** (s - 1) * rot)[:, None, None]).mean(axis=0)


def _polish_pole(G: MatrixSymbol, w: complex) -> complex:
    """Refine a clustered pole location against the entry denominators."""
    best = w
    for row in G.entries:
        for e in row:
            den = e.den
            if den.degree == 0:
                continue
            if abs(den(w)) < 1e-4 * max(den.max_abs(), 1.0):
                cand = newton_polish(den, w, steps=8)
                if abs(cand - w) < 1e-4 * (1 + abs(w)):
                    best = cand
                    return best
    return best


def coprime_factorize(F: MatrixSymbol, tol: float = 1e-8) -> CoprimeFactorization:
    """Right coprime factorization of the boundary adjoint of F.

    alpha is built one elementary factor at a time: at each remaining disc
    pole of G * (factors so far), the leading Laurent coefficient A fixes
    the minimal projection with A(I-P) = 0, namely onto Range(A*). The
    total degree must reproduce the Hankel rank of G, otherwise
    FactorizationAmbiguous is raised with the singular value report.
    """
    flags = F.flags if F.flags is not None else classify_symbol(F)
    if flags.ndarn_member is not True:
        raise PreconditionViolation("coprime factorization needs an NDARN symbol")
    m = F.m
    G = F.boundary_adjoint()
    poles = G.poles_in_disc()
    total_mult = sum(mult for _, mult in poles)

    Nsec = min(max(2 * total_mult + 8, 12), 64)
    hsec = hankel_section(G, Nsec)
    sv = np.linalg.svd(hsec.mat, compute_uv=False)
    if sv[0] <= 0:
        hrank = 0
    else:
        rel = sv / sv[0]
        hrank = int((rel > 1e-8).sum())
        if hrank < len(rel) and not (rel[hrank] < 1e-6):
            raise FactorizationAmbiguous(
                "Hankel spectrum has no clear gap", singular_values=sv)

    gscale = G.frob_scale()
    eye = np.eye(m, dtype=complex)
    factors: list[BlaschkeFactorSpec] = []

    def current(t):
        vals = G(np.asarray(t, dtype=complex))
        for f in factors:
            b = f.xi * (t - f.a) / (1 - np.conj(f.a) * t)
            vals = vals @ (np.asarray(b)[..., None, None] * f.P + (eye - f.P))
        return vals

    pole_pts = [(_polish_pole(G, p), mult) for p, mult in poles]
    for w, mult in sorted(pole_pts, key=lambda pm: (abs(pm[0]), np.angle(pm[0]))):
        sep = min([abs(w - q) for q, _ in pole_pts if q != w] + [1 - abs(w)])
        radius = max(min(0.25 * sep, 0.1 * (1 + abs(w))), 1e-6)
        for _ in range(mult * m + 1):
            lead = None
            for s in range(mult, 0, -1):
                A = _laurent_matrix(current, w, s, radius)
                if np.linalg.norm(A) > tol * gscale:
                    lead = A
                    break
            if lead is None:
                break
            U, svA, Vh = np.linalg.svd(lead)
            rk = int((svA > 1e-8 * svA[0]).sum())
            Vr = Vh[:rk].conj().T
            P = Vr @ Vr.conj().T
            factors.append(BlaschkeFactorSpec(a=w, xi=1.0, P=P))
        else:
            raise FactorizationAmbiguous(
                f"pole at {w} not resolved by residue killing", singular_values=sv)

    alpha = BlaschkePotapov(np.eye(m, dtype=complex), factors)
    if alpha.degree != hrank:
        raise FactorizationAmbiguous(
            f"factor degree {alpha.degree} != Hankel rank {hrank}", singular_values=sv)

    alpha_sym = alpha.as_symbol()
    h_entries = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            acc = G.entries[i][0] * alpha_sym.entries[0][j]
            for k in range(1, m):
                acc = acc + G.entries[i][k] * alpha_sym.entries[k][j]
            h_entries[i][j] = acc

    def h_eval(t):
        return G(np.asarray(t, complex)) @ alpha(np.asarray(t, complex))

    h = MatrixSymbol(h_entries, evaluator=h_eval)

    # h must be analytic: negative Fourier coefficients vanish
    nfft = 4096
    t = np.exp(2j * np.pi * np.arange(nfft) / nfft)
    ch = np.fft.fft(h(t), axis=0) / nfft
    neg = max(np.abs(ch[-n]).max() for n in range(1, 2 * alpha.degree + 16))
    if neg > 1e-9 * (1 + gscale):
        raise FactorizationAmbiguous(
            f"h = G alpha is not analytic (negative coefficient {neg:.2e})",
            singular_values=sv)

    # right coprimality at the zeros of det alpha (entrywise: the evaluator
    # would split G * alpha into singular factors exactly there)
    coprime_ok = True
    for f in factors:
        M = np.vstack([alpha(np.array(f.a)), h.eval_entrywise(np.array(f.a))])
        smin = np.linalg.svd(M, compute_uv=False)[-1]
        if smin < 1e-10 * (1 + gscale):
            coprime_ok = False
    return CoprimeFactorization(alpha, h, hrank, {
        "hankel_singular_values": sv[:2 * hrank + 4],
        "negative_coefficient": neg,
        "coprime_ok": coprime_ok,
        "pole_list": pole_pts,
    })


# ---------------------------------------------------------------------------
# model space
# ---------------------------------------------------------------------------

class ModelBasis:
    """Orthonormal rational basis of H^2_m minus alpha H^2_m (Malmquist-Walsh).

    Element for factor n and unit vector u in Range(P_n):
        e(t) = v B_0(t) ... B_{n-1}(t) u sqrt(1-|a_n|^2) / (1 - conj(a_n) t).
    """

    def __init__(self, alpha: BlaschkePotapov):
        if alpha.degree == 0:
            raise EmptyModelSpace("constant inner function has trivial model space")
        self.alpha = alpha
        self.m = alpha.m
        self._parts = []            # (prefix BlaschkePotapov, a, u)
        self.elements: list[list[CRatFun]] = []
        for n, f in enumerate(alpha.factors):
            vecs = _range_basis(f.P)
            prefix = alpha.partial_product(n)
            Np, dp = prefix.entries()
            k = float(np.sqrt(1 - abs(f.a) ** 2))
            kern = CRatFun(CPoly([k]), CPoly([1.0, -np.conj(f.a)]))
            for u in vecs:
                self._parts.append((prefix, f.a, u))
                comps = []
                for i in range(self.m):
                    acc = CPoly([0.0])
                    for j in range(self.m):
                        acc = acc + Np.entries[i][j] * CPoly([u[j]])
                    comps.append(CRatFun(acc, dp) * kern)
                self.elements.append(comps)

    def __len__(self):
        return len(self.elements)

    def evaluate(self, t) -> np.ndarray:
        """Values of all basis elements: shape (dimM,) + t.shape + (m,)."""
        t = np.asarray(t, dtype=complex)
        out = np.zeros((len(self),) + t.shape + (self.m,), dtype=complex)
        for idx, (prefix, a, u) in enumerate(self._parts):
            k = np.sqrt(1 - abs(a) ** 2)
            kern = k / (1 - np.conj(a) * t)
            out[idx] = prefix(t) @ u * kern[..., None]
        return out

    def gram(self, nfft: int = 4096) -> np.ndarray:
        t = np.exp(2j * np.pi * np.arange(nfft) / nfft)
        E = self.evaluate(t)                      # (d, nfft, m)
        return np.einsum("ina,jna->ij", E, E.conj()) / nfft


def _range_basis(P: np.ndarray) -> list[np.ndarray]:
    """Orthonormal basis of Range(P) with a deterministic phase convention."""
    w, V = np.linalg.eigh(P)
    out = []
    for i in range(len(w)):
        if w[i] > 0.5:
            u = V[:, i]
            j = int(np.argmax(np.abs(u)))
            u = u * np.exp(-1j * np.angle(u[j]))
            out.append(u)
    return out


def model_basis(alpha: BlaschkePotapov, gram_tol: float = 1e-9) -> ModelBasis:
    """Validated Malmquist-Walsh basis; Gram matrix must be I within tolerance."""
    basis = ModelBasis(alpha)
    G = basis.gram()
    defect = float(np.abs(G - np.eye(len(basis))).max())
    if defect > gram_tol:
        raise QdsymError(f"model basis Gram defect {defect:.2e} exceeds {gram_tol:g}")
    return basis


# ---------------------------------------------------------------------------
# matrix parameters
# ---------------------------------------------------------------------------

@dataclass
class SubnormalParams:
    """dim M, the model basis, and the matrices Lambda, R, C = R*R."""

    dimM: int
    basis: ModelBasis
    Lambda: np.ndarray
    R: np.ndarray
    C: np.ndarray
    image_basis: str = "reflected-model-basis"
    diagnostics: dict = field(default_factory=dict)

    @property
    def Lambda_star(self) -> np.ndarray:
        return self.Lambda.conj().T

    @property
    def nodes(self) -> np.ndarray:
        return np.linalg.eigvals(self.Lambda)

    @property
    def area(self) -> float:
        return area_from_C(self.C)


def matrix_parameters(F: MatrixSymbol, nfft: int = 4096) -> SubnormalParams:
    """Compute (C, Lambda) of the subnormal operator attached to F.

    Lambda* is the compression of multiplication by the boundary adjoint G
    to the model space; R collects the anti-analytic parts of G e_j in the
    reflected basis J e_i (coefficientwise conjugate reflection), which is
    the classical explicit choice and makes R reproducible. If the
    reflected basis fails to span the Hankel image, the left singular
    basis of the stacked coefficients is used instead.
    """
    fact = coprime_factorize(F)
    basis = model_basis(fact.alpha)
    d = len(basis)
    m = F.m
    G = F.boundary_adjoint()

    t = np.exp(2j * np.pi * np.arange(nfft) / nfft)
    E = basis.evaluate(t)                          # (d, nfft, m)
    Gv = G(t)                                      # (nfft, m, m)
    GE = np.einsum("nab,jnb->jna", Gv, E)          # (d, nfft, m)

    cE = np.fft.fft(E, axis=1) / nfft              # coefficients of e_j
    cGE = np.fft.fft(GE, axis=1) / nfft

    half = nfft // 2
    pos = np.arange(0, half)                        # n >= 0
    neg = np.arange(1, half)                        # represents n = -1 .. -(half-1)

    # Lambda*_{ij} = <P_+(G e_j), e_i>
    Lam_star = np.einsum("jna,ina->ij", cGE[:, pos, :], cE[:, pos, :].conj())

    # R_{ij} = <Gamma e_j, J e_i>: the coefficient of G e_j at n = -(k+1)
    # pairs with the coefficient of e_i at k; the reflection J supplies the
    # conjugation, so none is applied after pairing.
    negGE = cGE[:, -neg, :]                         # slot k-1 holds n = -k
    R = np.einsum("jka,ika->ij", negGE, cE[:, :half - 1, :])

    # C_{ij} = <Gamma e_j, Gamma e_i>
    C = np.einsum("jka,ika->ij", negGE, negGE.conj())

    image_basis = "reflected-model-basis"
    defect = float(np.linalg.norm(C - R.conj().T @ R))
    if defect > 1e-10 * (1 + np.linalg.norm(C)):
        # fall back: orthonormal image basis from the SVD of the stacked
        # anti-analytic coefficients
        X = negGE.reshape(d, -1).T                  # (neg*m, d)
        U, s, Vh = np.linalg.svd(X, full_matrices=False)
        R = (U.conj().T @ X)[:d, :]
        image_basis = "hankel-svd"
        defect = float(np.linalg.norm(C - R.conj().T @ R))

    herm = float(np.linalg.norm(C - C.conj().T))
    if herm > 1e-10 * (1 + np.linalg.norm(C)):
        raise QdsymError(f"C not Hermitian within tolerance ({herm:.2e})")
    C = 0.5 * (C + C.conj().T)
    evC = np.linalg.eigvalsh(C)
    if evC.min() < -1e-10 * max(1.0, evC.max()):
        raise QdsymError(f"C has negative eigenvalue {evC.min():.2e}")

    Lambda = Lam_star.conj().T
    return SubnormalParams(
        dimM=d, basis=basis, Lambda=Lambda, R=R, C=C, image_basis=image_basis,
        diagnostics={
            "c_rr_defect": defect,
            "hankel_rank": fact.hankel_rank,
            "alpha_zeros": fact.alpha.det_zeros(),
            "factorization": fact.diagnostics,
        })


# ---------------------------------------------------------------------------
# discriminant curve
# ---------------------------------------------------------------------------

@dataclass
class DiscriminantCurve:
    Q: BivarPoly
    source: object
    symmetry_defect: float

    def __call__(self, z, w):
        return self.Q(z, w)


def discriminant_poly(params, tol: float = 1e-8) -> DiscriminantCurve:
    """Q(z,w) = det(C - (w - Lambda*)(z - Lambda)) as a bivariate polynomial.

    Accepts SubnormalParams or a (C, Lambda) pair; exact Gaussian-rational
    matrices stay exact. Re-checks the real-type symmetry a_kj = conj(a_jk)
    and raises SymmetryViolation beyond tolerance, which signals corrupted
    upstream numerics.
    """
    if isinstance(params, SubnormalParams):
        C, Lam = params.C, params.Lambda
        source = params
    else:
        C, Lam = params
        source = (C, Lam)

    exact = _matrix_is_exact(C) and _matrix_is_exact(Lam)
    if exact:
        backend = "exact"
        d = len(C)
        Lam_star = [[Lam[j][i].conjugate() for j in range(d)] for i in range(d)]
        LsL = [[_dote(Lam_star, Lam, i, j) for j in range(d)] for i in range(d)]

        def entry(i, j):
            zero, one = GaussianRational(0), GaussianRational(1)
            dd = -one if i == j else zero
            return BivarPoly([[C[i][j] - LsL[i][j], Lam[i][j]],
                              [Lam_star[i][j], dd]])
    else:
        C = np.asarray(C, dtype=complex)
        Lam = np.asarray(Lam, dtype=complex)
        backend = "float"
        d = C.shape[0]
        Lam_star = Lam.conj().T
        LsL = Lam_star @ Lam

        def entry(i, j):
            delta = 1.0 if i == j else 0.0
            return BivarPoly([[C[i, j] - LsL[i, j], Lam[i, j]],
                              [Lam_star[i, j], -delta]])

    M = [[entry(i, j) for j in range(d)] for i in range(d)]
    Q = _bivar_det(M, backend)
    defect = Q.real_type_defect()
    scale = 1.0 if backend == "exact" else max(float(np.abs(Q.float_coeffs()).max()), 1e-300)
    if defect > tol * scale:
        raise SymmetryViolation(
            f"discriminant symmetry defect {defect:.2e} beyond {tol:g}")
    return DiscriminantCurve(Q, source, defect)


def _matrix_is_exact(M) -> bool:
    try:
        return all(is_exact(x) for row in M for x in row)
    except TypeError:
        return False


def _dote(A, B, i, j):
    acc = GaussianRational(0)
    for k in range(len(B)):
        acc = acc + A[i][k] * B[k][j]
    return acc


def _bivar_det(M, backend):
    d = len(M)
    if d == 1:
        return M[0][0]
    if d <= 4:
        acc = None
        for j in range(d):
            minor = [row[:j] + row[j + 1:] for row in M[1:]]
            term = M[0][j] * _bivar_det(minor, backend)
            if j % 2:
                term = -term
            acc = term if acc is None else acc + term
        return acc
    # large model spaces: numeric evaluation + interpolation
    def ev(z, w):
        V = np.array([[M[i][j](z, w) for j in range(d)] for i in range(d)])
        return np.linalg.det(V)

    return bivar_fit(ev, d, d).poly


def area_from_C(C) -> float:
    """pi * trace(C): the Helton-Howe / Carey-Pincus area of the domain."""
    C = np.asarray(C, dtype=complex)
    if np.linalg.norm(C - C.conj().T) > 1e-10 * (1 + np.linalg.norm(C)):
        raise PreconditionViolation("C must be Hermitian")
    tr = np.trace(C)
    if abs(tr.imag) > 1e-12 * (1 + abs(tr.real)):
        raise PreconditionViolation(f"trace has imaginary residue {tr.imag:.2e}")
    return float(np.pi * tr.real)
