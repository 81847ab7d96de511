"""Finite sections of vector Toeplitz and Hankel operators.

Self-commutator rank experiments: for an analytic normal rational symbol
the commutator [T*, T] has finite rank equal to the Hankel rank of the
boundary adjoint, and the identity

    T*T - TT* = Hankel(F*)^* Hankel(F*)

holds exactly in infinite dimensions; on sections it holds on the
interior sub-block away from the truncation boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionViolation
from .symbols import MatrixSymbol, classify_symbol, fourier_coeffs


@dataclass
class OperatorSection:
    N: int
    m: int
    mat: np.ndarray
    kind: str                      # toeplitz | hankel | commutator

    def block(self, j: int, k: int) -> np.ndarray:
        m = self.m
        return self.mat[j * m:(j + 1) * m, k * m:(k + 1) * m]


@dataclass
class SectionRankReport:
    N: int
    m: int
    rank: int
    singular_values: np.ndarray
    identity_residual: float | None = None
    details: dict = field(default_factory=dict)


def toeplitz_section(F: MatrixSymbol, N: int) -> OperatorSection:
    """Block Toeplitz section: block (j,k) = Fourier coefficient c_{j-k}."""
    if N < 1:
        raise PreconditionViolation("N >= 1 required")
    c = fourier_coeffs(F, -(N - 1), N - 1)
    m = F.m
    mat = np.zeros((N * m, N * m), dtype=complex)
    for j in range(N):
        for k in range(N):
            mat[j * m:(j + 1) * m, k * m:(k + 1) * m] = c[j - k]
    return OperatorSection(N, m, mat, "toeplitz")


def hankel_section(F: MatrixSymbol, N: int) -> OperatorSection:
    """Block Hankel section: block (j,k) = c_{-(j+k+1)}.

    Row j corresponds to the basis vector t^(-j-1) of the anti-analytic
    half; for a symbol analytic on the closed disc the section vanishes.
    """
    if N < 1:
        raise PreconditionViolation("N >= 1 required")
    c = fourier_coeffs(F, -(2 * N - 1), -1)
    m = F.m
    mat = np.zeros((N * m, N * m), dtype=complex)
    for j in range(N):
        for k in range(N):
            mat[j * m:(j + 1) * m, k * m:(k + 1) * m] = c[-(j + k + 1)]
    return OperatorSection(N, m, mat, "hankel")


def hankel_of_adjoint(F: MatrixSymbol, N: int) -> OperatorSection:
    """Hankel section of the boundary adjoint F*: block (j,k) = c_{j+k+1}(F)^*."""
    c = fourier_coeffs(F, 1, 2 * N - 1)
    m = F.m
    mat = np.zeros((N * m, N * m), dtype=complex)
    for j in range(N):
        for k in range(N):
            mat[j * m:(j + 1) * m, k * m:(k + 1) * m] = c[j + k + 1].conj().T
    return OperatorSection(N, m, mat, "hankel")


def analytic_bandwidth(F: MatrixSymbol, N: int, tol: float = 1e-12) -> int:
    """First index d with ||c_n|| < tol for all n >= d (capped at N-1)."""
    c = fourier_coeffs(F, 0, N - 1)
    d = N - 1
    while d > 0 and np.abs(c[d]).max() < tol:
        d -= 1
    return min(d + 1, N - 1)


def _defect_symbol_coeffs(F: MatrixSymbol, N: int, nfft: int = 4096) -> dict[int, np.ndarray]:
    """Fourier coefficients of F*F - FF* on the circle (zero for normal F)."""
    t = np.exp(2j * np.pi * np.arange(nfft) / nfft)
    vals = F(t)
    valsH = np.swapaxes(vals.conj(), -1, -2)
    comm = valsH @ vals - vals @ valsH
    ch = np.fft.fft(comm, axis=0) / nfft
    return {n: ch[n % nfft] for n in range(-(N - 1), N)}


def self_commutator_rank(F: MatrixSymbol, N: int, tol: float = 1e-8) -> SectionRankReport:
    """SVD rank of the self-commutator [T*, T] on the N-section.

    The commutator is assembled through the operator identity
    T*T - TT* = Hankel(F*)^* Hankel(F*) + Toeplitz(F*F - FF*), whose
    finite sections converge entrywise with only exponentially small
    truncation error. (The raw section product T_N* T_N - T_N T_N*
    carries an O(1) corner defect from the cut-off, which would mask the
    true finite rank; it is still used for the interior-block consistency
    check below.)
    """
    flags = F.flags if F.flags is not None else classify_symbol(F)
    if flags.analytic_closed_disc is not True:
        raise PreconditionViolation("symbol must be analytic on the closed disc")
    m = F.m
    G = hankel_of_adjoint(F, N).mat
    K = G.conj().T @ G
    if flags.normal is not True:
        dc = _defect_symbol_coeffs(F, N)
        Tsec = np.zeros((N * m, N * m), dtype=complex)
        for j in range(N):
            for k in range(N):
                Tsec[j * m:(j + 1) * m, k * m:(k + 1) * m] = dc[j - k]
        K = K + Tsec
    sv = np.linalg.svd(K, compute_uv=False)
    rank = int((sv > tol * sv[0]).sum()) if sv[0] > 0 else 0

    residual = None
    details = {}
    if flags.normal is True:
        T = toeplitz_section(F, N).mat
        Kraw = T.conj().T @ T - T @ T.conj().T
        d = analytic_bandwidth(F, N)
        r = (N - d) * m
        details["bandwidth"] = d
        if r > 0:
            residual = float(np.linalg.norm(Kraw[:r, :r] - K[:r, :r]))
            if residual > 1e-8 * max(1.0, float(sv[0])):
                details["identity_warning"] = residual
    return SectionRankReport(N, F.m, rank, sv, residual, details)


def normality_defect(F: MatrixSymbol, samples: int = 256) -> float:
    """max over boundary samples of ||F F* - F* F|| / (1 + ||F||^2)."""
    t = np.exp(2j * np.pi * np.arange(samples) / samples)
    vals = F(t)
    valsH = np.swapaxes(vals.conj(), -1, -2)
    comm = vals @ valsH - valsH @ vals
    num = np.linalg.norm(comm, ord=2, axis=(-2, -1))
    den = 1.0 + np.linalg.norm(vals, ord=2, axis=(-2, -1)) ** 2
    return float((num / den).max())
