import numpy as np
import pytest

from qdsym import (CPoly, CRatFun, MatrixSymbol, PreconditionViolation,
                   classify_symbol, hankel_section, normality_defect,
                   self_commutator_rank, toeplitz_section)
from qdsym.sections import hankel_of_adjoint


def test_toeplitz_shift_lower_shift_matrix():
    F = MatrixSymbol.shift(1)
    T = toeplitz_section(F, 3)
    want = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=complex)
    assert np.abs(T.mat - want).max() < 1e-12


def test_toeplitz_adjoint_relation(ex1):
    # section of F* equals the adjoint of the section of F, blockwise
    N = 6
    T = toeplitz_section(ex1.F, N)
    G = MatrixSymbol.from_scalar(ex1.Fstar)
    Ts = toeplitz_section(G, N)
    assert np.abs(Ts.mat - T.mat.conj().T).max() < 1e-10


def test_toeplitz_example1_entries(ex1):
    # oracle: closed-form geometric coefficients
    a, be = ex1.a, ex1.beta
    T = toeplitz_section(ex1.F, 8)
    for j in range(8):
        for k in range(8):
            n = j - k
            if n == 0:
                want = -be / a
            elif n == 1:
                want = 1 - be / a ** 2
            elif n >= 2:
                want = -be / a ** (n + 1)
            else:
                want = 0.0
            assert abs(T.mat[j, k] - want) < 1e-12


def test_toeplitz_linearity(ex1, rng):
    N = 5
    F1 = ex1.F
    F2 = MatrixSymbol.shift(1)
    s = CRatFun(F1.entries[0][0].num * CPoly([1.0]) + F1.entries[0][0].den * CPoly([0.0, 1.0]),
                F1.entries[0][0].den)
    Fsum = MatrixSymbol.from_scalar(s)      # F1 + t
    A = toeplitz_section(Fsum, N).mat
    B = toeplitz_section(F1, N).mat + toeplitz_section(F2, N).mat
    assert np.abs(A - B).max() < 1e-10


def test_hankel_analytic_is_zero(ex1):
    H = hankel_section(ex1.F, 6)
    assert np.abs(H.mat).max() < 1e-12


def test_hankel_boundary_adjoint_rank_two(ex1):
    # Kronecker: rank = total disc pole multiplicity (0 and 1/conj(a))
    G = MatrixSymbol.from_scalar(ex1.Fstar)
    for N in (4, 8, 12):
        H = hankel_section(G, N)
        sv = np.linalg.svd(H.mat, compute_uv=False)
        assert (sv > 1e-10 * sv[0]).sum() == 2
        assert sv[2] / sv[0] < 1e-10


def test_hankel_single_pole_rank_one():
    G = MatrixSymbol.from_scalar(CRatFun(CPoly([1.0]), CPoly([0.0, 1.0])))
    H = hankel_section(G, 5)
    sv = np.linalg.svd(H.mat, compute_uv=False)
    assert (sv > 1e-12 * sv[0]).sum() == 1


def test_commutator_shift_rank_one():
    F = MatrixSymbol.shift(1)
    classify_symbol(F)
    rep = self_commutator_rank(F, 16)
    assert rep.rank == 1
    assert rep.singular_values[1] < 1e-12


def test_commutator_example1(ex1):
    rep = self_commutator_rank(ex1.F, 32)
    assert rep.rank == 2
    assert rep.singular_values[2] / rep.singular_values[0] < 1e-9
    rep64 = self_commutator_rank(ex1.F, 64)
    assert rep64.rank == 2
    assert rep64.identity_residual is not None
    assert rep64.identity_residual < 1e-8


def test_commutator_example3_rank_stabilizes(ex3F):
    r1 = self_commutator_rank(ex3F, 48)
    r2 = self_commutator_rank(ex3F, 96)
    assert r1.rank == r2.rank
    assert r1.singular_values[r1.rank] / r1.singular_values[0] < 1e-10


def test_commutator_jordan_rank_grows():
    J = MatrixSymbol([[CRatFun.variable(), CRatFun.constant(1.0)],
                      [CRatFun.constant(0.0), CRatFun.variable()]])
    classify_symbol(J)
    ranks = [self_commutator_rank(J, N).rank for N in (8, 16, 32)]
    assert ranks[0] < ranks[1] < ranks[2]


def test_commutator_requires_analytic(ex1):
    G = MatrixSymbol.from_scalar(ex1.Fstar)
    classify_symbol(G)
    with pytest.raises(PreconditionViolation):
        self_commutator_rank(G, 8)


def test_normality_defect_compositions(ex2, ex3F):
    # any psi(t, B(t)) composition is normal on the circle
    assert normality_defect(ex2.F, 256) < 1e-9
    assert normality_defect(ex3F, 256) < 1e-9


def test_normality_defect_jordan_positive():
    J = MatrixSymbol([[CRatFun.variable(), CRatFun.constant(1.0)],
                      [CRatFun.constant(0.0), CRatFun.variable()]])
    assert normality_defect(J) > 0.1


def test_normality_defect_shift_zero():
    assert normality_defect(MatrixSymbol.shift(2)) < 1e-15


def test_hankel_of_adjoint_blocks(ex1):
    # blocks are conjugate transposes of positive Fourier coefficients
    from qdsym import fourier_coeffs
    N = 4
    H = hankel_of_adjoint(ex1.F, N)
    c = fourier_coeffs(ex1.F, 1, 2 * N - 1)
    for j in range(N):
        for k in range(N):
            assert abs(H.mat[j, k] - np.conj(c[j + k + 1][0, 0])) < 1e-12
