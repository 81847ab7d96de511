import numpy as np
import pytest

from qdsym import (BlaschkeFactorSpec, BoundaryPole, CPoly, CRatFun,
                   InvalidFactor, MatrixSymbol, ScalarBivarRational, BivarPoly,
                   bp_build, classify_symbol, compose_psi, fourier_coeffs)


def random_bp(rng, m, degree):
    factors = []
    for _ in range(degree):
        a = 0.8 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        xi = np.exp(2j * np.pi * rng.random())
        v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        v = v / np.linalg.norm(v)
        factors.append(BlaschkeFactorSpec(a, xi, np.outer(v, v.conj())))
    q, _ = np.linalg.qr(rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m)))
    return bp_build(q, factors)


def test_bp_trivial_shift():
    B = bp_build(np.eye(1), [BlaschkeFactorSpec(0.0, 1.0, np.eye(1))])
    t = np.exp(1j * np.linspace(0, 6, 11))
    assert np.abs(B(t)[..., 0, 0] - t).max() < 1e-14


def test_bp_invalid_factors():
    with pytest.raises(InvalidFactor):
        bp_build(np.eye(2), [BlaschkeFactorSpec(1.2, 1.0, np.eye(2))])
    with pytest.raises(InvalidFactor):
        bp_build(np.eye(2), [BlaschkeFactorSpec(0.1, 2.0, np.eye(2))])
    P = np.array([[0.5, 0.5], [0.2, 0.5]])        # not Hermitian
    with pytest.raises(InvalidFactor):
        bp_build(np.eye(2), [BlaschkeFactorSpec(0.1, 1.0, P)])
    with pytest.raises(InvalidFactor):
        bp_build(2 * np.eye(2), [])


def test_bp_example2_unitarity(ex2, rng):
    B = ex2.B
    t0 = np.exp(1j * np.pi / 3)
    val = B(np.array(t0))
    assert np.linalg.norm(val.conj().T @ val - np.eye(2)) < 1e-10
    t = np.exp(2j * np.pi * rng.random(32))
    vals = B(t)
    defect = np.linalg.norm(np.swapaxes(vals.conj(), -1, -2) @ vals - np.eye(2),
                            axis=(-2, -1)).max()
    assert defect < 1e-10


def test_bp_example3_well_formed(ex3F):
    assert ex3F.m == 3
    assert ex3F.flags.ndarn_member is True


def test_bp_boundary_unitarity_property(rng):
    # >= 50 randomized inner products stay unitary on the circle
    for k in range(50):
        m = int(rng.integers(1, 4))
        B = random_bp(rng, m, int(rng.integers(1, 5)))
        assert B.boundary_unitarity_defect(64, rng) < 1e-10


def test_bp_entries_match_evaluator(rng):
    B = random_bp(rng, 2, 3)
    S = B.as_symbol()
    t = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    assert np.abs(S.eval_entrywise(t) - B(t)).max() < 1e-10


def test_compose_identity_is_bp(ex2):
    eta = ScalarBivarRational(BivarPoly([[0.0, 1.0]]), BivarPoly([[1.0]]))
    F = compose_psi(eta, ex2.B)
    t = np.exp(1j * np.linspace(0.05, 6.2, 23))
    assert np.abs(F(t) - ex2.B(t)).max() < 1e-12
    assert np.abs(F.eval_entrywise(t) - ex2.B(t)).max() < 1e-9


def test_compose_example2_spectra(ex2):
    # eigenvalues of F(t0) equal z_pm(t0) from the scalar formula
    from qdsym import trace_z_branches
    br = trace_z_branches(ex2, 256)
    t0 = np.exp(0.7j)
    idx = np.argmin(np.abs(np.exp(1j * br.thetas) - t0))
    ev = np.linalg.eigvals(ex2.F(np.array(np.exp(1j * br.thetas[idx]))))
    want = {br.z_plus[idx], br.z_minus[idx]}
    for w in want:
        assert min(abs(e - w) for e in ev) < 1e-10


def test_compose_spectral_consistency_property(rng, ex2):
    # spec(F(t)) = {psi(t, eta_j)} at random boundary and interior points
    psi, B = ex2.psi, ex2.B
    F = ex2.F
    pts = np.concatenate([np.exp(2j * np.pi * rng.random(8)),
                          0.6 * np.exp(2j * np.pi * rng.random(8))])
    for t0 in pts:
        etas = np.linalg.eigvals(B(np.array(t0)))
        want = sorted(psi(t0, etas), key=lambda z: (z.real, z.imag))
        got = sorted(np.linalg.eigvals(F(np.array(t0))), key=lambda z: (z.real, z.imag))
        assert max(abs(a - b) for a, b in zip(got, want)) < 1e-8


def test_compose_psi_t_plus_eta_analytic(ex3F):
    assert ex3F.flags.analytic_closed_disc is True
    assert ex3F.m == 3


def test_classify_shift_all_true():
    F = MatrixSymbol.shift(1)
    flags = classify_symbol(F)
    assert flags.normal is True
    assert flags.analytic_closed_disc is True
    assert flags.nondegenerate is True
    assert flags.ndarn_member is True


def test_classify_constant_degenerate():
    F = MatrixSymbol.constant([[0.7 + 0.1j]])
    flags = classify_symbol(F)
    assert flags.nondegenerate is False
    assert flags.ndarn_member is False


def test_classify_example1_ndarn(ex1):
    assert ex1.F.flags.ndarn_member is True


def test_classify_jordan_not_normal():
    J = MatrixSymbol([[CRatFun.variable(), CRatFun.constant(1.0)],
                      [CRatFun.constant(0.0), CRatFun.variable()]])
    flags = classify_symbol(J)
    assert flags.normal is False


def test_classify_rotation_invariance(ex1, rng):
    # normal flag invariant under t -> xi t
    def rotate(F, xi):
        def sub(p):
            return CPoly([c * xi ** k for k, c in enumerate(p.float_coeffs())])
        return MatrixSymbol([[CRatFun(sub(e.num), sub(e.den)) for e in row]
                             for row in F.entries])
    for _ in range(5):
        xi = np.exp(2j * np.pi * rng.random())
        flags = classify_symbol(rotate(ex1.F, xi))
        assert flags.normal is True
        assert flags.ndarn_member is True


def test_fourier_shift():
    F = MatrixSymbol.shift(2)
    c = fourier_coeffs(F, -3, 3)
    assert np.abs(c[1] - np.eye(2)).max() < 1e-12
    for n in (-3, -2, -1, 0, 2, 3):
        assert np.abs(c[n]).max() < 1e-12


def test_fourier_example1_geometric(ex1):
    # oracle: term-by-term geometric series of beta/(t-a)
    a, be = ex1.a, ex1.beta
    c = fourier_coeffs(ex1.F, -4, 8)
    assert abs(c[0][0, 0] - (-be / a)) < 1e-12
    assert abs(c[1][0, 0] - (1 - be / a ** 2)) < 1e-12
    for n in range(2, 9):
        assert abs(c[n][0, 0] - (-be / a ** (n + 1))) < 1e-12
    for n in range(-4, 0):
        assert abs(c[n][0, 0]) < 1e-12


def test_fourier_example1_boundary_adjoint(ex1):
    # F_* = t^-1 + conj(be) t/(1 - conj(a) t): Laurent series in the annulus
    # containing the circle (pole at 1/conj(a) lies inside the disc)
    a, be = ex1.a, ex1.beta
    ab, bb = np.conj(a), np.conj(be)
    G = MatrixSymbol.from_scalar(ex1.Fstar)
    c = fourier_coeffs(G, -8, 4)
    assert abs(c[0][0, 0] - (-bb / ab)) < 1e-12
    assert abs(c[-1][0, 0] - (1 - bb / ab ** 2)) < 1e-12
    for n in range(2, 9):
        assert abs(c[-n][0, 0] - (-bb * ab ** (-n - 1))) < 1e-12
    for n in range(1, 5):
        assert abs(c[n][0, 0]) < 1e-12


def test_fourier_boundary_pole_raises():
    F = MatrixSymbol.from_scalar(CRatFun(CPoly([1.0]), CPoly([-1.0, 1.0])))
    with pytest.raises(BoundaryPole):
        fourier_coeffs(F, -2, 2)


def test_fourier_residue_vs_fft_property(rng):
    # 50 random rational scalar symbols, poles off the circle; the two
    # computation paths must agree (fourier_coeffs raises otherwise)
    for _ in range(50):
        n_in = int(rng.integers(0, 3))
        n_out = int(rng.integers(0, 3))
        poles = list(0.6 * np.sqrt(rng.random(n_in)) * np.exp(2j * np.pi * rng.random(n_in)))
        poles += list((1.4 + rng.random(n_out)) * np.exp(2j * np.pi * rng.random(n_out)))
        den = CPoly.from_roots(poles) if poles else CPoly([1.0])
        num = CPoly(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        F = MatrixSymbol.from_scalar(CRatFun(num, den, reduce=False))
        npoles = len(poles)
        fourier_coeffs(F, -(2 * npoles + 16), 2 * npoles + 16)


def test_boundary_adjoint_agrees_on_circle(ex2):
    G = ex2.F.boundary_adjoint()
    t = np.exp(2j * np.pi * np.linspace(0, 1, 37)[:-1])
    lhs = G.eval_entrywise(t)
    rhs = np.swapaxes(ex2.F(t).conj(), -1, -2)
    assert np.abs(lhs - rhs).max() < 1e-9
