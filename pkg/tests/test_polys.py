import warnings
from fractions import Fraction

import numpy as np
import pytest

from qdsym import (BivarPoly, CPoly, CRatFun, DegenerateInput, GaussianRational,
                   bivar_fit, poly_roots, resultant)
from qdsym.errors import ConditioningError, LeadingDropWarning
from qdsym.exact import gr
from qdsym.polys import lagrange_interpolate, resultant_numeric, sylvester_det_fixed


def test_roots_pure_imaginary_pair():
    roots = poly_roots(CPoly([1.0, 0.0, 1.0]))        # t^2 + 1
    got = sorted((r for r, m in roots), key=lambda z: z.imag)
    assert all(m == 1 for _, m in roots)
    assert abs(got[0] + 1j) < 1e-12 and abs(got[1] - 1j) < 1e-12


def test_roots_example2_discriminant_contains_paper_root():
    lam, a, c = 0.8j, 5 / 13, 12 / 13
    lb = np.conj(lam)
    p = CPoly([1, 0, -lb ** 2])
    r = CPoly([-lam ** 2, 0, 1])
    q = CPoly([c * c * (1 - lam ** 2), 2 * a * a * (1 - abs(lam) ** 2),
               c * c * (1 - lb ** 2)])
    D = q * q - 4.0 * p * r
    roots = [z for z, _ in poly_roots(D)]
    assert min(abs(z - (0.0729 - 0.6467j)) for z in roots) < 1e-3


def test_roots_random_monic_degree5_residual(rng):
    # oracle: direct evaluation of p at each returned root
    for _ in range(10):
        coeffs = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        p = CPoly(list(coeffs) + [1.0])
        for root, mult in poly_roots(p):
            assert abs(p(root)) < 1e-8 * p.max_abs()


def test_roots_multiplicities():
    p = CPoly.from_roots([0.5, 0.5, 0.5, -2.0])
    got = poly_roots(p)
    md = {m for _, m in got}
    assert md == {1, 3}
    triple = next(r for r, m in got if m == 3)
    assert abs(triple - 0.5) < 1e-9


def test_roots_degenerate_input():
    with pytest.raises(DegenerateInput):
        poly_roots(CPoly([3.0]))


def test_resultant_linear_factors():
    # Res_t(t - s, t - b) is linear in the parameter s and vanishes at s = b
    f = [CPoly([0.0, -1.0]), CPoly([1.0])]               # t - s
    res = resultant(f, [CPoly([-2.0]), CPoly([1.0])])    # t - 2
    assert res.degree == 1
    assert abs(res(2.0)) < 1e-10
    assert abs(res(0.5) / (0.5 - 2.0) - res(3.0) / (3.0 - 2.0)) < 1e-10


def test_resultant_substitution():
    # Res_t(t^2 - s, t - 1) = 1 - s
    f = [CPoly([0.0, -1.0]), CPoly([0.0]), CPoly([1.0])]
    g = [CPoly([-1.0]), CPoly([1.0])]
    res = resultant(f, g)
    for s in (0.3, 2.0, -1.5 + 0.2j):
        assert abs(res(s) - (1 - s)) < 1e-9 * (1 + abs(s))


def test_resultant_planted_common_root(rng):
    # oracle: plant a common factor (t - c) at s = s0, evaluate there
    s0 = 0.7 - 0.4j
    c = 1.3 + 0.2j
    # f = (t - c)(t^2 + 2), coefficients constant in s
    f_poly = CPoly.from_roots([c]) * CPoly([2.0, 0.0, 1.0])
    f = [CPoly([x]) for x in f_poly.coeffs]
    # g = (t - c) + (s - s0) * (t^2 + 1): shares root c exactly at s = s0
    g = [CPoly([-c + (-s0) * 1.0, 1.0]), CPoly([1.0]), CPoly([-s0, 1.0])]
    # rewrite: coeff_t0 = -c + (s - s0), coeff_t1 = 1, coeff_t2 = (s - s0)
    g = [CPoly([-c - s0, 1.0]), CPoly([1.0]), CPoly([-s0, 1.0])]
    res = resultant(f, g)
    assert abs(res(s0)) < 1e-8 * (1 + res.max_abs())


def test_resultant_bilinearity(rng):
    # Res(f, g*h) = Res(f,g) * Res(f,h) on random degree-<=3 instances
    for _ in range(8):
        f = CPoly(rng.standard_normal(4) + 1j * rng.standard_normal(4))
        g = CPoly(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        h = CPoly(rng.standard_normal(4) + 1j * rng.standard_normal(4))
        lhs = resultant_numeric(f, g * h)
        rhs = resultant_numeric(f, g) * resultant_numeric(f, h)
        assert abs(lhs - rhs) <= 1e-6 * max(1.0, abs(lhs), abs(rhs))


def test_resultant_exact_reproducible():
    one = GaussianRational(1)
    f = [CPoly([gr(Fraction(1, 3)), -one]), CPoly([one]), CPoly([gr(2)])]
    g = [CPoly([gr(0, 1)]), CPoly([one, gr(Fraction(-2, 7))])]
    r1 = resultant(f, g)
    r2 = resultant(f, g)
    assert r1.backend == "exact"
    assert all((a - b).is_zero() for a, b in zip(r1.coeffs, r2.coeffs))


def test_resultant_leading_drop_warning():
    f = [CPoly([1.0]), CPoly([1.0]), CPoly([0.0])]
    g = [CPoly([2.0]), CPoly([1.0])]
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        resultant(f, g)
    assert any(issubclass(x.category, LeadingDropWarning) for x in w)


def test_sylvester_fixed_degree_keeps_polynomiality():
    # at z = 1 the leading coefficient vanishes; the fixed-degree value is
    # the evaluation of the same polynomial, not a lower-degree resultant
    def f(z):
        return [1.0, 0.0, z - 1.0]
    g = [2.0, 1.0]
    vals = [sylvester_det_fixed(f(z), g) for z in (0.5, 1.0, 1.5)]
    # det is linear in z here: midpoint identity
    assert abs(vals[1] - 0.5 * (vals[0] + vals[2])) < 1e-12


def test_cratfun_reduction_idempotent(rng):
    for _ in range(6):
        common = CPoly.from_roots([0.4 + 0.1j])
        num = CPoly(rng.standard_normal(3) + 1j * rng.standard_normal(3)) * common
        den = CPoly.from_roots([1.7, -0.2j]) * common
        f1 = CRatFun(num, den)
        f2 = CRatFun(f1.num, f1.den)
        assert f1.num.degree == f2.num.degree
        assert f1.den.degree == f2.den.degree
        t = np.exp(1j * np.linspace(0.1, 6.0, 13))
        assert np.abs(f1(t) - f2(t)).max() < 1e-9


def test_cratfun_cancels_multiple_roots():
    # triple root in the numerator against a double pole
    num = CPoly.from_roots([0.5, 0.5, 0.5, 2.0])
    den = CPoly.from_roots([0.5, 0.5, -3.0])
    f = CRatFun(num, den)
    assert f.num.degree == 2 and f.den.degree == 1
    assert abs(f(0.5)) < 1e-8


def test_exact_gcd_and_arithmetic():
    one = GaussianRational(1)
    a = CPoly([gr(-1), one]) * CPoly([gr(2), one])      # (t-1)(t+2)
    b = CPoly([gr(-1), one]) * CPoly([gr(0, -1), one])  # (t-1)(t-i)... sign
    g = a.gcd(b)
    assert g.degree == 1
    assert g(gr(1)).is_zero()
    q, r = divmod(a, g)
    assert r.is_zero()


def test_exact_closed_under_ops():
    p = CPoly([gr(Fraction(1, 2)), gr(0, Fraction(1, 3))])
    q = CPoly([gr(2), gr(1), gr(Fraction(-3, 4))])
    assert (p + q).backend == "exact"
    assert (p * q).backend == "exact"
    assert p.gcd(q).backend == "exact"


def test_bivar_fit_rank_one():
    fit = bivar_fit(lambda z, w: 1.0 - z * w, 1, 1)
    A = fit.poly.float_coeffs()
    assert abs(A[0, 0] - 1.0) < 1e-12
    assert abs(A[1, 1] + 1.0) < 1e-12
    assert abs(A[0, 1]) < 1e-12 and abs(A[1, 0]) < 1e-12
    assert fit.validation_residual < 1e-12


def test_bivar_fit_zero():
    fit = bivar_fit(lambda z, w: 0.0, 2, 2)
    assert np.abs(fit.poly.float_coeffs()).max() == 0.0


def test_bivar_fit_conditioning_error():
    with pytest.raises(ConditioningError):
        bivar_fit(lambda z, w: z * w, 12, 12, radius=1e-3)


def test_bivar_real_type_and_symmetrize():
    # real-type example: 1 - zw plus an off-diagonal conjugate pair
    Q = BivarPoly([[1.0, 2.0 + 1j], [2.0 - 1j, -1.0]])
    assert Q.real_type_defect() < 1e-15
    Qs = BivarPoly([[1j * 1.0, 1j * (2.0 + 1j)], [1j * (2.0 - 1j), -1j]])
    sym, defect = Qs.symmetrize()
    assert defect < 1e-12


def test_lagrange_exact_roundtrip():
    nodes = [gr(0), gr(1), gr(-1)]
    p = CPoly([gr(Fraction(1, 7)), gr(0, 2), gr(3)])
    vals = [p(x) for x in nodes]
    q = lagrange_interpolate(nodes, vals, backend="exact")
    assert all((a - b).is_zero() for a, b in zip(p.coeffs, q.coeffs))


def test_poly_reversed_and_conj():
    p = CPoly([1.0, 2.0 + 1j])
    rev = p.reversed(2)                 # t^2 * p(1/t) = t^2 + (2+i) t
    assert np.allclose(rev.float_coeffs(), [0.0, 2.0 + 1j, 1.0])
    pc = p.conj()
    assert np.allclose(pc.float_coeffs(), [1.0, 2.0 - 1j])
