import numpy as np
import pytest

from qdsym import (CPoly, CRatFun, GridSpec, MatrixSymbol, PreconditionViolation,
                   TooCloseToBoundary, classify_symbol, membership,
                   trace_branches, verify_generates_domain, winding_from_trace,
                   winding_grid, winding_number)


def scalar_symbol(num, den=None):
    F = MatrixSymbol.from_scalar(CRatFun(CPoly(num), CPoly(den or [1.0])))
    classify_symbol(F)
    return F


def test_trace_identity_matrix_coincident_circles():
    F = MatrixSymbol.shift(2)
    classify_symbol(F)
    tr = trace_branches(F, n_init=128)
    assert tr.m == 2
    assert tr.component_count == 1          # coincident circles merge
    assert len(tr.cycles) == 2              # but two branches remain


def test_trace_multiset_matches_spectrum(ex2, ex2_trace):
    idx = np.linspace(0, len(ex2_trace.thetas) - 1, 17).astype(int)
    for i in idx:
        th = ex2_trace.thetas[i]
        ev = np.linalg.eigvals(ex2.F(np.exp(1j * th)))
        got = sorted(ex2_trace.branches[:, i], key=lambda z: (z.real, z.imag))
        want = sorted(ev, key=lambda z: (z.real, z.imag))
        assert max(abs(a - b) for a, b in zip(got, want)) < 1e-8


def test_trace_example2_two_disjoint_curves(ex2, ex2_trace):
    assert ex2_trace.component_count == 2
    # pointwise product of the two branches is 1 on the circle
    prod = ex2_trace.branches[0] * ex2_trace.branches[1]
    assert np.abs(prod - 1.0).max() < 1e-8


def test_trace_example3_three_components(ex3F):
    tr = trace_branches(ex3F, n_init=512)
    assert tr.component_count == 3
    # each branch traverses its own component positively
    for j in range(3):
        b = tr.branches[j]
        interior = b.mean()
        total = np.sum(np.angle((b[1:] - interior) / (b[:-1] - interior)))
        assert total > 0


def test_trace_requires_min_samples(ex1):
    with pytest.raises(PreconditionViolation):
        trace_branches(ex1.F, n_init=16)


def test_winding_trivial():
    F = scalar_symbol([0.0, 1.0])
    assert winding_number(F, 0.0) == 1
    assert winding_number(F, 2.0) == 0


def test_winding_double_cover():
    F = scalar_symbol([0.0, 0.0, 1.0])
    assert winding_number(F, 0.0) == 2


def test_winding_example1_interior(ex1):
    z0 = ex1.Fexpr(0.0)                     # = -beta/a, interior point
    assert winding_number(ex1.F, z0) == 1


def test_winding_too_close(ex1):
    z_on = complex(ex1.trace.branches[0][17])
    with pytest.raises(TooCloseToBoundary):
        winding_number(ex1.F, z_on, trace=ex1.trace)


def test_winding_matches_trace_sum(ex1, ex2, ex2_trace, ex3F, rng):
    cases = [(ex1.F, ex1.trace), (ex2.F, ex2_trace),
             (ex3F, trace_branches(ex3F, n_init=512))]
    for F, tr in cases:
        x0, x1, y0, y1 = tr.bounding_box(0.4)
        pts = []
        while len(pts) < 16:
            z = complex(rng.uniform(x0, x1), rng.uniform(y0, y1))
            if np.abs(tr.all_points() - z).min() > 0.05 * tr.diameter():
                pts.append(z)
        for z in pts:
            assert winding_number(F, z, trace=tr) == winding_from_trace(tr, z)


def test_winding_counts_preimages_lemma(ex1, rng):
    # for lambda off the curve, the winding equals the number of t in the
    # disc solving F(t) = lambda (root counting on the numerator)
    F, tr = ex1.F, ex1.trace
    num, den = ex1.Fexpr.num, ex1.Fexpr.den
    for _ in range(12):
        lam = complex(rng.uniform(-1.5, 2.5), rng.uniform(-1.5, 1.5))
        if np.abs(tr.all_points() - lam).min() < 0.08:
            continue
        shifted = num - CPoly([lam]) * den
        from qdsym import poly_roots
        count = sum(m for r, m in poly_roots(shifted) if abs(r) < 1)
        assert winding_number(F, lam, trace=tr) == count


def test_domain_example1(ex1):
    rep = verify_generates_domain(ex1.F, GridSpec(nx=256, ny=256), trace=ex1.trace)
    assert rep.conditions == (True, True, True)
    assert rep.connectivity_estimate == 0
    assert rep.interior_count > 0


def test_domain_example2(ex2, ex2_trace):
    rep = verify_generates_domain(ex2.F, GridSpec(nx=256, ny=256), trace=ex2_trace)
    assert rep.conditions == (True, True, True)
    assert rep.connectivity_estimate == 1


def test_domain_double_cover_fails():
    F = scalar_symbol([0.0, 0.0, 1.0])
    rep = verify_generates_domain(F, GridSpec(nx=128, ny=128))
    assert not rep.passed
    assert 2 in rep.details["winding_values"]


def test_domain_requires_classification():
    F = MatrixSymbol.constant([[1.0]])
    classify_symbol(F)
    with pytest.raises(PreconditionViolation):
        verify_generates_domain(F)


def test_membership_trivial():
    F = scalar_symbol([0.0, 1.0])
    tr = trace_branches(F, n_init=128)
    assert membership(F, 0.0, 1e-6, tr) == "interior"
    assert membership(F, 1.0, 1e-6, tr) == "boundary"
    assert membership(F, 3.0, 1e-6, tr) == "exterior"


def test_membership_example2_against_polygon(ex2, ex2_trace):
    # oracle: point-in-polygon on the two densely sampled branch curves
    from qdsym import trace_z_branches
    br = trace_z_branches(ex2, 2048)
    for z in (0.0, 0.2 + 0.1j, 2.0 + 1.0j, -8.0):
        got = membership(ex2.F, z, 1e-6, ex2_trace)
        w_out = _poly_wind(br.z_plus, z)
        w_in = _poly_wind(br.z_minus, z)
        inside = (w_out + w_in) == 1
        assert (got == "interior") == inside


def _poly_wind(poly, z):
    return int(round(np.sum(np.angle((poly[1:] - z) / (poly[:-1] - z))) / (2 * np.pi)))


def test_winding_local_constancy_property(ex1, ex2, ex2_trace, rng):
    # adjacent off-boundary cells with equal membership label have equal
    # winding, sampled over both examples (>= 50 random adjacent pairs)
    for scn, tr in ((ex1, ex1.trace), (ex2, ex2_trace)):
        rep = verify_generates_domain(scn.F, GridSpec(nx=128, ny=128), trace=tr)
        lab = rep.labels
        checked = 0
        while checked < 50:
            iy = int(rng.integers(0, lab.shape[0] - 1))
            ix = int(rng.integers(0, lab.shape[1] - 1))
            a, b = lab[iy, ix], lab[iy, ix + 1]
            if a == -1 or b == -1:
                continue
            # equal membership label (interior/exterior) => equal winding
            if (a == 1) == (b == 1):
                assert a == b
            checked += 1


def test_winding_grid_matches_pointwise(ex1):
    tr = ex1.trace
    x0, x1, y0, y1 = tr.bounding_box(0.3)
    xs = np.linspace(x0, x1, 21)
    ys = np.linspace(y0, y1, 17)
    W = winding_grid(tr.cycle_polylines(), xs, ys)
    pts = tr.all_points()
    for iy in range(0, 17, 5):
        for ix in range(0, 21, 5):
            z = complex(xs[ix], ys[iy])
            if np.abs(pts - z).min() < 0.1:
                continue
            assert W[iy, ix] == winding_from_trace(tr, z)
