import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from borelnorm.conjugates import (BracketViolation, RadialWeight, boundary_graph, rho, rho_pm,
                                  v_derivatives, vtilde_dd_fd, young_conjugate_radial)
from borelnorm.domain import Disk, Ellipse, PointNotExterior

BETAS = (-0.25, 0.0, 0.5, 1.0, 1.4)


class TestRadialWeight:
    @pytest.mark.parametrize("r", [0.5, 1.0, 5.0, 20.0])
    def test_disk_sandwich(self, disk, r):
        w = RadialWeight(disk, 0.0, 0.0)
        _, v1, v2 = v_derivatives(w, r)
        assert 0.5 / r ** 2 <= v2 <= 2.0 / r ** 2
        assert -2.0 / r <= v1 <= -0.5 / r

    @pytest.mark.parametrize("beta", BETAS)
    def test_ellipse_sandwich(self, tilted_ellipse, beta):
        r = np.geomspace(0.1, 20, 20)
        for phi in (0.0, 1.2):
            _, v1, v2 = RadialWeight(tilted_ellipse, phi, beta).derivatives(r)
            assert np.all((0.5 + beta) / r ** 2 <= v2)
            assert np.all(v2 <= (2 + beta) / r ** 2)
            assert np.all(-(2 + beta) / r <= v1)
            assert np.all(v1 <= -(0.5 + beta) / r)

    def test_beta_shift(self, ellipse):
        r = np.array([0.3, 2.0, 9.0])
        a = RadialWeight(ellipse, 0.4, 0.25).v(r)
        b = RadialWeight(ellipse, 0.4, 1.0).v(r)
        assert np.allclose(b - a, (0.25 - 1.0) * np.log(r), rtol=0, atol=1e-13)

    @pytest.mark.parametrize("r", [0.2, 1.5, 12.0])
    def test_analytic_matches_differences(self, tilted_ellipse, r):
        w = RadialWeight(tilted_ellipse, 2.0, 0.5)
        _, v1, v2 = w.derivatives(r)
        f1, f2 = w.fd_derivatives(r)
        assert f1 == pytest.approx(v1, rel=1e-7)
        assert f2 == pytest.approx(v2, rel=1e-3)

    def test_u_definition(self, disk):
        w = RadialWeight(disk, 0.0, 0.0)
        r = 1.7
        assert w.u(r) == pytest.approx(0.5 * (w.log_eta(r) - 4 * np.log(r)))
        assert w.v(r) == pytest.approx(w.u(r))

    def test_rejects_nonpositive(self, disk):
        with pytest.raises(ValueError):
            RadialWeight(disk, 0.0).derivatives(0.0)


class TestConjugate:
    @pytest.mark.parametrize("x", [-0.1, -1.0, -10.0])
    @pytest.mark.parametrize("beta", [0.0, 1.0])
    def test_bracket_and_bounds(self, disk, x, beta):
        pt = young_conjugate_radial(RadialWeight(disk, 0.0, beta), x)
        assert -(0.5 + beta) / x <= pt.r <= -(2 + beta) / x
        lo = (1 + 2 * beta) ** 2 / (4 * (2 + beta) * x ** 2)
        hi = 2 * (2 + beta) ** 2 / ((1 + 2 * beta) * x ** 2)
        assert lo <= pt.vtilde_dd <= hi

    @pytest.mark.parametrize("r", [0.3, 2.0, 15.0])
    def test_duality(self, ellipse, r):
        w = RadialWeight(ellipse, 0.5, 0.0)
        _, v1, v2 = w.derivatives(r)
        pt = young_conjugate_radial(w, v1)
        assert pt.r == pytest.approx(r, rel=1e-10)
        assert vtilde_dd_fd(w, v1) * v2 == pytest.approx(1.0, abs=1e-4)

    def test_is_supremum(self, disk):
        w = RadialWeight(disk, 0.0, 0.0)
        x = -0.7
        pt = young_conjugate_radial(w, x)
        r = np.geomspace(0.05, 50, 400)
        assert np.all(x * r - w.v(r) <= pt.vtilde + 1e-12)

    def test_rejects_positive(self, disk):
        with pytest.raises(ValueError):
            young_conjugate_radial(RadialWeight(disk, 0.0), 0.5)

    def test_bracket_violation_is_reported(self, disk):
        class Bad(RadialWeight):
            def derivatives(self, r):
                return 0.0, 1.0, 1.0  # v' positive: no stationary point

        with pytest.raises(BracketViolation):
            young_conjugate_radial(Bad(disk, 0.0), -1.0)


class TestBoundaryGraph:
    def test_disk_example(self, disk):
        bg = boundary_graph(disk, -2.0)
        assert bg.d == pytest.approx(1.0)
        assert (bg.X1, bg.X2) == pytest.approx((-1.0, 1.0))
        x = np.linspace(-1, 1, 41)
        assert np.allclose(bg.f(x), 2 - np.sqrt(1 - x ** 2), atol=1e-12)
        assert bg.g(0.0) == pytest.approx(-1.0)

    def test_conjugate_at_zero(self, tilted_ellipse):
        bg = boundary_graph(tilted_ellipse, 3.0 + 1.0j)
        assert bg.g(0.0) == pytest.approx(-bg.d, abs=1e-12)
        assert bg.f(0.0) == pytest.approx(bg.d, abs=1e-10)
        x = np.linspace(bg.X1, bg.X2, 201)
        assert np.min(bg.f(x)) >= bg.d - 1e-12

    def test_fenchel(self, tilted_ellipse):
        bg = boundary_graph(tilted_ellipse, -1.0 + 2.5j)
        x = np.linspace(bg.X1, bg.X2, 50)
        t = np.linspace(-3, 3, 50)
        gap = bg.f(x)[:, None] + bg.g(t)[None, :] - x[:, None] * t[None, :]
        assert np.all(gap >= -1e-12)
        xs = bg.g_prime(t)
        assert np.allclose(bg.f(xs) + bg.g(t), xs * t, atol=1e-8)

    def test_convexity(self, ellipse):
        bg = boundary_graph(ellipse, 0.5 - 2.0j)
        t = np.linspace(-4, 4, 81)
        g = bg.g(t)
        assert np.all(g[1:-1] <= 0.5 * (g[:-2] + g[2:]) + 1e-13)
        assert np.all(np.diff(bg.g_prime(t)) >= 0)
        x = np.linspace(bg.X1, bg.X2, 41)[1:-1]
        slopes = [bg.f_prime(xi) for xi in x]
        assert np.all(np.diff(slopes) > 0)

    @given(st.floats(0, 2 * np.pi))
    @settings(max_examples=20)
    def test_disk_rotation_invariance(self, theta):
        disk = Disk(0j, 1.0)
        a = boundary_graph(disk, 1.7 + 0.4j)
        b = boundary_graph(disk, (1.7 + 0.4j) * np.exp(1j * theta))
        assert (a.X1, a.X2, a.d) == pytest.approx((b.X1, b.X2, b.d), abs=1e-10)
        x = np.linspace(a.X1, a.X2, 15)
        assert np.allclose(a.f(x), b.f(x), atol=1e-10)

    def test_interior_rejected(self, disk):
        with pytest.raises(PointNotExterior):
            boundary_graph(disk, 0.1j)


class TestRho:
    def test_quadratic(self):
        assert rho(lambda t: t ** 2, 0.0, 2.0) == pytest.approx(1.0, rel=1e-9)
        assert rho(lambda t: t ** 2, 0.0, 2.0, g_prime=lambda t: 2 * t) == \
            pytest.approx(1.0, rel=1e-9)

    @given(st.floats(0.1, 10), st.floats(0.01, 10))
    @settings(max_examples=30)
    def test_homogeneity(self, a, delta):
        assert rho(lambda t: a * t ** 2, 0.0, delta) == pytest.approx(np.sqrt(delta / (2 * a)),
                                                                     rel=1e-8)

    def test_monotone_in_delta(self):
        g = lambda t: np.cosh(t) + t ** 4
        vals = [rho(g, 0.3, d) for d in (0.01, 0.1, 1.0, 10.0)]
        assert np.all(np.diff(vals) > 0)

    @given(st.floats(-5, 5), st.floats(-5, 5))
    @settings(max_examples=20)
    def test_affine_invariance(self, a, b):
        g = lambda t: np.cosh(t)
        assert rho(lambda t: g(t) + a * t + b, 0.4, 0.5) == pytest.approx(rho(g, 0.4, 0.5),
                                                                          rel=1e-8)

    def test_rho_pm_caps(self):
        f = lambda x: x ** 2
        minus, plus = rho_pm(f, lambda x: 2 * x, 0.5, 1e3, -1.0, 1.0)
        assert (minus, plus) == (1.5, 0.5)
        minus, plus = rho_pm(f, lambda x: 2 * x, 0.0, 0.01, -1.0, 1.0)
        assert minus == pytest.approx(0.1, rel=1e-9) and plus == pytest.approx(0.1, rel=1e-9)

    def test_rejects(self):
        with pytest.raises(ValueError):
            rho(np.cosh, 0.0, 0.0)
