import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from borelnorm.domain import (Disk, Ellipse, PointNotExterior, SegmentSupport, SmoothedPolygon,
                              from_config)

angles = st.floats(0.0, 2 * np.pi, allow_nan=False)


def ellipse_boundary(e, n=20000):
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    w = e.a * np.cos(t) + 1j * e.b * np.sin(t)
    return e.center + w * np.exp(1j * e.rotation)


def polygon_shape(p, n=4096):
    shapely = pytest.importorskip("shapely.geometry")
    poly = shapely.Polygon([(v.real, v.imag) for v in p.vertices])
    return poly.buffer(p.rounding, quad_segs=n)


class TestSupport:
    def test_unit_disk_values(self, disk):
        assert disk.support_eval(1.3) == pytest.approx((1.0, 0.0, 0.0), abs=1e-15)

    def test_ellipse_at_zero(self):
        h, dh, _ = Ellipse(2.0, 1.0).support_eval(0.0)
        assert h == pytest.approx(2.0)
        assert dh == pytest.approx(0.0, abs=1e-15)

    @given(angles)
    def test_ellipse_closed_form(self, phi):
        e = Ellipse(2.0, 1.0)
        assert e.h(phi) == pytest.approx(np.sqrt(4 * np.cos(phi) ** 2 + np.sin(phi) ** 2))

    def test_ellipse_against_sampled_boundary(self, tilted_ellipse):
        z = ellipse_boundary(tilted_ellipse)
        phi = np.linspace(0, 2 * np.pi, 37)
        sampled = np.max(np.real(z[None, :] * np.exp(1j * phi)[:, None]), axis=1)
        assert np.allclose(tilted_ellipse.h(phi), sampled, atol=1e-7)

    def test_periodic(self, tilted_ellipse, polygon):
        for d in (tilted_ellipse, polygon):
            assert np.allclose(d.support_eval(0.7), d.support_eval(0.7 + 2 * np.pi))

    def test_derivatives_by_differences(self, tilted_ellipse):
        phi, step = 0.9, 1e-5
        h, dh, ddh = tilted_ellipse.support_eval(phi)
        hp, hm = tilted_ellipse.h(phi + step), tilted_ellipse.h(phi - step)
        assert dh == pytest.approx((hp - hm) / (2 * step), rel=1e-8)
        assert ddh == pytest.approx((hp - 2 * h + hm) / step ** 2, rel=1e-4)

    @given(angles)
    @settings(max_examples=50)
    def test_density_nonnegative_and_width_positive(self, phi):
        for d in (Ellipse(3.0, 0.5, rotation=0.3),
                  SmoothedPolygon((1 + 0j, -0.5 + 0.9j, -0.5 - 0.9j), 0.05)):
            assert d.density(phi) >= 0
            assert d.width(phi) > 0


class TestBoundaryPoint:
    def test_disk_examples(self, disk):
        assert disk.boundary_point(0.0) == pytest.approx(1.0)
        assert disk.boundary_point(np.pi / 2) == pytest.approx(-1j)

    def test_ellipse_example(self):
        assert Ellipse(2.0, 1.0).boundary_point(0.0) == pytest.approx(2.0)

    @given(angles)
    def test_support_identity(self, theta):
        e = Ellipse(2.0, 1.0, center=0.2 - 0.1j, rotation=0.4)
        z = e.boundary_point(theta)
        assert np.real(z * np.exp(1j * theta)) == pytest.approx(e.h(theta), abs=1e-12)
        assert e.distance(z + 1e-3 * np.exp(-1j * theta)) == pytest.approx(1e-3, rel=1e-6)

    def test_segment_reports_endpoints(self, polygon):
        ang, length = polygon.atoms[0]
        with pytest.raises(SegmentSupport) as info:
            polygon.boundary_point(ang)
        p1, p2 = info.value.endpoints
        assert abs(p2 - p1) == pytest.approx(length)


class TestArcMeasure:
    def test_disk_quarter(self, disk):
        assert disk.arc_measure(0.0, np.pi / 2) == pytest.approx(np.pi / 2)

    def test_ellipse_total(self, tilted_ellipse):
        z = ellipse_boundary(tilted_ellipse)
        length = np.sum(np.abs(np.diff(np.append(z, z[0]))))
        assert tilted_ellipse.metrics.perimeter == pytest.approx(length, rel=1e-7)
        assert tilted_ellipse.arc_measure(0.3, 0.3 + 2 * np.pi) == pytest.approx(length, rel=1e-7)

    def test_additive(self, polygon):
        a = polygon.arc_measure(0.1, 1.7) + polygon.arc_measure(1.7, 4.0)
        assert a == pytest.approx(polygon.arc_measure(0.1, 4.0))

    def test_density_plus_atoms_is_perimeter(self, polygon):
        phi = np.linspace(0, 2 * np.pi, 200001)
        smooth = integrate.trapezoid(polygon.density(phi), phi)
        atoms = sum(length for _, length in polygon.atoms)
        assert smooth + atoms == pytest.approx(polygon.metrics.perimeter, rel=1e-6)

    def test_rejects_reversed(self, disk):
        with pytest.raises(ValueError):
            disk.arc_measure(1.0, 0.5)


class TestMetrics:
    def test_disk(self, disk):
        m = disk.metrics
        assert (m.sigma, m.diam, m.R) == (2.0, 2.0, 1.0)
        assert m.area == pytest.approx(np.pi)

    def test_polygon_against_shapely(self, polygon):
        shape = polygon_shape(polygon)
        assert polygon.metrics.area == pytest.approx(shape.area, rel=1e-6)
        assert polygon.metrics.perimeter == pytest.approx(shape.length, rel=1e-6)

    @pytest.mark.parametrize("dom", [Disk(0.3 + 0.2j, 0.7), Ellipse(2.0, 0.5, 0.1j, 1.0),
                                     SmoothedPolygon((1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j), 0.1)])
    def test_invariants(self, dom):
        m = dom.metrics
        assert m.sigma <= m.diam <= 2 * m.R + 1e-12
        assert m.perimeter ** 2 >= 4 * np.pi * m.area

    def test_square_width(self):
        sq = SmoothedPolygon((1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j), 0.1)
        assert sq.metrics.sigma == pytest.approx(2.2)
        assert sq.metrics.diam == pytest.approx(2 * np.sqrt(2) + 0.2)


class TestChords:
    def test_disk_half(self, disk):
        u, s = disk.chord_and_section(-1.0, 0.4)
        assert u == pytest.approx(2.0)
        assert s == pytest.approx(np.pi / 2)

    def test_ellipse_section_against_sampling(self, tilted_ellipse):
        phi, t = 0.8, -1.1
        z = ellipse_boundary(tilted_ellipse, 200000)
        w = z * np.exp(1j * phi) - tilted_ellipse.h(phi)
        inside = w.real > t
        shapely = pytest.importorskip("shapely.geometry")
        poly = shapely.Polygon(np.c_[w.real, w.imag])
        cut = poly.intersection(shapely.box(t, -10, 0.0, 10))
        assert tilted_ellipse.section(t, phi) == pytest.approx(cut.area, rel=1e-7)
        ylo, yhi = tilted_ellipse.chord(t, phi)
        line = poly.intersection(shapely.LineString([(t, -10), (t, 10)]))
        assert (ylo, yhi) == pytest.approx(line.bounds[1::2], abs=1e-8)
        assert inside.any()

    def test_polygon_section_against_shapely(self, polygon):
        shapely = pytest.importorskip("shapely.geometry")
        from shapely import affinity
        shape = polygon_shape(polygon)
        for phi, t in [(0.0, -0.3), (1.0, -0.9), (2.5, -1.5)]:
            rot = affinity.rotate(shape, phi, origin=(0, 0), use_radians=True)
            rot = affinity.translate(rot, -polygon.h(phi), 0.0)
            cut = rot.intersection(shapely.box(t, -10, 0.0, 10))
            assert polygon.section(t, phi) == pytest.approx(cut.area, rel=1e-5)

    def test_full_depth(self, tilted_ellipse):
        W = tilted_ellipse.width(0.3)
        assert tilted_ellipse.section(-W - 1.0, 0.3) == pytest.approx(tilted_ellipse.metrics.area)
        assert tilted_ellipse.chord_length(-W - 1.0, 0.3) == pytest.approx(0.0, abs=1e-12)


class TestDistance:
    def test_disk(self, disk):
        assert disk.distance(-2.0) == pytest.approx(1.0)
        assert disk.distance(0.5) == 0.0

    def test_polygon_against_shapely(self, polygon):
        shapely = pytest.importorskip("shapely.geometry")
        shape = polygon_shape(polygon)
        rng = np.random.default_rng(3)
        for z in rng.uniform(-3, 3, 40) + 1j * rng.uniform(-3, 3, 40):
            d = shape.exterior.distance(shapely.Point(z.real, z.imag))
            if shape.contains(shapely.Point(z.real, z.imag)):
                assert polygon.distance(z) == 0.0
            else:
                assert polygon.distance(z) == pytest.approx(d, abs=1e-6)

    def test_tangent_angles(self, disk):
        lo, hi = disk.tangent_angles(-2.0)
        # tangent lines from -2 touch the unit circle at angle acos(1/2) off the axis
        assert hi - lo == pytest.approx(2 * np.pi / 3)
        assert disk.h(lo) == pytest.approx(np.real(-2.0 * np.exp(1j * lo)))

    def test_tangent_angles_interior(self, disk):
        with pytest.raises(PointNotExterior):
            disk.tangent_angles(0.2)

    def test_dilate(self, ellipse):
        big = ellipse.dilate(0.3)
        phi = np.linspace(0, 6, 13)
        assert np.allclose(big.h(phi), ellipse.h(phi) + 0.3)


class TestConfig:
    def test_from_config(self):
        assert from_config({"kind": "disk", "radius": 2.0}).metrics.area == pytest.approx(4 * np.pi)
        e = from_config({"kind": "ellipse", "a": 2, "b": 1, "center": [0.5, 0.0]})
        assert e.h(0.0) == pytest.approx(2.5)

    @pytest.mark.parametrize("block", [{"kind": "square"}, {"kind": "disk", "radius": -1},
                                       {"kind": "ellipse", "a": 1, "b": 2}])
    def test_rejects(self, block):
        with pytest.raises(ValueError):
            from_config(block)

    def test_nonconvex_polygon(self):
        with pytest.raises(ValueError):
            SmoothedPolygon((0j, 2 + 0j, 1 + 0.2j, 1 + 2j), 0.1)


class TestSpecExamples:
    def test_ellipse_metrics(self):
        m = Ellipse(2.0, 1.0).metrics
        assert (m.sigma, m.diam, m.R) == pytest.approx((2.0, 4.0, 2.0))
        assert m.area == pytest.approx(2 * np.pi)
        assert m.perimeter == pytest.approx(9.688448220547675, rel=1e-10)

    def test_translated_disk(self):
        assert Disk(3.0 + 0j, 1.0).metrics.R == pytest.approx(4.0)

    def test_ellipse_minor_axis_distance(self):
        assert Ellipse(2.0, 1.0).distance(2j) == pytest.approx(1.0)

    def test_disk_half_arc(self, disk):
        assert disk.arc_measure(0.0, np.pi) == pytest.approx(np.pi)
        assert disk.arc_measure(0.0, 2 * np.pi) == pytest.approx(2 * np.pi)

    def test_tangent_examples(self, disk):
        assert disk.tangent_angles(2.0) == pytest.approx((-np.pi / 3, np.pi / 3), abs=1e-10)
        lo, hi = disk.tangent_angles(2j)
        assert (lo, hi) == pytest.approx((-np.pi / 2 - np.pi / 3, -np.pi / 2 + np.pi / 3),
                                         abs=1e-10)
        lo, hi = disk.tangent_angles(1.0 + 1e-8)
        assert hi - lo < 1e-3

    def test_chord_examples(self, disk):
        assert disk.chord_and_section(-2.0, 0.2) == pytest.approx((0.0, np.pi), abs=1e-12)
        assert disk.chord_and_section(0.0, 0.2) == pytest.approx((0.0, 0.0), abs=1e-12)

    def test_dilate_examples(self, disk):
        big = disk.dilate(0.5)
        assert big.h(0.7) == pytest.approx(1.5)
        assert big.metrics.area == pytest.approx(np.pi * 2.25)
        e = Ellipse(2.0, 1.0)
        m, mb = e.metrics, e.dilate(0.1).metrics
        assert mb.perimeter == pytest.approx(m.perimeter + 0.2 * np.pi, rel=1e-10)
        assert (mb.sigma, mb.diam, mb.R) == pytest.approx((m.sigma + 0.2, m.diam + 0.2, m.R + 0.1))

    def test_dilate_polygon(self):
        sq = SmoothedPolygon((1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j), 0.1)
        big = sq.dilate(0.2)
        assert np.allclose(big.atoms, sq.atoms)
        phi = np.array([0.3, 1.0, 2.0])
        assert np.allclose(big.density(phi), sq.density(phi) + 0.2)


class TestProperties:
    @given(st.floats(-4, 4), st.floats(-4, 4), angles)
    @settings(max_examples=60)
    def test_support_gap_bounded_by_distance(self, x, y, phi):
        e = Ellipse(2.0, 1.0, center=0.2 - 0.1j, rotation=0.4)
        zeta = complex(x, y)
        assert np.real(zeta * np.exp(1j * phi)) - e.h(phi) <= e.distance(zeta) + 1e-12

    def test_distance_against_brute_force(self, tilted_ellipse):
        z = ellipse_boundary(tilted_ellipse, 10000)
        rng = np.random.default_rng(11)
        pts = rng.uniform(-5, 5, 30) + 1j * rng.uniform(-5, 5, 30)
        for zeta in pts:
            d = tilted_ellipse.distance(zeta)
            if d > 0:
                brute = np.min(np.abs(z - zeta))
                # sampled min overestimates by at most the squared spacing
                assert brute - 1e-5 <= d <= brute + 1e-12

    @pytest.mark.parametrize("phi", [0.0, 0.9, 2.4])
    def test_section_monotone(self, tilted_ellipse, phi):
        W = tilted_ellipse.width(phi)
        t = np.linspace(-W, 0, 101)
        s = tilted_ellipse.section(t, phi)
        assert np.all(np.diff(s) <= 1e-14)
        assert s[-1] == pytest.approx(0.0, abs=1e-14)
        assert s[0] == pytest.approx(tilted_ellipse.metrics.area)
        # u is -ds/dt
        t0, step = -0.7, 1e-5
        ds = (tilted_ellipse.section(t0 + step, phi) - tilted_ellipse.section(t0 - step, phi))
        assert tilted_ellipse.chord_length(t0, phi) == pytest.approx(-ds / (2 * step), rel=1e-7)

    @given(angles)
    @settings(max_examples=30)
    def test_boundary_point_on_boundary(self, theta):
        e = Ellipse(2.0, 1.0, center=0.2 - 0.1j, rotation=0.4)
        z = e.boundary_point(theta)
        assert np.real(z * np.exp(1j * theta)) - e.h(theta) == pytest.approx(0.0, abs=1e-10)
        assert e.distance(z) < 1e-8

    def test_perimeter_equals_arc_measure(self, polygon):
        assert polygon.arc_measure(0.0, 2 * np.pi) == pytest.approx(polygon.metrics.perimeter,
                                                                    rel=1e-12)
