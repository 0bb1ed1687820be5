"""Bounded convex planar domains described through their support function.

Angles follow the convention ``h(phi) = max Re(z * exp(i*phi))`` over the
closed domain, so the outward normal belonging to ``phi`` is
``exp(-1j*phi)``.  Every domain is a base body (disk, ellipse or convex
polygon) plus an optional Minkowski disk of radius ``offset``; the rounded
polygon is the case "polygon + disk".
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import optimize
from scipy.special import ellipe, ellipeinc

from ._quadrature import gauss_legendre

TWO_PI = 2.0 * np.pi
_ATOM_TOL = 1e-12


class PointNotExterior(ValueError):
    """Raised by queries that need a point outside the closed domain."""


class SegmentSupport(ValueError):
    """The support set in the requested direction is a segment, not a point."""

    def __init__(self, theta, endpoints):
        super().__init__(f"support set at angle {theta!r} is the segment {endpoints!r}")
        self.endpoints = endpoints


@dataclass(frozen=True)
class DomainMetrics:
    sigma: float
    diam: float
    R: float
    area: float
    perimeter: float

    def as_tuple(self):
        return (self.sigma, self.diam, self.R, self.area, self.perimeter)


def _wrap(phi):
    """Reduce angles to [0, 2*pi)."""
    return np.mod(phi, TWO_PI)


def _segment_area(psi):
    """Area of the circular segment of the unit disk with half-angle ``psi``.

    Equals ``psi - sin(psi) cos(psi)``; a series is used for small ``psi``
    where the closed form cancels.
    """
    psi = np.asarray(psi, dtype=float)
    x = 2.0 * psi
    small = x < 0.5
    xs = np.where(small, x, 0.0)
    x2 = xs * xs
    series = xs ** 3 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0))))
    direct = 0.5 * (x - np.sin(x))
    return np.where(small, 0.5 * series, direct)


class ConvexDomain(ABC):
    """Abstract convex domain.  Subclasses are immutable dataclasses."""

    kind = "abstract"

    # -- primitives supplied by subclasses ---------------------------------

    @abstractmethod
    def support(self, phi):
        """Return arrays ``(h, h', h'')`` at ``phi``.

        For polygons ``h''`` is the smooth part only; the jumps of ``h'`` are
        reported separately as :attr:`atoms`.
        """

    @abstractmethod
    def density(self, phi):
        """Arc-length density ``h + h''`` (length per radian), atoms excluded."""

    @property
    def atoms(self):
        """Tuple of ``(angle, length)`` for straight boundary segments."""
        return ()

    @abstractmethod
    def _support_point(self, phi):
        ...

    @abstractmethod
    def _arc_smooth(self, phi1, phi2):
        ...

    @abstractmethod
    def _compute_metrics(self):
        ...

    @abstractmethod
    def support_gap(self, zeta):
        """Return ``(max_phi (Re(zeta e^{i phi}) - h(phi)), argmax)``.

        Positive values are Euclidean distances to the domain, negative
        values minus the depth of an interior point.
        """

    @abstractmethod
    def chord(self, t, phi):
        """Ordinates ``(y_lo, y_hi)`` of the chord ``Re w = t`` of ``D_phi``.

        ``w = z exp(i phi) - h(phi)``; the chord has length ``y_hi - y_lo``
        (zero when the line misses the domain).
        """

    @abstractmethod
    def section(self, t, phi):
        """Area of ``D_phi`` inside the strip ``t < Re w < 0``."""

    @abstractmethod
    def dilate(self, eps):
        """Minkowski sum with the closed disk of radius ``eps``."""

    def chord_kinks(self, phi):
        """Depths in ``(0, width)`` where the chord length is not smooth."""
        return np.empty(0)

    # -- generic geometry ---------------------------------------------------

    def support_eval(self, phi):
        h, dh, ddh = self.support(phi)
        if np.ndim(h) == 0:
            return float(h), float(dh), float(ddh)
        return h, dh, ddh

    def h(self, phi):
        return self.support(phi)[0]

    def width(self, phi):
        """Distance between the parallel support lines at ``phi`` and ``phi + pi``."""
        phi = np.asarray(phi, dtype=float)
        return self.h(phi) + self.h(phi + np.pi)

    def atom_at(self, theta, tol=_ATOM_TOL):
        """Index of the atom located at ``theta`` or ``None``."""
        th = float(_wrap(theta))
        for k, (ang, _) in enumerate(self.atoms):
            d = abs(th - ang)
            if min(d, TWO_PI - d) < tol:
                return k
        return None

    def boundary_point(self, theta):
        """Support point ``z(theta)`` with ``Re(z e^{i theta}) = h(theta)``.

        Raises :class:`SegmentSupport` at the angle of a straight boundary
        segment, carrying the segment endpoints.
        """
        if np.ndim(theta) == 0:
            k = self.atom_at(theta)
            if k is not None:
                raise SegmentSupport(float(theta), self.segment_endpoints(k))
            return complex(self._support_point(np.asarray(theta, dtype=float)))
        return self._support_point(np.asarray(theta, dtype=float))

    def segment_endpoints(self, k):
        raise IndexError("domain has no straight boundary segments")

    def arc_measure(self, phi1, phi2):
        """Boundary length between the support points of ``phi1`` and ``phi2``.

        Atoms are counted on the half-open interval ``(phi1, phi2]``.
        """
        if phi2 < phi1 or phi2 > phi1 + TWO_PI + 1e-12:
            raise ValueError("require phi1 <= phi2 <= phi1 + 2*pi")
        if phi2 - phi1 >= TWO_PI:
            return self.metrics.perimeter
        total = float(self._arc_smooth(phi1, phi2))
        for ang, length in self.atoms:
            # count ang + 2*pi*k inside (phi1, phi2]
            k = np.ceil((phi1 - ang) / TWO_PI)
            if ang + TWO_PI * k == phi1:
                k += 1
            if ang + TWO_PI * k <= phi2:
                total += length
        return total

    @cached_property
    def metrics(self):
        return self._compute_metrics()

    def global_metrics(self):
        return self.metrics.as_tuple()

    def distance(self, zeta):
        gap, _ = self.support_gap(zeta)
        d = np.maximum(gap, 0.0)
        return float(d) if np.ndim(d) == 0 else d

    def nearest_point(self, zeta):
        """Closest point of the closed domain to an exterior ``zeta``."""
        gap, phi = self.support_gap(zeta)
        return zeta - gap * np.exp(-1j * phi)

    def tangent_angles(self, zeta, iterations=60):
        """Angles ``(phi_minus, phi_plus)`` bounding the separating directions.

        Both roots of ``Re(zeta e^{i phi}) = h(phi)`` are bracketed between the
        maximising angle and that angle shifted by ``pi`` and then bisected.
        Works elementwise on arrays; ``phi_minus < phi_star < phi_plus``.
        """
        zeta = np.asarray(zeta, dtype=complex)
        gap, phi_star = self.support_gap(zeta)
        if np.any(gap <= 0):
            raise PointNotExterior("point not exterior")

        def g(phi):
            return np.real(zeta * np.exp(1j * phi)) - self.h(phi)

        out = []
        for sign in (-1.0, 1.0):
            lo = np.array(phi_star, dtype=float, copy=True)
            hi = phi_star + sign * np.pi
            for _ in range(iterations):
                mid = 0.5 * (lo + hi)
                pos = g(mid) >= 0
                lo = np.where(pos, mid, lo)
                hi = np.where(pos, hi, mid)
                if np.all(np.abs(hi - lo) < 4e-16 * (1.0 + np.abs(lo))):
                    break
            out.append(0.5 * (lo + hi))
        lo, hi = out
        if lo.ndim == 0:
            return float(lo), float(hi)
        return lo, hi

    def chord_and_section(self, t, phi):
        """Chord length ``u(t, phi)`` and section area ``s(t, phi)``."""
        ylo, yhi = self.chord(t, phi)
        u = np.maximum(yhi - ylo, 0.0)
        s = self.section(t, phi)
        if np.ndim(u) == 0:
            return float(u), float(s)
        return u, s

    def chord_length(self, t, phi):
        ylo, yhi = self.chord(t, phi)
        return np.maximum(yhi - ylo, 0.0)

    def contains(self, z):
        return self.support_gap(z)[0] <= 0

    def depth(self, z):
        """Distance from an interior point to the boundary (negative outside)."""
        return -self.support_gap(z)[0]


# ---------------------------------------------------------------------------
# disk
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Disk(ConvexDomain):
    center: complex = 0j
    radius: float = 1.0
    kind = "disk"

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def offset(self):
        return 0.0

    def support(self, phi):
        phi = np.asarray(phi, dtype=float)
        ce = self.center * np.exp(1j * phi)
        return ce.real + self.radius, -ce.imag, -ce.real

    def density(self, phi):
        return np.full(np.shape(phi), self.radius)

    def _support_point(self, phi):
        return self.center + self.radius * np.exp(-1j * phi)

    def _arc_smooth(self, phi1, phi2):
        return self.radius * (phi2 - phi1)

    def _compute_metrics(self):
        r = self.radius
        return DomainMetrics(2 * r, 2 * r, abs(self.center) + r, np.pi * r * r, TWO_PI * r)

    def support_gap(self, zeta):
        w = np.asarray(zeta, dtype=complex) - self.center
        return np.abs(w) - self.radius, -np.angle(w)

    def _unit_chord(self, t, phi):
        # chord of the disk in units of the radius
        t = np.asarray(t, dtype=float)
        phi = np.asarray(phi, dtype=float)
        eps = np.clip(-t / self.radius, 0.0, 2.0)
        psi = 2.0 * np.arcsin(np.sqrt(0.5 * eps))
        return psi, phi

    def chord(self, t, phi):
        psi, phi = self._unit_chord(t, phi)
        mid = np.imag(self.center * np.exp(1j * phi))
        half = self.radius * np.sin(psi)
        return mid - half, mid + half

    def section(self, t, phi):
        psi, _ = self._unit_chord(t, phi)
        return self.radius ** 2 * _segment_area(psi)

    def dilate(self, eps):
        if not eps > 0:
            raise ValueError("dilation radius must be positive")
        return Disk(self.center, self.radius + eps)


# ---------------------------------------------------------------------------
# ellipse (optionally offset by a disk)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ellipse(ConvexDomain):
    a: float = 2.0
    b: float = 1.0
    center: complex = 0j
    rotation: float = 0.0
    offset: float = 0.0
    kind = "ellipse"

    def __post_init__(self):
        if not (self.a >= self.b > 0):
            raise ValueError("ellipse needs semi-axes a >= b > 0")
        if self.offset < 0:
            raise ValueError("offset must be nonnegative")
        object.__setattr__(self, "center", complex(self.center))

    def _H(self, phi):
        th = phi + self.rotation
        c, s = np.cos(th), np.sin(th)
        q = (self.a * c) ** 2 + (self.b * s) ** 2
        return th, c, s, np.sqrt(q)

    def support(self, phi):
        phi = np.asarray(phi, dtype=float)
        th, c, s, H = self._H(phi)
        k = self.b ** 2 - self.a ** 2
        dq = k * np.sin(2 * th)
        ddq = 2 * k * np.cos(2 * th)
        dH = dq / (2 * H)
        ddH = ddq / (2 * H) - dq * dq / (4 * H ** 3)
        ce = self.center * np.exp(1j * phi)
        return ce.real + H + self.offset, -ce.imag + dH, -ce.real + ddH

    def h(self, phi):
        phi = np.asarray(phi, dtype=float)
        c = self.center
        return (c.real * np.cos(phi) - c.imag * np.sin(phi)) + self._H(phi)[3] + self.offset

    def width(self, phi):
        return 2.0 * (self._H(np.asarray(phi, dtype=float))[3] + self.offset)

    def density(self, phi):
        _, _, _, H = self._H(np.asarray(phi, dtype=float))
        return (self.a * self.b) ** 2 / H ** 3 + self.offset

    def _support_point(self, phi):
        th, c, s, H = self._H(phi)
        w = (self.a ** 2 * c - 1j * self.b ** 2 * s) / H
        return self.center + np.exp(1j * self.rotation) * w + self.offset * np.exp(-1j * phi)

    def _param(self, phi):
        # continuous, decreasing boundary parameter t(phi) of the base ellipse
        th = np.asarray(phi, dtype=float) + self.rotation
        k = np.floor(th / TWO_PI)
        r = th - TWO_PI * k
        f = np.arctan2(-self.b * np.sin(r), self.a * np.cos(r))
        f = np.where(f > 0, f - TWO_PI, f)
        return f - TWO_PI * k

    def _arc_smooth(self, phi1, phi2):
        m = 1.0 - (self.b / self.a) ** 2
        t1, t2 = self._param(phi1), self._param(phi2)
        base = self.a * (ellipeinc(t1 + np.pi / 2, m) - ellipeinc(t2 + np.pi / 2, m))
        return base + self.offset * (phi2 - phi1)

    @cached_property
    def _base_perimeter(self):
        return 4.0 * self.a * ellipe(1.0 - (self.b / self.a) ** 2)

    def _compute_metrics(self):
        a, b, off = self.a, self.b, self.offset
        per0 = self._base_perimeter
        rot = np.exp(1j * self.rotation)

        def neg_r2(t):
            return -abs(self.center + rot * (a * np.cos(t) + 1j * b * np.sin(t))) ** 2

        ts = np.linspace(0, TWO_PI, 4097)
        vals = neg_r2(ts)
        i = int(np.argmin(vals))
        res = optimize.minimize_scalar(neg_r2, bounds=(ts[i] - 2e-3, ts[i] + 2e-3),
                                       method="bounded", options={"xatol": 1e-14})
        R = np.sqrt(-min(res.fun, vals[i])) + off
        return DomainMetrics(2 * b + 2 * off, 2 * a + 2 * off, R,
                             np.pi * a * b + off * per0 + np.pi * off ** 2,
                             per0 + TWO_PI * off)

    def _base_gap(self, zeta, grid=512, newton=40):
        zeta = np.asarray(zeta, dtype=complex)
        shape = zeta.shape
        z = zeta.ravel()
        phis = TWO_PI * np.arange(grid) / grid
        hb = self.support(phis)[0] - self.offset
        vals = np.real(z[:, None] * np.exp(1j * phis)[None, :]) - hb[None, :]
        phi = phis[np.argmax(vals, axis=1)]
        step_cap = TWO_PI / grid
        for _ in range(newton):
            e = np.exp(1j * phi)
            _, dh, ddh = self.support(phi)
            f1 = -np.imag(z * e) - dh
            f2 = -np.real(z * e) - ddh
            step = np.where(f2 < 0, -f1 / np.where(f2 < 0, f2, -1.0), np.sign(f1) * step_cap / 4)
            step = np.clip(step, -step_cap, step_cap)
            phi = phi + step
            if np.all(np.abs(step) < 1e-15):
                break
        gap = np.real(z * np.exp(1j * phi)) - (self.support(phi)[0] - self.offset)
        return gap.reshape(shape), phi.reshape(shape)

    def support_gap(self, zeta):
        gap, phi = self._base_gap(zeta)
        if gap.ndim == 0:
            return float(gap) - self.offset, float(phi)
        return gap - self.offset, phi

    def _base_chord(self, tb, phi):
        # tb measured from the base support line
        th, c, s, H = self._H(phi)
        eps = np.clip(-tb / H, 0.0, 2.0)
        psi = 2.0 * np.arcsin(np.sqrt(0.5 * eps))
        d = 1.0 - eps
        ab = self.a * self.b
        mid = np.imag(self.center * np.exp(1j * phi)) + d * (self.a ** 2 - self.b ** 2) * s * c / H
        half = ab / H * np.sin(psi)
        return mid - half, mid + half, ab * _segment_area(psi)

    def chord(self, t, phi):
        t, phi = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(phi, dtype=float))
        if self.offset == 0:
            lo, hi, _ = self._base_chord(t, phi)
            return lo, hi
        lo, hi, _ = self._parametric_clip(t, phi)
        return lo, hi

    def section(self, t, phi):
        t, phi = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(phi, dtype=float))
        if self.offset == 0:
            return self._base_chord(t, phi)[2]
        return self._parametric_clip(t, phi)[2]

    def _parametric_clip(self, t, phi, iterations=60, nodes=64):
        """Chord and cut-off area of the smooth strictly convex boundary.

        The boundary point ``z(theta)`` projects monotonically onto the
        direction ``phi`` on either side of ``theta = phi``, so each chord
        endpoint is found by bisection; the area follows from Green's
        theorem on the cut-off arc.
        """
        shape = t.shape
        t, phi = t.ravel(), phi.ravel()
        w = self.width(phi)
        tc = np.clip(t, -w, 0.0)
        h = self.h(phi)

        def proj(theta):
            return np.real(self._support_point(theta) * np.exp(1j * phi)) - h

        ends = []
        for sign in (-1.0, 1.0):
            lo = phi.copy()
            hi = phi + sign * np.pi
            for _ in range(iterations):
                mid = 0.5 * (lo + hi)
                inside = proj(mid) > tc
                lo = np.where(inside, mid, lo)
                hi = np.where(inside, hi, mid)
            ends.append(0.5 * (lo + hi))
        th_a, th_b = ends
        za, zb = self._support_point(th_a), self._support_point(th_b)
        rot = np.exp(1j * phi)
        ylo = np.imag(zb * rot)
        yhi = np.imag(za * rot)
        x, wx = gauss_legendre(nodes)
        half = 0.5 * (th_b - th_a)
        th = (0.5 * (th_a + th_b))[:, None] + half[:, None] * x[None, :]
        z = self._support_point(th)
        dz = -1j * self.density(th) * np.exp(-1j * th)
        arc = np.sum(np.imag(np.conj(z) * dz) * wx[None, :], axis=1) * half
        area = -0.5 * (arc + np.imag(np.conj(zb) * za))
        area = np.where(t >= 0, 0.0, np.where(t <= -w, self.metrics.area, area))
        ylo = np.where((t >= 0) | (t <= -w), 0.0, ylo)
        yhi = np.where((t >= 0) | (t <= -w), 0.0, yhi)
        return ylo.reshape(shape), yhi.reshape(shape), area.reshape(shape)

    def dilate(self, eps):
        if not eps > 0:
            raise ValueError("dilation radius must be positive")
        return Ellipse(self.a, self.b, self.center, self.rotation, self.offset + eps)


# ---------------------------------------------------------------------------
# convex polygon rounded by a disk
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothedPolygon(ConvexDomain):
    vertices: tuple = field(default=(1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j))
    rounding: float = 0.1
    kind = "smoothed-polygon"

    def __post_init__(self):
        v = tuple(complex(z) for z in self.vertices)
        object.__setattr__(self, "vertices", v)
        if len(v) < 3:
            raise ValueError("polygon needs at least three vertices")
        if not self.rounding > 0:
            raise ValueError("rounding radius must be positive")
        V = np.array(v)
        E = np.roll(V, -1) - V
        cross = np.imag(np.conj(E) * np.roll(E, -1))
        if np.any(cross <= 0):
            raise ValueError("vertices must form a strictly convex counter-clockwise polygon")

    @property
    def offset(self):
        return self.rounding

    @cached_property
    def _geom(self):
        V = np.array(self.vertices)
        E = np.roll(V, -1) - V
        L = np.abs(E)
        nu = -1j * E / L                      # outward normals of edges k -> k+1
        atom_angles = _wrap(-np.angle(nu))
        start = np.angle(np.roll(nu, 1))      # arc at V_k starts at normal of edge k-1
        turn = _wrap(np.angle(nu) - start)
        return V, E, L, nu, atom_angles, start, turn

    @property
    def atoms(self):
        _, _, L, _, ang, _, _ = self._geom
        return tuple(zip(ang.tolist(), L.tolist()))

    def segment_endpoints(self, k):
        V, _, _, nu, _, _, _ = self._geom
        eps = self.rounding
        n = len(V)
        return complex(V[k] + eps * nu[k]), complex(V[(k + 1) % n] + eps * nu[k])

    def _active(self, phi):
        V = self._geom[0]
        vals = np.real(V[:, None] * np.exp(1j * np.ravel(phi))[None, :])
        k = np.argmax(vals, axis=0)
        return V[k].reshape(np.shape(phi))

    def support(self, phi):
        phi = np.asarray(phi, dtype=float)
        Vk = self._active(phi)
        ve = Vk * np.exp(1j * phi)
        return ve.real + self.rounding, -ve.imag, -ve.real

    def density(self, phi):
        return np.full(np.shape(phi), self.rounding)

    def _support_point(self, phi):
        return self._active(phi) + self.rounding * np.exp(-1j * phi)

    def _arc_smooth(self, phi1, phi2):
        return self.rounding * (phi2 - phi1)

    def _compute_metrics(self):
        V, _, L, _, ang, _, _ = self._geom
        eps = self.rounding
        hp = lambda p: np.max(np.real(V[:, None] * np.exp(1j * np.atleast_1d(p))[None, :]), axis=0)
        widths = hp(ang) + hp(ang + np.pi)
        sigma = float(np.min(widths)) + 2 * eps
        diam = float(np.max(np.abs(V[:, None] - V[None, :]))) + 2 * eps
        R = float(np.max(np.abs(V))) + eps
        area_p = 0.5 * float(np.sum(np.imag(np.conj(V) * np.roll(V, -1))))
        per_p = float(np.sum(L))
        return DomainMetrics(sigma, diam, R, area_p + eps * per_p + np.pi * eps * eps,
                             per_p + TWO_PI * eps)

    def support_gap(self, zeta):
        V, E, L, nu, ang, _, _ = self._geom
        z = np.asarray(zeta, dtype=complex)
        shape = z.shape
        z = z.ravel()
        rel = z[:, None] - V[None, :]
        signed = np.real(rel * np.conj(nu)[None, :])       # distance to edge lines
        inside = np.all(signed <= 0, axis=1)
        tau = np.clip(np.real(rel * np.conj(E)[None, :]) / (L * L)[None, :], 0.0, 1.0)
        foot = V[None, :] + tau * E[None, :]
        dist = np.abs(z[:, None] - foot)
        j = np.argmin(dist, axis=1)
        rows = np.arange(z.size)
        q = foot[rows, j]
        d_out = dist[rows, j]
        phi_out = -np.angle(z - q)
        kin = np.argmax(signed, axis=1)
        gap = np.where(inside, signed[rows, kin], d_out) - self.rounding
        phi = np.where(inside, ang[kin], phi_out)
        if len(shape) == 0:
            return float(gap[0]), float(phi[0])
        return gap.reshape(shape), phi.reshape(shape)

    def chord_kinks(self, phi):
        V, _, _, nu, _, _, _ = self._geom
        eps = self.rounding
        J = np.concatenate([V + eps * nu, V + eps * np.roll(nu, 1)])
        depth = float(self.h(phi)) - np.real(J * np.exp(1j * phi))
        w = float(self.width(phi))
        depth = np.unique(np.round(depth, 14))
        return depth[(depth > 1e-12 * w) & (depth < w * (1 - 1e-12))]

    def _clip(self, t, phi):
        """Exact chord ordinates and cut-off area via Green's theorem."""
        V, E, L, nu, _, start, turn = self._geom
        eps = self.rounding
        t, phi = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(phi, dtype=float))
        shape = t.shape
        t, phi = t.ravel(), phi.ravel()
        rot = np.exp(1j * phi)
        c = self.h(phi) + t
        area2 = np.zeros_like(t)
        ylo = np.full_like(t, np.inf)
        yhi = np.full_like(t, -np.inf)
        n = len(V)

        def cross_val(z):
            return np.imag(z * rot)

        for k in range(n):
            Vk = V[k]
            # arc around V_k: psi in [start_k, start_k + turn_k]
            kap = (c - np.real(Vk * rot)) / eps
            mu = np.arccos(np.clip(kap, -1.0, 1.0))
            a0 = start[k] + phi
            a1 = np.mod(a0 + np.pi, TWO_PI) - np.pi
            for m in (0, 1):
                lo = np.maximum(a1, -mu + TWO_PI * m)
                hi = np.minimum(a1 + turn[k], mu + TWO_PI * m)
                ok = hi > lo
                plo = np.where(ok, lo - phi, 0.0)
                phi_hi = np.where(ok, hi - phi, 0.0)
                contrib = eps * np.real(np.conj(Vk) * (np.exp(1j * phi_hi) - np.exp(1j * plo)) / 1j) \
                    + eps * eps * (phi_hi - plo)
                area2 += np.where(ok, contrib, 0.0)
            crossing = np.abs(kap) <= 1.0
            for sgn in (-1.0, 1.0):
                psi = -phi + sgn * mu
                on_arc = np.mod(psi - start[k], TWO_PI) <= turn[k] + 1e-14
                y = cross_val(Vk + eps * np.exp(1j * psi))
                hit = crossing & on_arc
                ylo = np.where(hit, np.minimum(ylo, y), ylo)
                yhi = np.where(hit, np.maximum(yhi, y), yhi)
            # straight piece along edge k
            P1 = Vk + eps * nu[k]
            P2 = V[(k + 1) % n] + eps * nu[k]
            f1 = np.real(P1 * rot) - c
            f2 = np.real(P2 * rot) - c
            both = (f1 > 0) & (f2 > 0)
            area2 += np.where(both, np.imag(np.conj(P1) * P2), 0.0)
            cut = (f1 > 0) != (f2 > 0)
            tau = np.where(cut, f1 / np.where(cut, f1 - f2, 1.0), 0.0)
            Ps = P1 + tau * (P2 - P1)
            area2 += np.where(cut & (f1 > 0), np.imag(np.conj(P1) * Ps), 0.0)
            area2 += np.where(cut & (f2 > 0), np.imag(np.conj(Ps) * P2), 0.0)
            y = cross_val(Ps)
            ylo = np.where(cut, np.minimum(ylo, y), ylo)
            yhi = np.where(cut, np.maximum(yhi, y), yhi)
        has = np.isfinite(ylo) & (yhi > ylo)
        A = (c + 1j * np.where(has, yhi, 0.0)) / rot
        B = (c + 1j * np.where(has, ylo, 0.0)) / rot
        area2 += np.where(has, np.imag(np.conj(A) * B), 0.0)
        ylo = np.where(has, ylo, 0.0)
        yhi = np.where(has, yhi, 0.0)
        s = np.clip(0.5 * area2, 0.0, self.metrics.area)
        s = np.where(t >= 0, 0.0, s)
        return ylo.reshape(shape), yhi.reshape(shape), s.reshape(shape)

    def chord(self, t, phi):
        lo, hi, _ = self._clip(t, phi)
        return lo, hi

    def section(self, t, phi):
        return self._clip(t, phi)[2]

    def dilate(self, eps):
        if not eps > 0:
            raise ValueError("dilation radius must be positive")
        return SmoothedPolygon(self.vertices, self.rounding + eps)


def from_config(block):
    """Build a domain from a config mapping (``kind`` plus shape keys)."""
    kind = block.get("kind")
    center = block.get("center", 0.0)
    if isinstance(center, (list, tuple)):
        center = complex(center[0], center[1])
    if kind == "disk":
        return Disk(center, float(block.get("radius", 1.0)))
    if kind == "ellipse":
        return Ellipse(float(block["a"]), float(block["b"]), center,
                       float(block.get("rotation", 0.0)))
    if kind in ("smoothed-polygon", "polygon"):
        verts = [complex(v[0], v[1]) for v in block["vertices"]]
        return SmoothedPolygon(tuple(verts), float(block["rounding"]))
    raise ValueError(f"unknown domain kind {kind!r}")
