"""Radial weight ``v``, its Young conjugate, the boundary graph and the moduli rho.

For a direction ``phi`` put ``k(r) = K(r e^{i phi}) e^{-2 r h(phi)}``, an
average of ``exp(-2 r y)`` over depths ``y`` weighted by the chord length.
Then ``v(r) = -log(k)/2 - (2 + beta) log r`` and

    v'(r)  = E[y] - (2 + beta)/r
    v''(r) = (2 + beta)/r**2 - 2 Var[y]

where the moments are taken under the weights ``u(y) exp(-2 r y)``.  Finite
differences of ``v`` are kept as an independent check.
"""

from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .domain import PointNotExterior
from .norms import chord_rule, log_kernel_reduced


class BracketViolation(ArithmeticError):
    """The stationary point left the bracket guaranteed by convexity of v."""


@dataclass(frozen=True)
class RadialWeight:
    domain: object
    phi: float
    beta: float = 0.0
    nodes: int = 24

    def _moments(self, r):
        y, W = chord_rule(self.domain, self.phi, self.nodes)
        r = np.atleast_1d(np.asarray(r, dtype=float))
        logw = -2.0 * r[:, None] * (y - y[0])[None, :]
        p = np.exp(logw) * W[None, :]
        p /= p.sum(axis=1, keepdims=True)
        mean = p @ y
        var = np.sum(p * (y[None, :] - mean[:, None]) ** 2, axis=1)
        return mean, var

    def v(self, r):
        r = np.asarray(r, dtype=float)
        return -0.5 * log_kernel_reduced(self.domain, self.phi, r, self.nodes, 14) - (2 + self.beta) * np.log(r)

    def log_eta(self, r):
        """``log(e^{2 h r} / K(r e^{i phi}))``."""
        return -log_kernel_reduced(self.domain, self.phi, np.asarray(r, dtype=float), self.nodes, 14)

    def u(self, r):
        return 0.5 * (self.log_eta(r) - 4.0 * np.log(r))

    def derivatives(self, r):
        """``(v, v', v'')`` at ``r > 0``."""
        if np.any(np.asarray(r) <= 0):
            raise ValueError("r must be positive")
        scalar = np.ndim(r) == 0
        r = np.atleast_1d(np.asarray(r, dtype=float))
        mean, var = self._moments(r)
        b = 2 + self.beta
        out = (self.v(r), mean - b / r, b / r ** 2 - 2.0 * var)
        if scalar:
            return tuple(float(x[0]) for x in out)
        return out

    def fd_derivatives(self, r, rel_step=1e-4):
        """``(v', v'')`` by Richardson-extrapolated central differences."""
        r = float(r)

        def d1(hs):
            return (self.v(r + hs) - self.v(r - hs)) / (2 * hs)

        def d2(hs):
            return (self.v(r + hs) - 2 * self.v(r) + self.v(r - hs)) / hs ** 2

        h = rel_step * r
        return (float((4 * d1(h / 2) - d1(h)) / 3), float((4 * d2(h / 2) - d2(h)) / 3))


def v_derivatives(w, r):
    return w.derivatives(r)


@dataclass(frozen=True)
class ConjugatePoint:
    vtilde: float
    r: float
    vtilde_dd: float


def young_conjugate_radial(w, x, xtol=1e-14):
    """``sup_r (x r - v(r))`` for ``x < 0`` with its maximiser and second derivative."""
    if not x < 0:
        raise ValueError("x must be negative")
    lo = -(0.5 + w.beta) / x
    hi = -(2 + w.beta) / x

    def fun(r):
        return w.derivatives(r)[1] - x

    flo, fhi = fun(lo), fun(hi)
    # allow for rounding when the bracket end is already the root
    tol = 1e-12 * abs(x)
    if flo > tol or fhi < -tol:
        raise BracketViolation(f"v'(r) = {x} not bracketed by [{lo}, {hi}]")
    if flo >= 0:
        r = lo
    elif fhi <= 0:
        r = hi
    else:
        r = optimize.brentq(fun, lo, hi, xtol=xtol * hi, rtol=1e-15)
    v, _, vdd = w.derivatives(r)
    return ConjugatePoint(x * r - v, r, 1.0 / vdd)


def vtilde_dd_fd(w, x, rel_step=1e-4):
    """``vtilde''(x) = r'(x)`` by central differences of the maximiser."""
    hs = rel_step * abs(x)
    rp = young_conjugate_radial(w, x + hs).r
    rm = young_conjugate_radial(w, x - hs).r
    return (rp - rm) / (2 * hs)


# ---------------------------------------------------------------------------
# boundary graph seen from an exterior point
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryGraph:
    """The lower boundary of ``D`` as a convex graph ``y = f(x)``.

    Coordinates ``w = x + i y = i (z - zeta) conj(e)`` put ``zeta`` at the
    origin with the ordinate axis pointing to the nearest boundary point
    ``z0 = zeta + d e``.
    """

    domain: object
    zeta: complex
    z0: complex
    d: float
    psi: float  # e^{i psi} = i conj(e)
    X1: float
    X2: float

    def to_frame(self, z):
        return (np.asarray(z) - self.zeta) * np.exp(1j * self.psi)

    def _hprime(self, alpha):
        """Support function of the domain in the frame."""
        a = np.asarray(alpha, dtype=float) + self.psi
        return self.domain.h(a) - np.real(self.zeta * np.exp(1j * a))

    def f(self, x):
        x = np.asarray(x, dtype=float)
        if np.any((x < self.X1 - 1e-12) | (x > self.X2 + 1e-12)):
            raise ValueError("x outside [X1, X2]")
        t = np.clip(x - self.X2, -(self.X2 - self.X1), 0.0)
        ylo, _ = self.domain.chord(t, self.psi)
        out = ylo - np.imag(self.zeta * np.exp(1j * self.psi))
        return float(out) if out.ndim == 0 else out

    def g(self, t):
        """Young conjugate ``sup_x (x t - f(x))``."""
        t = np.asarray(t, dtype=float)
        out = np.hypot(1.0, t) * self._hprime(np.arctan2(1.0, t))
        return float(out) if out.ndim == 0 else out

    def g_prime(self, t):
        """Abscissa of the point where the line of slope ``t`` touches the graph."""
        t = np.asarray(t, dtype=float)
        a = np.arctan2(1.0, t) + self.psi
        zs = self.domain._support_point(a)
        out = np.real((zs - self.zeta) * np.exp(1j * self.psi))
        return float(out) if out.ndim == 0 else out

    def f_prime(self, x):
        """Slope of the graph at ``x``, inverting ``g'``."""
        x = float(x)
        if not self.X1 < x < self.X2:
            raise ValueError("x must lie strictly inside (X1, X2)")

        def fun(alpha):
            zs = self.domain._support_point(alpha + self.psi)
            return float(np.real((zs - self.zeta) * np.exp(1j * self.psi))) - x

        alpha = optimize.brentq(fun, 1e-15, np.pi - 1e-15, xtol=1e-15)
        return float(1.0 / np.tan(alpha))


def boundary_graph(domain, zeta):
    zeta = complex(zeta)
    gap, phi = domain.support_gap(zeta)
    if gap <= 0:
        raise PointNotExterior("point not exterior")
    z0 = zeta - gap * np.exp(-1j * phi)
    e = (z0 - zeta) / gap
    psi = float(np.angle(1j * np.conj(e)))
    hp = lambda a: float(domain.h(a + psi) - np.real(zeta * np.exp(1j * (a + psi))))
    return BoundaryGraph(domain, zeta, complex(z0), float(gap), psi, -hp(np.pi), hp(0.0))


# ---------------------------------------------------------------------------
# moduli rho
# ---------------------------------------------------------------------------


def _sup_bisect(measure, delta, cap, rtol=1e-10):
    """``sup{s in (0, cap]: measure(s) <= delta}`` for nondecreasing ``measure``."""
    if measure(cap) <= delta:
        return cap
    lo, hi = 0.0, cap
    while hi - lo > rtol * max(hi, 1e-300):
        mid = 0.5 * (lo + hi)
        if measure(mid) <= delta:
            lo = mid
        else:
            hi = mid
    return lo


def rho(g, t0, delta, g_prime=None, cap=1e6):
    """``sup{s > 0: int_{-s}^{s} |g'(t0 + t) - g'(t0)| dt <= delta}``.

    With ``g_prime`` the integral is computed by quadrature; otherwise the
    identity ``g(t0 + s) + g(t0 - s) - 2 g(t0)`` for convex ``g`` is used.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    if g_prime is None:
        g0 = g(t0)
        measure = lambda s: g(t0 + s) + g(t0 - s) - 2.0 * g0
    else:
        d0 = g_prime(t0)

        def measure(s):
            val, _ = integrate.quad(lambda t: abs(g_prime(t0 + t) - d0), -s, s,
                                    epsabs=1e-14, epsrel=1e-12, limit=200)
            return val

    # grow the bracket before bisecting
    hi = 1.0
    while measure(hi) <= delta and hi < cap:
        hi = min(2 * hi, cap)
    return _sup_bisect(measure, delta, hi)


def rho_pm(f, f_prime, x0, delta, X1, X2):
    """One-sided moduli ``(rho_minus, rho_plus)`` of a convex ``f`` on ``[X1, X2]``."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    f0, d0 = f(x0), f_prime(x0)
    plus = _sup_bisect(lambda s: f(x0 + s) - f0 - s * d0, delta, X2 - x0)
    minus = _sup_bisect(lambda s: f(x0 - s) - f0 + s * d0, delta, x0 - X1)
    return minus, plus
