"""Integral quantities over a convex domain and its exterior.

Conventions: for ``lam = r e^{i phi}`` the rotated frame is
``w = z e^{i phi} - h(phi)``, so the domain lies in ``Re w <= 0`` and the
chord at depth ``y >= 0`` is ``{Re w = -y}``.  Squared norms are returned
throughout.
"""

from functools import lru_cache
from math import lgamma

import numpy as np
from scipy.special import gammaln, logsumexp

from ._quadrature import (NormValue, QuadratureSpec, endpoint_sqrt_rule,
                          gauss_legendre, left_singular_rule, panels_rule,
                          periodic_rule, two_level)
from .expsum import BorelTransform, ExpSum

TWO_PI = 2.0 * np.pi
DEFAULT_SPEC = QuadratureSpec()


class NormDivergent(ArithmeticError):
    """The requested integral does not converge."""


def _gamma_of(f):
    if isinstance(f, BorelTransform):
        return f
    if isinstance(f, ExpSum):
        return f.gamma
    raise TypeError(f"expected ExpSum or BorelTransform, got {type(f).__name__}")


def _first_dd_order(f, k_max=40):
    """Index of the first nonzero Laurent coefficient of ``gamma''``."""
    if isinstance(f, ExpSum):
        return f.zero_order(k_max)
    # a bare transform: rebuild the exponential sum it came from
    terms = []
    for lam, order, coef in f.poles:
        terms.append((coef / np.exp(lgamma(order)), order - 1, lam))
    return ExpSum(tuple(terms)).zero_order(k_max)


# ---------------------------------------------------------------------------
# chord rule and the Laplace kernel
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8192)
def _chord_rule_cached(domain, phi, n, levels):
    W = float(domain.width(phi))
    breaks = [0.0] + [np.pi * 2.0 ** -k for k in range(levels, 0, -1)] + [np.pi]
    kinks = domain.chord_kinks(phi)
    if kinks.size:
        breaks += list(np.arccos(1.0 - 2.0 * kinks / W))
    breaks = np.unique(np.array(breaks))
    th, wt = panels_rule(breaks, n)
    y = 0.5 * W * (1.0 - np.cos(th))
    dy = 0.5 * W * np.sin(th) * wt
    weights = domain.chord_length(-y, phi) * dy
    keep = weights > 0
    y, weights = y[keep], weights[keep]
    y.setflags(write=False)
    weights.setflags(write=False)
    return y, weights


def chord_rule(domain, phi, n=24, levels=14):
    """Nodes ``y_j`` (depths) and weights ``W_j`` with ``sum W_j g(y_j) ~ int u g``.

    The weights include the chord length, so they sum to the area of the
    domain.  Depths are graded geometrically toward the support line.
    """
    return _chord_rule_cached(domain, float(np.mod(phi, TWO_PI)), int(n), int(levels))


def log_kernel_reduced(domain, phi, r, n=16, levels=10):
    """``log(K(r e^{i phi}) e^{-2 r h(phi)})`` for an array of ``r >= 0``.

    The default rule is accurate to about 1e-14 for ``r W(phi)`` up to a few
    thousand; it does not follow the mesh of the outer quadrature.
    """
    y, W = chord_rule(domain, phi, n, levels)
    r = np.asarray(r, dtype=float)
    flat = r.ravel()
    # every term is at most exp(-2 r y_min), so shifting by it cannot overflow
    y0 = y[0]
    sums = np.exp(-2.0 * flat[:, None] * (y - y0)[None, :]) @ W
    return (np.log(sums) - 2.0 * flat * y0).reshape(r.shape)


def log_laplace_kernel(domain, lam, n=24):
    """Natural log of ``K(lam) = int_D exp(2 Re(lam z)) dm(z)``."""
    r, phi = abs(lam), float(np.angle(lam))
    return 2.0 * r * float(domain.h(phi)) + float(log_kernel_reduced(domain, phi, r, n))


def laplace_kernel(domain, lam, n=24):
    """Squared ``L2(D)`` norm of ``exp(lam z)``."""
    lk = log_laplace_kernel(domain, complex(lam), n)
    if lk > 709.0:
        raise OverflowError(f"K(lambda) = exp({lk:.1f}) is not representable")
    return float(np.exp(lk))


def _boundary_rule(domain, n, max_width=TWO_PI / 64):
    """Gauss rule over the smooth part of the boundary measure in angle."""
    atoms = sorted(a for a, _ in domain.atoms)
    if atoms:
        breaks = np.array(atoms + [atoms[0] + TWO_PI])
    else:
        breaks = np.array([0.0, TWO_PI])
    fine = [breaks[0]]
    for a, b in zip(breaks[:-1], breaks[1:]):
        k = max(1, int(np.ceil((b - a) / max_width)))
        fine += list(np.linspace(a, b, k + 1)[1:])
    th, w = panels_rule(np.array(fine), n)
    return th, w * domain.density(th)


def log_boundary_kernel(domain, lam, n=24):
    """Natural log of ``K1(lam) = int_{dD} exp(2 Re(lam z)) ds(z)``."""
    lam = complex(lam)
    r, phi = abs(lam), float(np.angle(lam))
    h = float(domain.h(phi))
    e = np.exp(1j * phi)
    th, w = _boundary_rule(domain, n)
    expo = 2.0 * r * (np.real(domain._support_point(th) * e) - h)
    logs = [logsumexp(expo, b=w)]
    for k, (_, length) in enumerate(domain.atoms):
        p1, p2 = domain.segment_endpoints(k)
        a = 2.0 * r * (np.real(p1 * e) - h)
        b = 2.0 * r * (np.real(p2 * e) - h)
        if abs(a - b) < 1e-12:
            logs.append(np.log(length) + 0.5 * (a + b))
        else:
            hi, lo = max(a, b), min(a, b)
            logs.append(np.log(length) + hi + np.log(-np.expm1(lo - hi)) - np.log(hi - lo))
    return 2.0 * r * h + float(logsumexp(logs))


def boundary_kernel(domain, lam, n=24):
    lk = log_boundary_kernel(domain, lam, n)
    if lk > 709.0:
        raise OverflowError(f"K1(lambda) = exp({lk:.1f}) is not representable")
    return float(np.exp(lk))


# ---------------------------------------------------------------------------
# P_beta norm
# ---------------------------------------------------------------------------


def _radial_layout(domain, f, phi, spec):
    lam = f.frequencies
    e = np.exp(1j * phi)
    h = float(domain.h(phi))
    delta = h - float(np.max(np.real(lam * e)))
    if delta <= 0:
        raise NormDivergent(f"F grows at least like exp(r h(phi)) in direction {phi:.6g}")
    im = np.imag(lam * e)
    omega = float(np.ptp(im)) if lam.size > 1 else 0.0
    cap = 2.0 / delta
    if omega > 0:
        cap = min(cap, 6.0 / omega)
    r1 = 0.25 / max(1.0, domain.metrics.R + float(np.max(np.abs(lam))))
    mmax = max(m for _, m, _ in f.terms)
    r_max = (-np.log(spec.truncation) + (2 * mmax + 4) * np.log(2.0 + 50.0 / delta)) / (2.0 * delta)
    breaks = [r1]
    while breaks[-1] < r_max:
        breaks.append(breaks[-1] + min(breaks[-1], cap))
        if len(breaks) > spec.max_subdiv:
            raise NormDivergent("radial panel budget exhausted")
    return h, delta, r1, np.array(breaks)


def _radial_value(domain, f, beta, phi, spec):
    m0 = f.zero_order()
    power = 2 * m0 - 2 * beta
    if power <= -1:
        raise NormDivergent(
            f"integrand behaves like r^{power:g} at r = 0 (F has a zero of order {m0}, beta = {beta:g})")
    n = spec.nodes
    h, delta, r1, breaks = _radial_layout(domain, f, phi, spec)
    e = np.exp(1j * phi)
    # first panel: weight r^power taken exactly
    r0, w0 = left_singular_rule(r1, n, power)
    z0 = r0 * e
    if m0:
        F0 = f.deflated(z0, m0) * e ** m0
    else:
        F0 = f.eval_F(z0)
    g0 = np.abs(F0) ** 2 * np.exp(-2.0 * r0 * h - log_kernel_reduced(domain, phi, r0))
    head = float(np.sum(w0 * g0))
    rr, ww = panels_rule(breaks, n)
    Fs = f.eval_scaled(rr * e, rr * h)
    integrand = np.abs(Fs) ** 2 * np.exp(-log_kernel_reduced(domain, phi, rr) - 2 * beta * np.log(rr))
    body = float(np.sum(ww * integrand))
    peak = max(float(np.max(integrand)), float(np.max(g0 * r0 ** power)))
    if integrand[-1] > 1e3 * spec.truncation * peak:
        raise NormDivergent("radial integrand did not decay")
    return head + body


def radial_integral(domain, f, beta, phi, spec=DEFAULT_SPEC):
    """``I_phi = int_0^inf |F(r e^{i phi})|^2 / (K(r e^{i phi}) r^{2 beta}) dr``."""
    return two_level(lambda s: _radial_value(domain, f, beta, phi, s), spec, "radial")


def _pbeta_value(domain, f, beta, spec):
    phis, w = periodic_rule(spec.angles, start=np.pi / spec.angles)
    w = w * domain.density(phis)
    total = 0.0
    for phi, wi in zip(phis, w):
        if wi > 0:
            total += wi * _radial_value(domain, f, beta, phi, spec)
    for ang, length in domain.atoms:
        total += length * _radial_value(domain, f, beta, ang, spec)
    return total


def pbeta_norm(domain, f, beta, spec=DEFAULT_SPEC):
    """Squared ``P_beta`` norm, integrating ``I_phi`` against the arc measure."""
    if beta <= -0.5:
        raise ValueError("beta must exceed -1/2")
    return two_level(lambda s: _pbeta_value(domain, f, beta, s), spec, "pbeta")


# ---------------------------------------------------------------------------
# exterior integrals
# ---------------------------------------------------------------------------


def _angular_rule(domain, n):
    """Angles and weights for smooth integrands of the normal angle."""
    atoms = sorted(a for a, _ in domain.atoms)
    if not atoms:
        return periodic_rule(n)
    breaks = atoms + [atoms[0] + TWO_PI]
    th, w = [], []
    x, wx = gauss_legendre(max(8, n // len(atoms)))
    for a, b in zip(breaks[:-1], breaks[1:]):
        k = max(1, int(np.ceil((b - a) * n / (TWO_PI * 8))))
        edges = np.linspace(a, b, k + 1)
        t, wt = panels_rule(edges, len(x))
        th.append(t)
        w.append(wt)
    return np.concatenate(th), np.concatenate(w)


def _ray_exit(z, n, rho):
    """Length ``d`` with ``|z + d n| = rho`` for unit ``n`` and ``|z| < rho``."""
    b = np.real(z * np.conj(n))
    return -b + np.sqrt(b * b - np.abs(z) ** 2 + rho * rho)


_OUTER_FRACTIONS = np.array([0.0, 1 / 16, 1 / 8, 1 / 4, 1 / 2, 1.0])
_SPLIT_FRACTIONS = np.array([0.0, 0.25, 1.0])


def _ray_blocks(base, nrm, w_base, dens, spec, eps, rho, near_power, far_power,
                outer_break=None):
    # area element: (dens + d) dphi dd along arcs; ds dd along segments (dens None)
    """Blocks along the normal rays ``base + d * nrm``, ``d > 0``.

    ``collar`` covers ``d < eps`` with the rule weight ``d**near_power``;
    ``outer`` reaches the circle ``|zeta| = rho``; ``far`` continues to
    infinity in ``s = d_exit / d`` with the rule weight ``s**far_power``.
    A power of ``None`` selects a square-root substitution instead, which
    keeps the nodes independent of the integrand.
    ``outer_break`` (one distance per ray) splits the outer block where the
    integrand has a weak singularity.
    Each block is ``(label, zeta, d, phi_index, weight, divisor)``.
    """
    n = spec.nodes
    dexit = _ray_exit(base, nrm, rho)[:, None]
    jac = (lambda d: 1.0) if dens is None else (lambda d, r=dens[:, None]: r + d)
    w_base = w_base[:, None]
    zb, nb = base[:, None], nrm[:, None]
    if near_power is None:
        # d = eps tau^2 absorbs half-integer powers of d
        tau, wtau = panels_rule(np.array([0.0, 1.0]), n)
        t, wt = eps * tau ** 2, 2.0 * eps * tau * wtau
        near_div = np.ones(n)
    else:
        t, wt = left_singular_rule(eps, n, near_power)
        near_div = t ** near_power
    d = np.broadcast_to(t[None, :], (base.size, n))
    yield "collar", zb + d * nb, d, w_base * wt * jac(d), np.broadcast_to(near_div, d.shape)
    if outer_break is None:
        f, wf = panels_rule(_OUTER_FRACTIONS, n)
        span = dexit - eps
        d = eps + span * f[None, :]
        w = span * wf
    else:
        f, wf = panels_rule(_SPLIT_FRACTIONS, n)
        mid = np.clip(outer_break[:, None], eps, dexit)
        # both halves graded towards the break
        d = np.concatenate([mid - (mid - eps) * f, mid + (dexit - mid) * f], axis=1)
        w = np.concatenate([(mid - eps) * wf, (dexit - mid) * wf], axis=1)
    yield "outer", zb + d * nb, d, w_base * w * jac(d), np.ones_like(d)
    if far_power is None:
        sig, wsig = panels_rule(np.array([0.0, 0.5 ** 0.5, 1.0]), n)
        s, ws = sig ** 2, 2.0 * sig * wsig
        far_div = np.ones_like(s)
    else:
        s1, w1 = left_singular_rule(0.5, n, far_power)
        s2, w2 = panels_rule(np.array([0.5, 1.0]), n)
        s = np.concatenate([s1, s2])
        ws = np.concatenate([w1, w2 * s2 ** far_power])
        far_div = s ** far_power
    d = dexit / s[None, :]
    yield "far", zb + d * nb, d, w_base * ws * dexit / s ** 2 * jac(d), np.broadcast_to(far_div, d.shape)


def _saturation_distance(domain, base, nrm, iterations=60, grid=1024):
    """Distance along each ray at which it leaves the set ``2D - D``.

    Beyond that set some support line of ``D``, moved out to ``zeta``, misses
    ``D`` entirely; the weight ``p`` is not smooth across its boundary.
    """
    th = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    hE = 2.0 * domain.h(th) + domain.h(th + np.pi)
    e = np.exp(1j * th)

    def outside(d):
        zeta = base + d * nrm
        return np.max(np.real(zeta[:, None] * e[None, :]) - hE[None, :], axis=1) > 0

    lo = np.zeros(base.shape)
    hi = np.full(base.shape, 4.0 * domain.metrics.R)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        out = outside(mid)
        hi = np.where(out, mid, hi)
        lo = np.where(out, lo, mid)
    return 0.5 * (lo + hi)


def _exterior_nodes(domain, spec, eps, rho, near_power, far_power, angles=None,
                    split_saturation=False):
    """Quadrature blocks covering the exterior of ``D`` in normal coordinates.

    Points are ``zeta = z + d n`` with ``z`` on the boundary and ``n`` the
    outward normal there, so ``d`` is the exact distance to ``D`` and the
    normal angle is known.  Yields ``(label, zeta, d, phi, weight, divisor)``.
    """
    phis, wphi = _angular_rule(domain, angles or 2 * spec.angles)
    z = domain._support_point(phis)
    nrm = np.exp(-1j * phis)
    dens = domain.density(phis)
    brk = _saturation_distance(domain, z, nrm) if split_saturation else None
    for label, zeta, d, w, div in _ray_blocks(z, nrm, wphi, dens, spec, eps, rho,
                                              near_power, far_power, brk):
        yield label, zeta, d, np.broadcast_to(phis[:, None], d.shape), w, div
    # rectangles over straight boundary segments
    for k, (ang, length) in enumerate(domain.atoms):
        p1, p2 = domain.segment_endpoints(k)
        npan = max(2, int(np.ceil(16 * length / domain.metrics.perimeter)))
        sl, wl = panels_rule(np.linspace(0.0, length, npan + 1), spec.nodes)
        base = p1 + sl * (p2 - p1) / length
        nk = np.full(base.shape, np.exp(-1j * ang))
        brk = _saturation_distance(domain, base, nk) if split_saturation else None
        for label, zeta, d, w, div in _ray_blocks(base, nk, wl, None, spec, eps,
                                                  rho, near_power, far_power, brk):
            yield label, zeta, d, np.full(d.shape, ang), w, div


def _check_eps(domain, eps):
    R = domain.metrics.R
    if eps is None:
        eps = 0.5 * domain.metrics.sigma
    if not 0 < eps <= R:
        raise ValueError(f"collar width must lie in (0, R(D)] = (0, {R:g}]")
    return float(eps)


def _exterior_parts(domain, f, weight, near_power, far_power, eps, spec, regions=None):
    """Integrate ``|gamma''|^2 weight`` over the exterior, split into parts.

    ``weight(zeta, d, phi)`` is divided by the factor that the rule of each
    block carries exactly (``d**near_power`` on the collar, ``s**far_power``
    in the far field).
    """
    gamma = _gamma_of(f)
    rho = spec.split_radius * domain.metrics.R
    if far_power <= -1:
        raise NormDivergent("exterior integral diverges at infinity")
    parts = {"collar": 0.0, "outer": 0.0, "far": 0.0}
    if regions is not None:
        parts = {k: 0.0 for k in regions}
    for label, zeta, d, phi, w, div in _exterior_nodes(domain, spec, eps, rho, near_power, far_power):
        if label not in parts:
            continue
        val = np.abs(gamma.dd(zeta)) ** 2 * weight(zeta, d, phi) / div
        parts[label] += float(np.sum(w * val))
    return parts


def _two_level_parts(compute, spec, label):
    coarse = compute(spec)
    fine_spec = spec.refined()
    fine = compute(fine_spec)
    meshes = ((label, spec.nodes, spec.angles), (label, fine_spec.nodes, fine_spec.angles))
    out = {k: NormValue(fine[k], abs(fine[k] - coarse[k]), meshes) for k in fine}
    tot_f, tot_c = sum(fine.values()), sum(coarse.values())
    out["total"] = NormValue(tot_f, abs(tot_f - tot_c), meshes)
    return out


def galpha_parts(domain, f, alpha, eps=None, spec=DEFAULT_SPEC):
    """Pieces of ``int |gamma''|^2 dist^{2 alpha} dm`` over the exterior.

    Keys: ``collar`` (the set ``D(eps) minus D``), ``outer`` (rest of the disk
    of radius ``split_radius * R``), ``far`` and ``total``.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    eps = _check_eps(domain, eps)
    k0 = _first_dd_order(f)
    far_power = 3 + 2 * k0 - 2 * alpha
    weight = lambda zeta, d, phi: d ** (2 * alpha)
    return _two_level_parts(
        lambda s: _exterior_parts(domain, f, weight, 2 * alpha, far_power, eps, s), spec, "galpha")


def galpha_norm(domain, f, alpha, eps=None, spec=DEFAULT_SPEC):
    """Squared ``G^alpha`` norm of the Borel transform of ``f``."""
    return galpha_parts(domain, f, alpha, eps, spec)["total"]


def localized_integral(domain, f, alpha, eps=None, spec=DEFAULT_SPEC):
    """``int_{D(eps) minus D} |gamma''|^2 dist^{2 alpha} dm``."""
    return galpha_parts(domain, f, alpha, eps, spec)["collar"]


class _PField:
    """Exterior nodes with the angular data of ``p`` and ``p0`` precomputed.

    Node placement does not depend on ``beta`` or the test function, so one
    field serves every weighted integral over the same domain and mesh.
    """

    def __init__(self, domain, spec, eps):
        rho = spec.split_radius * domain.metrics.R
        blocks = list(_exterior_nodes(domain, spec, eps, rho, None, None,
                                      split_saturation=True))
        self.labels = np.concatenate([np.full(b[1].size, b[0]) for b in blocks])
        self.zeta = np.concatenate([b[1].ravel() for b in blocks])
        self.w = np.concatenate([b[4].ravel() for b in blocks])
        phi = np.concatenate([b[3].ravel() for b in blocks])
        self.comp = _chunked_components(domain, self.zeta, spec.nodes, phi)
        self._cache = {}

    def weight(self, beta, kind):
        key = (float(beta), kind)
        if key not in self._cache:
            self._cache[key] = _p_from_components(self.comp, beta, zero_order=(kind == "p0"))
        return self._cache[key]

    def parts(self, f, beta, kind, regions):
        gamma = _gamma_of(f)
        val = self.w * np.abs(gamma.dd(self.zeta)) ** 2
        out = {}
        for r in regions:
            mask = self.labels == r
            out[r] = float(np.sum(val[mask] * self.weight(beta, kind)[mask]))
        return out


def _chunked_components(domain, zeta, n, phi, chunk=2048):
    pieces = [p_components(domain, zeta[i:i + chunk], n, phi_star=phi[i:i + chunk])
              for i in range(0, zeta.size, chunk)]
    g, s, u, w = (np.concatenate([c[j] for c in pieces]) for j in range(4))
    atoms = [tuple(np.concatenate([c[4][k][j] for c in pieces]) for j in range(4))
             for k in range(len(pieces[0][4]))]
    return g, s, u, w, atoms


@lru_cache(maxsize=8)
def _pfield(domain, spec, eps):
    return _PField(domain, spec, eps)


def weighted_exterior_integral(domain, f, weight="p", beta=0.0, region="total",
                               eps=None, spec=DEFAULT_SPEC):
    """``int |gamma''|^2 w dm`` for ``w`` in {"p", "p0", ("dist", k)}.

    ``region`` selects ``collar`` (``D(eps)`` minus ``D``), ``outer``, ``far``
    or ``total``.  ``p0`` is only finite on the collar of width ``sigma/2``.
    """
    eps = _check_eps(domain, eps)
    if isinstance(weight, tuple) and weight[0] == "dist":
        return galpha_parts(domain, f, 0.5 * float(weight[1]), eps, spec)[region]
    if weight not in ("p", "p0"):
        raise ValueError(f"unknown weight {weight!r}")
    if weight == "p0" and (region != "collar" or eps > 0.5 * domain.metrics.sigma):
        raise ValueError("p0 is only defined on the collar of width at most sigma/2")
    k0 = _first_dd_order(f)
    if 2 * k0 - 2 * beta <= -1:
        raise NormDivergent("weighted integral diverges at infinity")
    regions = ("collar",) if weight == "p0" else ("collar", "outer", "far")

    def compute(s):
        return _pfield(domain, s, eps).parts(f, beta, weight, regions)

    return _two_level_parts(compute, spec, f"weighted-{weight}")[region]


# ---------------------------------------------------------------------------
# Laurent tail
# ---------------------------------------------------------------------------


def laurent_tail(f, t, rho, abs_tol=1e-12, k_max=5000):
    """Exact ``int_{|zeta| >= rho} |gamma''|^2 |zeta|^{2t} dm`` by orthogonality."""
    lam_max = float(np.max(np.abs(f.frequencies)))
    if rho <= lam_max:
        raise NormDivergent("tail radius must exceed the pole radius")
    k0 = f.zero_order()
    if t >= 2 + k0:
        raise NormDivergent(f"tail divergent: t = {t:g} >= {2 + k0}")
    total = 0.0
    chunk = 64
    start = 0
    while start <= k_max:
        coeffs = f.laurent_gamma_dd_coeffs(start + chunk - 1)[start:]
        k = np.arange(start, start + chunk)
        expo = k + 2 - t
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(np.abs(coeffs) > 0,
                             np.abs(coeffs) ** 2 / (2 * expo) * float(rho) ** (-2.0 * expo), 0.0)
        total += TWO_PI * float(np.sum(terms[k >= k0]))
        if k[-1] > k0 and TWO_PI * terms[-1] < min(abs_tol, 1e-16 * total) and \
                (lam_max / rho) ** (2 * k[-1]) * k[-1] ** 6 < 1e-17:
            return total
        start += chunk
    raise NormDivergent("Laurent tail did not converge")


def polar_tail_quadrature(f, t, rho, n=32, angles=256):
    """The same tail by direct polar quadrature (independent oracle)."""
    gamma = _gamma_of(f)
    k0 = _first_dd_order(f)
    power = 2 * k0 + 3 - 2 * t
    th, wth = periodic_rule(angles)
    s1, w1 = left_singular_rule(0.5, n, power)
    s2, w2 = panels_rule(np.array([0.5, 1.0]), n)
    s = np.concatenate([s1, s2])
    ws = np.concatenate([w1, w2 * s2 ** power])
    r = rho / s
    zeta = r[None, :] * np.exp(1j * th)[:, None]
    val = np.abs(gamma.dd(zeta)) ** 2 * (r ** (2 * t) * rho ** 2 / s ** 3 / s ** power)[None, :]
    return float(np.sum(wth[:, None] * ws[None, :] * val))


# ---------------------------------------------------------------------------
# half-plane integral
# ---------------------------------------------------------------------------


def _line_integral_dd(gamma, phi, h, X):
    """``int_R |gamma''(e^{-i phi}(h + X - i y))|^2 dy`` in closed form.

    Uses ``int (a - iy)^{-p} (b + iy)^{-q} dy = 2 pi Gamma(p+q-1) /
    (Gamma(p) Gamma(q)) (a + b)^{1-p-q}`` for ``Re a, Re b > 0``.
    """
    e = np.exp(1j * phi)
    lam = np.array([p[0] for p in gamma.poles])
    order = np.array([p[1] for p in gamma.poles], dtype=float)
    p = order + 2
    C = np.array([p_[2] for p_ in gamma.poles]) * order * (order + 1) * e ** p
    X = np.asarray(X, dtype=float)
    A = h + X[..., None] - lam * e                         # (..., J)
    S = A[..., :, None] + np.conj(A)[..., None, :]         # (..., J, J)
    P = p[:, None] + p[None, :]
    coef = TWO_PI * np.exp(gammaln(P - 1) - gammaln(p)[:, None] - gammaln(p)[None, :])
    terms = (C[:, None] * np.conj(C)[None, :]) * coef * S ** (1 - P)
    return np.real(np.sum(terms, axis=(-1, -2)))


def _halfplane_value(domain, f, beta, phi, spec):
    gamma = _gamma_of(f)
    k0 = _first_dd_order(f)
    q = 2 * k0 - 2 * beta
    if q <= -1:
        raise NormDivergent("half-plane integral diverges at infinity")
    n = spec.nodes
    h = float(domain.h(phi))
    W = float(domain.width(phi))
    area = domain.metrics.area
    kinks = domain.chord_kinks(phi)
    X1 = W / 8 if kinks.size == 0 else min(W / 8, 0.5 * float(kinks.min()))
    a = 2 * beta + 1.5
    x0, w0 = left_singular_rule(X1, n, a)
    s0 = domain.section(-x0, phi)
    head = np.sum(w0 * x0 ** 1.5 / s0 * _line_integral_dd(gamma, phi, h, x0))
    pts = np.unique(np.concatenate([[X1, W / 4, W / 2], kinks[(kinks > X1) & (kinks < W)]]))
    xm, wm = panels_rule(pts, n)
    xe, we = endpoint_sqrt_rule(pts[-1], W, n, at_right=True)
    x = np.concatenate([xm, xe])
    wx = np.concatenate([wm, we])
    body = np.sum(wx * x ** (2 * beta + 3) / domain.section(-x, phi) * _line_integral_dd(gamma, phi, h, x))
    # X = W / tau beyond the far support line, weight tau^q exact
    t1, v1 = left_singular_rule(0.5, n, q)
    t2, v2 = panels_rule(np.array([0.5, 1.0]), n)
    tau = np.concatenate([t1, t2])
    wt = np.concatenate([v1, v2 * t2 ** q])
    X = W / tau
    tail = np.sum(wt * X ** (2 * beta + 3) / area * _line_integral_dd(gamma, phi, h, X)
                  * W / tau ** 2 / tau ** q)
    return float(head + body + tail)


def halfplane_integral(domain, f, beta, phi, spec=DEFAULT_SPEC):
    """``int int |gamma''(e^{-i phi}(h - x - i y))|^2 |x|^{2 beta + 3} / s(x, phi) dx dy``
    over ``x < 0``."""
    if beta <= -0.5:
        raise ValueError("beta must exceed -1/2")
    return two_level(lambda s: _halfplane_value(domain, f, beta, phi, s), spec, "halfplane")


# ---------------------------------------------------------------------------
# K0 and the weights p, p0
# ---------------------------------------------------------------------------


def a0(beta):
    """``int_0^inf t^{2 beta + 4} e^{-2t} dt``."""
    return float(np.exp(gammaln(2 * beta + 5) - (2 * beta + 5) * np.log(2.0)))


def K0(domain, t, phi, beta, n=24):
    """``a0(beta) int_{D_phi} |x + t|^{-(2 beta + 5)} dx dy`` for ``t < 0``."""
    if not t < 0:
        raise ValueError("K0 needs t < 0")
    y, W = chord_rule(domain, phi, n)
    return a0(beta) * float(np.sum(W * (y - t) ** (-(2 * beta + 5))))


def _cos_map(a, b, n):
    x, w = gauss_legendre(n)
    tau = 0.5 * np.pi * (x + 1.0)
    wt = 0.5 * np.pi * w
    th = a[..., None] + 0.5 * (b - a)[..., None] * (1.0 - np.cos(tau))
    wth = 0.5 * (b - a)[..., None] * np.sin(tau) * wt
    return th, wth


def _bisect_vec(fun, lo, hi, iterations=55):
    flo = fun(lo) > 0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        fm = fun(mid) > 0
        same = fm == flo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def p_components(domain, zeta, n=24, phi_star=None, scan=48):
    """Angular rule behind ``p`` and ``p0`` at exterior points ``zeta``.

    Returns ``(g, s, u, w, atoms)`` where ``w`` includes the arc density and
    ``atoms`` is a list of ``(g, s, u, length)`` arrays for straight boundary
    segments whose normal angle lies strictly between the tangent angles.
    """
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex)).ravel()
    if phi_star is None:
        gap, phi_star = domain.support_gap(zeta)
        if np.any(gap <= 0):
            raise ValueError("point not exterior")
    else:
        phi_star = np.atleast_1d(np.asarray(phi_star, dtype=float)).ravel()
    zc = zeta

    def gfun(th, z=zc):
        return np.real(z[:, None] * np.exp(1j * th)) - domain.h(th)

    lo = _bisect_vec(lambda th: gfun(th[:, None])[:, 0], phi_star - np.pi, phi_star)
    hi = _bisect_vec(lambda th: gfun(th[:, None])[:, 0], phi_star, phi_star + np.pi)
    # angles where the moved support line leaves the domain (g = width)
    grid = lo[:, None] + (hi - lo)[:, None] * (np.arange(1, scan) / scan)[None, :]
    G = gfun(grid) - domain.width(grid)
    pos = G > 0
    any_pos = np.any(pos, axis=1)
    first = np.argmax(pos, axis=1)
    last = scan - 2 - np.argmax(pos[:, ::-1], axis=1)
    rows = np.arange(zeta.size)

    def sat_fun(th):
        return gfun(th[:, None])[:, 0] - domain.width(th)

    left_lo = np.where(first > 0, grid[rows, np.maximum(first - 1, 0)], lo)
    s1 = _bisect_vec(sat_fun, left_lo, grid[rows, first])
    right_hi = np.where(last < scan - 2, grid[rows, np.minimum(last + 1, scan - 2)], hi)
    s2 = _bisect_vec(sat_fun, grid[rows, last], right_hi)
    s1 = np.where(any_pos, s1, phi_star)
    s2 = np.where(any_pos, s2, phi_star)
    cols = [lo, s1, s2, hi]
    atoms = domain.atoms
    for ang, _ in atoms:
        a = lo + np.mod(ang - lo, TWO_PI)
        cols.append(np.clip(a, lo, hi))
    breaks = np.sort(np.stack(cols, axis=1), axis=1)
    th, w = _cos_map(breaks[:, :-1], breaks[:, 1:], n)
    th = th.reshape(zeta.size, -1)
    w = w.reshape(zeta.size, -1) * domain.density(th)
    g = np.maximum(gfun(th), 0.0)
    width = domain.width(th)
    s = domain.section(-np.minimum(g, width), th)
    u = domain.chord_length(-np.minimum(g, width), th)
    atom_terms = []
    for ang, length in atoms:
        a = lo + np.mod(ang - lo, TWO_PI)
        inside = a < hi
        ga = np.where(inside, np.real(zeta * np.exp(1j * a)) - domain.h(a), 0.0)
        wa = domain.width(a)
        sa = domain.section(-np.minimum(ga, wa), a)
        ua = domain.chord_length(-np.minimum(ga, wa), a)
        atom_terms.append((np.maximum(ga, 0.0), sa, ua, np.where(inside, length, 0.0)))
    return g, s, u, w, atom_terms


def _p_from_components(comp, beta, zero_order=False):
    g, s, u, w, atoms = comp
    with np.errstate(divide="ignore", invalid="ignore"):
        if zero_order:
            val = np.sum(np.where(w > 0, w * g ** (2 * beta + 2) / u, 0.0), axis=1)
        else:
            val = np.sum(np.where(w > 0, w * g ** (2 * beta + 3) / s, 0.0), axis=1)
        for ga, sa, ua, length in atoms:
            if zero_order:
                val = val + np.where(length > 0, length * ga ** (2 * beta + 2) / ua, 0.0)
            else:
                val = val + np.where(length > 0, length * ga ** (2 * beta + 3) / sa, 0.0)
    return val


def p_weight(domain, zeta, beta, spec=DEFAULT_SPEC, phi_star=None):
    """``p(zeta) = int (Re zeta e^{i t} - h(t))^{2 beta + 3} / s(., t) dDelta(t)``."""
    shape = np.shape(zeta)
    comp = p_components(domain, zeta, spec.nodes, phi_star)
    val = _p_from_components(comp, beta).reshape(shape)
    return float(val) if val.ndim == 0 else val


def p0_weight(domain, zeta, beta, spec=DEFAULT_SPEC, phi_star=None):
    """``p0(zeta)``: as ``p`` with exponent ``2 beta + 2`` and the chord ``u``.

    Infinite where the moved support line misses the domain.
    """
    shape = np.shape(zeta)
    comp = p_components(domain, zeta, spec.nodes, phi_star)
    val = _p_from_components(comp, beta, zero_order=True).reshape(shape)
    return float(val) if val.ndim == 0 else val
