"""Explicit constants of the norm-equivalence estimates.

The absolute constants of the underlying radial estimate are not known;
they enter as the free factors ``a_abs`` and ``A_abs`` (default 1).
"""

from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln


def a0(beta):
    """``int_0^inf t^{2 beta + 4} e^{-2t} dt = Gamma(2 beta + 5) / 2^{2 beta + 5}``."""
    return float(np.exp(gammaln(2 * beta + 5) - (2 * beta + 5) * np.log(2.0)))


def a_minus(beta):
    """``int_0^1 t (1 + t)^{-(2 beta + 5)} dt``."""
    val, _ = integrate.quad(lambda t: t * (1 + t) ** (-(2 * beta + 5)), 0.0, 1.0,
                            epsabs=0, epsrel=1e-13)
    return val


def a_plus(beta):
    """``int_1^inf t (1 + t)^{-(2 beta + 5)} dt``."""
    val, _ = integrate.quad(lambda t: t * (1 + t) ** (-(2 * beta + 5)), 1.0, np.inf,
                            epsabs=0, epsrel=1e-13)
    return val


def a_lower(beta, a_abs=1.0):
    """Lower constant of the radial estimate."""
    return a_abs * a0(beta) * 2.0 ** (-(2 * beta + 5)) * (1 + 2 * beta) ** 2 / (4 * (2 + beta))


def A_upper(beta, A_abs=1.0):
    """Upper constant of the radial estimate."""
    return (A_abs * a0(beta) * 2 * (2 + beta) ** 2 / (1 + 2 * beta)
            * (1 + a_plus(beta) / a_minus(beta)))


def B0(alpha):
    return 4.0 ** (2 * alpha) / (4.0 ** (2 - alpha) - 1)


def B1(alpha):
    return 4.0 ** (2 * alpha) / (2.0 ** (3 - 2 * alpha) - 1)


def B0_primed(alpha):
    return 4.0 ** (2 * alpha) / (2.0 ** (3 - alpha) - 1)


def B1_primed(alpha):
    return 4.0 ** (2 * alpha) / (2.0 ** (5 - 2 * alpha) - 1)


def B_domain(alpha, R, perimeter, eps):
    return 256 * (20 * R) ** (2 * alpha) * (perimeter + np.pi * eps) ** 2 / (np.pi ** 2 * eps ** (2 * (alpha + 1)))


def localization_factors(alpha, domain, eps=None, moment_condition=False):
    """``(1 + B0)(1 + B)`` and ``(1 + 5R B1)(1 + 5R B)`` for the collar ``D(eps)``.

    The primed pair replaces ``B0, B1`` when ``3/2 <= alpha < 5/2``, which
    requires the moment condition ``F(0) = 0``.
    """
    met = domain.metrics
    eps = 0.5 * met.sigma if eps is None else eps
    if not 0 < eps <= met.R:
        raise ValueError("eps must lie in (0, R(D)]")
    if 0 <= alpha < 1.5:
        b0, b1 = B0(alpha), B1(alpha)
    elif 1.5 <= alpha < 2.5:
        if not moment_condition:
            raise ValueError("alpha >= 3/2 needs the moment condition F(0) = 0")
        b0, b1 = B0_primed(alpha), B1_primed(alpha)
    else:
        raise ValueError("alpha must lie in [0, 5/2)")
    B = B_domain(alpha, met.R, met.perimeter, eps)
    return (1 + b0) * (1 + B), (1 + 5 * met.R * b1) * (1 + 5 * met.R * B)


def m_lower(beta, domain):
    met = domain.metrics
    return 2 / 9 * 4.0 ** (-(beta + 1)) * (1 + 25 * met.diam ** 2 / (4 * met.sigma ** 2)) ** (-(beta + 1))


def M_upper(beta, domain):
    met = domain.metrics
    return 6 * 4.0 ** (beta + 4) * met.diam ** 4 / ((4.0 ** (beta + 1) - 1) * met.area ** 2)


def M0_upper(beta, domain):
    met = domain.metrics
    return 4 * met.diam ** 2 * met.perimeter / (met.sigma ** 2 * met.area)


@dataclass(frozen=True)
class ConstantBundle:
    beta: float
    eps: float
    a_abs: float
    A_abs: float
    a0: float
    a_minus: float
    a_plus: float
    a: float
    A: float
    B0: float
    B1: float
    B0_primed: float
    B1_primed: float
    B: float
    m: float
    M: float
    M0: float
    c: float
    C: float

    def as_dict(self):
        return asdict(self)

    @property
    def spread_bound(self):
        """Largest ratio ``C/c`` allowed by the two-sided estimate."""
        return self.C / self.c


def constant_bundle(beta, domain, eps=None, a_abs=1.0, A_abs=1.0):
    """All explicit constants for ``beta`` in ``(-1/2, 3/2)`` and ``domain``.

    ``B``-constants are evaluated at ``alpha = beta + 1``.  The unprimed pair
    applies for ``beta < 1/2`` and the primed pair for ``beta >= 1/2``; the
    pair outside its regime is reported as NaN (``B1`` is singular at
    ``alpha = 3/2``).
    """
    if not -0.5 < beta < 1.5:
        raise ValueError("beta must lie in (-1/2, 3/2)")
    met = domain.metrics
    eps = 0.5 * met.sigma if eps is None else float(eps)
    if not 0 < eps <= met.R:
        raise ValueError("eps must lie in (0, R(D)]")
    alpha = beta + 1
    am, ap = a_minus(beta), a_plus(beta)
    a = a_lower(beta, a_abs)
    A = A_upper(beta, A_abs)
    nan = float("nan")
    if beta >= 0.5:
        b0, b1 = nan, nan
        b0p, b1p = first, second = B0_primed(alpha), B1_primed(alpha)
    else:
        b0, b1 = first, second = B0(alpha), B1(alpha)
        b0p, b1p = nan, nan
    B = B_domain(alpha, met.R, met.perimeter, eps)
    m, M, M0 = m_lower(beta, domain), M_upper(beta, domain), M0_upper(beta, domain)
    c = m / A / ((1 + first) * (1 + B))
    C = M / a + M0 / a * (1 + 5 * met.R * second) * (1 + 5 * met.R * B)
    return ConstantBundle(beta, eps, a_abs, A_abs, a0(beta), am, ap, a, A,
                          b0, b1, b0p, b1p, B, m, M, M0, c, C)
