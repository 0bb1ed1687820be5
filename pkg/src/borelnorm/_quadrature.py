"""Fixed-order quadrature building blocks.

Every integral in the package is assembled from composite Gauss rules on
panels chosen by the caller, so that a "mesh" is fully described by the
panel layout plus the number of nodes per panel.  Doubling the node count
gives the refined mesh used for error estimates.
"""

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and mesh parameters shared by the norm engines.

    Parameters
    ----------
    rel_tol, abs_tol : float
        Target relative / absolute accuracy of reported values.
    max_subdiv : int
        Upper bound on the number of panels of any 1D composite rule.
    nodes : int
        Gauss nodes per panel on the coarse mesh.
    angles : int
        Nodes of the periodic angular rule on the coarse mesh.
    refine_factor : int
        Multiplier applied to ``nodes`` and ``angles`` by one refinement.
    split_radius : float
        Near/far split of exterior integrals, in units of R(D).
    truncation : float
        Radial integrals stop once the integrand falls below this fraction
        of its running maximum.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdiv: int = 400
    nodes: int = 24
    angles: int = 64
    refine_factor: int = 2
    split_radius: float = 4.0
    truncation: float = 1e-17

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.refine_factor <= 1:
            raise ValueError("refine_factor must exceed 1")
        if self.nodes < 2 or self.angles < 4:
            raise ValueError("mesh too coarse")

    def refined(self, steps=1):
        """Return the spec after ``steps`` refinement steps."""
        f = self.refine_factor ** steps
        return replace(self, nodes=self.nodes * f, angles=self.angles * f)


@dataclass(frozen=True)
class NormValue:
    """A computed integral with a refinement-based error estimate."""

    value: float
    error_estimate: float
    meshes: tuple = ()

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError(f"non-finite integral value {self.value!r}")
        if self.error_estimate < 0:
            raise ValueError("negative error estimate")

    @property
    def rel_error(self):
        return self.error_estimate / abs(self.value) if self.value else np.inf

    def __float__(self):
        return float(self.value)

    def scaled(self, factor):
        return NormValue(self.value * factor, self.error_estimate * abs(factor), self.meshes)

    def __add__(self, other):
        if isinstance(other, NormValue):
            return NormValue(self.value + other.value,
                             self.error_estimate + other.error_estimate,
                             self.meshes)
        return NotImplemented


def two_level(compute, spec, label=""):
    """Evaluate ``compute(spec)`` on the coarse and refined meshes.

    The refined value is reported; the error estimate is the absolute
    difference between the two levels.
    """
    coarse = float(compute(spec))
    fine_spec = spec.refined()
    fine = float(compute(fine_spec))
    meshes = ((label, spec.nodes, spec.angles), (label, fine_spec.nodes, fine_spec.angles))
    return NormValue(fine, abs(fine - coarse), meshes)


@lru_cache(maxsize=None)
def gauss_legendre(n):
    x, w = roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def gauss_jacobi_left(n, power):
    """Nodes/weights on [0, 1] for the weight ``x**power``."""
    if power <= -1:
        raise ValueError(f"weight x**{power} is not integrable at 0")
    x, w = roots_jacobi(n, 0.0, power)
    t = 0.5 * (1.0 + x)
    wt = w * 0.5 ** (power + 1.0)
    t.setflags(write=False)
    wt.setflags(write=False)
    return t, wt


def panels_rule(breaks, n):
    """Composite Gauss-Legendre rule on consecutive panels ``breaks``."""
    breaks = np.asarray(breaks, dtype=float)
    a, b = breaks[:-1], breaks[1:]
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def left_singular_rule(length, n, power):
    """Rule for ``int_0^length x**power g(x) dx`` returning (nodes, weights).

    The weights already contain ``x**power``; callers multiply by ``g`` only.
    """
    t, w = gauss_jacobi_left(n, float(power))
    return length * t, length ** (power + 1.0) * w


def endpoint_sqrt_rule(a, b, n, at_right=True):
    """Gauss rule on [a, b] after the substitution ``x = b - (b - a) w**2``.

    Regularises integrands behaving like ``(b - x)**(k/2)`` at the right end
    (or at the left end when ``at_right`` is false).
    """
    x, w = gauss_legendre(n)
    s = 0.5 * (1.0 + x)
    ws = 0.5 * w
    length = b - a
    if at_right:
        nodes = b - length * s ** 2
    else:
        nodes = a + length * s ** 2
    return nodes, 2.0 * length * s * ws


def periodic_rule(n, start=0.0):
    """Trapezoid rule on [start, start + 2*pi)."""
    phi = start + 2.0 * np.pi * np.arange(n) / n
    return phi, np.full(n, 2.0 * np.pi / n)
