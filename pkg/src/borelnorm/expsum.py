"""Exponential sums and their Borel transforms.

A term ``(c, m, lam)`` stands for ``c * z**m * exp(lam * z)``.  Its Borel
transform is ``c * m! / (zeta - lam)**(m + 1)``, so every quantity needed by
the norm engines (values, Laurent coefficients, second derivatives) has a
closed form.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import factorial, lgamma

import numpy as np

_LOG_MAX = 700.0


class MagnitudeOverflow(OverflowError):
    def __init__(self, term, log_magnitude):
        super().__init__(f"magnitude overflow in term {term!r} (log|.| = {log_magnitude:.1f})")
        self.term = term


class PoleProximity(ValueError):
    pass


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    reasons: tuple = ()

    def __bool__(self):
        return self.passed


def _falling(k, m):
    # k! / (k - m)!
    return np.exp(lgamma(k + 1) - lgamma(k - m + 1))


@lru_cache(maxsize=256)
def _taylor(terms, k_max):
    out = np.zeros(k_max + 1, dtype=complex)
    for c, m, lam in terms:
        for k in range(m, k_max + 1):
            out[k] += c * _falling(k, m) * lam ** (k - m)
    return out


@lru_cache(maxsize=256)
def _zero_order(terms, k_max):
    coeffs = _taylor(terms, k_max)
    for k, g in enumerate(coeffs):
        # size of the coefficient without cancellation between terms
        scale = sum(abs(c) * _falling(k, m) * abs(lam) ** (k - m)
                    for c, m, lam in terms if k >= m)
        if scale > 0 and abs(g) > 1e-12 * scale:
            return k
    raise ValueError("F vanishes to high order at 0")


@dataclass(frozen=True)
class BorelTransform:
    """Rational function ``sum coef / (zeta - lam)**order``."""

    poles: tuple  # of (lam, order, coef)

    def _terms(self, zeta, derivative):
        zeta = np.asarray(zeta, dtype=complex)
        out = np.zeros(zeta.shape, dtype=complex)
        for lam, order, coef in self.poles:
            w = zeta - lam
            if np.any(np.abs(w) < 1e-12):
                raise PoleProximity(f"evaluation point within 1e-12 of the pole {lam!r}")
            # d^k/dzeta^k w^{-n} = (-1)^k n (n+1)...(n+k-1) w^{-n-k}
            fac = 1.0
            for j in range(derivative):
                fac *= -(order + j)
            out += coef * fac / w ** (order + derivative)
        return out

    def __call__(self, zeta):
        out = self._terms(zeta, 0)
        return complex(out) if out.ndim == 0 else out

    def dd(self, zeta):
        """Second derivative ``gamma''``."""
        out = self._terms(zeta, 2)
        return complex(out) if out.ndim == 0 else out

    @property
    def pole_set(self):
        return np.array([p[0] for p in self.poles], dtype=complex)

    def scaled(self, factor):
        return BorelTransform(tuple((lam, n, factor * c) for lam, n, c in self.poles))


@dataclass(frozen=True)
class ExpSum:
    """Entire function ``sum_j c_j z**m_j exp(lam_j z)``."""

    terms: tuple
    name: str = ""

    def __post_init__(self):
        terms = tuple((complex(c), int(m), complex(lam)) for c, m, lam in self.terms)
        if not terms:
            raise ValueError("an exponential sum needs at least one term")
        keys = [(m, lam) for _, m, lam in terms]
        if len(set(keys)) != len(keys):
            raise ValueError("repeated (m, lambda) pair; merge the coefficients")
        if any(m < 0 for _, m, _ in terms):
            raise ValueError("powers must be nonnegative")
        object.__setattr__(self, "terms", terms)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        acc = {}
        for c, m, lam in self.terms + other.terms:
            acc[(m, lam)] = acc.get((m, lam), 0) + c
        return ExpSum(tuple((c, m, lam) for (m, lam), c in acc.items() if c != 0))

    def scaled(self, factor):
        return ExpSum(tuple((factor * c, m, lam) for c, m, lam in self.terms), self.name)

    def times_z(self):
        """The function ``z * F(z)``; it always vanishes at the origin."""
        name = f"z*({self.name})" if self.name else ""
        return ExpSum(tuple((c, m + 1, lam) for c, m, lam in self.terms), name)

    @property
    def frequencies(self):
        return np.array([lam for _, _, lam in self.terms])

    # -- evaluation ----------------------------------------------------------

    def eval_F(self, z):
        """Evaluate ``F(z)``; raises :class:`MagnitudeOverflow` past float range."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        absz = np.abs(z)
        with np.errstate(divide="ignore"):
            logz = np.log(absz)
        for term in self.terms:
            c, m, lam = term
            if c == 0:
                continue
            logmag = np.log(abs(c)) + np.real(lam * z) + (m * logz if m else 0.0)
            worst = float(np.max(logmag))
            if worst > _LOG_MAX:
                raise MagnitudeOverflow(term, worst)
            out += c * z ** m * np.exp(lam * z)
        return complex(out) if out.ndim == 0 else out

    __call__ = eval_F

    def eval_scaled(self, z, shift):
        """``F(z) * exp(-shift)`` with the exponent combined per term."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(np.broadcast(z, shift).shape, dtype=complex)
        for c, m, lam in self.terms:
            out += c * z ** m * np.exp(lam * z - shift)
        return out

    def taylor(self, k_max):
        """Taylor coefficients ``F^(k)(0)`` for ``k = 0..k_max``."""
        return _taylor(self.terms, int(k_max)).copy()

    def zero_order(self, k_max=60):
        """Multiplicity of the zero of ``F`` at the origin."""
        return _zero_order(self.terms, int(k_max))

    def deflated(self, z, order, terms=40):
        """``F(z) / z**order`` by its Taylor series (for small ``|z|``)."""
        z = np.asarray(z, dtype=complex)
        coeffs = self.taylor(order + terms)
        out = np.zeros(z.shape, dtype=complex)
        for k in range(order + terms, order - 1, -1):
            out = out * z + coeffs[k] / factorial(k)
        return out

    # -- Borel transform ------------------------------------------------------

    @property
    def gamma(self):
        return BorelTransform(tuple((lam, m + 1, c * factorial(m)) for c, m, lam in self.terms))

    def eval_gamma(self, zeta):
        return self.gamma(zeta)

    def eval_gamma_dd(self, zeta):
        return self.gamma.dd(zeta)

    def laurent_gamma_coeffs(self, k_max):
        """``gamma_k = F^(k)(0)``, the Laurent coefficients of ``gamma``."""
        return self.taylor(k_max)

    def laurent_gamma_dd_coeffs(self, k_max):
        """Coefficients ``(k+2)(k+1) gamma_k`` of ``gamma''`` at ``zeta**-(k+3)``."""
        k = np.arange(k_max + 1)
        return (k + 2) * (k + 1) * self.taylor(k_max)

    def validate(self, domain, beta):
        """Check that ``F`` belongs to the space over ``domain`` for ``beta``."""
        reasons = []
        sigma = domain.metrics.sigma
        gaps, _ = domain.support_gap(self.frequencies)
        for (_, _, lam), gap in zip(self.terms, np.atleast_1d(gaps)):
            if gap > -1e-6 * sigma:
                reasons.append(f"pole outside domain: lambda={lam!r}")
        if beta >= 0.5:
            f0 = self.eval_F(0.0)
            if abs(f0) > 1e-14 * sum(abs(c) for c, _, _ in self.terms):
                reasons.append(f"F(0)={f0.real:g}≠0 but beta >= 1/2")
        return ValidationReport(not reasons, tuple(reasons))

    @classmethod
    def from_rows(cls, rows, name=""):
        """Build from rows ``(re_c, im_c, m, re_lam, im_lam)``."""
        terms = []
        for row in rows:
            if len(row) != 5:
                raise ValueError(f"term row must have 5 entries, got {row!r}")
            rc, ic, m, rl, il = row
            if int(m) != m:
                raise ValueError(f"power must be an integer, got {m!r}")
            terms.append((complex(rc, ic), int(m), complex(rl, il)))
        return cls(tuple(terms), name)


def exp_term(lam, c=1.0, m=0, name=""):
    return ExpSum(((c, m, lam),), name)


def standard_family():
    """Ten functions with frequencies of modulus at most 0.6."""
    fam = [
        exp_term(0.3, name="exp(0.3z)"),
        exp_term(-0.5, name="exp(-0.5z)"),
        exp_term(0.4j, name="exp(0.4iz)"),
        exp_term(0.0, name="1"),
        exp_term(0.2, m=1, name="z exp(0.2z)"),
        ExpSum(((1, 0, 0.3), (1, 0, -0.3)), "2cosh(0.3z)"),
        ExpSum(((1, 0, 0.3), (-1, 0, -0.3)), "2sinh(0.3z)"),
        ExpSum(((1, 0, 0.5j), (0.5, 0, -0.2 - 0.3j)), "exp(0.5iz)+exp((-0.2-0.3i)z)/2"),
        ExpSum(((1, 0, 0.1 + 0.2j), (1j, 1, -0.4)), "exp((0.1+0.2i)z)+iz exp(-0.4z)"),
        ExpSum(((2, 0, 0.6), (-1, 2, 0.1j), (0.5, 0, -0.35 + 0.35j)), "mixed"),
    ]
    return fam


def family_for_beta(beta):
    """The standard family, multiplied by ``z`` when ``beta >= 1/2``."""
    fam = standard_family()
    if beta >= 0.5:
        fam = [f if abs(f.eval_F(0.0)) == 0 else f.times_z() for f in fam]
    return fam
