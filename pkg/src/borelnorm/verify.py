"""Checks of the inequalities behind the norm equivalence.

Each check returns a list of :class:`VerificationRecord`.  A record states
one inequality ``lhs <= rhs`` (possibly after a documented slack) and is
marked ``pass`` exactly when its signed relative ``margin`` is nonnegative.

Checks that would need the unknown absolute constants of the radial
estimate are stated as bounded-ratio properties: the ratios must be finite,
positive and stable under refinement, and their spread over a family of
functions is compared with the explicit constants times a safety factor.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize
from scipy.special import ive
from scipy.stats import qmc

from . import constants as cst
from .conjugates import BracketViolation, RadialWeight, young_conjugate_radial
from .expsum import exp_term, standard_family
from .norms import (K0, NormDivergent, galpha_parts, halfplane_integral, laplace_kernel,
                    laurent_tail, p0_weight, p_weight, pbeta_norm, polar_tail_quadrature,
                    radial_integral, weighted_exterior_integral)

CHECK_IDS = (
    "lemma1", "lemma2", "theorem1_ratio", "theorem2_localization", "lemma5", "lemma7",
    "theorem1prime_consistency", "main_theorem_ratio", "oracle_tail", "oracle_kernel",
    "oracle_distance",
)

# refinement stability required of every ratio
RATIO_STABILITY = 0.05
# relative slack granted to second derivatives in the convexity sandwich
LEMMA1_SLACK = 0.01

DEFAULTS = {
    "lemma1": {"betas": (-0.25, 0.0, 0.5, 1.0, 1.4), "phis": (0.0, np.pi / 3)},
    "lemma2": {"betas": (0.0, 0.75), "phis": (0.0, np.pi / 3)},
    "theorem1_ratio": {"betas": (-0.25, 0.0, 0.75, 1.25), "phis": (0.0, np.pi / 3)},
    "theorem2_localization": {"alphas": (0.75, 1.0, 1.4, 1.6, 2.0)},
    "lemma5": {"betas": (0.0, 1.0)},
    "lemma7": {"betas": (0.0, 1.0)},
    "theorem1prime_consistency": {"betas": (-0.25, 0.0, 0.75, 1.25)},
    "main_theorem_ratio": {"betas": (-0.25, 0.0, 0.75, 1.25)},
    "oracle_tail": {},
    "oracle_kernel": {"phis": (0.0, 1.0)},
    "oracle_distance": {},
}

LEMMA2_T = (-0.25, -0.5, -1.0, -3.0)
TAIL_T = (0.0, 0.5, 1.0)


@dataclass(frozen=True)
class VerificationRecord:
    check_id: str
    domain: str
    beta: float
    func_id: str
    lhs: float
    rhs: float
    constants: tuple
    margin: float
    status: str
    err_estimate: float
    runtime_ms: float = None
    note: str = ""

    @property
    def passed(self):
        return self.status == "pass"

    def constants_text(self):
        return ";".join(f"{k}={v:.12g}" for k, v in self.constants)


def describe(domain):
    """Short stable label of a domain."""
    def num(x):
        x = complex(x)
        return f"{x.real:g}" if x.imag == 0 else f"{x.real:g}{x.imag:+g}i"

    if domain.kind == "disk":
        return f"disk(c={num(domain.center)},r={domain.radius:g})"
    if domain.kind == "ellipse":
        return (f"ellipse(c={num(domain.center)},a={domain.a:g},b={domain.b:g},"
                f"rot={domain.rotation:g})")
    verts = ",".join(num(v) for v in domain.vertices)
    return f"polygon([{verts}],r={domain.rounding:g})"


def _record(check_id, label, beta, func_id, lhs, rhs, consts, margin, err=0.0, t0=None,
            note=""):
    runtime = None if t0 is None else 1e3 * (time.perf_counter() - t0)
    margin = float(margin) if np.isfinite(margin) else -np.inf
    return VerificationRecord(check_id, label, None if beta is None else float(beta),
                              func_id, float(lhs), float(rhs), tuple(consts), margin,
                              "pass" if margin >= 0 else "fail", float(err), runtime, note)


def _upper_margin(lhs, rhs, slack=0.0):
    """Signed relative slack of ``lhs <= rhs (1 + slack)``."""
    return (rhs * (1 + slack) - lhs) / abs(rhs)


def _failure(check_id, label, beta, func_id, exc, t0=None):
    return _record(check_id, label, beta, func_id, np.nan, np.nan, (), -np.inf, np.nan,
                   t0, note=f"{type(exc).__name__}: {exc}")


def adapt(f, beta):
    """Multiply by ``z`` when ``beta >= 1/2`` requires ``F(0) = 0``."""
    if beta >= 0.5 and abs(f.eval_F(0.0)) > 0:
        return f.times_z()
    return f


def family(config, beta):
    base = config.functions or tuple(standard_family())
    return [adapt(f, beta) for f in base]


# ---------------------------------------------------------------------------
# memoised engine calls shared between checks
# ---------------------------------------------------------------------------


@lru_cache(maxsize=512)
def _pbeta(domain, f, beta, spec):
    return pbeta_norm(domain, f, beta, spec)


@lru_cache(maxsize=512)
def _galpha(domain, f, alpha, eps, spec):
    return galpha_parts(domain, f, alpha, eps, spec)


def _ratio(num, den):
    """Ratio of two NormValues with a bound on its change under refinement."""
    r = num.value / den.value
    rn, rd = num.rel_error, den.rel_error
    change = (rn + rd) / max(1.0 - rd, 1e-300)
    return r, change


def _eps(config, domain):
    return config.eps if config.eps is not None else 0.5 * domain.metrics.sigma


def _bundle(config, domain, beta):
    return cst.constant_bundle(beta, domain, _eps(config, domain), config.a_abs, config.A_abs)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def _kernel_oracle(domain, lam):
    """``K(lam)`` from the Bessel form (disk, ellipse) or adaptive quadrature."""
    r, phi = abs(lam), float(np.angle(lam))
    if domain.kind in ("disk", "ellipse") and getattr(domain, "offset", 0.0) == 0.0:
        c = domain.center
        if domain.kind == "disk":
            area, H = np.pi * domain.radius ** 2, domain.radius
        else:
            area = np.pi * domain.a * domain.b
            H = float(domain.h(phi)) - float(np.real(c * np.exp(1j * phi)))
        shift = 2 * float(np.real(lam * c))
        if r == 0:
            return area * np.exp(shift)
        # pi I1(2 r H) / (r H) for the unit disk, scaled by the area
        return area * ive(1, 2 * r * H) / (r * H) * np.exp(2 * r * H + shift)
    h, W = float(domain.h(phi)), float(domain.width(phi))
    val, _ = integrate.quad(lambda y: domain.chord_length(-y, phi) * np.exp(-2 * r * y),
                            0.0, W, epsabs=0, epsrel=1e-13, limit=500)
    return val * np.exp(2 * r * h)


def _boundary_samples(domain, n=4096):
    """Dense boundary samples with a parameter for local refinement."""
    th = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    pieces = [("arc", th, domain._support_point(th))]
    for k, _ in enumerate(domain.atoms):
        p1, p2 = domain.segment_endpoints(k)
        s = np.linspace(0.0, 1.0, 512)
        pieces.append((k, s, p1 + s * (p2 - p1)))
    return pieces


def brute_force_distance(domain, zeta, pieces=None):
    """Distance by boundary sampling followed by a bounded 1D refinement."""
    pieces = pieces or _boundary_samples(domain)
    best = np.inf
    for key, par, pts in pieces:
        j = int(np.argmin(np.abs(pts - zeta)))
        step = par[1] - par[0]
        if key == "arc":
            fun = lambda t: abs(domain._support_point(t) - zeta)
            lo, hi = par[j] - step, par[j] + step
        else:
            p1, p2 = domain.segment_endpoints(key)
            fun = lambda t: abs(p1 + t * (p2 - p1) - zeta)
            lo, hi = max(par[j] - step, 0.0), min(par[j] + step, 1.0)
        res = optimize.minimize_scalar(fun, bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-13})
        best = min(best, float(res.fun), float(np.min(np.abs(pts - zeta))))
    return best


def _exterior_samples(domain, n, dmin, dmax, seed):
    """Seeded low-discrepancy points ``z(theta) + d n(theta)`` with ``d`` in ``(dmin, dmax]``."""
    if n == 0:
        return np.empty(0, dtype=complex), np.empty(0)
    u = qmc.Halton(d=2, scramble=True, seed=seed).random(n)
    th = 2 * np.pi * u[:, 0]
    d = dmin + (dmax - dmin) * (1.0 - u[:, 1])
    return domain._support_point(th) + d * np.exp(-1j * th), d


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------


def check_oracle_kernel(config, domain, label):
    recs = []
    tol = 1e-8
    for phi in config.option("oracle_kernel", "phis", DEFAULTS["oracle_kernel"]["phis"]):
        for r in np.geomspace(0.1, 5.0, 20):
            t0 = time.perf_counter()
            lam = r * np.exp(1j * phi)
            val = laplace_kernel(domain, lam)
            ref = _kernel_oracle(domain, lam)
            err = abs(val - ref) / ref
            recs.append(_record("oracle_kernel", label, None, f"K(r={r:.6g},phi={phi:.6g})",
                                err, tol, (("tol", tol),), _upper_margin(err, tol), err, t0))
    return recs


def check_oracle_distance(config, domain, label):
    R = domain.metrics.R
    u = qmc.Halton(d=2, scramble=True, seed=config.seed).random(400)
    pts = (6 * u[:, 0] - 3) * R + 1j * (6 * u[:, 1] - 3) * R
    pts = pts[~domain.contains(pts)][:100]
    pieces = _boundary_samples(domain)
    tol = 1e-8
    recs = []
    for i, z in enumerate(pts):
        t0 = time.perf_counter()
        d = float(domain.distance(z))
        ref = brute_force_distance(domain, z, pieces)
        err = abs(d - ref)
        recs.append(_record("oracle_distance", label, None, f"zeta#{i}", err, tol,
                            (("tol", tol), ("dist", d)), _upper_margin(err, tol), err, t0))
    return recs


def check_oracle_tail(config, domain, label):
    rho = config.spec.split_radius * domain.metrics.R
    tol = 1e-6
    recs = []
    funcs = config.functions or (exp_term(0.2, name="exp(0.2z)"),) + tuple(standard_family())
    for f in funcs:
        k0 = f.zero_order()
        for t in TAIL_T:
            t0 = time.perf_counter()
            if t >= 2 + k0:
                continue
            exact = laurent_tail(f, t, rho)
            quad = polar_tail_quadrature(f, t, rho)
            err = abs(exact - quad) / abs(exact)
            recs.append(_record("oracle_tail", label, None, f"{f.name}|t={t:g}", exact, quad,
                                (("t", t), ("rho", rho), ("tol", tol)),
                                _upper_margin(err, tol), err, t0))
    return recs


def check_lemma1(config, domain, label):
    recs = []
    s = LEMMA1_SLACK
    grid = np.geomspace(0.1, 20.0, config.r_points)
    for beta in config.option("lemma1", "betas", DEFAULTS["lemma1"]["betas"]):
        for phi in config.option("lemma1", "phis", DEFAULTS["lemma1"]["phis"]):
            w = RadialWeight(domain, float(phi), float(beta), config.spec.nodes)
            for r in grid:
                t0 = time.perf_counter()
                fid = f"phi={phi:.6g}|r={r:.6g}"
                _, v1, v2 = w.derivatives(r)
                lo, hi = (0.5 + beta) / r ** 2, (2 + beta) / r ** 2
                consts = (("slack", s), ("lower", lo), ("upper", hi))
                recs.append(_record("lemma1", label, beta, fid + "|v''>=lower", lo, v2, consts,
                                    _upper_margin(lo, v2 * (1 + s)), 0.0, t0))
                recs.append(_record("lemma1", label, beta, fid + "|v''<=upper", v2, hi, consts,
                                    _upper_margin(v2, hi, s), 0.0, t0))
                t0 = time.perf_counter()
                try:
                    cp = young_conjugate_radial(w, v1)
                except BracketViolation as exc:
                    recs.append(_failure("lemma1", label, beta, fid + "|vtilde''", exc, t0))
                    continue
                x = v1
                lo = (1 + 2 * beta) ** 2 / (4 * (2 + beta) * x * x)
                hi = 2 * (2 + beta) ** 2 / ((1 + 2 * beta) * x * x)
                consts = (("slack", s), ("x", x), ("lower", lo), ("upper", hi))
                dual = abs(cp.vtilde_dd * v2 - 1.0)
                recs.append(_record("lemma1", label, beta, fid + "|vtilde''>=lower", lo,
                                    cp.vtilde_dd, consts,
                                    _upper_margin(lo, cp.vtilde_dd * (1 + s)), dual, t0))
                recs.append(_record("lemma1", label, beta, fid + "|vtilde''<=upper",
                                    cp.vtilde_dd, hi, consts,
                                    _upper_margin(cp.vtilde_dd, hi, s), dual, t0))
    return recs


def _K0_quad(domain, t, phi, beta):
    """Independent value of ``K0`` by adaptive quadrature over the depth."""
    W = float(domain.width(phi))
    brk = [float(k) for k in domain.chord_kinks(phi)]
    val, _ = integrate.quad(lambda y: domain.chord_length(-y, phi) * (y - t) ** (-(2 * beta + 5)),
                            0.0, W, points=brk or None, epsabs=0, epsrel=1e-12, limit=500)
    return cst.a0(beta) * val


def check_lemma2(config, domain, label):
    recs = []
    for beta in config.option("lemma2", "betas", DEFAULTS["lemma2"]["betas"]):
        a0 = cst.a0(beta)
        am, ap = cst.a_minus(beta), cst.a_plus(beta)
        for phi in config.option("lemma2", "phis", DEFAULTS["lemma2"]["phis"]):
            for t in LEMMA2_T:
                t0 = time.perf_counter()
                k = K0(domain, t, phi, beta)
                err = abs(k - _K0_quad(domain, t, phi, beta))
                s = float(domain.section(t, phi))
                lo = 2.0 ** (-(2 * beta + 5)) * a0 * s / abs(t) ** (2 * beta + 5)
                hi = a0 * (1 + ap / am) * s / abs(t) ** (2 * beta + 5)
                consts = (("a0", a0), ("a_minus", am), ("a_plus", ap), ("s", s))
                fid = f"t={t:g}|phi={phi:.6g}"
                recs.append(_record("lemma2", label, beta, fid + "|lower", lo, k, consts,
                                    _upper_margin(lo, k), err, t0))
                recs.append(_record("lemma2", label, beta, fid + "|upper", k, hi, consts,
                                    _upper_margin(k, hi), err, t0))
    return recs


def _ratio_records(check_id, label, beta, items, bound, bound_name, consts):
    """Per-function stability records plus one spread record.

    ``items`` holds ``(func_id, numerator, denominator)`` NormValues or an
    exception in place of the numerator.
    """
    recs, ratios = [], []
    for fid, num, den, t0 in items:
        if isinstance(num, Exception):
            recs.append(_failure(check_id, label, beta, fid, num, t0))
            continue
        r, change = _ratio(num, den)
        ok = np.isfinite(r) and r > 0
        margin = (RATIO_STABILITY - change) / RATIO_STABILITY if ok else -np.inf
        recs.append(_record(check_id, label, beta, fid, num.value, den.value,
                            (("ratio", r), ("stability", RATIO_STABILITY)), margin, change, t0))
        if ok:
            ratios.append(r)
    if ratios:
        spread = max(ratios) / min(ratios)
        recs.append(_record(check_id, label, beta, "spread", spread, bound,
                            consts + ((bound_name, bound), ("max_ratio", max(ratios)),
                                      ("min_ratio", min(ratios))),
                            _upper_margin(spread, bound)))
    return recs


def check_theorem1_ratio(config, domain, label):
    recs = []
    for beta in config.option("theorem1_ratio", "betas", DEFAULTS["theorem1_ratio"]["betas"]):
        a, A = cst.a_lower(beta, config.a_abs), cst.A_upper(beta, config.A_abs)
        bound = config.safety * A / a
        for phi in config.option("theorem1_ratio", "phis", DEFAULTS["theorem1_ratio"]["phis"]):
            items = []
            for f in family(config, beta):
                t0 = time.perf_counter()
                try:
                    num = radial_integral(domain, f, beta, phi, config.spec)
                    den = halfplane_integral(domain, f, beta, phi, config.spec)
                except (NormDivergent, ValueError) as exc:
                    num, den = exc, None
                items.append((f"{f.name}|phi={phi:.6g}", num, den, t0))
            recs += _ratio_records("theorem1_ratio", label, beta, items, bound,
                                   "safety*A/a", (("a", a), ("A", A), ("safety", config.safety)))
    return recs


def check_theorem1prime(config, domain, label):
    recs = []
    cid = "theorem1prime_consistency"
    for beta in config.option(cid, "betas", DEFAULTS[cid]["betas"]):
        a, A = cst.a_lower(beta, config.a_abs), cst.A_upper(beta, config.A_abs)
        items = []
        for f in family(config, beta):
            t0 = time.perf_counter()
            try:
                num = _pbeta(domain, f, beta, config.spec)
                den = weighted_exterior_integral(domain, f, "p", beta, "total",
                                                 spec=config.spec)
            except (NormDivergent, ValueError) as exc:
                num, den = exc, None
            items.append((f.name, num, den, t0))
        recs += _ratio_records(cid, label, beta, items, config.safety * A / a, "safety*A/a",
                               (("a", a), ("A", A), ("safety", config.safety)))
    return recs


def check_main_theorem(config, domain, label):
    recs = []
    cid = "main_theorem_ratio"
    eps = _eps(config, domain)
    for beta in config.option(cid, "betas", DEFAULTS[cid]["betas"]):
        cb = _bundle(config, domain, beta)
        items = []
        for f in family(config, beta):
            t0 = time.perf_counter()
            try:
                num = _pbeta(domain, f, beta, config.spec)
                den = _galpha(domain, f, beta + 1.0, eps, config.spec)["total"]
            except (NormDivergent, ValueError) as exc:
                num, den = exc, None
            items.append((f.name, num, den, t0))
        consts = (("c", cb.c), ("C", cb.C), ("safety", config.safety), ("eps", eps))
        recs += _ratio_records(cid, label, beta, items, config.safety * cb.spread_bound,
                               "safety*C/c", consts)
    return recs


def check_theorem2(config, domain, label):
    recs = []
    cid = "theorem2_localization"
    eps = _eps(config, domain)
    R = domain.metrics.R
    base = config.functions or tuple(standard_family()[:3])
    for alpha in config.option(cid, "alphas", DEFAULTS[cid]["alphas"]):
        primed = alpha >= 1.5
        funcs = [f.times_z() if primed and abs(f.eval_F(0.0)) > 0 else f for f in base]
        for f in funcs:
            t0 = time.perf_counter()
            try:
                f1, f2 = cst.localization_factors(alpha, domain, eps, moment_condition=primed)
                b0 = cst.B0_primed(alpha) if primed else cst.B0(alpha)
                b1 = cst.B1_primed(alpha) if primed else cst.B1(alpha)
                parts = _galpha(domain, f, alpha, eps, config.spec)
                parts_up = _galpha(domain, f, alpha + 0.5, eps, config.spec)
            except (NormDivergent, ValueError) as exc:
                recs.append(_failure(cid, label, alpha, f.name, exc, t0))
                continue
            full, loc = parts["total"], parts["collar"]
            near = parts["collar"].value + parts["outer"].value
            consts = (("alpha", alpha), ("eps", eps), ("B0" + "'" * primed, b0),
                      ("B1" + "'" * primed, b1),
                      ("B", cst.B_domain(alpha, R, domain.metrics.perimeter, eps)))
            err = full.error_estimate + f1 * loc.error_estimate
            recs.append(_record(cid, label, alpha, f.name + "|dist^2a", full.value,
                                f1 * loc.value, consts, _upper_margin(full.value, f1 * loc.value),
                                err, t0))
            up = parts_up["total"]
            recs.append(_record(cid, label, alpha, f.name + "|dist^(2a+1)", up.value,
                                f2 * loc.value, consts, _upper_margin(up.value, f2 * loc.value),
                                up.error_estimate + f2 * loc.error_estimate, t0))
            # far field against the disk of radius 4R
            far = parts["far"].value
            recs.append(_record(cid, label, alpha, f.name + "|far<=B0*near", far,
                                b0 * near, consts, _upper_margin(far, b0 * near),
                                parts["far"].error_estimate, t0))
            far_up = parts_up["far"].value
            recs.append(_record(cid, label, alpha, f.name + "|far(2a+1)<=5R*B1*near",
                                far_up, 5 * R * b1 * near, consts,
                                _upper_margin(far_up, 5 * R * b1 * near),
                                parts_up["far"].error_estimate, t0,
                                note="annulus form of the second far-field bound"))
    return recs


def _pointwise_setup(config, domain, check_id):
    sigma = domain.metrics.sigma
    near, dn = _exterior_samples(domain, config.near_points, 0.0, 0.5 * sigma, config.seed)
    far, df = _exterior_samples(domain, config.far_points, 0.5 * sigma,
                                0.5 * sigma + 3 * domain.metrics.R, config.seed + 1)
    return near, dn, far, df


def _p_with_error(domain, zeta, beta, spec, zero=False):
    fun = p0_weight if zero else p_weight
    coarse = fun(domain, zeta, beta, spec)
    fine = fun(domain, zeta, beta, spec.refined())
    return fine, np.abs(fine - coarse)


def check_lemma5(config, domain, label):
    recs = []
    near, dn, _, _ = _pointwise_setup(config, domain, "lemma5")
    for beta in config.option("lemma5", "betas", DEFAULTS["lemma5"]["betas"]):
        t0 = time.perf_counter()
        p, ep = _p_with_error(domain, near, beta, config.spec)
        p0, ep0 = _p_with_error(domain, near, beta, config.spec, zero=True)
        for i in range(near.size):
            fid = f"zeta#{i}|dist={dn[i]:.6g}"
            consts = (("dist", dn[i]), ("p0", p0[i]))
            err = ep[i] + 2 * ep0[i]
            recs.append(_record("lemma5", label, beta, fid + "|p>=2p0/3", 2 * p0[i] / 3, p[i],
                                consts, _upper_margin(2 * p0[i] / 3, p[i]), err, t0))
            recs.append(_record("lemma5", label, beta, fid + "|p<=2p0", p[i], 2 * p0[i],
                                consts, _upper_margin(p[i], 2 * p0[i]), err, t0))
    return recs


def check_lemma7(config, domain, label):
    recs = []
    near, dn, far, df = _pointwise_setup(config, domain, "lemma7")
    for beta in config.option("lemma7", "betas", DEFAULTS["lemma7"]["betas"]):
        t0 = time.perf_counter()
        m, M, M0 = cst.m_lower(beta, domain), cst.M_upper(beta, domain), cst.M0_upper(beta, domain)
        consts = (("m", m), ("M", M), ("M0", M0))
        p, ep = _p_with_error(domain, near, beta, config.spec)
        for i in range(near.size):
            fid = f"zeta#{i}|dist={dn[i]:.6g}"
            k = dn[i] ** (2 * beta + 2)
            recs.append(_record("lemma7", label, beta, fid + "|p>=m*d^(2b+2)", m * k, p[i],
                                consts, _upper_margin(m * k, p[i]), ep[i], t0))
            recs.append(_record("lemma7", label, beta, fid + "|p<=M*d^(2b+2)", p[i], M * k,
                                consts, _upper_margin(p[i], M * k), ep[i], t0))
        p, ep = _p_with_error(domain, far, beta, config.spec)
        for i in range(far.size):
            fid = f"far#{i}|dist={df[i]:.6g}"
            rhs = M0 * df[i] ** (2 * beta + 3) + M * df[i] ** (2 * beta + 2)
            recs.append(_record("lemma7", label, beta, fid + "|p<=M0*d^(2b+3)+M*d^(2b+2)",
                                p[i], rhs, consts, _upper_margin(p[i], rhs), ep[i], t0))
    return recs


CHECKS = {
    "lemma1": check_lemma1,
    "lemma2": check_lemma2,
    "theorem1_ratio": check_theorem1_ratio,
    "theorem2_localization": check_theorem2,
    "lemma5": check_lemma5,
    "lemma7": check_lemma7,
    "theorem1prime_consistency": check_theorem1prime,
    "main_theorem_ratio": check_main_theorem,
    "oracle_tail": check_oracle_tail,
    "oracle_kernel": check_oracle_kernel,
    "oracle_distance": check_oracle_distance,
}


def run_check(check_id, config, domain=None):
    """Records of one check over ``domain`` (default: every configured domain)."""
    if check_id not in CHECKS:
        raise KeyError(f"unknown check {check_id!r}; choose from {', '.join(CHECK_IDS)}")
    domains = config.domains if domain is None else (domain,)
    out = []
    for dom in domains:
        recs = CHECKS[check_id](config, dom, describe(dom))
        if not config.timing:
            recs = [_strip_time(r) for r in recs]
        out += recs
    return out


def _strip_time(rec):
    return VerificationRecord(**{**rec.__dict__, "runtime_ms": None})


def _task(args):
    check_id, config, domain = args
    return run_check(check_id, config, domain)


def run_all(config, checks=CHECK_IDS, jobs=1):
    """Run ``checks`` over all domains; results keep a fixed order."""
    tasks = [(c, config, d) for c in checks for d in config.domains]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_task, tasks))
    else:
        chunks = [_task(t) for t in tasks]
    return [r for chunk in chunks for r in chunk]
