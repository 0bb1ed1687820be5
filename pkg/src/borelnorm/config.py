"""Run configuration read from a TOML file.

Blocks: ``[domain]`` (or an array ``[[domain]]``), ``[[function]]``,
``[quadrature]``, ``[verify]`` and ``[output]``.  Everything is validated
up front so that a bad file never produces partial output.
"""

import sys
from dataclasses import dataclass, field, fields

from ._quadrature import QuadratureSpec
from .domain import from_config as domain_from_config
from .expsum import ExpSum

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(ValueError):
    """The configuration file is unreadable or inconsistent."""


_VERIFY_KEYS = {"betas", "alphas", "eps", "a_abs", "A_abs", "seed", "safety", "phis",
                "checks", "near_points", "far_points", "r_points"}
_QUAD_KEYS = {f.name for f in fields(QuadratureSpec)}


@dataclass(frozen=True)
class RunConfig:
    """Parsed and validated run configuration.

    ``betas``/``alphas`` set to ``None`` let every check use its own default
    grid.  ``per_check`` maps a check id to overrides of ``betas``,
    ``alphas`` or ``phis``.
    """

    domains: tuple
    functions: tuple = ()
    betas: tuple = None
    alphas: tuple = None
    phis: tuple = None
    eps: float = None
    a_abs: float = 1.0
    A_abs: float = 1.0
    seed: int = 20240601
    safety: float = 10.0
    near_points: int = 50
    far_points: int = 20
    r_points: int = 20
    spec: QuadratureSpec = field(default_factory=QuadratureSpec)
    per_check: tuple = ()
    output_dir: str = "reports"
    formats: tuple = ("csv", "json")
    timing: bool = False

    def option(self, check_id, name, default):
        """Value of ``name`` for ``check_id``: override, then global, then ``default``."""
        for cid, opts in self.per_check:
            if cid == check_id:
                for key, val in opts:
                    if key == name:
                        return val
        glob = getattr(self, name, None)
        return default if glob is None else glob


def _floats(value, name):
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"{name} must be a nonempty list of numbers")
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: {exc}") from None


def _check_betas(betas, where):
    for b in betas:
        if not -0.5 < b < 1.5:
            raise ConfigError(f"{where}: beta={b} outside (-1/2, 3/2)")


def _check_alphas(alphas, where):
    for a in alphas:
        if not 0 < a < 2.5:
            raise ConfigError(f"{where}: alpha={a} outside (0, 5/2)")


def _parse_function(block, index):
    if "terms" not in block:
        raise ConfigError(f"function #{index + 1} has no 'terms'")
    name = str(block.get("id", f"f{index + 1}"))
    try:
        return ExpSum.from_rows(block["terms"], name=name)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"function {name!r}: {exc}") from None


def parse_config(data):
    """Build a :class:`RunConfig` from a decoded TOML mapping."""
    if "domain" not in data:
        raise ConfigError("missing [domain] block")
    blocks = data["domain"]
    if isinstance(blocks, dict):
        blocks = [blocks]
    domains = []
    for i, block in enumerate(blocks):
        try:
            dom = domain_from_config(block)
            dom.metrics
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"domain #{i + 1}: {exc}") from None
        domains.append(dom)

    functions = tuple(_parse_function(b, i) for i, b in enumerate(data.get("function", [])))
    ids = [f.name for f in functions]
    if len(set(ids)) != len(ids):
        raise ConfigError("function ids must be unique")

    quad = dict(data.get("quadrature", {}))
    unknown = set(quad) - _QUAD_KEYS
    if unknown:
        raise ConfigError(f"unknown quadrature keys: {sorted(unknown)}")
    try:
        spec = QuadratureSpec(**quad)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"quadrature: {exc}") from None

    ver = dict(data.get("verify", {}))
    unknown = set(ver) - _VERIFY_KEYS
    if unknown:
        raise ConfigError(f"unknown verify keys: {sorted(unknown)}")
    kw = {}
    if "betas" in ver:
        kw["betas"] = _floats(ver["betas"], "verify.betas")
        _check_betas(kw["betas"], "verify.betas")
    if "alphas" in ver:
        kw["alphas"] = _floats(ver["alphas"], "verify.alphas")
        _check_alphas(kw["alphas"], "verify.alphas")
    if "phis" in ver:
        kw["phis"] = _floats(ver["phis"], "verify.phis")
    for key in ("eps", "a_abs", "A_abs", "safety"):
        if key in ver:
            try:
                kw[key] = float(ver[key])
            except (TypeError, ValueError):
                raise ConfigError(f"verify.{key} must be a number") from None
            if not kw[key] > 0:
                raise ConfigError(f"verify.{key} must be positive")
    for key in ("seed", "near_points", "far_points", "r_points"):
        if key in ver:
            if not isinstance(ver[key], int) or isinstance(ver[key], bool) or ver[key] < 0:
                raise ConfigError(f"verify.{key} must be a nonnegative integer")
            kw[key] = ver[key]
    if "eps" in kw:
        for dom in domains:
            if kw["eps"] > dom.metrics.R:
                raise ConfigError(f"verify.eps={kw['eps']} exceeds R(D)={dom.metrics.R:g}")

    per_check = []
    from .verify import CHECK_IDS  # local import: verify depends on this module

    for cid, opts in sorted(ver.get("checks", {}).items()):
        if cid not in CHECK_IDS:
            raise ConfigError(f"unknown check {cid!r}")
        parsed = []
        for key, val in sorted(opts.items()):
            if key not in ("betas", "alphas", "phis"):
                raise ConfigError(f"verify.checks.{cid}: unknown key {key!r}")
            vals = _floats(val, f"verify.checks.{cid}.{key}")
            if key == "betas":
                _check_betas(vals, f"verify.checks.{cid}")
            elif key == "alphas":
                _check_alphas(vals, f"verify.checks.{cid}")
            parsed.append((key, vals))
        per_check.append((cid, tuple(parsed)))

    out = dict(data.get("output", {}))
    unknown = set(out) - {"dir", "formats", "timing"}
    if unknown:
        raise ConfigError(f"unknown output keys: {sorted(unknown)}")
    formats = tuple(out.get("formats", ("csv", "json")))
    if not formats or any(f not in ("csv", "json") for f in formats):
        raise ConfigError("output.formats must be a subset of ['csv', 'json']")
    if not isinstance(out.get("timing", False), bool):
        raise ConfigError("output.timing must be true or false")

    return RunConfig(domains=tuple(domains), functions=functions, spec=spec,
                     per_check=tuple(per_check), output_dir=str(out.get("dir", "reports")),
                     formats=formats, timing=out.get("timing", False), **kw)


def load_config(path):
    """Read and validate a TOML run configuration."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(data)
