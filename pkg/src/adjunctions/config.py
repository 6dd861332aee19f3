"""Suite configuration: a flat ``key = value`` file plus command-line overrides.

Recognized keys (defaults in parentheses)::

    suite              all | schwartz-frobenius | schwartz-bernstein |
                       opalg-bernstein | cstar-frobenius | kappa-isometry |
                       opspace-axioms                                  (all)
    seed               non-negative integer                            (0)
    degree             degree bound of random polynomials              (12)
    monomial_degree    monomials x^0 .. x^k are all paired             (16)
    samples            random polynomial samples                       (1000)
    grid               <m>:<extent> for the SL(2,R) grid               (256:8)
    dim                H truncation d, dim H = 2d + 1                  (2)
    cfunc              coth | algebraic                                (coth)
    opalg_samples      random B-elements for the grid model           (500)
    pair_samples       random pairs for Leibniz/embedding checks       (1000)
    positivity_samples random E-elements for positivity checks         (500)
    correspondences    random C*-correspondences                       (20)
    cstar_samples      samples per correspondence                      (200)
    random_tensors     random tensors for the kappa bound              (100)
    ruan_samples       random instances per Ruan axiom                 (500)
    levels             matrix level cap                                (3)
    restarts           random restarts for cb-norm search              (32)
    iterations         optimizer iterations per restart                (200)
    haagerup_restarts  random restarts for Haagerup search             (8)
    random_restarts    restarts for the random-tensor Haagerup bound   (2)
    tol                override for every floating-point tolerance     (unset)

Blank lines and ``#`` comments are ignored.
"""

import os
from dataclasses import dataclass, fields, replace

__all__ = ["SUITES", "ConfigError", "SuiteConfig", "load_config", "parse_config", "CONFIG_ENV"]

SUITES = (
    "schwartz-frobenius",
    "schwartz-bernstein",
    "opalg-bernstein",
    "cstar-frobenius",
    "kappa-isometry",
    "opspace-axioms",
)

CONFIG_ENV = "ADJUNCTIONS_CONFIG"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "all"
    seed: int = 0
    degree: int = 12
    monomial_degree: int = 16
    samples: int = 1000
    grid_m: int = 256
    grid_extent: float = 8.0
    dim: int = 2
    cfunc: str = "coth"
    opalg_samples: int = 500
    pair_samples: int = 1000
    positivity_samples: int = 500
    correspondences: int = 20
    cstar_samples: int = 200
    random_tensors: int = 100
    ruan_samples: int = 500
    levels: int = 3
    restarts: int = 32
    iterations: int = 200
    haagerup_restarts: int = 8
    random_restarts: int = 2
    tol: float = None

    def __post_init__(self):
        if self.suite != "all" and self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name in ("suite", "cfunc", "seed", "tol"):
                continue
            if v <= 0:
                raise ConfigError(f"{f.name} must be positive")
        if self.tol is not None and self.tol < 0:
            raise ConfigError("tol must be >= 0")
        if self.cfunc not in ("coth", "algebraic"):
            raise ConfigError(f"unknown c-function {self.cfunc!r}")

    def suites(self):
        return SUITES if self.suite == "all" else (self.suite,)

    def tolerance(self, default):
        """The floating tolerance for a check, honoring the ``tol`` override."""
        return default if self.tol is None else self.tol

    def items(self):
        """``(key, value)`` pairs in the file-format spelling, stable order."""
        out = []
        for f in fields(self):
            if f.name == "grid_m":
                out.append(("grid", f"{self.grid_m}:{self.grid_extent:g}"))
            elif f.name == "grid_extent":
                continue
            else:
                out.append((f.name, getattr(self, f.name)))
        return out


_INT_KEYS = {f.name for f in fields(SuiteConfig) if f.type in (int, "int")}


def _convert(key, raw):
    raw = str(raw).strip()
    try:
        if key == "grid":
            m, _, extent = raw.partition(":")
            if not extent:
                raise ValueError
            return {"grid_m": int(m), "grid_extent": float(extent)}
        if key == "tol":
            return {"tol": None if raw.lower() in ("", "none") else float(raw)}
        if key in ("suite", "cfunc"):
            return {key: raw}
        if key in _INT_KEYS:
            return {key: int(raw)}
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    raise ConfigError(f"unknown config key {key!r}")


def parse_config(text, base=None):
    """Parse the flat ``key = value`` format."""
    updates = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value")
        updates.update(_convert(key.strip().replace("-", "_"), value))
    return _apply(base or SuiteConfig(), updates)


def _apply(cfg, updates):
    try:
        return replace(cfg, **updates)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path=None, overrides=None):
    """Config from ``path`` (or ``$ADJUNCTIONS_CONFIG``), then ``overrides``.

    ``overrides`` maps keys of the file format to raw string values.
    """
    path = path or os.environ.get(CONFIG_ENV)
    cfg = SuiteConfig()
    if path:
        try:
            with open(path) as fh:
                cfg = parse_config(fh.read(), cfg)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    updates = {}
    for key, value in (overrides or {}).items():
        if value is not None:
            updates.update(_convert(key, value))
    return _apply(cfg, updates)
