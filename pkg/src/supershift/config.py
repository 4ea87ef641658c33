"""Run configuration: INI parsing, validation and problem construction.

Keys are ``section.name``; the INI file uses ``[section]`` headers and
``--set section.name=value`` overrides win over the file.  Lists are
comma-separated; ``a:b:n`` expands to ``n`` evenly spaced values.
"""
import configparser
import io
import math
from dataclasses import dataclass

import numpy as np

from . import greens
from .evolution import EvolutionProblem
from .exceptions import SupershiftError
from .quadrature import QuadratureConfig
from .superosc import (build_superosc, build_supershift_plane_waves, plane_wave, poly_exp,
                       superosc_function)

__all__ = ["ConfigError", "RunConfig", "DEFAULTS", "parse_list", "parse_complex_list"]


class ConfigError(SupershiftError, ValueError):
    """Malformed or out-of-range configuration value."""


VARIANTS = ("free", "centrifugal", "point")
INITIAL_KINDS = ("plane_wave", "superosc", "custom_poly_exp")

# (section, key) -> default string; order fixes the serialised layout
DEFAULTS = {
    "potential": {"variant": "free", "lambda": "-0.1875", "phi": "0.0",
                  "alpha_re": "-1.0", "alpha_im": "0.0", "beta_re": "0.0", "beta_im": "0.0"},
    "initial": {"kind": "plane_wave", "k": "1.0", "n": "16", "k0": "1.0",
                "coeffs": "1.0", "c": "0.0"},
    "contour": {"theta": repr(math.pi / 4)},
    "quadrature": {"rel_tol": "1e-11"},
    "grid": {"t": "0.1,0.5", "x": "-2:2:4", "z": "0.5+0.25j,1.5"},
    "supershift": {"kappa": "3.0", "n_seq": "4,8,16", "t": "0.2", "compact": "0.5:2:41",
                   "linearity": "true"},
    "green": {"h": "1e-2"},
    "output": {"path": "-"},
}


def parse_list(text):
    """Comma list of floats, or ``a:b:n`` for ``numpy.linspace(a, b, n)``."""
    text = text.strip()
    if not text:
        return np.array([], dtype=float)
    try:
        if ":" in text:
            a, b, n = text.split(":")
            n = int(n)
            if n < 1:
                raise ValueError
            return np.linspace(float(a), float(b), n)
        return np.array([float(v) for v in text.split(",")], dtype=float)
    except ValueError as exc:
        raise ConfigError(f"cannot parse numeric list {text!r}") from exc


def parse_complex_list(text):
    text = text.strip()
    if not text:
        return np.array([], dtype=complex)
    try:
        return np.array([complex(v.strip().replace(" ", "")) for v in text.split(",")])
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex list {text!r}") from exc


def _float(v, key):
    try:
        out = float(v)
    except ValueError as exc:
        raise ConfigError(f"{key}: {v!r} is not a number") from exc
    if not math.isfinite(out):
        raise ConfigError(f"{key}: must be finite")
    return out


@dataclass
class RunConfig:
    """Flat ``section.key -> string`` mapping with typed accessors."""

    values: dict

    @classmethod
    def default(cls):
        return cls({f"{s}.{k}": v for s, kv in DEFAULTS.items() for k, v in kv.items()})

    @classmethod
    def from_sources(cls, path=None, overrides=()):
        cfg = cls.default()
        if path is not None:
            cp = configparser.ConfigParser(interpolation=None)
            try:
                with open(path, encoding="utf-8") as fh:
                    cp.read_file(fh)
            except (OSError, configparser.Error) as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from exc
            for sec in cp.sections():
                for k, v in cp.items(sec):
                    cfg.set(f"{sec}.{k}", v)
        for item in overrides:
            if "=" not in item:
                raise ConfigError(f"override {item!r} is not key=value")
            k, v = item.split("=", 1)
            cfg.set(k.strip(), v.strip())
        return cfg

    def set(self, key, value):
        if key not in self.values:
            raise ConfigError(f"unknown config key {key!r}")
        self.values[key] = str(value)

    def __getitem__(self, key):
        return self.values[key]

    def get_float(self, key):
        return _float(self.values[key], key)

    def to_ini(self):
        cp = configparser.ConfigParser(interpolation=None)
        for key, v in self.values.items():
            sec, name = key.split(".", 1)
            if not cp.has_section(sec):
                cp.add_section(sec)
            cp.set(sec, name, v)
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    # -- typed views ---------------------------------------------------------

    def green_spec(self):
        variant = self["potential.variant"].strip().lower()
        if variant not in VARIANTS:
            raise ConfigError(f"potential.variant must be one of {VARIANTS}")
        try:
            if variant == "free":
                return greens.GreensFunctionSpec.free()
            if variant == "centrifugal":
                return greens.GreensFunctionSpec.centrifugal(self.get_float("potential.lambda"))
            a = complex(self.get_float("potential.alpha_re"), self.get_float("potential.alpha_im"))
            b = complex(self.get_float("potential.beta_re"), self.get_float("potential.beta_im"))
            return greens.GreensFunctionSpec.point_interaction(self.get_float("potential.phi"), a, b)
        except (ValueError, ArithmeticError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"potential: {exc}") from exc

    def initial(self):
        kind = self["initial.kind"].strip().lower()
        if kind not in INITIAL_KINDS:
            raise ConfigError(f"initial.kind must be one of {INITIAL_KINDS}")
        try:
            if kind == "plane_wave":
                return plane_wave(self.get_float("initial.k"))
            if kind == "superosc":
                n = int(self.get_float("initial.n"))
                k0 = self.get_float("initial.k0")
                return superosc_function(build_superosc(n, self.get_float("initial.k") / k0, k0))
            return poly_exp(parse_complex_list(self["initial.coeffs"]),
                            complex(self["initial.c"].replace(" ", "")))
        except (ValueError, ArithmeticError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"initial: {exc}") from exc

    def quadrature(self):
        try:
            return QuadratureConfig(rel_tol=self.get_float("quadrature.rel_tol"))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"quadrature: {exc}") from exc

    def problem(self):
        try:
            return EvolutionProblem(self.green_spec(), self.initial(),
                                    self.get_float("contour.theta"), self.quadrature())
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"contour: {exc}") from exc

    def grids(self):
        t = parse_list(self["grid.t"])
        x = parse_list(self["grid.x"])
        if t.size == 0 or x.size == 0:
            raise ConfigError("grid.t and grid.x must be non-empty")
        if np.any(t <= 0):
            raise ConfigError("grid.t must be positive")
        if np.any(x == 0) and self["potential.variant"] != "free":
            raise ConfigError("grid.x must exclude 0 unless the potential is free")
        return np.sort(t), np.sort(x)

    def family(self):
        try:
            return build_supershift_plane_waves(self.get_float("initial.k0"),
                                                self.get_float("supershift.kappa"))
        except ValueError as exc:
            raise ConfigError(f"supershift: {exc}") from exc

    def n_seq(self):
        vals = parse_list(self["supershift.n_seq"]) if self["supershift.n_seq"].strip() else []
        out = [int(v) for v in vals]
        if any(v != w or v < 1 for v, w in zip(out, vals)):
            raise ConfigError("supershift.n_seq must hold positive integers")
        return out

    def compact(self):
        text = self["supershift.compact"]
        xs = parse_list(text)
        if xs.size < 2 or (xs.min() <= 0 <= xs.max()):
            raise ConfigError("supershift.compact must be a:b:n excluding 0")
        return (float(xs[0]), float(xs[-1]), int(xs.size))

    def linearity(self):
        v = self["supershift.linearity"].strip().lower()
        if v not in ("true", "false", "1", "0", "yes", "no"):
            raise ConfigError("supershift.linearity must be a boolean")
        return v in ("true", "1", "yes")
