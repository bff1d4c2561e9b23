"""Flat JSON configuration with compiled-in defaults."""

from __future__ import annotations

import json
import math
from dataclasses import replace
from pathlib import Path

from .mean_ops import QuadratureConfig
from .membership import ClassifyParams

DEFAULTS: dict = {
    "window": [0.0, 200.0],
    "dt": 1.0 / 32,
    "epsilon": 0.05,
    "tau_range": [0.0, 1000.0],
    "tau_step": 1.0 / 8,
    "density_fraction": 0.25,
    "rtol": 1e-2,
    "thr_AP": 0.1,
    "thr_SpAP": 0.1,
    "thr_C0": 0.05,
    "thr_Cub": 0.1,
    "thr_E": 1e-2,
    "thr_E0": 1e-2,
    "thr_TE": 1e-2,
    "thr_AAP": 0.05,
    "cub_delta": 1e-3,
    "h_samples": [0.7, 1.0, math.sqrt(2.0)],
    "T_values": [1e2, 1e3, 1e4],
    "base_points": [0.0, 1.0, math.e],
    "l_values": [1.0, 10.0, 100.0],
    "panels_per_unit": 64,
    "omega_grid": [-5.0, 5.0, 0.01],
    "spectrum_T": 1e4,
    "spectrum_threshold": 0.02,
    "tags": ["AP", "C0", "Cub", "E"],
    "format": "json",
}

_POSITIVE = ("dt", "epsilon", "tau_step", "density_fraction", "rtol", "cub_delta", "panels_per_unit", "spectrum_T", "spectrum_threshold")
_INCREASING = ("T_values", "l_values", "h_samples")


class ConfigError(ValueError):
    pass


def validate(cfg: dict) -> dict:
    unknown = set(cfg) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for k in _POSITIVE:
        if not cfg[k] > 0:
            raise ConfigError(f"{k} must be positive")
    for k in cfg:
        if k.startswith("thr_") and not cfg[k] > 0:
            raise ConfigError(f"{k} must be positive")
    for k in _INCREASING:
        v = list(cfg[k])
        if not v or any(x <= 0 for x in v) or any(b <= a for a, b in zip(v, v[1:])):
            raise ConfigError(f"{k} must be positive and strictly increasing")
    for k in ("window", "tau_range"):
        a, b = cfg[k]
        if not b > a:
            raise ConfigError(f"{k} must be a non-empty interval")
    if cfg["format"] not in ("json", "text", "plotdata"):
        raise ConfigError("format must be json, text or plotdata")
    return cfg


def load(path=None, overrides: dict | None = None) -> dict:
    """Defaults, then the JSON file, then explicit overrides."""
    cfg = dict(DEFAULTS)
    if path is not None:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a flat JSON object")
        cfg.update(data)
    cfg.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return validate(cfg)


def to_params(cfg: dict) -> ClassifyParams:
    thresholds = {k[4:]: float(v) for k, v in cfg.items() if k.startswith("thr_")}
    lo, hi, st = cfg["omega_grid"]
    return replace(
        ClassifyParams(),
        window=tuple(map(float, cfg["window"])),
        dt=float(cfg["dt"]),
        epsilon=float(cfg["epsilon"]),
        tau_range=tuple(map(float, cfg["tau_range"])),
        tau_step=float(cfg["tau_step"]),
        density_fraction=float(cfg["density_fraction"]),
        thresholds=thresholds,
        cub_delta=float(cfg["cub_delta"]),
        h_samples=tuple(map(float, cfg["h_samples"])),
        T_values=tuple(map(float, cfg["T_values"])),
        base_points=tuple(map(float, cfg["base_points"])),
        rtol=float(cfg["rtol"]),
        omega_grid={"lo": float(lo), "hi": float(hi), "step": float(st)},
        spectrum_T=float(cfg["spectrum_T"]),
        spectrum_threshold=float(cfg["spectrum_threshold"]),
        q=QuadratureConfig(int(cfg["panels_per_unit"])),
    )
