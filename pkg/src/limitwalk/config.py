"""JSON pattern configuration (strict: unknown fields are rejected)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .cycle import CyclePattern
from .errors import ConfigError, ValidationError
from .limitdist import BuildConfig
from .pmf import DEFAULT_TAIL_TOL, discrete_weibull_unit, from_weights, geometric, shifted_poisson
from .roots import RootConfig

_FAMILY_FIELDS = {
    "table": ({"min_support", "weights"}, set()),
    "geometric": ({"p"}, set()),
    "shifted_poisson": ({"lambda"}, {"shift"}),
    "discrete_weibull_unit": (set(), set()),
}
_TOLERANCE_FIELDS = {"tail_tol", "disk_slack", "cluster_tol", "residual_tol", "dp_convergence_tol"}
_TOP_FIELDS = {"laws", "tolerances", "precision", "overshoot", "name"}


@dataclass(frozen=True)
class PatternConfig:
    laws: tuple[dict, ...]
    tail_tol: float = DEFAULT_TAIL_TOL
    disk_slack: float = RootConfig.disk_slack
    cluster_tol: float = RootConfig.cluster_tol
    residual_tol: float = RootConfig.residual_tol
    dp_convergence_tol: float = 5e-4
    precision: int | None = None
    overshoot: bool = True
    name: str = ""
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    def pattern(self) -> CyclePattern:
        return CyclePattern([_make_law(spec, self.tail_tol, f"laws[{i}]") for i, spec in enumerate(self.laws)])

    def build_config(self) -> BuildConfig:
        return BuildConfig(
            tail_tol=self.tail_tol,
            roots=RootConfig(
                disk_slack=self.disk_slack,
                cluster_tol=self.cluster_tol,
                residual_tol=self.residual_tol,
            ),
            precision=self.precision,
            overshoot=self.overshoot,
        )


def _number(value: Any, where: str, *, positive: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {json.dumps(value)}")
    if positive and not value > 0:
        raise ConfigError(f"{where}: must be positive")
    return float(value)


def _integer(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {json.dumps(value)}")
    return value


def _check_keys(obj: dict, required: set, optional: set, where: str) -> None:
    unknown = sorted(set(obj) - required - optional)
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {', '.join(unknown)}")
    missing = sorted(required - set(obj))
    if missing:
        raise ConfigError(f"{where}: missing field(s) {', '.join(missing)}")


def _check_law(spec: Any, where: str) -> dict:
    if not isinstance(spec, dict):
        raise ConfigError(f"{where}: expected an object")
    family = spec.get("family")
    if family not in _FAMILY_FIELDS:
        raise ConfigError(f"{where}.family: expected one of {sorted(_FAMILY_FIELDS)}, got {json.dumps(family)}")
    required, optional = _FAMILY_FIELDS[family]
    _check_keys(spec, required | {"family"}, optional | {"name"}, where)
    if family == "table":
        _integer(spec["min_support"], f"{where}.min_support")
        w = spec["weights"]
        if not isinstance(w, list) or not w:
            raise ConfigError(f"{where}.weights: expected a non-empty list")
        for i, v in enumerate(w):
            _number(v, f"{where}.weights[{i}]")
    elif family == "geometric":
        _number(spec["p"], f"{where}.p")
    elif family == "shifted_poisson":
        _number(spec["lambda"], f"{where}.lambda")
        if "shift" in spec:
            _integer(spec["shift"], f"{where}.shift")
    return spec


def _make_law(spec: dict, tol: float, where: str):
    family = spec["family"]
    try:
        if family == "table":
            return from_weights(spec["min_support"], spec["weights"], name=spec.get("name", ""))
        if family == "geometric":
            return geometric(spec["p"], tol)
        if family == "shifted_poisson":
            return shifted_poisson(spec["lambda"], spec.get("shift", 0), tol)
        return discrete_weibull_unit(tol)
    except ValidationError as exc:
        raise type(exc)(f"{where}: {exc}") from exc


def parse_config(data: Any) -> PatternConfig:
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be an object")
    _check_keys(data, {"laws"}, _TOP_FIELDS - {"laws"}, "config")
    laws = data["laws"]
    if not isinstance(laws, list) or not laws:
        raise ConfigError("laws: expected a non-empty list")
    checked = tuple(_check_law(spec, f"laws[{i}]") for i, spec in enumerate(laws))

    tols = data.get("tolerances", {})
    if not isinstance(tols, dict):
        raise ConfigError("tolerances: expected an object")
    _check_keys(tols, set(), _TOLERANCE_FIELDS, "tolerances")
    kw = {k: _number(v, f"tolerances.{k}", positive=True) for k, v in tols.items()}

    precision = data.get("precision")
    if precision is not None:
        precision = _integer(precision, "precision")
        if precision < 16:
            raise ConfigError("precision: use at least 16 digits (or null for float64)")
    overshoot = data.get("overshoot", True)
    if not isinstance(overshoot, bool):
        raise ConfigError("overshoot: expected true or false")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise ConfigError("name: expected a string")
    cfg = PatternConfig(laws=checked, precision=precision, overshoot=overshoot, name=name, raw=data, **kw)
    cfg.pattern()  # surface family parameter errors now
    return cfg


def load_config(path: str | Path) -> PatternConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from exc
    try:
        return parse_config(data)
    except ValidationError as exc:
        raise type(exc)(f"{path}: {exc}") from exc
