"""Flat key-value scenario configuration files.

Format: one ``key = value`` per line, ``#`` starts a comment, blank lines
ignored.  Values are scalars, comma-separated triples, or strings.  Keys
use dotted prefixes that mirror the ScenarioConfig fields; unknown keys
are rejected.  ``gains.kD`` may be given redundantly but must equal
``gains.kI + gains.kDI``.

CLI overrides use the same dotted keys, last one wins.
"""

from __future__ import annotations

import numpy as np

from .control import ClassicPidGains, ControllerGains
from .harness import CONTROLLERS, DisturbanceModel, ScenarioConfig, \
    default_classic_gains, default_disturbance, default_gains, default_inertia
from .rigid_body import GRAVITY, InertiaModel
from .trajectory import HelixParams

__all__ = ["ConfigError", "load_config", "parse_config", "serialize_config"]


class ConfigError(ValueError):
    """Malformed, inconsistent or unknown configuration input."""


_SCALAR_KEYS = {
    "h", "duration", "gravity", "yaw",
    "gains.kP", "gains.kI", "gains.kDI", "gains.kD",
    "inertia.m",
    "helix.radius", "helix.rate", "helix.climb", "helix.phase",
}
_TRIPLE_KEYS = {
    "gains.K",
    "inertia.J",
    "helix.center",
    "disturbance.const", "disturbance.ampl", "disturbance.freq",
    "disturbance.phase",
    "init.rotation", "init.omega", "init.b_offset", "init.v",
}
# scalar (isotropic) or triple (diagonal)
_DIAG_KEYS = {"gains.P", "gains.Lv", "classic.Kp", "classic.Ki", "classic.Kd"}
_STRING_KEYS = {"controller", "output", "reference", "name"}
_INT_KEYS = {"seed"}
_BOOL_KEYS = {"disturbance.enabled"}

KNOWN_KEYS = (
    _SCALAR_KEYS | _TRIPLE_KEYS | _DIAG_KEYS | _STRING_KEYS | _INT_KEYS
    | _BOOL_KEYS
)


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _SCALAR_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _BOOL_KEYS:
            if raw.lower() in ("true", "1", "yes", "on"):
                return True
            if raw.lower() in ("false", "0", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if key in _TRIPLE_KEYS:
            parts = [float(p) for p in raw.split(",")]
            if len(parts) != 3:
                raise ValueError(f"expected 3 components, got {len(parts)}")
            return np.array(parts)
        if key in _DIAG_KEYS:
            parts = [float(p) for p in raw.split(",")]
            if len(parts) == 1:
                return np.full(3, parts[0])
            if len(parts) == 3:
                return np.array(parts)
            raise ValueError("expected a scalar or 3 components")
        return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {exc}") from None


def parse_pairs(text: str) -> dict:
    """Parse key = value lines into a dict of typed values."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in stripped.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _parse_value(key, raw)
    return values


def apply_overrides(values: dict, overrides) -> dict:
    """Apply ``key=value`` override strings (last one wins)."""
    out = dict(values)
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, raw = (s.strip() for s in item.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown override key {key!r}")
        out[key] = _parse_value(key, raw)
    return out


def build_config(values: dict, name: str = "default") -> ScenarioConfig:
    """Assemble and validate a ScenarioConfig from parsed values."""
    try:
        inertia_default = default_inertia()
        m = float(values.get("inertia.m", inertia_default.m))
        if "inertia.J" in values:
            inertia = InertiaModel(J=np.diag(values["inertia.J"]), m=m)
        else:
            inertia = InertiaModel(J=inertia_default.J, m=m)

        gd = default_gains(m)
        k_i = float(values.get("gains.kI", gd.kI))
        k_di = float(values.get("gains.kDI", gd.kDI))
        if "gains.kD" in values:
            if abs(values["gains.kD"] - (k_i + k_di)) > 1e-12:
                raise ConfigError(
                    f"gains.kD = {values['gains.kD']} must equal "
                    f"gains.kI + gains.kDI = {k_i + k_di}")
        gains = ControllerGains(
            kP=float(values.get("gains.kP", gd.kP)),
            kI=k_i, kDI=k_di,
            K=values.get("gains.K", gd.K),
            P=np.diag(values["gains.P"]) if "gains.P" in values else gd.P,
            Lv=np.diag(values["gains.Lv"]) if "gains.Lv" in values else gd.Lv,
        )

        cd = default_classic_gains()
        classic = ClassicPidGains(
            Kp=values.get("classic.Kp", cd.Kp),
            Ki=values.get("classic.Ki", cd.Ki),
            Kd=values.get("classic.Kd", cd.Kd),
        )

        hd = HelixParams()
        helix = HelixParams(
            radius=float(values.get("helix.radius", hd.radius)),
            angular_rate=float(values.get("helix.rate", hd.angular_rate)),
            climb_rate=float(values.get("helix.climb", hd.climb_rate)),
            center=values.get("helix.center", hd.center),
            phase=float(values.get("helix.phase", hd.phase)),
        )

        disturbance = None
        dist_keys = [k for k in values if k.startswith("disturbance.")
                     and k != "disturbance.enabled"]
        enabled = values.get("disturbance.enabled", bool(dist_keys))
        if enabled:
            dd = default_disturbance()
            disturbance = DisturbanceModel(
                const=values.get("disturbance.const",
                                 dd.const if not dist_keys else np.zeros(3)),
                ampl=values.get("disturbance.ampl",
                                dd.ampl if not dist_keys else np.zeros(3)),
                freq=values.get("disturbance.freq",
                                dd.freq if not dist_keys else np.zeros(3)),
                phase=values.get("disturbance.phase", np.zeros(3)),
            )

        cfg = ScenarioConfig(
            name=str(values.get("name", name)),
            controller=str(values.get("controller", "geometric-pid")),
            gains=gains,
            classic_gains=classic,
            inertia=inertia,
            h=float(values.get("h", 0.01)),
            duration=float(values.get("duration", 30.0)),
            init_rotation=values.get("init.rotation",
                                     np.array([0.3, -0.2, 0.4])),
            init_omega=values.get("init.omega", np.array([-1.5, 1.0, -1.2])),
            init_b_offset=values.get("init.b_offset",
                                     np.array([0.5, -0.5, 0.0])),
            init_v=values.get("init.v"),
            helix=helix,
            yaw_d=float(values.get("yaw", 0.0)),
            disturbance=disturbance,
            gravity=float(values.get("gravity", GRAVITY)),
            seed=values.get("seed"),
            output=values.get("output"),
            reference=values.get("reference"),
        )
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.controller not in CONTROLLERS:
        raise ConfigError(f"unknown controller {cfg.controller!r}")
    return cfg


def parse_config(text: str, name: str = "default",
                 overrides=None) -> ScenarioConfig:
    """Parse configuration text plus optional overrides."""
    values = apply_overrides(parse_pairs(text), overrides)
    return build_config(values, name=name)


def load_config(path, overrides=None) -> ScenarioConfig:
    """Read a configuration file; the scenario name is the file stem."""
    from pathlib import Path

    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, name=p.stem, overrides=overrides)


def serialize_config(cfg: ScenarioConfig) -> str:
    """Write a ScenarioConfig back out as key = value text."""

    def triple(v):
        return ",".join(f"{x:.17g}" for x in v)

    lines = [
        f"controller = {cfg.controller}",
        f"h = {cfg.h:.17g}                      # s",
        f"duration = {cfg.duration:.17g}        # s",
        f"gravity = {cfg.gravity:.17g}          # m/s^2",
        f"yaw = {cfg.yaw_d:.17g}                # rad",
        f"gains.kP = {cfg.gains.kP:.17g}",
        f"gains.kI = {cfg.gains.kI:.17g}",
        f"gains.kDI = {cfg.gains.kDI:.17g}",
        f"gains.K = {triple(cfg.gains.K)}",
        f"gains.P = {triple(np.diag(cfg.gains.P))}",
        f"gains.Lv = {triple(np.diag(cfg.gains.Lv))}",
        f"classic.Kp = {triple(cfg.classic_gains.Kp)}",
        f"classic.Ki = {triple(cfg.classic_gains.Ki)}",
        f"classic.Kd = {triple(cfg.classic_gains.Kd)}",
        f"inertia.J = {triple(np.diag(cfg.inertia.J))}   # kg m^2",
        f"inertia.m = {cfg.inertia.m:.17g}               # kg",
        f"helix.radius = {cfg.helix.radius:.17g}         # m",
        f"helix.rate = {cfg.helix.angular_rate:.17g}     # rad/s",
        f"helix.climb = {cfg.helix.climb_rate:.17g}      # m/s",
        f"helix.center = {triple(cfg.helix.center)}      # m",
        f"helix.phase = {cfg.helix.phase:.17g}           # rad",
        f"init.rotation = {triple(cfg.init_rotation)}    # axis-angle, rad",
        f"init.omega = {triple(cfg.init_omega)}          # rad/s",
        f"init.b_offset = {triple(cfg.init_b_offset)}    # m",
    ]
    if cfg.init_v is not None:
        lines.append(f"init.v = {triple(cfg.init_v)}     # m/s inertial")
    if cfg.disturbance is not None:
        d = cfg.disturbance
        lines += [
            f"disturbance.const = {triple(d.const)}   # N m",
            f"disturbance.ampl = {triple(d.ampl)}     # N m",
            f"disturbance.freq = {triple(d.freq)}     # rad/s",
            f"disturbance.phase = {triple(d.phase)}   # rad",
        ]
    if cfg.seed is not None:
        lines.append(f"seed = {cfg.seed}")
    if cfg.output is not None:
        lines.append(f"output = {cfg.output}")
    if cfg.reference is not None:
        lines.append(f"reference = {cfg.reference}")
    return "\n".join(lines) + "\n"
