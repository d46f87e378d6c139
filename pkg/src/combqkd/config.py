"""Run configuration: defaults, JSON file parsing, dotted overrides.

Precedence is built-in default < config file < --set override.  The
fully resolved configuration is kept as a plain dict so runs can be
hashed and reproduced; every validation error names the offending
dotted field.

dB alternates: eta1_db, eta2_db, eta_det_db and eta_ws_db may be given
instead of the linear fields and are converted with T = 10^(dB/10).
The fiber attenuation is a magnitude; a negative dB/km figure is
accepted and folded to its absolute value.
"""
import copy
import hashlib
import json
import math
from dataclasses import dataclass

from .errors import CombQKDError, ConfigError
from .gaussian import CONVENTIONS
from .link import LinkParams, db_to_linear
from .opo import OpoParams, SeedNoiseModel
from .planner import NetworkSpec

TOOL_VERSION = "0.1.0"

SWEEP_AXES = ("distance_symmetric", "T_tot", "chi_over_k", "eta1_eta2",
              "eps", "eta_det", "v_el", "beta")

DISTANCE_MODES = ("per_arm", "total_symmetric")

DEFAULT_CONFIG = {
    "convention": "standard",
    "comb_index": 1,
    "distance_mode": "per_arm",
    "opo": {
        "k_tau": 0.05,
        "gamma_tau": 0.0,
        "chi_over_k": 0.75,
        "fsr_hz": 15e9,
    },
    "seed": {
        "n_b": 1.0,
        "n_a": 1.0,
        "jitter_peak_rad_s": 2.0 * math.pi * 1e7,
        "envelope_scale": 4.0 * math.pi * 1e7,
    },
    "link": {
        "eta1": 1.0,
        "eta2": 1.0,
        "L1_km": 0.0,
        "L2_km": 0.0,
        "alpha_db_per_km": 0.2,
        "eps1": 0.01,
        "eps2": 0.01,
        "eta_det": 1.0,
        "v_el": 0.0,
        "eta_ws_db": -0.2,
        "beta": 0.98,
    },
    "output": {
        "path": None,
        "format": "csv",
        "precision": 9,
    },
}

_DB_ALTERNATES = {
    "eta1_db": "eta1",
    "eta2_db": "eta2",
    "eta_det_db": "eta_det",
    "eta_ws_db": "eta_ws",
}

_LINK_KEYS = {"eta1", "eta2", "L1_km", "L2_km", "alpha_db_per_km", "eps1",
              "eps2", "eta_det", "v_el", "eta_ws", "beta"} | set(_DB_ALTERNATES)
_OPO_KEYS = {"k_tau", "gamma_tau", "chi_over_k", "fsr_hz"}
_SEED_KEYS = {"n_b", "n_a", "jitter_peak_rad_s", "envelope_scale"}
_NETWORK_KEYS = {"n_users", "fsr_hz", "mod_bandwidth_hz", "ws_min_spacing_hz",
                 "comb_bandwidth_hz", "noise_clean_threshold", "distances_km"}
_SWEEP_KEYS = {"axis", "start", "stop", "points", "scale", "curves"}
_SPECTRUM_KEYS = {"omega_min_rad_s", "omega_max_rad_s", "points"}
_OUTPUT_KEYS = {"path", "format", "precision"}
_TOP_KEYS = {"convention", "comb_index", "distance_mode", "opo", "seed",
             "link", "network", "sweep", "spectrum", "output"}


@dataclass(frozen=True)
class SweepSpec:
    """One swept axis plus optional per-curve overrides."""
    axis: str
    start: float
    stop: float
    points: int
    scale: str = "linear"
    curves: tuple = ()   # of (label, {dotted: value}) pairs


@dataclass(frozen=True)
class SpectrumSpec:
    """Analysis-frequency grid for noise-spectrum output."""
    omega_min_rad_s: float = -2.0 * math.pi * 1e8
    omega_max_rad_s: float = 2.0 * math.pi * 1e8
    points: int = 401


@dataclass(frozen=True)
class OutputSpec:
    path: object = None
    format: str = "csv"
    precision: int = 9


@dataclass(frozen=True)
class RunConfig:
    """Fully validated run configuration.

    resolved is the plain dict the dataclasses were built from, with dB
    alternates already folded to linear values; it is what gets hashed.
    """
    opo: OpoParams
    seed: SeedNoiseModel
    link: LinkParams
    network: object          # NetworkSpec or None
    distances_km: object     # dict user -> km, or None
    sweep: object            # SweepSpec or None
    spectrum: SpectrumSpec
    output: OutputSpec
    convention: str
    comb_index: int
    distance_mode: str
    resolved: dict

    def config_hash(self):
        canon = json.dumps(self.resolved, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:12]


def _deep_merge(base, extra):
    out = copy.deepcopy(base)
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def parse_set_overrides(pairs):
    """Turn repeated KEY=VALUE strings into a nested dict.

    Values are parsed as JSON when possible, else kept as strings, so
    numbers, booleans and lists all work: link.beta=0.95,
    network.distances_km=[2,2,2,2], convention=paper.
    """
    nested = {}
    for raw in pairs:
        if "=" not in raw:
            raise ConfigError(f"--set expects KEY=VALUE, got {raw!r}")
        key, _, text = raw.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"--set expects KEY=VALUE, got {raw!r}")
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        node = nested
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set key {key!r} conflicts with a scalar")
        node[parts[-1]] = value
    return nested


def _check_keys(section, data, allowed):
    for key in data:
        if key not in allowed:
            where = f"{section}.{key}" if section else key
            raise ConfigError(f"unknown config field {where!r}")


def _fold_db(section_name, data):
    """Replace *_db alternates with linear values; reject double entries."""
    out = dict(data)
    for db_key, lin_key in _DB_ALTERNATES.items():
        if db_key in out:
            if lin_key in out:
                raise ConfigError(
                    f"{section_name}.{lin_key} and {section_name}.{db_key} "
                    "are both set; give one")
            out[lin_key] = db_to_linear(float(out.pop(db_key)))
    return out


def _number(section, key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key} must be a number, got {value!r}")
    return float(value)


def _build(section, cls, data):
    try:
        return cls(**data)
    except CombQKDError as exc:
        raise ConfigError(f"in [{section}]: {exc}") from exc
    except TypeError as exc:
        raise ConfigError(f"in [{section}]: {exc}") from exc


def load_config(path=None, set_overrides=()):
    """Resolve defaults, an optional JSON config file and --set overrides."""
    merged = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        try:
            with open(path) as handle:
                file_data = json.load(handle)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"config file {path} is not valid JSON: line {exc.lineno} "
                f"column {exc.colno}: {exc.msg}") from exc
        if not isinstance(file_data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        merged = _merge_user(merged, file_data)
    if set_overrides:
        merged = _merge_user(merged, parse_set_overrides(set_overrides))
    return resolve_config(merged)


def _merge_user(base, user):
    """Deep-merge user data, dropping default dB/linear twins first.

    When the user supplies either form of a dB-alternate field the
    shipped default of both forms is discarded, so a linear value in a
    config file is not shadowed by the default eta_ws_db.
    """
    base = copy.deepcopy(base)
    link = user.get("link")
    if isinstance(link, dict):
        for db_key, lin_key in _DB_ALTERNATES.items():
            if db_key in link or lin_key in link:
                base.get("link", {}).pop(db_key, None)
                base.get("link", {}).pop(lin_key, None)
    return _deep_merge(base, user)


def resolve_config(merged):
    """Validate a fully merged plain dict into a RunConfig."""
    _check_keys("", merged, _TOP_KEYS)

    convention = merged.get("convention", "standard")
    if convention not in CONVENTIONS:
        raise ConfigError(
            f"convention must be one of {CONVENTIONS}, got {convention!r}")
    comb_index = merged.get("comb_index", 1)
    if isinstance(comb_index, bool) or not isinstance(comb_index, int) or comb_index < 0:
        raise ConfigError(f"comb_index must be an integer >= 0, got {comb_index!r}")
    distance_mode = merged.get("distance_mode", "per_arm")
    if distance_mode not in DISTANCE_MODES:
        raise ConfigError(
            f"distance_mode must be one of {DISTANCE_MODES}, got {distance_mode!r}")

    opo_data = dict(merged.get("opo", {}))
    _check_keys("opo", opo_data, _OPO_KEYS)
    opo = _build("opo", OpoParams, opo_data)

    seed_data = dict(merged.get("seed", {}))
    _check_keys("seed", seed_data, _SEED_KEYS)
    seed = _build("seed", SeedNoiseModel, seed_data)

    link_data = _fold_db("link", dict(merged.get("link", {})))
    _check_keys("link", link_data, _LINK_KEYS)
    # alpha may arrive with the loss sign convention; store the magnitude
    if "alpha_db_per_km" in link_data:
        link_data["alpha_db_per_km"] = abs(
            _number("link", "alpha_db_per_km", link_data["alpha_db_per_km"]))
    link = _build("link", LinkParams, link_data)

    network = None
    distances = None
    if merged.get("network") is not None:
        net_data = dict(merged["network"])
        _check_keys("network", net_data, _NETWORK_KEYS)
        raw_dist = net_data.pop("distances_km", 0.0)
        if raw_dist is None:
            raw_dist = 0.0
        net_data.setdefault("fsr_hz", opo.fsr_hz)
        network = _build("network", NetworkSpec, net_data)
        if isinstance(raw_dist, (int, float)) and not isinstance(raw_dist, bool):
            distances = {u: float(raw_dist) for u in range(network.n_users)}
        elif isinstance(raw_dist, list):
            if len(raw_dist) != network.n_users:
                raise ConfigError(
                    f"network.distances_km needs {network.n_users} entries, "
                    f"got {len(raw_dist)}")
            distances = {u: _number("network", "distances_km", d)
                         for u, d in enumerate(raw_dist)}
        else:
            raise ConfigError(
                "network.distances_km must be a number or a list of numbers")
        for u, d in distances.items():
            if d < 0:
                raise ConfigError(
                    f"network.distances_km[{u}] must be >= 0, got {d}")

    sweep = None
    if merged.get("sweep") is not None:
        sweep_data = dict(merged["sweep"])
        _check_keys("sweep", sweep_data, _SWEEP_KEYS)
        sweep = _resolve_sweep(sweep_data)

    spectrum_data = dict(merged.get("spectrum") or {})
    _check_keys("spectrum", spectrum_data, _SPECTRUM_KEYS)
    spectrum = _build("spectrum", SpectrumSpec, spectrum_data)
    if spectrum.points < 2:
        raise ConfigError(f"spectrum.points must be >= 2, got {spectrum.points}")

    output_data = dict(merged.get("output", {}))
    _check_keys("output", output_data, _OUTPUT_KEYS)
    output = _build("output", OutputSpec, output_data)
    if output.format not in ("csv", "json"):
        raise ConfigError(
            f"output.format must be 'csv' or 'json', got {output.format!r}")
    if isinstance(output.precision, bool) or not isinstance(output.precision, int) \
            or not 1 <= output.precision <= 17:
        raise ConfigError(
            f"output.precision must be an integer in [1, 17], got "
            f"{output.precision!r}")

    resolved = {
        "convention": convention,
        "comb_index": comb_index,
        "distance_mode": distance_mode,
        "opo": {k: getattr(opo, k) for k in
                ("k_tau", "gamma_tau", "chi_over_k", "fsr_hz")},
        "seed": {k: getattr(seed, k) for k in
                 ("n_b", "n_a", "jitter_peak_rad_s", "envelope_scale")},
        "link": {k: getattr(link, k) for k in
                 ("eta1", "eta2", "L1_km", "L2_km", "alpha_db_per_km",
                  "eps1", "eps2", "eta_det", "v_el", "eta_ws", "beta")},
        "network": None if network is None else {
            "n_users": network.n_users,
            "fsr_hz": network.fsr_hz,
            "mod_bandwidth_hz": network.mod_bandwidth_hz,
            "ws_min_spacing_hz": network.ws_min_spacing_hz,
            "comb_bandwidth_hz": network.comb_bandwidth_hz,
            "noise_clean_threshold": network.noise_clean_threshold,
            "distances_km": None if distances is None else
                [distances[u] for u in sorted(distances)],
        },
        "sweep": None if sweep is None else {
            "axis": sweep.axis, "start": sweep.start, "stop": sweep.stop,
            "points": sweep.points, "scale": sweep.scale,
            "curves": [{"label": label, "set": dict(sorted(sets.items()))}
                       for label, sets in sweep.curves],
        },
        "spectrum": {"omega_min_rad_s": spectrum.omega_min_rad_s,
                     "omega_max_rad_s": spectrum.omega_max_rad_s,
                     "points": spectrum.points},
        "output": {"path": output.path, "format": output.format,
                   "precision": output.precision},
    }
    return RunConfig(opo=opo, seed=seed, link=link, network=network,
                     distances_km=distances, sweep=sweep, spectrum=spectrum,
                     output=output, convention=convention,
                     comb_index=comb_index, distance_mode=distance_mode,
                     resolved=resolved)


def _resolve_sweep(data):
    axis = data.get("axis")
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep.axis must be one of {SWEEP_AXES}, got {axis!r}")
    for key in ("start", "stop"):
        if key not in data:
            raise ConfigError(f"sweep.{key} is required")
    start = _number("sweep", "start", data["start"])
    stop = _number("sweep", "stop", data["stop"])
    points = data.get("points", 2)
    if isinstance(points, bool) or not isinstance(points, int) or points < 2:
        raise ConfigError(f"sweep.points must be an integer >= 2, got {points!r}")
    scale = data.get("scale", "linear")
    if scale not in ("linear", "log"):
        raise ConfigError(f"sweep.scale must be 'linear' or 'log', got {scale!r}")
    if scale == "log" and (start <= 0 or stop <= 0):
        raise ConfigError("sweep.scale = log needs positive start and stop")
    _validate_axis_bounds(axis, start, stop)
    curves = []
    for index, entry in enumerate(data.get("curves", ())):
        if not isinstance(entry, dict) or "set" not in entry:
            raise ConfigError(
                f"sweep.curves[{index}] must be an object with a 'set' mapping")
        label = str(entry.get("label", f"curve{index}"))
        sets = entry["set"]
        if not isinstance(sets, dict):
            raise ConfigError(f"sweep.curves[{index}].set must be a mapping")
        curves.append((label, dict(sets)))
    labels = [label for label, _ in curves]
    if len(labels) != len(set(labels)):
        raise ConfigError("sweep.curves labels must be unique")
    return SweepSpec(axis=axis, start=start, stop=stop, points=points,
                     scale=scale, curves=tuple(curves))


def _validate_axis_bounds(axis, start, stop):
    lo, hi = min(start, stop), max(start, stop)
    if axis in ("eta1_eta2", "eta_det", "beta"):
        if lo <= 0.0 or hi > 1.0:
            raise ConfigError(f"sweep bounds for {axis} must lie in (0, 1]")
    elif axis in ("distance_symmetric", "eps", "v_el", "chi_over_k"):
        if lo < 0.0:
            raise ConfigError(f"sweep bounds for {axis} must be >= 0")
    elif axis == "T_tot":
        if lo < 1.0:
            raise ConfigError(
                "sweep bounds for T_tot are multiples of k_tau and must be >= 1")
