"""Parameter sweeps and deterministic CSV/JSON emission.

Every sweep point runs the same pipeline: source covariance at the
configured comb tooth, central-node insertion loss, fiber channel and
detectors, key rate.  Points are pure functions of the configuration,
so a worker pool only changes scheduling, never values; rows are always
written in axis order and no timestamps are emitted, which makes equal
configurations produce byte-identical files.
"""
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .config import TOOL_VERSION, resolve_config
from .errors import DomainError
from .keyrate import key_rate
from .link import apply_source_loss, received_covariance
from .opo import noise_breakdown, source_covariance

SWEEP_SCHEMA = "combqkd-sweep-v1"
SPECTRUM_SCHEMA = "combqkd-spectrum-v1"

SWEEP_COLUMNS = ("i_ab_bits", "chi_ae_bits", "key_rate_bits",
                 "nu1", "nu2", "nu3", "nu4", "a_snu", "b_snu", "c_snu",
                 "secure", "convention")

SPECTRUM_COLUMNS = ("omega_rad_s", "seed_noise", "jitter_noise_x",
                    "jitter_noise_p", "cov_seed_x", "cov_seed_p",
                    "cov_xp", "cov_px")


def evaluate_point(config):
    """Key-rate report for one configuration at its comb tooth."""
    cm, _ = source_covariance(config.opo, config.seed, config.comb_index)
    cm = apply_source_loss(cm, config.link.eta1, config.link.eta2)
    cm = received_covariance(cm, config.link)
    return key_rate(cm, config.link.beta, config.convention)


def apply_axis(resolved, axis, value):
    """Return a new resolved-config dict with the axis value applied."""
    out = json.loads(json.dumps(resolved))
    if axis == "distance_symmetric":
        arm = value if out["distance_mode"] == "per_arm" else value / 2.0
        out["link"]["L1_km"] = arm
        out["link"]["L2_km"] = arm
    elif axis == "T_tot":
        out["opo"]["gamma_tau"] = (value - 1.0) * out["opo"]["k_tau"]
    elif axis == "chi_over_k":
        out["opo"]["chi_over_k"] = value
    elif axis == "eta1_eta2":
        out["link"]["eta1"] = value
        out["link"]["eta2"] = value
    elif axis == "eps":
        out["link"]["eps1"] = value
        out["link"]["eps2"] = value
    elif axis in ("eta_det", "v_el", "beta"):
        out["link"][axis] = value
    else:
        raise DomainError(f"unknown sweep axis {axis!r}")
    return out


def axis_values(spec):
    """Grid for the swept axis, ascending."""
    n = spec.points
    if spec.scale == "log":
        lo = math.log(spec.start)
        hi = math.log(spec.stop)
        values = [math.exp(lo + (hi - lo) * i / (n - 1)) for i in range(n)]
    else:
        values = [spec.start + (spec.stop - spec.start) * i / (n - 1)
                  for i in range(n)]
    return sorted(values)


def _point_job(args):
    resolved, axis, value = args
    config = resolve_config(apply_axis(resolved, axis, value))
    report = evaluate_point(config)
    return value, report.to_record()


@dataclass(frozen=True)
class SweepResult:
    axis: str
    values: list
    records: list
    meta: dict


def run_sweep(config, workers=1):
    """Evaluate the configured sweep; results are worker-count independent."""
    if config.sweep is None:
        raise DomainError("configuration has no [sweep] section")
    spec = config.sweep
    values = axis_values(spec)
    jobs = [(config.resolved, spec.axis, v) for v in values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_point_job, jobs, chunksize=8))
    else:
        results = [_point_job(job) for job in jobs]
    meta = {
        "schema": SWEEP_SCHEMA,
        "tool_version": TOOL_VERSION,
        "config_sha256": config.config_hash(),
        "axis": spec.axis,
        "convention": config.convention,
        "points": spec.points,
    }
    return SweepResult(axis=spec.axis,
                       values=[v for v, _ in results],
                       records=[r for _, r in results],
                       meta=meta)


def format_value(value, precision):
    """Deterministic text form used in CSV cells and JSON numbers."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{precision}e}"
    return str(value)


def sweep_csv_text(result, precision):
    lines = [
        f"# schema={result.meta['schema']} config_sha256="
        f"{result.meta['config_sha256']} tool_version={result.meta['tool_version']}",
        f"# axis={result.axis} convention={result.meta['convention']} "
        f"points={result.meta['points']}",
        ",".join((result.axis,) + SWEEP_COLUMNS),
    ]
    for value, record in zip(result.values, result.records):
        cells = [format_value(float(value), precision)]
        for column in SWEEP_COLUMNS:
            cells.append(format_value(record[column], precision))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def sweep_json_text(result, precision):
    rows = []
    for value, record in zip(result.values, result.records):
        row = {result.axis: float(format_value(float(value), precision))}
        for column in SWEEP_COLUMNS:
            cell = record[column]
            if isinstance(cell, float):
                cell = float(format_value(cell, precision))
            row[column] = cell
        rows.append(row)
    return json.dumps({"meta": result.meta, "rows": rows},
                      indent=2, sort_keys=True) + "\n"


def spectrum_rows(config):
    """Noise-term rows over the configured analysis-frequency grid."""
    spec = config.spectrum
    n = spec.points
    omegas = [spec.omega_min_rad_s
              + (spec.omega_max_rad_s - spec.omega_min_rad_s) * i / (n - 1)
              for i in range(n)]
    rows = []
    for omega in omegas:
        terms = noise_breakdown(config.opo, config.seed, omega)
        rows.append((omega,) + terms.as_tuple())
    return rows


def spectrum_csv_text(config, precision):
    rows = spectrum_rows(config)
    lines = [
        f"# schema={SPECTRUM_SCHEMA} config_sha256={config.config_hash()} "
        f"tool_version={TOOL_VERSION}",
        ",".join(SPECTRUM_COLUMNS),
    ]
    for row in rows:
        lines.append(",".join(format_value(v, precision) for v in row))
    return "\n".join(lines) + "\n"


def spectrum_json_text(config, precision):
    rows = spectrum_rows(config)
    payload = {
        "meta": {"schema": SPECTRUM_SCHEMA,
                 "config_sha256": config.config_hash(),
                 "tool_version": TOOL_VERSION},
        "rows": [
            {name: float(format_value(v, precision))
             for name, v in zip(SPECTRUM_COLUMNS, row)}
            for row in rows
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def curve_output_path(base_path, label):
    """out.csv -> out_<label>.csv for multi-curve sweeps."""
    text = str(base_path)
    if "." in text.rsplit("/", 1)[-1]:
        stem, _, suffix = text.rpartition(".")
        return f"{stem}_{label}.{suffix}"
    return f"{text}_{label}"


def run_multi_curve(config, workers=1):
    """Run one sweep per curve override set; yields (label, SweepResult)."""
    spec = config.sweep
    out = []
    for label, sets in spec.curves:
        resolved = json.loads(json.dumps(config.resolved))
        for dotted, value in sets.items():
            node = resolved
            parts = dotted.split(".")
            for part in parts[:-1]:
                if part not in node or not isinstance(node[part], dict):
                    raise DomainError(
                        f"curve {label!r}: unknown override {dotted!r}")
                node = node[part]
            if parts[-1] not in node:
                raise DomainError(f"curve {label!r}: unknown override {dotted!r}")
            node[parts[-1]] = value
        curve_config = resolve_config(resolved)
        out.append((label, run_sweep(curve_config, workers=workers)))
    return out
