"""Batch command-line front end.

Subcommands: keyrate (single point, JSON on stdout), sweep (CSV/JSON
files), spectrum (noise terms over a frequency grid), plan (network
feasibility, allocation and per-pair rates), design (cavity geometry).

Exit codes: 0 success/secure, 1 usage or config error, 2 key rate not
positive, 3 network plan infeasible.  COMBQKD_CONFIG names a default
config file; an explicit --config wins.
"""
import argparse
import json
import os
import sys

from . import __version__
from ._kernels import BACKEND_NAME
from .config import load_config
from .errors import CombQKDError, ConfigError, InfeasibleSpacing
from .opo import (bandwidth_from_crystal, cavity_length_for_fsr,
                  crystal_length_for_bandwidth, fsr_from_cavity)
from .planner import allocate, pair_budget, plan_keyrates, verify_plan
from .sweep import (curve_output_path, evaluate_point, run_multi_curve,
                    run_sweep, spectrum_csv_text, spectrum_json_text,
                    sweep_csv_text, sweep_json_text)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INSECURE = 2
EXIT_INFEASIBLE = 3


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; we reserve 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _build_parser():
    parser = _Parser(prog="combqkd",
                     description="Frequency-comb CVQKD network simulator")
    parser.add_argument("--version", action="version",
                        version=f"combqkd {__version__} ({BACKEND_NAME} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file "
                       "(default: $COMBQKD_CONFIG if set)")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config field by dotted name; repeatable")
        p.add_argument("--output", help="output file path")
        p.add_argument("--format", choices=("csv", "json"),
                       help="output format (default from config)")
        p.add_argument("--convention", choices=("standard", "paper"),
                       help="symplectic-invariant convention")
        p.add_argument("--workers", type=int, default=1,
                       help="worker processes for sweeps (default 1)")

    common(sub.add_parser("keyrate", help="single key-rate evaluation"))
    common(sub.add_parser("sweep", help="parameter sweep to CSV/JSON"))
    common(sub.add_parser("spectrum", help="technical-noise spectrum grid"))
    common(sub.add_parser("plan", help="network feasibility and allocation"))
    design = sub.add_parser("design", help="cavity/crystal geometry rules")
    design.add_argument("--cavity-length-m", type=float)
    design.add_argument("--crystal-length-m", type=float)
    design.add_argument("--target-fsr-hz", type=float)
    design.add_argument("--target-bandwidth-hz", type=float)
    return parser


def _load(args):
    path = args.config or os.environ.get("COMBQKD_CONFIG") or None
    overrides = list(args.set)
    if args.convention:
        overrides.append(f"convention={args.convention}")
    if args.output:
        overrides.append(f"output.path={json.dumps(args.output)}")
    if args.format:
        overrides.append(f"output.format={args.format}")
    return load_config(path, overrides)


def _emit(text, path):
    if path:
        with open(path, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def cmd_keyrate(args):
    config = _load(args)
    report = evaluate_point(config)
    record = report.to_record()
    record["config_sha256"] = config.config_hash()
    record["comb_index"] = config.comb_index
    text = json.dumps(record, indent=2, sort_keys=True) + "\n"
    _emit(text, config.output.path)
    return EXIT_OK if report.secure else EXIT_INSECURE


def cmd_sweep(args):
    config = _load(args)
    if config.sweep is None:
        raise ConfigError("sweep command needs a [sweep] section "
                          "(e.g. --set sweep.axis=... sweep.start=...)")
    fmt = config.output.format
    precision = config.output.precision
    writer = sweep_csv_text if fmt == "csv" else sweep_json_text
    workers = max(1, args.workers)
    if config.sweep.curves:
        if not config.output.path:
            raise ConfigError("multi-curve sweeps need an --output path")
        for label, result in run_multi_curve(config, workers=workers):
            _emit(writer(result, precision),
                  curve_output_path(config.output.path, label))
    else:
        result = run_sweep(config, workers=workers)
        _emit(writer(result, precision), config.output.path)
    return EXIT_OK


def cmd_spectrum(args):
    config = _load(args)
    fmt = config.output.format
    text = (spectrum_csv_text(config, config.output.precision) if fmt == "csv"
            else spectrum_json_text(config, config.output.precision))
    _emit(text, config.output.path)
    return EXIT_OK


def _plan_table(plan, rates):
    lines = []
    header = (f"{'pair':>8} {'tooth':>5} {'orient':>6} {'signal':>6} "
              f"{'idler':>5} {'het':>3} {'K (bits/pulse)':>16} {'secure':>6}")
    lines.append(header)
    lines.append("-" * len(header))
    for assignment in plan.assignments:
        report = rates.reports[assignment.users]
        pair = f"({assignment.users[0]},{assignment.users[1]})"
        lines.append(
            f"{pair:>8} {assignment.magnitude:>5} {assignment.orientation:>6} "
            f"{assignment.signal_user:>6} {assignment.idler_user:>5} "
            f"{assignment.het_user:>3} {report.key_rate_bits:>16.6f} "
            f"{'yes' if report.secure else 'no':>6}")
    return "\n".join(lines)


def cmd_plan(args):
    config = _load(args)
    if config.network is None:
        raise ConfigError("plan command needs a [network] section "
                          "(e.g. --set network.n_users=4)")
    try:
        budget = pair_budget(config.network, opo=config.opo, seed=config.seed)
    except InfeasibleSpacing as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if not budget.feasible:
        print(f"infeasible: pairs_needed = {budget.pairs_needed} > "
              f"pairs_available = {budget.pairs_available} "
              f"(limiting constraint: {budget.limiting_constraint})",
              file=sys.stderr)
        return EXIT_INFEASIBLE
    plan = allocate(config.network, opo=config.opo, seed=config.seed)
    ok, violations = verify_plan(plan, config.network)
    if not ok:
        print("allocation failed verification:", file=sys.stderr)
        for violation in violations:
            print(f"  - {violation}", file=sys.stderr)
        return EXIT_ERROR
    rates = plan_keyrates(plan, config.distances_km, config.opo, config.seed,
                          config.link, config.convention)
    record = plan.to_record()
    record["verified"] = ok
    record["keyrates"] = {
        f"{u},{v}": rates.reports[(u, v)].to_record()
        for (u, v) in sorted(rates.reports)
    }
    record["summary"] = {
        "min_key_rate_bits": rates.min_key_rate_bits,
        "median_key_rate_bits": rates.median_key_rate_bits,
        "total_key_rate_bits": rates.total_key_rate_bits,
        "all_secure": rates.all_secure,
    }
    record["config_sha256"] = config.config_hash()
    if config.output.format == "json" and not config.output.path:
        sys.stdout.write(json.dumps(record, indent=2, sort_keys=True) + "\n")
    else:
        print(_plan_table(plan, rates))
        print(f"\npairs: {budget.pairs_needed} needed, "
              f"{budget.pairs_available} available "
              f"(magnitudes {list(budget.usable_magnitudes)}, both orientations)")
        print(f"LO branches: {budget.lo_branches_per_pair} per-pair, "
              f"{budget.lo_branches_shared} with orientation sharing")
        print(f"key rate bits/pulse: min {rates.min_key_rate_bits:.6f}, "
              f"median {rates.median_key_rate_bits:.6f}, "
              f"total {rates.total_key_rate_bits:.6f}")
        if config.output.path:
            with open(config.output.path, "w") as handle:
                json.dump(record, handle, indent=2, sort_keys=True)
                handle.write("\n")
    return EXIT_OK


def cmd_design(args):
    given = {name: getattr(args, name) for name in
             ("cavity_length_m", "crystal_length_m", "target_fsr_hz",
              "target_bandwidth_hz")}
    if not any(v is not None for v in given.values()):
        raise ConfigError("design needs at least one of --cavity-length-m, "
                          "--crystal-length-m, --target-fsr-hz, "
                          "--target-bandwidth-hz")
    report = {}
    if args.cavity_length_m is not None:
        report["cavity_length_m"] = args.cavity_length_m
        report["fsr_hz"] = fsr_from_cavity(args.cavity_length_m)
    if args.crystal_length_m is not None:
        report["crystal_length_m"] = args.crystal_length_m
        report["bandwidth_hz"] = bandwidth_from_crystal(args.crystal_length_m)
    if args.target_fsr_hz is not None:
        report["target_fsr_hz"] = args.target_fsr_hz
        report["cavity_length_for_target_m"] = cavity_length_for_fsr(args.target_fsr_hz)
    if args.target_bandwidth_hz is not None:
        report["target_bandwidth_hz"] = args.target_bandwidth_hz
        report["crystal_length_for_target_m"] = \
            crystal_length_for_bandwidth(args.target_bandwidth_hz)
    fsr = report.get("fsr_hz", report.get("target_fsr_hz"))
    bandwidth = report.get("bandwidth_hz", report.get("target_bandwidth_hz"))
    if fsr and bandwidth:
        report["max_tooth_magnitude"] = int((bandwidth / 2.0) // fsr)
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


_COMMANDS = {
    "keyrate": cmd_keyrate,
    "sweep": cmd_sweep,
    "spectrum": cmd_spectrum,
    "plan": cmd_plan,
    "design": cmd_design,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except CombQKDError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
