"""Command-line surface: experiment configs, sweep execution, convergence
traces, and the brute-force comparison. Config files are INI-style key/value
text with one section per concern (see configs/ for annotated examples)."""

import argparse
import configparser
import csv
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .admm import AdmmConfig, design_rx, design_tx, digital_combiner, effective_channel
from .channel import ArrayGeometry, ClusterParams, digital_precoder, draw_channel
from .power import PowerModel
from .quant import BitRange
from .sim import (
    ExperimentConfig,
    SweepPoint,
    aggregate,
    noise_variance,
    run_experiment,
    trial_entropy,
    write_records_csv,
    write_summary_csv,
)

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class ConfigError(Exception):
    """Malformed experiment config; message names the offending field."""


_KNOWN_KEYS = {
    "experiment": {"schema_version"},
    "dims": {"n_tx", "n_rx", "l_tx", "l_rx", "n_streams"},
    "channel": {"clusters", "rays", "angular_spread", "element_spacing", "cluster_powers"},
    "sweep": {"snr_db", "gamma_tx", "gamma_rx"},
    "bits": {"min", "max"},
    "power": {
        "dac", "adc", "circuit_tx", "circuit_rx",
        "shifter_tx", "shifter_rx", "antenna_tx", "antenna_rx",
    },
    "admm": {"alpha", "max_iters", "tol_z", "tol_fit", "box_tol", "box_iters"},
    "run": {"trials", "base_seed", "schemes"},
    "bruteforce": {"design_iters", "max_combos"},
    "trace": {"tx_antennas", "rx_antennas", "trials"},
}


def _get(parser, section, key, convert, default):
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key)
    try:
        return convert(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from None


def _float_list(raw: str) -> tuple:
    values = tuple(float(tok) for tok in raw.replace(",", " ").split())
    if not values:
        raise ValueError("expected at least one number")
    return values


def _int_list(raw: str) -> tuple:
    return tuple(int(tok) for tok in raw.replace(",", " ").split())


def _str_list(raw: str) -> tuple:
    return tuple(tok.strip() for tok in raw.split(",") if tok.strip())


def load_config(path) -> tuple:
    """Parse an experiment config file; returns (ExperimentConfig, trace options)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")

    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}]")
        unknown = set(parser.options(section)) - _KNOWN_KEYS[section]
        if unknown:
            raise ConfigError(f"unknown key(s) in [{section}]: {sorted(unknown)}")

    version = _get(parser, "experiment", "schema_version", int, SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version} (expected {SCHEMA_VERSION})")

    powers = _get(parser, "channel", "cluster_powers", _float_list, None)
    try:
        clusters = ClusterParams(
            num_clusters=_get(parser, "channel", "clusters", int, 2),
            rays_per_cluster=_get(parser, "channel", "rays", int, 3),
            cluster_powers=np.asarray(powers) if powers is not None else None,
            angular_spread=_get(parser, "channel", "angular_spread", float, 0.1745),
        )
        bits = BitRange(
            min_bits=_get(parser, "bits", "min", int, 1),
            max_bits=_get(parser, "bits", "max", int, 8),
        )
        power = PowerModel(
            p_dac=_get(parser, "power", "dac", float, 0.1),
            p_adc=_get(parser, "power", "adc", float, 0.1),
            p_circuit_tx=_get(parser, "power", "circuit_tx", float, 10.0),
            p_circuit_rx=_get(parser, "power", "circuit_rx", float, 10.0),
            p_shifter_tx=_get(parser, "power", "shifter_tx", float, 0.01),
            p_shifter_rx=_get(parser, "power", "shifter_rx", float, 0.01),
            p_antenna_tx=_get(parser, "power", "antenna_tx", float, 0.1),
            p_antenna_rx=_get(parser, "power", "antenna_rx", float, 0.1),
        )
        admm = AdmmConfig(
            alpha=_get(parser, "admm", "alpha", float, 1.0),
            max_iters=_get(parser, "admm", "max_iters", int, 20),
            tol_z=_get(parser, "admm", "tol_z", float, 1e-4),
            tol_fit=_get(parser, "admm", "tol_fit", float, 1e-4),
            bit_range=bits,
            box_tol=_get(parser, "admm", "box_tol", float, 1e-8),
            box_iters=_get(parser, "admm", "box_iters", int, 500),
        )
        cfg = ExperimentConfig(
            n_tx=_get(parser, "dims", "n_tx", int, 32),
            n_rx=_get(parser, "dims", "n_rx", int, 5),
            l_tx=_get(parser, "dims", "l_tx", int, 5),
            l_rx=_get(parser, "dims", "l_rx", int, 5),
            n_streams=_get(parser, "dims", "n_streams", int, 5),
            element_spacing=_get(parser, "channel", "element_spacing", float, 0.5),
            clusters=clusters,
            snr_db=_get(parser, "sweep", "snr_db", _float_list, (10.0,)),
            gamma_tx=_get(parser, "sweep", "gamma_tx", _float_list, (0.001,)),
            gamma_rx=_get(parser, "sweep", "gamma_rx", _float_list, (0.5,)),
            bit_range=bits,
            power=power,
            admm=admm,
            trials=_get(parser, "run", "trials", int, 200),
            base_seed=_get(parser, "run", "base_seed", int, 1),
            schemes=_get(parser, "run", "schemes", _str_list,
                         ("proposed", "hybrid_1bit", "hybrid_8bit", "digital")),
            bf_design_iters=_get(parser, "bruteforce", "design_iters", int, 10),
            bf_max_combos=_get(parser, "bruteforce", "max_combos", int, 1_000_000),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    trace_opts = {
        "tx_antennas": _get(parser, "trace", "tx_antennas", _int_list, (cfg.n_tx,)),
        "rx_antennas": _get(parser, "trace", "rx_antennas", _int_list, (cfg.n_rx,)),
        "trials": _get(parser, "trace", "trials", int, cfg.trials),
    }
    return cfg, trace_opts


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    updates = {}
    if args.seed is not None:
        updates["base_seed"] = args.seed
    if args.trials is not None:
        updates["trials"] = args.trials
    return replace(cfg, **updates) if updates else cfg


def cmd_run(args) -> int:
    cfg, _ = load_config(args.config)
    cfg = _apply_overrides(cfg, args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    records = run_experiment(cfg, workers=args.threads)
    rows = aggregate(records)
    write_records_csv(records, out / "records.csv")
    write_summary_csv(rows, out / "summary.csv")

    for point in cfg.sweep:
        parts = [f"snr={point.snr_db:g} gamma_tx={point.gamma_tx:g} gamma_rx={point.gamma_rx:g}"]
        for row in rows:
            if (row["snr_db"], row["gamma_tx"], row["gamma_rx"]) == (
                point.snr_db, point.gamma_tx, point.gamma_rx,
            ):
                parts.append(f"{row['scheme']}: ee={row['ee_mean']:.4f} se={row['se_mean']:.3f}")
        print(" | ".join(parts))
    print(f"wrote {out / 'records.csv'} and {out / 'summary.csv'}")
    return 0


def _trace_one_side(cfg: ExperimentConfig, point: SweepPoint, trials: int, side: str, n_antennas: int):
    """Mean NMSE/residual per iteration for one antenna-count variant.

    Tolerances are tightened so every run executes the full iteration budget
    and the per-iteration averages are over a constant trial count.
    """
    dims = {"n_tx": n_antennas} if side == "tx" else {"n_rx": n_antennas}
    variant = replace(cfg, **dims)
    admm = replace(variant.admm, tol_z=1e-300, tol_fit=1e-300)
    noise_var = noise_variance(point.snr_db)
    tx_geom = ArrayGeometry(variant.n_tx, variant.element_spacing)
    rx_geom = ArrayGeometry(variant.n_rx, variant.element_spacing)

    acc = np.zeros((admm.max_iters, 2))
    for trial in range(trials):
        ent = trial_entropy(variant.base_seed, point, trial)
        ch = draw_channel(np.random.default_rng([ent, 0]), tx_geom, rx_geom, variant.clusters)
        f_dbf = digital_precoder(ch, variant.n_streams, noise_var)
        tx = design_tx(
            f_dbf, variant.l_tx, admm, np.random.default_rng([ent, 1, 0]),
            point.gamma_tx, variant.power,
        )
        if side == "tx":
            trace = tx.trace
        else:
            eff = effective_channel(ch.h, tx.product)
            w_dbf = digital_combiner(eff, variant.n_streams, noise_var)
            rx = design_rx(
                w_dbf, variant.l_rx, admm, np.random.default_rng([ent, 1, 1]),
                point.gamma_rx, variant.power,
            )
            trace = rx.trace
        acc[:, 0] += 10.0 ** (trace[:, 1] / 10.0)  # accumulate linear NMSE
        acc[:, 1] += trace[:, 3]
    acc /= trials
    return [
        (side, n_antennas, it + 1, 10.0 * np.log10(acc[it, 0]), acc[it, 1])
        for it in range(admm.max_iters)
    ]


def cmd_trace(args) -> int:
    cfg, trace_opts = load_config(args.config)
    cfg = _apply_overrides(cfg, args)
    trials = args.trials if args.trials is not None else trace_opts["trials"]
    point = cfg.sweep[0]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    for n_t in trace_opts["tx_antennas"]:
        rows.extend(_trace_one_side(cfg, point, trials, "tx", n_t))
    for n_r in trace_opts["rx_antennas"]:
        rows.extend(_trace_one_side(cfg, point, trials, "rx", n_r))

    path = out / "trace.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["side", "n_antennas", "iteration", "nmse_db", "primal_residual"])
        for side, n_ant, it, nmse_db, resid in rows:
            writer.writerow([side, n_ant, it, repr(float(nmse_db)), repr(float(resid))])
    for side, variants in (("tx", trace_opts["tx_antennas"]), ("rx", trace_opts["rx_antennas"])):
        for n_ant in variants:
            final = [r for r in rows if r[0] == side and r[1] == n_ant][-1]
            print(f"{side} n_antennas={n_ant}: final mean NMSE {final[3]:.2f} dB")
    print(f"wrote {path}")
    return 0


def cmd_bruteforce(args) -> int:
    cfg, _ = load_config(args.config)
    cfg = _apply_overrides(cfg, args)
    levels = cfg.bit_range.max_bits - cfg.bit_range.min_bits + 1
    worst = max(levels**cfg.l_tx, levels**cfg.l_rx)
    if worst > cfg.bf_max_combos:
        print(
            f"error: {worst} bit combinations per side exceed the budget of "
            f"{cfg.bf_max_combos}; reduce the chain count or the bit range",
            file=sys.stderr,
        )
        return 2

    cfg = replace(cfg, schemes=("proposed", "brute_force"))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = run_experiment(cfg, workers=args.threads)
    write_records_csv(records, out / "records.csv")

    path = out / "bf_compare.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([
            "snr_db", "gamma_tx", "gamma_rx", "n",
            "ee_admm_mean", "ee_bf_mean", "gap_mean", "gap_stderr",
        ])
        for point in cfg.sweep:
            of_point = [
                r for r in records
                if (r.snr_db, r.gamma_tx, r.gamma_rx)
                == (point.snr_db, point.gamma_tx, point.gamma_rx) and r.status == "ok"
            ]
            admm = {r.trial: r.ee for r in of_point if r.scheme == "proposed"}
            bf = {r.trial: r.ee for r in of_point if r.scheme == "brute_force"}
            common = sorted(set(admm) & set(bf))
            if not common:
                continue
            gaps = np.array([bf[t] - admm[t] for t in common])
            stderr = float(np.std(gaps, ddof=1) / np.sqrt(gaps.size)) if gaps.size > 1 else 0.0
            writer.writerow([
                repr(point.snr_db), repr(point.gamma_tx), repr(point.gamma_rx), len(common),
                repr(float(np.mean([admm[t] for t in common]))),
                repr(float(np.mean([bf[t] for t in common]))),
                repr(float(np.mean(gaps))), repr(stderr),
            ])
            print(
                f"snr={point.snr_db:g}: EE admm={np.mean([admm[t] for t in common]):.4f} "
                f"bf={np.mean([bf[t] for t in common]):.4f} gap={np.mean(gaps):+.4f}"
            )
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridbeam",
        description="Joint converter-resolution and hybrid beamforming experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, doc in (
        ("run", cmd_run, "run a sweep and write records.csv / summary.csv"),
        ("trace", cmd_trace, "emit per-iteration factorization NMSE traces"),
        ("bruteforce", cmd_bruteforce, "compare the optimizer against exhaustive bit search"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--out", default="out", help="output directory (default: ./out)")
        p.add_argument("--seed", type=int, default=None, help="override the base seed")
        p.add_argument("--trials", type=int, default=None, help="override the trial count")
        p.add_argument("--threads", type=int, default=1, help="worker processes for trials")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("HYBRIDBEAM_LOG", "WARNING").upper())
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
