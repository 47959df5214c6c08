"""Command-line front end.

Subcommands:
  grover      success-probability curve for a marked search space, or the
              query-scaling sweep with --scaling
  ber         Monte-Carlo BER sweep driven by a flat key=value config file
  bsc         flip-channel demo: classical bits vs phase-basis qubits
  qmud-agree  quantum-assisted vs exhaustive detector agreement experiment

Every run is reproducible: seeds default to a fixed constant, --seed
overrides, and runs that write an output file also write a JSON manifest
(<out>.manifest.json) capturing the resolved configuration.  Exit codes:
0 success, 2 usage or configuration error, 1 internal failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, cdma, config, mud, qchannel, qsearch
from .errors import ConfigError


def _write_manifest(out_path: str, subcommand: str, resolved: dict) -> None:
    manifest = {
        "subcommand": subcommand,
        "config": resolved,
        "version": __version__,
        "out": str(out_path),
    }
    with open(str(out_path) + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _open_out(path):
    if path is None:
        return sys.stdout
    return open(path, "w", newline="")


def cmd_grover(args) -> int:
    if args.scaling:
        return _grover_scaling(args)
    n = args.n
    if n < 2 or n & (n - 1):
        raise ConfigError(f"--n must be a power of 2 >= 2, got {n}")
    if not 1 <= args.marked <= n:
        raise ConfigError(f"--marked must be in [1, {n}], got {args.marked}")
    n_qubits = n.bit_length() - 1
    rng = np.random.default_rng(args.seed)
    marked = set(range(args.marked))
    oracle = qsearch.MarkingOracle(n_qubits, lambda i: i in marked)
    k_max = args.k_max
    if k_max is None:
        k_max = qsearch.optimal_iterations(n, args.marked)
    rows = []
    for k in range(k_max + 1):
        predicted = qsearch.success_probability(n, args.marked, k)
        measured = qsearch.measured_success_rate(oracle, k, args.trials, rng)
        rows.append((k, predicted, measured))
    fh = _open_out(args.out)
    try:
        writer = csv.writer(fh)
        writer.writerow(["k", "predicted_success", "measured_success", "trials"])
        for k, predicted, measured in rows:
            writer.writerow([k, repr(predicted), repr(measured), args.trials])
    finally:
        if fh is not sys.stdout:
            fh.close()
    if args.out:
        _write_manifest(args.out, "grover", {
            "n": n, "marked": args.marked, "trials": args.trials,
            "k_max": k_max, "seed": args.seed})
    return 0


def _grover_scaling(args) -> int:
    rng = np.random.default_rng(args.seed)
    n_min = args.n if args.n else 64
    if n_min < 2 or n_min & (n_min - 1):
        raise ConfigError(f"--n must be a power of 2 >= 2, got {n_min}")
    exponents = range(n_min.bit_length() - 1,
                      max(n_min.bit_length() - 1, args.scaling_max_exp) + 1)
    fh = _open_out(args.out)
    try:
        writer = csv.writer(fh)
        writer.writerow(["n", "mean_grover_queries", "mean_verifications",
                         "exhaustive_evaluations", "trials"])
        for exp in exponents:
            n_states = 1 << exp
            mask = np.zeros(n_states, dtype=bool)
            mask[:args.marked] = True
            g_sum = v_sum = 0.0
            for _ in range(args.trials):
                oracle = qsearch.MarkingOracle.from_mask(mask)
                rep = qsearch.bbht_search(oracle, rng)
                g_sum += rep.grover_queries
                v_sum += rep.verification_queries
            writer.writerow([n_states, repr(g_sum / args.trials),
                             repr(v_sum / args.trials), n_states, args.trials])
    finally:
        if fh is not sys.stdout:
            fh.close()
    if args.out:
        _write_manifest(args.out, "grover-scaling", {
            "n_min": n_min, "max_exp": args.scaling_max_exp,
            "marked": args.marked, "trials": args.trials, "seed": args.seed})
    return 0


BER_KEYS = ("signature_kind", "k_users", "n_chips", "sync_mode", "gain_model",
            "seed", "detector", "ebn0_db_list", "trials")


def cmd_ber(args) -> int:
    with open(args.config) as fh:
        cfg = cdma.parse_kv_config(fh.read())
    unknown = set(cfg) - set(BER_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    missing = {"signature_kind", "k_users", "n_chips", "detector",
               "ebn0_db_list", "trials"} - set(cfg)
    if missing:
        raise ConfigError(f"missing config keys: {sorted(missing)}")
    detector = cfg["detector"]
    if detector not in mud.DETECTORS:
        raise ConfigError(f"detector must be one of {mud.DETECTORS}")
    seed = args.seed if args.seed_given else int(cfg.get("seed", config.DEFAULT_SEED))
    try:
        ebn0_list = [float(v) for v in cfg["ebn0_db_list"].split(",") if v.strip()]
        trials = int(cfg["trials"])
        scenario = cdma.make_scenario(
            signature_kind=cfg["signature_kind"],
            k_users=int(cfg["k_users"]),
            n_chips=int(cfg["n_chips"]),
            noise_variance=0.0,
            sync_mode=cfg.get("sync_mode", cdma.SYNCHRONOUS),
            gain_model=cfg.get("gain_model", cdma.GAIN_FIXED),
            seed=seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not ebn0_list:
        raise ConfigError("ebn0_db_list is empty")

    master = np.random.default_rng(seed)
    point_rngs = master.spawn(len(ebn0_list))

    def run_point(i):
        return mud.ber_sweep(scenario, detector, [ebn0_list[i]], trials,
                             point_rngs[i]).points[0]

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            points = list(pool.map(run_point, range(len(ebn0_list))))
    else:
        points = [run_point(i) for i in range(len(ebn0_list))]
    curve = mud.BerCurve(detector=detector, points=tuple(points))

    fh = _open_out(args.out)
    try:
        curve.write_csv(fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    if args.out:
        resolved = dict(cfg)
        resolved["seed"] = seed
        _write_manifest(args.out, "ber", resolved)
    return 0


def cmd_bsc(args) -> int:
    if not 0.0 <= args.p <= 1.0:
        raise ConfigError(f"--p must be in [0, 1], got {args.p}")
    if args.bits < 1:
        raise ConfigError("--bits must be >= 1")
    rng = np.random.default_rng(args.seed)
    report = qchannel.run_demo(args.bits, args.p, rng)
    print(report.format_table())
    print(report.to_json())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_json() + "\n")
        _write_manifest(args.out, "bsc", {
            "p": args.p, "bits": args.bits, "seed": args.seed})
    return 0


def cmd_qmud_agree(args) -> int:
    if args.k < 1 or args.k > mud.EXHAUSTIVE_K_LIMIT:
        raise ConfigError(f"--k must be in [1, {mud.EXHAUSTIVE_K_LIMIT}]")
    if args.trials < 1:
        raise ConfigError("--trials must be >= 1")
    rng = np.random.default_rng(args.seed)
    scenario = cdma.make_scenario(
        signature_kind="random_bipolar", k_users=args.k,
        n_chips=args.n_chips, noise_variance=0.0,
        sync_mode=cdma.CHIP_ASYNC, gain_model=cdma.GAIN_RAYLEIGH,
        seed=args.seed)
    result = mud.qmud_agreement(scenario, args.ebn0, args.trials, rng)
    print(f"agreement {result.agreement:.4f} over {result.trials} trials; "
          f"mean grover queries {result.mean_grover_queries:.1f} "
          f"vs {result.exhaustive_evaluations} exhaustive evaluations")
    fh = _open_out(args.out)
    try:
        writer = csv.writer(fh)
        writer.writerow(["k_users", "trials", "ebn0_db", "agreement",
                         "mean_grover_queries", "mean_verification_queries",
                         "mean_threshold_rounds", "exhaustive_evaluations"])
        writer.writerow([result.k_users, result.trials, repr(result.ebn0_db),
                         repr(result.agreement),
                         repr(result.mean_grover_queries),
                         repr(result.mean_verification_queries),
                         repr(result.mean_threshold_rounds),
                         result.exhaustive_evaluations])
    finally:
        if fh is not sys.stdout:
            fh.close()
    if args.out:
        _write_manifest(args.out, "qmud-agree", {
            "k": args.k, "n_chips": args.n_chips, "trials": args.trials,
            "ebn0": args.ebn0, "seed": args.seed})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmudsim",
        description="DS-CDMA quantum-assisted detection experiments")

    def add_common(sub):
        sub.add_argument("--seed", type=int, default=config.DEFAULT_SEED,
                         help=f"RNG seed (default {config.DEFAULT_SEED})")
        sub.add_argument("--out", default=None, help="output file path")
        sub.add_argument("--threads", type=int, default=1,
                         help="worker threads for independent sweep points")

    subs = parser.add_subparsers(dest="command", required=True)

    g = subs.add_parser("grover", help="success curve / query scaling")
    g.add_argument("--n", type=int, default=None,
                   help="search-space size (power of 2)")
    g.add_argument("--marked", type=int, default=1,
                   help="number of marked indices (default 1)")
    g.add_argument("--trials", type=int, default=10000)
    g.add_argument("--k-max", type=int, default=None,
                   help="top of the iteration sweep (default: optimal count)")
    g.add_argument("--scaling", action="store_true",
                   help="sweep mean queries against the search-space size")
    g.add_argument("--scaling-max-exp", type=int, default=14,
                   help="largest exponent for --scaling (default 14)")
    add_common(g)
    g.set_defaults(func=cmd_grover)

    b = subs.add_parser("ber", help="Monte-Carlo BER sweep from a config file")
    b.add_argument("--config", required=True, help="flat key=value config file")
    add_common(b)
    b.set_defaults(func=cmd_ber)

    c = subs.add_parser("bsc", help="zero-capacity flip-channel demo")
    c.add_argument("--p", type=float, required=True, help="flip probability")
    c.add_argument("--bits", type=int, default=100000)
    add_common(c)
    c.set_defaults(func=cmd_bsc)

    q = subs.add_parser("qmud-agree",
                        help="quantum-assisted vs exhaustive agreement")
    q.add_argument("--k", type=int, default=10, help="users (default 10)")
    q.add_argument("--n-chips", type=int, default=16)
    q.add_argument("--trials", type=int, default=200)
    q.add_argument("--ebn0", type=float, default=8.0)
    add_common(q)
    q.set_defaults(func=cmd_qmud_agree)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv_list = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        args = parser.parse_args(argv_list)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    args.seed_given = "--seed" in argv_list
    try:
        if args.command == "grover" and not args.scaling and args.n is None:
            parser.error("grover requires --n")
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    except (ConfigError, FileNotFoundError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal failure contract
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
