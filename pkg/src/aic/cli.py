"""Command-line front end.

Subcommands: `thresholds` prints optimized quantizer thresholds over an SNR
grid, `dmc` emits one induced-channel model as JSON, `sweep` runs the full
Monte Carlo evaluation, and `cdf` re-aggregates the raw samples stored in a
sweep's JSON sidecar under a new block-error-rate target. A JSON config
file can be passed to `sweep`; its entries override command-line flags.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .analysis import EmpiricalCdf, dmax_for
from .harness import SweepConfig, noise_var_of, point_dmc, run_sweep
from .modem import make_scheme
from .qllr import optimize_thresholds


def _add_point_args(p):
    p.add_argument("--modulation", default="qpsk")
    p.add_argument("--snr", type=float, nargs="+", required=True, metavar="DB")
    p.add_argument("--R", type=int, default=2, help="quantizer classes per sign")
    p.add_argument("--samples", type=int, default=250_000,
                   help="symbols for sample-based threshold search")
    p.add_argument("--seed", type=int, default=0)


def _cmd_thresholds(args):
    scheme = make_scheme(args.modulation)
    print("snr_db " + " ".join(f"theta_{r}" for r in range(args.R)))
    for snr in args.snr:
        theta = optimize_thresholds(scheme, noise_var_of(snr), args.R,
                                    samples=args.samples, seed=args.seed)
        print(f"{snr:g} " + " ".join(f"{t:.4f}" for t in theta.values))
    return 0


def _cmd_dmc(args):
    scheme = make_scheme(args.modulation)
    for snr in args.snr:
        model = point_dmc(scheme, snr, args.R, cache_dir=args.cache_dir,
                          threshold_samples=args.samples,
                          dmc_samples=args.dmc_samples, seed=args.seed)
        text = model.dumps()
        if args.out:
            Path(args.out).write_text(text)
        else:
            print(text)
    return 0


def _cmd_sweep(args):
    overrides = {
        "modulation": args.modulation,
        "snr_db": tuple(args.snr) if args.snr else None,
        "channel": args.channel,
        "R": args.R,
        "H": args.H,
        "K": args.K if args.K is None or len(args.K) > 1 else args.K[0],
        "trials": args.trials,
        "d_max": args.d_max,
        "seed": args.seed,
        "workers": args.workers,
        "out_dir": args.out_dir,
        "label": args.label,
        "threshold_samples": args.samples,
        "dmc_samples": args.dmc_samples,
        "verbose": not args.quiet,
    }
    cfg_dict = {k: v for k, v in overrides.items() if v is not None}
    if args.config:
        with open(args.config) as f:
            cfg_dict.update(json.load(f))
    try:
        cfg = SweepConfig(**cfg_dict)
    except TypeError as exc:
        raise SystemExit(f"config error: {exc}")
    reports = run_sweep(cfg)
    if cfg.out_dir is not None:
        print(f"wrote {cfg.csv_path()} and {cfg.json_path()}")
    return 0 if reports else 1


def _cmd_cdf(args):
    with open(args.results) as f:
        doc = json.load(f)
    out_points = []
    print("snr_db trials mean_D D_MAX N_min N_max")
    for pt in doc["points"]:
        d = np.array(pt["d_samples"])
        n = np.array(pt["n_samples"])
        cdf_d = EmpiricalCdf.from_samples(d, n_trials=pt["trials"])
        cdf_n = EmpiricalCdf.from_samples(n)
        d_max = dmax_for(cdf_d, args.bler_t)
        print(f"{pt['snr_db']:g} {pt['trials']} {d.mean():.3f} {d_max} "
              f"{n.min()} {n.max()}")
        out_points.append({
            "snr_db": pt["snr_db"],
            "bler_t": args.bler_t,
            "d_max": d_max,
            "cdf_d": {"x": cdf_d.xs.tolist(), "p": cdf_d.ps.tolist()},
            "cdf_n": {"x": cdf_n.xs.tolist(), "p": cdf_n.ps.tolist()},
        })
    if args.out:
        with open(args.out, "w") as f:
            json.dump({"points": out_points}, f, indent=1)
            f.write("\n")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="aic",
                                description="iterative feedback coding toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("thresholds", help="optimized quantizer thresholds per SNR")
    _add_point_args(t)
    t.set_defaults(fn=_cmd_thresholds)

    d = sub.add_parser("dmc", help="emit induced-channel model JSON")
    _add_point_args(d)
    d.add_argument("--dmc-samples", type=int, default=1_000_000)
    d.add_argument("--cache-dir", default=None)
    d.add_argument("--out", default=None)
    d.set_defaults(fn=_cmd_dmc)

    s = sub.add_parser("sweep", help="run the Monte Carlo evaluation")
    s.add_argument("--config", default=None,
                   help="JSON file of SweepConfig fields; overrides flags")
    s.add_argument("--modulation", default=None)
    s.add_argument("--snr", type=float, nargs="+", default=None, metavar="DB")
    s.add_argument("--channel", default=None, choices=("awgn", "qsrf"))
    s.add_argument("--R", type=int, default=None)
    s.add_argument("--H", type=int, default=None)
    s.add_argument("--K", type=int, nargs="+", default=None,
                   help="message bits; one value, or one per SNR point")
    s.add_argument("--trials", type=int, default=None)
    s.add_argument("--d-max", dest="d_max", type=int, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--out-dir", default=None)
    s.add_argument("--label", default=None)
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--dmc-samples", type=int, default=None)
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(fn=_cmd_sweep)

    c = sub.add_parser("cdf", help="re-aggregate stored sweep samples")
    c.add_argument("--results", required=True, help="sweep JSON sidecar path")
    c.add_argument("--bler-t", dest="bler_t", type=float, default=1e-3)
    c.add_argument("--out", default=None)
    c.set_defaults(fn=_cmd_cdf)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, KeyError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
