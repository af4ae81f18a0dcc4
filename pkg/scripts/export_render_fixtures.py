"""Write small real sweeps as CSV + JSON fixtures for the plot component.

The plot package consumes only the harness output files, so its tests run
against genuine artifacts: a three-point SE sweep and a single-point run
(the degenerate case a renderer must still handle). Files land in --out,
default frontend/test/fixtures.
"""

import argparse
import shutil
import tempfile
from pathlib import Path

from aic import SweepConfig, run_sweep


def export(out_dir, trials, seed):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = (
        dict(label="sweep", snr_db=(0.0, 2.0, 4.0)),
        dict(label="point", snr_db=(2.0,)),
    )
    for job in jobs:
        with tempfile.TemporaryDirectory() as tmp:
            cfg = SweepConfig(modulation="qpsk", snr_db=job["snr_db"], R=2, H=8,
                              K=None, trials=trials, seed=seed, workers=1,
                              out_dir=tmp, label=job["label"])
            run_sweep(cfg)
            for path in (cfg.csv_path(), cfg.json_path()):
                shutil.copy(path, out_dir / path.name)
                print(f"wrote {out_dir / path.name}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="frontend/test/fixtures")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    export(args.out, args.trials, args.seed)


if __name__ == "__main__":
    main()
