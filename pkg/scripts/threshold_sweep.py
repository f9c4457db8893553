"""Pass rate of the lc and sop checks for every N from 1 up to its bound.

Shows how far below the proven thresholds the preserved properties survive.

    python3 scripts/threshold_sweep.py [--trials 10] [--seed 0]
"""
import argparse
from dataclasses import dataclass

from _common import corpus, load
from gcmlab.lab import LabConfig, compute_bounds, verify_lc, verify_sop


@dataclass
class Config:
    trials: int = 10
    seed: int = 0


def rate(reports):
    live = [r for r in reports if not r.skipped]
    return f"{sum(r.verdict for r in live)}/{len(live)}"


def main(cfg: Config):
    lab = LabConfig(trials=cfg.trials, seed=cfg.seed)
    for path in corpus():
        inst = load(path)
        b = compute_bounds(inst)
        print(f"{inst.label}  (N_lc={b.N_lc}, N_sop={b.N_sop})")
        for N in range(1, max(b.N_lc, b.N_sop) + 1):
            print(f"  N={N:2d}  lc {rate(verify_lc(inst, N, lab)):>6s}"
                  f"  sop {rate(verify_sop(inst, N, lab)):>6s}", flush=True)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    main(Config(**vars(ap.parse_args())))
