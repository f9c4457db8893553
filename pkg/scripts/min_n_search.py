"""Empirical minimal N for Hilbert-function preservation, against the bounds.

For each gCM corpus instance, N is scanned downward from N_hf; at every level
``--trials`` perturbations are drawn (odd trials adversarial).  The first
failing trial is printed as a certificate.

    python3 scripts/min_n_search.py [--trials 12] [--seed 0] [--only quartic]
"""
import argparse
import json
import time
from dataclasses import dataclass
from typing import Optional

from _common import corpus, load
from gcmlab.lab import LabConfig, compute_bounds, search_min_n


@dataclass
class Config:
    trials: int = 12
    seed: int = 0
    only: Optional[str] = None
    json_path: Optional[str] = None


def main(cfg: Config):
    results = []
    for path in corpus():
        inst = load(path)
        if cfg.only and inst.label != cfg.only:
            continue
        start = time.perf_counter()
        b = compute_bounds(inst)
        res = search_min_n(inst, cfg.trials, config=LabConfig(seed=cfg.seed))
        secs = time.perf_counter() - start
        cert = res.certificate
        print(f"{inst.label:18s} N_hf={b.N_hf:3d} improved={str(b.N_hf_improved):>4s} "
              f"N_emp={res.N_emp:3d} ({secs:6.1f}s)", flush=True)
        if cert is not None:
            diff = [(n, a, c) for n, a, c in cert.hf_table if a != c][:3]
            print(f"    fails at N={cert.N} trial {cert.index} ({cert.kind}): {diff}")
        results.append({"label": inst.label, "N_hf": b.N_hf,
                        "N_hf_improved": b.N_hf_improved, **res.to_dict()})
    if cfg.json_path:
        with open(cfg.json_path, "w") as fh:
            json.dump(results, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--only")
    ap.add_argument("--json", dest="json_path")
    main(Config(**vars(ap.parse_args())))
