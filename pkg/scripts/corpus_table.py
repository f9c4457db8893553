"""Invariants and perturbation bounds for every corpus instance.

    python3 scripts/corpus_table.py [--csv out.csv]
"""
import argparse
import csv
import sys
import time
from dataclasses import dataclass
from typing import Optional

from _common import corpus, load
from gcmlab.lab import compute_bounds

COLUMNS = ["label", "d", "r", "depth", "lc", "e", "I", "hdeg", "e_cut", "hdeg_cut",
           "N_hf", "N_hf_improved", "N_hf_cm", "N_lc", "N_sop", "k", "seconds"]


@dataclass
class Config:
    csv_path: Optional[str] = None


def row(path):
    start = time.perf_counter()
    inst = load(path)
    rep, cut = inst.report(), inst.cut_report()
    b = compute_bounds(inst)
    return {"label": inst.label, "d": rep.d, "r": inst.r, "depth": rep.depth,
            "lc": "/".join(map(str, rep.lc_lengths)), "e": rep.e, "I": rep.buchsbaum_I,
            "hdeg": rep.hdeg, "e_cut": cut.e, "hdeg_cut": cut.hdeg, "N_hf": b.N_hf,
            "N_hf_improved": b.N_hf_improved, "N_hf_cm": b.N_hf_cm, "N_lc": b.N_lc,
            "N_sop": b.N_sop, "k": b.k_reduction,
            "seconds": round(time.perf_counter() - start, 2)}


def main(cfg: Config):
    rows = [row(p) for p in corpus()]
    out = open(cfg.csv_path, "w", newline="") if cfg.csv_path else sys.stdout
    writer = csv.DictWriter(out, COLUMNS)
    writer.writeheader()
    writer.writerows(rows)
    if cfg.csv_path:
        out.close()


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--csv", dest="csv_path")
    main(Config(**vars(ap.parse_args())))
