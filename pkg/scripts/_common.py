import glob
import os
from typing import List

from gcmlab.cli import parse_instance

CORPUS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "corpus")


def corpus(include_sabotage: bool = False) -> List[str]:
    paths = sorted(glob.glob(os.path.join(CORPUS, "*.inst")))
    if not include_sabotage:
        paths = [p for p in paths if not os.path.basename(p).startswith("sabotage_")]
    return paths


def load(path: str):
    return parse_instance(path)
