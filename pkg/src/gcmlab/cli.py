"""Command-line driver: instance files in, replayable reports out.

Instance files are JSON objects with the keys ``characteristic``,
``variables``, ``ambient_quotient``, ``sequence`` and ``label``.  Exit codes:
0 when every check passes, 1 when a check fails (the failing trial or the
violated instance invariant is embedded in the report), 2 for usage, parse
or infrastructure errors.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__
from .kernel import PolyParseError, RingSpec, is_prime
from .lab import (GenerationError, Instance, LabConfig, NotGCMError, TrialReport, compute_bounds,
                  generate_instance, search_min_n, validate_instance, verify_hf, verify_lc,
                  verify_sop, verify_structures)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FIELDS = ("characteristic", "variables", "ambient_quotient", "sequence", "label")
CSV_COLUMNS = ("trial", "n", "len_I", "len_IN", "equal")


class InstanceFileError(ValueError):
    """Malformed instance file; the message carries the location."""


# ------------------------------------------------------------------ parsing

def _poly_field(R: RingSpec, key: str, items, source: str):
    if not isinstance(items, list) or not all(isinstance(s, str) for s in items):
        raise InstanceFileError(f"{source}: {key!r} must be a list of polynomial strings")
    out = []
    for idx, text in enumerate(items):
        try:
            out.append(R.parse(text))
        except PolyParseError as exc:
            raise InstanceFileError(f"{source}: {key}[{idx}]: {exc}") from None
    return tuple(out)


def parse_instance_text(text: str, source: str = "<string>") -> Instance:
    """Parse the JSON schema into an Instance (no algebraic validation)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFileError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InstanceFileError(f"{source}: top level must be an object")
    unknown = set(data) - set(FIELDS)
    if unknown:
        raise InstanceFileError(f"{source}: unknown keys {sorted(unknown)}")
    for key in ("characteristic", "variables", "sequence"):
        if key not in data:
            raise InstanceFileError(f"{source}: missing key {key!r}")
    p = data["characteristic"]
    if not isinstance(p, int) or isinstance(p, bool):
        raise InstanceFileError(f"{source}: characteristic must be an integer")
    if not is_prime(p):
        raise InstanceFileError(f"{source}: characteristic {p} is not prime")
    names = data["variables"]
    if (not isinstance(names, list) or not names
            or not all(isinstance(v, str) and v.isidentifier() for v in names)):
        raise InstanceFileError(f"{source}: variables must be a nonempty list of names")
    if len(set(names)) != len(names):
        raise InstanceFileError(f"{source}: variables are not distinct")
    R = RingSpec.make(names, (), p)
    quotient = _poly_field(R, "ambient_quotient", data.get("ambient_quotient", []), source)
    seq = _poly_field(R, "sequence", data["sequence"], source)
    label = data.get("label", "")
    if not isinstance(label, str):
        raise InstanceFileError(f"{source}: label must be a string")
    return Instance(RingSpec(R.ambient, quotient), seq, label)


def parse_instance(path: str) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceFileError(f"{path}: {exc.strerror}") from None
    return parse_instance_text(text, path)


def instance_to_json(inst: Instance) -> str:
    data = {
        "characteristic": inst.S.p,
        "variables": list(inst.S.variables),
        "ambient_quotient": [str(g) for g in inst.ring.quotient_generators],
        "sequence": [str(f) for f in inst.sequence],
        "label": inst.label,
    }
    return json.dumps(data, indent=2) + "\n"


def content_hash(inst: Instance) -> str:
    """Hash of the canonical serialisation, so formatting changes do not matter."""
    return hashlib.sha256(instance_to_json(inst).encode()).hexdigest()


# ------------------------------------------------------------------ reports

@dataclass
class RunReport:
    command: str
    label: str
    sha256: str
    master_seed: Optional[int] = None
    N: Optional[int] = None
    validation: List[str] = field(default_factory=list)
    invariants: Dict[str, dict] = field(default_factory=dict)
    bounds: Optional[dict] = None
    trials: List[TrialReport] = field(default_factory=list)
    extra: Dict[str, object] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (not self.validation and all(t.verdict for t in self.trials)
                and self.extra.get("consistent", True))

    def to_dict(self) -> dict:
        return {
            "tool_version": __version__, "command": self.command,
            "instance": {"label": self.label, "sha256": self.sha256},
            "master_seed": self.master_seed, "N": self.N, "validation": list(self.validation),
            "invariants": self.invariants, "bounds": self.bounds,
            "trials": [t.to_dict() for t in self.trials], "passed": self.passed,
            **self.extra, "timings": self.timings,
        }


def emit(report: RunReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for t in report.trials:
            # lc rows use the cohomological index i in the n column
            for n, a, b in list(t.hf_table) + list(t.lc_table):
                w.writerow([t.index, n, a, b, "true" if a == b else "false"])
        return buf.getvalue()
    if fmt == "text":
        return _text(report)
    raise ValueError(f"unknown format {fmt!r}")


def _text(report: RunReport) -> str:
    lines = [f"{report.command}: {report.label or '(unlabelled)'}  sha256 {report.sha256[:12]}"]
    for failure in report.validation:
        lines.append(f"  INVALID  {failure}")
    for name, inv in report.invariants.items():
        lines.append(f"  {name}: d={inv['d']} depth={inv['depth']} lc={inv['lc_lengths']} "
                     f"e={inv['e']} I={inv['buchsbaum_I']} hdeg={inv['hdeg']}")
    if report.bounds:
        shown = ", ".join(f"{k}={v}" for k, v in report.bounds.items() if v is not None)
        lines.append(f"  bounds: {shown}")
    for key, val in report.extra.items():
        lines.append(f"  {key}: {val}")
    for t in report.trials:
        bad = [c for c in t.checks if not c.passed]
        status = "skip" if t.skipped else ("pass" if t.verdict else "FAIL")
        lines.append(f"  trial {t.index:3d} ({t.kind}, N={t.N}): {status}")
        for c in bad:
            lines.append(f"      {c.name}: {c.details}")
    if report.trials or report.validation:
        lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ commands

def _base_report(args, inst: Instance) -> RunReport:
    return RunReport(args.command if args.command != "verify" else f"verify {args.kind}",
                     inst.label, content_hash(inst))


def _invariant_block(inst: Instance) -> Dict[str, dict]:
    return {"R": inst.report().to_dict(), "R/I": inst.cut_report().to_dict()}


def _resolve_N(spec: str, kind: str, bounds, mode: str) -> int:
    if spec == "auto":
        if kind == "hf":
            return bounds.N_hf
        if kind == "lc":
            return bounds.N_r1_lc if mode == "prop31" else bounds.N_lc
        if kind == "sop":
            return bounds.N_sop
        return bounds.N_hf
    if spec == "improved":
        alt = bounds.N_hf_improved if bounds.N_hf_improved is not None else bounds.N_hf_cm
        if alt is None:
            raise ValueError("no improved bound for this instance")
        return alt
    try:
        N = int(spec)
    except ValueError:
        raise ValueError(f"--N expects auto, improved or an integer, got {spec!r}") from None
    if N < 1:
        raise ValueError("--N must be >= 1")
    return N


def _validate(report: RunReport, inst: Instance, timings: Dict[str, float]) -> bool:
    t = time.perf_counter()
    report.validation = validate_instance(inst)
    timings["validate"] = time.perf_counter() - t
    return not report.validation


def run_command(args) -> RunReport:
    inst = parse_instance(args.file)
    report = _base_report(args, inst)
    timings = report.timings
    if not _validate(report, inst, timings):
        return report
    t = time.perf_counter()
    report.invariants = _invariant_block(inst)
    bounds = compute_bounds(inst)
    report.bounds = bounds.to_dict()
    timings["invariants"] = time.perf_counter() - t
    if args.command in ("invariants", "bounds"):
        return report
    config = LabConfig(trials=args.trials, seed=args.seed, workers=args.threads)
    report.master_seed = args.seed
    t = time.perf_counter()
    if args.command == "search-min-n":
        res = search_min_n(inst, args.trials, None, config)
        report.N = res.bound
        report.extra["N_emp"] = res.N_emp
        report.extra["consistent"] = res.N_emp <= res.bound
        report.extra["levels"] = [list(x) for x in res.levels]
        report.extra["certificate"] = res.certificate.to_dict() if res.certificate else None
        timings["search"] = time.perf_counter() - t
        return report
    N = _resolve_N(args.N, args.kind, bounds, args.mode)
    report.N = N
    if args.kind == "hf":
        report.trials = verify_hf(inst, N, config)
    elif args.kind == "lc":
        report.trials = verify_lc(inst, N, config, args.mode)
    elif args.kind == "sop":
        report.trials = verify_sop(inst, N, config)
    else:
        report.trials = [verify_structures(inst, N, config)]
    timings["trials"] = time.perf_counter() - t
    return report


def gen_command(args) -> int:
    try:
        inst = generate_instance(args.family, args.params, seed=args.seed, p=args.characteristic,
                                 r=args.r, label=args.label or "")
    except GenerationError as exc:
        print(f"gen: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = instance_to_json(inst)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gcmlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trials_default=20):
        p.add_argument("file")
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--out", default="-")
        p.add_argument("--trials", type=int, default=trials_default)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)

    common(sub.add_parser("invariants", help="local invariants of R and R/I"))
    common(sub.add_parser("bounds", help="explicit perturbation bounds"))
    v = sub.add_parser("verify", help="randomized verification at a level N")
    v.add_argument("kind", choices=("hf", "lc", "sop", "structures"))
    common(v)
    v.add_argument("--N", default="auto", help="auto, improved or an integer")
    v.add_argument("--mode", choices=("theorem", "prop31"), default="theorem",
                   help="lc only: prop31 is the r = 1 level max(I(R), 1) with sop filtering")
    common(sub.add_parser("search-min-n", help="empirical least N for the hf property"),
           trials_default=12)
    g = sub.add_parser("gen", help="write an instance file for a named family")
    g.add_argument("family", choices=("two_planes", "complete_intersection", "monomial_curve"))
    g.add_argument("params", nargs="*", type=int)
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--r", type=int, default=1)
    g.add_argument("--characteristic", type=int, default=32003)
    g.add_argument("--label")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "gen":
        return gen_command(args)
    if getattr(args, "command", None) == "search-min-n" and args.trials < 11:
        print("search-min-n: --trials must be at least 11", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = run_command(args)
    except InstanceFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, NotGCMError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = emit(report, args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
