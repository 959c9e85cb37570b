"""Command-line front end: ``equikh compute | verify | selftest``.

Exit codes: 0 success, 1 a verification failed, 2 bad input or configuration.
Output is deterministic unless ``--timing`` is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, fields
from dataclasses import field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .algebra import Field
from .checks import Check, algebra_checks, diagram_checks
from .complex import DEFAULT_CUBE_CAP, ComplexError
from .corpus import BY_NAME, CORPUS
from .diagram import DiagramError, LinkDiagram, load_diagram, unknot
from .invariant import (DEFAULT_CAP, PLProfile, complex_for, parse_t, point_value,
                        rasmussen_s_crosscheck, sweep)
from .lee import localized_rank

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
CSV_COLUMNS = ("t", "s_t", "s_tilde_t", "stable")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    field: str = "f2"
    mode: str = "scan"
    sweep: int | None = None
    t: list[str] = dc_field(default_factory=list)
    reduced: bool = False
    basepoint: int | None = None
    cap: int = DEFAULT_CAP
    max_crossings: int = DEFAULT_CUBE_CAP
    max_denominator: int = 64
    output: str = "json"
    verify: bool = False
    timing: bool = False

    def validate(self) -> None:
        try:
            Field.parse(self.field)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        if self.mode not in ("scan", "cube"):
            raise InputError(f"unknown mode {self.mode!r}")
        if self.output not in ("json", "csv"):
            raise InputError(f"unknown output format {self.output!r}")
        if self.sweep is not None and self.sweep < 1:
            raise InputError("--sweep needs a positive denominator")
        if self.cap < 0 or self.max_crossings < 0 or self.max_denominator < 1:
            raise InputError("caps must be nonnegative")

    def t_values(self) -> list[Fraction]:
        try:
            ts = {parse_t(x, self.max_denominator) for x in self.t}
        except ValueError as exc:
            raise InputError(str(exc)) from None
        if self.sweep is not None or not ts:
            q = self.sweep or 8
            if q > self.max_denominator:
                raise InputError(f"grid denominator {q} is above {self.max_denominator}")
            ts |= {Fraction(k, q) for k in range(2 * q + 1)}
        return sorted(ts)


def _frac(x: Fraction | None) -> str | None:
    return None if x is None else str(x)


@dataclass
class ResultRecord:
    input: dict
    config: dict
    values: list[dict]
    s_F: int | None
    localized_ranks: dict[str, int]
    flags: dict
    verification: list[dict] | None = None
    timing: dict | None = None

    def to_json(self) -> str:
        d = {k: v for k, v in asdict(self).items() if v is not None}
        return json.dumps(d, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ResultRecord":
        d = json.loads(text)
        names = {f.name for f in fields(cls)}
        extra = set(d) - names
        if extra:
            raise ValueError(f"unexpected keys {sorted(extra)}")
        rec = cls(**{k: d.get(k) for k in names})
        for row in rec.values:
            if set(row) != set(CSV_COLUMNS):
                raise ValueError(f"bad value row {row}")
        return rec

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self.values:
            w.writerow(["" if row[c] is None else str(row[c]).lower() if isinstance(row[c], bool)
                        else row[c] for c in CSV_COLUMNS])
        return buf.getvalue()


# ---------------------------------------------------------------------------

def _load_input(args) -> LinkDiagram:
    try:
        if args.unknot:
            D = unknot()
        elif args.corpus:
            if args.corpus not in BY_NAME:
                raise InputError(f"unknown corpus entry {args.corpus!r}; choose from {sorted(BY_NAME)}")
            D = BY_NAME[args.corpus].diagram()
        elif args.pd is not None:
            D = load_diagram(args.pd)
        elif args.file is not None:
            try:
                D = load_diagram(Path(args.file).read_text())
            except OSError as exc:
                raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
        else:
            raise InputError("no input: give --pd, --file, --corpus or --unknot")
    except DiagramError as exc:
        raise InputError(f"parse error: {exc}") from None
    return D


def _config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"bad config file {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise InputError("config file must hold a JSON object")
        names = {f.name for f in fields(RunConfig)}
        for k, v in data.items():
            k = k.replace("-", "_")
            if k not in names:
                raise InputError(f"unknown config key {k!r}")
            setattr(cfg, k, v)
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None and v is not False and v != []:
            setattr(cfg, f.name, v)
    if isinstance(cfg.t, (str, int)):
        cfg.t = [str(cfg.t)]
    cfg.t = [str(x) for x in cfg.t]
    cfg.validate()
    return cfg


def cmd_compute(cfg: RunConfig, D: LinkDiagram) -> ResultRecord:
    F = Field.parse(cfg.field)
    ts = cfg.t_values()
    clock: dict[str, float] = {}
    start = time.perf_counter()
    if cfg.basepoint is not None:
        try:
            D = D.with_basepoint(cfg.basepoint)
        except DiagramError as exc:
            raise InputError(str(exc)) from None
    try:
        C = complex_for(D, F, cfg.mode, max_crossings=cfg.max_crossings)
    except ComplexError as exc:
        raise InputError(str(exc)) from None
    clock["complex"] = time.perf_counter() - start

    def evaluate(reduced: bool, Cx) -> PLProfile:
        vals, stable = {}, {}
        for t in ts:
            p = sweep_point(D, t, cfg, Cx, reduced)
            vals[t], st = p
            if st is not None:
                stable[t] = st
        return PLProfile(max(t.denominator for t in ts), vals, reduced, stable)

    t0 = time.perf_counter()
    prof = evaluate(False, C)
    clock["profile"] = time.perf_counter() - t0
    red = None
    if cfg.reduced:
        p = D.basepoint if D.basepoint is not None else D.default_basepoint()
        t0 = time.perf_counter()
        Cr = complex_for(D, F, cfg.mode, basepoint=p, max_crossings=cfg.max_crossings)
        red = evaluate(True, Cr)
        clock["reduced_profile"] = time.perf_counter() - t0
    sF = rasmussen_s_crosscheck(D, F, C=C) if D.num_components == 1 else None
    ranks = localized_rank(C)

    rows = []
    for t in ts:
        rows.append({
            "t": str(t),
            "s_t": str(prof.values[t]),
            "s_tilde_t": _frac(red.values[t]) if red else None,
            "stable": prof.stable.get(t) if t in (0, 2) else None,
        })
    pairs = [t for t in ts if 2 - t in prof.values]
    flags = {
        "symmetric": prof.symmetric if pairs else None,
        "rational": all(v.denominator == 1 or (v * t.denominator).denominator == 1
                        for t, v in prof.values.items()),
        "stable": all(prof.stable.values()) and (not red or all(red.stable.values())),
        "endpoint_lower_bound": not all(prof.stable.values()),
    }
    if red:
        flags["reduced_symmetric"] = red.symmetric
        flags["reduced_bound"] = all(red.values[t] <= prof.values[t] + 2 for t in ts)
    if sF is not None and 0 in prof.values:
        flags["endpoint_below_s_F"] = prof.values[Fraction(0)] <= sF
    rec = ResultRecord(
        input={"pd": D.to_pd(), "crossings": D.n, "components": D.num_components,
               "writhe": D.writhe, "unknotted_circles": len(D.loops), "basepoint": D.basepoint},
        config={"field": F.name, "mode": cfg.mode, "cap": cfg.cap, "reduced": cfg.reduced},
        values=rows, s_F=sF,
        localized_ranks={str(h): r for h, r in sorted(ranks.items())},
        flags=flags,
    )
    if cfg.verify:
        checks = diagram_checks(D, F, q=4, cap=cfg.cap, max_crossings=cfg.max_crossings)
        rec.verification = [asdict(c) for c in checks]
    clock["total"] = time.perf_counter() - start
    if cfg.timing:
        rec.timing = {k: round(v, 4) for k, v in clock.items()}
    return rec


def sweep_point(D: LinkDiagram, t: Fraction, cfg: RunConfig, C, reduced: bool
                ) -> tuple[Fraction, bool | None]:
    p = None
    if reduced:
        p = D.basepoint if D.basepoint is not None else D.default_basepoint()
    v, st = point_value(D, t, C, p, cfg.cap)
    return (v if reduced else v - 1), (st if t in (0, 2) else None)


def cmd_verify(cfg: RunConfig, D: LinkDiagram) -> list[Check]:
    F = Field.parse(cfg.field)
    return algebra_checks((F,)) + diagram_checks(D, F, q=4, cap=cfg.cap,
                                                  max_crossings=cfg.max_crossings)


def cmd_selftest(q: int = 8) -> list[Check]:
    """Corpus regression: each entry's profile against its known constant value."""
    out = list(algebra_checks())
    for e in CORPUS:
        D = e.diagram()
        prof = sweep(D, q)
        vals = sorted(set(prof.values.values()))
        if e.expected is not None:
            ok = vals == [e.expected]
            out.append(Check(f"{e.name}: s_t = {e.expected} on the 1/{q} grid", ok,
                             f"values {', '.join(map(str, vals))}"))
        out.append(Check(f"{e.name}: symmetric profile", prof.symmetric))
    return out


# ---------------------------------------------------------------------------

def _add_input(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--pd", metavar="STR", help="PD code or diagram JSON")
    g.add_argument("--file", metavar="PATH", help="file holding a PD code or diagram JSON")
    g.add_argument("--unknot", action="store_true", help="the crossingless unknot")
    g.add_argument("--corpus", metavar="NAME", help=f"bundled diagram: {', '.join(BY_NAME)}")


def _add_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="JSON file with default options")
    p.add_argument("--field", help="f2 (default), q or fp:P")
    p.add_argument("--t", action="append", metavar="P/Q", help="evaluate at t (repeatable)")
    p.add_argument("--sweep", type=int, metavar="Q", help="evaluate at every k/Q in [0, 2]")
    p.add_argument("--reduced", action="store_true", help="also compute the reduced profile")
    p.add_argument("--basepoint", type=int, metavar="E", help="edge carrying the basepoint")
    p.add_argument("--mode", choices=("scan", "cube"))
    p.add_argument("--cap", type=int, metavar="N", help="exponent cap at t = 0 and t = 2")
    p.add_argument("--max-crossings", dest="max_crossings", type=int, metavar="N",
                   help="crossing limit for cube mode")
    p.add_argument("--max-denominator", dest="max_denominator", type=int, metavar="N")
    p.add_argument("--output", choices=("json", "csv"))
    p.add_argument("--timing", action="store_true", help="include wall-clock timings")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="equikh", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", help="s_t (and reduced s~_t) at chosen t values")
    _add_input(c)
    _add_options(c)
    c.add_argument("--verify", action="store_true", help="attach structural checks")
    v = sub.add_parser("verify", help="run structural checks on a diagram")
    _add_input(v)
    _add_options(v)
    s = sub.add_parser("selftest", help="run the bundled regression corpus")
    s.add_argument("--sweep", type=int, default=8, metavar="Q")
    return ap


def _report(checks: list[Check], out) -> int:
    for c in checks:
        print(c.line(), file=out)
    failed = sum(not c.ok for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed", file=out)
    return EXIT_FAIL if failed else EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    out = sys.stdout
    try:
        if args.command == "selftest":
            if args.sweep < 1:
                raise InputError("--sweep needs a positive denominator")
            return _report(cmd_selftest(args.sweep), out)
        cfg = _config(args)
        D = _load_input(args)
        if args.command == "verify":
            return _report(cmd_verify(cfg, D), out)
        rec = cmd_compute(cfg, D)
    except InputError as exc:
        print(f"equikh: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out.write(rec.to_csv() if cfg.output == "csv" else rec.to_json() + "\n")
    if rec.verification is not None:
        if cfg.output == "csv":
            _report([Check(**c) for c in rec.verification], sys.stderr)
        if not all(c["ok"] for c in rec.verification):
            return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
