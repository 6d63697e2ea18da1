"""Command-line entry point: ``meurkit evaluate|sweep|fuzz|repro-paper``.

Exit codes: 0 success, 1 input error, 2 an inequality was violated (or a
reference number was not reproduced).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import replace

from .bounds import BoundReport
from .errors import UncertaintyError
from .fuzz import DEFAULT_LAMBDAS, FUZZ_BOUNDS, run_fuzz
from .meps import sample_meps
from .optimize import FAMILIES, SELECTOR_KINDS, Selector, SweepSpec, evaluate_selector, parse_selector, run_sweep
from .repro import repro_rows
from .scenarios import resolve_scenario

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2

#: selectors whose first parameter is a weight that ``--lambda`` may supply
_WEIGHTED = {"meur", "l1", "l2", "multi_meur", "tropical"}
_PI_RE = re.compile(r"^\s*(-?[0-9.]*)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?\s*$")


class InputError(Exception):
    """Bad command-line input; reported on stderr with exit code 1."""


def parse_angle(text: str) -> float:
    """Parse a real number, optionally written as a multiple of ``pi`` (``pi/2``, ``2pi``)."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_RE.match(text)
    if not m:
        raise InputError(f"cannot parse number {text!r}")
    num = m.group(1)
    factor = -1.0 if num == "-" else float(num) if num else 1.0
    den = float(m.group(2)) if m.group(2) else 1.0
    return factor * math.pi / den


def parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"range must be lo:hi:steps, got {text!r}")
    try:
        steps = int(parts[2])
    except ValueError:
        raise InputError(f"steps must be an integer, got {parts[2]!r}") from None
    return parse_angle(parts[0]), parse_angle(parts[1]), steps


def parse_pair(text: str) -> tuple[int, int]:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"pair must be i,j, got {text!r}") from None
    return i, j


def parse_lambda(text: str | None):
    """``None``, ``"opt"`` or a tuple of positive weights."""
    if text is None or text == "opt":
        return text
    try:
        lams = tuple(float(x) for x in re.split(r"[,/]", text))
    except ValueError:
        raise InputError(f"--lambda takes a real, a comma list or 'opt', got {text!r}") from None
    if not all(lam > 0 for lam in lams):
        raise InputError("weights must be positive")
    return lams


def parse_sign(text: str):
    table = {"auto": "auto", "+": 1, "+1": 1, "-": -1, "-1": -1}
    if text not in table:
        raise InputError(f"--sign takes auto, + or -, got {text!r}")
    return table[text]


def parse_dims(text: str) -> tuple[int, ...]:
    try:
        if "-" in text:
            lo, hi = (int(x) for x in text.split("-"))
            dims = tuple(range(lo, hi + 1))
        else:
            dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"--dims takes a comma list or lo-hi, got {text!r}") from None
    if not dims or min(dims) < 2:
        raise InputError("dimensions must be at least 2")
    return dims


def _split_bounds(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def expand_selectors(names: list[str], lam) -> list[Selector]:
    """Apply ``--lambda`` to bound selectors that did not fix their own weight.

    Duplicates after expansion are dropped, keeping the first occurrence.
    """
    out = []
    for name in names:
        sel = parse_selector(name)
        explicit = ":" in name
        if lam is None or explicit or sel.kind not in _WEIGHTED:
            out.append(sel)
        elif lam == "opt":
            out.append(Selector("maxlambda", (), sel.squared) if sel.kind in ("meur", "tropical") else sel)
        elif sel.kind == "tropical":
            out.append(replace(sel, params=lam))
        else:
            out.extend(replace(sel, params=(x,)) for x in lam)
    return list(dict.fromkeys(out))


def _meps_choices(text: str, sc, seed: int):
    """List of ``(label, meps)`` from ``--meps``."""
    if text is None:
        return [("", None)]
    if text.startswith("random:"):
        try:
            n = int(text.split(":", 1)[1])
        except ValueError:
            raise InputError(f"--meps random:N needs an integer, got {text!r}") from None
        if n < 1:
            raise InputError("random:N needs N >= 1")
        return [(f"random#{k}", m) for k, m in enumerate(sample_meps(sc.psi, seed, n))]
    return [("" if text == "optimal" else text, text)]


# ------------------------------------------------------------------ output


def _fmt(x) -> str:
    return "" if x is None else f"{x:.10g}"


def print_reports(rows: list[tuple[str, BoundReport]], fmt: str, out) -> None:
    if fmt == "records":
        for label, rep in rows:
            rec = rep.as_record()
            if label:
                rec["meps"] = label
            out.write(json.dumps(rec) + "\n")
        return
    header = ("bound", "meps", "value", "target", "gap", "satisfied")
    table = [header] + [
        (rep.name, label, _fmt(rep.value), _fmt(rep.target), _fmt(rep.gap), "yes" if rep.satisfied else "NO")
        for label, rep in rows
    ]
    widths = [max(len(r[k]) for r in table) for k in range(len(header))]
    for r in table:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


# ---------------------------------------------------------------- commands


def cmd_evaluate(args, out) -> int:
    sc = resolve_scenario(args.scenario)
    pair = parse_pair(args.pair)
    n = len(sc.observables)
    if not all(0 <= k < n for k in pair) or pair[0] == pair[1]:
        raise InputError(f"pair {pair} invalid for a scenario with {n} observables")
    sels = expand_selectors(_split_bounds(args.bounds), parse_lambda(args.lam))
    if not sels:
        raise InputError("no bounds selected")
    sign = parse_sign(args.sign)
    rows = []
    for label, m in _meps_choices(args.meps, sc, args.seed):
        for sel in sels:
            try:
                rep = evaluate_selector(sel, sc, pair, m, sign)
            except UncertaintyError as exc:
                raise InputError(f"{sel.text}: {type(exc).__name__}: {exc}") from None
            rows.append((label, rep))
    print_reports(rows, args.format, out)
    return EXIT_OK if all(rep.satisfied for _, rep in rows) else EXIT_VIOLATION


def cmd_sweep(args, out) -> int:
    raw = args.scenario
    family = raw[len("builtin:"):] if raw.startswith("builtin:") else raw
    if family not in FAMILIES:
        raise InputError(f"unknown sweep family {family!r}; valid: {', '.join('builtin:' + f for f in FAMILIES)}")
    lo, hi, steps = parse_range(args.theta_range)
    names = [sel.text for sel in expand_selectors(_split_bounds(args.bounds), parse_lambda(args.lam))]
    meps = None if args.meps is None else args.meps
    if meps is not None and meps.startswith("random:"):
        raise InputError("sweeps take a named MEPS or 'optimal'")
    sweep = SweepSpec("theta", lo, hi, steps, tuple(names), parse_pair(args.pair), meps)
    text = run_sweep(family, sweep).to_csv()
    if args.out in (None, "-"):
        out.write(text)
    else:
        try:
            with open(args.out, "w", newline="", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc.strerror or exc}") from None
    return EXIT_OK


def cmd_fuzz(args, out) -> int:
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    bounds = tuple(_split_bounds(args.bounds)) if args.bounds else FUZZ_BOUNDS
    unknown = sorted(set(bounds) - set(FUZZ_BOUNDS))
    if unknown:
        raise InputError(f"unknown fuzz bounds {unknown}; valid: {', '.join(FUZZ_BOUNDS)}")
    lam = parse_lambda(args.lam)
    if lam == "opt":
        raise InputError("fuzz takes explicit weights")
    summary = run_fuzz(parse_dims(args.dims), args.trials, args.seed, bounds, lam or DEFAULT_LAMBDAS)
    doc = summary.as_dict()
    if args.format == "records":
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        out.write(f"seed {doc['seed']}, {doc['trials']} trials, dims {doc['dims']}\n")
        out.write(f"violations: {doc['violations']}  max relative excess: {doc['max_excess']:.3e}\n")
        w = max(len(k) for k in doc["bounds"])
        for name, b in doc["bounds"].items():
            errs = ",".join(f"{k}={v}" for k, v in b["errors"].items())
            out.write(
                f"  {name.ljust(w)}  n={b['evaluations']:<7d} viol={b['violations']:<3d} "
                f"max_excess={_fmt(b['max_excess'])}  mean_gap={_fmt(b['mean_rel_gap'])}  "
                f"min_gap={_fmt(b['min_rel_gap'])}" + (f"  errors: {errs}" if errs else "") + "\n"
            )
        for k, v in doc["tropical_win_rate"].items():
            out.write(f"  tropical winner {k}: {v:.3f}\n")
    return EXIT_VIOLATION if summary.violations else EXIT_OK


def cmd_repro(args, out) -> int:
    rows = repro_rows()
    if args.format == "records":
        for r in rows:
            out.write(json.dumps(r.as_record()) + "\n")
    else:
        w = max(len(r.name) for r in rows)
        for r in rows:
            op = ">=" if r.mode == "ge" else "~"
            out.write(
                f"{'PASS' if r.passed else 'FAIL'}  {r.name.ljust(w)}  computed={r.computed:.12g}  "
                f"{op} expected={r.expected:.12g}  tol={r.tol:g}\n"
            )
    return EXIT_OK if all(r.passed for r in rows) else EXIT_VIOLATION


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="meurkit", description="Evaluate and stress-test variance uncertainty bounds.")
    sub = p.add_subparsers(dest="command", required=True)
    kinds = ", ".join(SELECTOR_KINDS)

    def common(sp, bounds_default, evaluate=False):
        sp.add_argument("--scenario", default="builtin:paper4dim", help="scenario JSON path or builtin:NAME[:THETA]")
        sp.add_argument("--pair", default="0,1", help="observable indices i,j")
        sp.add_argument("--bounds", default=bounds_default, help=f"comma list of KIND[:P1/P2][^2]; kinds: {kinds}")
        sp.add_argument("--lambda", dest="lam", default=None, help="weight: a real, a comma list, or 'opt'")
        sp.add_argument("--meps", default=None, help="named MEPS, 'optimal', or random:N")
        if evaluate:
            sp.add_argument("--sign", default="auto", help="auto, + or -")
            sp.add_argument("--seed", type=int, default=0, help="seed for --meps random:N")
            sp.add_argument("--format", choices=("table", "records"), default="table")

    ev = sub.add_parser("evaluate", help="evaluate bounds on one scenario")
    common(ev, "robertson,schroedinger", evaluate=True)
    ev.set_defaults(func=cmd_evaluate)

    sw = sub.add_parser("sweep", help="theta sweep of a built-in family to CSV")
    common(sw, "product,robertson,schroedinger")
    sw.set_defaults(scenario="builtin:spin1")
    sw.add_argument("--theta-range", default="0:pi:181", help="lo:hi:steps")
    sw.add_argument("--out", default=None, help="CSV path (default stdout)")
    sw.set_defaults(func=cmd_sweep)

    fz = sub.add_parser("fuzz", help="random falsification of every bound")
    fz.add_argument("--dims", default="2-6")
    fz.add_argument("--trials", type=int, default=1000)
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--bounds", default=None, help=f"comma list from: {', '.join(FUZZ_BOUNDS)}")
    fz.add_argument("--lambda", dest="lam", default=None, help="comma list of weights")
    fz.add_argument("--format", choices=("table", "records"), default="table")
    fz.set_defaults(func=cmd_fuzz)

    rp = sub.add_parser("repro-paper", help="recompute the published reference numbers")
    rp.add_argument("--format", choices=("table", "records"), default="table")
    rp.set_defaults(func=cmd_repro)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except InputError as exc:
        err.write(f"error: {exc}\n")
    except UncertaintyError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
    except OSError as exc:
        err.write(f"error: {exc}\n")
    return EXIT_INPUT


def main_exit() -> None:
    """Console-script wrapper."""
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
