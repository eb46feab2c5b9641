"""Command-line front end.

    dpcbound bound  --config scenario.json
    dpcbound lemma  --config scenario.json --seed 7 --samples 200000
    dpcbound verify --config scenario.json
    dpcbound sweep  --config scenario.json --axis rho_zn --values 0,0.3,0.6
    dpcbound draw   --config scenario.json --samples 1000

Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

from . import __version__
from . import closed_form as cf
from .config import ConfigError, load_scenario
from .errors import DpcError, ValidationError
from .lemma_eval import SWEEP_AXES, LemmaConfig, lemma_bound, sweep
from .sampling import Seed, draw, write_batch_csv
from .scenario import moment_algebra, validate
from .verify import run_checks

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3

BOUND_COLUMNS = ["method", "eta", "p", "rate_bits", "total_bits"]
LEMMA_COLUMNS = ["eta", "p", "alpha", "beta", "entropy_nats", "stderr", "rate_bits", "total_bits",
                 "stderr_bits", "theorem_bits"]
SWEEP_COLUMNS = ["axis", "value", "method", "total_bits", "stderr_bits"]


class InputError(Exception):
    pass


def fmt(v) -> str:
    """Locale-independent shortest round-trip formatting."""
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return fmt(v)
    return v


def render(columns, rows, fmt_name: str, meta: dict) -> str:
    if fmt_name == "json":
        doc = dict(meta)
        doc["columns"] = columns
        doc["rows"] = [{c: _json_value(r[i]) for i, c in enumerate(columns)} for r in rows]
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def bound_rows(scenario):
    stats = moment_algebra(scenario)
    results = [cf.theorem1_bound(stats, scenario.gain, scenario.domain)]
    if stats.rho_xn == 0:
        results.append(cf.corollary1_bound(stats.sigma_x2, stats.sigma_n2, scenario.gain, scenario.domain))
    return [[res.method, t.eta, t.p, t.rate, res.rate] for res in results for t in res.per_gain]


def lemma_config(args, extra: dict) -> LemmaConfig:
    return LemmaConfig(
        n_samples=args.samples,
        k=int(extra.get("k", 4)),
        alpha_policy=extra.get("alpha_policy", "tied_to_beta"),
        refine_grid=int(extra.get("refine_grid", 21)),
        refine_span=float(extra.get("refine_span", 0.2)),
        seed=Seed(args.seed),
        workers=args.workers,
    )


def lemma_rows(scenario, cfg):
    res = lemma_bound(scenario, cfg)
    thm = cf.theorem1_bound(moment_algebra(scenario), scenario.gain, scenario.domain)
    return [[t.eta, t.p, t.alpha, t.beta, t.entropy_nats, t.stderr_nats, t.rate, res.rate,
             t.stderr_bits, th.rate] for t, th in zip(res.per_gain, thm.per_gain)]


def _parse_value(axis: str, text: str):
    return text if axis == "family" else float(text)


def sweep_rows(scenario, axis, values, cfg, errors):
    rows = []
    for pt in sweep(scenario, axis, values, cfg):
        if pt.error is not None:
            errors.append(f"{axis}={fmt(pt.value)}: {pt.error}")
            continue
        val = fmt(pt.value)
        if pt.lemma is not None:
            rows.append([axis, val, "lemma_mc", pt.lemma.rate, pt.lemma.stderr_bits])
        rows.append([axis, val, "theorem1", pt.theorem.rate, 0.0])
    return rows


def _write(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _run(args) -> int:
    sf = load_scenario(args.config)
    scenario = sf.scenario
    meta = {"command": args.command, "seed": args.seed, "n_samples": args.samples,
            "version": __version__}
    errors: list[str] = []

    if args.command == "verify":
        checks = run_checks(scenario, args.samples, Seed(args.seed))
        width = max(len(c.name) for c in checks)
        lines = [f"{c.name:<{width}}  {c.status:<4}  {c.detail}".rstrip() for c in checks]
        failed = any(c.status == "FAIL" for c in checks)
        lines.append(f"{'overall':<{width}}  {'FAIL' if failed else 'PASS'}")
        _write("\n".join(lines) + "\n", args.out)
        rows = [[c.name, c.status, c.detail] for c in checks]
        _manifest(args, rows)
        return EXIT_FAIL if failed else EXIT_OK

    validate(scenario)
    if args.command == "bound":
        columns, rows = BOUND_COLUMNS, bound_rows(scenario)
    elif args.command == "lemma":
        columns, rows = LEMMA_COLUMNS, lemma_rows(scenario, lemma_config(args, sf.lemma))
    elif args.command == "sweep":
        axis = args.axis or sf.sweep.get("axis")
        if axis not in SWEEP_AXES:
            raise InputError(f"sweep axis must be one of {', '.join(SWEEP_AXES)} (got {axis!r})")
        if args.values is not None:
            values = [_parse_value(axis, v) for v in args.values.split(",") if v.strip()]
        else:
            values = list(sf.sweep.get("values", []))
        cfg = lemma_config(args, sf.lemma)
        columns, rows = SWEEP_COLUMNS, sweep_rows(scenario, axis, values, cfg, errors)
    else:  # draw
        batch = draw(scenario, scenario.gain.atoms[0][0], args.samples, Seed(args.seed))
        buf = io.StringIO()
        write_batch_csv(batch, buf)
        _write(buf.getvalue(), args.out)
        _manifest(args, [])
        return EXIT_OK

    for e in errors:
        print(f"warning: {e}", file=sys.stderr)
    _write(render(columns, rows, args.format, meta), args.out)
    _manifest(args, rows)
    return EXIT_OK


def _manifest(args, rows):
    if not args.manifest:
        return
    doc = {
        "command": args.command,
        "scenario_path": str(args.config),
        "seed": args.seed,
        "n_samples": args.samples,
        "output_path": args.out,
        "tool_version": __version__,
        "wall_clock_s": round(time.monotonic() - args._t0, 6),
        "rows": [[_json_value(v) for v in r] for r in rows],
    }
    Path(args.manifest).write_text(json.dumps(doc, indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dpcbound", description="Lower bounds on dirty-paper-coding rates.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in [
        ("bound", "closed-form bounds per gain atom"),
        ("lemma", "Monte-Carlo entropy bound with (alpha, beta) search"),
        ("verify", "run oracle and invariant checks on a scenario"),
        ("sweep", "sweep one scenario parameter, lemma and theorem side by side"),
        ("draw", "export raw samples (x,z,n,y) at the first gain atom"),
    ]:
        c = sub.add_parser(name, help=text)
        c.add_argument("--config", required=True, help="scenario JSON file")
        c.add_argument("--seed", type=int, default=0, help="root seed (unsigned 64-bit)")
        c.add_argument("--samples", type=int, default=200_000, help="Monte-Carlo samples per atom")
        c.add_argument("--out", default=None, help="output path (default: stdout)")
        c.add_argument("--format", choices=("csv", "json"), default="csv")
        c.add_argument("--workers", type=int, default=1, help="parallel workers (output is unaffected)")
        c.add_argument("--manifest", default=None, help="write a run manifest (with timing) here")
        if name == "sweep":
            c.add_argument("--axis", choices=SWEEP_AXES)
            c.add_argument("--values", help="comma-separated axis values")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args._t0 = time.monotonic()
    try:
        if args.workers < 1:
            raise InputError("--workers must be >= 1")
        Seed(args.seed)
        return _run(args)
    except ValidationError as exc:
        if args.command == "verify":
            print(f"validate  FAIL  {exc}\noverall  FAIL")
            return EXIT_FAIL
        for v in exc.violations:
            print(f"error: {v.field}: {v.code}: {v.message}", file=sys.stderr)
        return EXIT_INPUT
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DpcError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
