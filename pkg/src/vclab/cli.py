"""Command-line entry point.

Every subcommand writes ``report.json`` containing a run manifest (resolved
configuration, input digests, seed, tool version, duration) next to the
machine-readable result; sweep-style outputs additionally write
``sweep.csv``.  Two runs with equal manifests (duration aside) produce
byte-identical result payloads: all randomness flows through ``--seed``,
which defaults to 0 and is never time-based.

Exit codes: 0 success, 2 input error, 3 enumeration-budget refusal.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import formula as fm
from .bounds import bounds_report
from .combinatorics import (
    growth_function,
    sauer_bound,
    sauer_poly_bound,
    vc_dimension,
)
from .harness import estimate_pac_probability, estimate_ucp_probability
from .learners import builtin_learners, random_table_learner
from .model import BudgetError, ExplicitSpace, InexactOracleError, as_instance
from .nfl import build_nfl_instance, nfl_report
from .serialize import (
    instance_from_json,
    instance_to_json,
    learner_from_json,
    distribution_from_json,
    space_from_json,
)


class UsageError(Exception):
    pass


def json_ready(obj):
    """Recursively convert package values to JSON-serializable data."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if hasattr(obj, "as_dict"):
        return json_ready(obj.as_dict())
    if is_dataclass(obj) and not isinstance(obj, type):
        return json_ready(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [json_ready(v) for v in obj]
    if obj.__class__.__name__ == "Instance":
        return instance_to_json(obj)
    return str(obj)


def _sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _load_json(path: str):
    return json.loads(Path(path).read_text())


def _parse_instance_list(text: str):
    """Semicolon-separated instances; commas separate vector coordinates.
    Scalar entries that parse as rationals are numeric, others are atoms."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) > 1:
            out.append(as_instance(tuple(parts)))
        else:
            try:
                out.append(as_instance(Fraction(parts[0])))
            except ValueError:
                out.append(as_instance(parts[0]))
    if not out:
        raise UsageError("empty instance list")
    return out


def _load_pool(path_or_inline: str):
    path = Path(path_or_inline)
    if path.exists():
        obj = _load_json(path_or_inline)
        entries = obj["instances"] if isinstance(obj, dict) else obj
        return [instance_from_json(x) for x in entries]
    return _parse_instance_list(path_or_inline)


def _parse_float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _parse_int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _resolve_learner(ref: str, space):
    if ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        available = builtin_learners(space)
        if name not in available:
            raise UsageError(f"unknown builtin learner {name!r}; "
                             f"choose from {sorted(available)}")
        return available[name]
    if ref.startswith("file:"):
        return learner_from_json(_load_json(ref.split(":", 1)[1]), space)
    if ref.startswith("random:"):
        return random_table_learner(space, seed=int(ref.split(":", 1)[1]))
    raise UsageError(
        f"learner reference {ref!r} must be builtin:NAME, file:PATH, or "
        "random:SEED")


# ---------------------------------------------------------------------------
# Subcommands: each returns (result, sweep_rows_or_None, input_paths)


def _cmd_vcdim(args):
    space = space_from_json(_load_json(args.space))
    pool = _load_pool(args.pool)
    verdict = vc_dimension(space, pool, limit=args.limit,
                           node_budget=args.budget)
    result = {
        "value": verdict.value,
        "status": verdict.status,
        "witness": {
            "instances": [instance_to_json(x) for x in verdict.witness_set],
            "dichotomies": {"".join(map(str, lab)): list(h.key)
                            for lab, h in sorted(verdict.witnesses.items())},
        },
        "nodes_used": verdict.nodes_used,
        "pool": [instance_to_json(x) for x in verdict.pool],
    }
    return result, None, [args.space]


def _cmd_growth(args):
    space = space_from_json(_load_json(args.space))
    pool = _load_pool(args.pool)
    value = growth_function(space, args.m, pool)
    return ({"m": args.m, "value": value,
             "pool": [instance_to_json(x) for x in pool]}, None, [args.space])


def _cmd_sauer(args):
    result = {"d": args.d, "m": args.m, "value": sauer_bound(args.d, args.m)}
    if args.d >= 1 and args.m > args.d + 1:
        result["poly"] = sauer_poly_bound(args.d, args.m)
    else:
        result["poly"] = None
    return result, None, []


def _cmd_bounds(args):
    eps_grid = _parse_float_list(args.eps_grid) if args.eps_grid else [args.eps]
    delta_grid = (_parse_float_list(args.delta_grid) if args.delta_grid
                  else [args.delta])
    report = bounds_report(args.d, args.eps, args.delta, m_h=args.mh,
                           m0_nmse=args.m0_nmse)
    sweep = None
    if args.csv:
        sweep = [("d", "eps", "delta", "m_h", "m0_singleton", "m0_1", "m0_2",
                  "m0_3", "m0_ucp", "m0_pac", "epsilon0")]
        for eps in eps_grid:
            for delta in delta_grid:
                r = bounds_report(args.d, eps, delta, m_h=args.mh,
                                  m0_nmse=args.m0_nmse)
                sweep.append((r.d, r.eps, r.delta, r.m_h, r.m0_singleton,
                              r.ucp.m0_1, r.ucp.m0_2, r.ucp.m0_3, r.ucp.m0,
                              r.m0_pac, r.epsilon0))
    return report.as_dict(), sweep, []


def _sim_common(args, runner):
    space = space_from_json(_load_json(args.space))
    dist = distribution_from_json(_load_json(args.dist))
    inputs = [args.space, args.dist]
    m_values = _parse_int_list(args.m)
    reports = [runner(space, dist, m) for m in m_values]
    sweep = [("m", "mode", "trials", "successes", "estimate", "ci_low",
              "ci_high", "probability")]
    for r in reports:
        sweep.append((r.m, r.mode, r.trials, r.successes, r.estimate,
                      r.ci_low, r.ci_high,
                      "" if r.probability is None else str(r.probability)))
    result = (reports[0].as_dict() if len(reports) == 1
              else [r.as_dict() for r in reports])
    return result, sweep, inputs


def _cmd_ucp_sim(args):
    def runner(space, dist, m):
        return estimate_ucp_probability(space, dist, m, args.eps,
                                        trials=args.trials, seed=args.seed,
                                        exact=args.exact,
                                        threads=args.threads)
    return _sim_common(args, runner)


def _cmd_pac_sim(args):
    def runner(space, dist, m):
        learner = _resolve_learner(args.learner, space)
        return estimate_pac_probability(learner, space, dist, m, args.eps,
                                        trials=args.trials, seed=args.seed,
                                        exact=args.exact,
                                        threads=args.threads)
    return _sim_common(args, runner)


def _cmd_nfl(args):
    inputs = []
    if args.instances:
        instances = _load_pool(args.instances)
    else:
        instances = [as_instance(i) for i in range(2 * args.m)]
    if args.space == "full":
        space = ExplicitSpace.full(instances)
    else:
        space = space_from_json(_load_json(args.space))
        inputs.append(args.space)
    inst = build_nfl_instance(instances, args.m, ambient=space)
    learner = _resolve_learner(args.learner, space)
    report = nfl_report(learner, inst, allow_large=args.allow_large)
    if args.learner.startswith("file:"):
        inputs.append(args.learner.split(":", 1)[1])
    return report.as_dict(), None, inputs


def _formula_ast(args) -> fm.FormulaAst:
    if args.file:
        text = Path(args.file).read_text()
    elif args.text is not None:
        text = args.text
    else:
        raise UsageError("provide the formula via --text or --file")
    objects = [v.strip() for v in args.objects.split(",") if v.strip()]
    params = ([v.strip() for v in args.params.split(",") if v.strip()]
              if args.params else [])
    return fm.parse_formula(text, objects=objects, params=params)


def _parse_axes(text: str):
    return [[v.strip() for v in axis.split(",") if v.strip()]
            for axis in text.split(";") if axis.strip()]


def _formula_source(args) -> fm.ParamSource:
    if args.params_list:
        return fm.ExplicitParams.of(
            [[v.strip() for v in chunk.split(",") if v.strip()]
             for chunk in args.params_list.split(";") if chunk.strip()])
    if args.grid:
        return fm.GridParams.of(_parse_axes(args.grid))
    return fm.SampledParams(budget=args.budget, seed=args.seed)


def _cmd_formula(args):
    inputs = [args.file] if args.file else []
    if args.action == "parse":
        ast = _formula_ast(args)
        formatted = fm.format_formula(ast)
        reparsed = fm.parse_formula(formatted, ast.objects, ast.params)
        return ({"formatted": formatted,
                 "objects": list(ast.objects),
                 "params": list(ast.params),
                 "uses_exp": ast.uses_exp,
                 "round_trips": reparsed == ast}, None, inputs)
    if args.action == "eval":
        ast = _formula_ast(args)
        x = [v.strip() for v in args.x.split(",")] if args.x else []
        w = [v.strip() for v in args.w.split(",")] if args.w else []
        backend = args.backend or (fm.FLOAT if ast.uses_exp else fm.EXACT)
        value = fm.eval_formula(ast, x, w, backend=backend)
        return ({"value": value, "backend": backend}, None, inputs)
    if args.action == "space":
        if not args.pool:
            raise UsageError("formula space needs --pool 'x1;x2;...'")
        ast = _formula_ast(args)
        space = fm.DefinableSpace(ast, _formula_source(args),
                                  backend=args.backend or None)
        pool = _parse_instance_list(args.pool)
        table = space.dichotomies(pool)
        return ({"kind": space.kind,
                 "oracle_exact": table.exact,
                 "closed_form": (space.closed_form.name
                                 if space.closed_form else None),
                 "pool": [instance_to_json(x) for x in pool],
                 "dichotomies": sorted("".join(map(str, lab))
                                       for lab in table.labelings)},
                None, inputs)
    if args.action == "shatter":
        if not args.instances:
            raise UsageError("formula shatter needs --instances 'x1;x2;...'")
        ast = _formula_ast(args)
        instances = _parse_instance_list(args.instances)
        grid = _parse_axes(args.grid) if args.grid else None
        verdict = fm.nip_shatter_search(ast, instances, budget=args.budget,
                                        seed=args.seed, grid=grid)
        witnesses = None
        if verdict.witnesses is not None:
            witnesses = {"".join(map(str, lab)): [str(v) for v in w]
                         for lab, w in sorted(verdict.witnesses.items())}
        return ({"status": verdict.status,
                 "budget_used": verdict.budget_used,
                 "witnesses": witnesses}, None, inputs)
    raise UsageError(f"unknown formula action {args.action!r}")


# ---------------------------------------------------------------------------
# Parser assembly and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vclab",
        description="Finite-scale statistical learning workbench: VC "
                    "dimension, growth functions, sample-complexity bounds, "
                    "UCP/PAC simulation, no-free-lunch enumeration, and a "
                    "formula DSL for definable classifier families.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", default=".",
                       help="directory for report.json (and sweep.csv)")

    p = sub.add_parser("vcdim", help="VC dimension over a witness pool")
    p.add_argument("--space", required=True, help="space JSON file")
    p.add_argument("--pool", required=True,
                   help="pool JSON file or inline 'x1;x2;...'")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--budget", type=int, default=None,
                   help="max subsets to test before settling for lower-bound")
    add_out(p)
    p.set_defaults(fn=_cmd_vcdim)

    p = sub.add_parser("growth", help="growth function value over a pool")
    p.add_argument("--space", required=True)
    p.add_argument("--pool", required=True)
    p.add_argument("--m", type=int, required=True)
    add_out(p)
    p.set_defaults(fn=_cmd_growth)

    p = sub.add_parser("sauer", help="binomial-sum and polynomial growth bounds")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    add_out(p)
    p.set_defaults(fn=_cmd_sauer)

    p = sub.add_parser("bounds", help="sample-complexity bound report")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--mh", type=int, default=1)
    p.add_argument("--m0-nmse", dest="m0_nmse", type=int, default=1)
    p.add_argument("--csv", action="store_true",
                   help="also write a sweep.csv over the eps/delta grids")
    p.add_argument("--eps-grid", dest="eps_grid", default=None,
                   help="comma-separated eps values for the sweep")
    p.add_argument("--delta-grid", dest="delta_grid", default=None)
    add_out(p)
    p.set_defaults(fn=_cmd_bounds)

    for name, fn, with_learner in (("ucp-sim", _cmd_ucp_sim, False),
                                   ("pac-sim", _cmd_pac_sim, True)):
        p = sub.add_parser(name, help=f"{name.split('-')[0].upper()} event "
                                      "probability (Monte Carlo or exact)")
        p.add_argument("--space", required=True)
        p.add_argument("--dist", required=True, help="distribution JSON file")
        p.add_argument("--m", required=True,
                       help="sample size, or comma list for a sweep")
        p.add_argument("--eps", type=float, required=True)
        p.add_argument("--trials", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--exact", action="store_true")
        p.add_argument("--threads", type=int, default=1)
        if with_learner:
            p.add_argument("--learner", required=True,
                           help="builtin:NAME, file:PATH, or random:SEED")
        add_out(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("nfl", help="adversarial lower-bound enumeration")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--learner", default="builtin:sem")
    p.add_argument("--space", default="full",
                   help="'full' or a space JSON file shattering the instances")
    p.add_argument("--instances", default=None,
                   help="2m instances (JSON file or inline); default 0..2m-1")
    p.add_argument("--allow-large", action="store_true",
                   help="permit m = 4 and beyond (costly)")
    add_out(p)
    p.set_defaults(fn=_cmd_nfl)

    p = sub.add_parser("formula", help="parse/eval/space/shatter for the DSL")
    p.add_argument("action", choices=["parse", "eval", "space", "shatter"])
    p.add_argument("--text", default=None)
    p.add_argument("--file", default=None)
    p.add_argument("--objects", required=True, help="comma-separated names")
    p.add_argument("--params", default="", help="comma-separated names")
    p.add_argument("--backend", choices=["exact", "float"], default=None)
    p.add_argument("--x", default=None, help="object values, comma-separated")
    p.add_argument("--w", default=None, help="parameter values")
    p.add_argument("--pool", default=None,
                   help="instances for the space oracle, 'x1;x2;...'")
    p.add_argument("--instances", default=None,
                   help="instances for shattering search")
    p.add_argument("--params-list", dest="params_list", default=None,
                   help="explicit parameter tuples 'a,b;c,d'")
    p.add_argument("--grid", default=None,
                   help="per-parameter axes 'v1,v2;u1,u2'")
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    add_out(p)
    p.set_defaults(fn=_cmd_formula)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    started = time.monotonic()
    try:
        result, sweep, input_paths = args.fn(args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, InexactOracleError, ValueError, KeyError, TypeError,
            OSError, json.JSONDecodeError, fm.FormulaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    duration = time.monotonic() - started

    config = {k: v for k, v in vars(args).items()
              if k not in ("fn", "out") and not callable(v)}
    manifest = {
        "subcommand": args.command,
        "config": json_ready(config),
        "inputs": {p: _sha256_file(Path(p)) for p in input_paths},
        "seed": getattr(args, "seed", 0),
        "version": __version__,
        "duration_s": round(duration, 6),
    }
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "report.json"
    payload = {"manifest": manifest, "result": json_ready(result)}
    report_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if sweep is not None:
        sweep_path = out_dir / "sweep.csv"
        with sweep_path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerows(sweep)
    print(json.dumps(json_ready(result), indent=2, sort_keys=True))
    print(f"report written to {report_path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
