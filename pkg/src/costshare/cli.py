"""Command line front end.

Exit codes: 0 success / property holds, 1 property violated or oracle
mismatch, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import replace

from .exceptions import CostShareError, NotATreeError
from .graph import format_rational
from .harness import (
    BUDGET_POLICIES,
    PROPERTIES,
    TOPOLOGIES,
    GenSpec,
    certify,
    gen_random_instance,
    instance_digest,
)
from .mechanisms import MECHANISMS, SCSM, decimal6, run_amcm, run_mechanism, run_scsm
from .trees import claus_kleitman_shares, root_tree, savings_tree_shares
from .validation import check_instance, check_report
from .values import DEFAULT_MAX_COALITION_NODES

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2
FORMATS = ("json", "csv", "table")
ENV_CAP = "COSTSHARE_MAX_COALITION_NODES"
ENV_FORMAT = "COSTSHARE_FORMAT"


class UsageError(Exception):
    pass


def _int_pair(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI integers, got {text!r}") from None
    return lo, hi


_RANDOM_KEYS = {
    "n": ("n_nodes", int),
    "nodes": ("n_nodes", int),
    "density": ("density", float),
    "seed": ("seed", int),
    "budget": ("budget_policy", str),
    "budget_policy": ("budget_policy", str),
    "topology": ("topology", str),
    "cost_range": ("cost_range", lambda s: _int_pair(s.replace(":", ","))),
    "budget_range": ("budget_range", lambda s: _int_pair(s.replace(":", ","))),
    "slack_range": ("slack_range", lambda s: _int_pair(s.replace(":", ","))),
}


def parse_random(text: str, base: GenSpec) -> tuple[GenSpec, int]:
    """``n=5,seed=7,trials=50`` (ranges as ``lo:hi``) or a JSON file of GenSpec fields."""
    trials = 1
    if text.endswith(".json") or os.path.isfile(text):
        try:
            with open(text, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read generator spec: {exc}") from None
        trials = int(doc.pop("trials", 1))
        for key in ("cost_range", "budget_range", "slack_range"):
            if key in doc:
                doc[key] = tuple(doc[key])
        try:
            spec = replace(base, **doc)
        except TypeError as exc:
            raise UsageError(f"bad generator spec: {exc}") from None
    else:
        fields = {}
        for item in filter(None, text.split(",")):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep:
                raise UsageError(f"--random expects key=value items, got {item!r}")
            if key == "trials":
                trials = int(value)
                continue
            if key not in _RANDOM_KEYS:
                raise UsageError(f"--random: unknown key {key!r}")
            name, conv = _RANDOM_KEYS[key]
            try:
                fields[name] = conv(value.strip())
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"--random {key}: {exc}") from None
        spec = replace(base, **fields)
    try:
        spec.validate()
    except ValueError as exc:
        raise UsageError(f"invalid generator spec: {exc}") from None
    if trials < 1:
        raise UsageError("trials must be >= 1")
    return spec, trials


def _corpus(spec: GenSpec, trials: int):
    return [gen_random_instance(replace(spec, seed=spec.seed + k)) for k in range(trials)]


def _cap(args) -> int:
    cap = args.max_coalition_nodes
    if cap is None:
        cap = int(os.environ.get(ENV_CAP, DEFAULT_MAX_COALITION_NODES))
    if cap < 1:
        raise UsageError("--max-coalition-nodes must be >= 1")
    return cap


def _format(args, default: str = "json") -> str:
    fmt = args.format or os.environ.get(ENV_FORMAT, default)
    if fmt not in FORMATS:
        raise UsageError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
    return fmt


def _load_instances(args, base: GenSpec):
    if bool(args.instance) == bool(args.random):
        raise UsageError("give exactly one of --instance or --random")
    if args.instance:
        return [check_instance(args.instance)]
    spec, trials = parse_random(args.random, base)
    return _corpus(spec, trials)


def render_outcome(outcome, instance, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(outcome.to_dict(), indent=2)
    rows = []
    for n in instance.players:
        budget = instance.budgets.get(n)
        rows.append([
            n,
            format_rational(outcome.shares[n]),
            decimal6(outcome.shares[n]),
            "yes" if n in outcome.selected else "no",
            "-" if budget is None else format_rational(budget),
            "yes" if outcome.budget_feasible[n] else "no",
        ])
    header = ["node", "share", "decimal", "selected", "budget", "feasible"]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        writer.writerow(["total", format_rational(outcome.total_cost), decimal6(outcome.total_cost), "", "", ""])
        return buf.getvalue().rstrip("\n")
    widths = [max(len(str(r[k])) for r in [header, *rows]) for k in range(len(header))]
    lines = [f"mechanism {outcome.mechanism}"]
    for r in [header, *rows]:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip())
    tree = ", ".join(f"{u}-{v}:{format_rational(c)}" for u, v, c in outcome.tree_edges)
    lines.append(f"tree {tree or '(empty)'}")
    lines.append(f"total {format_rational(outcome.total_cost)}")
    return "\n".join(lines)


def cmd_solve(args) -> int:
    instance = check_instance(args.instance, require_budgets=args.mechanism == SCSM)
    report = check_report(args.report, instance)
    outcome = run_mechanism(args.mechanism, instance, report, _cap(args))
    print(render_outcome(outcome, instance, _format(args)))
    if args.dump_table:
        table = outcome.value_table
        doc = {
            "flavor": table.flavor,
            "players": list(table.players),
            "values": {str(m): format_rational(table[m]) for m in range(len(table))},
        }
        with open(args.dump_table, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_check(args) -> int:
    base = GenSpec(budget_policy="uniform")
    instances = _load_instances(args, base)
    if args.mechanism == SCSM:
        for inst in instances:
            check_instance(inst, require_budgets=True)
    result = certify(instances, args.mechanism, [args.property], _cap(args), jobs=args.jobs)
    chk = result[args.property]
    fmt = _format(args, default="table")
    if fmt == "json":
        print(json.dumps({
            "property": chk.property,
            "mechanism": chk.mechanism,
            "verdict": chk.verdict,
            "instances": len(instances),
            "checked": chk.checked,
            "deselections": chk.deselections,
            "witnesses": [w.to_dict() for w in chk.witnesses],
        }, indent=2))
    else:
        print(
            f"{chk.property} {chk.mechanism}: {chk.verdict} "
            f"(instances={len(instances)} checked={chk.checked} "
            f"deselections={chk.deselections} witnesses={len(chk.witnesses)})"
        )
        for w in chk.witnesses:
            print(w.to_json())
    if args.witnesses:
        with open(args.witnesses, "w", encoding="utf-8") as fh:
            for w in chk.witnesses:
                fh.write(w.to_json() + "\n")
    return EXIT_OK if chk.holds else EXIT_VIOLATED


def cmd_gen(args) -> int:
    if args.spec:
        spec, _ = parse_random(args.spec, GenSpec())
    else:
        spec = GenSpec(
            n_nodes=args.nodes,
            density=args.density,
            cost_range=args.cost_range,
            budget_policy=args.budget_policy,
            budget_range=args.budget_range,
            slack_range=args.slack_range,
            topology=args.topology,
            seed=args.seed,
        )
        try:
            spec.validate()
        except ValueError as exc:
            raise UsageError(f"invalid generator spec: {exc}") from None
    instance = gen_random_instance(spec)
    text = instance.to_json()
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(instance_digest(instance), file=sys.stdout if args.output not in (None, "-") else sys.stderr)
    return EXIT_OK


def _fmt_alloc(shares) -> str:
    return " ".join(f"{n}={format_rational(x)}" for n, x in sorted(shares.items()))


def cmd_tree_compare(args) -> int:
    base = GenSpec(density=0.0, budget_policy="tight")
    instances = _load_instances(args, base)
    cap = _cap(args)
    all_equal = True
    for inst in instances:
        tree = root_tree(inst)
        amcm = run_amcm(inst, max_coalition_nodes=cap).shares
        ck = claus_kleitman_shares(tree)
        ok = amcm == ck
        all_equal &= ok
        label = instance_digest(inst) if args.random else args.instance
        print(f"{label} amcm        {_fmt_alloc(amcm)}")
        print(f"{label} edge-split  {_fmt_alloc(ck)}  {'equal' if ok else 'DIFFERENT'}")
        budgets_ok = all(
            n in inst.budgets and inst.budgets[n] >= tree.edge_cost[n] for n in inst.players
        )
        if budgets_ok:
            scsm = run_scsm(inst, max_coalition_nodes=cap).shares
            sv = savings_tree_shares(tree, inst.budgets)
            ok = scsm == sv
            all_equal &= ok
            print(f"{label} scsm        {_fmt_alloc(scsm)}")
            print(f"{label} savings     {_fmt_alloc(sv)}  {'equal' if ok else 'DIFFERENT'}")
        else:
            print(f"{label} savings rule skipped: some node lacks a budget covering its parent edge")
    return EXIT_OK if all_equal else EXIT_VIOLATED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="costshare", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=True):
        p.add_argument("--max-coalition-nodes", type=int, default=None,
                       help=f"enumeration cap (default {DEFAULT_MAX_COALITION_NODES}, env {ENV_CAP})")
        if formats:
            p.add_argument("--format", choices=FORMATS, default=None,
                           help=f"output format (default json, env {ENV_FORMAT})")

    p = sub.add_parser("solve", help="run a mechanism on one instance")
    p.add_argument("--mechanism", choices=MECHANISMS, required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--report", default=None, help="report JSON; omitted nodes are truthful")
    p.add_argument("--dump-table", default=None, metavar="PATH",
                   help="write the coalition value table as JSON")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="certify a property on an instance or a random corpus")
    p.add_argument("--property", choices=PROPERTIES, required=True)
    p.add_argument("--mechanism", choices=MECHANISMS, required=True)
    p.add_argument("--instance", default=None)
    p.add_argument("--random", default=None, metavar="SPEC",
                   help="n=5,seed=7,trials=50[,density=..,budget=..] or a JSON file")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--witnesses", default=None, metavar="PATH", help="write witnesses as JSON lines")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="write a seeded random instance")
    p.add_argument("--nodes", type=int, default=5)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cost-range", type=_int_pair, default=(1, 20))
    p.add_argument("--budget-policy", choices=BUDGET_POLICIES, default="unlimited")
    p.add_argument("--budget-range", type=_int_pair, default=(1, 40))
    p.add_argument("--slack-range", type=_int_pair, default=(0, 10))
    p.add_argument("--topology", choices=TOPOLOGIES, default="graph")
    p.add_argument("--spec", default=None, help="generator spec as JSON file (overrides flags)")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("tree-compare", help="compare mechanisms with the closed-form tree rules")
    p.add_argument("--instance", default=None)
    p.add_argument("--random", default=None, metavar="SPEC")
    common(p, formats=False)
    p.set_defaults(func=cmd_tree_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (CostShareError, UsageError, ValueError) as exc:
        kind = "not a tree" if isinstance(exc, NotATreeError) else "error"
        print(f"costshare: {kind}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
