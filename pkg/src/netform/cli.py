"""Command-line front end: ``form``, ``check``, ``sweep``, ``explore``, ``oracle``.

Exit codes: 0 success or claim holds, 1 claim fails, 2 usage/config error,
3 the engine hit its round limit or a cycle.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .conditions import base_graph_k_star, check_claim, predicted_topology
from .dynamics import DEFAULT_ROUND_LIMIT, FixedOrder, Outcome, SeededRandom, form_network
from .formats import (
    SWEEP_HEADER,
    ConfigError,
    dump_trace,
    fraction_text,
    graph_record,
    load_params,
    parse_fraction,
)
from .graph import (
    Graph,
    SizeLimitError,
    Topology,
    TopologyLabel,
    classify_topology,
    parse_edge_list,
    to_dot,
    to_edge_list,
)
from .oracle import (
    brute_force_efficient,
    enumerate_stable_graphs,
    explore_all_formations,
    efficiency_ratio_empirical,
)
from .conditions import efficiency_ratio_closed_form
from .utility import UtilityParams, efficiency_value, social_welfare

log = logging.getLogger("netform")

EXIT_OK, EXIT_CLAIM_FAILS, EXIT_USAGE, EXIT_ENGINE = 0, 1, 2, 3


def _seeds(text: str) -> list[int]:
    try:
        seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad seed list {text!r}") from exc
    if not seeds:
        raise ConfigError("no seeds given")
    if len(set(seeds)) != len(seeds):
        raise ConfigError("seeds must be distinct")
    return seeds


def _base(text: Optional[str]) -> tuple[Optional[Graph], Optional[int]]:
    """``kstar:K`` names the k-star base graph; anything else is an edge-list file."""
    if not text:
        return None, None
    if text.lower().startswith("kstar:"):
        try:
            k = int(text.split(":", 1)[1])
            return base_graph_k_star(k), k
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    try:
        return parse_edge_list(Path(text).read_text()), None
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read base graph {text}: {exc}") from exc


def _label(text: str) -> TopologyLabel:
    try:
        return TopologyLabel.parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _out(args) -> Path:
    path = Path(args.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_form(args) -> int:
    params = load_params(args.params)
    base, _ = _base(args.base)
    if args.order:
        scheduler = FixedOrder(tuple(int(v) for v in args.order.split(",")))
    else:
        scheduler = SeededRandom(_seeds(args.seed)[0])
    trace = form_network(params, args.nmax, scheduler, args.round_limit, base=base)
    final = trace.final
    label = classify_topology(final)
    out = _out(args)
    (out / "trace.jsonl").write_text(dump_trace(trace))
    (out / "final.edgelist").write_text(to_edge_list(final))
    (out / "final.dot").write_text(to_dot(final))
    summary = {
        "outcome": trace.outcome.value,
        "label": str(label),
        "nodes": final.n,
        "edges": final.edge_count,
        "welfare": fraction_text(social_welfare(final, params)),
        "efficiency": fraction_text(efficiency_value(final, params)),
    }
    _write_json(out / "summary.json", summary)
    print(f"outcome={summary['outcome']} label={label} nodes={final.n} "
          f"welfare={summary['welfare']} efficiency={summary['efficiency']}")
    if trace.outcome in (Outcome.ROUND_LIMIT, Outcome.CYCLE_DETECTED):
        return EXIT_ENGINE
    return EXIT_OK


def cmd_check(args) -> int:
    params = load_params(args.params)
    try:
        report = check_claim(args.claim, params, k=args.k)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(report.render())
    if args.out:
        _write_json(_out(args) / "check.json", report.as_records())
    return EXIT_OK if report.satisfied else EXIT_CLAIM_FAILS


_AXES = {"c": "link_cost", "c0": "entry_factor", "gamma": "rent_fraction"}


def _grid(specs: Sequence[str]) -> list[dict]:
    if not specs:
        raise ConfigError("sweep needs at least one --grid axis=v1,v2,...")
    axes = []
    for item in specs:
        if "=" not in item:
            raise ConfigError(f"bad grid axis {item!r}")
        name, values = item.split("=", 1)
        name = name.strip().lower()
        if name not in _AXES:
            raise ConfigError(f"unknown grid axis {name!r}; use c, c0 or gamma")
        vals = [parse_fraction(v) for v in values.split(",") if v.strip()]
        if not vals:
            raise ConfigError(f"grid axis {name} is empty")
        axes.append((name, vals))
    names = [a for a, _ in axes]
    return [dict(zip(names, combo)) for combo in itertools.product(*(v for _, v in axes))]


def _sweep_row(job) -> list[str]:
    index, point, params, seed, n_max, base, k_hint, round_limit = job
    trace = form_network(params, n_max, SeededRandom(seed), round_limit, base=base)
    label = classify_topology(trace.final)
    predicted = predicted_topology(params, k_hint)
    agrees = "" if predicted is None else str(predicted.matches(label)).lower()
    return [
        str(index),
        fraction_text(params.link_cost),
        fraction_text(params.entry_factor),
        fraction_text(params.rent_fraction),
        str(seed),
        trace.outcome.value,
        str(label),
        str(trace.final.n),
        str(predicted) if predicted is not None else "unknown",
        agrees,
        fraction_text(social_welfare(trace.final, params)),
    ]


def sweep_rows(params: UtilityParams, grid: list[dict], seeds: Sequence[int], n_max: int,
               base: Optional[Graph] = None, k_hint: Optional[int] = None,
               round_limit: int = DEFAULT_ROUND_LIMIT, jobs: int = 1) -> list[list[str]]:
    jobs_list = []
    for index, point in enumerate(grid):
        try:
            p = params.replace(**{_AXES[k]: v for k, v in point.items()})
        except ValueError as exc:
            raise ConfigError(f"grid point {index}: {exc}") from exc
        for seed in seeds:
            jobs_list.append((index, point, p, seed, n_max, base, k_hint, round_limit))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_row, jobs_list))
    return [_sweep_row(j) for j in jobs_list]


def cmd_sweep(args) -> int:
    params = load_params(args.params)
    base, k_hint = _base(args.base)
    rows = sweep_rows(params, _grid(args.grid), _seeds(args.seed), args.nmax, base,
                      args.k if args.k is not None else k_hint, args.round_limit, args.jobs)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    writer.writerows(rows)
    (_out(args) / "sweep.csv").write_text(buf.getvalue())
    disagreements = sum(1 for r in rows if r[9] == "false")
    print(f"{len(rows)} runs, {disagreements} disagree with the predicted topology")
    if any(r[5] in (Outcome.ROUND_LIMIT.value, Outcome.CYCLE_DETECTED.value) for r in rows):
        return EXIT_ENGINE
    return EXIT_OK


def cmd_explore(args) -> int:
    params = load_params(args.params)
    base, _ = _base(args.base)
    target = _label(args.target) if args.target else None
    result = explore_all_formations(params, args.nmax, target, base=base)
    out = _out(args)
    records = [
        {**graph_record(g), "label": str(classify_topology(g))}
        for g in sorted(result.terminal_graphs, key=lambda h: (h.n, h.edges))
    ]
    (out / "terminals.jsonl").write_text("".join(json.dumps(r) + "\n" for r in records))
    summary = {
        "states_visited": result.states_visited,
        "max_depth": result.max_depth,
        "terminals": len(records),
        "all_match": result.all_match,
    }
    _write_json(out / "explore.json", summary)
    labels = ", ".join(str(lbl) for lbl in result.terminal_labels)
    print(f"states={result.states_visited} terminals={len(records)} labels=[{labels}] "
          f"all_match={result.all_match}")
    if target is None:
        return EXIT_OK
    return EXIT_OK if result.all_match else EXIT_CLAIM_FAILS


def cmd_oracle(args) -> int:
    params = load_params(args.params)
    out = _out(args)
    if args.mode in ("efficient", "stable"):
        if args.n is None:
            raise ConfigError("--n is required for this mode")
        finder = brute_force_efficient if args.mode == "efficient" else enumerate_stable_graphs
        graphs = sorted(finder(args.n, params), key=lambda h: h.edges)
        records = [{**graph_record(g), "label": str(classify_topology(g))} for g in graphs]
        (out / f"{args.mode}.jsonl").write_text("".join(json.dumps(r) + "\n" for r in records))
        for r in records:
            print(f"{r['label']}: {r['edges']}")
        if args.mode == "efficient" and len(records) == 1:
            print("unique efficient network")
        return EXIT_OK
    if args.label is None or args.mu is None:
        raise ConfigError("ratio mode needs --label and --mu")
    label = _label(args.label)
    k = label.k if label.kind is Topology.KSTAR else None
    try:
        exact = efficiency_ratio_empirical(label, args.mu, params)
        closed = efficiency_ratio_closed_form(label, params, k)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    payload = {
        "label": str(label), "mu": args.mu,
        "exact": fraction_text(exact), "closed_form": fraction_text(closed),
        "deviation": fraction_text(abs(exact - closed)),
    }
    _write_json(out / "ratio.json", payload)
    print(f"exact={exact} (~{float(exact):.6f}) closed_form={closed} (~{float(closed):.6f})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netform", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, nmax=True):
        p.add_argument("--params", required=True, help="params file (key = value lines)")
        if nmax:
            p.add_argument("--nmax", type=int, required=True)
        p.add_argument("--out", default="out", help="output directory")

    p = sub.add_parser("form", help="run one formation")
    common(p)
    p.add_argument("--seed", default="0")
    p.add_argument("--order", help="fixed activation order, comma separated")
    p.add_argument("--base", help="kstar:K or an edge-list file")
    p.add_argument("--round-limit", type=int, default=DEFAULT_ROUND_LIMIT)
    p.set_defaults(func=cmd_form)

    p = sub.add_parser("check", help="check a theorem's sufficient conditions")
    p.add_argument("--params", required=True)
    p.add_argument("--claim", required=True,
                   help="thm1, thm2, thm3, thm4, cor1, thm5, lem1 or lem3")
    p.add_argument("--k", type=int, help="centers (thm5) or network size (lem3)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="formation runs over a parameter grid")
    common(p)
    p.add_argument("--seed", default="0")
    p.add_argument("--grid", action="append", default=[], help="axis=v1,v2,... (c, c0, gamma)")
    p.add_argument("--base", help="kstar:K or an edge-list file")
    p.add_argument("--k", type=int, help="k hint for the predicted topology")
    p.add_argument("--round-limit", type=int, default=DEFAULT_ROUND_LIMIT)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("explore", help="follow every best-response path")
    common(p)
    p.add_argument("--target", help="expected topology, e.g. star, complete, turan, 2star, kstar:3")
    p.add_argument("--base", help="kstar:K or an edge-list file")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("oracle", help="brute-force efficiency, stability and ratios")
    common(p, nmax=False)
    p.add_argument("--mode", choices=("efficient", "stable", "ratio"), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--label")
    p.add_argument("--mu", type=int)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, SizeLimitError) as exc:
        print(f"netform: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
