"""Flat-file formats: params key/value text, trace JSON lines, sweep CSV."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Union

from .dynamics import FormationTrace, Move, MoveKind, Outcome, TraceEvent
from .graph import Graph, parse_edge_list, to_edge_list
from .utility import UtilityParams

SWEEP_HEADER = (
    "point", "c", "c0", "gamma", "seed", "outcome", "label", "nodes",
    "predicted", "agrees", "welfare",
)


class ConfigError(ValueError):
    """Bad or unparseable configuration."""


def parse_fraction(text: str) -> Fraction:
    """Exact rational from ``"p/q"``, an integer or a terminating decimal."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not an exact rational: {text!r}") from exc


def fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_params(text: str) -> UtilityParams:
    """Read ``key = value`` lines: ``b`` (comma list), ``c``, ``gamma``, ``c0``, ``sigma``."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.lower()] = value
    missing = [k for k in ("b", "c", "gamma", "c0") if k not in values]
    if missing:
        raise ConfigError(f"params missing {', '.join(missing)}")
    b = [parse_fraction(x) for x in values["b"].replace(";", ",").split(",") if x.strip()]
    sigma = None
    if "sigma" in values:
        try:
            sigma = int(values["sigma"])
        except ValueError as exc:
            raise ConfigError("sigma must be an integer") from exc
    try:
        return UtilityParams(
            tuple(b), parse_fraction(values["c"]), parse_fraction(values["gamma"]),
            parse_fraction(values["c0"]), sigma,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_params(path: Union[str, Path]) -> UtilityParams:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read params file {path}: {exc}") from exc
    return parse_params(text)


def dump_params(p: UtilityParams) -> str:
    lines = [
        "b = " + ", ".join(fraction_text(x) for x in p.benefits),
        f"c = {fraction_text(p.link_cost)}",
        f"gamma = {fraction_text(p.rent_fraction)}",
        f"c0 = {fraction_text(p.entry_factor)}",
    ]
    if p.entry_cap is not None:
        lines.append(f"sigma = {p.entry_cap}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# traces


def _event_record(ev: TraceEvent) -> dict:
    return {
        "type": "event",
        "epoch": ev.epoch,
        "round": ev.round,
        "node": ev.node,
        "move": ev.move.kind.value,
        "u": ev.move.actor,
        "v": ev.move.other,
        "delta": fraction_text(ev.delta),
        "entry_fee": fraction_text(ev.entry_fee),
    }


def trace_records(trace: FormationTrace) -> Iterable[dict]:
    """Base graph, then each epoch's events followed by its snapshot, then the outcome."""
    yield {"type": "base", "graph": to_edge_list(trace.base)}
    events = list(trace.events)
    i = 0
    for epoch, snap in enumerate(trace.snapshots):
        while i < len(events) and events[i].epoch <= epoch:
            yield _event_record(events[i])
            i += 1
        yield {"type": "snapshot", "epoch": epoch, "graph": to_edge_list(snap)}
    # events of an epoch that never reached a snapshot (declined entry, aborted run)
    for ev in events[i:]:
        yield _event_record(ev)
    yield {
        "type": "final",
        "outcome": trace.outcome.value if trace.outcome else None,
        "graph": to_edge_list(trace.final) if trace.final is not None else None,
    }


def dump_trace(trace: FormationTrace) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in trace_records(trace))


def load_trace(text: str) -> FormationTrace:
    trace = None
    for line in text.splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        kind = rec["type"]
        if kind == "base":
            trace = FormationTrace(base=parse_edge_list(rec["graph"]))
        elif trace is None:
            raise ConfigError("trace must start with a base record")
        elif kind == "event":
            move = Move(MoveKind(rec["move"]), rec["u"], rec["v"])
            trace.events.append(TraceEvent(
                rec["epoch"], rec["round"], rec["node"], move,
                Fraction(rec["delta"]), Fraction(rec["entry_fee"]),
            ))
        elif kind == "snapshot":
            trace.snapshots.append(parse_edge_list(rec["graph"]))
        elif kind == "final":
            trace.outcome = Outcome(rec["outcome"]) if rec["outcome"] else None
            trace.final = parse_edge_list(rec["graph"]) if rec["graph"] else None
    if trace is None:
        raise ConfigError("empty trace")
    return trace


def graph_record(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}
