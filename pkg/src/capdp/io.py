"""Instance file parsing, writing, and run reports.

Formats are plain whitespace-separated decimal integers with '#' line
comments, one record per line:

  knapsack / unbounded:  "n T" header, then n lines "w v".
  dag:                   "n m s t [transitive]" header, then n reward
                         lines, then m edge lines "u v".
  monge:                 "n m s t [complete]" header (n = node count),
                         then m edge lines "u v w".
  sequence:              "n k delta" header, then n integers (any number
                         per line).

The same knapsack body serves both the 0/1 and the unbounded readings;
the caller names the kind.  Reports are line-delimited "key=value" text
with stable key order; wall_* keys carry timings and are the only keys
excluded from byte-for-byte determinism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dag import NodeWeightedDag
from .errors import ParseError, ValidationError
from .knapsack import KnapsackInstance
from .monge import MongeDagOracle
from .profiles import BOTTOM
from .unbounded import UnboundedInstance

KINDS = ("knapsack", "unbounded", "dag", "monge", "sequence")


@dataclass(frozen=True)
class DagInstance:
    graph: NodeWeightedDag
    source: int
    target: int
    transitive: bool


@dataclass(frozen=True)
class MongeInstance:
    oracle: MongeDagOracle
    source: int
    target: int
    complete: bool


@dataclass(frozen=True)
class SequenceInstance:
    values: np.ndarray
    picks: int
    gap: int


@dataclass(frozen=True)
class InstanceFile:
    """Kind-tagged validated instance plus its report descriptor."""

    kind: str
    descriptor: dict[str, int]
    payload: object


def _records(text: str):
    """(line_number, tokens) for every line with content after comments."""
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _ints(tokens: list[str], no: int) -> list[int]:
    out = []
    for tok in tokens:
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"expected integer, got {tok!r}", no) from None
    return out


def _take(records, what: str):
    try:
        return next(records)
    except StopIteration:
        raise ParseError(f"missing {what}") from None


def _fixed(records, what: str, width: int) -> tuple[int, list[int]]:
    no, tokens = _take(records, what)
    if len(tokens) != width:
        raise ParseError(f"{what} needs {width} integers, got {len(tokens)}",
                         no)
    return no, _ints(tokens, no)


def _done(records) -> None:
    for no, _ in records:
        raise ParseError("unexpected trailing content", no)


def parse_instance(kind: str, text: str) -> InstanceFile:
    """Parse and validate one instance body of the given kind."""
    if kind not in KINDS:
        raise ValidationError(f"unknown kind {kind!r}")
    records = _records(text)
    if kind in ("knapsack", "unbounded"):
        return _parse_items(kind, records)
    if kind == "dag":
        return _parse_dag(records)
    if kind == "monge":
        return _parse_monge(records)
    return _parse_sequence(records)


def _parse_items(kind: str, records) -> InstanceFile:
    no, (n, cap) = _fixed(records, "header line 'n T'", 2)
    if n < 0:
        raise ParseError("item count must be >= 0", no)
    items = []
    for _ in range(n):
        _, (w, v) = _fixed(records, "item line 'w v'", 2)
        items.append((w, v))
    _done(records)
    if kind == "knapsack":
        payload = KnapsackInstance.build(items, cap)
    else:
        payload = UnboundedInstance.build(items, cap)
    desc = {
        "n": n,
        "D": len({w for w, _ in items}),
        "M": max((w for w, _ in items), default=0),
        "V": max((v for _, v in items), default=0),
        "T": cap,
    }
    return InstanceFile(kind, desc, payload)


def _parse_dag(records) -> InstanceFile:
    no, tokens = _take(records, "header line 'n m s t [transitive]'")
    flag = False
    if tokens and tokens[-1] == "transitive":
        flag = True
        tokens = tokens[:-1]
    if len(tokens) != 4:
        raise ParseError("header needs 'n m s t' plus optional "
                         "'transitive'", no)
    n, m, s, t = _ints(tokens, no)
    if n < 1 or m < 0:
        raise ParseError("need n >= 1 and m >= 0", no)
    rewards = []
    for _ in range(n):
        _, (r,) = _fixed(records, "reward line", 1)
        rewards.append(r)
    edges = []
    for _ in range(m):
        _, (u, v) = _fixed(records, "edge line 'u v'", 2)
        edges.append((u, v))
    _done(records)
    graph = NodeWeightedDag(n, edges, rewards)
    if not (0 <= s < n and 0 <= t < n):
        raise ValidationError("source or target out of range")
    if flag and not graph.is_transitive():
        raise ValidationError("declared transitive but is not")
    desc = {"n": n, "m": m, "s": s, "t": t}
    return InstanceFile("dag", desc, DagInstance(graph, s, t, flag))


def _parse_monge(records) -> InstanceFile:
    no, tokens = _take(records, "header line 'n m s t [complete]'")
    flag = False
    if tokens and tokens[-1] == "complete":
        flag = True
        tokens = tokens[:-1]
    if len(tokens) != 4:
        raise ParseError("header needs 'n m s t' plus optional 'complete'",
                         no)
    n, m, s, t = _ints(tokens, no)
    if n < 2 or m < 0:
        raise ParseError("need n >= 2 nodes and m >= 0", no)
    triples = []
    for _ in range(m):
        _, (u, v, w) = _fixed(records, "edge line 'u v w'", 3)
        triples.append((u, v, w))
    _done(records)
    oracle = MongeDagOracle.from_edges(n - 1, triples)
    if flag:
        if m != n * (n - 1) // 2:
            raise ValidationError(
                f"declared complete but has {m} of {n * (n - 1) // 2} edges")
        dense = np.zeros((n, n), dtype=np.int64)
        for u, v, w in triples:
            dense[u, v] = w
        oracle = MongeDagOracle.from_matrix(dense)
    if not (0 <= s < n and 0 <= t < n):
        raise ValidationError("source or target out of range")
    desc = {"n": n, "m": m, "s": s, "t": t}
    return InstanceFile("monge", desc, MongeInstance(oracle, s, t, flag))


def _parse_sequence(records) -> InstanceFile:
    no, (n, k, delta) = _fixed(records, "header line 'n k delta'", 3)
    if n < 1:
        raise ParseError("need n >= 1", no)
    values: list[int] = []
    while len(values) < n:
        no, tokens = _take(records, f"{n - len(values)} more sequence values")
        got = _ints(tokens, no)
        if len(values) + len(got) > n:
            raise ParseError(f"more than {n} sequence values", no)
        values.extend(got)
    _done(records)
    if k < 1 or delta < 1:
        raise ValidationError("need k >= 1 and delta >= 1")
    arr = np.array(values, dtype=np.int64)
    desc = {"n": n, "k": k, "delta": delta}
    return InstanceFile("sequence", desc, SequenceInstance(arr, k, delta))


def load_instance(kind: str, path: str) -> InstanceFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(kind, fh.read())


# --- writers (inverse of the parser, used by `gen`) -------------------------


def format_items(items, capacity: int) -> str:
    lines = [f"{len(items)} {capacity}"]
    lines += [f"{w} {v}" for w, v in items]
    return "\n".join(lines) + "\n"


def format_dag(graph: NodeWeightedDag, s: int, t: int,
               transitive: bool = False) -> str:
    head = f"{graph.n} {graph.m} {s} {t}"
    if transitive:
        head += " transitive"
    lines = [head]
    lines += [str(int(r)) for r in graph.reward_codes]
    lines += [f"{u} {v}" for u, v in zip(graph.src.tolist(),
                                         graph.dst.tolist())]
    return "\n".join(lines) + "\n"


def format_monge(oracle: MongeDagOracle, s: int, t: int) -> str:
    triples = []
    for u in range(oracle.n + 1):
        for v, w in oracle.successors(u):
            triples.append((u, v, w))
    head = f"{oracle.n + 1} {len(triples)} {s} {t}"
    if oracle.complete:
        head += " complete"
    lines = [head]
    lines += [f"{u} {v} {w}" for u, v, w in triples]
    return "\n".join(lines) + "\n"


def format_sequence(values, k: int, delta: int, per_line: int = 16) -> str:
    vals = [int(x) for x in values]
    lines = [f"{len(vals)} {k} {delta}"]
    for i in range(0, len(vals), per_line):
        lines.append(" ".join(str(x) for x in vals[i:i + per_line]))
    return "\n".join(lines) + "\n"


# --- run reports -------------------------------------------------------------


def format_report(pairs: list[tuple[str, object]]) -> str:
    """Line-delimited key=value text, keys in the given (stable) order."""
    return "\n".join(f"{k}={v}" for k, v in pairs) + "\n"


def profile_text(profile) -> str:
    """Comma-separated profile entries; sentinels print as -inf / inf."""
    out = []
    for v in profile:
        if isinstance(v, int):
            out.append(str(v))
        else:
            out.append("-inf" if v is BOTTOM else "inf")
    return ",".join(out)
