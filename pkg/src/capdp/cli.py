"""Command line front end: solve, check, bench, and gen.

Reports are line-delimited ``key=value`` text with a stable key order;
benches emit CSV.  Exit codes: 0 success, 1 usage, 2 parse or validation
failure, 3 oracle disagreement, 4 size-guard violation.
"""

from __future__ import annotations

import argparse
import csv
import pathlib
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ._kernels import warm_kernels
from .concave_conv import conv_concave_raw
from .dag import (
    dp_hop_profile,
    separated_dp_oracle,
    solve_lagrangian,
    solve_sparse_separated,
)
from .errors import (
    CapdpError,
    InfeasibleError,
    OracleDisagreementError,
    OverflowGuardError,
    ScaleLimitError,
)
from .generators import (
    KNAPSACK_FAMILIES,
    default_capacity,
    gen_few_distinct,
    gen_gap_dag,
    gen_random_monge,
    gen_sequence,
    gen_violation_dag,
)
from .io import (
    format_dag,
    format_items,
    format_monge,
    format_report,
    format_sequence,
    load_instance,
    profile_text,
)
from .knapsack import (
    KnapsackInstance,
    min_weight_per_value,
    solve_knapsack_bellman,
    solve_knapsack_td,
    solve_knapsack_value_domain,
)
from .monge import (
    gen_squared_monge,
    monge_all_k,
    monge_all_targets,
    monge_best_path,
    monge_dp_profile,
)
from .profiles import BOTTOM, TOP
from .rng import SplitMix64
from .unbounded import (
    UnboundedInstance,
    solve_unbounded_doubling,
    solve_unbounded_dp,
    solve_unbounded_steinitz,
    solve_unbounded_value_domain,
)

ALGOS = {
    "knapsack": ("bellman", "td", "value-domain"),
    "unbounded": ("dp", "doubling", "steinitz", "value-domain"),
    "dag": ("dp", "lagrangian"),
    "monge": ("dp", "best-path", "all-k", "all-targets"),
    "sequence": ("dp", "separated"),
}
ORACLES = {
    "knapsack": "bellman",
    "unbounded": "dp",
    "dag": "dp",
    "monge": "dp",
    "sequence": "dp",
}
SUITES = (
    "knapsack-scaling",
    "unbounded-T-independence",
    "conv-linearity",
    "separated-large",
    "monge-all-k",
)
GEN_FAMILIES = tuple(sorted(KNAPSACK_FAMILIES)) + (
    "squared-monge",
    "random-monge",
    "gap-dag",
    "violation-dag",
    "sequence",
)


class UsageError(Exception):
    """Bad command line; maps to exit code 1, unlike data errors."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(value) -> str:
    if value is BOTTOM:
        return "-inf"
    if value is TOP:
        return "inf"
    return str(int(value))


# --- solve -------------------------------------------------------------------


def _gate_flags(kind: str, algo: str, budget, mode: str) -> None:
    if algo not in ALGOS[kind]:
        raise UsageError(
            f"unknown algo {algo!r} for kind {kind!r} "
            f"(choose from {', '.join(ALGOS[kind])})")
    needs_budget = kind == "dag" or (
        kind == "monge" and algo in ("dp", "best-path", "all-targets"))
    if needs_budget and budget is None:
        raise UsageError(f"--budget is required for {kind} {algo}")
    if budget is not None and not needs_budget:
        raise UsageError(f"--budget does not apply to {kind} {algo}")
    if mode != "at-most" and not (
            kind == "dag" or (kind == "monge" and algo == "dp")):
        raise UsageError(f"--mode {mode} does not apply to {kind} {algo}")


def _solve_one(kind: str, algo: str, payload, budget, mode: str,
               want_profile: bool):
    """Run one solver; returns (value, profile or None, extra report pairs)."""
    if kind == "knapsack":
        if algo == "bellman":
            prof = solve_knapsack_bellman(payload)
            return prof[len(prof) - 1], prof, []
        if algo == "td":
            prof = solve_knapsack_td(payload)
            return prof[len(prof) - 1], prof, []
        value = solve_knapsack_value_domain(payload)
        prof = min_weight_per_value(payload) if want_profile else None
        return value, prof, []

    if kind == "unbounded":
        if algo == "dp":
            prof = solve_unbounded_dp(payload)
            return prof[len(prof) - 1], prof, []
        if algo == "doubling":
            if want_profile:
                value, lo, window = solve_unbounded_doubling(
                    payload, with_window=True)
                return value, window, [("window_lo", lo)]
            return solve_unbounded_doubling(payload), None, []
        if algo == "steinitz":
            return solve_unbounded_steinitz(payload), None, []
        return solve_unbounded_value_domain(payload), None, []

    if kind == "dag":
        g, s, t = payload.graph, payload.source, payload.target
        if algo == "dp":
            hp = dp_hop_profile(g, s, t, budget)
            seq = hp.at_most if mode == "at-most" else hp.exact
            return seq[budget], hp.exact, []
        try:
            res = solve_lagrangian(g, s, t, budget, mode)
        except InfeasibleError:
            return BOTTOM, None, []
        return res.value, None, [("penalty", res.certificate.lam),
                                 ("probes", res.probe_count)]

    if kind == "monge":
        g, s, t = payload.oracle, payload.source, payload.target
        if algo == "dp":
            hp = monge_dp_profile(g, s, t, budget)
            seq = hp.at_most if mode == "at-most" else hp.exact
            return seq[budget], hp.exact, []
        if algo == "best-path":
            try:
                return monge_best_path(g, s, t, budget), None, []
            except InfeasibleError:
                return BOTTOM, None, []
        if algo == "all-k":
            hp = monge_all_k(g, s, t)
            return hp.at_most[len(hp.at_most) - 1], hp.exact, []
        vp = monge_all_targets(g, s, budget)
        return vp[t], vp, []

    # sequence
    fn = separated_dp_oracle if algo == "dp" else solve_sparse_separated
    try:
        return fn(payload.values, payload.picks, payload.gap), None, []
    except InfeasibleError:
        return BOTTOM, None, []


def cmd_solve(args) -> int:
    _gate_flags(args.kind, args.algo, args.budget, args.mode)
    inst = load_instance(args.kind, args.path)
    t0 = time.perf_counter()
    value, profile, extras = _solve_one(args.kind, args.algo, inst.payload,
                                        args.budget, args.mode, args.profile)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    if args.profile and profile is None:
        raise UsageError(f"{args.kind} {args.algo} has no profile output")

    pairs = [("kind", args.kind), ("algo", args.algo), ("file", args.path)]
    pairs += list(inst.descriptor.items())
    if args.budget is not None:
        pairs.append(("budget", args.budget))
    if args.kind == "dag" or (args.kind == "monge" and args.algo == "dp"):
        pairs.append(("mode", args.mode))
    pairs += extras
    pairs.append(("value", _fmt(value)))
    if args.profile:
        pairs.append(("profile", profile_text(profile)))
    disagree = None
    if args.check:
        oracle = ORACLES[args.kind]
        obudget = args.budget
        if args.kind == "monge" and obudget is None:
            obudget = inst.payload.oracle.n
        ovalue = _solve_one(args.kind, oracle, inst.payload, obudget,
                            args.mode, False)[0]
        disagree = _fmt(value) != _fmt(ovalue)
        pairs.append(("oracle", _fmt(ovalue)))
        pairs.append(("agreement", "false" if disagree else "true"))
    pairs.append(("wall_ms", f"{wall_ms:.3f}"))
    sys.stdout.write(format_report(pairs))
    if disagree:
        raise OracleDisagreementError(
            f"{args.algo} returned {_fmt(value)}, oracle says {_fmt(ovalue)}")
    return 0


# --- check -------------------------------------------------------------------


def cmd_check(args) -> int:
    kind = args.kind
    if kind in ("dag", "monge"):
        if args.budget is None:
            raise UsageError(f"--budget is required to check {kind} instances")
    elif args.budget is not None:
        raise UsageError(f"--budget does not apply to {kind}")
    inst = load_instance(kind, args.path)
    payload, budget = inst.payload, args.budget

    t0 = time.perf_counter()
    values: dict[str, object] = {}
    if kind == "monge":
        g, s, t = payload.oracle, payload.source, payload.target
        values["dp"] = monge_dp_profile(g, s, t, budget).at_most[budget]
        try:
            values["best-path"] = monge_best_path(g, s, t, budget)
        except InfeasibleError:
            values["best-path"] = BOTTOM
        hp = monge_all_k(g, s, t)
        values["all-k"] = hp.at_most[min(budget, len(hp.at_most) - 1)]
        values["all-targets"] = monge_all_targets(g, s, budget)[t]
    else:
        for algo in ALGOS[kind]:
            values[algo] = _solve_one(kind, algo, payload, budget,
                                      "at-most", False)[0]
    wall_ms = (time.perf_counter() - t0) * 1000.0

    base = _fmt(values[ORACLES[kind]])
    agree = all(_fmt(v) == base for v in values.values())
    pairs = [("kind", kind), ("file", args.path)]
    pairs += list(inst.descriptor.items())
    if budget is not None:
        pairs.append(("budget", budget))
    pairs += [(f"value_{algo}", _fmt(v)) for algo, v in values.items()]
    pairs.append(("agreement", "true" if agree else "false"))
    pairs.append(("wall_ms", f"{wall_ms:.3f}"))
    sys.stdout.write(format_report(pairs))
    if not agree:
        raise OracleDisagreementError(
            f"solvers disagree on {args.path}: " +
            ", ".join(f"{a}={_fmt(v)}" for a, v in values.items()))
    return 0


# --- bench -------------------------------------------------------------------


def _concave_pair(size: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = SplitMix64(seed)
    out = []
    for _ in range(2):
        diffs = np.sort(rng.randints(-50, 50, size - 1))[::-1]
        start = rng.randint(0, 100)
        codes = np.empty(size, np.int64)
        codes[0] = start
        np.cumsum(diffs, out=codes[1:])
        codes[1:] += start
        out.append(codes)
    return out[0], out[1]


def _xor_checksum(codes: np.ndarray) -> int:
    return int(np.bitwise_xor.reduce(np.asarray(codes, np.int64)))


def _suite_cells(suite: str, scale: str, seed: int) -> list[tuple[str, str, dict]]:
    """Cell list: (case label, solver, params); params regenerate the work."""
    cells = []
    if suite == "knapsack-scaling":
        ns = [10_000, 100_000, 200_000] if scale == "full" else [2_000, 5_000]
        T = 100_000 if scale == "full" else 10_000
        for i, n in enumerate(ns):
            p = {"n": n, "T": T, "seed": seed + i}
            for solver in ("bellman", "td"):
                cells.append((f"n={n};D=16;T={T}", solver, p))
    elif suite == "unbounded-T-independence":
        caps = [10**6, 10**9] if scale == "full" else [10**4, 10**6]
        for T in caps:
            p = {"T": T, "seed": seed}
            cells.append((f"M=100;T={T}", "doubling", p))
        cells.append((f"M=100;T={caps[0]}", "dp", {"T": caps[0], "seed": seed}))
    elif suite == "conv-linearity":
        exps = (10, 12, 14, 16, 18, 19, 20) if scale == "full" else (10, 12, 14)
        for i, e in enumerate(exps):
            cells.append((f"size=2^{e}", "conv-concave",
                          {"size": 2**e, "seed": seed + i}))
    elif suite == "separated-large":
        if scale == "full":
            p = {"n": 10**6, "k": 10**3, "delta": 10, "seed": seed}
            cells.append((f"n={p['n']};k={p['k']};delta=10", "separated", p))
        else:
            p = {"n": 10**5, "k": 100, "delta": 10, "seed": seed}
            label = f"n={p['n']};k={p['k']};delta=10"
            cells.append((label, "separated", p))
            cells.append((label, "dp", p))
    else:  # monge-all-k
        ns = [200, 400] if scale == "full" else [60, 120]
        for i, n in enumerate(ns):
            p = {"n": n, "seed": seed + i}
            for solver in ("all-k", "dp"):
                cells.append((f"n={n};perturb=5", solver, p))
    return cells


def _run_cell(suite: str, solver: str, params: dict) -> tuple[str, float]:
    """Execute one (instance, solver) cell; returns (value text, seconds)."""
    if suite == "knapsack-scaling":
        items = gen_few_distinct(params["n"], params["seed"], distinct=16)
        inst = KnapsackInstance.build(items, params["T"])
        run = (solve_knapsack_bellman if solver == "bellman"
               else solve_knapsack_td)
        t0 = time.perf_counter()
        prof = run(inst)
        return _fmt(prof[len(prof) - 1]), time.perf_counter() - t0
    if suite == "unbounded-T-independence":
        rng = SplitMix64(params["seed"])
        items = list(zip(rng.randints(1, 100, 30).tolist(),
                         rng.randints(1, 1000, 30).tolist()))
        inst = UnboundedInstance.build(items, params["T"])
        if solver == "doubling":
            t0 = time.perf_counter()
            value = solve_unbounded_doubling(inst)
            return _fmt(value), time.perf_counter() - t0
        t0 = time.perf_counter()
        prof = solve_unbounded_dp(inst)
        return _fmt(prof[len(prof) - 1]), time.perf_counter() - t0
    if suite == "conv-linearity":
        a, b = _concave_pair(params["size"], params["seed"])
        t0 = time.perf_counter()
        out = conv_concave_raw(a, b)
        return str(_xor_checksum(out)), time.perf_counter() - t0
    if suite == "separated-large":
        values = gen_sequence(params["n"], params["seed"])
        run = (solve_sparse_separated if solver == "separated"
               else separated_dp_oracle)
        t0 = time.perf_counter()
        value = run(values, params["k"], params["delta"])
        return _fmt(value), time.perf_counter() - t0
    # monge-all-k
    n = params["n"]
    oracle = gen_squared_monge(n, perturb=5, seed=params["seed"])
    if solver == "all-k":
        t0 = time.perf_counter()
        hp = monge_all_k(oracle, 0, n)
        return str(_xor_checksum(hp.exact.codes)), time.perf_counter() - t0
    t0 = time.perf_counter()
    hp = monge_dp_profile(oracle, 0, n, n)
    return str(_xor_checksum(hp.exact.codes)), time.perf_counter() - t0


def cmd_bench(args) -> int:
    cells = _suite_cells(args.suite, args.scale, args.seed)
    warm_kernels()
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs,
                                 initializer=warm_kernels) as pool:
            futures = [pool.submit(_run_cell, args.suite, solver, params)
                       for _, solver, params in cells]
            results = [f.result() for f in futures]
    else:
        results = [_run_cell(args.suite, solver, params)
                   for _, solver, params in cells]

    rows = [(args.suite, case, solver, value, f"{secs * 1000.0:.3f}")
            for (case, solver, _), (value, secs) in zip(cells, results)]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(("suite", "case", "solver", "value", "wall_ms"))
            w.writerows(rows)
    else:
        w = csv.writer(sys.stdout)
        w.writerow(("suite", "case", "solver", "value", "wall_ms"))
        w.writerows(rows)
    return 0


# --- gen ---------------------------------------------------------------------


def cmd_gen(args) -> int:
    fam, n, seed = args.family, args.n, args.seed
    if fam in KNAPSACK_FAMILIES:
        items = KNAPSACK_FAMILIES[fam](n, seed)
        cap = args.cap if args.cap is not None else default_capacity(items)
        text = format_items(items, cap)
    elif fam == "squared-monge":
        text = format_monge(gen_squared_monge(n, perturb=args.perturb,
                                              seed=seed), 0, n)
    elif fam == "random-monge":
        text = format_monge(gen_random_monge(n, seed), 0, n)
    elif fam == "gap-dag":
        g, s, t = gen_gap_dag(n, seed, endpointed=False)
        text = format_dag(g, s, t, transitive=True)
    elif fam == "violation-dag":
        g, s, t = gen_violation_dag(n, seed)
        text = format_dag(g, s, t, transitive=True)
    else:  # sequence
        values = gen_sequence(n, seed, low=args.low, high=args.high)
        picks = args.k if args.k is not None else max(1, n // 20)
        text = format_sequence(values, picks, args.delta)
    if args.out:
        pathlib.Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# --- parser ------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="capdp",
                     description="Capacity-indexed DP solvers and benches.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("solve", help="run one solver on one instance file")
    p.add_argument("kind", choices=sorted(ALGOS))
    p.add_argument("algo")
    p.add_argument("path")
    p.add_argument("--budget", type=int, default=None,
                   help="hop budget (dag and monge kinds)")
    p.add_argument("--mode", choices=("at-most", "exact"), default="at-most")
    p.add_argument("--check", action="store_true",
                   help="cross-check against the kind's oracle")
    p.add_argument("--profile", action="store_true",
                   help="emit the full profile when the algo produces one")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("check", help="run every solver of a kind and compare")
    p.add_argument("kind", choices=sorted(ALGOS))
    p.add_argument("path")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("bench", help="run a benchmark suite, emit CSV")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--scale", choices=("small", "full"), default="full")
    p.add_argument("--jobs", type=int, default=1,
                   help="run cells in separate processes when > 1")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("family", choices=GEN_FAMILIES)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=None,
                   help="knapsack capacity override")
    p.add_argument("--k", type=int, default=None, help="sequence pick count")
    p.add_argument("--delta", type=int, default=1, help="sequence gap")
    p.add_argument("--low", type=int, default=-10000)
    p.add_argument("--high", type=int, default=10000)
    p.add_argument("--perturb", type=int, default=0,
                   help="squared-monge weight jitter")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(fn=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except SystemExit as exc:  # --help
        code = exc.code
        return 0 if code in (0, None) else int(code)
    try:
        return args.fn(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except (ScaleLimitError, OverflowGuardError) as exc:
        sys.stderr.write(f"guard violation: {exc}\n")
        return 4
    except OracleDisagreementError as exc:
        sys.stderr.write(f"oracle disagreement: {exc}\n")
        return 3
    except CapdpError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
