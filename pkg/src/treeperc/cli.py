"""Command-line entry point.

    treeperc SUBCOMMAND --config FILE [overrides...]

Subcommands: gball, connprob, triangle, offpointa, schramm, invade, curve,
verify.  Each writes <out>/<subcommand>.csv plus a JSON sidecar; reruns
with an identical resolved config are byte-identical, and the worker count
never changes an estimate (trials are seeded by global index, workers only
partition them).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import rng
from .config import (ExperimentConfig, UsageError, apply_overrides,
                     load_config, validate)
from .diagrams import offpointa_check, open_triangle_mixed, reduced_triangle
from .estimators import ClassFunction, connection_prob_table, estimate_G
from .invasion import critical_curve, invade
from .records import Row, write_rows, write_sidecar
from .schramm import (SchrammParams, connection_vs_2_over_m, invariance_test,
                      return_probability, transience_threshold, w_root_degree)
from .stats import mean_stderr
from .trees import make_graph


def _chunks(total: int, parts: int):
    """Split range(total) into at most `parts` contiguous (start, count) blocks."""
    parts = max(1, min(parts, total))
    base, extra = divmod(total, parts)
    out = []
    start = 0
    for i in range(parts):
        n = base + (1 if i < extra else 0)
        if n:
            out.append((start, n))
        start += n
    return out


def _run_blocks(fn, blocks, workers):
    if workers <= 1 or len(blocks) <= 1:
        return [fn(b) for b in blocks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, blocks))


def _gball_block(task):
    cfg, (start, count) = task
    graph = make_graph(cfg.graph, cfg.d)
    est = estimate_G(graph, cfg.p1, cfg.p2, cfg.r, count, cfg.seed,
                     n_cap=cfg.n_cap, first_trial=start)
    return est.samples, round(est.truncated_fraction * count)


def _cmd_gball(cfg: ExperimentConfig):
    blocks = [(cfg, b) for b in _chunks(cfg.trials, cfg.workers)]
    parts = _run_blocks(_gball_block, blocks, cfg.workers)
    samples = np.vstack([p[0] for p in parts])
    truncated = sum(p[1] for p in parts)
    rows = []
    h = cfg.config_hash()
    for r in range(cfg.r + 1):
        m, se = mean_stderr(samples[:, r])
        rows.append(Row(cfg.graph, cfg.d, "G", p1=cfg.p1, p2=cfg.p2, r=r,
                        estimate_low=m,
                        estimate_high=m if truncated == 0 else None,
                        stderr=se, trials=cfg.trials, censored=truncated,
                        seed=cfg.seed, config_hash=h))
    return rows


def _connprob_block(task):
    cfg, (start, count) = task
    graph = make_graph(cfg.graph, cfg.d)
    table = connection_prob_table(graph, cfg.p1, cfg.p2,
                                  [tuple(s) for s in cfg.specs], count,
                                  cfg.seed, r_cap=cfg.r, n_cap=cfg.n_cap,
                                  first_trial=start)
    return {s: (e.hits, e.censored) for s, e in table.entries.items()}


def _cmd_connprob(cfg: ExperimentConfig):
    blocks = [(cfg, b) for b in _chunks(cfg.trials, cfg.workers)]
    parts = _run_blocks(_connprob_block, blocks, cfg.workers)
    rows = []
    h = cfg.config_hash()
    from .stats import binomial_stderr

    for s in [tuple(x) for x in cfg.specs]:
        hits = sum(p[s][0] for p in parts)
        cens = sum(p[s][1] for p in parts)
        n = cfg.trials
        rows.append(Row(cfg.graph, cfg.d, "connprob", p1=cfg.p1, p2=cfg.p2,
                        k1=s[0], k2=s[1], r=cfg.r,
                        estimate_low=hits / n, estimate_high=(hits + cens) / n,
                        stderr=binomial_stderr(hits + cens // 2, n),
                        trials=n, censored=cens, seed=cfg.seed, config_hash=h))
    return rows


def _cmd_triangle(cfg: ExperimentConfig):
    graph = make_graph(cfg.graph, cfg.d)
    w = tuple(cfg.w) if cfg.w else (0, 0)
    r = cfg.r
    bmax = 2 * r + w[0] + w[1]
    specs_r = [(i, j) for i in range(r + 1) for j in range(r + 1 - i)]
    specs_mid = [(i, j) for i in range(bmax + 1) for j in range(bmax + 1 - i)]
    g_r = connection_prob_table(graph, cfg.p1, cfg.p2, specs_r,
                                cfg.table_trials, rng.mix64(cfg.seed, 1, rng.TRIANGLE),
                                r_cap=r, n_cap=cfg.n_cap)
    g_mid = connection_prob_table(graph, cfg.p1, cfg.p2, specs_mid,
                                  cfg.table_trials, rng.mix64(cfg.seed, 2, rng.TRIANGLE),
                                  n_cap=cfg.n_cap)
    lo = open_triangle_mixed(graph.d, g_r.lower_fn(), g_mid.lower_fn(),
                             g_r.lower_fn(), w, r)
    hi = open_triangle_mixed(graph.d, g_r.upper_fn(), g_mid.upper_fn(),
                             g_r.upper_fn(), w, r)
    cens = sum(e.censored for e in g_mid.entries.values())
    quantity = "triangle_closed" if w == (0, 0) else "triangle_open"
    return [Row(cfg.graph, cfg.d, quantity, p1=cfg.p1, p2=cfg.p2, k1=w[0],
                k2=w[1], r=r, estimate_low=float(lo), estimate_high=float(hi),
                stderr=None, trials=cfg.table_trials, censored=cens,
                seed=cfg.seed, config_hash=cfg.config_hash())]


def _cmd_offpointa(cfg: ExperimentConfig):
    graph = make_graph(cfg.graph, cfg.d)
    rep = offpointa_check(graph, cfg.p1, cfg.p2, cfg.r, tuple(cfg.w),
                          cfg.trials, cfg.seed, n_cap=cfg.n_cap,
                          table_trials=cfg.table_trials)
    h = cfg.config_hash()
    common = dict(p1=cfg.p1, p2=cfg.p2, k1=cfg.w[0], k2=cfg.w[1], r=cfg.r,
                  trials=cfg.trials, seed=cfg.seed, config_hash=h)
    return [
        Row(cfg.graph, cfg.d, "offpointa_lhs", estimate_low=rep.lhs_lower,
            estimate_high=rep.lhs_upper, stderr=rep.lhs_stderr,
            censored=rep.censored_trials, **common),
        Row(cfg.graph, cfg.d, "offpointa_rhs", estimate_low=rep.rhs,
            estimate_high=rep.rhs, stderr=rep.sigma_combined, **common),
        Row(cfg.graph, cfg.d, "offpointa_nabla", estimate_low=rep.nabla_upper,
            estimate_high=rep.nabla_upper, stderr=rep.nabla_sigma, **common),
    ]


def _cmd_schramm(cfg: ExperimentConfig):
    graph = make_graph(cfg.graph, cfg.d)
    rows = []
    h = cfg.config_hash()
    spec = tuple(cfg.specs[0])
    m = transience_threshold(spec, cfg.d, cfg.c)
    if "degree" in cfg.checks:
        params = SchrammParams(spec, m, 1)
        rep = w_root_degree(graph, params, cfg.p1, cfg.p2, cfg.trials,
                            cfg.seed, n_cap=cfg.n_cap)
        rows.append(Row(cfg.graph, cfg.d, "schramm_degree", p1=cfg.p1,
                        p2=cfg.p2, k1=spec[0], k2=spec[1],
                        estimate_low=rep.mean_lower, estimate_high=rep.mean_upper,
                        stderr=rep.stderr_upper, trials=cfg.trials,
                        censored=rep.censored_children, seed=cfg.seed,
                        config_hash=h))
    if "bound" in cfg.checks:
        rep = connection_vs_2_over_m(graph, spec, cfg.p1, cfg.p2, cfg.trials,
                                     cfg.seed, c=cfg.c, n_cap=cfg.n_cap)
        rows.append(Row(cfg.graph, cfg.d, "schramm_bound", p1=cfg.p1,
                        p2=cfg.p2, k1=spec[0], k2=spec[1],
                        estimate_low=rep.estimate_lower,
                        estimate_high=rep.estimate_upper, stderr=rep.stderr,
                        trials=cfg.trials, censored=None, seed=cfg.seed,
                        config_hash=h))
    if "return" in cfg.checks:
        rep = return_probability(graph, spec, cfg.steps, cfg.trials, cfg.seed)
        rows.append(Row(cfg.graph, cfg.d, "schramm_return", p1=cfg.p1,
                        p2=cfg.p2, k1=spec[0], k2=spec[1], r=cfg.steps,
                        estimate_low=rep.joint, estimate_high=rep.joint,
                        stderr=rep.joint_stderr, trials=cfg.trials,
                        seed=cfg.seed, config_hash=h))
    if "invariance" in cfg.checks:
        params = SchrammParams(spec, m, max(2, cfg.depth))
        rep = invariance_test(graph, params, cfg.p1, cfg.p2, cfg.trials,
                              cfg.seed, n_cap=cfg.n_cap)
        from .records import atomic_write_text

        report_path = os.path.join(cfg.out, "invariance.json")
        atomic_write_text(report_path,
                          json.dumps(rep.as_dict(), indent=2, sort_keys=True) + "\n")
        rows.append(Row(cfg.graph, cfg.d, "invariance_edge_p", p1=cfg.p1,
                        p2=cfg.p2, k1=spec[0], k2=spec[1],
                        estimate_low=rep.edge_p, estimate_high=rep.edge_p,
                        trials=cfg.trials, seed=cfg.seed, config_hash=h))
        rows.append(Row(cfg.graph, cfg.d, "invariance_degree_p", p1=cfg.p1,
                        p2=cfg.p2, k1=spec[0], k2=spec[1],
                        estimate_low=rep.degree_p, estimate_high=rep.degree_p,
                        trials=cfg.trials, seed=cfg.seed, config_hash=h))
    return rows


def _cmd_invade(cfg: ExperimentConfig):
    graph = make_graph(cfg.graph, cfg.d)
    vals = []
    for s in cfg.seeds:
        res = invade(graph, cfg.rho, cfg.target_size, s)
        vals.append(res.p1_hat)
    m = float(np.mean(vals))
    spread = float(max(abs(v - m) for v in vals))
    return [Row(cfg.graph, cfg.d, "pc_invade", rho=cfg.rho,
                estimate_low=min(vals), estimate_high=max(vals), stderr=spread,
                trials=len(cfg.seeds), censored=0, seed=cfg.seed,
                config_hash=cfg.config_hash())]


def _curve_point(task):
    cfg, rho, seed = task
    graph = make_graph(cfg.graph, cfg.d)
    res = invade(graph, rho, cfg.target_size, seed)
    return rho, seed, res.p1_hat, res.budget_hit


def _cmd_curve(cfg: ExperimentConfig):
    tasks = [(cfg, rho, s) for rho in cfg.rho_grid for s in cfg.seeds]
    results = _run_blocks(_curve_point, tasks, cfg.workers)
    by_rho: dict = {}
    for rho, seed, p1, bad in results:
        by_rho.setdefault(rho, []).append((seed, p1, bad))
    rows = []
    h = cfg.config_hash()
    for rho in cfg.rho_grid:
        entries = by_rho[rho]
        good = [p1 for _, p1, bad in entries if not bad]
        failures = len(entries) - len(good)
        if good:
            m = float(np.mean(good))
            spread = float(max(abs(v - m) for v in good)) if len(good) > 1 else 0.0
            rows.append(Row(cfg.graph, cfg.d, "curve_point", p1=m,
                            p2=min(1.0, rho * m), rho=rho,
                            estimate_low=m - spread, estimate_high=m + spread,
                            stderr=spread, trials=len(good), censored=failures,
                            seed=cfg.seed, config_hash=h))
        else:
            rows.append(Row(cfg.graph, cfg.d, "curve_point", rho=rho,
                            trials=0, censored=failures, seed=cfg.seed,
                            config_hash=h))
    return rows


def _cmd_verify(cfg: ExperimentConfig) -> int:
    from .acceptance import run_all

    results = run_all(workers=cfg.workers)
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"[{status}] criterion {res.number:2d} {res.name}: {res.detail}")
        failed += not res.passed
    print(f"{len(results) - failed}/{len(results)} acceptance criteria passed")
    return 1 if failed else 0


_COMMANDS = {
    "gball": _cmd_gball,
    "connprob": _cmd_connprob,
    "triangle": _cmd_triangle,
    "offpointa": _cmd_offpointa,
    "schramm": _cmd_schramm,
    "invade": _cmd_invade,
    "curve": _cmd_curve,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treeperc",
        description="Critical percolation laboratory on products of regular trees")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="TOML config file")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--workers", type=int, help="process count")
        p.add_argument("--out", help="output directory")
        p.add_argument("--graph", choices=("tree", "TxT", "TxZ"))
        p.add_argument("--d", type=int, help="tree degree")

    for name, descr in [
        ("gball", "chemical ball growth G(r)"),
        ("connprob", "class connection probabilities"),
        ("triangle", "restricted triangle from Monte Carlo tables"),
        ("offpointa", "off-method two-sided inequality check"),
        ("schramm", "particle-tree degree, bound, return and invariance checks"),
        ("invade", "invasion estimate of the critical ray position"),
        ("curve", "critical curve over a grid of ray slopes"),
        ("verify", "run the acceptance suite"),
    ]:
        p = sub.add_parser(name, help=descr)
        common(p)
        if name in ("gball", "connprob", "triangle", "offpointa", "schramm"):
            p.add_argument("--p1", type=float)
            p.add_argument("--p2", type=float)
            p.add_argument("--trials", type=int)
            p.add_argument("--n-cap", dest="n_cap", type=int)
        if name in ("gball", "connprob", "triangle", "offpointa"):
            p.add_argument("--r", type=int)
        if name in ("triangle", "offpointa"):
            p.add_argument("--w", type=int, nargs=2)
            p.add_argument("--table-trials", dest="table_trials", type=int)
        if name == "schramm":
            p.add_argument("--spec", dest="specs", type=int, nargs=2,
                           action="append")
            p.add_argument("--checks", nargs="+")
            p.add_argument("--depth", type=int)
            p.add_argument("--c", type=float)
            p.add_argument("--steps", type=int)
        if name == "connprob":
            p.add_argument("--spec", dest="specs", type=int, nargs=2,
                           action="append")
        if name in ("invade", "curve"):
            p.add_argument("--target-size", dest="target_size", type=int)
            p.add_argument("--seeds", type=int, nargs="+")
        if name == "invade":
            p.add_argument("--rho", type=float)
        if name == "curve":
            p.add_argument("--rho-grid", dest="rho_grid", type=float, nargs="+")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(getattr(args, "config", None))
        cfg.command = args.command
        apply_overrides(cfg, args)
        cfg = validate(cfg)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if cfg.command == "verify":
        return _cmd_verify(cfg)
    started = time.time()
    rows = _COMMANDS[cfg.command](cfg)
    os.makedirs(cfg.out, exist_ok=True)
    csv_path = os.path.join(cfg.out, f"{cfg.command}.csv")
    write_rows(csv_path, rows)
    write_sidecar(os.path.join(cfg.out, f"{cfg.command}.json"), cfg.command,
                  cfg.config_hash(), cfg.resolved(), len(rows), started)
    print(f"wrote {len(rows)} rows to {csv_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
