"""Experiment configuration: TOML files, CLI overrides, validation, hashing.

A config file has an [experiment] table (graph, d, seed, out, workers) and a
[params] table (densities, radii, class specs, trial counts, caps).  Every
field can be overridden from the command line; validation happens after the
merge, per subcommand, and failures raise UsageError before anything runs.
The config hash fingerprints the fully resolved experiment so result rows
can be traced to the exact settings that produced them.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass, field, fields

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

GRAPH_KINDS = ("tree", "TxT", "TxZ")
COMMANDS = ("gball", "connprob", "triangle", "offpointa", "schramm",
            "invade", "curve", "verify")


class UsageError(ValueError):
    """Bad or missing configuration; reported without a traceback."""


@dataclass
class ExperimentConfig:
    command: str = ""
    graph: str = "TxT"
    d: int = 3
    seed: int = 1
    out: str = "results"
    workers: int = 1

    p1: float | None = None
    p2: float | None = None
    r: int | None = None
    trials: int | None = None
    n_cap: int = 1_000_000
    specs: list = field(default_factory=list)
    w: list = field(default_factory=list)
    rho: float | None = None
    rho_grid: list = field(default_factory=list)
    target_size: int | None = None
    seeds: list = field(default_factory=list)
    depth: int = 2
    c: float = 0.5
    steps: int = 1
    checks: list = field(default_factory=lambda: ["degree", "bound", "invariance"])
    caps: list = field(default_factory=lambda: [2500, 5000, 10000, 20000])
    table_trials: int = 2000

    def resolved(self) -> dict:
        out = {}
        for f in fields(self):
            out[f.name] = getattr(self, f.name)
        return out

    def config_hash(self) -> str:
        """Fingerprint of the experiment identity.

        Excludes workers and out: they steer execution, not the estimand,
        and results must be byte-identical across worker counts.
        """
        payload = {k: v for k, v in self.resolved().items()
                   if k not in ("workers", "out")}
        blob = json.dumps(payload, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]


def load_config(path: str | None) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if path is None:
        return cfg
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as e:
        raise UsageError(f"config file is not valid TOML: {e}")
    known = {f.name for f in fields(ExperimentConfig)}
    for section in ("experiment", "params"):
        for key, value in data.get(section, {}).items():
            if key not in known:
                raise UsageError(f"unknown config key [{section}] {key}")
            setattr(cfg, key, value)
    for key in data:
        if key not in ("experiment", "params"):
            raise UsageError(f"unknown config section [{key}]")
    return cfg


def apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    known = {f.name for f in fields(ExperimentConfig)}
    for key, value in vars(args).items():
        if key in known and value is not None:
            setattr(cfg, key, value)
    return cfg


def _require(cfg: ExperimentConfig, *names):
    for n in names:
        v = getattr(cfg, n)
        if v is None or (isinstance(v, list) and not v):
            raise UsageError(f"{cfg.command}: missing required parameter {n!r}")


def _check_prob(name, v):
    if not (0.0 <= v <= 1.0):
        raise UsageError(f"{name} must lie in [0, 1], got {v}")


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.command not in COMMANDS:
        raise UsageError(f"unknown command {cfg.command!r}")
    if cfg.graph not in GRAPH_KINDS:
        raise UsageError(f"graph must be one of {GRAPH_KINDS}, got {cfg.graph!r}")
    if cfg.d < 3:
        raise UsageError("d must be at least 3")
    if cfg.workers < 1:
        raise UsageError("workers must be at least 1")
    if cfg.n_cap < 1:
        raise UsageError("n_cap must be positive")
    needs_p = cfg.command in ("gball", "connprob", "triangle", "offpointa", "schramm")
    if needs_p:
        _require(cfg, "p1")
        if cfg.p2 is None:
            cfg.p2 = cfg.p1
        _check_prob("p1", cfg.p1)
        _check_prob("p2", cfg.p2)
    if cfg.command in ("gball", "connprob", "offpointa", "schramm"):
        _require(cfg, "trials")
        if cfg.trials < 1:
            raise UsageError(f"{cfg.command}: trials must be at least 1")
    if cfg.command == "gball":
        _require(cfg, "r")
        if cfg.r < 1:
            raise UsageError("gball: r must be at least 1")
    if cfg.command == "connprob":
        _require(cfg, "specs")
        for s in cfg.specs:
            if len(s) != 2 or s[0] < 0 or s[1] < 0:
                raise UsageError(f"connprob: bad class spec {s}")
    if cfg.command in ("triangle", "offpointa"):
        _require(cfg, "r")
        if cfg.command == "offpointa":
            _require(cfg, "w")
        if cfg.w and (len(cfg.w) != 2 or cfg.w[0] < 0 or cfg.w[1] < 0):
            raise UsageError(f"{cfg.command}: bad anchor class {cfg.w}")
        if cfg.graph != "TxT":
            raise UsageError(f"{cfg.command} runs on TxT")
    if cfg.command == "schramm":
        _require(cfg, "specs")
        bad = [c for c in cfg.checks if c not in ("degree", "bound", "invariance", "return")]
        if bad:
            raise UsageError(f"schramm: unknown checks {bad}")
        if cfg.graph != "TxT":
            raise UsageError("schramm runs on TxT")
    if cfg.command in ("invade", "curve"):
        _require(cfg, "target_size")
        if cfg.target_size < 4:
            raise UsageError("target_size must be at least 4")
        if not cfg.seeds:
            cfg.seeds = [cfg.seed]
        if cfg.command == "invade":
            if cfg.rho is None:
                cfg.rho = 1.0
            if cfg.rho <= 0:
                raise UsageError("rho must be positive")
        else:
            _require(cfg, "rho_grid")
            if any(x <= 0 for x in cfg.rho_grid):
                raise UsageError("rho_grid entries must be positive")
    return cfg
