"""Run orchestration: configuration, persistence, checkpoint and resume.

A run directory holds

``manifest.json``
    config echo, package version, RNG derivation rule, member counts, status
    and wall time.
``members.jsonl``
    one JSON object per member, in member order.
``summary.csv``
    the same per-member records as a table (one row per member).
``report.json``
    the aggregate report of the experiment.

Members are written chunk by chunk and the manifest is rewritten after each
chunk, so an interrupted run can be resumed from the last completed chunk.
Floats are written with ``repr``, which round-trips exactly.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from . import experiments as ex
from .errors import ConfigError
from .random_data import ModelParams
from .rng import DERIVATION_RULE

SCHEMA_VERSION = 1
KINDS = ("sample", "evolve", "invariance", "converge", "smoothing", "tails", "strichartz")
MODEL_KEYS = ("alpha", "N", "M", "coupling")
ENSEMBLE_KEYS = ("T", "dt", "count", "master_seed", "lambda_grid", "observables", "stride", "data")
TAIL_KEYS = ("quantity", "p", "q", "s", "cutoffs", "value")
TOP_KEYS = ("schema_version", "kind", "parameters", "output_dir", "resume")


@dataclass
class RunConfig:
    kind: str
    parameters: dict = field(default_factory=dict)
    output_dir: Optional[str] = None
    resume: bool = False
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {"schema_version": self.schema_version, "kind": self.kind,
                "parameters": self.parameters, "output_dir": self.output_dir,
                "resume": self.resume}

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        for key in data:
            if key not in TOP_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
        if data.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {data.get('schema_version')!r}")
        if "kind" not in data:
            raise ConfigError("missing config key 'kind'")
        cfg = cls(kind=data["kind"], parameters=dict(data.get("parameters", {})),
                  output_dir=data.get("output_dir"), resume=bool(data.get("resume", False)))
        build_experiment(cfg)
        return cfg

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _split(params: dict, allowed: tuple, kind: str) -> dict:
    for key in params:
        if key not in allowed:
            raise ConfigError(f"unknown parameter {key!r} for experiment {kind!r}")
    return params


def _take(params: dict, keys: tuple) -> dict:
    return {k: params[k] for k in keys if k in params}


def _build(factory, kwargs, kind):
    try:
        return factory(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {kind!r}: {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"bad parameters for {kind!r}: {exc}") from None


def _ensemble(params: dict, kind: str) -> ex.EnsembleConfig:
    model = _build(ModelParams, _take(params, MODEL_KEYS), kind)
    ens = _take(params, ENSEMBLE_KEYS)
    for key in ("lambda_grid", "observables"):
        if isinstance(ens.get(key), list):
            ens[key] = tuple(ens[key])
    if ens.get("count", 2) < 1:
        raise ConfigError("parameter 'count' must be positive")
    return _build(ex.EnsembleConfig, dict(params=model, **ens), kind)


@dataclass(frozen=True)
class Experiment:
    """Bound member/summary functions of a configured experiment."""

    kind: str
    config: object
    count: int
    records: object
    summary: object


def build_experiment(cfg: RunConfig) -> Experiment:
    kind, p = cfg.kind, cfg.parameters
    if kind not in KINDS:
        raise ConfigError(f"unknown experiment kind {kind!r}; expected one of {', '.join(KINDS)}")
    if kind in ("sample", "evolve", "invariance", "tails"):
        allowed = MODEL_KEYS + ENSEMBLE_KEYS + (("level",) if kind == "invariance" else ()) \
            + (TAIL_KEYS if kind == "tails" else ())
        _split(p, allowed, kind)
        ens = _ensemble(p, kind)
        if kind == "sample":
            return Experiment(kind, ens, ens.count, lambda lo, hi: ex.sample_records(ens, lo, hi),
                              lambda recs: ex.sample_summary(ens, recs))
        if kind == "evolve":
            return Experiment(kind, ens, ens.count, lambda lo, hi: ex.evolve_records(ens, lo, hi),
                              lambda recs: ex.evolve_summary(ens, recs))
        if kind == "invariance":
            level = float(p.get("level", 0.01))
            return Experiment(kind, ens, ens.count,
                              lambda lo, hi: ex.invariance_records(ens, lo, hi),
                              lambda recs: ex.invariance_summary(ens, recs, level).to_dict())
        tail_kwargs = _take(p, TAIL_KEYS)
        if "quantity" not in tail_kwargs:
            raise ConfigError("missing parameter 'quantity' for experiment 'tails'")
        spec = _build(ex.TailSpec, tail_kwargs, kind)
        try:
            ex.check_tail_admissible(spec)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return Experiment(kind, (ens, spec), ens.count,
                          lambda lo, hi: ex.tail_records(ens, spec, lo, hi),
                          lambda recs: ex.tail_summary(ens, spec, recs).to_dict())
    if kind in ("converge", "smoothing"):
        fields = tuple(f.name for f in dataclasses.fields(ex.StudyConfig))
        _split(p, fields, kind)
        kw = dict(p)
        if p.get("count", 1) < 1:
            raise ConfigError("parameter 'count' must be positive")
        for key in ("N_list", "sigma"):
            if isinstance(kw.get(key), list):
                kw[key] = tuple(kw[key])
        study = _build(ex.StudyConfig, kw, kind)
        if kind == "converge":
            if not 0.0 < study.s < 0.5:
                raise ConfigError(f"parameter 's' must satisfy 0 < s < 1/2 (got {study.s})")
            return Experiment(kind, study, study.count,
                              lambda lo, hi: ex.convergence_records(study, lo, hi),
                              lambda recs: ex.convergence_summary(study, recs).to_dict())
        return Experiment(kind, study, study.count,
                          lambda lo, hi: ex.smoothing_records(study, lo, hi),
                          lambda recs: ex.smoothing_summary(study, recs).to_dict())
    fields = tuple(f.name for f in dataclasses.fields(ex.StrichartzConfig))
    _split(p, fields, kind)
    if p.get("count", 1) < 1:
        raise ConfigError("parameter 'count' must be positive")
    sc = _build(ex.StrichartzConfig, p, kind)
    try:
        ex.check_strichartz_admissible(sc)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return Experiment(kind, sc, sc.count, lambda lo, hi: ex.strichartz_records(sc, lo, hi),
                      lambda recs: ex.strichartz_summary(sc, recs).to_dict())


# -- persistence --------------------------------------------------------------

def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, allow_nan=True)


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_summary_csv(path: Path, records: list) -> None:
    buf = io.StringIO()
    if records:
        columns = list(records[0].keys())
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in records:
            writer.writerow([_csv_cell(r[c]) for c in columns])
    path.write_text(buf.getvalue())


def read_members(path: Path, limit: Optional[int] = None) -> list:
    if not path.exists():
        return []
    out = []
    with path.open() as fh:
        for line in fh:
            if limit is not None and len(out) >= limit:
                break
            if line.endswith("\n"):
                out.append(json.loads(line))
    return out


def _write_manifest(out: Path, cfg: RunConfig, count: int, completed: int, status: str,
                    wall: float) -> None:
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "package_version": __version__,
        "config": cfg.to_dict() | {"output_dir": None, "resume": False},
        "rng": {"master_seed": _master_seed(cfg), "derivation_rule": DERIVATION_RULE},
        "count": count,
        "completed": completed,
        "status": status,
        "wall_time": wall,
    }
    tmp = out / "manifest.json.tmp"
    tmp.write_text(json.dumps(manifest, sort_keys=True, indent=2))
    os.replace(tmp, out / "manifest.json")


def _master_seed(cfg: RunConfig):
    return cfg.parameters.get("master_seed", 0)


def resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        threads = int(os.environ.get("NLW_THREADS", "1"))
    return max(1, int(threads))


def run(cfg: RunConfig, output_dir: Optional[str] = None, resume: Optional[bool] = None,
        threads: Optional[int] = None, max_members: Optional[int] = None) -> int:
    """Execute ``cfg`` and persist its artifacts; return the process exit status.

    ``max_members`` stops after that many members have been written (at a chunk
    boundary), leaving a resumable partial run.
    """
    exp = build_experiment(cfg)
    out_dir = output_dir or cfg.output_dir
    if not out_dir:
        raise ConfigError("no output directory given")
    resume = cfg.resume if resume is None else resume
    threads = resolve_threads(threads)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest_path = out / "manifest.json"
    members_path = out / "members.jsonl"
    completed = 0
    elapsed = 0.0
    if manifest_path.exists():
        if not resume:
            raise FileExistsError(f"{out} already holds a run; pass --resume to continue it")
        manifest = json.loads(manifest_path.read_text())
        if manifest.get("package_version") != __version__:
            raise RuntimeError(f"manifest was written by version {manifest.get('package_version')}"
                               f", this is {__version__}")
        stored = RunConfig.from_dict(manifest["config"])
        if stored.kind != cfg.kind or stored.parameters != json.loads(_dump(cfg.parameters)):
            raise ConfigError("resume config differs from the stored run configuration")
        completed = int(manifest["completed"])
        elapsed = float(manifest.get("wall_time", 0.0))
        kept = read_members(members_path, completed)
        if len(kept) != completed:
            raise RuntimeError("members.jsonl is shorter than the manifest claims")
        members_path.write_text("".join(_dump(r) + "\n" for r in kept))
    elif members_path.exists():
        raise FileExistsError(f"{out} holds member records without a manifest")

    start = time.perf_counter()
    _write_manifest(out, cfg, exp.count, completed, "partial", elapsed)
    stop = exp.count if max_members is None else min(exp.count, max_members)
    bounds = list(ex.chunk_bounds(completed, stop))
    with members_path.open("a") as fh:
        pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
        try:
            results = (pool.map(lambda b: exp.records(*b), bounds) if pool
                       else (exp.records(*b) for b in bounds))
            for (lo, hi), recs in zip(bounds, results):
                fh.write("".join(_dump(r) + "\n" for r in recs))
                fh.flush()
                completed = hi
                _write_manifest(out, cfg, exp.count, completed, "partial",
                                elapsed + time.perf_counter() - start)
        finally:
            if pool:
                pool.shutdown(wait=True)
    if completed < exp.count:
        return 0
    records = read_members(members_path)
    write_summary_csv(out / "summary.csv", records)
    report = exp.summary(records)
    (out / "report.json").write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    _write_manifest(out, cfg, exp.count, completed, "complete",
                    elapsed + time.perf_counter() - start)
    return 0
