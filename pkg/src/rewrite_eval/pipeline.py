"""Config-driven cascade runs: validate a YAML/JSON config, run its stages, evaluate every stage.

A minimal config::

    task: grammar
    data:
      source: test.src
      refs: [test.ref0, test.ref1]
    backends:
      base: {type: file, path: stage1.txt}
    stages:
      - backend: base
    output:
      intermediate_dir: out/intermediate
      report: out/report.json

Relative paths resolve against the config file's directory. Each stage may
override ``template`` (prefix, separator, completion_cue) and ``decoding``
(strategy, temperature, max_new_tokens, stop_marker); the defaults are the
task's prompt format and greedy decoding.
"""

from __future__ import annotations

import copy
import time
from dataclasses import asdict
from pathlib import Path
from typing import Callable, Optional

import yaml

from .corpus import Task, attach_references, load_m2, load_parallel
from .errors import ConfigError
from .gec_metrics import references_from_gold
from .hallucination import HeuristicRecognizer, load_stoplist
from .inference import (
    CascadeJob,
    DecodingConfig,
    PromptTemplate,
    Stage,
    build_backend,
    default_decoding,
    default_template,
    run_cascade,
)
from .inference.cascade import MAX_STAGES
from .report import MetricReport, config_hash, evaluate, file_digest, write_csv, write_report

__all__ = ["load_config", "run_config"]

_TOP_LEVEL = {"task", "data", "backends", "stages", "output", "metrics", "max_workers"}
# settings that cannot change results and are kept out of the config hash
_NON_SEMANTIC = {"max_workers"}


def load_config(path, backend_config=None) -> dict:
    """Read and validate a cascade config; returns a normalized copy with absolute paths."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML ({exc})") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    unknown = set(raw) - _TOP_LEVEL
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    base = path.parent
    extra = {}
    if backend_config is not None:
        declared, extra = _read_backend_config(backend_config), load_backend_config(backend_config)
        # the hash sees declarations as written, so moving the run directory keeps it stable
        raw = {**raw, "backends": {**(raw.get("backends") or {}), **declared}}
    cfg = copy.deepcopy(raw)
    if extra:
        cfg["backends"] = {**cfg["backends"], **extra}

    try:
        task = Task(cfg.get("task"))
    except ValueError:
        raise ConfigError(f"{path}: 'task' must be 'grammar' or 'simplification'") from None
    cfg["task"] = task.value

    data = cfg.get("data") or {}
    if "source" not in data and "gold_m2" not in data:
        raise ConfigError(f"{path}: data.source (or data.gold_m2) is required")
    for key in ("source", "gold_m2"):
        if data.get(key) is not None:
            data[key] = str(base / data[key])
    data["refs"] = [str(base / r) for r in data.get("refs") or []]
    for p in [data.get("source"), data.get("gold_m2"), *data["refs"]]:
        if p is not None and not Path(p).is_file():
            raise ConfigError(f"{path}: input file {p} not found")
    if not data["refs"] and data.get("gold_m2") is None:
        raise ConfigError(f"{path}: evaluation needs data.refs or data.gold_m2")
    cfg["data"] = data

    backends = cfg.get("backends") or {}
    if not isinstance(backends, dict) or not backends:
        raise ConfigError(f"{path}: at least one backend must be declared")
    stages = cfg.get("stages") or []
    if not isinstance(stages, list) or not 1 <= len(stages) <= MAX_STAGES:
        raise ConfigError(f"{path}: 'stages' must list 1 to {MAX_STAGES} stages")
    for k, st in enumerate(stages, start=1):
        if not isinstance(st, dict) or st.get("backend") not in backends:
            raise ConfigError(f"{path}: stage {k} names an undeclared backend {st.get('backend') if isinstance(st, dict) else st!r}")
    output = cfg.get("output") or {}
    for key in ("intermediate_dir", "report", "csv"):
        if output.get(key) is not None:
            output[key] = str(base / output[key])
    cfg["output"] = output
    cfg["_base_dir"] = str(base)
    cfg["_raw"] = raw
    return cfg


def _read_backend_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read backend config {path}: {exc}") from None
    if isinstance(raw, dict) and "backends" in raw:
        raw = raw["backends"]
    if not isinstance(raw, dict) or not all(isinstance(v, dict) for v in raw.values()):
        raise ConfigError(f"{path}: expected a mapping of backend ids to settings")
    return raw


def load_backend_config(path) -> dict:
    """Backend declarations from a separate file; file-backend paths resolve against that file's directory."""
    base = Path(path).parent
    out = {}
    for bid, settings in _read_backend_config(path).items():
        settings = dict(settings)
        if settings.get("type") == "file" and "path" in settings:
            settings["path"] = str(base / settings["path"])
        out[bid] = settings
    return out


def _build_stage(task: Task, settings: dict) -> Stage:
    template = default_template(task)
    if settings.get("template"):
        template = PromptTemplate(task, **{**asdict(template), **settings["template"], "task": task})
    decoding = default_decoding(task)
    if settings.get("decoding"):
        decoding = DecodingConfig(**{**asdict(decoding), **settings["decoding"]})
    return Stage(settings["backend"], template, decoding)


def _relative(p, base) -> str:
    try:
        return str(Path(p).relative_to(base))
    except ValueError:
        return str(p)


def run_config(
    cfg: dict,
    max_workers: Optional[int] = None,
    sleep: Callable[[float], None] = time.sleep,
) -> MetricReport:
    """Run a config from :func:`load_config` and return (and write, if configured) the report."""
    task = Task(cfg["task"])
    base = cfg["_base_dir"]
    data, output = cfg["data"], cfg["output"]
    metrics_cfg = cfg.get("metrics") or {}

    try:
        stages = [_build_stage(task, st) for st in cfg["stages"]]
        backends = {
            bid: build_backend(bid, settings, base_dir=base)
            for bid, settings in cfg["backends"].items()
            if any(s.backend_id == bid for s in stages)
        }
        workers = max_workers if max_workers is not None else int(cfg.get("max_workers", 1))
        job = CascadeJob(tuple(stages), output.get("intermediate_dir"), workers)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid stage settings: {exc}") from None

    gold = None
    if data.get("gold_m2"):
        corpus, gold = load_m2(data["gold_m2"], task=task)
        if data["refs"]:
            corpus = attach_references(corpus, data["refs"])
        else:
            corpus = corpus.with_references(references_from_gold(corpus, gold))
    else:
        corpus = load_parallel(data["source"], data["refs"], task=task)

    stoplist = metrics_cfg.get("stoplist")
    recognizer = HeuristicRecognizer(load_stoplist(str(Path(base) / stoplist) if stoplist else None))
    beta = float(metrics_cfg.get("beta", 0.5))
    max_n = int(metrics_cfg.get("max_n", 4))

    result = run_cascade(job, corpus, backends, sleep=sleep)

    stage_reports = []
    for stage, sr in zip(stages, result.stages):
        metrics, _ = evaluate(sr.corpus, gold, beta, max_n, recognizer)
        stage_reports.append({
            "index": sr.index,
            "backend": {k: (_relative(v, base) if k == "path" and v else v)
                        for k, v in backends[stage.backend_id].describe().items()},
            "template": {k: v for k, v in asdict(stage.template).items() if k != "task"},
            "decoding": {**asdict(stage.decoding), "strategy": stage.decoding.strategy.value},
            "metrics": metrics,
            "failures": [{"id": f.record_id, "error": f.error} for f in sr.failures],
            "intermediate": None if sr.intermediate_path is None else _relative(sr.intermediate_path, base),
        })

    semantic = {k: v for k, v in cfg["_raw"].items() if k not in _NON_SEMANTIC}
    inputs = {}
    for key in ("source", "gold_m2"):
        if data.get(key):
            inputs[key] = {"path": _relative(data[key], base), "sha256": file_digest(data[key])}
    inputs["refs"] = [{"path": _relative(p, base), "sha256": file_digest(p)} for p in data["refs"]]
    report = MetricReport(
        task=task,
        metrics=stage_reports[-1]["metrics"],
        provenance={
            "command": "cascade",
            "inputs": inputs,
            "config_hash": config_hash({"config": semantic, "inputs": inputs}),
            "records": len(corpus),
        },
        stages=stage_reports,
    )
    if output.get("report"):
        write_report(report, output["report"])
    if output.get("csv"):
        write_csv(report, output["csv"])
    return report
