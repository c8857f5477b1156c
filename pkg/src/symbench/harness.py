"""Dataset files, batch scoring, generalization grids, and curricula.

Everything here is deterministic plumbing around the generator and metrics:
JSONL in fixed field order, sha256 digests, TOML manifests that are
sufficient to regenerate a dataset byte-for-byte, and per-cell aggregation
for the heatmap-style grid evaluations.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import random
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Iterable, Mapping, Union

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .errors import GenerationError, ScoringError
from .generate import (
    AnyConfig,
    GenConfig,
    StratifiedConfig,
    config_feasible,
    derive_seed,
    gen_item,
    materialize,
    pin_axis,
    total_count,
)
from .gibberish import GibberishMap, apply_gibberish, invert_gibberish
from .metrics import PairScore, score_pair
from .scenario import Scenario, slot_words, world_from_dict
from .scenario import oracle_target as _oracle_target
from .vocab import Lexicon, WordBankConfig, WordSet, build_word_bank, data_path, load_lexicon

SCHEMA_VERSION = 1

PREDICTORS = ("oracle", "copy")

MAX_LISTED_OFFENDERS = 10


def sha256_digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


# --- JSONL ------------------------------------------------------------------


def read_jsonl(path: str | Path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ScoringError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise ScoringError(f"{path}:{lineno}: expected a JSON object")
            records.append(record)
    return records


def jsonl_bytes(records: Iterable[dict]) -> bytes:
    lines = [json.dumps(r, ensure_ascii=False, separators=(",", ":")) for r in records]
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def write_jsonl(path: str | Path, records: Iterable[dict]) -> str:
    data = jsonl_bytes(records)
    Path(path).write_bytes(data)
    return sha256_digest(data)


def dataset_bytes(scenarios: Iterable[Scenario]) -> bytes:
    return jsonl_bytes(s.to_record() for s in scenarios)


# --- scoring ----------------------------------------------------------------


@dataclass(frozen=True)
class CellStats:
    count: int
    exact: float
    substring: float
    bleu: float


@dataclass(frozen=True)
class GridResult:
    row_axis: str
    col_axis: str
    row_values: tuple[int, ...]
    col_values: tuple[int, ...]
    cells: dict[tuple[int, int], CellStats | None]


@dataclass
class ScoreReport:
    pairs: dict[str, PairScore]
    grid: GridResult | None = None

    @property
    def count(self) -> int:
        return len(self.pairs)

    def mean_of(self, metric: str) -> float:
        if metric not in ("exact", "substring", "bleu"):
            raise ValueError(f"unknown metric {metric!r}")
        if not self.pairs:
            return 0.0
        return sum(getattr(p, metric) for p in self.pairs.values()) / len(self.pairs)

    @property
    def mean_exact(self) -> float:
        return self.mean_of("exact")

    @property
    def mean_substring(self) -> float:
        return self.mean_of("substring")

    @property
    def mean_bleu(self) -> float:
        return self.mean_of("bleu")


def _listed(ids: list[str]) -> str:
    shown = ", ".join(ids[:MAX_LISTED_OFFENDERS])
    more = len(ids) - min(len(ids), MAX_LISTED_OFFENDERS)
    return shown + (f", ... {more} more" if more else "")


def score_records(
    dataset_records: list[dict], predictions: list[tuple[str, str]]
) -> ScoreReport:
    targets: dict[str, str] = {}
    for record in dataset_records:
        sid = record.get("id")
        if not isinstance(sid, str):
            raise ScoringError("dataset record without a string id")
        if sid in targets:
            raise ScoringError(f"duplicate dataset id {sid!r}")
        if "target" not in record:
            raise ScoringError(f"dataset record {sid!r} has no target")
        targets[sid] = record["target"]

    by_id: dict[str, str] = {}
    for sid, prediction in predictions:
        if sid in by_id:
            raise ScoringError(f"duplicate prediction for id {sid!r}")
        by_id[sid] = prediction

    missing = [sid for sid in targets if sid not in by_id]
    surplus = [sid for sid, _ in predictions if sid not in targets]
    if missing or surplus:
        parts = []
        if missing:
            parts.append(f"{len(missing)} dataset ids without predictions: {_listed(missing)}")
        if surplus:
            parts.append(f"{len(surplus)} predictions without dataset ids: {_listed(surplus)}")
        raise ScoringError("; ".join(parts))

    pairs = {sid: score_pair(by_id[sid], target) for sid, target in targets.items()}
    return ScoreReport(pairs=pairs)


def read_predictions(path: str | Path) -> list[tuple[str, str]]:
    out = []
    for i, record in enumerate(read_jsonl(path), start=1):
        if "id" not in record or "prediction" not in record:
            raise ScoringError(f"{path}: prediction record {i} needs id and prediction fields")
        out.append((record["id"], record["prediction"]))
    return out


def score_predictions(dataset: str | Path, predictions: str | Path) -> ScoreReport:
    return score_records(read_jsonl(dataset), read_predictions(predictions))


# --- baseline predictors ----------------------------------------------------


def oracle_baseline(dataset_records: list[dict]) -> list[dict]:
    """Perfect-reasoner predictions recomputed from the structured worlds."""
    out = []
    for record in dataset_records:
        sid = record.get("id", "<missing id>")
        if "world" not in record or "task" not in record:
            raise ScoringError(f"record {sid!r} has no structured world to run the oracle on")
        world = world_from_dict(record["task"], record["world"])
        out.append({"id": record["id"], "prediction": _oracle_target(world)})
    return out


def copy_baseline(dataset_records: list[dict]) -> list[dict]:
    return [{"id": r["id"], "prediction": r["prefix"]} for r in dataset_records]


def predictions_for(records: list[dict], predictor) -> list[tuple[str, str]]:
    if predictor == "oracle":
        return [(p["id"], p["prediction"]) for p in oracle_baseline(records)]
    if predictor == "copy":
        return [(p["id"], p["prediction"]) for p in copy_baseline(records)]
    if isinstance(predictor, Mapping):
        missing = [r["id"] for r in records if r["id"] not in predictor]
        if missing:
            raise ScoringError(
                f"{len(missing)} generated ids without external predictions: {_listed(missing)}"
            )
        return [(r["id"], predictor[r["id"]]) for r in records]
    raise ValueError(f"unknown predictor {predictor!r}; expected one of {PREDICTORS} or a mapping")


# --- grid evaluation --------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    row_axis: str
    col_axis: str
    row_values: tuple[int, ...]
    col_values: tuple[int, ...]
    instances: int

    def __post_init__(self):
        if self.row_axis == self.col_axis:
            raise ValueError("grid axes must differ")
        if not self.row_values or not self.col_values:
            raise ValueError("grid axis values must be nonempty")
        if self.instances < 1:
            raise ValueError(f"instances per cell must be positive, got {self.instances}")


def grid_evaluate(
    spec: GridSpec,
    cfg: GenConfig,
    bank: Mapping[str, WordSet],
    predictor="oracle",
    threads: int = 1,
) -> ScoreReport:
    """Generate and score `instances` scenarios per (row, col) cell.

    A cell reports no stats (NA) either when no scenario can exist there
    (path length exceeding room count - 1) or when the bounded rejection
    sampler exhausts its attempts — e.g. a unique shortest path covering
    every room of the map, which needs an exact linear-chain layout.
    """
    pairs: dict[str, PairScore] = {}
    cells: dict[tuple[int, int], CellStats | None] = {}
    for rv in spec.row_values:
        for cv in spec.col_values:
            cell_cfg = pin_axis(pin_axis(cfg, spec.row_axis, rv), spec.col_axis, cv)
            cell_cfg = replace(
                cell_cfg,
                count=spec.instances,
                seed=derive_seed(cfg.seed, f"grid-{rv}-{cv}"),
            )
            if not config_feasible(cell_cfg):
                cells[(rv, cv)] = None
                continue
            try:
                records = [s.to_record() for s in materialize(cell_cfg, bank, threads)]
            except GenerationError:
                cells[(rv, cv)] = None
                continue
            report = score_records(records, predictions_for(records, predictor))
            cells[(rv, cv)] = CellStats(
                count=report.count,
                exact=report.mean_exact,
                substring=report.mean_substring,
                bleu=report.mean_bleu,
            )
            pairs.update(report.pairs)
    grid = GridResult(
        row_axis=spec.row_axis,
        col_axis=spec.col_axis,
        row_values=spec.row_values,
        col_values=spec.col_values,
        cells=cells,
    )
    return ScoreReport(pairs=pairs, grid=grid)


def grid_csv(grid: GridResult, metric: str = "exact") -> str:
    if metric not in ("exact", "substring", "bleu"):
        raise ValueError(f"unknown metric {metric!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"{grid.row_axis}/{grid.col_axis}"] + [str(v) for v in grid.col_values])
    for rv in grid.row_values:
        row: list[str] = [str(rv)]
        for cv in grid.col_values:
            stats = grid.cells[(rv, cv)]
            row.append("NA" if stats is None else f"{getattr(stats, metric):.6f}")
        writer.writerow(row)
    return buf.getvalue()


def report_json(report: ScoreReport) -> str:
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "aggregates": {
            "count": report.count,
            "exact": report.mean_exact,
            "substring": report.mean_substring,
            "bleu": report.mean_bleu,
        },
        "per_example": [
            {"id": sid, "exact": p.exact, "substring": p.substring, "bleu": p.bleu}
            for sid, p in report.pairs.items()
        ],
        "grid": None,
    }
    if report.grid is not None:
        g = report.grid
        doc["grid"] = {
            "row_axis": g.row_axis,
            "col_axis": g.col_axis,
            "row_values": list(g.row_values),
            "col_values": list(g.col_values),
            "cells": [
                [
                    None
                    if g.cells[(rv, cv)] is None
                    else {
                        "count": g.cells[(rv, cv)].count,
                        "exact": g.cells[(rv, cv)].exact,
                        "substring": g.cells[(rv, cv)].substring,
                        "bleu": g.cells[(rv, cv)].bleu,
                    }
                    for cv in g.col_values
                ]
                for rv in g.row_values
            ],
        }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


# --- word bank context ------------------------------------------------------


@dataclass(frozen=True)
class BankContext:
    """A word bank plus the provenance needed to rebuild it exactly."""

    sets: dict[str, WordSet]
    lexicon: Lexicon
    lexicon_sha256: str
    config: WordBankConfig


def load_bank(
    lexicon_path: str | Path | None = None, bank_cfg: WordBankConfig | None = None
) -> BankContext:
    path = Path(lexicon_path) if lexicon_path is not None else data_path("demo_lexicon.tsv")
    cfg = bank_cfg if bank_cfg is not None else WordBankConfig()
    lex = load_lexicon(path)
    return BankContext(
        sets=build_word_bank(lex, cfg),
        lexicon=lex,
        lexicon_sha256=sha256_digest(path.read_bytes()),
        config=cfg,
    )


def bank_avoid_words(ctx: BankContext) -> set[str]:
    """Everything that may appear as a slot filler: lexicon words plus all
    derived word-set members (rooms, containers, random strings, ...)."""
    avoid = {entry.word for entry in ctx.lexicon.entries}
    for ws in ctx.sets.values():
        for w in ws.words:
            avoid.update(w.split(" "))
    return avoid


# --- manifests --------------------------------------------------------------


def _toml_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, str):
        escaped = v.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__} to TOML")


def _toml_table(name: str, items: dict[str, Any]) -> str:
    lines = [f"[{name}]"]
    lines += [f"{k} = {_toml_value(v)}" for k, v in items.items() if v is not None]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    config: AnyConfig
    count: int
    digest: str
    schema_version: int = SCHEMA_VERSION
    wordbank: dict[str, Any] | None = None
    gibberish_map_digest: str | None = None


def _config_items(cfg: GenConfig) -> dict[str, Any]:
    return {
        "task": cfg.task,
        "n_objects_range": list(cfg.n_objects_range),
        "n_containers_range": list(cfg.n_containers_range),
        "n_rooms_range": list(cfg.n_rooms_range),
        "path_len_mode": cfg.path_len_mode,
        "path_len_range": list(cfg.path_len_range),
        "object_wordset": cfg.object_wordset,
        "container_wordset": cfg.container_wordset,
        "room_wordset": cfg.room_wordset,
        "seed": cfg.seed,
        "count": cfg.count,
    }


def manifest_toml(manifest: DatasetManifest) -> str:
    base_cfg = (
        manifest.config.base
        if isinstance(manifest.config, StratifiedConfig)
        else manifest.config
    )
    head = {
        "schema_version": manifest.schema_version,
        "name": manifest.name,
        "kind": "stratified" if isinstance(manifest.config, StratifiedConfig) else "plain",
        "count": manifest.count,
        "digest": manifest.digest,
    }
    if manifest.gibberish_map_digest is not None:
        head["gibberish_map"] = manifest.gibberish_map_digest
    parts = ["\n".join(f"{k} = {_toml_value(v)}" for k, v in head.items()) + "\n"]
    parts.append(_toml_table("config", _config_items(base_cfg)))
    if isinstance(manifest.config, StratifiedConfig):
        strat = manifest.config
        parts.append(
            _toml_table(
                "stratify",
                {
                    "row_axis": strat.row_axis,
                    "row_values": list(strat.row_values),
                    "col_axis": strat.col_axis,
                    "col_values": list(strat.col_values),
                    "total": strat.count,
                },
            )
        )
    if manifest.wordbank is not None:
        parts.append(_toml_table("wordbank", manifest.wordbank))
    return "\n".join(parts)


def parse_manifest(text: str) -> DatasetManifest:
    doc = tomllib.loads(text)
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise GenerationError(f"unsupported manifest schema_version {version!r}")
    raw = doc.get("config")
    if raw is None:
        raise GenerationError("manifest has no [config] table")
    cfg = GenConfig(
        task=raw["task"],
        n_objects_range=tuple(raw["n_objects_range"]),
        n_containers_range=tuple(raw["n_containers_range"]),
        n_rooms_range=tuple(raw["n_rooms_range"]),
        path_len_mode=raw["path_len_mode"],
        path_len_range=tuple(raw["path_len_range"]),
        object_wordset=raw["object_wordset"],
        container_wordset=raw["container_wordset"],
        room_wordset=raw["room_wordset"],
        seed=raw["seed"],
        count=raw["count"],
    )
    config: AnyConfig = cfg
    if doc.get("kind") == "stratified":
        strat = doc["stratify"]
        config = StratifiedConfig(
            base=cfg,
            row_axis=strat["row_axis"],
            row_values=tuple(strat["row_values"]),
            col_axis=strat["col_axis"],
            col_values=tuple(strat["col_values"]),
            count=strat["total"],
        )
    return DatasetManifest(
        name=doc.get("name", "unnamed"),
        config=config,
        count=doc["count"],
        digest=doc["digest"],
        wordbank=doc.get("wordbank"),
        gibberish_map_digest=doc.get("gibberish_map"),
    )


def write_manifest(path: str | Path, manifest: DatasetManifest) -> None:
    Path(path).write_text(manifest_toml(manifest), encoding="utf-8")


def read_manifest(path: str | Path) -> DatasetManifest:
    return parse_manifest(Path(path).read_text(encoding="utf-8"))


def manifest_path_for(dataset_path: str | Path) -> Path:
    return Path(dataset_path).with_suffix(".manifest.toml")


def wordbank_snapshot(ctx: BankContext) -> dict[str, Any]:
    snap: dict[str, Any] = {
        "lexicon_sha256": ctx.lexicon_sha256,
        "train_fraction": ctx.config.train_fraction,
        "split_seed": ctx.config.split_seed,
        "random_subset_seed": ctx.config.random_subset_seed,
        "random_string_seed": ctx.config.random_string_seed,
    }
    if ctx.config.top_n is not None:
        snap["top_n"] = ctx.config.top_n
    return snap


def bank_config_from_snapshot(snap: Mapping[str, Any]) -> WordBankConfig:
    return WordBankConfig(
        train_fraction=snap["train_fraction"],
        split_seed=snap["split_seed"],
        random_subset_seed=snap["random_subset_seed"],
        random_string_seed=snap["random_string_seed"],
        top_n=snap.get("top_n"),
    )


def generate_dataset_file(
    cfg: AnyConfig,
    ctx: BankContext,
    out_path: str | Path,
    *,
    name: str,
    threads: int = 1,
) -> DatasetManifest:
    data = dataset_bytes(materialize(cfg, ctx.sets, threads))
    Path(out_path).write_bytes(data)
    manifest = DatasetManifest(
        name=name,
        config=cfg,
        count=total_count(cfg),
        digest=sha256_digest(data),
        wordbank=wordbank_snapshot(ctx),
    )
    write_manifest(manifest_path_for(out_path), manifest)
    return manifest


def regenerate_bytes(manifest: DatasetManifest, ctx: BankContext, threads: int = 1) -> bytes:
    """Rebuild the exact dataset bytes a manifest describes (digest-checked)."""
    if manifest.wordbank is not None:
        expected = manifest.wordbank.get("lexicon_sha256")
        if expected is not None and expected != ctx.lexicon_sha256:
            raise GenerationError(
                f"lexicon digest mismatch: manifest has {expected}, "
                f"loaded lexicon is {ctx.lexicon_sha256}"
            )
    data = dataset_bytes(materialize(manifest.config, ctx.sets, threads))
    if sha256_digest(data) != manifest.digest:
        raise GenerationError(
            "regenerated dataset does not match the manifest digest "
            f"({sha256_digest(data)} vs {manifest.digest})"
        )
    return data


# --- gibberish datasets -----------------------------------------------------


def gibberish_variant(
    records: list[dict], gmap: GibberishMap, invert: bool = False
) -> list[dict]:
    """Transform prefix/target text through the template-word bijection;
    structured worlds and meta are untouched."""
    transform = invert_gibberish if invert else apply_gibberish
    out = []
    for record in records:
        world = world_from_dict(record["task"], record["world"])
        slots = slot_words(world)
        out.append(
            {
                **record,
                "prefix": transform(record["prefix"], gmap, slots),
                "target": transform(record["target"], gmap, slots),
            }
        )
    return out


# --- curricula --------------------------------------------------------------


@dataclass(frozen=True)
class CurriculumStage:
    name: str
    steps: int
    weights: dict[str, float]

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError(f"stage {self.name!r} needs a positive step count")
        if not self.weights:
            raise ValueError(f"stage {self.name!r} has no mixture weights")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError(f"stage {self.name!r} has negative weights")
        total = sum(self.weights.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"stage {self.name!r} weights sum to {total}, expected 1")


@dataclass(frozen=True)
class CurriculumManifest:
    name: str
    stages: tuple[CurriculumStage, ...]
    batch_size: int = 1
    learning_rate: float = 0.003
    seed: int = 0

    @property
    def total_steps(self) -> int:
        return sum(stage.steps for stage in self.stages)


CURRICULUM_PRESETS = ("HardObj", "Nav-Cont-HardObj", "Cont-Nav-HardObj", "ContNav5050-HardObj")


def build_curriculum(name: str, seed: int = 0) -> CurriculumManifest:
    """The four composite-task training regimes; every preset totals 3000
    steps so the regimes are compute-matched."""
    hard = CurriculumStage("hard_object", 1000, {"hard_object": 1.0})
    nav = CurriculumStage("nav", 1000, {"nav": 1.0})
    cont = CurriculumStage("container", 1000, {"container": 1.0})
    if name == "HardObj":
        stages = (CurriculumStage("hard_object", 3000, {"hard_object": 1.0}),)
    elif name == "Nav-Cont-HardObj":
        stages = (nav, cont, hard)
    elif name == "Cont-Nav-HardObj":
        stages = (cont, nav, hard)
    elif name == "ContNav5050-HardObj":
        stages = (
            CurriculumStage("container+nav", 2000, {"container": 0.5, "nav": 0.5}),
            hard,
        )
    else:
        raise ValueError(
            f"unknown curriculum preset {name!r}; expected one of {CURRICULUM_PRESETS}"
        )
    return CurriculumManifest(name=name, stages=stages, seed=seed)


def stage_draws(manifest: CurriculumManifest, stage_index: int) -> list[str]:
    """The per-step task sequence for one stage, drawn from the stage weights
    with a seed derived from the manifest seed."""
    stage = manifest.stages[stage_index]
    rng = random.Random(derive_seed(manifest.seed, f"stage-{stage_index}"))
    tasks = list(stage.weights)
    weights = [stage.weights[t] for t in tasks]
    return rng.choices(tasks, weights=weights, k=stage.steps)


def materialize_curriculum(
    manifest: CurriculumManifest,
    bank: Mapping[str, WordSet],
    task_configs: Mapping[str, GenConfig],
):
    """Yield (stage_name, global_step, task, Scenario) over the whole schedule."""
    step = 0
    for i, stage in enumerate(manifest.stages):
        for task in stage_draws(manifest, i):
            cfg = replace(
                task_configs[task],
                seed=derive_seed(manifest.seed, f"step-{step}"),
                count=1,
            )
            yield stage.name, step, task, gen_item(cfg, bank, 0)
            step += 1


def curriculum_toml(manifest: CurriculumManifest) -> str:
    lines = [
        f"schema_version = {SCHEMA_VERSION}",
        f"name = {_toml_value(manifest.name)}",
        f"seed = {manifest.seed}",
        f"batch_size = {manifest.batch_size}",
        f"learning_rate = {_toml_value(manifest.learning_rate)}",
        "",
    ]
    for stage in manifest.stages:
        weights = ", ".join(f"{k} = {_toml_value(v)}" for k, v in stage.weights.items())
        lines += [
            "[[stage]]",
            f"name = {_toml_value(stage.name)}",
            f"steps = {stage.steps}",
            f"weights = {{ {weights} }}",
            "",
        ]
    return "\n".join(lines)


def parse_curriculum(text: str) -> CurriculumManifest:
    doc = tomllib.loads(text)
    stages = tuple(
        CurriculumStage(name=s["name"], steps=s["steps"], weights=dict(s["weights"]))
        for s in doc.get("stage", [])
    )
    if not stages:
        raise ValueError("curriculum manifest has no stages")
    return CurriculumManifest(
        name=doc.get("name", "unnamed"),
        stages=stages,
        batch_size=doc.get("batch_size", 1),
        learning_rate=doc.get("learning_rate", 0.003),
        seed=doc.get("seed", 0),
    )
