"""Command-line surface: generate, score, grid-evaluate, transform, inspect.

Artifacts always go to files; stdout carries short human-readable summaries
only (plain text, so NO_COLOR needs no special handling). Exit codes: 0 on
success, 1 on validation errors, 2 on I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ToolkitError
from .generate import GenConfig
from .gibberish import build_gibberish_map, load_gibberish_map, save_gibberish_map
from .harness import (
    CURRICULUM_PRESETS,
    BankContext,
    DatasetManifest,
    bank_avoid_words,
    bank_config_from_snapshot,
    build_curriculum,
    curriculum_toml,
    generate_dataset_file,
    gibberish_variant,
    grid_csv,
    grid_evaluate,
    load_bank,
    manifest_path_for,
    predictions_for,
    read_jsonl,
    read_manifest,
    read_predictions,
    regenerate_bytes,
    report_json,
    score_records,
    write_jsonl,
    write_manifest,
)
from .presets import (
    GRID_SUMMARIES,
    PRESET_SUMMARIES,
    dataset_preset,
    dataset_preset_names,
    grid_base_config,
    grid_preset,
    grid_preset_names,
)
from .vocab import WordBankConfig, resolve_wordset, save_wordset


def _add_bank_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lexicon", help="lexicon TSV (default: bundled demo lexicon)")
    parser.add_argument(
        "--top-n",
        type=int,
        help="also derive the top-common/top-concrete/random word subsets of this size",
    )


def _bank(args) -> BankContext:
    return load_bank(args.lexicon, WordBankConfig(top_n=args.top_n))


def _cmd_gen(args) -> int:
    if args.config:
        manifest = read_manifest(args.config)
        bank_cfg = (
            bank_config_from_snapshot(manifest.wordbank)
            if manifest.wordbank
            else WordBankConfig(top_n=args.top_n)
        )
        ctx = load_bank(args.lexicon, bank_cfg)
        data = regenerate_bytes(manifest, ctx, threads=args.threads)
        Path(args.out).write_bytes(data)
        write_manifest(manifest_path_for(args.out), manifest)
        print(f"regenerated {manifest.count} scenarios -> {args.out}")
        print(manifest.digest)
        return 0
    if args.preset:
        cfg = dataset_preset(args.preset, count=args.count, seed=args.seed)
        base = cfg.base if hasattr(cfg, "base") else cfg
        if args.task and args.task != base.task:
            raise ValueError(f"preset {args.preset!r} is for task {base.task!r}, not {args.task!r}")
        name = args.preset
    else:
        if not args.task:
            raise ValueError("either --task, --preset, or --config is required")
        cfg = GenConfig(
            task=args.task,
            n_objects_range=tuple(args.objects),
            n_containers_range=tuple(args.containers),
            n_rooms_range=tuple(args.rooms),
            path_len_mode=args.path_mode,
            path_len_range=tuple(args.path_len),
            object_wordset=args.wordset,
            seed=args.seed,
            count=args.count if args.count is not None else 1,
        )
        name = args.task
    ctx = _bank(args)
    manifest = generate_dataset_file(cfg, ctx, args.out, name=name, threads=args.threads)
    print(f"wrote {manifest.count} scenarios -> {args.out}")
    print(f"manifest -> {manifest_path_for(args.out)}")
    print(manifest.digest)
    return 0


def _cmd_score(args) -> int:
    records = read_jsonl(args.dataset)
    if args.predictor:
        predictions = predictions_for(records, args.predictor)
        if args.out_predictions:
            write_jsonl(
                args.out_predictions,
                [{"id": sid, "prediction": p} for sid, p in predictions],
            )
    else:
        predictions = read_predictions(args.predictions)
    report = score_records(records, predictions)
    print(f"examples   {report.count}")
    print(f"exact      {report.mean_exact:.6f}")
    print(f"substring  {report.mean_substring:.6f}")
    print(f"bleu       {report.mean_bleu:.6f}")
    if args.out_report:
        Path(args.out_report).write_text(report_json(report), encoding="utf-8")
        print(f"report -> {args.out_report}")
    return 0


def _cmd_grid(args) -> int:
    spec = grid_preset(args.grid_preset)
    cfg = grid_base_config(args.task, seed=args.seed)
    ctx = _bank(args)
    predictor = dict(read_predictions(args.predictions)) if args.predictions else args.predictor
    report = grid_evaluate(spec, cfg, ctx.sets, predictor, threads=args.threads)
    csv_text = grid_csv(report.grid, metric=args.metric)
    Path(args.out_csv).write_text(csv_text, encoding="utf-8")
    feasible = [c for c in report.grid.cells.values() if c is not None]
    print(
        f"grid {len(spec.row_values)}x{len(spec.col_values)} cells, "
        f"{len(spec.row_values) * len(spec.col_values) - len(feasible)} infeasible"
    )
    print(f"examples   {report.count}")
    print(f"mean {args.metric}  {report.mean_of(args.metric):.6f}")
    print(f"csv -> {args.out_csv}")
    if args.out_report:
        Path(args.out_report).write_text(report_json(report), encoding="utf-8")
        print(f"report -> {args.out_report}")
    return 0


def _cmd_gibberish(args) -> int:
    records = read_jsonl(args.infile)
    map_path = Path(args.map)
    if map_path.exists():
        gmap = load_gibberish_map(map_path)
    else:
        ctx = _bank(args)
        gmap = build_gibberish_map(args.seed, bank_avoid_words(ctx))
        save_gibberish_map(gmap, map_path)
        print(f"built new substitution map -> {map_path}")
    out_records = gibberish_variant(records, gmap, invert=args.invert)
    digest = write_jsonl(args.out, out_records)
    in_manifest = manifest_path_for(args.infile)
    if in_manifest.exists():
        manifest = read_manifest(in_manifest)
        out_manifest = DatasetManifest(
            name=manifest.name + ("-inverted" if args.invert else "-gibberish"),
            config=manifest.config,
            count=manifest.count,
            digest=digest,
            wordbank=manifest.wordbank,
            gibberish_map_digest=None if args.invert else gmap.digest(),
        )
        write_manifest(manifest_path_for(args.out), out_manifest)
        print(f"manifest -> {manifest_path_for(args.out)}")
    print(f"{'inverted' if args.invert else 'transformed'} {len(out_records)} scenarios -> {args.out}")
    print(digest)
    print(f"map {gmap.digest()}")
    return 0


def _cmd_vocab(args) -> int:
    ctx = _bank(args)
    if args.derive:
        ws = resolve_wordset(ctx.sets, args.derive)
        print(f"{ws.name}: {len(ws)} words ({ws.provenance})")
        preview = ", ".join(ws.words[:8])
        if preview:
            print(f"first: {preview}")
        if args.out:
            save_wordset(ws, args.out)
            print(f"wordset -> {args.out}")
        return 0
    print(f"lexicon {ctx.lexicon_sha256}")
    for name in sorted(ctx.sets):
        print(f"{name:16s} {len(ctx.sets[name]):6d} words")
    return 0


def _cmd_curriculum(args) -> int:
    manifest = build_curriculum(args.name, seed=args.seed)
    for stage in manifest.stages:
        weights = ", ".join(f"{k}={v:g}" for k, v in stage.weights.items())
        print(f"stage {stage.name}: {stage.steps} steps ({weights})")
    print(f"total {manifest.total_steps} steps, batch_size {manifest.batch_size}, lr {manifest.learning_rate}")
    if args.out:
        Path(args.out).write_text(curriculum_toml(manifest), encoding="utf-8")
        print(f"manifest -> {args.out}")
    return 0


def _cmd_presets(args) -> int:
    print("dataset presets:")
    for name in dataset_preset_names():
        print(f"  {name:28s} {PRESET_SUMMARIES[name]}")
    print("grid presets:")
    for name in grid_preset_names():
        print(f"  {name:28s} {GRID_SUMMARIES[name]}")
    print("curriculum presets:")
    for name in CURRICULUM_PRESETS:
        print(f"  {name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symbench",
        description="Generate and score synthetic container/navigation reasoning scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a dataset JSONL plus its manifest")
    p.add_argument("--task", choices=("container", "nav_route", "nav_result", "hard_object"))
    p.add_argument("--preset", help="named dataset preset (see `symbench presets`)")
    p.add_argument("--config", help="regenerate from an existing manifest TOML")
    p.add_argument("--count", type=int, help="number of scenarios (preset default otherwise)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output JSONL path")
    p.add_argument("--objects", type=int, nargs=2, default=(2, 8), metavar=("MIN", "MAX"))
    p.add_argument("--containers", type=int, nargs=2, default=(2, 3), metavar=("MIN", "MAX"))
    p.add_argument("--rooms", type=int, nargs=2, default=(3, 8), metavar=("MIN", "MAX"))
    p.add_argument("--path-len", type=int, nargs=2, default=(1, 5), metavar=("MIN", "MAX"))
    p.add_argument("--path-mode", choices=("incidental", "uniform_length"), default="incidental")
    p.add_argument("--wordset", default="train", help="object word set name")
    p.add_argument("--threads", type=int, default=1)
    _add_bank_flags(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("score", help="score predictions against a dataset")
    p.add_argument("--dataset", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--predictions", help="predictions JSONL ({id, prediction} per line)")
    group.add_argument("--predictor", choices=("oracle", "copy"), help="built-in baseline")
    p.add_argument("--out-predictions", help="also write the baseline predictions JSONL")
    p.add_argument("--out-report", help="write the full JSON report here")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("grid", help="generate, score, and aggregate a parameter grid")
    p.add_argument("--task", required=True, choices=("container", "nav_route", "nav_result", "hard_object"))
    p.add_argument("--grid-preset", required=True, help="named grid preset (see `symbench presets`)")
    p.add_argument("--predictor", choices=("oracle", "copy"), default="oracle")
    p.add_argument("--predictions", help="external predictions JSONL instead of a baseline")
    p.add_argument("--metric", choices=("exact", "substring", "bleu"), default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-report")
    p.add_argument("--threads", type=int, default=1)
    _add_bank_flags(p)
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("gibberish", help="swap template words for pseudo-words (or back)")
    p.add_argument("--in", dest="infile", required=True, help="input dataset JSONL")
    p.add_argument("--map", required=True, help="substitution map TSV (built here if absent)")
    p.add_argument("--invert", action="store_true", help="map pseudo-words back to English")
    p.add_argument("--out", required=True, help="output dataset JSONL")
    p.add_argument("--seed", type=int, default=0, help="seed when building a new map")
    _add_bank_flags(p)
    p.set_defaults(func=_cmd_gibberish)

    p = sub.add_parser("vocab", help="inspect or export derived word sets")
    p.add_argument("--derive", help="word set name to inspect/export")
    p.add_argument("--out", help="write the derived word set to this file")
    _add_bank_flags(p)
    p.set_defaults(func=_cmd_vocab)

    p = sub.add_parser("curriculum", help="emit a staged training schedule manifest")
    p.add_argument("--name", required=True, help=f"one of {', '.join(CURRICULUM_PRESETS)}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the manifest TOML here")
    p.set_defaults(func=_cmd_curriculum)

    p = sub.add_parser("presets", help="list every named preset")
    p.set_defaults(func=_cmd_presets)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ToolkitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyError as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
