"""Named presets tying CLI commands to the standard experiment configs.

Dataset presets cover the training distributions (per task and per object
word set), the four 7200-example evaluation conditions, and the held-out
composite-task test set. Grid presets carry the heatmap axes.
"""

from __future__ import annotations

from .generate import AnyConfig, GenConfig, StratifiedConfig
from .harness import GridSpec

DEFAULT_TRAIN_COUNT = 1000
EVAL_COUNT = 7200
HARDOBJ_EVAL_COUNT = 5000


def _container(wordset: str, count: int, seed: int) -> GenConfig:
    return GenConfig(
        task="container",
        n_objects_range=(2, 8),
        n_containers_range=(2, 3),
        object_wordset=wordset,
        seed=seed,
        count=count,
    )


def _nav(task: str, mode: str, count: int, seed: int) -> GenConfig:
    return GenConfig(
        task=task,
        n_rooms_range=(3, 8),
        path_len_mode=mode,
        path_len_range=(1, 5),
        seed=seed,
        count=count,
    )


def _hard_object(count: int, seed: int) -> GenConfig:
    return GenConfig(
        task="hard_object",
        n_objects_range=(2, 8),
        n_containers_range=(2, 2),
        n_rooms_range=(3, 8),
        seed=seed,
        count=count,
    )


def _eval_grid(wordset: str, objects: range, containers: range, count: int, seed: int):
    return StratifiedConfig(
        base=_container(wordset, 1, seed),
        row_axis="n_objects",
        row_values=tuple(objects),
        col_axis="n_containers",
        col_values=tuple(containers),
        count=count,
    )


_DATASET_BUILDERS = {
    # training sets
    "train-default": lambda n, s: _container("train", n or DEFAULT_TRAIN_COUNT, s),
    "nav-route-train": lambda n, s: _nav("nav_route", "uniform_length", n or DEFAULT_TRAIN_COUNT, s),
    "nav-result-train": lambda n, s: _nav("nav_result", "uniform_length", n or DEFAULT_TRAIN_COUNT, s),
    "nav-route-train-incidental": lambda n, s: _nav("nav_route", "incidental", n or DEFAULT_TRAIN_COUNT, s),
    "nav-result-train-incidental": lambda n, s: _nav("nav_result", "incidental", n or DEFAULT_TRAIN_COUNT, s),
    "hardobj-train": lambda n, s: _hard_object(n or DEFAULT_TRAIN_COUNT, s),
    # word-set training conditions
    "table2-all": lambda n, s: _container("train", n or DEFAULT_TRAIN_COUNT, s),
    "table2-2k-common": lambda n, s: _container("train_common", n or DEFAULT_TRAIN_COUNT, s),
    "table2-2k-concrete": lambda n, s: _container("train_concrete", n or DEFAULT_TRAIN_COUNT, s),
    "table2-2k-random": lambda n, s: _container("train_random", n or DEFAULT_TRAIN_COUNT, s),
    "sensible20": lambda n, s: _container("sensible20", n or DEFAULT_TRAIN_COUNT, s),
    # evaluation sets
    "interp": lambda n, s: _eval_grid("train", range(2, 9), range(2, 4), n or EVAL_COUNT, s),
    "sem-extrap": lambda n, s: _eval_grid("val", range(2, 9), range(2, 4), n or EVAL_COUNT, s),
    "sys-extrap": lambda n, s: _eval_grid("train", range(10, 20), range(4, 6), n or EVAL_COUNT, s),
    "semsys-extrap": lambda n, s: _eval_grid("val", range(10, 20), range(4, 6), n or EVAL_COUNT, s),
    "hardobj-5k": lambda n, s: _hard_object(n or HARDOBJ_EVAL_COUNT, s),
}

PRESET_SUMMARIES = {
    "train-default": "container training set, 2-8 objects x 2-3 containers, training nouns",
    "nav-route-train": "route-planning training set, 3-8 rooms, uniform path lengths 1-5",
    "nav-result-train": "route-execution training set, 3-8 rooms, uniform path lengths 1-5",
    "nav-route-train-incidental": "route-planning training set with map-first sampling (short paths dominate)",
    "nav-result-train-incidental": "route-execution training set with map-first sampling (short paths dominate)",
    "hardobj-train": "composite-task training set, 2 containers placed on a 3-8 room map",
    "table2-all": "container training on the full training-noun pool",
    "table2-2k-common": "container training on the 2000 most common training nouns",
    "table2-2k-concrete": "container training on the 2000 most concrete training nouns",
    "table2-2k-random": "container training on 2000 randomly chosen training nouns",
    "sensible20": "container training on 20 hand-picked highly plausible objects",
    "interp": "7200-example eval, training counts and training nouns, evenly stratified",
    "sem-extrap": "7200-example eval, training counts, held-out nouns",
    "sys-extrap": "7200-example eval, 10-19 objects x 4-5 containers, training nouns",
    "semsys-extrap": "7200-example eval, 10-19 objects x 4-5 containers, held-out nouns",
    "hardobj-5k": "5000-example held-out composite-task test set",
}

_GRID_SPECS = {
    "fig2": GridSpec(
        row_axis="n_objects",
        col_axis="n_containers",
        row_values=tuple(range(2, 20)),
        col_values=tuple(range(2, 6)),
        instances=100,
    ),
    "nav-fig3": GridSpec(
        row_axis="n_rooms",
        col_axis="path_len",
        row_values=tuple(range(3, 13)),
        col_values=tuple(range(1, 9)),
        instances=100,
    ),
}

GRID_SUMMARIES = {
    "fig2": "objects 2-19 x containers 2-5, 100 instances per cell (container task)",
    "nav-fig3": "rooms 3-12 x path length 1-8, 100 instances per cell (navigation tasks)",
}


def dataset_preset(name: str, count: int | None = None, seed: int = 0) -> AnyConfig:
    try:
        builder = _DATASET_BUILDERS[name]
    except KeyError:
        known = ", ".join(sorted(_DATASET_BUILDERS))
        raise ValueError(f"unknown dataset preset {name!r}; available: {known}") from None
    return builder(count, seed)


def dataset_preset_names() -> list[str]:
    return sorted(_DATASET_BUILDERS)


def grid_preset(name: str) -> GridSpec:
    try:
        return _GRID_SPECS[name]
    except KeyError:
        known = ", ".join(sorted(_GRID_SPECS))
        raise ValueError(f"unknown grid preset {name!r}; available: {known}") from None


def grid_preset_names() -> list[str]:
    return sorted(_GRID_SPECS)


def grid_base_config(task: str, seed: int = 0) -> GenConfig:
    """The sweep base for grid evaluation; per-cell pinning overrides ranges."""
    if task == "container":
        return _container("train", 1, seed)
    if task in ("nav_route", "nav_result"):
        return _nav(task, "uniform_length", 1, seed)
    if task == "hard_object":
        return _hard_object(1, seed)
    raise ValueError(f"unknown task {task!r}")


def curriculum_task_configs(seed: int = 0) -> dict[str, GenConfig]:
    """Per-step generation configs for curriculum stage labels; the composite
    task narrates routes, so its navigation prerequisite is route execution."""
    return {
        "container": _container("train", 1, seed),
        "nav": _nav("nav_result", "uniform_length", 1, seed),
        "hard_object": _hard_object(1, seed),
    }
