"""Seeded scenario samplers.

Each dataset item gets its own `random.Random` keyed by a hash of
(dataset seed, item index), so generation order and thread count never change
the output bytes. Rejection sampling (unique shortest paths, pinned path
lengths) is bounded and fails loudly instead of silently skewing counts.
"""

from __future__ import annotations

import hashlib
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterator, Mapping, Union

from .errors import GenerationError
from .render import PLACEMENT_STYLES
from .scenario import (
    ContainerWorld,
    HardObjectWorld,
    NavResultWorld,
    NavRouteWorld,
    Scenario,
    TASKS,
    World,
    oracle_target,
    render_prefix,
)
from .vocab import WordSet, resolve_wordset, sample_words
from .world import (
    ContainerState,
    DELTA,
    DIRECTIONS,
    GridMap,
    MoveAction,
    route_between,
    shortest_path_count,
)

ATTEMPT_BOUND = 10_000

PATH_LEN_MODES = ("incidental", "uniform_length")

GRID_AXES = ("n_objects", "n_containers", "n_rooms", "path_len")

WordBank = Mapping[str, WordSet]


def derive_seed(seed: int, tag: int | str) -> int:
    """Stable 64-bit per-item seed; independent of Python hash randomization."""
    digest = hashlib.sha256(f"{seed}\x1f{tag}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _check_range(name: str, value: tuple[int, int], minimum: int) -> None:
    lo, hi = value
    if lo > hi:
        raise ValueError(f"{name} is empty: {value}")
    if lo < minimum:
        raise ValueError(f"{name} must start at {minimum} or above, got {value}")


@dataclass(frozen=True)
class GenConfig:
    task: str
    n_objects_range: tuple[int, int] = (2, 8)
    n_containers_range: tuple[int, int] = (2, 3)
    n_rooms_range: tuple[int, int] = (3, 8)
    path_len_mode: str = "incidental"
    path_len_range: tuple[int, int] = (1, 5)
    object_wordset: str = "train"
    container_wordset: str = "containers"
    room_wordset: str = "rooms"
    seed: int = 0
    count: int = 1

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}; expected one of {TASKS}")
        if self.path_len_mode not in PATH_LEN_MODES:
            raise ValueError(f"unknown path_len_mode {self.path_len_mode!r}")
        _check_range("n_objects_range", self.n_objects_range, 1)
        _check_range("n_containers_range", self.n_containers_range, 2)
        _check_range("n_rooms_range", self.n_rooms_range, 2)
        _check_range("path_len_range", self.path_len_range, 1)
        if self.count < 1:
            raise ValueError(f"count must be positive, got {self.count}")


def config_feasible(cfg: GenConfig) -> bool:
    """False when no scenario can exist for the configuration (grid cells use
    this to report NA instead of burning the attempt bound)."""
    if cfg.task in ("nav_route", "nav_result", "hard_object"):
        if cfg.path_len_mode == "uniform_length":
            if cfg.path_len_range[0] > cfg.n_rooms_range[1] - 1:
                return False
    if cfg.task == "hard_object" and cfg.n_containers_range[0] > cfg.n_rooms_range[1]:
        return False
    return True


def _draw(rng: random.Random, bounds: tuple[int, int]) -> int:
    return rng.randint(bounds[0], bounds[1])


def _sample(bank: WordBank, name: str, k: int, rng: random.Random, what: str) -> list[str]:
    ws = resolve_wordset(bank, name)
    if k > len(ws):
        raise GenerationError(
            f"need {k} distinct {what} but word set {ws.name!r} has only {len(ws)}"
        )
    return sample_words(ws, k, rng)


# --- container --------------------------------------------------------------


def _container_world(cfg: GenConfig, bank: WordBank, rng: random.Random):
    n_obj = _draw(rng, cfg.n_objects_range)
    n_cont = _draw(rng, cfg.n_containers_range)
    containers = _sample(bank, cfg.container_wordset, n_cont, rng, "container names")
    objects = _sample(bank, cfg.object_wordset, n_obj, rng, "object names")
    location = {obj: containers[rng.randrange(n_cont)] for obj in objects}
    state = ContainerState.build(
        {c: [o for o in objects if location[o] == c] for c in containers},
        intro_order=tuple(containers),
    )
    pairs = [
        (obj, dst)
        for obj in objects
        for dst in containers
        if dst != location[obj]
    ]
    obj, dst = pairs[rng.randrange(len(pairs))]
    world = ContainerWorld(state=state, move=MoveAction(object=obj, src=location[obj], dst=dst))
    meta = {"n_objects": n_obj, "n_containers": n_cont}
    return world, meta


# --- maps -------------------------------------------------------------------


def gen_map(n_rooms: int, rooms: WordSet, rng: random.Random) -> GridMap:
    """Grow a connected grid map by attaching each new room to a uniformly
    chosen placed room on a uniformly chosen free adjacent cell."""
    if n_rooms < 2:
        raise ValueError(f"a map needs at least 2 rooms, got {n_rooms}")
    if n_rooms > len(rooms):
        raise GenerationError(
            f"need {n_rooms} distinct room names but word set {rooms.name!r} has only {len(rooms)}"
        )
    names = sample_words(rooms, n_rooms, rng)
    origin = names[0]
    coords = {origin: (0, 0)}
    occupied = {(0, 0)}
    placed = [origin]
    spans = []
    for name in names[1:]:
        while True:
            anchor = placed[rng.randrange(len(placed))]
            ax, ay = coords[anchor]
            free = [
                (d, (ax + DELTA[d][0], ay + DELTA[d][1]))
                for d in DIRECTIONS
                if (ax + DELTA[d][0], ay + DELTA[d][1]) not in occupied
            ]
            if free:
                break
        direction, cell = free[rng.randrange(len(free))]
        spans.append((name, direction, anchor))
        coords[name] = cell
        occupied.add(cell)
        placed.append(name)
    return GridMap.from_trace(origin, spans)


def _placement_order(gmap: GridMap) -> list[str]:
    return [gmap.origin] + [room for room, _, _ in gmap.spans]


def gen_map_with_path_len(
    length: int,
    n_rooms_range: tuple[int, int],
    rooms: WordSet,
    rng: random.Random,
) -> tuple[GridMap, str, str]:
    """Rejection-sample a map plus (src, dst) at exactly the requested unique
    shortest-path length."""
    if length < 1:
        raise ValueError(f"path length must be positive, got {length}")
    if n_rooms_range[1] < length + 1:
        raise GenerationError(
            f"path length {length} needs at least {length + 1} rooms "
            f"but n_rooms_range is {n_rooms_range}"
        )
    for _ in range(ATTEMPT_BOUND):
        n_rooms = _draw(rng, n_rooms_range)
        if n_rooms < length + 1:
            continue
        gmap = gen_map(n_rooms, rooms, rng)
        src, dst = rng.sample(_placement_order(gmap), 2)
        dist, ways = shortest_path_count(gmap, src, dst)
        if dist == length and ways == 1:
            return gmap, src, dst
    raise GenerationError(
        f"no map with a unique shortest path of length {length} found in "
        f"{ATTEMPT_BOUND} attempts (n_rooms_range {n_rooms_range})"
    )


def _nav_route_world(cfg: GenConfig, bank: WordBank, rng: random.Random):
    rooms = resolve_wordset(bank, cfg.room_wordset)
    if cfg.path_len_mode == "uniform_length":
        length = _draw(rng, cfg.path_len_range)
        gmap, src, dst = gen_map_with_path_len(length, cfg.n_rooms_range, rooms, rng)
    else:
        for _ in range(ATTEMPT_BOUND):
            gmap = gen_map(_draw(rng, cfg.n_rooms_range), rooms, rng)
            src, dst = rng.sample(_placement_order(gmap), 2)
            length, ways = shortest_path_count(gmap, src, dst)
            if ways == 1:
                break
        else:
            raise GenerationError(
                f"no unique-shortest-path pair found in {ATTEMPT_BOUND} attempts"
            )
    world = NavRouteWorld(gmap=gmap, src=src, dst=dst)
    meta = {"n_rooms": len(gmap.rooms), "path_len": length}
    return world, meta


def _simple_paths(gmap: GridMap, length: int) -> list[tuple[str, tuple[str, ...]]]:
    """All (start, directions) walks of `length` steps visiting no room twice,
    enumerated in placement/direction-priority order."""
    found: list[tuple[str, tuple[str, ...]]] = []
    route: list[str] = []

    def extend(room: str, visited: set[str], start: str) -> None:
        if len(route) == length:
            found.append((start, tuple(route)))
            return
        for direction, nxt in gmap.neighbors(room):
            if nxt in visited:
                continue
            visited.add(nxt)
            route.append(direction)
            extend(nxt, visited, start)
            route.pop()
            visited.remove(nxt)

    for start in _placement_order(gmap):
        extend(start, {start}, start)
    return found


def _nav_result_world(cfg: GenConfig, bank: WordBank, rng: random.Random):
    rooms = resolve_wordset(bank, cfg.room_wordset)
    if cfg.path_len_mode == "uniform_length":
        length = _draw(rng, cfg.path_len_range)
        for _ in range(ATTEMPT_BOUND):
            n_rooms = _draw(rng, cfg.n_rooms_range)
            if n_rooms < length + 1:
                continue
            gmap = gen_map(n_rooms, rooms, rng)
            paths = _simple_paths(gmap, length)
            if paths:
                break
        else:
            raise GenerationError(
                f"no simple path of length {length} found in {ATTEMPT_BOUND} attempts"
            )
    else:
        # Route length follows the incidental distance distribution between a
        # uniformly drawn room pair; the walked route is then uniform among
        # simple paths of that length.
        gmap = gen_map(_draw(rng, cfg.n_rooms_range), rooms, rng)
        src, dst = rng.sample(_placement_order(gmap), 2)
        length, _ = shortest_path_count(gmap, src, dst)
        paths = _simple_paths(gmap, length)
    start, route = paths[rng.randrange(len(paths))]
    world = NavResultWorld(gmap=gmap, start=start, route=route)
    meta = {"n_rooms": len(gmap.rooms), "path_len": length}
    return world, meta


# --- hard object ------------------------------------------------------------


def _hard_object_world(cfg: GenConfig, bank: WordBank, rng: random.Random):
    rooms = resolve_wordset(bank, cfg.room_wordset)
    n_obj = _draw(rng, cfg.n_objects_range)
    n_cont = _draw(rng, cfg.n_containers_range)
    if cfg.n_rooms_range[1] < n_cont:
        raise GenerationError(
            f"{n_cont} containers need {n_cont} distinct rooms "
            f"but n_rooms_range is {cfg.n_rooms_range}"
        )
    pinned = None
    if cfg.path_len_mode == "uniform_length":
        pinned = _draw(rng, cfg.path_len_range)
    for _ in range(ATTEMPT_BOUND):
        n_rooms = _draw(rng, cfg.n_rooms_range)
        if n_rooms < n_cont or (pinned is not None and n_rooms < pinned + 1):
            continue
        gmap = gen_map(n_rooms, rooms, rng)
        containers = _sample(bank, cfg.container_wordset, n_cont, rng, "container names")
        placements = dict(zip(containers, rng.sample(_placement_order(gmap), n_cont)))
        objects = _sample(bank, cfg.object_wordset, n_obj, rng, "object names")
        location = {obj: containers[rng.randrange(n_cont)] for obj in objects}
        pick_object = objects[rng.randrange(n_obj)]
        pick_src = location[pick_object]
        others = [c for c in containers if c != pick_src]
        dst = others[rng.randrange(len(others))]
        dist, ways = shortest_path_count(gmap, placements[pick_src], placements[dst])
        if ways != 1 or (pinned is not None and dist != pinned):
            continue
        route = route_between(gmap, placements[pick_src], placements[dst])
        state = ContainerState.build(
            {c: [o for o in objects if location[o] == c] for c in containers},
            intro_order=tuple(containers),
        )
        styles = {c: PLACEMENT_STYLES[rng.randrange(len(PLACEMENT_STYLES))] for c in containers}
        world = HardObjectWorld(
            gmap=gmap,
            placements=placements,
            styles=styles,
            state=state,
            pick_object=pick_object,
            pick_src=pick_src,
            route=route,
        )
        meta = {
            "n_objects": n_obj,
            "n_containers": n_cont,
            "n_rooms": len(gmap.rooms),
            "path_len": len(route),
        }
        return world, meta
    raise GenerationError(
        f"no acceptable hard-object world found in {ATTEMPT_BOUND} attempts"
        + (f" (pinned path length {pinned})" if pinned is not None else "")
    )


# --- assembly ---------------------------------------------------------------

_BUILDERS = {
    "container": _container_world,
    "nav_route": _nav_route_world,
    "nav_result": _nav_result_world,
    "hard_object": _hard_object_world,
}


def _object_wordset_tag(cfg: GenConfig) -> str | None:
    return cfg.object_wordset if cfg.task in ("container", "hard_object") else None


def _verify_meta(world: World, meta: dict) -> None:
    if isinstance(world, ContainerWorld):
        assert meta["n_objects"] == world.state.n_objects()
        assert meta["n_containers"] == len(world.state.intro_order)
    elif isinstance(world, (NavRouteWorld, NavResultWorld)):
        assert meta["n_rooms"] == len(world.gmap.rooms)
    elif isinstance(world, HardObjectWorld):
        assert meta["n_objects"] == world.state.n_objects()
        assert meta["n_containers"] == len(world.state.intro_order)
        assert meta["n_rooms"] == len(world.gmap.rooms)
        assert meta["path_len"] == len(world.route)


def build_scenario(
    cfg: GenConfig,
    bank: WordBank,
    rng: random.Random,
    *,
    scenario_id: str,
    item_seed: int | None = None,
) -> Scenario:
    world, counts = _BUILDERS[cfg.task](cfg, bank, rng)
    meta = {
        "n_objects": counts.get("n_objects"),
        "n_containers": counts.get("n_containers"),
        "n_rooms": counts.get("n_rooms"),
        "path_len": counts.get("path_len"),
        "object_wordset": _object_wordset_tag(cfg),
        "item_seed": item_seed,
    }
    _verify_meta(world, meta)
    return Scenario(
        id=scenario_id,
        task=cfg.task,
        prefix=render_prefix(world),
        target=oracle_target(world),
        world=world,
        meta=meta,
    )


def _single(cfg: GenConfig, bank: WordBank, rng: random.Random, task: str) -> Scenario:
    if cfg.task != task:
        raise ValueError(f"config task is {cfg.task!r}, expected {task!r}")
    return build_scenario(cfg, bank, rng, scenario_id=f"{cfg.task}-adhoc-000000")


def gen_container_scenario(cfg: GenConfig, bank: WordBank, rng: random.Random) -> Scenario:
    return _single(cfg, bank, rng, "container")


def gen_nav_route_scenario(cfg: GenConfig, bank: WordBank, rng: random.Random) -> Scenario:
    return _single(cfg, bank, rng, "nav_route")


def gen_nav_result_scenario(cfg: GenConfig, bank: WordBank, rng: random.Random) -> Scenario:
    return _single(cfg, bank, rng, "nav_result")


def gen_hard_object_scenario(cfg: GenConfig, bank: WordBank, rng: random.Random) -> Scenario:
    return _single(cfg, bank, rng, "hard_object")


def gen_item(cfg: GenConfig, bank: WordBank, i: int) -> Scenario:
    item_seed = derive_seed(cfg.seed, i)
    rng = random.Random(item_seed)
    try:
        return build_scenario(
            cfg,
            bank,
            rng,
            scenario_id=f"{cfg.task}-{cfg.seed}-{i:06d}",
            item_seed=item_seed,
        )
    except GenerationError as exc:
        raise GenerationError(f"item {i}: {exc}") from exc


def gen_dataset(cfg: GenConfig, bank: WordBank) -> Iterator[Scenario]:
    for i in range(cfg.count):
        yield gen_item(cfg, bank, i)


# --- stratified and pinned variants -----------------------------------------


def pin_axis(cfg: GenConfig, axis: str, value: int) -> GenConfig:
    """Collapse one sampling range to a single value; pinning path_len forces
    uniform_length mode since incidental lengths cannot be dialed."""
    if axis == "n_objects":
        return replace(cfg, n_objects_range=(value, value))
    if axis == "n_containers":
        return replace(cfg, n_containers_range=(value, value))
    if axis == "n_rooms":
        return replace(cfg, n_rooms_range=(value, value))
    if axis == "path_len":
        return replace(cfg, path_len_range=(value, value), path_len_mode="uniform_length")
    raise ValueError(f"unknown axis {axis!r}; expected one of {GRID_AXES}")


@dataclass(frozen=True)
class StratifiedConfig:
    """Even split of `count` scenarios over a grid of pinned (row, col) cells;
    any remainder goes to the earliest cells in row-major order."""

    base: GenConfig
    row_axis: str
    row_values: tuple[int, ...]
    col_axis: str
    col_values: tuple[int, ...]
    count: int

    def __post_init__(self):
        for axis in (self.row_axis, self.col_axis):
            if axis not in GRID_AXES:
                raise ValueError(f"unknown axis {axis!r}; expected one of {GRID_AXES}")
        if self.row_axis == self.col_axis:
            raise ValueError("row and column axes must differ")
        if not self.row_values or not self.col_values:
            raise ValueError("axis values must be nonempty")
        if self.count < 1:
            raise ValueError(f"count must be positive, got {self.count}")

    def cells(self) -> list[tuple[int, int, GenConfig]]:
        n_cells = len(self.row_values) * len(self.col_values)
        base_count, remainder = divmod(self.count, n_cells)
        out = []
        index = 0
        for rv in self.row_values:
            for cv in self.col_values:
                cfg = pin_axis(pin_axis(self.base, self.row_axis, rv), self.col_axis, cv)
                cfg = replace(
                    cfg,
                    count=base_count + (1 if index < remainder else 0),
                    seed=derive_seed(self.base.seed, f"cell-{rv}-{cv}"),
                )
                out.append((rv, cv, cfg))
                index += 1
        return out


AnyConfig = Union[GenConfig, StratifiedConfig]


def total_count(cfg: AnyConfig) -> int:
    return cfg.count


def _item_plan(cfg: AnyConfig) -> list[tuple[GenConfig, int]]:
    if isinstance(cfg, GenConfig):
        return [(cfg, i) for i in range(cfg.count)]
    plan = []
    for rv, cv, cell in cfg.cells():
        if not config_feasible(cell):
            raise GenerationError(
                f"stratified cell ({cfg.row_axis}={rv}, {cfg.col_axis}={cv}) is infeasible"
            )
        plan.extend((cell, i) for i in range(cell.count))
    return plan


def materialize(cfg: AnyConfig, bank: WordBank, threads: int = 1) -> list[Scenario]:
    """Generate every scenario; output is identical for any thread count."""
    plan = _item_plan(cfg)
    if threads <= 1:
        return [gen_item(c, bank, i) for c, i in plan]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda p: gen_item(p[0], bank, p[1]), plan))
