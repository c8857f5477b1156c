"""Scenario = one prompt/answer pair plus the symbolic world it came from.

The world payload is what makes targets recomputable: given the serialized
world alone, `oracle_target` reproduces the target string exactly, so scoring
never has to trust the text in the file.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Union

from .errors import ParseError
from .render import (
    render_container_state,
    render_map,
    render_move,
    render_pick,
    render_placements,
    render_route,
    route_clauses,
)
from .world import (
    ContainerState,
    GridMap,
    HardObjectEpisode,
    MoveAction,
    Route,
    apply_move,
    container_in_room,
    execute_route,
    route_between,
    simulate_hard_object,
)

TASKS = ("container", "nav_route", "nav_result", "hard_object")

META_KEYS = (
    "n_objects",
    "n_containers",
    "n_rooms",
    "path_len",
    "object_wordset",
    "item_seed",
)


@dataclass(frozen=True)
class ContainerWorld:
    state: ContainerState
    move: MoveAction


@dataclass(frozen=True)
class NavRouteWorld:
    gmap: GridMap
    src: str
    dst: str


@dataclass(frozen=True)
class NavResultWorld:
    gmap: GridMap
    start: str
    route: Route


@dataclass(frozen=True)
class HardObjectWorld:
    gmap: GridMap
    placements: dict[str, str]
    styles: dict[str, str]
    state: ContainerState
    pick_object: str
    pick_src: str
    route: Route

    def episode(self) -> HardObjectEpisode:
        return HardObjectEpisode(
            gmap=self.gmap,
            placements=self.placements,
            state=self.state,
            pick_object=self.pick_object,
            pick_src=self.pick_src,
            route=self.route,
        )


World = Union[ContainerWorld, NavRouteWorld, NavResultWorld, HardObjectWorld]


def task_of(world: World) -> str:
    if isinstance(world, ContainerWorld):
        return "container"
    if isinstance(world, NavRouteWorld):
        return "nav_route"
    if isinstance(world, NavResultWorld):
        return "nav_result"
    if isinstance(world, HardObjectWorld):
        return "hard_object"
    raise TypeError(f"not a world: {world!r}")


def render_prefix(world: World) -> str:
    if isinstance(world, ContainerWorld):
        return f"{render_container_state(world.state)} {render_move(world.move)}"
    if isinstance(world, NavRouteWorld):
        return (
            f"{render_map(world.gmap)} "
            f"To get from the {world.src} to the {world.dst}, you must go"
        )
    if isinstance(world, NavResultWorld):
        return (
            f"{render_map(world.gmap)} "
            f"If you start in the {world.start} and go {route_clauses(world.route)}, "
            f"you will end in the"
        )
    if isinstance(world, HardObjectWorld):
        src_room = world.placements[world.pick_src]
        return " ".join(
            [
                render_map(world.gmap),
                render_placements(world.state, world.placements, world.styles),
                render_pick(world.pick_object, world.pick_src, src_room),
                render_route(world.route, style="narration"),
                "Placed it.",
            ]
        )
    raise TypeError(f"not a world: {world!r}")


def oracle_target(world: World) -> str:
    if isinstance(world, ContainerWorld):
        after = apply_move(world.state, world.move)
        return render_container_state(after, first=world.move.dst)
    if isinstance(world, NavRouteWorld):
        return render_route(route_between(world.gmap, world.src, world.dst), style="answer")
    if isinstance(world, NavResultWorld):
        return execute_route(world.gmap, world.start, world.route) + "."
    if isinstance(world, HardObjectWorld):
        episode = world.episode()
        after = simulate_hard_object(episode)
        end_room = execute_route(world.gmap, world.placements[world.pick_src], world.route)
        receiving = container_in_room(world.placements, end_room)
        return render_container_state(after, rooms=world.placements, first=receiving)
    raise TypeError(f"not a world: {world!r}")


def slot_words(world: World) -> set[str]:
    """Every sampled word appearing in the rendered text (objects, containers,
    rooms) — the complement of the template vocabulary for this scenario."""
    if isinstance(world, ContainerWorld):
        return set(world.state.intro_order) | set(world.state.total())
    if isinstance(world, NavRouteWorld):
        return set(world.gmap.rooms)
    if isinstance(world, NavResultWorld):
        return set(world.gmap.rooms)
    if isinstance(world, HardObjectWorld):
        return set(world.gmap.rooms) | set(world.state.intro_order) | set(world.state.total())
    raise TypeError(f"not a world: {world!r}")


# --- serialization ----------------------------------------------------------


def _state_to_dict(state: ContainerState) -> dict[str, Any]:
    return {
        "containers": {c: sorted(state.contents[c].elements()) for c in state.intro_order},
        "intro_order": list(state.intro_order),
    }


def _state_from_dict(d: dict[str, Any]) -> ContainerState:
    return ContainerState.build(
        {c: list(objs) for c, objs in d["containers"].items()},
        intro_order=tuple(d["intro_order"]),
    )


def _map_to_dict(gmap: GridMap) -> dict[str, Any]:
    return {
        "origin": gmap.origin,
        "spans": [[room, direction, anchor] for room, direction, anchor in gmap.spans],
    }


def _map_from_dict(d: dict[str, Any]) -> GridMap:
    return GridMap.from_trace(
        d["origin"], [(room, direction, anchor) for room, direction, anchor in d["spans"]]
    )


def world_to_dict(world: World) -> dict[str, Any]:
    if isinstance(world, ContainerWorld):
        return {
            "state": _state_to_dict(world.state),
            "move": {
                "object": world.move.object,
                "src": world.move.src,
                "dst": world.move.dst,
            },
        }
    if isinstance(world, NavRouteWorld):
        return {"map": _map_to_dict(world.gmap), "src": world.src, "dst": world.dst}
    if isinstance(world, NavResultWorld):
        return {
            "map": _map_to_dict(world.gmap),
            "start": world.start,
            "route": list(world.route),
        }
    if isinstance(world, HardObjectWorld):
        return {
            "map": _map_to_dict(world.gmap),
            "placements": {c: world.placements[c] for c in world.state.intro_order},
            "styles": {c: world.styles[c] for c in world.state.intro_order},
            "state": _state_to_dict(world.state),
            "pick_object": world.pick_object,
            "pick_src": world.pick_src,
            "route": list(world.route),
        }
    raise TypeError(f"not a world: {world!r}")


def world_from_dict(task: str, d: dict[str, Any]) -> World:
    try:
        if task == "container":
            move = d["move"]
            return ContainerWorld(
                state=_state_from_dict(d["state"]),
                move=MoveAction(object=move["object"], src=move["src"], dst=move["dst"]),
            )
        if task == "nav_route":
            return NavRouteWorld(gmap=_map_from_dict(d["map"]), src=d["src"], dst=d["dst"])
        if task == "nav_result":
            return NavResultWorld(
                gmap=_map_from_dict(d["map"]), start=d["start"], route=tuple(d["route"])
            )
        if task == "hard_object":
            return HardObjectWorld(
                gmap=_map_from_dict(d["map"]),
                placements=dict(d["placements"]),
                styles=dict(d["styles"]),
                state=_state_from_dict(d["state"]),
                pick_object=d["pick_object"],
                pick_src=d["pick_src"],
                route=tuple(d["route"]),
            )
    except KeyError as exc:
        raise ParseError(f"world payload for task {task!r} is missing key {exc}") from exc
    raise ParseError(f"unknown task {task!r}")


@dataclass(frozen=True)
class Scenario:
    id: str
    task: str
    prefix: str
    target: str
    world: World
    meta: dict[str, Any]

    def to_record(self) -> dict[str, Any]:
        # Field order is part of the file format; JSON dicts preserve it.
        return {
            "id": self.id,
            "task": self.task,
            "prefix": self.prefix,
            "target": self.target,
            "world": world_to_dict(self.world),
            "meta": {k: self.meta.get(k) for k in META_KEYS},
        }

    @classmethod
    def from_record(cls, record: dict[str, Any]) -> "Scenario":
        try:
            task = record["task"]
            world = world_from_dict(task, record["world"])
            return cls(
                id=record["id"],
                task=task,
                prefix=record["prefix"],
                target=record["target"],
                world=world,
                meta=dict(record["meta"]),
            )
        except KeyError as exc:
            raise ParseError(f"scenario record is missing key {exc}") from exc
