"""Symbolic worlds and their exact oracles.

Two world kinds: container states (name -> multiset of objects) and grid maps
(rooms on an integer lattice, adjacent cells connected). The composite episode
carries an object from one container's room to another's along a route.

Everything here is a pure function over immutable values: oracles never touch
an RNG, and applying one returns a fresh state.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

# Listed in tie-break priority order: at equal BFS distance the canonical
# route prefers north over south over east over west.
DIRECTIONS = ("north", "south", "east", "west")

# x grows east, y grows north
DELTA = {"north": (0, 1), "south": (0, -1), "east": (1, 0), "west": (-1, 0)}

Coord = tuple[int, int]
Route = list[str]


@dataclass(frozen=True)
class MoveAction:
    object: str
    src: str
    dst: str


@dataclass(frozen=True)
class ContainerState:
    """Containers mapped to object multisets, plus first-mention order."""

    contents: dict[str, Counter]
    intro_order: tuple[str, ...]

    @classmethod
    def build(cls, contents: dict[str, list[str] | Counter], intro_order=None) -> "ContainerState":
        counters = {c: Counter(objs) for c, objs in contents.items()}
        for counter in counters.values():
            for obj in [o for o, n in counter.items() if n <= 0]:
                del counter[obj]
        order = tuple(intro_order) if intro_order is not None else tuple(counters)
        if sorted(order) != sorted(counters):
            raise ValueError("intro_order must be a permutation of the container names")
        return cls(counters, order)

    def objects_in(self, container: str) -> Counter:
        if container not in self.contents:
            raise ValueError(f"unknown container {container!r}")
        return self.contents[container]

    def total(self) -> Counter:
        """Multiset union over all containers (conservation checks)."""
        out: Counter = Counter()
        for c in self.contents.values():
            out.update(c)
        return out

    def n_objects(self) -> int:
        return sum(self.total().values())


def apply_move(state: ContainerState, action: MoveAction) -> ContainerState:
    """Move one copy of the object from src to dst; src == dst is a no-op."""
    for name in (action.src, action.dst):
        if name not in state.contents:
            raise ValueError(f"unknown container {name!r}")
    if state.contents[action.src][action.object] < 1:
        raise ValueError(f"object {action.object!r} not in container {action.src!r}")
    new = {c: Counter(objs) for c, objs in state.contents.items()}
    if action.src != action.dst:
        new[action.src][action.object] -= 1
        if new[action.src][action.object] == 0:
            del new[action.src][action.object]
        new[action.dst][action.object] += 1
    return ContainerState(new, state.intro_order)


@dataclass(frozen=True)
class GridMap:
    """Named rooms at distinct lattice coordinates.

    `spans` records how the map was introduced: (room, direction, anchor)
    triples in placement order, rooted at `origin`. Surface rendering follows
    this trace, so it is part of the world, not presentation state.
    """

    rooms: dict[str, Coord]
    origin: str
    spans: tuple[tuple[str, str, str], ...] = ()

    @classmethod
    def from_trace(cls, origin: str, spans) -> "GridMap":
        rooms: dict[str, Coord] = {origin: (0, 0)}
        occupied = {(0, 0)}
        norm = []
        for room, direction, anchor in spans:
            if anchor not in rooms:
                raise ValueError(f"span anchors unknown room {anchor!r}")
            if room in rooms:
                raise ValueError(f"room {room!r} placed twice")
            if direction not in DELTA:
                raise ValueError(f"unknown direction {direction!r}")
            ax, ay = rooms[anchor]
            dx, dy = DELTA[direction]
            cell = (ax + dx, ay + dy)
            if cell in occupied:
                raise ValueError(f"room {room!r} lands on an occupied cell {cell}")
            rooms[room] = cell
            occupied.add(cell)
            norm.append((room, direction, anchor))
        return cls(rooms, origin, tuple(norm))

    def room_at(self, coord: Coord) -> str | None:
        for room, c in self.rooms.items():
            if c == coord:
                return room
        return None

    def neighbors(self, room: str):
        """(direction, room) pairs for adjacent cells, in priority order."""
        x, y = self.rooms[room]
        by_coord = {c: r for r, c in self.rooms.items()}
        out = []
        for d in DIRECTIONS:
            dx, dy = DELTA[d]
            other = by_coord.get((x + dx, y + dy))
            if other is not None:
                out.append((d, other))
        return out


@dataclass
class MapValidation:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> str | None:
        return self.violations[0] if self.violations else None


def validate_map(gmap: GridMap) -> MapValidation:
    """Check distinct coordinates and connectivity; names are unique by type."""
    result = MapValidation()
    seen: dict[Coord, str] = {}
    for room, coord in gmap.rooms.items():
        if coord in seen:
            result.violations.append(
                f"coordinate collision: {room!r} and {seen[coord]!r} both at {coord}"
            )
        else:
            seen[coord] = room
    if gmap.rooms and not result.violations:
        start = next(iter(gmap.rooms))
        reached = {start}
        frontier = [start]
        while frontier:
            room = frontier.pop()
            for _, other in gmap.neighbors(room):
                if other not in reached:
                    reached.add(other)
                    frontier.append(other)
        if len(reached) != len(gmap.rooms):
            missing = sorted(set(gmap.rooms) - reached)
            result.violations.append(f"disconnected: cannot reach {missing}")
    return result


def bfs_distances(gmap: GridMap, src: str) -> dict[str, int]:
    dist = {src: 0}
    queue = [src]
    while queue:
        nxt = []
        for room in queue:
            for _, other in gmap.neighbors(room):
                if other not in dist:
                    dist[other] = dist[room] + 1
                    nxt.append(other)
        queue = nxt
    return dist


def shortest_path_count(gmap: GridMap, src: str, dst: str) -> tuple[int, int]:
    """(distance, number of distinct shortest paths) from src to dst."""
    dist = {src: 0}
    ways = {src: 1}
    queue = [src]
    while queue:
        nxt = []
        for room in queue:
            for _, other in gmap.neighbors(room):
                if other not in dist:
                    dist[other] = dist[room] + 1
                    ways[other] = ways[room]
                    nxt.append(other)
                elif dist[other] == dist[room] + 1:
                    ways[other] += ways[room]
        queue = nxt
    if dst not in dist:
        raise ValueError(f"{dst!r} unreachable from {src!r}")
    return dist[dst], ways[dst]


def route_between(gmap: GridMap, src: str, dst: str) -> Route:
    """A shortest route src -> dst, ties broken by direction priority."""
    if src == dst:
        raise ValueError("src and dst must differ")
    for room in (src, dst):
        if room not in gmap.rooms:
            raise ValueError(f"unknown room {room!r}")
    dist = bfs_distances(gmap, dst)
    if src not in dist:
        raise ValueError(f"{dst!r} unreachable from {src!r}")
    route = []
    here = src
    while here != dst:
        for d, other in gmap.neighbors(here):
            if dist.get(other, -1) == dist[here] - 1:
                route.append(d)
                here = other
                break
        else:
            raise AssertionError("BFS distance field has no descent step")
    return route


def execute_route(gmap: GridMap, start: str, route: Route) -> str:
    """Follow the route cell by cell; every intermediate cell must be a room."""
    if start not in gmap.rooms:
        raise ValueError(f"unknown room {start!r}")
    by_coord = {c: r for r, c in gmap.rooms.items()}
    x, y = gmap.rooms[start]
    here = start
    for i, step in enumerate(route):
        if step not in DELTA:
            raise ValueError(f"step {i}: unknown direction {step!r}")
        dx, dy = DELTA[step]
        x, y = x + dx, y + dy
        room = by_coord.get((x, y))
        if room is None:
            raise ValueError(f"step {i}: moving {step} from {here!r} leaves the map")
        here = room
    return here


@dataclass(frozen=True)
class HardObjectEpisode:
    """Pick an object, walk the route from its container's room, place it."""

    gmap: GridMap
    placements: dict[str, str]
    state: ContainerState
    pick_object: str
    pick_src: str
    route: tuple[str, ...]


def container_in_room(placements: dict[str, str], room: str) -> str | None:
    hits = [c for c, r in placements.items() if r == room]
    if len(hits) > 1:
        raise ValueError(f"room {room!r} holds more than one container: {sorted(hits)}")
    return hits[0] if hits else None


def simulate_hard_object(ep: HardObjectEpisode) -> ContainerState:
    if ep.pick_src not in ep.placements:
        raise ValueError(f"container {ep.pick_src!r} has no room placement")
    start = ep.placements[ep.pick_src]
    end_room = execute_route(ep.gmap, start, list(ep.route))
    dst = container_in_room(ep.placements, end_room)
    if dst is None:
        raise ValueError(f"route ends in {end_room!r}, which holds no container")
    return apply_move(ep.state, MoveAction(ep.pick_object, ep.pick_src, dst))
