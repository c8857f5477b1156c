"""English surface templates and their inverse parser.

The templates are fixed; only slot fillers (object, container, room, and
direction words) vary. Object lists inside a sentence are alphabetized and the
final-state container order is canonical, so every world renders to exactly
one target string and `parse_final_state` inverts it.
"""

from __future__ import annotations

import re
from collections import Counter
from typing import Iterable

from .errors import ParseError
from .world import ContainerState, GridMap, MoveAction

PLACEMENT_STYLES = ("containing_first", "room_first")

_SENTENCE_RE = re.compile(r"^The (?P<c>.+?)(?: in the (?P<room>.+?))? contains (?P<list>.+)$")


def object_list(objects: Iterable[str] | Counter) -> str:
    """English list of "a X" items, alphabetized; empty renders "no objects"."""
    if isinstance(objects, Counter):
        items = sorted(objects.elements())
    else:
        items = sorted(objects)
    if not items:
        return "no objects"
    parts = [f"a {x}" for x in items]
    if len(parts) == 1:
        return parts[0]
    if len(parts) == 2:
        return f"{parts[0]} and {parts[1]}"
    return ", ".join(parts[:-1]) + ", and " + parts[-1]


def _container_order(state: ContainerState, first: str | None) -> list[str]:
    if first is None:
        return list(state.intro_order)
    if first not in state.contents:
        raise ValueError(f"unknown container {first!r}")
    return [first] + [c for c in state.intro_order if c != first]


def render_container_state(
    state: ContainerState,
    rooms: dict[str, str] | None = None,
    first: str | None = None,
) -> str:
    """One sentence per container. `first` pulls the receiving container to the
    front (the canonical target order); `rooms` switches to the located form
    "The {c} in the {room} contains ..."."""
    sentences = []
    for c in _container_order(state, first):
        contents = object_list(state.contents[c])
        if rooms is None:
            sentences.append(f"The {c} contains {contents}.")
        else:
            sentences.append(f"The {c} in the {rooms[c]} contains {contents}.")
    return " ".join(sentences)


def render_move(action: MoveAction) -> str:
    return f"Took a {action.object} from the {action.src} and put it in the {action.dst}."


def render_pick(obj: str, src: str, room: str) -> str:
    return f"Took a {obj} from the {src} in the {room}."


def render_map(gmap: GridMap) -> str:
    """Map sentences in placement-trace order."""
    if len(gmap.rooms) > 1 and len(gmap.spans) != len(gmap.rooms) - 1:
        raise ValueError("map has no complete placement trace to render from")
    return " ".join(
        f"The {room} is to the {direction} of the {anchor}."
        for room, direction, anchor in gmap.spans
    )


def route_clauses(route: Iterable[str]) -> str:
    """Answer-style clause chain without the final period."""
    steps = list(route)
    if not steps:
        raise ValueError("cannot render an empty route")
    return ", then ".join(f"to the {d}" for d in steps)


def render_route(route: Iterable[str], style: str = "answer") -> str:
    """Answer style spells each step; narration style run-length compresses."""
    steps = list(route)
    if not steps:
        raise ValueError("cannot render an empty route")
    if style == "answer":
        return route_clauses(steps) + "."
    if style != "narration":
        raise ValueError(f"unknown route style {style!r}")
    groups: list[tuple[str, int]] = []
    for d in steps:
        if groups and groups[-1][0] == d:
            groups[-1] = (d, groups[-1][1] + 1)
        else:
            groups.append((d, 1))
    clauses = []
    for d, k in groups:
        if k == 1:
            clauses.append(f"went to the {d}")
        elif k == 2:
            clauses.append(f"went to the {d} twice")
        else:
            clauses.append(f"went to the {d} {k} times")
    text = ", then ".join(clauses) + "."
    return text[0].upper() + text[1:]


def render_placements(
    state: ContainerState, placements: dict[str, str], styles: dict[str, str]
) -> str:
    """"There is a ..." sentence per container, in introduction order."""
    sentences = []
    for c in state.intro_order:
        contents = object_list(state.contents[c])
        room = placements[c]
        style = styles[c]
        if style == "containing_first":
            sentences.append(f"There is a {c} containing {contents} in the {room}.")
        elif style == "room_first":
            sentences.append(f"There is a {c} in the {room} containing {contents}.")
        else:
            raise ValueError(f"unknown placement style {style!r}")
    return " ".join(sentences)


def _parse_object_list(text: str, where: str) -> Counter:
    if text == "no objects":
        return Counter()
    if ", " in text:
        parts = text.split(", ")
        if not parts[-1].startswith("and "):
            raise ParseError(f"{where}: malformed list {text!r}")
        parts[-1] = parts[-1][len("and ") :]
    elif " and a " in text:
        left, right = text.split(" and a ", 1)
        parts = [left, "a " + right]
    else:
        parts = [text]
    objects: Counter = Counter()
    for part in parts:
        if not part.startswith("a ") or len(part) <= 2:
            raise ParseError(f"{where}: expected 'a <object>', got {part!r}")
        objects[part[2:]] += 1
    return objects


def parse_final_state_with_rooms(text: str) -> tuple[ContainerState, dict[str, str] | None]:
    """Inverse of render_container_state; returns room placements when the
    located sentence form was used."""
    text = text.strip()
    if not text:
        raise ParseError("empty final-state text")
    if not text.endswith("."):
        raise ParseError("final-state text must end with '.'")
    sentences = text[:-1].split(". ")
    contents: dict[str, Counter] = {}
    rooms: dict[str, str] = {}
    for i, sentence in enumerate(sentences):
        m = _SENTENCE_RE.match(sentence)
        if m is None:
            raise ParseError(f"sentence {i}: cannot parse {sentence!r}")
        c = m.group("c")
        if c in contents:
            raise ParseError(f"sentence {i}: container {c!r} described twice")
        contents[c] = _parse_object_list(m.group("list"), f"sentence {i}")
        if m.group("room") is not None:
            rooms[c] = m.group("room")
    state = ContainerState(contents, tuple(contents))
    return state, (rooms if rooms else None)


def parse_final_state(text: str) -> ContainerState:
    state, _ = parse_final_state_with_rooms(text)
    return state


def template_vocabulary() -> set[str]:
    """Every fixed (non-slot) word the templates can emit, lowercased.

    Direction words are included: they come from a closed four-word class that
    is part of the task grammar, unlike the open noun slots. Run-length counts
    ("3 times") are digits and are treated as slot content.
    """
    words = """
    the contains a and no objects took from put it in is to of get you must go
    if start will end there containing went then twice times placed
    north south east west
    """
    return set(words.split())
