"""Bijective pseudo-word substitution over the fixed template vocabulary.

Slot fillers (the sampled object/container/room words) stay in English; every
fixed template word, including the four direction words, maps to an invented
lowercase string. Capitalization is carried by the token position, not the
map, so "The" and "the" share one entry.
"""

from __future__ import annotations

import hashlib
import random
import string
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import ParseError
from .render import template_vocabulary

PSEUDO_MIN_LEN = 3
PSEUDO_MAX_LEN = 9


@dataclass(frozen=True)
class GibberishMap:
    forward: dict[str, str]
    inverse: dict[str, str] = field(init=False)

    def __post_init__(self):
        inv = {}
        for english, pseudo in self.forward.items():
            if pseudo in inv:
                raise ValueError(f"pseudo-word {pseudo!r} used twice")
            inv[pseudo] = english
        object.__setattr__(self, "inverse", inv)

    def digest(self) -> str:
        return "sha256:" + hashlib.sha256(self.to_tsv().encode("utf-8")).hexdigest()

    def to_tsv(self) -> str:
        return "".join(f"{e}\t{g}\n" for e, g in sorted(self.forward.items()))

    @classmethod
    def from_tsv(cls, text: str) -> "GibberishMap":
        forward = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ParseError(f"line {lineno}: expected 2 tab-separated fields")
            english, pseudo = fields
            if english in forward:
                raise ParseError(f"line {lineno}: duplicate entry for {english!r}")
            forward[english] = pseudo
        return cls(forward)


def save_gibberish_map(gmap: GibberishMap, path: str | Path) -> None:
    Path(path).write_text(gmap.to_tsv(), encoding="utf-8")


def load_gibberish_map(path: str | Path) -> GibberishMap:
    return GibberishMap.from_tsv(Path(path).read_text(encoding="utf-8"))


def build_gibberish_map(seed: int, avoid_words: Iterable[str] = ()) -> GibberishMap:
    """Deterministic pseudo-word per template word, collision-free against the
    template vocabulary itself and against `avoid_words` (pass the lexicon)."""
    rng = random.Random(seed)
    vocab = sorted(template_vocabulary())
    taken = set(vocab) | {w.lower() for w in avoid_words}
    forward = {}
    for english in vocab:
        while True:
            length = rng.randint(PSEUDO_MIN_LEN, PSEUDO_MAX_LEN)
            pseudo = "".join(rng.choice(string.ascii_lowercase) for _ in range(length))
            if pseudo not in taken:
                break
        taken.add(pseudo)
        forward[english] = pseudo
    return GibberishMap(forward)


def _substitute(text: str, table: dict[str, str], slot_words: set[str] | None) -> str:
    out = []
    for token in text.split(" "):
        core = token.rstrip(".,")
        suffix = token[len(core):]
        lower = core.lower()
        if lower in table:
            sub = table[lower]
            if core[:1].isupper():
                sub = sub.capitalize()
            out.append(sub + suffix)
        elif core == "" or core.isdigit():
            out.append(token)
        elif slot_words is not None and lower not in slot_words:
            raise ParseError(f"token {core!r} is neither a template word nor a slot filler")
        else:
            out.append(token)
    return " ".join(out)


def apply_gibberish(text: str, gmap: GibberishMap, slot_words: Iterable[str] | None = None) -> str:
    slots = _slot_token_set(slot_words)
    return _substitute(text, gmap.forward, slots)


def invert_gibberish(text: str, gmap: GibberishMap, slot_words: Iterable[str] | None = None) -> str:
    slots = _slot_token_set(slot_words)
    return _substitute(text, gmap.inverse, slots)


def _slot_token_set(slot_words: Iterable[str] | None) -> set[str] | None:
    """Slot phrases may be multi-token ("to run"); membership is per token."""
    if slot_words is None:
        return None
    slots = set()
    for w in slot_words:
        slots.update(w.lower().split(" "))
    return slots
