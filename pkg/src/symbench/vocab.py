"""Lexicon loading and word-set derivation.

A lexicon is a TSV of (word, pos, freq_rank, concreteness) rows. From it we
derive the named word sets used by the scenario generators: train/val noun
splits, most-common and most-concrete subsets, verbs ("to"-prefixed or bare),
and random alphanumeric pseudo-words. All derivations are deterministic given
their seeds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import LexiconError

POS_TAGS = ("noun", "verb", "other")

RANDOM_STRING_ALPHABET = "abcdefghijklmnopqrstuvwxyz0123456789"

# Fixed seeds for the documented default derivations. Changing any of these
# changes every derived dataset, so they are part of the published defaults.
DEFAULT_SPLIT_SEED = 7
DEFAULT_RANDOM_SUBSET_SEED = 11
DEFAULT_RANDOM_STRING_SEED = 5

DEFAULT_TRAIN_FRACTION = 0.75


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    pos: str
    freq_rank: int
    concreteness: float | None = None


@dataclass(frozen=True)
class RandomStringSpec:
    min_len: int = 5
    max_len: int = 10
    alphabet: str = RANDOM_STRING_ALPHABET

    def __post_init__(self):
        if not (1 <= self.min_len <= self.max_len):
            raise ValueError(f"need 1 <= min_len <= max_len, got [{self.min_len}, {self.max_len}]")
        if len(set(self.alphabet)) != len(self.alphabet) or not self.alphabet:
            raise ValueError("alphabet must be non-empty without repeats")


@dataclass(frozen=True)
class WordSet:
    """An ordered, duplicate-free list of tokens with a provenance tag.

    Empty sets are constructible (e.g. a lexicon with no verbs partitions to
    an empty verb set); sampling from one fails at the call site.
    """

    name: str
    words: tuple[str, ...]
    provenance: str = "custom"

    def __post_init__(self):
        if len(set(self.words)) != len(self.words):
            raise ValueError(f"word set {self.name!r} contains duplicates")

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in set(self.words)


class Lexicon:
    """Deduplicated lexicon entries indexed by (word, pos)."""

    def __init__(self, entries: Iterable[LexiconEntry]):
        by_key: dict[tuple[str, str], LexiconEntry] = {}
        for e in entries:
            key = (e.word, e.pos)
            prev = by_key.get(key)
            if prev is None or e.freq_rank < prev.freq_rank:
                by_key[key] = e
        self._by_key = by_key
        self._by_word: dict[str, list[LexiconEntry]] = {}
        for e in by_key.values():
            self._by_word.setdefault(e.word, []).append(e)
        for group in self._by_word.values():
            group.sort(key=lambda e: e.freq_rank)

    def __len__(self):
        return len(self._by_key)

    def __contains__(self, word: str):
        return word in self._by_word

    @property
    def entries(self) -> list[LexiconEntry]:
        return sorted(self._by_key.values(), key=lambda e: (e.freq_rank, e.word, e.pos))

    def words_tagged(self, pos: str) -> list[str]:
        """All words carrying the given tag, ordered by frequency rank."""
        found = [e for e in self._by_key.values() if e.pos == pos]
        found.sort(key=lambda e: (e.freq_rank, e.word))
        return [e.word for e in found]

    def primary_entry(self, word: str) -> LexiconEntry:
        """The lowest-ranked entry for a word (its most common reading)."""
        try:
            return self._by_word[word][0]
        except KeyError:
            raise KeyError(f"word {word!r} not in lexicon") from None

    def rank(self, word: str) -> int:
        return self.primary_entry(word).freq_rank

    def concreteness(self, word: str) -> float | None:
        return self.primary_entry(word).concreteness


def load_lexicon(path: str | Path) -> Lexicon:
    """Parse a lexicon TSV; duplicate (word, pos) rows keep the lowest rank."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        raise LexiconError(f"{path}: empty lexicon file")
    lines = text.splitlines()
    header = lines[0].split("\t")
    if header != ["word", "pos", "freq_rank", "concreteness"]:
        raise LexiconError(f"{path}:1: bad header {lines[0]!r}")
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise LexiconError(f"{path}:{lineno}: expected 4 tab-separated fields, got {len(fields)}")
        word, pos, rank_s, conc_s = fields
        if not word:
            raise LexiconError(f"{path}:{lineno}: empty word")
        if pos not in POS_TAGS:
            raise LexiconError(f"{path}:{lineno}: unknown pos {pos!r}")
        try:
            rank = int(rank_s)
        except ValueError:
            raise LexiconError(f"{path}:{lineno}: freq_rank {rank_s!r} is not an integer") from None
        if rank < 1:
            raise LexiconError(f"{path}:{lineno}: freq_rank must be positive, got {rank}")
        conc = None
        if conc_s != "":
            try:
                conc = float(conc_s)
            except ValueError:
                raise LexiconError(f"{path}:{lineno}: concreteness {conc_s!r} is not a number") from None
            if not (1.0 <= conc <= 5.0):
                raise LexiconError(f"{path}:{lineno}: concreteness {conc} outside [1, 5]")
        entries.append(LexiconEntry(word, pos, rank, conc))
    if not entries:
        raise LexiconError(f"{path}: no entries")
    return Lexicon(entries)


def load_wordset(path: str | Path, name: str | None = None, provenance: str = "custom") -> WordSet:
    """Read a one-token-per-line word file; '#' lines are comments."""
    path = Path(path)
    words = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return WordSet(name or path.stem, tuple(words), provenance)


def save_wordset(ws: WordSet, path: str | Path) -> None:
    Path(path).write_text("".join(w + "\n" for w in ws.words), encoding="utf-8")


def partition_pos(lex: Lexicon) -> tuple[WordSet, WordSet]:
    """Split a lexicon into nouns and verbs, dropping words tagged as both."""
    if len(lex) == 0:
        raise ValueError("cannot partition an empty lexicon")
    nouns = lex.words_tagged("noun")
    verbs = lex.words_tagged("verb")
    both = set(nouns) & set(verbs)
    nouns = tuple(w for w in nouns if w not in both)
    verbs = tuple(w for w in verbs if w not in both)
    return (WordSet("nouns", nouns), WordSet("verbs", verbs, provenance="verbs"))


def split_train_val(
    nouns: WordSet, train_fraction: float = DEFAULT_TRAIN_FRACTION, seed: int = DEFAULT_SPLIT_SEED
) -> tuple[WordSet, WordSet]:
    """Deterministic disjoint split with |train| = round(fraction * n)."""
    if not (0.0 < train_fraction < 1.0):
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if len(nouns) < 2:
        raise ValueError(f"need at least 2 words to split, got {len(nouns)}")
    shuffled = list(nouns.words)
    random.Random(seed).shuffle(shuffled)
    n_train = round(train_fraction * len(shuffled))
    train = tuple(shuffled[:n_train])
    val = tuple(shuffled[n_train:])
    return (
        WordSet("train_nouns", train, provenance="train_nouns"),
        WordSet("val_nouns", val, provenance="val_nouns"),
    )


def top_common(ws: WordSet, lex: Lexicon, n: int) -> WordSet:
    """The n lowest-frequency-rank members of ws, ordered by rank."""
    if n > len(ws):
        raise ValueError(f"requested {n} words but {ws.name!r} has only {len(ws)}")
    ranked = sorted(ws.words, key=lambda w: (lex.rank(w), w))
    return WordSet(f"{ws.name}-common-{n}", tuple(ranked[:n]))


def top_concrete(ws: WordSet, lex: Lexicon, n: int) -> WordSet:
    """The n highest-concreteness members of ws; unrated words are excluded.

    Ties break by frequency rank, then lexicographically, so the result is a
    pure function of (ws, lex, n).
    """
    rated = [w for w in ws.words if lex.concreteness(w) is not None]
    if n > len(rated):
        raise ValueError(f"requested {n} words but {ws.name!r} has only {len(rated)} rated")
    rated.sort(key=lambda w: (-lex.concreteness(w), lex.rank(w), w))
    return WordSet(f"{ws.name}-concrete-{n}", tuple(rated[:n]))


def gen_random_strings(spec: RandomStringSpec, count: int, seed: int) -> WordSet:
    """Distinct alphanumeric strings, length uniform in [min_len, max_len]."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = random.Random(seed)
    seen: dict[str, None] = {}
    attempts = 0
    while len(seen) < count:
        if attempts >= 10 * count:
            raise LexiconError(
                f"could not draw {count} distinct random strings in {attempts} attempts"
            )
        attempts += 1
        length = rng.randint(spec.min_len, spec.max_len)
        s = "".join(rng.choice(spec.alphabet) for _ in range(length))
        seen.setdefault(s, None)
    return WordSet("random_strings", tuple(seen), provenance="random_strings")


def sample_words(ws: WordSet, k: int, rng: random.Random) -> list[str]:
    """k distinct words drawn uniformly without replacement."""
    if k > len(ws):
        raise ValueError(f"cannot sample {k} words from {ws.name!r} of size {len(ws)}")
    return rng.sample(list(ws.words), k)


def to_verbs(verbs: WordSet) -> WordSet:
    return WordSet("to_verbs", tuple("to " + v for v in verbs.words), provenance="to_verbs")


def data_path(filename: str) -> Path:
    """Path of a bundled data file (demo lexicon, default word lists)."""
    return Path(resources.files("symbench.data") / filename)


def load_demo_lexicon() -> Lexicon:
    return load_lexicon(data_path("demo_lexicon.tsv"))


@dataclass(frozen=True)
class WordBankConfig:
    """Knobs for the standard word-set derivation pipeline.

    top_n is 2000 at full scale; with the small bundled lexicon pass
    something the noun pools can cover.
    """

    train_fraction: float = DEFAULT_TRAIN_FRACTION
    split_seed: int = DEFAULT_SPLIT_SEED
    random_subset_seed: int = DEFAULT_RANDOM_SUBSET_SEED
    random_string_seed: int = DEFAULT_RANDOM_STRING_SEED
    top_n: int | None = None
    random_string_spec: RandomStringSpec = field(default_factory=RandomStringSpec)


def build_word_bank(
    lex: Lexicon, cfg: WordBankConfig = WordBankConfig()
) -> dict[str, WordSet]:
    """Derive every named word set the generator presets refer to.

    Container names are reserved before the train/val split so they never
    double as object names; this mirrors the three-way noun split the tasks
    assume. When cfg.top_n is None the common/concrete/random subsets are
    skipped (they are only needed for the word-set-condition presets).
    """
    nouns, verbs = partition_pos(lex)
    containers = load_wordset(data_path("containers.txt"), "containers", provenance="containers")
    pool = WordSet(nouns.name, tuple(w for w in nouns.words if w not in set(containers.words)))
    train, val = split_train_val(pool, cfg.train_fraction, cfg.split_seed)

    n_strings = cfg.top_n or max(len(train), 100)
    bank = {
        "train": train,
        "val": val,
        "nouns": pool,
        "verbs": verbs,
        "to_verbs": to_verbs(verbs),
        "random_strings": gen_random_strings(
            cfg.random_string_spec, n_strings, cfg.random_string_seed
        ),
        "containers": containers,
        "rooms": load_wordset(data_path("rooms.txt"), "rooms"),
        "sensible20": load_wordset(data_path("sensible20.txt"), "sensible20"),
    }
    if cfg.top_n is not None:
        sub_rng = random.Random(cfg.random_subset_seed)
        for label, base in (("train", train), ("val", val)):
            bank[f"{label}_common"] = top_common(base, lex, cfg.top_n)
            bank[f"{label}_concrete"] = top_concrete(base, lex, cfg.top_n)
            bank[f"{label}_random"] = WordSet(
                f"{label}_random", tuple(sample_words(base, cfg.top_n, sub_rng))
            )
    return bank


def resolve_wordset(bank: Mapping[str, WordSet], name: str) -> WordSet:
    try:
        return bank[name]
    except KeyError:
        known = ", ".join(sorted(bank))
        raise KeyError(f"unknown word set {name!r}; available: {known}") from None
