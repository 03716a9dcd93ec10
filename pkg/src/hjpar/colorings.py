"""C-colorings of U_{M,Λ} and of the set systems [n]^{<l}.

A :class:`Coloring` is always backed by a dense read-only table indexed by
``rank_word``; generator families keep their name and parameters so they can be
serialized compactly.

The ``random`` family is the SplitMix64 stream: with ``state = seed`` and
``state += 0x9E3779B97F4A7C15`` before each output, the word of rank r gets
``mix(state_r) % colors_n`` where ``state_r = seed + (r + 1) * 0x9E3779B97F4A7C15``
(mod 2^64) and ``mix`` is the standard SplitMix64 finalizer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from .core import DomainMismatch, PartialWord, Word, all_words, rank_word

GOLDEN = 0x9E3779B97F4A7C15
FAMILIES = ("constant", "parity", "random", "table")


class BadParams(ValueError):
    pass


class SpaceMismatch(ValueError):
    pass


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First ``count`` outputs of SplitMix64 seeded with ``seed``."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed % 2**64) + idx * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return z


@dataclass(frozen=True, eq=False)
class Coloring:
    length: int
    alphabet: int
    colors_n: int
    table: np.ndarray = field(repr=False)
    family: str = "table"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        if t.shape != (self.alphabet ** self.length,):
            raise BadParams(f"table has shape {t.shape}, expected ({self.alphabet ** self.length},)")
        if t.size and (t.min() < 0 or t.max() >= self.colors_n):
            raise BadParams(f"table values must lie in 0..{self.colors_n - 1}")
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    def color(self, w: Sequence[int]) -> int:
        return int(self.table[rank_word(w, self.alphabet)])

    __call__ = color

    def same_space(self, other: "Coloring") -> bool:
        return (self.length, self.alphabet) == (other.length, other.alphabet)

    def __eq__(self, other):
        if not isinstance(other, Coloring):
            return NotImplemented
        return (self.same_space(other) and self.colors_n == other.colors_n
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.length, self.alphabet, self.colors_n, self.table.tobytes()))

    def to_json(self, dense: bool | None = None) -> dict:
        out = {"format": "hjpar/coloring@1", "alphabet": self.alphabet,
               "length": self.length, "colors_n": self.colors_n}
        if dense is None:
            dense = self.family == "table"
        if dense:
            out["table"] = [int(x) for x in self.table]
        else:
            out["family"] = self.family
            out["params"] = dict(self.params)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Coloring":
        k, m, c = int(data["alphabet"]), int(data["length"]), int(data["colors_n"])
        if "table" in data:
            return cls(m, k, c, np.array(data["table"], dtype=np.int64))
        return make_coloring(data["family"], m, k, c, **data.get("params", {}))


def make_coloring(family: str, length: int, alphabet: int, colors_n: int,
                  **params: Any) -> Coloring:
    """Build a coloring of U_{length, alphabet} from a generator family."""
    if length < 0 or alphabet < 1 or colors_n < 1:
        raise BadParams("need length >= 0, alphabet >= 1, colors >= 1")
    size = alphabet**length
    if family == "constant":
        x = int(params.get("value", 0))
        if not 0 <= x < colors_n:
            raise BadParams(f"constant color {x} outside 0..{colors_n - 1}")
        table = np.full(size, x, dtype=np.int64)
        params = {"value": x}
    elif family == "parity":
        base = int(params.get("base", 0))
        if colors_n < 2:
            raise BadParams("parity coloring needs at least two colors")
        if not 0 <= base < alphabet:
            raise BadParams(f"base letter {base} outside alphabet")
        table = np.array([sum(1 for x in w if x == base) % 2
                          for w in all_words(length, alphabet)], dtype=np.int64)
        params = {"base": base}
    elif family == "random":
        seed = int(params.get("seed", 0))
        table = (splitmix64(seed, size) % np.uint64(colors_n)).astype(np.int64)
        params = {"seed": seed}
    elif family == "table":
        if "values" not in params:
            raise BadParams("table family needs values")
        table = np.asarray(params["values"], dtype=np.int64)
        return Coloring(length, alphabet, colors_n, table)
    else:
        raise BadParams(f"unknown family {family!r}; choose from {FAMILIES}")
    return Coloring(length, alphabet, colors_n, table, family, params)


def coloring_from_function(length: int, alphabet: int, colors_n: int,
                           fn: Callable[[Word], int]) -> Coloring:
    return Coloring(length, alphabet, colors_n,
                    np.array([fn(w) for w in all_words(length, alphabet)], dtype=np.int64))


def pack_colors(values: Sequence[int], sizes: Sequence[int]) -> int:
    """Little-endian mixed-radix packing of a color tuple."""
    out = 0
    for v, s in zip(reversed(values), reversed(sizes)):
        out = out * s + v
    return out


def unpack_colors(value: int, sizes: Sequence[int]) -> tuple[int, ...]:
    out = []
    for s in sizes:
        value, v = divmod(value, s)
        out.append(v)
    return tuple(out)


def tuple_coloring(cs: Sequence[Coloring]) -> Coloring:
    if not cs:
        raise BadParams("need at least one coloring")
    first = cs[0]
    for c in cs[1:]:
        if not c.same_space(first):
            raise SpaceMismatch("colorings live on different spaces")
    sizes = [c.colors_n for c in cs]
    table = np.zeros(first.table.shape, dtype=np.int64)
    scale = 1
    for c in cs:
        table += c.table * scale
        scale *= c.colors_n
    return Coloring(first.length, first.alphabet, prod(sizes), table)


def induced_coloring(c: Coloring, fill: PartialWord) -> Coloring:
    """Color U_{N,Λ}, N = complement of fill's domain, by eta -> c(eta u fill).

    Positions of N are relabeled 0..|N|-1 in increasing order.
    """
    fd = fill.as_dict()
    if any(not 0 <= p < c.length for p in fd):
        raise DomainMismatch("fill domain leaves the ground")
    free = [p for p in range(c.length) if p not in fd]
    k = c.alphabet
    base = sum(x * k**p for p, x in fd.items())
    ranks = base + positions_ranks(c.length, k, free)
    return Coloring(len(free), k, c.colors_n, c.table[ranks])


def positions_ranks(m: int, k: int, positions: Sequence[int]) -> np.ndarray:
    """Ranks in U_{m,k} of the words supported on ``positions`` (others 0), in inner rank order."""
    inner = len(positions)
    r = np.arange(k**inner, dtype=np.int64)
    out = np.zeros_like(r)
    for j, p in enumerate(positions):
        out += (r // k**j) % k * k**p
    return out


@dataclass(frozen=True, eq=False)
class SetColoring:
    """A coloring of [n]^{levels}: sets are increasing tuples of elements of 0..n-1.

    Cells are ordered by level, then lexicographically; ``table`` follows that order.
    Values may be any hashable (classifying colorings use tuples).
    """

    n: int
    levels: tuple[int, ...]
    colors_n: int | None
    values: dict = field(repr=False)

    @classmethod
    def from_function(cls, n: int, levels: Iterable[int], fn: Callable[[tuple], Hashable],
                      colors_n: int | None = None) -> "SetColoring":
        levels = tuple(sorted(set(levels)))
        vals = {u: fn(u) for u in set_cells(n, levels)}
        return cls(n, levels, colors_n, vals)

    @classmethod
    def from_table(cls, n: int, levels: Iterable[int], colors_n: int,
                   table: Sequence[int]) -> "SetColoring":
        levels = tuple(sorted(set(levels)))
        cells = set_cells(n, levels)
        if len(table) != len(cells):
            raise BadParams(f"table has {len(table)} entries, expected {len(cells)}")
        return cls(n, levels, colors_n, dict(zip(cells, (int(x) for x in table))))

    def __call__(self, u: Sequence[int]) -> Hashable:
        return self.values[tuple(u)]

    def table(self) -> list:
        return [self.values[u] for u in set_cells(self.n, self.levels)]

    def to_json(self) -> dict:
        return {"format": "hjpar/set-coloring@1", "n": self.n, "levels": list(self.levels),
                "colors_n": self.colors_n, "table": [int(x) for x in self.table()]}

    @classmethod
    def from_json(cls, data: dict) -> "SetColoring":
        return cls.from_table(int(data["n"]), data["levels"], int(data["colors_n"]),
                              data["table"])


def set_cells(n: int, levels: Iterable[int]) -> list[tuple[int, ...]]:
    return [u for l in sorted(levels) for u in itertools.combinations(range(n), l)]


def random_set_coloring(n: int, levels: Iterable[int], colors_n: int, seed: int) -> SetColoring:
    levels = tuple(sorted(set(levels)))
    cells = set_cells(n, levels)
    vals = splitmix64(seed, len(cells)) % np.uint64(colors_n)
    return SetColoring.from_table(n, levels, colors_n, [int(v) for v in vals])

