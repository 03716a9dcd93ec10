"""Words, partial words, lines and convex subspaces of U_{M,Λ}.

Grounds are initial segments ``0..m-1`` of the naturals and letters are the
indices ``0..k-1``.  A word is a plain tuple of letter indices; position 0 is
the least significant digit of its rank.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

Word = tuple[int, ...]


class RankOutOfRange(ValueError):
    pass


class DomainMismatch(ValueError):
    pass


def check_word(w: Sequence[int], k: int, m: int | None = None) -> Word:
    w = tuple(int(x) for x in w)
    if k < 1:
        raise ValueError(f"alphabet size must be positive, got {k}")
    if m is not None and len(w) != m:
        raise ValueError(f"word {w} has length {len(w)}, expected {m}")
    for x in w:
        if not 0 <= x < k:
            raise ValueError(f"letter {x} outside alphabet of size {k}")
    return w


def rank_word(w: Sequence[int], k: int) -> int:
    r = 0
    for x in reversed(w):
        r = r * k + x
    return r


def unrank_word(r: int, m: int, k: int) -> Word:
    if r < 0 or r >= k**m:
        raise RankOutOfRange(f"rank {r} outside [0, {k}^{m})")
    out = []
    for _ in range(m):
        r, x = divmod(r, k)
        out.append(x)
    return tuple(out)


def all_words(m: int, k: int) -> Iterator[Word]:
    """All words of length m in rank order."""
    for w in itertools.product(range(k), repeat=m):
        yield w[::-1]


def position_weights(m: int, k: int) -> np.ndarray:
    return np.array([k**a for a in range(m)], dtype=np.int64)


@dataclass(frozen=True)
class PartialWord:
    """A letter assignment on a subset of the ground, stored sorted by position."""

    items: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        items = tuple(sorted((int(p), int(x)) for p, x in self.items))
        positions = [p for p, _ in items]
        if len(set(positions)) != len(positions):
            raise ValueError(f"duplicate positions in partial word {items}")
        object.__setattr__(self, "items", items)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> "PartialWord":
        return cls(tuple(mapping.items()))

    @classmethod
    def constant(cls, positions: Iterable[int], letter: int) -> "PartialWord":
        return cls(tuple((p, letter) for p in positions))

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.items)

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def __getitem__(self, p: int) -> int:
        return self.as_dict()[p]

    def __len__(self) -> int:
        return len(self.items)

    def union(self, other: "PartialWord") -> "PartialWord":
        if set(self.domain) & set(other.domain):
            raise DomainMismatch("partial words overlap")
        return PartialWord(self.items + other.items)

    def restrict(self, positions: Iterable[int]) -> "PartialWord":
        keep = set(positions)
        return PartialWord(tuple((p, x) for p, x in self.items if p in keep))

    def to_json(self) -> list[list[int]]:
        return [[p, x] for p, x in self.items]

    @classmethod
    def from_json(cls, data) -> "PartialWord":
        if isinstance(data, dict):
            return cls(tuple((int(p), int(x)) for p, x in data.items()))
        return cls(tuple((int(p), int(x)) for p, x in data))


@dataclass(frozen=True)
class SupportForm:
    base_letter: int
    support: tuple[int, ...]
    values: tuple[int, ...]

    def key(self) -> tuple[int, tuple[int, ...]]:
        """The data that decides alpha-isomorphism: support size and letters."""
        return len(self.support), self.values


def support_form(w: Sequence[int], base: int) -> SupportForm:
    support = tuple(a for a, x in enumerate(w) if x != base)
    return SupportForm(base, support, tuple(w[a] for a in support))


def word_from_support(form: SupportForm, m: int) -> Word:
    """Rebuild eta_{alpha, beta, u} on a ground of size m."""
    w = [form.base_letter] * m
    for a, x in zip(form.support, form.values):
        w[a] = x
    return tuple(w)


def assemble_word(inner: Sequence[int], injection: Sequence[int],
                  fill: PartialWord, m: int) -> Word:
    """Return (inner o injection^{-1}) u fill as a word on 0..m-1.

    ``injection[i]`` is the image of the i-th position of the inner ground.
    """
    if len(inner) != len(injection):
        raise DomainMismatch("inner word and injection differ in length")
    if len(set(injection)) != len(injection):
        raise DomainMismatch("injection is not one-to-one")
    fd = fill.as_dict()
    covered = set(injection) | set(fd)
    if set(injection) & set(fd) or covered != set(range(m)) or len(injection) + len(fd) != m:
        raise DomainMismatch(
            f"injection range {sorted(injection)} and fill domain {sorted(fd)} "
            f"do not partition 0..{m - 1}")
    out = [0] * m
    for p, x in fd.items():
        out[p] = x
    for x, p in zip(inner, injection):
        out[p] = x
    return tuple(out)


@dataclass(frozen=True)
class Line:
    moving: tuple[int, ...]
    fixed: PartialWord

    def as_subspace(self) -> "ConvexSubspace":
        return ConvexSubspace((tuple(sorted(self.moving)),), self.fixed)


@dataclass(frozen=True)
class ConvexSubspace:
    """Blocks M_0 < ... < M_{m-1} that each carry one letter, plus a fixed part.

    The constructor only normalizes; use :func:`validate_subspace` to check the
    ordering and partition conditions.
    """

    blocks: tuple[tuple[int, ...], ...]
    fixed: PartialWord

    def __post_init__(self):
        object.__setattr__(self, "blocks",
                           tuple(tuple(sorted(int(p) for p in b)) for b in self.blocks))

    @property
    def dim(self) -> int:
        return len(self.blocks)

    @property
    def length(self) -> int:
        return sum(len(b) for b in self.blocks) + len(self.fixed)

    def block_index(self) -> dict[int, int]:
        return {p: l for l, b in enumerate(self.blocks) for p in b}

    def to_json(self) -> dict:
        return {"blocks": [list(b) for b in self.blocks], "fixed": self.fixed.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "ConvexSubspace":
        return cls(tuple(tuple(b) for b in data["blocks"]),
                   PartialWord.from_json(data["fixed"]))


def validate_subspace(s: ConvexSubspace, m: int | None = None) -> list[str]:
    """Return the violated conditions (empty list when valid)."""
    problems = []
    if any(len(b) == 0 for b in s.blocks):
        problems.append("empty block")
    seen: set[int] = set()
    for b in s.blocks:
        if seen & set(b):
            problems.append("blocks overlap")
            break
        seen |= set(b)
    for l0 in range(len(s.blocks)):
        for l1 in range(l0 + 1, len(s.blocks)):
            b0, b1 = s.blocks[l0], s.blocks[l1]
            if b0 and b1 and max(b0) >= min(b1):
                problems.append(f"block order: block {l0} does not precede block {l1}")
    fd = set(s.fixed.domain)
    if fd & seen:
        problems.append("fixed part meets a block")
    if m is None:
        m = len(seen | fd)
    if (seen | fd) != set(range(m)):
        problems.append(f"blocks and fixed part do not cover 0..{m - 1}")
    return problems


def subspace_offsets(blocks: Sequence[Sequence[int]], k: int) -> np.ndarray:
    """Rank offsets of the k^dim letter choices for the blocks, in rank order."""
    ranks = np.arange(k ** len(blocks), dtype=np.int64)
    offs = np.zeros_like(ranks)
    for l, b in enumerate(blocks):
        offs += (ranks // k**l) % k * sum(k**a for a in b)
    return offs


def enumerate_subspace(s: ConvexSubspace, k: int) -> list[Word]:
    m = s.length
    fd = s.fixed.as_dict()
    out = []
    for choice in all_words(s.dim, k):
        w = [0] * m
        for p, x in fd.items():
            w[p] = x
        for letter, b in zip(choice, s.blocks):
            for p in b:
                w[p] = letter
        out.append(tuple(w))
    return out


def block_layouts(m: int, dim: int) -> list[tuple[tuple[int, ...], ...]]:
    """All block sequences of convex dim-dimensional subspaces of an m-ground.

    Sorted lexicographically as tuples of sorted position tuples.
    """
    layouts = []
    for labels in itertools.product(range(dim + 1), repeat=m):
        blocks = [[] for _ in range(dim)]
        for p, lab in enumerate(labels):
            if lab:
                blocks[lab - 1].append(p)
        if any(not b for b in blocks):
            continue
        if any(blocks[l][-1] >= blocks[l + 1][0] for l in range(dim - 1)):
            continue
        layouts.append(tuple(tuple(b) for b in blocks))
    layouts.sort()
    return layouts


def iter_subspaces(m: int, k: int, dim: int) -> Iterator[ConvexSubspace]:
    """Convex subspaces in canonical order: blocks lexicographic, then fill by rank."""
    for blocks in block_layouts(m, dim):
        used = {p for b in blocks for p in b}
        rest = [p for p in range(m) if p not in used]
        for fill in all_words(len(rest), k):
            yield ConvexSubspace(blocks, PartialWord(tuple(zip(rest, fill))))


@dataclass(frozen=True)
class GridPattern:
    """A homothetic grid {offset_e + difference * i_e | i_e < side} in U_{h,n}."""

    difference: int
    offsets: tuple[int, ...]
    side: int

    def points(self) -> list[Word]:
        h = len(self.offsets)
        return [tuple(o + self.difference * i for o, i in zip(self.offsets, idx))
                for idx in all_words(h, self.side)]

    def check(self, n: int, strict: bool = True) -> list[str]:
        problems = []
        if self.difference <= 0:
            problems.append("difference must be positive")
        reach = self.side if strict else self.side - 1
        for e, o in enumerate(self.offsets):
            if o < 0 or o + self.difference * reach >= n:
                problems.append(f"coordinate {e} leaves the range 0..{n - 1}")
        return problems

    def to_json(self) -> dict:
        return {"difference": self.difference, "offsets": list(self.offsets),
                "side": self.side}
