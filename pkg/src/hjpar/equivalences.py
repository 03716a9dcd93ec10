"""Permutation actions on words and the equivalences E_{H,M}, E_M and alpha-isomorphism."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterator, Sequence, Union

from .core import Word, all_words, rank_word, support_form


class GroundMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PermGroup:
    """A permutation group on 0..m-1 given by generators, or the full Sym(m)."""

    ground_length: int
    generators: tuple[tuple[int, ...], ...] = ()
    full: bool = False

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        for g in gens:
            if sorted(g) != list(range(self.ground_length)):
                raise ValueError(f"{g} is not a permutation of 0..{self.ground_length - 1}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def symmetric(cls, m: int) -> "PermGroup":
        return cls(m, adjacent_transpositions(m), full=True)

    def to_json(self) -> dict:
        return {"ground_length": self.ground_length,
                "generators": [list(g) for g in self.generators], "full": self.full}


def adjacent_transpositions(m: int) -> tuple[tuple[int, ...], ...]:
    gens = []
    for a in range(m - 1):
        p = list(range(m))
        p[a], p[a + 1] = p[a + 1], p[a]
        gens.append(tuple(p))
    return tuple(gens)


@dataclass(frozen=True)
class FullSym:
    def to_json(self) -> dict:
        return {"kind": "full"}


@dataclass(frozen=True)
class Subgroup:
    group: PermGroup

    def to_json(self) -> dict:
        return {"kind": "subgroup", "group": self.group.to_json()}


@dataclass(frozen=True)
class AlphaIso:
    base: int

    def to_json(self) -> dict:
        return {"kind": "alpha", "base": self.base}


EquivKind = Union[FullSym, Subgroup, AlphaIso]


def kind_from_json(data: dict) -> EquivKind:
    if data["kind"] == "full":
        return FullSym()
    if data["kind"] == "alpha":
        return AlphaIso(int(data["base"]))
    if data["kind"] == "subgroup":
        g = data["group"]
        return Subgroup(PermGroup(g["ground_length"], tuple(map(tuple, g["generators"])),
                                  g.get("full", False)))
    raise ValueError(f"unknown equivalence kind {data['kind']!r}")


def apply_perm(w: Sequence[int], perm: Sequence[int]) -> Word:
    """The word w o perm: position a receives w(perm(a))."""
    if len(perm) != len(w):
        raise GroundMismatch("permutation and word have different grounds")
    return tuple(w[perm[a]] for a in range(len(w)))


def orbit_of(w: Sequence[int], group: PermGroup) -> set[Word]:
    w = tuple(w)
    if group.ground_length != len(w):
        raise GroundMismatch("group and word have different grounds")
    if group.full:
        return set(_rearrangements(w))
    seen = {w}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        for g in group.generators:
            y = apply_perm(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _rearrangements(w: Word) -> Iterator[Word]:
    counts: dict[int, int] = {}
    for x in w:
        counts[x] = counts.get(x, 0) + 1
    letters = sorted(counts)
    out = [0] * len(w)

    def rec(pos):
        if pos == len(w):
            yield tuple(out)
            return
        for x in letters:
            if counts[x]:
                counts[x] -= 1
                out[pos] = x
                yield from rec(pos + 1)
                counts[x] += 1

    yield from rec(0)


def canonical_sorted(w: Sequence[int]) -> Word:
    return tuple(sorted(w))


def class_key(w: Sequence[int], kind: EquivKind) -> Hashable:
    """A key that is equal exactly for related words (orbits use their least-rank member)."""
    if isinstance(kind, FullSym):
        return canonical_sorted(w)
    if isinstance(kind, AlphaIso):
        return support_form(w, kind.base).key()
    return min(orbit_of(w, kind.group), key=lambda x: x[::-1])


def related(w1: Sequence[int], w2: Sequence[int], kind: EquivKind) -> bool:
    if len(w1) != len(w2):
        raise GroundMismatch(f"words of lengths {len(w1)} and {len(w2)}")
    if isinstance(kind, FullSym):
        return sorted(w1) == sorted(w2)
    if isinstance(kind, AlphaIso):
        return support_form(w1, kind.base).key() == support_form(w2, kind.base).key()
    return tuple(w2) in orbit_of(w1, kind.group)


def equivalence_classes(m: int, k: int, kind: EquivKind) -> list[list[Word]]:
    """Partition U_{m,k} into classes; each class lists words in rank order."""
    if isinstance(kind, Subgroup):
        if kind.group.ground_length != m:
            raise GroundMismatch("group and ground differ")
        seen: set[Word] = set()
        classes = []
        for w in all_words(m, k):
            if w in seen:
                continue
            orb = orbit_of(w, kind.group)
            seen |= orb
            classes.append(sorted(orb, key=lambda x: rank_word(x, k)))
        return classes
    buckets: dict[Hashable, list[Word]] = {}
    for w in all_words(m, k):
        buckets.setdefault(class_key(w, kind), []).append(w)
    return list(buckets.values())


def invariant_check(coloring, kind: EquivKind) -> tuple[Word, Word] | None:
    """Return None if related words always share a color, else a violating pair."""
    for cls in equivalence_classes(coloring.length, coloring.alphabet, kind):
        first = cls[0]
        c0 = coloring.color(first)
        for w in cls[1:]:
            if coloring.color(w) != c0:
                return first, w
    return None
