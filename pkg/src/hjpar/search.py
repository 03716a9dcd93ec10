"""Brute-force witness finders and their validators.

Every finder returns the first witness in a documented order, or None:

* subspaces: block layouts in lexicographic order, then the fixed part by rank;
* grids: difference ascending, then the offset vector by rank;
* homogeneous sets: lexicographic order of increasing tuples;
* Par witnesses: sub-grounds in lexicographic order, then injections
  (increasing only unless widened), then fills by rank.

The validators re-check a witness by plain enumeration and share no code with
the vectorized finders.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .colorings import Coloring, SetColoring, make_coloring, positions_ranks
from .core import (ConvexSubspace, GridPattern, PartialWord, Word, all_words,
                   assemble_word, block_layouts, enumerate_subspace, subspace_offsets)
from .equivalences import AlphaIso, EquivKind, equivalence_classes, kind_from_json


# ---------------------------------------------------------------- subspaces

def _first_mono_in_layouts(table: np.ndarray, m: int, k: int,
                           layouts: Sequence[tuple]) -> ConvexSubspace | None:
    for blocks in layouts:
        used = {p for b in blocks for p in b}
        rest = [p for p in range(m) if p not in used]
        offs = subspace_offsets(blocks, k)
        bases = positions_ranks(m, k, rest)
        vals = table[bases[:, None] + offs[None, :]]
        hits = np.flatnonzero((vals == vals[:, :1]).all(axis=1))
        if hits.size:
            r = int(hits[0])
            fill = [(r // k**j) % k for j in range(len(rest))]
            return ConvexSubspace(blocks, PartialWord(tuple(zip(rest, fill))))
    return None


def _mono_chunk(args):
    return _first_mono_in_layouts(*args)


def find_mono_subspace(c: Coloring, dim: int, workers: int = 1) -> ConvexSubspace | None:
    """First monochromatic convex dim-dimensional subspace of c, or None."""
    if dim < 1:
        raise ValueError("dim must be at least 1")
    layouts = block_layouts(c.length, dim)
    if workers <= 1 or len(layouts) < 2:
        return _first_mono_in_layouts(c.table, c.length, c.alphabet, layouts)
    size = -(-len(layouts) // (4 * workers))
    chunks = [layouts[i:i + size] for i in range(0, len(layouts), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        args = [(c.table, c.length, c.alphabet, ch) for ch in chunks]
        for found in pool.map(_mono_chunk, args):
            if found is not None:
                return found
    return None


def is_mono_subspace(c: Coloring, s: ConvexSubspace) -> bool:
    colors = {c.color(w) for w in enumerate_subspace(s, c.alphabet)}
    return len(colors) == 1


# -------------------------------------------------------------------- grids

def find_grid_pattern(c: Coloring, side: int, strict: bool = True) -> GridPattern | None:
    """First grid {m_e + d*i_e | i_e < side} on which c is constant.

    ``c`` colors U_{h,n}: ``c.length`` is the grid dimension h and ``c.alphabet``
    is n.  With ``strict`` every coordinate must satisfy m_e + d*side < n;
    otherwise only the grid itself has to fit (m_e + d*(side-1) < n).
    """
    h, n = c.length, c.alphabet
    if h < 1 or side < 1:
        raise ValueError("need h >= 1 and side >= 1")
    reach = side if strict else side - 1
    weights = np.array([n**e for e in range(h)], dtype=np.int64)
    idx = np.array(list(all_words(h, side)), dtype=np.int64).reshape(-1, h)
    d = 1
    while True:
        top = n - 1 - d * reach
        if top < 0 or (reach == 0 and d > 1):
            return None
        offsets = np.array(list(all_words(h, top + 1)), dtype=np.int64).reshape(-1, h)
        grid = (idx * d) @ weights
        bases = offsets @ weights
        vals = c.table[bases[:, None] + grid[None, :]]
        hits = np.flatnonzero((vals == vals[:, :1]).all(axis=1))
        if hits.size:
            return GridPattern(d, tuple(int(x) for x in offsets[hits[0]]), side)
        d += 1


def grid_is_mono(c: Coloring, g: GridPattern) -> bool:
    return len({c.color(p) for p in g.points()}) == 1


# --------------------------------------------------------- homogeneous sets

def _first_level_homogeneous(n: int, m: int, levels: Sequence[int],
                             color: Callable[[tuple], Hashable]) -> tuple[int, ...] | None:
    """Lexicographically first B in [n]^m with color constant on [B]^l for each level."""
    levels = [l for l in levels if 0 < l <= m]
    chosen: list[int] = []
    consts: dict[int, list] = {l: [] for l in levels}

    def extend(start: int) -> bool:
        if len(chosen) == m:
            return True
        for x in range(start, n - (m - len(chosen)) + 1):
            pushed = []
            ok = True
            for l in levels:
                if l - 1 > len(chosen):
                    continue
                for sub in itertools.combinations(chosen, l - 1):
                    v = color(sub + (x,))
                    if consts[l]:
                        if v != consts[l][0]:
                            ok = False
                            break
                    else:
                        consts[l].append(v)
                        pushed.append(l)
                if not ok:
                    break
            if ok:
                chosen.append(x)
                if extend(x + 1):
                    return True
                chosen.pop()
            for l in pushed:
                consts[l].pop()
        return False

    if m > n:
        return None
    return tuple(chosen) if extend(0) else None


def find_homogeneous(c: SetColoring | Callable, target: int, l: int | None = None,
                     n: int | None = None) -> tuple[int, ...] | None:
    """First A in [n]^target with c constant on [A]^l."""
    if isinstance(c, SetColoring):
        n = c.n if n is None else n
        l = c.levels[-1] if l is None else l
    if n is None or l is None:
        raise ValueError("n and l are required for a plain callable")
    return _first_level_homogeneous(n, target, [l], c)


def find_ram_homogeneous(f: SetColoring | Callable, target: int,
                         levels: Sequence[int] | None = None,
                         n: int | None = None) -> tuple[int, ...] | None:
    """First B in [n]^target with f constant on each level [B]^k separately."""
    if isinstance(f, SetColoring):
        n = f.n if n is None else n
        levels = f.levels if levels is None else levels
    if n is None or levels is None:
        raise ValueError("n and levels are required for a plain callable")
    return _first_level_homogeneous(n, target, list(levels), f)


def is_homogeneous(color: Callable, A: Sequence[int], l: int) -> bool:
    return len({color(u) for u in itertools.combinations(sorted(A), l)}) <= 1


def is_ram_homogeneous(color: Callable, B: Sequence[int], levels: Iterable[int]) -> bool:
    return all(is_homogeneous(color, B, l) for l in levels)


# ------------------------------------------------------------ Par witnesses

@dataclass(frozen=True)
class ParWitness:
    """N (as increasing positions), the injection images f(N), the fill and the kind.

    For the default search the injection is the identity, so ``injection ==
    subset``.  Inner words live on 0..|N|-1 and position i is sent to
    ``injection[i]``.
    """

    subset: tuple[int, ...]
    injection: tuple[int, ...]
    fill: PartialWord
    kind: EquivKind

    def to_json(self) -> dict:
        return {"subset": list(self.subset), "injection": list(self.injection),
                "fill": self.fill.to_json(), "kind": self.kind.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "ParWitness":
        return cls(tuple(data["subset"]), tuple(data["injection"]),
                   PartialWord.from_json(data["fill"]), kind_from_json(data["kind"]))


@lru_cache(maxsize=256)
def _class_representatives(m: int, k: int, kind: EquivKind) -> np.ndarray:
    """rep[r] = inner rank of the least-rank word related to the word of rank r."""
    rep = np.arange(k**m, dtype=np.int64)
    for cls in equivalence_classes(m, k, kind):
        first = sum(x * k**a for a, x in enumerate(cls[0]))
        for w in cls[1:]:
            rep[sum(x * k**a for a, x in enumerate(w))] = first
    return rep


def find_par_witness(c: Coloring, size: int, kind: EquivKind,
                     widen: bool = False) -> ParWitness | None:
    M, k = c.length, c.alphabet
    if size > M:
        raise ValueError(f"size {size} exceeds ground {M}")
    rep = _class_representatives(size, k, kind)
    for subset in itertools.combinations(range(M), size):
        rest = [p for p in range(M) if p not in subset]
        if isinstance(kind, AlphaIso):
            fills = [(kind.base,) * len(rest)]
        else:
            fills = list(all_words(len(rest), k))
        injections = itertools.permutations(subset) if widen else [subset]
        for inj in injections:
            inner = positions_ranks(M, k, inj)
            for fill in fills:
                base = sum(x * k**p for p, x in zip(rest, fill))
                vals = c.table[base + inner]
                if np.array_equal(vals, vals[rep]):
                    return ParWitness(tuple(subset), tuple(inj),
                                      PartialWord(tuple(zip(rest, fill))), kind)
    return None


def check_par_witness(c: Coloring, w: ParWitness) -> tuple[Word, Word] | None:
    """Return None if the witness holds, else a related pair with different colors."""
    m = len(w.injection)
    if isinstance(w.kind, AlphaIso):
        rest = [p for p in range(c.length) if p not in w.injection]
        if w.injection != w.subset or w.fill != PartialWord.constant(rest, w.kind.base):
            return (), ()
    for cls in equivalence_classes(m, c.alphabet, w.kind):
        first = cls[0]
        c0 = c.color(assemble_word(first, w.injection, w.fill, c.length))
        for eta in cls[1:]:
            if c.color(assemble_word(eta, w.injection, w.fill, c.length)) != c0:
                return first, eta
    return None


# ----------------------------------------------------- singleton subspaces

def singleton_counterexample_check(m: int, k: int, base: int) -> ConvexSubspace | None:
    """Look for a monochromatic all-singleton-block subspace under the parity coloring.

    Returns None (the expected outcome) when no such subspace of dimension >= 1
    exists, otherwise the offending subspace.
    """
    if m < 1 or k < 2:
        raise ValueError("need m >= 1 and k >= 2")
    c = make_coloring("parity", m, k, 2, base=base)
    for dim in range(1, m + 1):
        for positions in itertools.combinations(range(m), dim):
            rest = [p for p in range(m) if p not in positions]
            for fill in all_words(len(rest), k):
                s = ConvexSubspace(tuple((p,) for p in positions),
                                   PartialWord(tuple(zip(rest, fill))))
                if is_mono_subspace(c, s):
                    return s
    return None

