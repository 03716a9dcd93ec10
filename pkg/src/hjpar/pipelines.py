"""Constructive extraction procedures built on the witness finders.

Every pipeline runs in attempt mode: at desk-sized grounds a stage may find
nothing, and that is reported as :class:`StageFailed` naming the stage rather
than as a broken guarantee.  Each pipeline can record a :class:`Trace` of its
stages (inputs, intermediate witnesses and validation verdicts).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Sequence

import numpy as np

from .colorings import Coloring, SetColoring, induced_coloring, pack_colors, positions_ranks
from .core import (ConvexSubspace, PartialWord, Word, all_words, assemble_word,
                   validate_subspace)
from .equivalences import AlphaIso, FullSym, canonical_sorted
from .search import (ParWitness, check_par_witness, find_grid_pattern, find_homogeneous,
                     find_mono_subspace, find_ram_homogeneous, is_mono_subspace)


class StageFailed(RuntimeError):
    def __init__(self, stage, detail: str = ""):
        super().__init__(f"stage {stage} failed" + (f": {detail}" if detail else ""))
        self.stage = stage
        self.detail = detail


class WellDefinednessViolation(RuntimeError):
    pass


class NoLine(RuntimeError):
    pass


@dataclass
class Trace:
    stages: list[dict] = field(default_factory=list)

    def add(self, stage: str, **info: Any) -> None:
        self.stages.append({"stage": stage, **info})

    def to_json(self) -> dict:
        return {"format": "hjpar/trace@1", "stages": self.stages}


def _note(trace: Trace | None, stage: str, **info: Any) -> None:
    if trace is not None:
        trace.add(stage, **info)


# ---------------------------------------------------------- level tuples

def ram_from_ramsey(f: SetColoring | Callable, l: int, n: int | None = None,
                    trace: Trace | None = None) -> tuple[int, ...] | None:
    """B in [n]^{l+1} on which f is constant level by level, via one homogeneous set.

    ``f`` colors the sets of sizes 1..l.  The sets of size l are colored by the
    tuple of f on their initial segments; the first l+1 elements of a homogeneous
    set of size 2l for that coloring form B.
    """
    if isinstance(f, SetColoring):
        n = f.n if n is None else n
    if n is None:
        raise ValueError("n is required for a plain callable")
    if l < 1 or n < 2 * l:
        raise ValueError(f"need l >= 1 and n >= 2l (got l={l}, n={n})")
    sizes = [f.colors_n] * l if isinstance(f, SetColoring) and f.colors_n else None

    def d(u: tuple) -> Hashable:
        vals = tuple(f(u[:j]) for j in range(1, l + 1))
        return pack_colors(vals, sizes) if sizes else vals

    A = find_homogeneous(d, 2 * l, l, n)
    B = None if A is None else A[: l + 1]
    _note(trace, "ram_from_ramsey", l=l, n=n, homogeneous=None if A is None else list(A),
          result=None if B is None else list(B))
    return B


# ------------------------------------------------- alpha-isomorphism stage

def alpha_classifier(c: Coloring, alpha: int) -> Callable[[tuple], tuple]:
    """u -> colors of all words that are alpha off u, listed by the letters on u in rank order."""
    k, n = c.alphabet, c.length
    all_alpha = sum(alpha * k**p for p in range(n))
    cache: dict[tuple, tuple] = {}

    def f(u: tuple) -> tuple:
        if u not in cache:
            base = all_alpha - sum(alpha * k**p for p in u)
            cache[u] = tuple(int(x) for x in c.table[base + positions_ranks(n, k, u)])
        return cache[u]

    return f


def par_alpha_extract(c: Coloring, alpha: int, m: int,
                      trace: Trace | None = None) -> ParWitness | None:
    """An alpha-isomorphism witness of size m, found as a level-homogeneous set."""
    n = c.length
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= {n}")
    if not 0 <= alpha < c.alphabet:
        raise ValueError("alpha outside the alphabet")
    f = alpha_classifier(c, alpha)
    N = find_ram_homogeneous(f, m, levels=range(1, m), n=n)
    if N is None:
        _note(trace, "par_alpha", alpha=alpha, m=m, ground=n, result=None)
        return None
    rest = [p for p in range(n) if p not in N]
    w = ParWitness(tuple(N), tuple(N), PartialWord.constant(rest, alpha), AlphaIso(alpha))
    _note(trace, "par_alpha", alpha=alpha, m=m, ground=n, result=list(N),
          valid=check_par_witness(c, w) is None)
    return w


# ------------------------------------------------------- full symmetry

@dataclass(frozen=True)
class ParChain:
    """Pairs (N_l, rho_l) for l = 0..k, with N_k the whole ground and rho_k empty."""

    sets: tuple[tuple[int, ...], ...]
    fills: tuple[PartialWord, ...]

    def to_json(self) -> dict:
        return {"sets": [list(s) for s in self.sets], "fills": [f.to_json() for f in self.fills]}

    def check(self, ground: int) -> list[str]:
        problems = []
        k = len(self.sets) - 1
        if tuple(self.sets[k]) != tuple(range(ground)) or len(self.fills[k]):
            problems.append("top of the chain is not the whole ground")
        for l in range(k):
            lo, hi = set(self.sets[l]), set(self.sets[l + 1])
            if not lo <= hi:
                problems.append(f"N_{l} is not inside N_{l + 1}")
            want = self.fills[l + 1].union(PartialWord.constant(sorted(hi - lo), l))
            if self.fills[l] != want:
                problems.append(f"rho_{l} does not extend rho_{l + 1} by letter {l}")
        return problems


def default_sizes(m: int, ground: int, k: int) -> list[int]:
    """Stage sizes m_0 = ... = m_{k-1} = m and m_k = ground.

    All slack goes to the outermost stage; at desk-sized grounds this succeeds
    far more often than spreading the slack over the stages.
    """
    return [m] * k + [ground]


def full_sym_violation(c: Coloring, N: Sequence[int], fill: PartialWord) -> tuple[Word, Word] | None:
    """First eta on N whose color under ``fill`` differs from its sorted rearrangement's."""
    M = c.length
    for eta in all_words(len(N), c.alphabet):
        nu = canonical_sorted(eta)
        if eta == nu:
            continue
        if c.color(assemble_word(eta, N, fill, M)) != c.color(assemble_word(nu, N, fill, M)):
            return eta, nu
    return None


def par_full_extract(c: Coloring, m: int, sizes: Sequence[int] | None = None,
                     trace: Trace | None = None, verify: bool = True
                     ) -> tuple[ParChain, ParWitness]:
    """Peel off one letter per stage with alpha-isomorphism witnesses.

    Stage l works inside N_{l+1} with the fill rho_{l+1}, finds N_l of size m_l
    that is a witness for letter l, and fills N_{l+1} minus N_l with letter l.
    The resulting (N_0, rho_0) is checked against full symmetry unless
    ``verify`` is off.
    """
    M, k = c.length, c.alphabet
    sizes = list(default_sizes(m, M, k) if sizes is None else sizes)
    if len(sizes) != k + 1 or sizes[0] != m or sizes[-1] != M:
        raise ValueError(f"sizes must run from {m} to {M} in {k + 1} steps")
    if any(a > b for a, b in zip(sizes, sizes[1:])) or m < 1:
        raise ValueError("sizes must be positive and non-decreasing")
    sets: list[tuple[int, ...]] = [()] * k + [tuple(range(M))]
    fills: list[PartialWord] = [PartialWord()] * (k + 1)
    for l in range(k - 1, -1, -1):
        outer = sets[l + 1]
        sub = induced_coloring(c, fills[l + 1])
        w = par_alpha_extract(sub, l, sizes[l], trace)
        if w is None:
            _note(trace, "par_full", failed_stage=l)
            raise StageFailed(l, f"no witness of size {sizes[l]} for letter {l} "
                                 f"inside a ground of {len(outer)}")
        inner = tuple(outer[i] for i in w.subset)
        sets[l] = inner
        fills[l] = fills[l + 1].union(
            PartialWord.constant([p for p in outer if p not in inner], l))
    chain = ParChain(tuple(sets), tuple(fills))
    witness = ParWitness(sets[0], sets[0], fills[0], FullSym())
    bad = full_sym_violation(c, sets[0], fills[0]) if verify else None
    _note(trace, "par_full", chain=chain.to_json(), witness=witness.to_json(),
          verified=verify and bad is None)
    if bad is not None:
        raise StageFailed("verify", f"words {bad[0]} and {bad[1]} differ in color")
    return chain, witness


# ------------------------------------------------------------ lines

@dataclass(frozen=True)
class CountVector:
    """Letter counts for letters 0..h-1; the last letter takes the remaining positions."""

    counts: tuple[int, ...]
    n1: int

    def __post_init__(self):
        if any(not 0 <= x < self.n1 for x in self.counts):
            raise ValueError(f"counts {self.counts} must lie in 0..{self.n1 - 1}")

    def realize(self, size: int) -> Word:
        """A word of length ``size`` with these counts: letters in increasing runs."""
        h = len(self.counts)
        if sum(self.counts) > size:
            raise ValueError("counts exceed the ground")
        out: list[int] = []
        for e, x in enumerate(self.counts):
            out += [e] * x
        return tuple(out + [h] * (size - len(out)))


def _count_table(c: Coloring, N: Sequence[int], fill: PartialWord, h: int, n1: int
                 ) -> tuple[Coloring, tuple | None]:
    """Color U_{h,n1} by count vectors and test constancy on each count class.

    Returns the count coloring and, if some class is not constant, a pair of
    words on N with equal counts and different colors.
    """
    M, k = c.length, c.alphabet
    base = sum(x * k**p for p, x in fill.items)
    ranks = base + positions_ranks(M, k, N)
    colors = c.table[ranks]
    words = np.array(list(all_words(len(N), k)), dtype=np.int64).reshape(-1, len(N))
    counts = np.stack([(words == e).sum(axis=1) for e in range(h)], axis=1)
    table = np.full(n1**h, -1, dtype=np.int64)
    for x in all_words(h, n1):
        word = CountVector(x, n1).realize(len(N))
        r = sum(a * k**i for i, a in enumerate(word))
        table[sum(v * n1**e for e, v in enumerate(x))] = colors[r]
    key = (counts * (n1 ** np.arange(h))).sum(axis=1)
    inside = (counts < n1).all(axis=1)
    mism = np.flatnonzero(inside & (colors != table[np.where(inside, key, 0)]))
    bad = None
    if mism.size:
        i = int(mism[0])
        bad = (tuple(int(v) for v in words[i]), tuple(int(v) for v in counts[i]))
    return Coloring(h, n1, c.colors_n, table), bad


def hj_extract(c: Coloring, dim: int, n1: int | None = None, sizes: Sequence[int] | None = None,
               trace: Trace | None = None) -> ConvexSubspace:
    """A monochromatic convex subspace of dimension ``dim`` through the count reduction.

    Stage 1 finds N of size k*n1 and a fill on which the color depends only on
    letter counts.  Stage 2 colors count vectors for the first k-1 letters and
    finds a monochromatic grid of side dim+1.  Stage 3 lays out blocks inside N.
    """
    M, k = c.length, c.alphabet
    if k < 2 or dim < 1:
        raise ValueError("need an alphabet of at least two letters and dim >= 1")
    h = k - 1
    n1 = M // k if n1 is None else n1
    n2 = k * n1
    if n1 < 1 or n2 > M:
        raise ValueError(f"n1={n1} does not fit: need 1 <= k*n1 <= {M}")
    _note(trace, "hj_setup", ground=M, alphabet=k, dim=dim, n1=n1, n2=n2)

    chain, witness = par_full_extract(c, n2, sizes, trace)
    N, fill = witness.subset, witness.fill

    count_c, bad = _count_table(c, N, fill, h, n1)
    _note(trace, "hj_counts", table=[int(x) for x in count_c.table],
          well_defined=bad is None)
    if bad is not None:
        raise WellDefinednessViolation(
            f"word {bad[0]} on N with counts {bad[1]} breaks count-determined coloring")
    grid = find_grid_pattern(count_c, dim + 1, strict=False)
    _note(trace, "hj_grid", grid=None if grid is None else grid.to_json())
    if grid is None:
        raise StageFailed("grid", f"no monochromatic grid of side {dim + 1} in U_{{{h},{n1}}}")

    d, offs = grid.difference, grid.offsets
    pos = list(N)
    layout: dict[int, int] = {}
    cur = 0
    for e, x in enumerate(offs):
        for p in pos[cur:cur + x]:
            layout[p] = e
        cur += x
    blocks = []
    for _ in range(dim):
        blocks.append(tuple(pos[cur:cur + d]))
        cur += d
    for p in pos[cur:]:
        layout[p] = h
    fixed = fill.union(PartialWord.from_mapping(layout))
    s = ConvexSubspace(tuple(blocks), fixed)
    problems = validate_subspace(s, M)
    mono = not problems and is_mono_subspace(c, s)
    _note(trace, "hj_subspace", subspace=s.to_json(), problems=problems, monochromatic=mono)
    if not mono:
        raise StageFailed("verify", "assembled subspace is not a monochromatic convex subspace")
    return s


@dataclass(frozen=True)
class ReducedSubspace:
    """An m-dimensional subspace from the packed-alphabet line; classes may interleave."""

    subspace: ConvexSubspace
    convex: bool

    def to_json(self) -> dict:
        return {**self.subspace.to_json(), "convex": self.convex}


def hj_dim_reduce(c: Coloring, m: int, trace: Trace | None = None) -> ReducedSubspace:
    """Find an m-dimensional monochromatic subspace via a line over the alphabet k^m."""
    M, k = c.length, c.alphabet
    if m < 1 or M % m:
        raise ValueError(f"ground {M} is not a multiple of {m}")
    packs = M // m
    # consecutive groups of m positions read as one letter: ranks coincide
    packed = Coloring(packs, k**m, c.colors_n, c.table)
    line = find_mono_subspace(packed, 1)
    _note(trace, "dim_reduce_line", line=None if line is None else line.to_json())
    if line is None:
        raise NoLine(f"no monochromatic line over the alphabet of size {k ** m}")
    moving = line.blocks[0]
    classes = tuple(tuple(j * m + i for j in moving) for i in range(m))
    fixed = {}
    for j, letter in line.fixed.items:
        for i in range(m):
            fixed[j * m + i] = (letter // k**i) % k
    s = ConvexSubspace(classes, PartialWord.from_mapping(fixed))
    convex = not validate_subspace(s, M)
    out = ReducedSubspace(s, convex)
    _note(trace, "dim_reduce", subspace=out.to_json(), monochromatic=is_mono_subspace(c, s))
    return out
