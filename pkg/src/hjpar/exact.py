"""Exact small partition numbers by adversarial search for witness-free colorings.

Every number kind is reduced to the same shape: a set of cells (the objects being
colored), and a family of witnesses, each a list of cell groups.  A witness is
present in a coloring when every one of its groups is monochromatic, and a
coloring is *bad* when no witness is present.  ``exact_number`` walks n upward
from a floor and asks at each size whether a bad coloring exists.

The search assigns colors to cells in cell order.  Colors are only introduced in
increasing order (color symmetry), and a witness with exactly one free cell
removes the color that would complete it from that cell's domain.  The tree is
cut into tasks by fixing the first ``split_depth`` cells; tasks are independent,
journaled to an optional checkpoint file, and can run on a process pool.  The
reported bad coloring is always the lexicographically first canonical one,
whatever the worker count.
"""

from __future__ import annotations

import fcntl
import itertools
import json
import logging
import multiprocessing as mp
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Sequence

import numpy as np

from .colorings import Coloring, SetColoring, positions_ranks, set_cells
from .core import all_words, block_layouts, subspace_offsets
from .equivalences import AlphaIso, FullSym, equivalence_classes
from .search import (find_grid_pattern, find_homogeneous, find_mono_subspace,
                     find_par_witness, find_ram_homogeneous)

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "hjpar/checkpoint@1"
DEFAULT_SPLIT_DEPTH = 8

KINDS = {
    # name: (required params, optional params with defaults)
    "hj": (("dim", "alphabet", "colors"), {}),
    "w": (("h", "m", "colors"), {"strict": False}),
    "r": (("m", "l", "colors"), {}),
    "ram": (("m", "l", "colors"), {}),
    "f13alpha": (("m", "alphabet", "colors"), {"base": 0}),
    "f13": (("m", "alphabet", "colors"), {}),
}


class BudgetExceeded(RuntimeError):
    def __init__(self, lower: int, upper: int | None, reason: str):
        super().__init__(f"budget exceeded ({reason}); value lies in [{lower}, {upper}]")
        self.lower = lower
        self.upper = upper
        self.reason = reason

    def to_json(self) -> dict:
        return {"status": "budget_exceeded", "reason": self.reason,
                "bracket": [self.lower, self.upper]}


@dataclass(frozen=True)
class NumberKind:
    name: str
    params: tuple[tuple[str, Any], ...]

    @classmethod
    def make(cls, name: str, **params) -> "NumberKind":
        if name not in KINDS:
            raise ValueError(f"unknown number kind {name!r}; choose from {sorted(KINDS)}")
        required, optional = KINDS[name]
        missing = [p for p in required if p not in params]
        if missing:
            raise ValueError(f"{name} needs parameters {missing}")
        unknown = set(params) - set(required) - set(optional)
        if unknown:
            raise ValueError(f"{name} does not take parameters {sorted(unknown)}")
        full = dict(optional)
        full.update(params)
        for p in required:
            full[p] = int(full[p])
            if full[p] < 1 and p != "base":
                raise ValueError(f"{p} must be positive")
        if name == "ram" and full["l"] < 2:
            raise ValueError("ram needs l >= 2")
        if name == "r" and full["l"] > full["m"]:
            raise ValueError("r needs l <= m")
        if name == "f13alpha" and not 0 <= int(full["base"]) < full["alphabet"]:
            raise ValueError("base letter outside the alphabet")
        return cls(name, tuple(sorted(full.items())))

    @property
    def p(self) -> dict:
        return dict(self.params)

    def floor(self) -> int:
        p = self.p
        return {"hj": p.get("dim"), "w": p.get("m"), "r": p.get("m"), "ram": p.get("m"),
                "f13alpha": p.get("m"), "f13": p.get("m")}[self.name]

    def to_json(self) -> dict:
        return {"kind": self.name, "params": self.p}


@dataclass
class Instance:
    ncells: int
    ncolors: int
    witnesses: list[list[tuple[int, ...]]]


# ------------------------------------------------------------ instances

@lru_cache(maxsize=32)
def build_instance(kind: NumberKind, n: int) -> Instance:
    p = kind.p
    c = p["colors"]
    if kind.name == "hj":
        k, dim = p["alphabet"], p["dim"]
        wit = []
        for blocks in block_layouts(n, dim):
            used = {q for b in blocks for q in b}
            rest = [q for q in range(n) if q not in used]
            offs = subspace_offsets(blocks, k)
            for base in positions_ranks(n, k, rest):
                wit.append([tuple(int(x) for x in base + offs)])
        return Instance(k**n, c, wit)
    if kind.name == "w":
        h, side = p["h"], p["m"]
        reach = side if p["strict"] else side - 1
        weights = np.array([n**e for e in range(h)], dtype=np.int64)
        idx = np.array(list(all_words(h, side)), dtype=np.int64).reshape(-1, h)
        wit = []
        d = 1
        while n - 1 - d * reach >= 0 and not (reach == 0 and d > 1):
            top = n - 1 - d * reach
            grid = (idx * d) @ weights
            for off in all_words(h, top + 1):
                base = int(np.dot(off, weights))
                wit.append([tuple(int(x) for x in base + grid)])
            d += 1
        return Instance(n**h, c, wit)
    if kind.name in ("r", "ram"):
        levels = [p["l"]] if kind.name == "r" else list(range(1, p["l"]))
        cells = set_cells(n, levels)
        index = {u: i for i, u in enumerate(cells)}
        wit = []
        for B in itertools.combinations(range(n), p["m"]):
            wit.append([tuple(index[u] for u in itertools.combinations(B, l)) for l in levels])
        return Instance(len(cells), c, wit)
    if kind.name in ("f13alpha", "f13"):
        k, m = p["alphabet"], p["m"]
        if kind.name == "f13alpha":
            equiv = AlphaIso(int(p["base"]))
        else:
            equiv = FullSym()
        classes = [cls for cls in equivalence_classes(m, k, equiv) if len(cls) > 1]
        class_ranks = [np.array([sum(x * k**a for a, x in enumerate(w)) for w in cls])
                       for cls in classes]
        wit = []
        for N in itertools.combinations(range(n), m):
            rest = [q for q in range(n) if q not in N]
            inner = positions_ranks(n, k, N)
            if kind.name == "f13alpha":
                fills = [sum(int(p["base"]) * k**q for q in rest)]
            else:
                fills = [int(b) for b in positions_ranks(n, k, rest)]
            for base in fills:
                wit.append([tuple(int(x) for x in base + inner[cr]) for cr in class_ranks])
        return Instance(k**n, c, wit)
    raise ValueError(kind.name)


def decode_bad(kind: NumberKind, n: int, table: Sequence[int]):
    p = kind.p
    if kind.name == "hj" or kind.name.startswith("f13"):
        return Coloring(n, p["alphabet"], p["colors"], np.array(table, dtype=np.int64))
    if kind.name == "w":
        return Coloring(p["h"], n, p["colors"], np.array(table, dtype=np.int64))
    levels = [p["l"]] if kind.name == "r" else list(range(1, p["l"]))
    return SetColoring.from_table(n, levels, p["colors"], table)


def verify_bad(kind: NumberKind, bad) -> bool:
    """Independent check (via the witness finders) that ``bad`` admits no witness."""
    p = kind.p
    if kind.name == "hj":
        return find_mono_subspace(bad, p["dim"]) is None
    if kind.name == "w":
        return find_grid_pattern(bad, p["m"], strict=p["strict"]) is None
    if kind.name == "r":
        return find_homogeneous(bad, p["m"], p["l"]) is None
    if kind.name == "ram":
        return find_ram_homogeneous(bad, p["m"]) is None
    if kind.name == "f13alpha":
        return find_par_witness(bad, p["m"], AlphaIso(int(p["base"]))) is None
    return find_par_witness(bad, p["m"], FullSym()) is None


# ------------------------------------------------------------ the engine

class _Abort(Exception):
    pass


class SearchEngine:
    """Depth-first search for a coloring of the cells in which every witness is broken."""

    CHECK_EVERY = 4096

    def __init__(self, inst: Instance):
        self.ncells = inst.ncells
        self.ncolors = inst.ncolors
        self.trivial = False
        self.group_cells: list[tuple[int, ...]] = []
        self.group_w: list[int] = []
        self.w_groups: list[list[int]] = []
        self.cell_groups: list[list[int]] = [[] for _ in range(inst.ncells)]
        for w in inst.witnesses:
            groups = [g for g in (tuple(sorted(set(g))) for g in w) if len(g) > 1]
            if not groups:
                # every coloring contains this witness
                self.trivial = True
            wi = len(self.w_groups)
            self.w_groups.append([])
            for g in groups:
                gi = len(self.group_cells)
                self.group_cells.append(g)
                self.group_w.append(wi)
                self.w_groups[wi].append(gi)
                for x in g:
                    self.cell_groups[x].append(gi)
        self.nodes = 0
        self.prunes = 0
        self.should_stop = None

    def _reset(self):
        nw, ng = len(self.w_groups), len(self.group_cells)
        self.color = [-1] * self.ncells
        self.domain = [(1 << self.ncolors) - 1] * self.ncells
        self.g_color = [-1] * ng
        self.g_dead = [False] * ng
        self.w_dead = [0] * nw
        self.w_free = [sum(len(self.group_cells[g]) for g in gs) for gs in self.w_groups]
        self.trail: list[tuple[list, int, Any]] = []

    def _set(self, arr, i, v):
        self.trail.append((arr, i, arr[i]))
        arr[i] = v

    def _undo(self, mark: int):
        trail = self.trail
        while len(trail) > mark:
            arr, i, old = trail.pop()
            arr[i] = old

    def _assign(self, cell: int, c: int) -> bool:
        self._set(self.color, cell, c)
        g_color, g_dead, w_dead, w_free = self.g_color, self.g_dead, self.w_dead, self.w_free
        touched = []
        for g in self.cell_groups[cell]:
            w = self.group_w[g]
            self._set(w_free, w, w_free[w] - 1)
            if not g_dead[g]:
                gc = g_color[g]
                if gc == -1:
                    self._set(g_color, g, c)
                elif gc != c:
                    self._set(g_dead, g, True)
                    self._set(w_dead, w, w_dead[w] + 1)
            touched.append(w)
        color = self.color
        for w in touched:
            if w_dead[w]:
                continue
            free = w_free[w]
            if free == 0:
                return False
            if free == 1:
                for g in self.w_groups[w]:
                    for x in self.group_cells[g]:
                        if color[x] == -1:
                            gc = g_color[g]
                            if gc != -1:
                                dom = self.domain[x] & ~(1 << gc)
                                if dom == 0:
                                    return False
                                if dom != self.domain[x]:
                                    self._set(self.domain, x, dom)
                            break
        return True

    def _dfs(self, pos: int, maxc: int) -> bool:
        if pos == self.ncells:
            return True
        dom = self.domain[pos]
        for c in range(min(self.ncolors, maxc + 2)):
            if not (dom >> c) & 1:
                continue
            self.nodes += 1
            if self.nodes % self.CHECK_EVERY == 0 and self.should_stop is not None:
                if self.should_stop(self.nodes):
                    raise _Abort
            mark = len(self.trail)
            if self._assign(pos, c):
                if self._dfs(pos + 1, max(maxc, c)):
                    return True
            else:
                self.prunes += 1
            self._undo(mark)
        return False

    def run_task(self, prefix: Sequence[int]) -> list[int] | None:
        """Search below a fixed coloring of the first len(prefix) cells."""
        self._reset()
        if self.trivial:
            return None
        maxc = -1
        for cell, c in enumerate(prefix):
            if not (self.domain[cell] >> c) & 1:
                return None
            self.nodes += 1
            if not self._assign(cell, c):
                self.prunes += 1
                return None
            maxc = max(maxc, c)
        if self._dfs(len(prefix), maxc):
            return list(self.color)
        return None


def canonical_prefixes(length: int, ncolors: int) -> list[tuple[int, ...]]:
    """Color sequences whose colors first appear in increasing order, in lex order."""
    out = []

    def rec(prefix, maxc):
        if len(prefix) == length:
            out.append(tuple(prefix))
            return
        for c in range(min(ncolors, maxc + 2)):
            prefix.append(c)
            rec(prefix, max(maxc, c))
            prefix.pop()

    rec([], -1)
    return out


# ------------------------------------------------------------ checkpoints

class Journal:
    """Append-only record of finished tasks, rewritten atomically after each record."""

    def __init__(self, path: str | None, header: dict):
        self.path = path
        self.header = header
        self.records: dict[tuple[int, int], dict] = {}
        self._lock = None
        if path is None:
            return
        self._lock = open(path + ".lock", "w")
        try:
            fcntl.flock(self._lock, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            raise RuntimeError(f"checkpoint {path} is in use by another run") from None
        if os.path.exists(path):
            with open(path) as fh:
                lines = [json.loads(line) for line in fh if line.strip()]
            if not lines or lines[0] != header:
                raise ValueError(f"checkpoint {path} belongs to a different computation")
            for rec in lines[1:]:
                self.records[(rec["n"], rec["task"])] = rec
        else:
            self._write()

    def _write(self):
        tmp = self.path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(json.dumps(self.header, sort_keys=True) + "\n")
            for key in sorted(self.records):
                fh.write(json.dumps(self.records[key], sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, self.path)

    def add(self, rec: dict):
        self.records[(rec["n"], rec["task"])] = rec
        if self.path is not None:
            self._write()

    def close(self):
        if self._lock is not None:
            fcntl.flock(self._lock, fcntl.LOCK_UN)
            self._lock.close()
            self._lock = None


# ------------------------------------------------------------ workers

_shared: dict = {}


def _init_worker(found, nodes_used, deadline, max_nodes):
    _shared.update(found=found, nodes_used=nodes_used, deadline=deadline, max_nodes=max_nodes)


def _stop_check(task_index: int):
    found, used = _shared.get("found"), _shared.get("nodes_used")
    deadline, max_nodes = _shared.get("deadline"), _shared.get("max_nodes")
    last = [0]

    def check(nodes: int) -> bool:
        if used is not None:
            with used.get_lock():
                used.value += nodes - last[0]
                total = used.value
            last[0] = nodes
            if max_nodes is not None and total > max_nodes:
                return True
        if found is not None and found.value < task_index:
            return True
        return deadline is not None and time.monotonic() > deadline

    return check


@lru_cache(maxsize=4)
def _engine(kind: NumberKind, n: int) -> SearchEngine:
    return SearchEngine(build_instance(kind, n))


def _run_task(kind: NumberKind, n: int, index: int, prefix: tuple[int, ...]) -> dict:
    engine = _engine(kind, n)
    engine.nodes = engine.prunes = 0
    check = _stop_check(index)
    engine.should_stop = check
    try:
        bad = engine.run_task(prefix)
    except _Abort:
        return {"n": n, "task": index, "status": "aborted"}
    check(engine.nodes)  # flush the node count
    rec = {"n": n, "task": index, "status": "bad" if bad else "exhausted",
           "nodes": engine.nodes, "prunes": engine.prunes}
    if bad is not None:
        rec["table"] = bad
        found = _shared.get("found")
        if found is not None:
            with found.get_lock():
                found.value = min(found.value, index)
    return rec


# ------------------------------------------------------------ certificates

@dataclass
class Certificate:
    kind: NumberKind
    value: int
    bad_coloring: Any
    exhaustion: dict
    floor: int
    verified: bool = True
    sizes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "format": "hjpar/certificate@1",
            "kind": self.kind.name,
            "params": self.kind.p,
            "value": self.value,
            "floor": self.floor,
            "bad_coloring": None if self.bad_coloring is None else self.bad_coloring.to_json(),
            "exhaustion": self.exhaustion,
            "verified": self.verified,
            "sizes": self.sizes,
        }


def _search_size(kind: NumberKind, n: int, split_depth: int, journal: Journal,
                 workers: int, deadline: float | None, max_nodes: int | None,
                 nodes_before: int) -> tuple[list[int] | None, dict]:
    inst = build_instance(kind, n)
    depth = min(split_depth, inst.ncells)
    prefixes = canonical_prefixes(depth, inst.ncolors)
    done = {i: journal.records[(n, i)] for i in range(len(prefixes)) if (n, i) in journal.records}

    def decided() -> tuple[bool, list[int] | None]:
        for i in range(len(prefixes)):
            rec = done.get(i)
            if rec is None:
                return False, None
            if rec["status"] == "bad":
                return True, rec["table"]
        return True, None

    finished, bad = decided()
    pending = [i for i in range(len(prefixes)) if i not in done]
    first_bad = min((i for i, r in done.items() if r["status"] == "bad"), default=len(prefixes))
    pending = [i for i in pending if i < first_bad]
    budget_left = None if max_nodes is None else max(0, max_nodes - nodes_before)

    if not finished and pending:
        found = mp.Value("q", first_bad)
        used = mp.Value("q", 0)
        if workers <= 1:
            _init_worker(found, used, deadline, budget_left)
            try:
                stop = _stop_check(-1)
                for i in pending:
                    if i > found.value or stop(0):
                        break
                    rec = _run_task(kind, n, i, prefixes[i])
                    if rec["status"] == "aborted":
                        break
                    done[i] = rec
                    journal.add(rec)
            finally:
                _shared.clear()
        else:
            with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                                     initargs=(found, used, deadline, budget_left)) as pool:
                futures = [pool.submit(_run_task, kind, n, i, prefixes[i]) for i in pending]
                for fut in futures:
                    rec = fut.result()
                    if rec["status"] != "aborted":
                        done[rec["task"]] = rec
                        journal.add(rec)
        finished, bad = decided()
    if not finished:
        raise _Abort
    # tasks past the first bad one may or may not have run; leave them out
    last = min((i for i, r in done.items() if r["status"] == "bad"), default=len(prefixes))
    counted = [r for i, r in done.items() if i <= last]
    stats = {
        "n": n, "tasks": len(prefixes),
        "nodes": sum(r["nodes"] for r in counted),
        "prunes": sum(r["prunes"] for r in counted),
    }
    return bad, stats


def exact_number(kind: NumberKind, *, workers: int = 1, checkpoint: str | None = None,
                 max_nodes: int | None = None, max_seconds: float | None = None,
                 max_n: int | None = None, split_depth: int = DEFAULT_SPLIT_DEPTH) -> Certificate:
    """Least n such that every coloring of the size-n instance has a witness."""
    header = {"format": CHECKPOINT_FORMAT, "kind": kind.name, "params": kind.p,
              "split_depth": split_depth}
    journal = Journal(checkpoint, header)
    deadline = None if max_seconds is None else time.monotonic() + max_seconds
    floor = kind.floor()
    n = floor
    last_bad = None
    nodes_total = 0
    sizes = []
    try:
        while True:
            if max_n is not None and n > max_n:
                raise BudgetExceeded(n, None, f"size limit {max_n}")
            try:
                bad, stats = _search_size(kind, n, split_depth, journal, workers,
                                          deadline, max_nodes, nodes_total)
            except _Abort:
                reason = "time" if deadline is not None and time.monotonic() > deadline else "nodes"
                raise BudgetExceeded(n, None, reason) from None
            nodes_total += stats["nodes"]
            sizes.append({"n": n, "bad": bad is not None, "nodes": stats["nodes"],
                          "prunes": stats["prunes"]})
            log.info("%s n=%d: %s (%d nodes)", kind.name, n,
                     "bad coloring" if bad is not None else "exhausted", stats["nodes"])
            if bad is None:
                break
            last_bad = decode_bad(kind, n, bad)
            n += 1
    finally:
        journal.close()
    verified = last_bad is None or verify_bad(kind, last_bad)
    if not verified:
        raise AssertionError(f"bad coloring at n={n - 1} failed independent verification")
    return Certificate(kind, n, last_bad, stats, floor, verified, sizes)
