"""Command-line entry point.

Exit status: 0 success or witness found, 1 proven none or violation found,
2 budget exceeded or interrupted, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Any

from . import bounds as B
from .colorings import (BadParams, Coloring, SetColoring, make_coloring, random_set_coloring)
from .core import ConvexSubspace, GridPattern, validate_subspace
from .equivalences import AlphaIso, FullSym, invariant_check
from .exact import KINDS, BudgetExceeded, NumberKind, exact_number
from .pipelines import (NoLine, StageFailed, Trace, WellDefinednessViolation, hj_dim_reduce,
                        hj_extract, par_alpha_extract, par_full_extract, ram_from_ramsey)
from .search import (ParWitness, check_par_witness, find_grid_pattern, find_homogeneous,
                     find_mono_subspace, find_par_witness, find_ram_homogeneous, grid_is_mono,
                     is_homogeneous, is_mono_subspace, is_ram_homogeneous,
                     singleton_counterexample_check)

EXIT_OK, EXIT_NONE, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3
ENV_NODES, ENV_SECONDS = "HJPAR_MAX_NODES", "HJPAR_MAX_SECONDS"
WITNESS_FORMAT = "hjpar/witness@1"

log = logging.getLogger("hjpar")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunSpec:
    subcommand: str
    params: dict[str, Any] = field(default_factory=dict)
    inputs: list[str] = field(default_factory=list)
    output: str | None = None
    max_nodes: int | None = None
    max_seconds: float | None = None
    workers: int = 1
    seed: int | None = None

    def validate(self) -> None:
        if self.max_nodes is not None and self.max_nodes <= 0:
            raise UsageError("--max-nodes must be positive")
        if self.max_seconds is not None and self.max_seconds <= 0:
            raise UsageError("--max-seconds must be positive")
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")
        paths = [p for p in self.inputs + [self.output] if p]
        if len({os.path.abspath(p) for p in paths}) != len(paths):
            raise UsageError("input, output and checkpoint paths must be distinct")


def dump(obj: Any, path: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


# ------------------------------------------------------------ colorings

def add_coloring_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("coloring (a file, or a generator family)")
    g.add_argument("--coloring", help="coloring JSON file written by 'gen'")
    g.add_argument("--family", choices=["constant", "parity", "random", "table"])
    g.add_argument("--length", type=int, help="ground size M (grid dimension h for grids)")
    g.add_argument("--alphabet", type=int, help="alphabet size k (n for grids)")
    g.add_argument("--colors", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--value", type=int, default=0, help="color of the constant family")
    g.add_argument("--base", type=int, default=0, help="letter counted by the parity family")
    g.add_argument("--values", help="comma-separated table in rank order")


def coloring_from_args(a) -> Coloring:
    if a.coloring:
        data = load_json(a.coloring)
        if data.get("format") != "hjpar/coloring@1":
            raise UsageError(f"{a.coloring} does not hold a word coloring")
        return Coloring.from_json(data)
    if not a.family or a.length is None or a.alphabet is None:
        raise UsageError("give --coloring FILE or --family with --length and --alphabet")
    params = {"constant": {"value": a.value}, "parity": {"base": a.base},
              "random": {"seed": a.seed}, "table": {}}[a.family]
    if a.family == "table":
        if not a.values:
            raise UsageError("the table family needs --values")
        params["values"] = [int(x) for x in a.values.split(",")]
    try:
        return make_coloring(a.family, a.length, a.alphabet, a.colors, **params)
    except BadParams as exc:
        raise UsageError(str(exc)) from None


def set_coloring_from_args(a, levels: list[int]) -> SetColoring:
    if a.coloring:
        data = load_json(a.coloring)
        if data.get("format") != "hjpar/set-coloring@1":
            raise UsageError(f"{a.coloring} does not hold a set coloring")
        return SetColoring.from_json(data)
    if a.n is None:
        raise UsageError("give --coloring FILE or --n for a generated set coloring")
    if a.family == "constant":
        return SetColoring.from_function(a.n, levels, lambda u: a.value, a.colors)
    if a.family in (None, "random"):
        return random_set_coloring(a.n, levels, a.colors, a.seed)
    raise UsageError("set colorings come from the random or constant family")


# ------------------------------------------------------------ subcommands

def cmd_gen(a) -> int:
    if a.n is not None:
        levels = [int(x) for x in (a.levels or "1").split(",")]
        c = set_coloring_from_args(a, levels)
    else:
        c = coloring_from_args(a)
    dump(c.to_json() if isinstance(c, SetColoring) else c.to_json(dense=a.dense), a.output)
    return EXIT_OK


def _kind(a):
    if a.equiv == "alpha":
        return AlphaIso(a.alpha)
    return FullSym()


def cmd_witness(a) -> int:
    op = a.op
    trace = Trace()
    out: dict[str, Any] = {"format": WITNESS_FORMAT, "op": op}
    witness = None
    try:
        if op in ("homogeneous", "ram", "ram-from-ramsey"):
            if op == "homogeneous":
                levels = [a.l]
            elif op == "ram":
                levels = list(range(1, a.l))
            else:
                levels = list(range(1, a.l + 1))
            f = set_coloring_from_args(a, levels)
            out["coloring"] = f.to_json()
            if op == "homogeneous":
                found = find_homogeneous(f, a.target, a.l)
            elif op == "ram":
                found = find_ram_homogeneous(f, a.target)
            else:
                found = ram_from_ramsey(f, a.l, trace=trace)
            witness = None if found is None else list(found)
            out["params"] = {"l": a.l, "target": a.target}
        else:
            c = coloring_from_args(a)
            out["coloring"] = c.to_json()
            if op == "mono":
                s = find_mono_subspace(c, a.dim, workers=a.workers)
                witness = None if s is None else s.to_json()
                out["params"] = {"dim": a.dim}
            elif op == "grid":
                g = find_grid_pattern(c, a.side, strict=a.strict)
                witness = None if g is None else g.to_json()
                out["params"] = {"side": a.side, "strict": a.strict}
            elif op == "par":
                w = find_par_witness(c, a.size, _kind(a), widen=a.widen)
                witness = None if w is None else w.to_json()
                out["params"] = {"size": a.size, "kind": _kind(a).to_json(), "widen": a.widen}
            elif op == "par-alpha":
                w = par_alpha_extract(c, a.alpha, a.size, trace=trace)
                witness = None if w is None else w.to_json()
                out["params"] = {"size": a.size, "alpha": a.alpha}
            elif op == "par-full":
                sizes = [int(x) for x in a.sizes.split(",")] if a.sizes else None
                chain, w = par_full_extract(c, a.size, sizes, trace=trace)
                witness = {**w.to_json(), "chain": chain.to_json()}
                out["params"] = {"size": a.size, "sizes": sizes}
            elif op == "hj":
                sizes = [int(x) for x in a.sizes.split(",")] if a.sizes else None
                s = hj_extract(c, a.dim, n1=a.n1, sizes=sizes, trace=trace)
                witness = s.to_json()
                out["params"] = {"dim": a.dim, "n1": a.n1, "sizes": sizes}
            elif op == "dim-reduce":
                r = hj_dim_reduce(c, a.dim, trace=trace)
                witness = r.to_json()
                out["params"] = {"dim": a.dim}
    except (StageFailed, NoLine) as exc:
        out["failure"] = str(exc)
    except WellDefinednessViolation as exc:
        out["failure"] = f"internal: {exc}"
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out["witness"] = witness
    if trace.stages:
        out["trace"] = trace.to_json()
    dump(out, a.output)
    return EXIT_OK if witness is not None else EXIT_NONE


def cmd_exact(a) -> int:
    params = {p: getattr(a, p.replace("-", "_")) for p in KINDS[a.kind][0]}
    if a.kind == "w":
        params["strict"] = a.strict
    if a.kind == "f13alpha":
        params["base"] = a.base
    missing = [p for p, v in params.items() if v is None]
    if missing:
        raise UsageError(f"--kind {a.kind} needs " + ", ".join(f"--{p}" for p in missing))
    try:
        kind = NumberKind.make(a.kind, **params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        cert = exact_number(kind, workers=a.workers, checkpoint=a.checkpoint,
                            max_nodes=a.max_nodes, max_seconds=a.max_seconds, max_n=a.max_n)
    except BudgetExceeded as exc:
        print(str(exc), file=sys.stderr)
        if a.output:
            dump({"format": "hjpar/certificate@1", "kind": kind.name, "params": kind.p,
                  **exc.to_json()}, a.output)
        return EXIT_BUDGET
    except KeyboardInterrupt:
        print("interrupted; finished tasks are in the checkpoint", file=sys.stderr)
        return EXIT_BUDGET
    except (RuntimeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    print(cert.value)
    if a.output:
        dump(cert.to_json(), a.output)
    return EXIT_OK


def _int_or_atom(s: str | None):
    if s is None:
        return None
    try:
        return int(s)
    except ValueError:
        return s


BOUND_KINDS = ("grz", "gowers", "ramsey", "ram", "f13alpha", "f13", "hj", "hj-product")


def cmd_bound(a) -> int:
    need = {"grz": ["n", "x"], "gowers": ["r", "m"], "ramsey": ["m", "l", "c"],
            "ram": ["l", "c"], "f13alpha": ["m", "alphabet", "colors"],
            "f13": ["m", "alphabet", "colors"], "hj": ["dim", "alphabet", "colors"],
            "hj-product": ["dim", "alphabet", "colors"]}[a.kind]
    missing = [p for p in need if getattr(a, p) is None]
    if missing:
        raise UsageError(f"--kind {a.kind} needs " + ", ".join(f"--{p}" for p in missing))
    d = a.digits
    try:
        if a.kind == "grz":
            args = (a.x,) if a.n else (a.x, a.y if a.y is not None else 0)
            v = B.grzegorczyk_E(a.n, *args, budget=d)
        elif a.kind == "gowers":
            v = B.gowers_W_bound(a.r, a.m)
        elif a.kind == "ramsey":
            v = B.ramsey_R_bound(a.m, a.l, a.c, budget=d)
        elif a.kind == "ram":
            v = B.ram_bound(a.l, a.c, budget=d)
        elif a.kind == "f13alpha":
            v = B.f13_alpha_bound(a.m, a.alphabet, a.colors, budget=d)
        elif a.kind == "f13":
            v = B.f13_bound(a.m, a.alphabet, a.colors, budget=d)
        elif a.kind == "hj":
            v = B.hj_bound(a.dim, a.alphabet, a.colors, _int_or_atom(a.w), budget=d)
        else:
            v = B.hj_bound_product(a.dim, a.alphabet, a.colors, expand=a.expand,
                                   w_value=_int_or_atom(a.w), budget=d)
    except B.MissingWValue as exc:
        raise UsageError(f"{exc} (use --w VALUE or --w NAME)") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(v)
    if a.output:
        dump({"format": "hjpar/bound@1", "kind": a.kind, **v.to_json()}, a.output)
    return EXIT_OK


def revalidate(data: dict) -> list[str]:
    """Independent re-check of a witness file; returns the problems found."""
    op, w = data["op"], data.get("witness")
    if w is None:
        return ["file holds no witness"]
    col = data["coloring"]
    if op in ("homogeneous", "ram", "ram-from-ramsey"):
        f = SetColoring.from_json(col)
        if op == "homogeneous":
            ok = is_homogeneous(f, w, data["params"]["l"])
        else:
            ok = is_ram_homogeneous(f, w, f.levels)
        return [] if ok else ["set is not homogeneous"]
    c = Coloring.from_json(col)
    if op in ("mono", "hj", "dim-reduce"):
        s = ConvexSubspace.from_json(w)
        problems = validate_subspace(s, c.length)
        if op == "dim-reduce" and not w.get("convex", True):
            problems = [p for p in problems if not p.startswith("block order")]
        if not is_mono_subspace(c, s):
            problems.append("subspace is not monochromatic")
        return problems
    if op == "grid":
        g = GridPattern(w["difference"], tuple(w["offsets"]), w["side"])
        problems = g.check(c.alphabet, strict=data["params"]["strict"])
        if not problems and not grid_is_mono(c, g):
            problems.append("grid is not monochromatic")
        return problems
    pw = ParWitness.from_json(w)
    bad = check_par_witness(c, pw)
    return [] if bad is None else [f"related words {bad[0]} and {bad[1]} differ in color"]


def cmd_check(a) -> int:
    if a.counterexample:
        if a.m is None or a.alphabet is None:
            raise UsageError("--counterexample needs --m and --alphabet")
        try:
            s = singleton_counterexample_check(a.m, a.alphabet, a.base)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if s is None:
            print("ok: no singleton-block subspace monochromatic")
            return EXIT_OK
        print(f"violation: {json.dumps(s.to_json(), sort_keys=True)}")
        return EXIT_NONE
    if a.witness:
        problems = revalidate(load_json(a.witness))
        if problems:
            for p in problems:
                print(f"violation: {p}")
            return EXIT_NONE
        print("ok: witness re-validated")
        return EXIT_OK
    if a.invariant:
        c = coloring_from_args(a)
        kind = AlphaIso(a.alpha) if a.equiv == "alpha" else FullSym()
        bad = invariant_check(c, kind)
        if bad is None:
            print("ok: coloring is invariant")
            return EXIT_OK
        print(f"violation: {list(bad[0])} and {list(bad[1])} are related but differ in color")
        return EXIT_NONE
    raise UsageError("choose one of --counterexample, --witness, --invariant")


def cmd_report(a) -> int:
    from .plotting import report

    for line in report(a.inputs, a.out_dir):
        print(line)
    return EXIT_OK


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = Parser(prog="hjpar", description="Partition-property witnesses, exact small numbers "
                                         "and symbolic bounds for combinatorial spaces.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=Parser)

    g = sub.add_parser("gen", help="write a coloring file")
    add_coloring_args(g)
    g.add_argument("--n", type=int, help="make a set coloring of [n] instead")
    g.add_argument("--levels", help="comma-separated set sizes for --n")
    g.add_argument("--dense", action="store_true", help="always store the full table")
    g.add_argument("-o", "--output")

    w = sub.add_parser("witness", help="run a finder or extraction pipeline")
    w.add_argument("--op", required=True,
                   choices=["mono", "grid", "par", "par-alpha", "par-full", "hj", "dim-reduce",
                            "homogeneous", "ram", "ram-from-ramsey"])
    add_coloring_args(w)
    w.add_argument("--n", type=int, help="ground of a generated set coloring")
    w.add_argument("--dim", type=int, default=1)
    w.add_argument("--side", type=int, default=3)
    w.add_argument("--strict", action=argparse.BooleanOptionalAction, default=True,
                   help="grids must leave room for one more step (default on)")
    w.add_argument("--size", type=int, default=2)
    w.add_argument("--equiv", choices=["full", "alpha"], default="full")
    w.add_argument("--alpha", type=int, default=0)
    w.add_argument("--widen", action="store_true", help="search all injections")
    w.add_argument("--sizes", help="comma-separated stage sizes m_0,...,m_k")
    w.add_argument("--n1", type=int)
    w.add_argument("--l", type=int, default=2)
    w.add_argument("--target", type=int, default=3)
    w.add_argument("--workers", type=int, default=1)
    w.add_argument("-o", "--output")

    e = sub.add_parser("exact", help="compute an exact small number with a certificate")
    e.add_argument("--kind", required=True, choices=sorted(KINDS))
    for name in ("dim", "alphabet", "colors", "h", "m", "l"):
        e.add_argument(f"--{name}", type=int)
    e.add_argument("--base", type=int, default=0)
    e.add_argument("--strict", action="store_true", help="strict grid condition for w")
    e.add_argument("--checkpoint")
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--max-nodes", type=int, default=_env_int(ENV_NODES))
    e.add_argument("--max-seconds", type=float, default=_env_float(ENV_SECONDS))
    e.add_argument("--max-n", type=int)
    e.add_argument("-o", "--output", default="certificate.json")

    b = sub.add_parser("bound", help="evaluate an upper bound")
    b.add_argument("--kind", required=True, choices=BOUND_KINDS)
    for name in ("n", "x", "y", "r", "m", "l", "c", "dim", "alphabet", "colors"):
        b.add_argument(f"--{name}", type=int)
    b.add_argument("--w", help="W value for hj: an integer or a symbol name")
    b.add_argument("--expand", action="store_true", help="expand the inner HJ number")
    b.add_argument("--digits", type=int, default=B.DEFAULT_DIGITS,
                   help="largest exact value kept, in decimal digits")
    b.add_argument("-o", "--output")

    c = sub.add_parser("check", help="validators and the parity check")
    c.add_argument("--counterexample", action="store_true")
    c.add_argument("--witness", help="witness file to re-validate")
    c.add_argument("--invariant", action="store_true")
    add_coloring_args(c)
    c.add_argument("--m", type=int)
    c.add_argument("--equiv", choices=["full", "alpha"], default="full")
    c.add_argument("--alpha", type=int, default=0)

    r = sub.add_parser("report", help="tables and figures from result files")
    r.add_argument("inputs", nargs="+")
    r.add_argument("--out-dir", default="report")
    return p


def _env_int(name: str) -> int | None:
    v = os.environ.get(name)
    return int(v) if v else None


def _env_float(name: str) -> float | None:
    v = os.environ.get(name)
    return float(v) if v else None


def _runspec(a) -> RunSpec:
    inputs = [x for x in (getattr(a, "coloring", None), getattr(a, "witness", None),
                          getattr(a, "checkpoint", None)) if x]
    inputs += list(getattr(a, "inputs", []) or [])
    return RunSpec(a.cmd, {}, inputs, getattr(a, "output", None),
                   getattr(a, "max_nodes", None), getattr(a, "max_seconds", None),
                   getattr(a, "workers", 1), getattr(a, "seed", None))


COMMANDS = {"gen": cmd_gen, "witness": cmd_witness, "exact": cmd_exact, "bound": cmd_bound,
            "check": cmd_check, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _runspec(a).validate()
        return COMMANDS[a.cmd](a)
    except UsageError as exc:
        print(f"hjpar {a.cmd}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
