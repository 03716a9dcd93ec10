"""Exact and symbolic evaluation of the upper bounds.

A :class:`BigBound` wraps an expression tree.  Trees are built through the
smart constructors ``add``, ``mul``, ``power``, ``binom`` and ``call``, which
fold constant subtrees whenever the folded integer stays within the digit
budget (``DEFAULT_DIGITS`` decimal digits unless configured).  A bound whose
tree is a single number is *exact*; anything else is a *tower*.

Named functions that may appear in trees (each is monotone in the listed
arguments and bounded below as noted; comparisons rely on both facts):

========  =====================  ==========  =============================
name      meaning                monotone    lower bound
========  =====================  ==========  =============================
E_n       Grzegorczyk E_n        x           x
R         ramsey_R_bound(m,l,c)  m, c        m
RAM       ram_bound(l, C)        l, C        l + C
W         caller-supplied W      all         side (2nd argument)
HJ        HJ number              all         dim (1st argument)
========  =====================  ==========  =============================
"""

from __future__ import annotations

import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

DEFAULT_DIGITS = 10**6
SYMBOLIC_LAYERS = 3
LOG10_2 = math.log10(2)


class MissingWValue(ValueError):
    pass


@contextmanager
def _unlimited_digits():
    old = sys.get_int_max_str_digits() if hasattr(sys, "get_int_max_str_digits") else None
    if old is not None:
        sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        if old is not None:
            sys.set_int_max_str_digits(old)


# ------------------------------------------------------------------ nodes

@dataclass(frozen=True)
class Num:
    value: int

    def __repr__(self):
        if abs(self.value) < 10**40:
            return f"Num({self.value})"
        return f"Num(<{_digits(self.value)} digits>)"


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Add:
    terms: tuple


@dataclass(frozen=True)
class Mul:
    factors: tuple


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: "Expr"


@dataclass(frozen=True)
class Binom:
    n: "Expr"
    k: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


Expr = Union[Num, Atom, Add, Mul, Pow, Binom, Call]

# name -> (monotone argument positions, lower bound builder)
_CALLS = {
    "R": ((0, 2), lambda a: [a[0]]),
    "RAM": ((0, 1), lambda a: [add(a[0], a[1])]),
    "W": (None, lambda a: [a[1]] if len(a) > 1 else []),
    "HJ": (None, lambda a: [a[0]] if a else []),
}


def _call_info(name: str):
    if name.startswith("E_"):
        return (0,), lambda a: [a[0]]
    return _CALLS.get(name, ((), lambda a: []))


def _digits(v: int) -> int:
    return len(str(abs(v))) if abs(v) < 10**50 else int(abs(v).bit_length() * LOG10_2) + 1


def _sort_key(e) -> tuple:
    if isinstance(e, Num):
        return (0, e.value)
    if isinstance(e, Atom):
        return (1, e.name)
    if isinstance(e, Add):
        return (2, tuple(_sort_key(t) for t in e.terms))
    if isinstance(e, Mul):
        return (3, tuple(_sort_key(t) for t in e.factors))
    if isinstance(e, Pow):
        return (4, _sort_key(e.base), _sort_key(e.exp))
    if isinstance(e, Binom):
        return (5, _sort_key(e.n), _sort_key(e.k))
    return (6, e.name, tuple(_sort_key(a) for a in e.args))


def _fits(count: int, base: int, budget: int) -> bool:
    """Whether base**count has at most ``budget`` digits (base >= 2)."""
    if count > 4 * budget + 4:
        return False
    return count * math.log10(base) <= budget


def _as_expr(x) -> Expr:
    if isinstance(x, bool):
        raise TypeError("booleans are not bounds")
    if isinstance(x, int):
        return Num(x)
    if isinstance(x, str):
        return Atom(x)
    if isinstance(x, BigBound):
        return x.expr
    return x


def add(*xs) -> Expr:
    terms: list[Expr] = []
    const = 0
    for x in map(_as_expr, xs):
        parts = x.terms if isinstance(x, Add) else (x,)
        for t in parts:
            if isinstance(t, Num):
                const += t.value
            else:
                terms.append(t)
    if not terms:
        return Num(const)
    terms.sort(key=_sort_key)
    if const:
        terms.append(Num(const))
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


def mul(*xs, budget: int = DEFAULT_DIGITS) -> Expr:
    factors: list[Expr] = []
    const = 1
    for x in map(_as_expr, xs):
        parts = x.factors if isinstance(x, Mul) else (x,)
        for f in parts:
            if isinstance(f, Num):
                if _digits(const) + _digits(f.value) > budget:
                    factors.append(f)
                else:
                    const *= f.value
            else:
                factors.append(f)
    if const == 0:
        return Num(0)
    if not factors:
        return Num(const)
    if const != 1 and len(factors) == 1 and isinstance(factors[0], Add):
        return add(*(mul(const, t, budget=budget) for t in factors[0].terms))
    factors.sort(key=_sort_key)
    if const != 1:
        factors.insert(0, Num(const))
    return factors[0] if len(factors) == 1 else Mul(tuple(factors))


def power(b, e, budget: int = DEFAULT_DIGITS) -> Expr:
    b, e = _as_expr(b), _as_expr(e)
    if isinstance(e, Num):
        if e.value == 0:
            return Num(1)
        if e.value == 1:
            return b
    if isinstance(b, Num):
        if b.value in (0, 1) and not (b.value == 0 and not isinstance(e, Num)):
            return Num(b.value ** (e.value if isinstance(e, Num) else 1))
        if isinstance(e, Num) and e.value > 0:
            if _fits(e.value, abs(b.value), budget):
                return Num(b.value ** e.value)
    return Pow(b, e)


def binom(n, k, budget: int = DEFAULT_DIGITS) -> Expr:
    n, k = _as_expr(n), _as_expr(k)
    if isinstance(n, Num) and isinstance(k, Num):
        kk = min(k.value, n.value - k.value)
        if kk < 0:
            return Num(0)
        if _fits(kk, max(n.value, 2), budget):
            return Num(math.comb(n.value, k.value))
    return Binom(n, k)


def call(name: str, *args) -> Expr:
    return Call(name, tuple(_as_expr(a) for a in args))


def raw_pow(b, e) -> Expr:
    """A power node that is never folded."""
    return Pow(_as_expr(b), _as_expr(e))


# ------------------------------------------------------------ BigBound

@dataclass(frozen=True)
class BigBound:
    expr: Expr

    @property
    def is_exact(self) -> bool:
        return isinstance(self.expr, Num)

    @property
    def value(self) -> int:
        if not self.is_exact:
            raise ValueError("bound is symbolic")
        return self.expr.value

    def digits_estimate(self) -> int | None:
        """Decimal digits of the value (a lower estimate for towers, None if unbounded)."""
        if self.is_exact:
            return _digits(self.value)
        lg = lower_log10(self.expr)
        return None if math.isinf(lg) else int(lg) + 1

    def __str__(self) -> str:
        return render(self.expr)

    def to_json(self) -> dict:
        out = {"exact": self.is_exact, "expr": expr_to_json(self.expr), "text": str(self)}
        d = self.digits_estimate()
        out["digits"] = d
        return out

    @classmethod
    def from_json(cls, data: dict) -> "BigBound":
        return cls(expr_from_json(data["expr"]))


def Exact(value: int) -> BigBound:
    return BigBound(Num(int(value)))


def Tower(expr: Expr) -> BigBound:
    return BigBound(expr)


def bound(x) -> BigBound:
    return x if isinstance(x, BigBound) else BigBound(_as_expr(x))


# ------------------------------------------------------------ rendering

def _atomic(e: Expr) -> bool:
    return (isinstance(e, Num) and e.value >= 0) or isinstance(e, (Atom, Call))


def render(e: Expr) -> str:
    with _unlimited_digits():
        return _render(e)


def _render(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, Call):
        return f"{e.name}({', '.join(_render(a) for a in e.args)})"
    if isinstance(e, Binom):
        return f"binom({_render(e.n)}, {_render(e.k)})"
    if isinstance(e, Pow):
        b = _render(e.base) if _atomic(e.base) else f"({_render(e.base)})"
        x = _render(e.exp) if _atomic(e.exp) else f"({_render(e.exp)})"
        return f"{b}^{x}"
    if isinstance(e, Mul):
        return "*".join(_render(f) if not isinstance(f, Add) else f"({_render(f)})"
                        for f in e.factors)
    out = _render(e.terms[0])
    for t in e.terms[1:]:
        if isinstance(t, Num) and t.value < 0:
            out += f" - {-t.value}"
        else:
            out += f" + {_render(t)}"
    return out


def expr_to_json(e: Expr) -> dict:
    with _unlimited_digits():
        return _to_json(e)


def _to_json(e: Expr) -> dict:
    if isinstance(e, Num):
        return {"op": "num", "value": str(e.value)}
    if isinstance(e, Atom):
        return {"op": "atom", "name": e.name}
    if isinstance(e, Add):
        return {"op": "add", "args": [_to_json(t) for t in e.terms]}
    if isinstance(e, Mul):
        return {"op": "mul", "args": [_to_json(t) for t in e.factors]}
    if isinstance(e, Pow):
        return {"op": "pow", "args": [_to_json(e.base), _to_json(e.exp)]}
    if isinstance(e, Binom):
        return {"op": "binom", "args": [_to_json(e.n), _to_json(e.k)]}
    return {"op": "call", "name": e.name, "args": [_to_json(a) for a in e.args]}


def expr_from_json(d: dict) -> Expr:
    op = d["op"]
    if op == "num":
        with _unlimited_digits():
            return Num(int(d["value"]))
    if op == "atom":
        return Atom(d["name"])
    args = tuple(expr_from_json(a) for a in d.get("args", []))
    if op == "add":
        return Add(args)
    if op == "mul":
        return Mul(args)
    if op == "pow":
        return Pow(*args)
    if op == "binom":
        return Binom(*args)
    if op == "call":
        return Call(d["name"], args)
    raise ValueError(f"unknown expression op {op!r}")


def evaluate(e: Expr, budget: int = DEFAULT_DIGITS) -> int | None:
    """Direct exact evaluation, or None if symbolic or over budget."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, (Atom, Call)):
        return None
    if isinstance(e, Add):
        vals = [evaluate(t, budget) for t in e.terms]
        return None if None in vals else sum(vals)
    if isinstance(e, Mul):
        vals = [evaluate(t, budget) for t in e.factors]
        if None in vals or sum(_digits(v) for v in vals) > budget + len(vals):
            return None
        return math.prod(vals)
    if isinstance(e, Pow):
        b, x = evaluate(e.base, budget), evaluate(e.exp, budget)
        if b is None or x is None:
            return None
        if b in (0, 1) or x <= 1:
            return b**x
        if not _fits(x, abs(b), budget):
            return None
        return b**x
    n, k = evaluate(e.n, budget), evaluate(e.k, budget)
    if n is None or k is None:
        return None
    if min(k, n - k) >= 0 and not _fits(min(k, n - k), max(n, 2), budget):
        return None
    return math.comb(n, k)


# ------------------------------------------------------------ magnitudes

def lower_log10(e: Expr) -> float:
    """A lower bound on log10 of the value (-inf for values below 1)."""
    v = lower_int(e)
    if v >= 1 and v < 10**300:
        base = math.log10(v)
    else:
        base = -math.inf if v < 1 else math.inf
    if isinstance(e, Pow) and lower_int(e.base) >= 2:
        x = lower_log10(e.exp)
        lb = math.log10(lower_int(e.base))
        # log10(b^x) = x * log10 b
        cand = math.inf if x > 300 else 10**x * lb
        return max(base, cand)
    if isinstance(e, Mul):
        parts = [lower_log10(f) for f in e.factors]
        if all(p >= 0 for p in parts):
            return max(base, sum(parts))
    if isinstance(e, Add):
        xs, c = _split(e, Add)
        if any(lower_int(x) < 0 for x in xs) or not xs:
            return base
        top = max(lower_log10(x) for x in xs)
        if c >= 0:
            return max(base, top)
        # T - |c| >= T/2 once T >= 2|c|
        if top > _digits(-c) + 1:
            return max(base, top - LOG10_2)
        return base
    if isinstance(e, Call):
        info = _call_info(e.name)[1](e.args)
        cands = [base] + [lower_log10(x) for x in info]
        if all(isinstance(a, Num) for a in e.args):
            vals = [a.value for a in e.args]
            if e.name == "R" and vals[2] >= 1:
                cands.append(_ramsey_log10(vals[0], vals[1], math.log10(vals[2])))
            elif e.name == "RAM" and vals[1] >= 1:
                cands.append(_ramsey_log10(2 * vals[0], vals[0], vals[0] * math.log10(vals[1])))
        return max(cands)
    return base


def _ramsey_log10(m: int, l: int, logc: float) -> float:
    """log10 of the Ramsey recurrence value, computed from below in floating point."""
    if l == 1:
        return 0.0 if m <= 1 else logc + math.log10(m - 1)
    if m <= l:
        return math.log10(m)
    ls = _ramsey_log10(m - 1, l - 1, logc)  # log10 of s - 1, a lower bound for log10 s
    if math.isinf(ls) or logc == 0:
        return ls
    # binom(s-1, l-1) >= ((s-1)/(l-1))^(l-1)
    lb = (l - 1) * (ls - math.log10(l - 1))
    if lb > 300:
        return math.inf
    return ls + max(10**lb, 1.0) * logc


_CAP = 10**300


def lower_int(e: Expr) -> int:
    """A lower bound on the value, saturating at a large cap."""
    if isinstance(e, Num):
        return max(min(e.value, _CAP), -_CAP)
    if isinstance(e, Atom):
        return 0
    if isinstance(e, Add):
        return max(min(sum(lower_int(t) for t in e.terms), _CAP), -_CAP)
    if isinstance(e, Mul):
        vals = [lower_int(f) for f in e.factors]
        if any(v < 0 for v in vals):
            return -_CAP
        out = 1
        for v in vals:
            out = min(out * v, _CAP)
        return out
    if isinstance(e, Pow):
        b, x = lower_int(e.base), lower_int(e.exp)
        if b < 1 or x < 0:
            return 0 if b >= 0 else -_CAP
        if b == 1 or x == 0:
            return 1
        if x * math.log10(b) > 300:
            return _CAP
        return min(b**x, _CAP)
    if isinstance(e, Binom):
        return 0
    return max([0] + [lower_int(x) for x in _call_info(e.name)[1](e.args)])


# ------------------------------------------------------------ comparison

def le(a, b) -> bool:
    """True when a <= b is established structurally (False means undecided or false)."""
    return _le(_as_expr(a), _as_expr(b), False)


def lt(a, b) -> bool:
    return _le(_as_expr(a), _as_expr(b), True)


def compare(a, b) -> int | None:
    """-1, 0 or 1 when decidable, None when incomparable."""
    a, b = _as_expr(a), _as_expr(b)
    if a == b:
        return 0
    if isinstance(a, Num) and isinstance(b, Num):
        return (a.value > b.value) - (a.value < b.value)
    if _le(a, b, True):
        return -1
    if _le(b, a, True):
        return 1
    if _le(a, b, False) and _le(b, a, False):
        return 0
    return None


def _exact_below(a: Expr, b: Expr, strict: bool) -> bool:
    """Decide a (a number) against the lower bounds of b."""
    v = a.value
    lo = lower_int(b)
    if v < lo or (v == lo and not strict):
        return True
    return _digits(v) <= lower_log10(b)


def _le(a: Expr, b: Expr, strict: bool) -> bool:
    if a == b:
        return not strict
    if isinstance(a, Num) and isinstance(b, Num):
        return a.value < b.value if strict else a.value <= b.value
    if isinstance(a, Num) and _exact_below(a, b, strict):
        return True
    if isinstance(a, Add) or isinstance(b, Add):
        if _le_sum(a, b, strict):
            return True
    if isinstance(a, Mul) or isinstance(b, Mul):
        if _le_prod(a, b, strict):
            return True
    if type(a) is type(b):
        if isinstance(a, Pow) and _le_pow(a, b, strict):
            return True
        if isinstance(a, Binom) and a.k == b.k and _le(a.n, b.n, False) and not strict:
            return True
        if isinstance(a, Call) and a.name == b.name and len(a.args) == len(b.args):
            if _le_call(a, b, strict):
                return True
    # b bounded below by something at least a
    if isinstance(b, Pow) and lower_int(b.base) >= 2 and _le(a, b.exp, False):
        return True
    if isinstance(b, Pow) and lower_int(b.base) >= 2 and lower_int(b.exp) >= 4:
        # 2^e >= e^2 for e >= 4
        if _le(a, mul(b.exp, b.exp), strict):
            return True
    if isinstance(b, Pow) and lower_int(b.exp) >= 1 and lower_int(b.base) >= 0:
        if _le(a, b.base, strict):
            return True
    if isinstance(b, Call):
        for lo in _call_info(b.name)[1](b.args):
            if _le(a, lo, strict):
                return True
    return False


def _le_pow(a: Pow, b: Pow, strict: bool) -> bool:
    if lower_int(a.base) < 1 or lower_int(a.exp) < 0:
        return False
    base_le = _le(a.base, b.base, False)
    exp_le = _le(a.exp, b.exp, False)
    if not (base_le and exp_le):
        return False
    if not strict:
        return True
    if lower_int(b.base) >= 2 and _le(a.exp, b.exp, True):
        return True
    return lower_int(a.exp) >= 1 and _le(a.base, b.base, True)


def _le_call(a: Call, b: Call, strict: bool) -> bool:
    mono = _call_info(a.name)[0]
    positions = range(len(a.args)) if mono is None else mono
    for i in range(len(a.args)):
        if i not in positions and a.args[i] != b.args[i]:
            return False
    if not all(_le(a.args[i], b.args[i], False) for i in positions):
        return False
    # named functions are only known to be non-decreasing
    return not strict


def _split(e: Expr, kind) -> tuple[list[Expr], int]:
    parts = (e.terms if isinstance(e, Add) else (e,)) if kind is Add else \
            (e.factors if isinstance(e, Mul) else (e,))
    const = 0 if kind is Add else 1
    rest = []
    for p in parts:
        if isinstance(p, Num):
            const = const + p.value if kind is Add else const * p.value
        else:
            rest.append(p)
    return rest, const


def _match(xs: list[Expr], ys: list[Expr]) -> tuple[list[tuple[Expr, Expr]], list[Expr]] | None:
    """Injectively match each x to some y with x <= y (greedy); return pairs and leftovers."""
    left = list(ys)
    pairs = []
    for x in xs:
        for i, y in enumerate(left):
            if _le(x, y, False):
                pairs.append((x, y))
                del left[i]
                break
        else:
            return None
    return pairs, left


def _surplus(x: Expr, y: Expr) -> int:
    """A lower bound on y - x for a matched pair x <= y of scaled terms."""
    xs, cx = _split(x, Mul)
    ys, cy = _split(y, Mul)
    if cy <= cx or len(ys) != len(xs):
        return 0
    rest = 1
    for t in ys:
        rest = min(rest * max(lower_int(t), 0), _CAP)
    return min((cy - cx) * rest, _CAP)


def _le_sum(a: Expr, b: Expr, strict: bool) -> bool:
    xs, ca = _split(a, Add)
    ys, cb = _split(b, Add)
    if not xs and not ys:
        return False
    if any(lower_int(x) < 0 for x in xs) or any(lower_int(y) < 0 for y in ys):
        return False
    if len(xs) + len(ys) <= 1 and not (isinstance(a, Add) or isinstance(b, Add)):
        return False
    m = _match(xs, ys)
    if m is None:
        return False
    pairs, leftover = m
    slack = cb - ca + sum(lower_int(y) for y in leftover) + sum(_surplus(x, y) for x, y in pairs)
    if slack < 0 and leftover:
        need = ca - cb
        if max(lower_log10(y) for y in leftover) > _digits(need) + 1:
            return True
    if strict:
        return slack > 0 or (slack == 0 and any(_le(x, y, True) for x, y in pairs))
    return slack >= 0


def _le_prod(a: Expr, b: Expr, strict: bool) -> bool:
    xs, ca = _split(a, Mul)
    ys, cb = _split(b, Mul)
    if ca < 0 or cb < 0:
        return False
    # non-negative factors suffice for <=; strictness needs a positive left side
    if any(lower_int(x) < (1 if strict else 0) for x in xs) or any(lower_int(y) < 0 for y in ys):
        return False
    if (len(xs), len(ys)) == (1, 1) and not (isinstance(a, Mul) or isinstance(b, Mul)):
        return False
    m = _match(xs, ys)
    if m is None:
        return False
    pairs, leftover = m
    # leftover factors of b are >= 1, so their product scales cb up
    scale = 1
    for y in leftover:
        scale = min(scale * lower_int(y), _CAP)
    if ca > cb * scale:
        return False
    if not strict:
        return True
    return ca < cb * scale or any(_le(x, y, True) and lower_int(y) >= 1 for x, y in pairs)


# ------------------------------------------------------------ the bounds

@lru_cache(maxsize=4096)
def _grz_exact(n: int, x: int, budget: int) -> int | None:
    if n == 1:
        return x * x + 2 if 2 * _digits(x) <= budget + 1 else None
    v = 2
    for _ in range(x):
        v = _grz_exact(n - 1, v, budget)
        if v is None:
            return None
    return v


def grzegorczyk_E(n: int, *args, budget: int = DEFAULT_DIGITS) -> BigBound:
    """E_0(x, y) = x + y, E_1(x) = x^2 + 2, E_{n+2}(x) = E_{n+1} applied x times to 2."""
    if n < 0:
        raise ValueError("index must be non-negative")
    if n == 0:
        if len(args) != 2:
            raise ValueError("E_0 takes two arguments")
        return BigBound(add(args[0], args[1]))
    if len(args) != 1:
        raise ValueError(f"E_{n} takes one argument")
    x = _as_expr(args[0])
    if not isinstance(x, Num):
        return BigBound(call(f"E_{n}", x))
    if x.value < 0:
        raise ValueError("argument must be non-negative")
    v = _grz_exact(n, x.value, budget)
    if v is not None:
        return Exact(v)
    if n == 1:
        return BigBound(call("E_1", x))
    # unfold the outer iterations while the inner value is still exact,
    # then wrap a few symbolic layers before giving up on unfolding
    v, i = 2, 0
    while i < x.value:
        nxt = _grz_exact(n - 1, v, budget)
        if nxt is None:
            break
        v, i = nxt, i + 1
    if x.value - i > SYMBOLIC_LAYERS:
        return BigBound(call(f"E_{n}", x))
    out = BigBound(Num(v))
    for _ in range(x.value - i):
        out = grzegorczyk_E(n - 1, out, budget=budget)
    return out


def gowers_W_bound(r, m) -> BigBound:
    """2^(2^(r^(2^(2^(m+9))))), kept in tower form."""
    if isinstance(r, int) and r < 1 or isinstance(m, int) and m < 1:
        raise ValueError("r and m must be positive")
    inner = raw_pow(2, add(m, 9))
    return BigBound(raw_pow(2, raw_pow(2, raw_pow(r, raw_pow(2, inner)))))


@lru_cache(maxsize=4096)
def _ramsey_exact(m: int, l: int, c: int, budget: int) -> int | None:
    if l == 1:
        return c * (m - 1) + 1
    if m <= l:
        return m
    sub = _ramsey_exact(m - 1, l - 1, c, budget)
    if sub is None:
        return None
    s = sub + 1
    if c == 1:
        return s
    e = binom(s - 1, l - 1, budget)
    if not isinstance(e, Num):
        return None
    if not _fits(e.value, c, budget - _digits(s)):
        return None
    return s * c**e.value


def ramsey_R_bound(m, l, c, budget: int = DEFAULT_DIGITS) -> BigBound:
    """Upper bound on R(m, l, c) from end-homogeneous sequences.

    R(m, 1, c) = c(m-1) + 1, R(m, l, c) = m for m <= l, and otherwise
    R(m, l, c) <= s * c^binom(s-1, l-1) with s = R(m-1, l-1, c) + 1.
    """
    me, le_, ce = (_as_expr(v) for v in (m, l, c))
    if all(isinstance(v, Num) for v in (me, le_, ce)):
        mv, lv, cv = me.value, le_.value, ce.value
        if not (mv >= lv >= 1 and cv >= 1):
            raise ValueError("need m >= l >= 1 and c >= 1")
        v = _ramsey_exact(mv, lv, cv, budget)
        if v is not None:
            return Exact(v)
    if isinstance(le_, Num) and le_.value == 1:
        return BigBound(add(mul(ce, add(me, -1)), 1))
    if isinstance(ce, Num) and ce.value == 1:
        return BigBound(me)
    return BigBound(call("R", me, le_, ce))


def ram_bound(l, C, budget: int = DEFAULT_DIGITS) -> BigBound:
    """RAM(<l+1, C) <= R(2l, l, C^l)."""
    le_, ce = _as_expr(l), _as_expr(C)
    if isinstance(le_, Num) and le_.value < 1:
        raise ValueError("l must be positive")
    if isinstance(ce, Num) and ce.value == 1:
        return BigBound(mul(2, le_))
    if isinstance(le_, Num):
        cl = power(ce, le_, budget)
        if isinstance(cl, Num):
            r = ramsey_R_bound(2 * le_.value, le_.value, cl.value, budget)
            if r.is_exact:
                return r
        if le_.value == 1:
            return BigBound(add(ce, 1))
    return BigBound(call("RAM", le_, ce))


def f13_alpha_bound(m, alphabet, colors, budget: int = DEFAULT_DIGITS) -> BigBound:
    """Homogeneity ground for the alpha-isomorphism partition property: RAM(<m, m*C^(k^m))."""
    me = _as_expr(m)
    if isinstance(me, Num) and me.value == 1:
        return Exact(1)
    C = mul(me, power(colors, power(alphabet, me, budget), budget), budget=budget)
    return ram_bound(add(me, -1), C, budget)


def f13_bound(m, alphabet, colors, budget: int = DEFAULT_DIGITS) -> BigBound:
    """m_0 = m, m_{l+1} = RAM(<m_l, C^(k^m_l)); returns m_k for k = alphabet."""
    if not isinstance(alphabet, int) or alphabet < 1:
        raise ValueError("alphabet must be a positive integer")
    cur = _as_expr(m)
    for _ in range(alphabet):
        cur = ram_bound(add(cur, -1), power(colors, power(alphabet, cur, budget), budget),
                        budget).expr
    return BigBound(cur)


def symbolic_w(h, side, colors) -> BigBound:
    return BigBound(call("W", h, side, colors))


def hj_bound(dim, alphabet, colors, w_value=None, budget: int = DEFAULT_DIGITS) -> BigBound:
    """Bound on HJ(dim, alphabet, colors) through the partition property.

    The grid has dimension alphabet-1 and side dim+1; ``w_value`` is the
    corresponding W value (an int, an atom name, or a BigBound).  Without it
    the one-dimensional case falls back to the Gowers bound.
    """
    if alphabet < 2 or dim < 1:
        raise ValueError("need dim >= 1 and alphabet >= 2")
    h, side = alphabet - 1, dim + 1
    if w_value is None:
        if h != 1:
            raise MissingWValue(f"no bound known for the {h}-dimensional W; pass w_value")
        w = gowers_W_bound(colors, side).expr
    else:
        w = _as_expr(w_value)
    return f13_bound(mul(alphabet, w, budget=budget), alphabet, colors, budget)


def hj_bound_product(dim, alphabet, colors, expand: bool = False,
                     w_value=None, budget: int = DEFAULT_DIGITS) -> BigBound:
    """HJ(dim, k) <= dim * HJ(1, k^dim).

    By default the one-dimensional number stays a named value; with ``expand``
    it is replaced by :func:`hj_bound` over the larger alphabet.
    """
    big = power(alphabet, dim, budget)
    if not expand:
        return BigBound(mul(dim, call("HJ", 1, big, colors)))
    if not isinstance(big, Num):
        raise ValueError("alphabet power too large to expand")
    return BigBound(mul(dim, hj_bound(1, big.value, colors, w_value, budget)))
