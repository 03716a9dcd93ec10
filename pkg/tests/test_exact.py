from __future__ import annotations

import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from hjpar.exact import (BudgetExceeded, NumberKind, build_instance, canonical_prefixes,
                         exact_number)


def value(name, **p):
    return exact_number(NumberKind.make(name, **p))


def test_hj_line():
    cert = value("hj", dim=1, alphabet=2, colors=2)
    assert cert.value == 2 and cert.verified
    bad = cert.bad_coloring
    assert bad.length == 1 and bad.color((0,)) != bad.color((1,))


def _has_ap(values, side):
    n = len(values)
    return any(len({values[a + d * i] for i in range(side)}) == 1
               for d in range(1, n) for a in range(n - d * (side - 1)))


def test_van_der_waerden():
    cert = value("w", h=1, m=3, colors=2)
    assert cert.value == 9
    bad = [int(x) for x in cert.bad_coloring.table]
    assert len(bad) == 8 and not _has_ap(bad, 3)
    # every 2-coloring of 9 points has a 3-term progression (brute force)
    assert all(_has_ap(v, 3) for v in itertools.product([0, 1], repeat=9))


def test_strict_grid_variant():
    # the strict variant also asks for room for one more step
    assert value("w", h=1, m=2, colors=2, strict=True).value == 5
    assert value("w", h=1, m=2, colors=2).value == 3


def _has_triangle(n, col):
    return any(col[(a, b)] == col[(a, c)] == col[(b, c)]
               for a, b, c in itertools.combinations(range(n), 3))


def test_ramsey_triangle():
    cert = value("r", m=3, l=2, colors=2)
    assert cert.value == 6
    f = cert.bad_coloring
    assert f.n == 5 and not _has_triangle(5, f.values)


def test_ram_pigeonhole():
    cert = value("ram", m=2, l=2, colors=2)
    assert cert.value == 3
    assert cert.bad_coloring.n == 2
    assert len({cert.bad_coloring((0,)), cert.bad_coloring((1,))}) == 2


def test_par_numbers():
    assert value("f13alpha", m=2, alphabet=2, colors=2).value == 3
    assert value("f13", m=2, alphabet=2, colors=2).value == 3


@settings(max_examples=12, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3))
def test_pigeonhole_closed_forms(m, c):
    # one-element sets: the pigeonhole value c(m-1)+1
    assert value("r", m=m, l=1, colors=c).value == c * (m - 1) + 1
    assert value("ram", m=m, l=2, colors=c).value == c * (m - 1) + 1


def test_certificate_json_is_stable():
    a = value("w", h=1, m=3, colors=2).to_json()
    b = value("w", h=1, m=3, colors=2).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["format"] == "hjpar/certificate@1" and a["value"] == 9
    assert [s["n"] for s in a["sizes"]] == list(range(a["floor"], 10))


def test_workers_agree():
    k = NumberKind.make("w", h=1, m=3, colors=2)
    one = exact_number(k, workers=1).to_json()
    many = exact_number(k, workers=3).to_json()
    assert one == many


def test_budget_bracket():
    with pytest.raises(BudgetExceeded) as exc:
        exact_number(NumberKind.make("w", h=1, m=3, colors=2), max_nodes=50)
    lo, hi = exc.value.lower, exc.value.upper
    assert lo <= 9 and hi is None
    with pytest.raises(BudgetExceeded):
        exact_number(NumberKind.make("w", h=1, m=3, colors=2), max_n=6)


def test_resume_matches_uninterrupted(tmp_path):
    kind = NumberKind.make("w", h=1, m=3, colors=2)
    full = exact_number(kind).to_json()
    ck = str(tmp_path / "run.ckpt")
    for budget in (40, 120, 300):
        with pytest.raises(BudgetExceeded):
            exact_number(kind, checkpoint=ck, max_nodes=budget)
    resumed = exact_number(kind, checkpoint=ck).to_json()
    assert resumed == full
    # a finished journal is reused without further search
    assert exact_number(kind, checkpoint=ck, max_nodes=1).to_json() == full


def test_checkpoint_of_another_run_is_refused(tmp_path):
    ck = str(tmp_path / "run.ckpt")
    exact_number(NumberKind.make("hj", dim=1, alphabet=2, colors=2), checkpoint=ck)
    with pytest.raises(ValueError):
        exact_number(NumberKind.make("r", m=3, l=2, colors=2), checkpoint=ck)


def test_canonical_prefixes():
    # colorings of 3 cells up to renaming colors: set partitions with at most c blocks
    assert canonical_prefixes(3, 2) == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1)]
    assert len(canonical_prefixes(4, 3)) == 14


def test_instance_shapes():
    inst = build_instance(NumberKind.make("hj", dim=1, alphabet=2, colors=2), 2)
    assert inst.ncells == 4 and inst.ncolors == 2
    assert len(inst.witnesses) == 5


def test_bad_params():
    with pytest.raises(ValueError):
        NumberKind.make("hj", dim=1, alphabet=2)
    with pytest.raises(ValueError):
        NumberKind.make("nope")
