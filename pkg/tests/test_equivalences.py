from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from hjpar.colorings import make_coloring
from hjpar.core import all_words
from hjpar.equivalences import (AlphaIso, FullSym, GroundMismatch, PermGroup, Subgroup,
                                apply_perm, canonical_sorted, class_key, equivalence_classes,
                                invariant_check, kind_from_json, orbit_of, related)

words = st.integers(1, 5).flatmap(lambda m: st.lists(st.integers(0, 2), min_size=m, max_size=m))


def test_apply_perm():
    assert apply_perm((0, 1, 2), (2, 1, 0)) == (2, 1, 0)
    assert apply_perm((1, 1), (0, 1)) == (1, 1)
    assert apply_perm((0, 1, 0), (1, 2, 0)) == (1, 0, 0)
    with pytest.raises(GroundMismatch):
        apply_perm((0, 1), (0, 1, 2))


def test_orbit_of():
    swap = PermGroup(3, ((1, 0, 2),))
    assert orbit_of((0, 1, 1), swap) == {(0, 1, 1), (1, 0, 1)}
    assert orbit_of((0, 0), PermGroup(2, ((1, 0),))) == {(0, 0)}
    assert orbit_of((0, 1, 1), PermGroup.symmetric(3)) == {(0, 1, 1), (1, 0, 1), (1, 1, 0)}


def test_related_examples():
    assert related((0, 1, 1), (1, 1, 0), FullSym())
    assert related((1, 0, 0), (0, 0, 1), AlphaIso(0))
    assert not related((1, 0), (1, 1), AlphaIso(0))


@pytest.mark.parametrize("w,s", [((1, 0, 1, 0), (0, 0, 1, 1)), ((2, 2, 2), (2, 2, 2)),
                                 ((2, 0, 1), (0, 1, 2))])
def test_canonical_sorted(w, s):
    assert canonical_sorted(w) == s


def _alpha_brute(w1, w2, a):
    """Order-preserving bijection of the non-a supports carrying matching letters."""
    s1 = [(p, x) for p, x in enumerate(w1) if x != a]
    s2 = [(p, x) for p, x in enumerate(w2) if x != a]
    return len(w1) == len(w2) and [x for _, x in s1] == [x for _, x in s2]


@given(words, st.data())
def test_relations_match_definitions(w1, data):
    w2 = tuple(data.draw(st.lists(st.integers(0, 2), min_size=len(w1), max_size=len(w1))))
    w1 = tuple(w1)
    perms = itertools.permutations(range(len(w1)))
    assert related(w1, w2, FullSym()) == any(apply_perm(w1, p) == w2 for p in perms)
    for a in range(3):
        assert related(w1, w2, AlphaIso(a)) == _alpha_brute(w1, w2, a)
    g = Subgroup(PermGroup(len(w1), ((tuple(range(1, len(w1))) + (0,)),)))
    assert related(w1, w2, g) == (w2 in orbit_of(w1, g.group))


@given(st.integers(1, 4), st.integers(1, 3))
def test_classes_partition_the_space(m, k):
    for kind in (FullSym(), AlphaIso(0)):
        classes = equivalence_classes(m, k, kind)
        flat = [w for c in classes for w in c]
        assert sorted(flat) == sorted(all_words(m, k))
        for c in classes:
            assert len({class_key(w, kind) for w in c}) == 1
            assert all(related(c[0], w, kind) for w in c)


def test_invariant_check():
    for m in range(1, 5):
        for k in (2, 3):
            for a in range(k):
                c = make_coloring("parity", m, k, 2, base=a)
                assert invariant_check(c, FullSym()) is None
                assert invariant_check(c, AlphaIso(a)) is None
    assert invariant_check(make_coloring("constant", 3, 3, 2, value=1), AlphaIso(2)) is None
    rank_mod = make_coloring("table", 2, 2, 2, values=[0, 1, 0, 1])
    assert set(invariant_check(rank_mod, FullSym())) == {(0, 1), (1, 0)}


def test_kind_json_roundtrip():
    for kind in (FullSym(), AlphaIso(2), Subgroup(PermGroup(3, ((1, 2, 0),)))):
        assert kind_from_json(kind.to_json()) == kind
