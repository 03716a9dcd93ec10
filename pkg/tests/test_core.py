from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from hjpar.core import (ConvexSubspace, DomainMismatch, PartialWord, RankOutOfRange,
                        all_words, assemble_word, block_layouts, enumerate_subspace,
                        iter_subspaces, rank_word, support_form, unrank_word,
                        validate_subspace, word_from_support)


def pw(d):
    return PartialWord.from_mapping(d)


@pytest.mark.parametrize("w,k,r", [((1, 0, 1), 2, 5), ((0, 0), 3, 0), ((1, 1, 1, 1), 2, 15)])
def test_rank(w, k, r):
    assert rank_word(w, k) == r
    assert unrank_word(r, len(w), k) == w


def test_unrank_out_of_range():
    with pytest.raises(RankOutOfRange):
        unrank_word(8, 3, 2)


@given(st.integers(1, 4), st.integers(0, 5), st.data())
def test_rank_roundtrip(k, m, data):
    r = data.draw(st.integers(0, k**m - 1))
    assert rank_word(unrank_word(r, m, k), k) == r


def test_all_words_in_rank_order():
    assert [rank_word(w, 3) for w in all_words(3, 3)] == list(range(27))


@pytest.mark.parametrize("w,base,u,beta", [
    ((0, 1, 1), 0, (1, 2), (1, 1)),
    ((0, 0, 0), 0, (), ()),
    ((2, 0, 1), 1, (0, 1), (2, 0)),
])
def test_support_form(w, base, u, beta):
    f = support_form(w, base)
    assert tuple(f.support) == u and tuple(f.values) == beta
    assert word_from_support(f, len(w)) == w


def test_assemble_word():
    assert assemble_word((1,), (1,), pw({0: 0, 2: 0}), 3) == (0, 1, 0)
    assert assemble_word((), (), pw({0: 0, 1: 0}), 2) == (0, 0)
    with pytest.raises(DomainMismatch):
        assemble_word((1,), (1,), pw({1: 0, 2: 0}), 3)


@pytest.mark.parametrize("blocks,fixed,k,words", [
    (((0,), (1,)), {}, 2, {(0, 0), (0, 1), (1, 0), (1, 1)}),
    (((0, 1),), {2: 1}, 2, {(0, 0, 1), (1, 1, 1)}),
    (((0,),), {1: 0}, 3, {(0, 0), (1, 0), (2, 0)}),
])
def test_enumerate_subspace(blocks, fixed, k, words):
    assert set(enumerate_subspace(ConvexSubspace(blocks, pw(fixed)), k)) == words


def test_validate_subspace():
    assert validate_subspace(ConvexSubspace(((0,), (2,)), pw({1: 0}))) == []
    assert any("block order" in p for p in
               validate_subspace(ConvexSubspace(((2,), (0,)), pw({1: 0}))))
    assert any("overlap" in p for p in
               validate_subspace(ConvexSubspace(((0, 1), (1, 2)), PartialWord())))


def _brute_subspaces(m, k, dim):
    """Every convex subspace by plain enumeration of position labels."""
    out = set()
    for labels in itertools.product(range(dim + 1), repeat=m):
        blocks = [tuple(p for p in range(m) if labels[p] == l + 1) for l in range(dim)]
        if any(not b for b in blocks):
            continue
        if any(max(blocks[i]) >= min(blocks[i + 1]) for i in range(dim - 1)):
            continue
        rest = [p for p in range(m) if labels[p] == 0]
        for fill in itertools.product(range(k), repeat=len(rest)):
            out.add((tuple(blocks), tuple(zip(rest, fill))))
    return out


@pytest.mark.parametrize("m,k,dim", [(3, 2, 1), (4, 2, 2), (3, 3, 2), (4, 2, 3)])
def test_iter_subspaces_matches_brute_force(m, k, dim):
    got = [(s.blocks, s.fixed.items) for s in iter_subspaces(m, k, dim)]
    assert len(got) == len(set(got))
    assert set(got) == _brute_subspaces(m, k, dim)
    assert all(validate_subspace(ConvexSubspace(b, PartialWord(f)), m) == [] for b, f in got)


@given(st.integers(1, 5), st.integers(1, 3))
def test_layouts_are_ordered_and_disjoint(m, dim):
    for blocks in block_layouts(m, dim):
        assert all(max(a) < min(b) for a, b in zip(blocks, blocks[1:]))


@given(st.integers(1, 4), st.integers(2, 3), st.integers(1, 2), st.data())
def test_subspace_size(m, k, dim, data):
    subs = list(iter_subspaces(m, k, dim))
    if not subs:
        assert dim > m
        return
    s = data.draw(st.sampled_from(subs))
    ws = enumerate_subspace(s, k)
    assert len(set(ws)) == k**dim
