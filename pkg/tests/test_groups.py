import math

import pytest
from hypothesis import given, settings, strategies as st

from maniforge.caps import CapExceeded, cap
from maniforge.groups import (
    GroupSpecError,
    ReducedWord,
    all_subgroups,
    cyclic,
    dihedral,
    direct_product,
    elem_abelian_2,
    element_order,
    group_from_permutations,
    make_pairing,
    named_group,
    semidirect_zs_inversion,
    subgroup_closure,
    word_invert,
    word_multiply,
    word_order,
)

SPECS = ["cyclic 6", "dihedral 5", "elemabelian2 3", "semidirect-inv 3 3",
         "product cyclic 2 ; dihedral 3", "perm (0 1)(2 3), (1 2)"]
ORDERS = [6, 10, 8, 18, 12, 8]


@pytest.mark.parametrize("spec,order", list(zip(SPECS, ORDERS)))
def test_named_group_orders(spec, order):
    assert named_group(spec).order == order


@pytest.mark.parametrize("spec", SPECS)
def test_group_axioms(spec):
    G = named_group(spec)
    e = G.identity
    els = G.elements
    for a in els:
        assert G.mul(a, e) == a == G.mul(e, a)
        assert G.mul(a, G.inv(a)) == e
    sample = els[: min(len(els), 8)]
    for a in sample:
        for b in sample:
            for c in sample:
                assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))


@pytest.mark.parametrize("spec", SPECS)
def test_words_parse_back(spec):
    G = named_group(spec)
    for g in G.elements:
        assert G.parse_element(G.word(g)) == g


def test_bad_specs():
    for spec in ["cyclic", "cyclic x", "torus 3", "dihedral 0", "perm ((0 1"]:
        with pytest.raises(GroupSpecError):
            named_group(spec)
    with pytest.raises(GroupSpecError):
        cyclic(3).parse_element("q")


def test_dihedral_relations():
    D = dihedral(5)
    x, y = D.generator("x"), D.generator("y")
    assert element_order(D, x) == element_order(D, y) == 2
    assert element_order(D, D.mul(x, y)) == 5


def test_semidirect_order_and_generators():
    G = semidirect_zs_inversion(4, 3)
    assert G.order == 2 * 4 ** 2
    for name in G.gen_names:
        assert element_order(G, G.generator(name)) in (1, 2)


def test_product_generator_names():
    G = direct_product(cyclic(4), cyclic(4))
    assert G.gen_names == ["g@0", "g@1"]
    assert G.parse_element("g@0^3*g@1") == (3, 1)


def test_subgroups_of_s3():
    G = group_from_permutations([(1, 0, 2), (0, 2, 1)])
    subs = all_subgroups(G)
    assert sorted(len(s) for s in subs) == [1, 2, 2, 2, 3, 6]
    assert subgroup_closure(G, [1]) in subs


def test_elem_abelian_is_abelian():
    G = elem_abelian_2(4)
    assert all(G.mul(a, b) == G.mul(b, a) for a in G.elements for b in G.elements)


def test_group_cap(monkeypatch):
    monkeypatch.setenv("FORGE_CAPS", "group=10")
    assert cap("group") == 10
    with pytest.raises(CapExceeded):
        cyclic(20)
    monkeypatch.delenv("FORGE_CAPS")
    assert cyclic(20).order == 20


# reduced words in the universal voltage group ------------------------------

PAIRING = make_pairing({0: 0, 2: 4, 4: 2, 6: 6, 8: 10, 10: 8})
LETTERS = [0, 2, 4, 6, 8, 10]
raw_words = st.lists(st.sampled_from(LETTERS), max_size=12)


def reduce(raw):
    return ReducedWord.from_letters(raw, PAIRING)


@settings(max_examples=200, deadline=None)
@given(raw_words, raw_words, raw_words)
def test_word_group_laws(a, b, c):
    u, v, w = reduce(a), reduce(b), reduce(c)
    assert u.is_reduced()
    assert word_multiply(word_multiply(u, v), w) == word_multiply(u, word_multiply(v, w))
    assert len(word_multiply(u, word_invert(u))) == 0
    assert reduce(a + b) == word_multiply(u, v)


@settings(max_examples=200, deadline=None)
@given(raw_words, raw_words)
def test_word_order(a, b):
    u = reduce(a)
    conj = reduce(b + [0] + [dict(PAIRING)[x] for x in reversed(b)])
    assert word_order(conj) == 2
    o = word_order(u)
    assert o in (1, 2, math.inf)
    if o != math.inf:
        p = u
        for _ in range(int(o) - 1):
            p = word_multiply(p, u)
        assert len(p) == 0
    else:
        assert len(word_multiply(u, u)) > 0


def test_pairing_must_be_involution():
    with pytest.raises(ValueError):
        make_pairing({0: 2, 2: 4, 4: 0})
    with pytest.raises(ValueError):
        ReducedWord.from_letters([1], PAIRING)
