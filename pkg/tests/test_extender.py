from collections import deque

import pytest

from maniforge.automorphisms import is_automorphism, is_isomorphic
from maniforge.constructions import cube, ditope, polygon, simplex, square_toroidal_rn, toroid_44, two_hat
from maniforge.extender import (
    CayleyExtender,
    ExtenderError,
    PreExtender,
    coextender_via_dual,
    coextension,
    derived_adjacency,
    derived_maniplex,
    face_lattice_oracle,
    is_polytopal,
    maniplex_conditions,
    pre_extension,
    quotient_extension,
    vertex_labels,
)
from maniforge.groups import cyclic, direct_product, elem_abelian_2
from maniforge.io import load_extender
from maniforge.premaniplex import faces, is_maniplex, validate_premaniplex


def reachable(P, start, colors):
    seen = {start}
    todo = deque([start])
    while todo:
        f = todo.popleft()
        for c in colors:
            g = P.adjacency[c][f]
            if g not in seen:
                seen.add(g)
                todo.append(g)
    return seen


def test_pre_extender_rejects_non_involution():
    rn = list(range(8))
    rn[0], rn[1] = 1, 2
    with pytest.raises(ExtenderError):
        PreExtender(polygon(4), rn)


def test_pre_extender_rejects_non_commuting():
    rn = list(range(8))
    rn[0], rn[2] = 2, 0
    with pytest.raises(ExtenderError) as err:
        PreExtender(polygon(4), rn)
    i, f = err.value.witness
    assert i == 0


def test_pre_extender_facets():
    pre = PreExtender(polygon(4), square_toroidal_rn())
    assert pre.facets == (0, 2, 4, 6)
    assert pre.pairing() == {0: 4, 2: 6, 4: 0, 6: 2}
    assert not pre.is_canonical
    assert PreExtender(polygon(4)).is_canonical
    assert validate_premaniplex(pre_extension(pre)).ok


def test_voltages_must_be_inverse_on_paired_facets():
    pre = PreExtender(polygon(4), square_toroidal_rn())
    G = cyclic(3)
    with pytest.raises(ExtenderError):
        CayleyExtender(pre, G, {0: 1, 2: 0, 4: 1, 6: 0})
    ext = CayleyExtender.from_orbits(pre, G, {0: 1, 2: 2})
    assert ext.xi == {0: 1, 2: 2, 4: 2, 6: 1}


def test_derived_flag_counts():
    assert derived_adjacency(ditope(polygon(4))).num_flags == 16
    assert derived_adjacency(two_hat(polygon(4))).num_flags == 128
    D = derived_maniplex(ditope(cube(3)))
    assert D.maniplex and D.num_flags == 96
    assert [len(faces(D.premaniplex, i)) for i in range(4)] == [8, 12, 6, 2]


def test_provenance_and_deck_transformations():
    D = derived_maniplex(toroid_44(3, 2))
    assert D.provenance(D.flag_of(5, 3)) == (5, 3)
    for g in range(D.group.order):
        assert is_automorphism(D.premaniplex, D.deck(g))


def test_maniplex_conditions():
    pre = PreExtender(polygon(4))
    trivial = CayleyExtender(pre, cyclic(2), {0: 0, 2: 1, 4: 1, 6: 1})
    assert maniplex_conditions(trivial)
    D = derived_maniplex(trivial)
    assert not D.maniplex and D.reason == "semiedge"
    assert maniplex_conditions(ditope(polygon(4))) == []


def check_witness(P, witness):
    k, m, f, g = witness
    n = P.rank
    assert g in reachable(P, f, range(k, n))
    assert g in reachable(P, f, range(m + 1))
    assert g not in reachable(P, f, range(k, m + 1))


def test_nonpolytopal_witness(data_dir):
    ext = load_extender(data_dir / "nonpolytopal_hexagon.ext").extender()
    D = derived_maniplex(ext)
    assert D.maniplex and D.num_flags == 24
    rep = is_polytopal(D.premaniplex)
    assert not rep
    check_witness(D.premaniplex, rep.witness)
    assert not face_lattice_oracle(D.premaniplex)


@pytest.mark.parametrize("make", [lambda: polygon(4), lambda: cube(3),
                                  lambda: derived_adjacency(toroid_44(3, 2)),
                                  lambda: derived_adjacency(two_hat(polygon(4)))])
def test_polytopal_examples(make):
    P = make()
    assert is_polytopal(P)
    assert face_lattice_oracle(P)


def test_quotient_extension_is_covering():
    big = toroid_44(4, 4)
    H = direct_product(cyclic(2), cyclic(2))
    res = quotient_extension(big, H, {"g@0": (1, 0), "g@1": (0, 1)})
    P, Q = derived_adjacency(big), derived_adjacency(res.extender)
    assert Q.num_flags == 32
    for c in range(P.rank):
        assert all(res.covering[P.adjacency[c][f]] == Q.adjacency[c][res.covering[f]]
                   for f in range(P.num_flags))


def test_quotient_extension_rejects_non_homomorphism():
    big = toroid_44(3, 3)
    with pytest.raises(ExtenderError):
        quotient_extension(big, direct_product(cyclic(2), cyclic(2)), {"g@0": (1, 0), "g@1": (0, 1)})


def test_coextension_of_square():
    sq = polygon(4)
    co = coextender_via_dual(sq, None, cyclic(2), {v: 1 for v in set(vertex_labels(sq))})
    P = coextension(co)
    assert is_maniplex(P)[0]
    assert [len(faces(P, i)) for i in range(3)] == [2, 4, 4]


def test_colorful_coextension_is_the_cube():
    # the triangle with one Z_2 coordinate per vertex
    tri = simplex(2)
    labels = vertex_labels(tri)
    G = elem_abelian_2(3)
    xi = {}
    for v in set(labels):
        xi[v] = 1 << len([u for u in set(labels) if u < v])
    co = coextender_via_dual(tri, None, G, xi)
    P = coextension(co)
    assert P.num_flags == 48
    assert is_isomorphic(P, cube(3)) is not None


def test_search_reproduces_frozen_witness(data_dir):
    import json
    import subprocess
    import sys
    from pathlib import Path

    script = Path(__file__).parents[1] / "scripts" / "search_nonpolytopal.py"
    out = json.loads(subprocess.run([sys.executable, str(script)], capture_output=True,
                                    text=True, check=True).stdout)
    ef = load_extender(data_dir / "nonpolytopal_hexagon.ext")
    assert tuple(out["rn"]) == ef.pairing
    assert out["group"] == ef.group_spec
    assert {int(k): ef.group.parse_element(v) for k, v in out["xi"].items()} == {
        F: g for F, g in ef.xi.items()}


def test_coextension_skeleton_is_cayley_graph():
    tri = simplex(2)
    labels = sorted(set(vertex_labels(tri)))
    G = elem_abelian_2(3)
    xi = {v: 1 << j for j, v in enumerate(labels)}
    co = coextender_via_dual(tri, None, G, xi)
    P = coextension(co)
    k = G.order
    el = G.elements
    edges = {frozenset((el[f % k], el[P.adjacency[0][f] % k])) for f in range(P.num_flags)}
    cayley = {frozenset((g, G.mul(s, g))) for g in G.elements for s in xi.values()}
    assert edges == cayley


def test_derived_facets_are_copies_of_the_base():
    from maniforge.premaniplex import facets as facet_blocks
    ext = toroid_44(3, 2)
    D = derived_maniplex(ext)
    k, m = D.group.order, ext.base.num_flags
    blocks = sorted(sorted(b) for b in facet_blocks(D.premaniplex))
    assert blocks == sorted(sorted(f * k + g for f in range(m)) for g in range(k))


def test_identity_and_collapsing_quotients():
    ext = toroid_44(4, 4)
    G = ext.group
    same = quotient_extension(ext, G, {nm: G.generator(nm) for nm in G.gen_names})
    assert derived_adjacency(same.extender) == derived_adjacency(ext)
    hat = two_hat(polygon(4))
    H = elem_abelian_2(3)
    images = {"e0": 0, "e1": 1, "e2": 2, "e3": 4}
    collapse = quotient_extension(hat, H, images)
    D = derived_maniplex(collapse.extender)
    assert not D.maniplex and D.diagnostics


@pytest.mark.parametrize("K", [polygon(4), polygon(5), cube(3), simplex(3)], ids=["square", "pentagon", "cube", "simplex"])
def test_canonical_extensions_stay_polytopal(K):
    for make in (ditope, two_hat):
        assert bool(is_polytopal(derived_adjacency(make(K)))) == bool(is_polytopal(K))
