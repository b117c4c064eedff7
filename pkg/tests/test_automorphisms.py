import itertools

import numpy as np
import pytest

from maniforge.automorphisms import (
    QuotientError,
    automorphism_group,
    detect_canonical,
    facet_isomorphism_classes,
    flag_orbits,
    is_automorphism,
    is_isomorphic,
    is_regular,
    is_two_orbit_bar_type,
    isomorphisms,
    num_orbits,
    quotient_by,
    quotient_by_labels,
    stg_equal,
    symmetry_type_graph,
)
from maniforge.constructions import (
    cube,
    cuboctahedron,
    ditope,
    polygon,
    simplex,
    square_pyramid_map,
    toroid_44,
    two_hat,
)
from maniforge.extender import derived_adjacency
from maniforge.premaniplex import Premaniplex, validate_premaniplex


def brute_force_automorphisms(P):
    m = P.num_flags
    out = []
    for perm in itertools.permutations(range(m)):
        if all(perm[row[f]] == row[perm[f]] for row in P.adjacency for f in range(m)):
            out.append(perm)
    return sorted(out)


@pytest.mark.parametrize("P", [polygon(3), polygon(2), Premaniplex(((1, 0, 3, 2), (3, 2, 1, 0)))])
def test_automorphisms_match_brute_force(P):
    aut = automorphism_group(P)
    assert sorted(aut.as_tuples()) == brute_force_automorphisms(P)


@pytest.mark.parametrize("P,order", [(polygon(4), 8), (cube(3), 48), (simplex(3), 24),
                                     (square_pyramid_map(), 8), (cuboctahedron(), 48)])
def test_seed_orders(P, order):
    aut = automorphism_group(P)
    assert aut.order == order
    assert all(is_automorphism(P, p) for p in aut)
    assert aut.order * num_orbits(P, aut) == P.num_flags


def test_regularity():
    assert is_regular(cube(3))
    assert not is_regular(square_pyramid_map())
    assert len(flag_orbits(square_pyramid_map())) == 4


def test_compose_and_group_model():
    aut = automorphism_group(polygon(4))
    G = aut.as_group_model()
    assert G.order == 8
    for a in range(aut.order):
        for b in range(aut.order):
            c = aut.compose(a, b)
            expect = aut.perms[b][aut.perms[a]]
            assert np.array_equal(aut.perms[c], expect)
    assert aut.index_of(aut.perms[3]) == 3
    assert aut.mapping(5, int(aut.perms[2][5])) == 2


def test_cuboctahedron_two_orbit_type():
    P = cuboctahedron()
    aut = automorphism_group(P)
    assert num_orbits(P, aut) == 2
    assert is_two_orbit_bar_type(P, 2, aut)
    assert not is_two_orbit_bar_type(P, 0, aut)


def test_symmetry_type_graph_is_premaniplex():
    P = derived_adjacency(toroid_44(3, 2))
    stg = symmetry_type_graph(P)
    assert stg.num_nodes == 2
    assert validate_premaniplex(stg.graph).ok
    for f in range(P.num_flags):
        for c, row in enumerate(P.adjacency):
            assert stg.graph.adjacency[c][stg.node_of(f)] == stg.node_of(row[f])


def test_quotient_rejects_bad_partition():
    sq = polygon(4)
    labels = [0, 0, 2, 2, 2, 2, 2, 2]
    with pytest.raises(QuotientError) as err:
        quotient_by_labels(sq, labels)
    c, f, g = err.value.witness
    assert labels[f] == labels[g] and labels[sq.adjacency[c][f]] != labels[sq.adjacency[c][g]]


def test_quotient_by_full_group_is_stg():
    P = square_pyramid_map()
    aut = automorphism_group(P)
    assert stg_equal(quotient_by(P, aut.as_tuples()), symmetry_type_graph(P, aut))


def test_isomorphism():
    a = derived_adjacency(two_hat(polygon(4)))
    b = derived_adjacency(toroid_44(4, 4))
    iso = is_isomorphic(a, b)
    assert iso is not None
    for row_a, row_b in zip(a.adjacency, b.adjacency):
        assert all(iso[row_a[f]] == row_b[iso[f]] for f in range(a.num_flags))
    assert is_isomorphic(derived_adjacency(toroid_44(4, 2)), derived_adjacency(toroid_44(2, 4))) is not None
    assert is_isomorphic(derived_adjacency(toroid_44(6, 2)), derived_adjacency(toroid_44(4, 3))) is None
    assert len(isomorphisms(polygon(5), polygon(5))) == 10


def test_facet_classes():
    classes = facet_isomorphism_classes(square_pyramid_map())
    assert sorted(len(c) for c in classes) == [1, 4]


def test_detect_canonical():
    assert detect_canonical(derived_adjacency(ditope(polygon(4)))).canonical
    assert detect_canonical(derived_adjacency(two_hat(polygon(4)))).canonical
    rep = detect_canonical(derived_adjacency(toroid_44(3, 2)))
    assert not rep.canonical and rep.reason


def test_disconnected_rejected():
    sq = polygon(4)
    two = Premaniplex(tuple(row + tuple(x + 8 for x in row) for row in sq.adjacency))
    with pytest.raises(ValueError):
        automorphism_group(two)


def canonical_oracle(M):
    """Some subgroup of Aut acts regularly on facets and moves every flag to its top neighbour."""
    from maniforge.groups import all_subgroups
    from maniforge.premaniplex import facet_labels

    aut = automorphism_group(M)
    G = aut.as_group_model()
    labels = facet_labels(M)
    reps = sorted(set(labels))
    top = M.adjacency[M.rank - 1]
    for sub in all_subgroups(G):
        if len(sub) != len(reps):
            continue
        members = [G.elements[k] for k in sub]
        images = {labels[int(aut.perms[t][reps[0]])] for t in members}
        if len(images) != len(reps):
            continue
        if all(any(int(aut.perms[t][f]) == top[f] for t in members) for f in range(M.num_flags)):
            return True
    return False


@pytest.mark.parametrize("make", [lambda: ditope(polygon(4)), lambda: toroid_44(3, 2), lambda: ditope(polygon(3))],
                         ids=["ditope", "toroid", "ditope-triangle"])
def test_detect_canonical_matches_subgroup_search(make):
    M = derived_adjacency(make())
    assert detect_canonical(M).canonical == canonical_oracle(M)


def test_regular_stg_is_one_node():
    stg = symmetry_type_graph(cube(3))
    assert stg.num_nodes == 1
    assert all(row == (0,) for row in stg.graph.adjacency)


def test_isomorphism_symmetric():
    a = derived_adjacency(toroid_44(4, 2))
    b = derived_adjacency(toroid_44(2, 4))
    iso = is_isomorphic(a, b)
    back = is_isomorphic(b, a)
    assert iso is not None and back is not None
    inv = [0] * len(iso)
    for f, g in enumerate(iso):
        inv[g] = f
    for row_a, row_b in zip(a.adjacency, b.adjacency):
        assert all(inv[row_b[g]] == row_a[inv[g]] for g in range(b.num_flags))
