import pytest

from maniforge.acceptance import bad_amalgamation
from maniforge.amalgamation import check_amalgamation, flat_amalgamate, is_flat
from maniforge.automorphisms import facet_subgraph, is_isomorphic
from maniforge.constructions import cube, ditope, polygon, toroid_44
from maniforge.extender import (
    ExtenderError,
    coextender_via_dual,
    coextension,
    derived_adjacency,
    face_lattice_oracle,
    is_polytopal,
    vertex_labels,
)
from maniforge.groups import cyclic
from maniforge.premaniplex import faces, facets, induced, vertex_figures


def square_pair():
    sq = polygon(4)
    co = coextender_via_dual(sq, None, cyclic(2), {v: 1 for v in set(vertex_labels(sq))})
    return co, ditope(sq)


def test_square_amalgamation():
    co, ext = square_pair()
    A = flat_amalgamate(co, ext)
    P = A.premaniplex
    assert A.maniplex and P.num_flags == 32 and P.rank == 4
    assert is_flat(P)
    assert is_polytopal(P) and face_lattice_oracle(P)
    assert [len(faces(P, i)) for i in range(4)] == [2, 4, 4, 2]
    assert A.provenance(31) == (7, 1, 1)


def test_sections_are_the_two_extensions():
    co, ext = square_pair()
    P = flat_amalgamate(co, ext).premaniplex
    cox = coextension(co)
    for block in facets(P):
        assert is_isomorphic(facet_subgraph(P, block), cox) is not None
    dit = derived_adjacency(ext)
    for block in vertex_figures(P):
        assert is_isomorphic(induced(P, block, range(1, 4)), dit) is not None


def test_flatness():
    assert not is_flat(cube(3))
    assert is_flat(derived_adjacency(ditope(polygon(4))))


def test_violating_pairings_rejected_with_witness():
    co, ext = bad_amalgamation()
    with pytest.raises(ExtenderError) as err:
        check_amalgamation(co, ext)
    f = err.value.witness
    rn, rm = ext.pre.rn, co.pre.rn
    assert rn[rm[rn[rm[f]]]] != f


def test_mismatched_bases_rejected():
    co, _ = square_pair()
    with pytest.raises(ExtenderError):
        flat_amalgamate(co, ditope(polygon(6)))


def test_toroidal_pair_amalgamates():
    # r_{-1} and r_n that commute with each other satisfy the precondition
    co, _ = square_pair()
    check_amalgamation(co, toroid_44(3, 2))
