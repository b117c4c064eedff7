import pytest

from maniforge.constructions import cube, polygon, simplex
from maniforge.premaniplex import (
    Premaniplex,
    StructureError,
    add_color,
    apply_word,
    component_labels,
    dual,
    face_labels,
    faces,
    facets,
    induced,
    is_connected,
    is_maniplex,
    section_components,
    validate_premaniplex,
    vertex_figures,
)


def test_square_is_a_maniplex():
    sq = polygon(4)
    assert sq.rank == 2 and sq.num_flags == 8
    assert validate_premaniplex(sq).ok
    assert is_maniplex(sq) == (True, "ok")


def test_structure_errors():
    with pytest.raises(StructureError):
        Premaniplex(())
    with pytest.raises(StructureError):
        Premaniplex(((1, 0), (0,)))
    with pytest.raises(StructureError):
        Premaniplex(((1, 5),))


def test_involution_failure_reported():
    P = Premaniplex(((1, 2, 0),))
    rep = validate_premaniplex(P)
    assert not rep.ok
    assert rep.involution_failures
    assert is_maniplex(P) == (False, "not a premaniplex")


def test_commutation_failure_reported():
    # colors 0 and 2 must commute; here they do not
    r0 = (1, 0, 3, 2)
    r1 = (3, 2, 1, 0)
    r2 = (2, 3, 0, 1)
    r2_bad = (0, 2, 1, 3)
    assert validate_premaniplex(Premaniplex((r0, r1, r2))).ok
    rep = validate_premaniplex(Premaniplex((r0, r1, r2_bad)))
    assert not rep.ok
    i, j, f = rep.commutation_failures[0]
    assert (i, j) == (0, 2)


def test_maniplex_reasons():
    semi = Premaniplex(((0, 2, 1), (1, 0, 2)))
    assert is_maniplex(semi) == (False, "semiedge")
    parallel = Premaniplex(((1, 0), (1, 0)))
    assert is_maniplex(parallel) == (False, "parallel edges")
    two = Premaniplex(((1, 0, 3, 2), (1, 0, 3, 2)))
    assert is_maniplex(two)[1] == "parallel edges"
    sq = polygon(4)
    disjoint = Premaniplex(tuple(row + tuple(x + 8 for x in row) for row in sq.adjacency))
    assert is_maniplex(disjoint) == (False, "disconnected")
    assert not is_connected(disjoint)


def test_face_counts():
    c = cube(3)
    assert [len(faces(c, i)) for i in range(3)] == [8, 12, 6]
    s = simplex(3)
    assert [len(faces(s, i)) for i in range(3)] == [4, 6, 4]
    assert len(facets(c)) == 6
    assert len(vertex_figures(c)) == 8


def test_faces_are_labeled_by_smallest_flag():
    c = cube(3)
    labels = face_labels(c, 2)
    for f, lab in enumerate(labels):
        assert lab <= f and labels[lab] == lab


def test_section_components_rejects_empty_interval():
    with pytest.raises(ValueError):
        section_components(polygon(4), 1, 0)


def test_dual_reverses_colors():
    c = cube(3)
    d = dual(c)
    assert [len(faces(d, i)) for i in range(3)] == [6, 12, 8]
    assert dual(d) == c


def test_apply_word_and_induced():
    sq = polygon(4)
    assert apply_word(sq, 0, [0, 1, 0, 1, 0, 1, 0, 1]) == 0
    assert apply_word(sq, 0, [0, 1]) != 0
    block = [f for f, lab in enumerate(component_labels(sq, [0])) if lab == 0]
    edge = induced(sq, block, [0])
    assert edge.num_flags == 2 and edge.adjacency == ((1, 0),)


def test_add_color():
    sq = polygon(4)
    P = add_color(sq, range(8))
    assert P.rank == 3
    assert validate_premaniplex(P).ok
    assert is_maniplex(P)[1] == "semiedge"
