"""Seed maniplexes and the catalog of named Cayley extenders."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Mapping, Sequence

from .extender import CayleyExtender, ExtenderError, PreExtender
from .groups import (
    cyclic,
    dihedral,
    direct_product,
    elem_abelian_2,
    semidirect_zs_inversion,
)
from .premaniplex import Premaniplex, facet_labels


# seeds -------------------------------------------------------------------

def polygon(k: int) -> Premaniplex:
    """Flags ``2j, 2j+1`` lie on edge ``j``; flags ``2j+1, 2j+2`` share a vertex."""
    if k < 2:
        raise ValueError("polygon needs k >= 2")
    m = 2 * k
    r0 = [f ^ 1 for f in range(m)]
    r1 = [(f + 1) % m if f % 2 else (f - 1) % m for f in range(m)]
    return Premaniplex((tuple(r0), tuple(r1)))


def simplex(n: int) -> Premaniplex:
    """Flags are orderings of the ``n + 1`` vertices; ``r_i`` swaps positions ``i, i+1``.

    The vertex of a flag is the first entry of its ordering.
    """
    if n < 1:
        raise ValueError("simplex needs n >= 1")
    perms = list(itertools.permutations(range(n + 1)))
    index = {p: k for k, p in enumerate(perms)}
    rows = []
    for i in range(n):
        row = []
        for p in perms:
            q = list(p)
            q[i], q[i + 1] = q[i + 1], q[i]
            row.append(index[tuple(q)])
        rows.append(tuple(row))
    return Premaniplex(tuple(rows))


def simplex_flags(n: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(n + 1)))


def cube_flags(n: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Flags of the ``n``-cube as ``(signs, directions)``.

    The vertex is ``signs``; the ``i``-face is spanned by directions
    ``directions[0..i-1]`` through that vertex, so the facet is the one
    perpendicular to ``directions[n-1]`` on side ``signs[directions[n-1]]``.
    """
    return [(v, p) for v in itertools.product((1, -1), repeat=n)
            for p in itertools.permutations(range(n))]


def cube(n: int) -> Premaniplex:
    if n < 1:
        raise ValueError("cube needs n >= 1")
    flags = cube_flags(n)
    index = {fl: k for k, fl in enumerate(flags)}
    rows = []
    for i in range(n):
        row = []
        for v, p in flags:
            if i == 0:
                w = list(v)
                w[p[0]] = -w[p[0]]
                row.append(index[(tuple(w), p)])
            else:
                q = list(p)
                q[i - 1], q[i] = q[i], q[i - 1]
                row.append(index[(v, tuple(q))])
        rows.append(tuple(row))
    return Premaniplex(tuple(rows))


def map_from_faces(face_cycles: Sequence[Sequence[Hashable]]) -> Premaniplex:
    """Rank-3 flag graph of a map given by its faces as vertex cycles.

    A flag is ``(face, edge position, end)``; each edge must lie on exactly
    two faces.
    """
    flags = []
    for f, cyc in enumerate(face_cycles):
        for p in range(len(cyc)):
            flags.extend([(f, p, 0), (f, p, 1)])
    index = {fl: k for k, fl in enumerate(flags)}

    def vertex(fl):
        f, p, e = fl
        cyc = face_cycles[f]
        return cyc[(p + e) % len(cyc)]

    edge_faces: dict[frozenset, list[tuple[int, int]]] = {}
    for f, cyc in enumerate(face_cycles):
        for p in range(len(cyc)):
            edge_faces.setdefault(frozenset((cyc[p], cyc[(p + 1) % len(cyc)])), []).append((f, p))
    for e, occ in edge_faces.items():
        if len(occ) != 2:
            raise ValueError(f"edge {sorted(e)} lies on {len(occ)} faces")
    r0, r1, r2 = [], [], []
    for fl in flags:
        f, p, e = fl
        k = len(face_cycles[f])
        r0.append(index[(f, p, 1 - e)])
        r1.append(index[(f, (p + 1) % k, 0)] if e else index[(f, (p - 1) % k, 1)])
        cyc = face_cycles[f]
        edge = frozenset((cyc[p], cyc[(p + 1) % k]))
        (g, q), = [o for o in edge_faces[edge] if o != (f, p)]
        v = vertex(fl)
        end = 0 if face_cycles[g][q] == v else 1
        r2.append(index[(g, q, end)])
    return Premaniplex((tuple(r0), tuple(r1), tuple(r2)))


def square_pyramid_map() -> Premaniplex:
    """Square base ``0,1,2,3`` with apex ``4``; face 0 is the square."""
    return map_from_faces([(0, 1, 2, 3), (0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4)])


def cuboctahedron() -> Premaniplex:
    """Two flag orbits, with triangles and squares swapped across color 2."""
    faces = []
    for s in itertools.product((1, -1), repeat=3):
        faces.append(((s[0], s[1], 0), (s[0], 0, s[2]), (0, s[1], s[2])))
    for axis in range(3):
        for s in (1, -1):
            cyc = []
            for a, b in ((1, 0), (0, 1), (-1, 0), (0, -1)):
                v = [a, b]
                v.insert(axis, s)
                cyc.append(tuple(v))
            faces.append(tuple(cyc))
    return map_from_faces(faces)


# catalog extenders -------------------------------------------------------

def _check_no_self_glued(K: Premaniplex) -> None:
    labels = facet_labels(K)
    top = K.adjacency[K.rank - 1]
    for f in range(K.num_flags):
        if labels[f] == labels[top[f]]:
            raise ExtenderError(f"facet {labels[f]} is glued to itself at flag {f}", f)


def ditope(K: Premaniplex) -> CayleyExtender:
    G = cyclic(2)
    pre = PreExtender(K)
    return CayleyExtender(pre, G, {F: 1 for F in pre.facets}, name="ditope")


def color_coded(K: Premaniplex, coloring: Mapping[int, int], num_colors: int | None = None) -> CayleyExtender:
    """``coloring`` maps facet labels to ``0..k-1``; voltages are unit vectors of ``Z_2^k``."""
    pre = PreExtender(K)
    k = (max(coloring.values()) + 1) if num_colors is None else num_colors
    if set(coloring) != set(pre.facets):
        raise ExtenderError("coloring must cover every facet exactly")
    G = elem_abelian_2(k)
    return CayleyExtender(pre, G, {F: 1 << c for F, c in coloring.items()}, name=f"color-coded {k}")


def two_hat(K: Premaniplex) -> CayleyExtender:
    _check_no_self_glued(K)
    pre = PreExtender(K)
    ext = color_coded(K, {F: j for j, F in enumerate(pre.facets)})
    ext.name = "two-hat"
    return ext


def two_hat_s_minus1(K: Premaniplex, s: int) -> CayleyExtender:
    """Facet ``F_j`` is the ``j``-th facet by smallest flag; ``F_0`` contains flag 0."""
    if s < 2:
        raise ExtenderError("s must be at least 2")
    _check_no_self_glued(K)
    pre = PreExtender(K)
    G = semidirect_zs_inversion(s, len(pre.facets))
    xi = {F: G.generators[j] for j, F in enumerate(pre.facets)}
    return CayleyExtender(pre, G, xi, name=f"two-hat-s {s}")


def facet_graph_two_coloring(K: Premaniplex) -> dict[int, int]:
    """Proper 2-coloring of facets (adjacent across color ``n-1``); facet of flag 0 gets 0."""
    labels = facet_labels(K)
    top = K.adjacency[K.rank - 1]
    nbrs: dict[int, set[int]] = {}
    for f in range(K.num_flags):
        nbrs.setdefault(labels[f], set()).add(labels[top[f]])
    color = {labels[0]: 0}
    parent = {labels[0]: None}
    queue = deque([labels[0]])
    while queue:
        F = queue.popleft()
        for H in sorted(nbrs[F]):
            if H not in color:
                color[H] = 1 - color[F]
                parent[H] = F
                queue.append(H)
            elif color[H] == color[F]:
                raise ExtenderError("facet graph is not bipartite", _odd_cycle(parent, F, H))
    return color


def _odd_cycle(parent, a, b) -> list[int]:
    def path(x):
        out = []
        while x is not None:
            out.append(x)
            x = parent[x]
        return out
    pa, pb = path(a), path(b)
    common = next(x for x in pa if x in pb)
    return pa[:pa.index(common) + 1] + list(reversed(pb[:pb.index(common)]))


def flat_extension(K: Premaniplex, two_m: int) -> CayleyExtender:
    if two_m < 2 or two_m % 2:
        raise ExtenderError("flat extension needs an even parameter 2m >= 2")
    m = two_m // 2
    color = facet_graph_two_coloring(K)
    G = dihedral(m)
    x, y = G.generator("x"), G.generator("y")
    pre = PreExtender(K)
    return CayleyExtender(pre, G, {F: (x if c == 0 else y) for F, c in color.items()},
                          name=f"flat {two_m}")


def square_toroidal_rn() -> tuple[int, ...]:
    """Reflection of ``polygon(4)`` sending each edge to the opposite one."""
    return tuple((f + 5) % 8 if f % 2 == 0 else (f + 3) % 8 for f in range(8))


def toroid_44(a: int, b: int) -> CayleyExtender:
    """``a x b`` grid of squares glued toroidally, over ``polygon(4)``.

    Edges 0..3 of the square are bottom, right, top, left.  With ``a`` or
    ``b`` equal to 1 the result is still a maniplex but not a polytope.
    """
    if a < 1 or b < 1:
        raise ExtenderError("toroid parameters must be positive")
    K = polygon(4)
    pre = PreExtender(K, square_toroidal_rn())
    G = direct_product(cyclic(a), cyclic(b))
    xi = {0: (0, b - 1), 2: (1 % a, 0), 4: (0, 1 % b), 6: (a - 1, 0)}
    return CayleyExtender(pre, G, xi, name=f"toroid44 {a} {b}")


def cube_reflection_rn(n: int) -> tuple[int, ...]:
    """On each flag, reflect the cube in the direction perpendicular to its facet."""
    flags = cube_flags(n)
    index = {fl: k for k, fl in enumerate(flags)}
    out = []
    for v, p in flags:
        c = p[-1]
        w = list(v)
        w[c] = -w[c]
        out.append(index[(tuple(w), p)])
    return tuple(out)


def toroid_cubic(n: int, *sizes: int) -> CayleyExtender:
    """Cubic toroid over ``cube(n)`` with lattice ``a_1 Z x ... x a_n Z``."""
    if len(sizes) != n:
        raise ExtenderError(f"need {n} lattice sizes")
    if n < 2 or any(a < 2 for a in sizes):
        raise ExtenderError("toroid needs n >= 2 and sizes >= 2 (smaller values give parallel edges)")
    K = cube(n)
    pre = PreExtender(K, cube_reflection_rn(n))
    G = direct_product(*(cyclic(a) for a in sizes))
    flags = cube_flags(n)
    xi = {}
    for F in pre.facets:
        v, p = flags[F]
        c = p[-1]
        e = [0] * n
        e[c] = 1 % sizes[c] if v[c] == 1 else sizes[c] - 1
        xi[F] = tuple(e)
    return CayleyExtender(pre, G, xi, name="toroid " + " ".join(map(str, sizes)))


# named seeds and builders for the command line ---------------------------

SEEDS: dict[str, Callable[[], Premaniplex]] = {
    "square": lambda: polygon(4),
    "triangle": lambda: polygon(3),
    "hexagon": lambda: polygon(6),
    "cube3": lambda: cube(3),
    "simplex3": lambda: simplex(3),
    "pyramid": square_pyramid_map,
    "cuboctahedron": cuboctahedron,
}


def seed(name: str) -> Premaniplex:
    """Look up ``square``, ``cube3``, ``polygon6``, ``cube4``, ``simplex2`` etc."""
    if name in SEEDS:
        return SEEDS[name]()
    for prefix, fn in (("polygon", polygon), ("cube", cube), ("simplex", simplex)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return fn(int(name[len(prefix):]))
    raise KeyError(f"unknown seed {name!r}")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: str
    flags: str
    description: str


CATALOG = [
    CatalogEntry("ditope", "--seed S", "2|K|", "two copies of K glued facet to facet"),
    CatalogEntry("two-hat", "--seed S", "|K| 2^f", "one Z_2 coordinate per facet"),
    CatalogEntry("color-coded", "--seed S --colors c0,c1,..", "|K| 2^k", "Z_2^k voltages by facet color"),
    CatalogEntry("two-hat-s", "--seed S s", "|K| 2 s^(f-1)", "zero-sum Z_s vectors with inversion"),
    CatalogEntry("flat", "--seed S 2m", "2m|K|", "dihedral voltages on a facet 2-coloring"),
    CatalogEntry("toroid44", "a b", "8ab", "toroidal {4,4} map of an a x b grid"),
    CatalogEntry("toroid", "n a1 .. an", "2^n n! prod a_i", "cubic toroid over the n-cube"),
]
