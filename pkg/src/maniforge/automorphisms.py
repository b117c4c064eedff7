"""Color-preserving automorphisms, flag orbits, quotients and isomorphism tests.

Automorphisms act on the right.  They are stored as rows of an integer array:
``perms[t, f]`` is the image of flag ``f`` under the ``t``-th automorphism.
Since a connected premaniplex's automorphism group acts freely, each map is
determined by the image of flag 0; candidates are extended along a spanning
tree for all images at once and then checked against every color.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .groups import GroupModel
from .premaniplex import (
    Premaniplex,
    facet_labels,
    induced,
    is_connected,
    labels_to_blocks,
)

_CHUNK_CELLS = 4_000_000


def _spanning_tree(P: Premaniplex, base: int = 0) -> list[tuple[int, int, int]]:
    """BFS tree edges ``(flag, parent, color)`` reaching every flag of ``base``'s component."""
    seen = {base}
    order = []
    queue = deque([base])
    while queue:
        f = queue.popleft()
        for c, row in enumerate(P.adjacency):
            g = row[f]
            if g not in seen:
                seen.add(g)
                order.append((g, f, c))
                queue.append(g)
    return order


def _extend(P: Premaniplex, Q: Premaniplex, candidates: Sequence[int], base: int = 0) -> np.ndarray:
    """Rows of the color-preserving maps ``P -> Q`` sending ``base`` to each candidate.

    Only consistent, bijective maps are kept.  ``P`` must be connected.
    """
    m = P.num_flags
    tree = _spanning_tree(P, base)
    Padj = [np.asarray(row, dtype=np.int64) for row in P.adjacency]
    Qadj = [np.asarray(row, dtype=np.int64) for row in Q.adjacency]
    candidates = np.asarray(list(candidates), dtype=np.int64)
    chunk = max(1, _CHUNK_CELLS // max(m, 1))
    kept = []
    for start in range(0, len(candidates), chunk):
        cand = candidates[start:start + chunk]
        imgs = np.empty((len(cand), m), dtype=np.int64)
        imgs[:, base] = cand
        for f, parent, c in tree:
            imgs[:, f] = Qadj[c][imgs[:, parent]]
        ok = np.ones(len(cand), dtype=bool)
        for i in range(P.rank):
            ok &= (Qadj[i][imgs] == imgs[:, Padj[i]]).all(axis=1)
        imgs = imgs[ok]
        if len(imgs):
            srt = np.sort(imgs, axis=1)
            bij = (srt == np.arange(Q.num_flags)[:m]).all(axis=1) if Q.num_flags == m else np.zeros(len(imgs), bool)
            imgs = imgs[bij]
        kept.append(imgs)
    if not kept:
        return np.empty((0, m), dtype=np.int64)
    return np.concatenate(kept, axis=0)


@dataclass
class AutomorphismGroup:
    """Automorphisms of a connected premaniplex, sorted by the image of flag 0."""

    premaniplex: Premaniplex
    perms: np.ndarray
    _by_image: dict[int, int] = field(default_factory=dict, repr=False)
    _by_source: dict[int, dict[int, int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._by_image = {int(img): t for t, img in enumerate(self.perms[:, 0])}
        self._by_source[0] = self._by_image

    @property
    def order(self) -> int:
        return len(self.perms)

    def __len__(self):
        return len(self.perms)

    def __iter__(self):
        for row in self.perms:
            yield tuple(int(x) for x in row)

    def as_tuples(self) -> list[tuple[int, ...]]:
        return list(self)

    def mapping(self, source: int, target: int) -> int | None:
        """Index of the automorphism sending flag ``source`` to ``target``, if any."""
        table = self._by_source.get(source)
        if table is None:
            table = {int(img): t for t, img in enumerate(self.perms[:, source])}
            self._by_source[source] = table
        return table.get(target)

    def index_of(self, perm: Sequence[int]) -> int | None:
        t = self._by_image.get(int(perm[0]))
        if t is None or not np.array_equal(self.perms[t], np.asarray(perm)):
            return None
        return t

    def orbit_labels(self) -> list[int]:
        return [int(x) for x in self.perms.min(axis=0)]

    def compose(self, a: int, b: int) -> int:
        """Index of ``a`` followed by ``b``."""
        return self._by_image[int(self.perms[b][self.perms[a][0]])]

    def as_group_model(self) -> GroupModel:
        """The group on automorphism indices (``a * b`` is ``a`` then ``b``)."""
        identity = self.mapping(0, 0)
        return GroupModel([identity] + [t for t in range(self.order) if t != identity],
                          self.compose, [], [], [()] * self.order, name="aut")


def automorphism_group(P: Premaniplex) -> AutomorphismGroup:
    if not is_connected(P):
        raise ValueError("automorphism_group needs a connected premaniplex")
    perms = _extend(P, P, range(P.num_flags))
    return AutomorphismGroup(P, perms)


def is_automorphism(P: Premaniplex, perm: Sequence[int]) -> bool:
    m = P.num_flags
    if sorted(perm) != list(range(m)):
        return False
    return all(row[perm[f]] == perm[row[f]] for row in P.adjacency for f in range(m))


def orbit_labels(P: Premaniplex, perms: Iterable[Sequence[int]]) -> list[int]:
    """Label each flag by the smallest flag in its orbit under the group generated by ``perms``."""
    from .premaniplex import _UnionFind

    uf = _UnionFind(P.num_flags)
    for p in perms:
        for f, g in enumerate(p):
            uf.union(f, int(g))
    return [uf.find(f) for f in range(P.num_flags)]


def flag_orbits(P: Premaniplex, aut: AutomorphismGroup | None = None) -> list[list[int]]:
    aut = automorphism_group(P) if aut is None else aut
    return labels_to_blocks(aut.orbit_labels())


def num_orbits(P: Premaniplex, aut: AutomorphismGroup | None = None) -> int:
    return len(flag_orbits(P, aut))


def is_regular(P: Premaniplex, aut: AutomorphismGroup | None = None) -> bool:
    aut = automorphism_group(P) if aut is None else aut
    return aut.order == P.num_flags


# quotients ---------------------------------------------------------------

class QuotientError(ValueError):
    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class SymmetryTypeGraph:
    """Quotient premaniplex; node ``k`` is the orbit whose smallest flag is ``labels[k]``."""

    graph: Premaniplex
    orbit_map: tuple[int, ...]
    labels: tuple[int, ...]

    @property
    def num_nodes(self) -> int:
        return self.graph.num_flags

    @cached_property
    def _node_index(self) -> dict[int, int]:
        return {lab: k for k, lab in enumerate(self.labels)}

    def node_of(self, flag: int) -> int:
        return self._node_index[self.orbit_map[flag]]


def quotient_by_labels(P: Premaniplex, labels: Sequence[int]) -> SymmetryTypeGraph:
    """Quotient by the partition given as smallest-flag labels.

    Raises :class:`QuotientError` with a witness ``(color, flag, other_flag)``
    when two flags of one block have ``color``-neighbours in different blocks.
    """
    labels = tuple(int(x) for x in labels)
    nodes = sorted(set(labels))
    node_index = {lab: k for k, lab in enumerate(nodes)}
    rows = []
    for c, row in enumerate(P.adjacency):
        target: dict[int, tuple[int, int]] = {}
        for f in range(P.num_flags):
            lab = labels[f]
            img = labels[row[f]]
            if lab in target and target[lab][0] != img:
                raise QuotientError(
                    f"quotient ill-defined at color {c}", (c, target[lab][1], f))
            target.setdefault(lab, (img, f))
        rows.append(tuple(node_index[target[lab][0]] for lab in nodes))
    return SymmetryTypeGraph(Premaniplex(tuple(rows)), labels, tuple(nodes))


def quotient_by(P: Premaniplex, perms: Iterable[Sequence[int]]) -> SymmetryTypeGraph:
    """Quotient of ``P`` by the orbits of the flag bijections ``perms``.

    The bijections need not be automorphisms of ``P``; well-definedness of the
    quotient adjacency is checked directly.
    """
    return quotient_by_labels(P, orbit_labels(P, perms))


def symmetry_type_graph(P: Premaniplex, aut: AutomorphismGroup | None = None) -> SymmetryTypeGraph:
    aut = automorphism_group(P) if aut is None else aut
    return quotient_by_labels(P, aut.orbit_labels())


def stg_equal(a: SymmetryTypeGraph, b: SymmetryTypeGraph) -> bool:
    """Equality on the same flag set: same blocks and same labeled adjacency."""
    return a.orbit_map == b.orbit_map and a.graph == b.graph


def is_two_orbit_bar_type(P: Premaniplex, color: int, aut: AutomorphismGroup | None = None) -> bool:
    """Two flag orbits, with ``i``-adjacent flags in one orbit exactly when ``i != color``."""
    aut = automorphism_group(P) if aut is None else aut
    labels = aut.orbit_labels()
    if len(set(labels)) != 2:
        return False
    for i, row in enumerate(P.adjacency):
        same = [labels[f] == labels[row[f]] for f in range(P.num_flags)]
        if i == color and any(same):
            return False
        if i != color and not all(same):
            return False
    return True


# isomorphism ---------------------------------------------------------------

def is_isomorphic(P: Premaniplex, Q: Premaniplex) -> tuple[int, ...] | None:
    """A color-preserving bijection ``P -> Q`` or ``None``; both must be connected."""
    if P.rank != Q.rank or P.num_flags != Q.num_flags:
        return None
    if not (is_connected(P) and is_connected(Q)):
        raise ValueError("is_isomorphic needs connected premaniplexes")
    imgs = _extend(P, Q, range(Q.num_flags))
    if not len(imgs):
        return None
    return tuple(int(x) for x in imgs[0])


def isomorphisms(P: Premaniplex, Q: Premaniplex) -> list[tuple[int, ...]]:
    if P.rank != Q.rank or P.num_flags != Q.num_flags:
        return []
    return [tuple(int(x) for x in row) for row in _extend(P, Q, range(Q.num_flags))]


def facet_subgraph(P: Premaniplex, flags: Sequence[int]) -> Premaniplex:
    return induced(P, flags, range(P.rank - 1))


def facet_isomorphism_classes(P: Premaniplex) -> list[list[tuple[int, tuple[int, ...]]]]:
    """Facets grouped by isomorphism of their colored subgraphs (colors ``0..n-2``).

    Each class is a list of ``(facet_label, witness)`` where ``witness`` maps
    the class representative's flags (in sorted order) to this facet's flags.
    """
    blocks = labels_to_blocks(facet_labels(P))
    classes: list[list[tuple[int, tuple[int, ...]]]] = []
    reps: list[tuple[list[int], Premaniplex]] = []
    for block in blocks:
        sub = facet_subgraph(P, block)
        for k, (rep_block, rep_sub) in enumerate(reps):
            iso = is_isomorphic(rep_sub, sub)
            if iso is not None:
                classes[k].append((block[0], tuple(block[j] for j in iso)))
                break
        else:
            reps.append((block, sub))
            classes.append([(block[0], tuple(block))])
    return classes


# canonical extensions ---------------------------------------------------

@dataclass
class CanonicalReport:
    canonical: bool
    reason: str
    group: list[int] = field(default_factory=list)  # automorphism indices


def _closure_indices(aut: AutomorphismGroup, gens: Sequence[int]) -> list[int]:
    members = {aut.mapping(0, 0)}
    frontier = list(members)
    gens = sorted(set(gens))
    perms = aut.perms
    while frontier:
        nxt = []
        for a in frontier:
            for b in gens:
                img0 = int(perms[b][perms[a][0]])
                c = aut._by_image[img0]
                if c not in members:
                    members.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(members)


def acts_freely_on_facets(P: Premaniplex, aut: AutomorphismGroup, members: Sequence[int]) -> bool:
    labels = facet_labels(P)
    reps = sorted(set(labels))
    identity = aut.mapping(0, 0)
    for t in members:
        if t == identity:
            continue
        row = aut.perms[t]
        if any(labels[int(row[r])] == r for r in reps):
            return False
    return True


def detect_canonical(M: Premaniplex, aut: AutomorphismGroup | None = None) -> CanonicalReport:
    """Whether ``M`` is a canonical Cayley extension of its facets.

    For each flag the automorphism sending it to its top-color neighbour must
    exist; the group they generate must then act freely on facets.
    """
    aut = automorphism_group(M) if aut is None else aut
    top = M.adjacency[M.rank - 1]
    gens = set()
    for f in range(M.num_flags):
        t = aut.mapping(f, top[f])
        if t is None:
            return CanonicalReport(False, f"no automorphism sends flag {f} to its {M.rank - 1}-neighbour")
        gens.add(t)
    members = _closure_indices(aut, sorted(gens))
    if not acts_freely_on_facets(M, aut, members):
        return CanonicalReport(False, "generated group does not act freely on facets", members)
    return CanonicalReport(True, "ok", members)
