"""Friendly sets of base automorphisms and the friendly group of a pre-extender.

Automorphisms of ``K`` act on the right and are handled as indices into an
:class:`AutomorphismGroup`.  An automorphism ``tau`` has a friend ``tbar`` at
flag ``f`` when ``rn2[tau(f)] == tbar(rn[f])``; the friend only depends on the
facet of ``f``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .automorphisms import (
    AutomorphismGroup,
    SymmetryTypeGraph,
    automorphism_group,
    facet_subgraph,
    is_automorphism,
    isomorphisms,
    quotient_by_labels,
    stg_equal,
    symmetry_type_graph,
)
from .caps import CapExceeded, cap
from .extender import DerivedManiplex, PreExtender, pre_extension
from .groups import all_subgroups
from .premaniplex import Premaniplex, facet_labels, labels_to_blocks


def _canonical(labels: Sequence[int]) -> list[int]:
    """Relabel a partition by the smallest flag of each block."""
    first: dict[int, int] = {}
    for f, lab in enumerate(labels):
        first.setdefault(int(lab), f)
    return [first[int(lab)] for lab in labels]


def _inverse(perm: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    return inv


@dataclass
class FriendCheck:
    ok: bool
    friends: dict[tuple[int, int], int] = field(default_factory=dict)
    counterexample: tuple[int, int] | None = None  # (automorphism index, facet)

    def __bool__(self):
        return self.ok


def is_friendly_set(K: Premaniplex, rn: Sequence[int], rn2: Sequence[int], members: Iterable[int],
                    aut: AutomorphismGroup | None = None) -> FriendCheck:
    """Whether the automorphisms ``members`` (indices into ``aut``) form an ``(rn, rn2)``-friendly set.

    One flag per facet is checked, which suffices because both pairings
    commute with the colors inside a facet.
    """
    aut = automorphism_group(K) if aut is None else aut
    members = sorted(set(members))
    allowed = set(members)
    facets = sorted(set(facet_labels(K)))
    friends = {}
    for t in members:
        row = aut.perms[t]
        for F in facets:
            bar = aut.mapping(rn[F], rn2[int(row[F])])
            if bar is None or bar not in allowed:
                return FriendCheck(False, friends, (t, F))
            friends[(t, F)] = bar
    return FriendCheck(True, friends)


@dataclass
class FriendlyGroup:
    members: list[int]
    aut: AutomorphismGroup
    friends: dict[tuple[int, int], int]
    history: list[tuple[list[int], list[int], list[int]]] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.members)

    def perms(self) -> np.ndarray:
        return self.aut.perms[self.members]

    def as_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(tuple(int(x) for x in self.aut.perms[t]) for t in self.members)

    def orbit_labels(self) -> list[int]:
        return [int(x) for x in self.perms().min(axis=0)]


def _stabilizer_of_partition(aut: AutomorphismGroup, labels: Sequence[int]) -> list[int]:
    lab = np.asarray(labels)
    keep = (lab[aut.perms] == lab[None, :]).all(axis=1)
    return [int(t) for t in np.flatnonzero(keep)]


def friendly_group(K: Premaniplex, rn: Sequence[int] | None = None,
                   aut: AutomorphismGroup | None = None) -> FriendlyGroup:
    """Greatest ``rn``-friendly subgroup of ``Aut(K)`` by partition refinement.

    Starting from the one-block partition: keep the automorphisms that fix
    every block, take their orbits, split each orbit by the orbit of the
    ``rn``-image, and repeat until splitting changes nothing.
    """
    aut = automorphism_group(K) if aut is None else aut
    m = K.num_flags
    rn = list(range(m)) if rn is None else list(rn)
    part = [0] * m
    history = []
    for _ in range(m + 1):
        members = _stabilizer_of_partition(aut, part)
        orbits = [int(x) for x in aut.perms[members].min(axis=0)]
        split = _pair_labels(orbits, rn)
        history.append((part, members, orbits))
        if split == orbits:
            check = is_friendly_set(K, rn, rn, members, aut)
            return FriendlyGroup(members, aut, check.friends, history)
        part = split
    raise RuntimeError("partition refinement did not stabilise")


def _pair_labels(orbits: Sequence[int], rn: Sequence[int]) -> list[int]:
    seen: dict[tuple[int, int], int] = {}
    return [seen.setdefault((orbits[f], orbits[rn[f]]), f) for f in range(len(orbits))]


def heart_oracle(K: Premaniplex, rn: Sequence[int] | None = None,
                 aut: AutomorphismGroup | None = None) -> FriendlyGroup:
    """The friendly group found by testing every subgroup of ``Aut(K)``."""
    aut = automorphism_group(K) if aut is None else aut
    if aut.order > cap("heart"):
        raise CapExceeded(f"heart oracle limited to automorphism groups of order {cap('heart')}")
    m = K.num_flags
    rn = list(range(m)) if rn is None else list(rn)
    model = aut.as_group_model()
    to_aut = model.elements
    friendly = []
    for sub in all_subgroups(model, limit=cap("heart")):
        members = sorted(to_aut[k] for k in sub)
        if is_friendly_set(K, rn, rn, members, aut):
            friendly.append(frozenset(members))
    maximal = [S for S in friendly if not any(S < T for T in friendly)]
    if len(maximal) != 1:
        raise AssertionError(f"expected a unique greatest friendly subgroup, found {len(maximal)}")
    members = sorted(maximal[0])
    return FriendlyGroup(members, aut, is_friendly_set(K, rn, rn, members, aut).friends)


def predicted_stg_universal(K: Premaniplex, rn: Sequence[int] | None = None,
                            heart: FriendlyGroup | None = None) -> SymmetryTypeGraph:
    pre = PreExtender(K, rn)
    heart = friendly_group(K, pre.rn) if heart is None else heart
    return quotient_by_labels(pre_extension(pre), heart.orbit_labels())


# finite Cayley extensions ------------------------------------------------

def facet_action_set(D: DerivedManiplex, tau: Sequence[int]) -> set[tuple[int, ...]]:
    """For each voltage ``g``, the base map ``f -> first coordinate of (f, g) tau``."""
    k = D.group.order
    K = D.extender.base
    tau = np.asarray(tau)
    out = set()
    for g in range(k):
        images = tau[np.arange(K.num_flags) * k + g] // k
        perm = tuple(int(x) for x in images)
        if not is_automorphism(K, perm):
            raise ValueError(f"facet action of voltage index {g} is not an automorphism of the base")
        out.add(perm)
    return out


def facet_action_union(D: DerivedManiplex, aut_M: AutomorphismGroup) -> set[tuple[int, ...]]:
    """Union of the facet action sets over all automorphisms of the derived graph.

    Since ``(f, g) tau = (f, 1) (g tau)``, reading the base flags ``(f, 1)``
    under every automorphism covers all of them.
    """
    k = D.group.order
    base = np.arange(D.extender.base.num_flags) * k
    rows = np.unique(aut_M.perms[:, base] // k, axis=0)
    return {tuple(int(x) for x in r) for r in rows}


def closure_in(aut: AutomorphismGroup, perms: Iterable[Sequence[int]]) -> list[int]:
    """Indices of the subgroup of ``aut`` generated by ``perms``."""
    gens = []
    for p in perms:
        t = aut.index_of(p)
        if t is None:
            raise ValueError("generator is not an automorphism")
        gens.append(t)
    identity = aut.mapping(0, 0)
    members = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for a in frontier:
            for b in gens:
                c = aut._by_image[int(aut.perms[b][aut.perms[a][0]])]
                if c not in members:
                    members.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(members)


def derived_stg_on_base(D: DerivedManiplex, aut_M: AutomorphismGroup | None = None) -> SymmetryTypeGraph:
    """Symmetry type graph of ``D`` with each node named by a base flag.

    Every orbit contains flags ``(f, 1)``; a node is labeled by the smallest
    such ``f``, and the adjacency is read off the derived graph's own quotient.
    """
    P = D.premaniplex
    aut_M = automorphism_group(P) if aut_M is None else aut_M
    stg = symmetry_type_graph(P, aut_M)
    k = D.group.order
    m = D.extender.base.num_flags
    node_of_base = [stg.node_of(f * k) for f in range(m)]
    first: dict[int, int] = {}
    for f, node in enumerate(node_of_base):
        first.setdefault(node, f)
    nodes = sorted(first, key=first.get)
    new_index = {nd: j for j, nd in enumerate(nodes)}
    rows = tuple(tuple(new_index[row[nd]] for nd in nodes) for row in stg.graph.adjacency)
    orbit_map = tuple(first[nd] for nd in node_of_base)
    return SymmetryTypeGraph(Premaniplex(rows), orbit_map, tuple(first[nd] for nd in nodes))


def stg_from_facet_actions(D: DerivedManiplex, aut_M: AutomorphismGroup | None = None,
                           aut_K: AutomorphismGroup | None = None) -> SymmetryTypeGraph:
    P = D.premaniplex
    aut_M = automorphism_group(P) if aut_M is None else aut_M
    aut_K = automorphism_group(D.extender.base) if aut_K is None else aut_K
    members = closure_in(aut_K, facet_action_union(D, aut_M))
    labels = [int(x) for x in aut_K.perms[members].min(axis=0)]
    return quotient_by_labels(pre_extension(D.extender.pre), labels)


# comparing universal extensions ------------------------------------------

def conjugate_rn(aut: AutomorphismGroup, rn: Sequence[int], t: int) -> tuple[int, ...]:
    """``f -> tau(rn(tau^-1(f)))``."""
    tau = aut.perms[t]
    inv = _inverse(tau)
    rn = np.asarray(rn)
    return tuple(int(x) for x in tau[rn[inv]])


def conjugate_members(aut: AutomorphismGroup, members: Iterable[int], t: int) -> list[int]:
    """Indices of ``tau^-1 sigma tau`` for ``sigma`` in ``members``."""
    tau = aut.perms[t]
    inv = _inverse(tau)
    out = []
    for s in members:
        sigma = aut.perms[s]
        out.append(aut.index_of(tau[sigma[inv]]))
    return sorted(out)


@dataclass
class IsoResult:
    isomorphic: bool
    tau: int | None = None

    def __bool__(self):
        return self.isomorphic


def universal_extensions_isomorphic(K: Premaniplex, rn: Sequence[int] | None, rn2: Sequence[int] | None,
                                    aut: AutomorphismGroup | None = None) -> IsoResult:
    """Sweep ``tau`` in ``Aut(K)`` looking for equal labeled quotients.

    The quotient of ``K`` with pairing ``rn^tau`` by the conjugated friendly
    group must equal, node for node, that of ``K`` with ``rn2`` by its
    friendly group.
    """
    aut = automorphism_group(K) if aut is None else aut
    pre1, pre2 = PreExtender(K, rn), PreExtender(K, rn2)
    h1 = friendly_group(K, pre1.rn, aut)
    h2 = friendly_group(K, pre2.rn, aut)
    if h1.order != h2.order:
        return IsoResult(False)
    target = quotient_by_labels(pre_extension(pre2), h2.orbit_labels())
    labels1 = np.asarray(h1.orbit_labels())
    for t in range(aut.order):
        tau = aut.perms[t]
        inv = _inverse(tau)
        # orbit of f under the conjugate group is the tau-image of the orbit of tau^-1(f)
        labels = _canonical(labels1[inv].tolist())
        rn_t = conjugate_rn(aut, pre1.rn, t)
        try:
            q = quotient_by_labels(pre_extension(PreExtender(K, rn_t)), labels)
        except ValueError:
            continue
        if stg_equal(q, target):
            return IsoResult(True, t)
    return IsoResult(False)


# uniqueness of the universal extension -----------------------------------

@dataclass
class UniquenessResult:
    unique: bool
    witness: tuple[int, int, tuple[int, ...]] | None = None  # (facet, other facet, flag map)

    def __bool__(self):
        return self.unique


def facet_maps(K: Premaniplex, F: int, F2: int) -> list[dict[int, int]]:
    """All color-preserving isomorphisms from facet ``F`` to facet ``F2`` as flag maps."""
    blocks = {b[0]: b for b in labels_to_blocks(facet_labels(K))}
    A, B = blocks[F], blocks[F2]
    return [{A[i]: B[j] for i, j in enumerate(iso)}
            for iso in isomorphisms(facet_subgraph(K, A), facet_subgraph(K, B))]


def extends(aut: AutomorphismGroup, fmap: dict[int, int]) -> bool:
    f = next(iter(fmap))
    return aut.mapping(f, fmap[f]) is not None


def extension_counts(K: Premaniplex, F: int, F2: int, aut: AutomorphismGroup | None = None) -> tuple[int, int]:
    """``(isomorphisms F -> F2, those induced by automorphisms of K)``."""
    aut = automorphism_group(K) if aut is None else aut
    maps = facet_maps(K, F, F2)
    return len(maps), sum(extends(aut, mp) for mp in maps)


def has_unique_universal_extension(K: Premaniplex, aut: AutomorphismGroup | None = None) -> UniquenessResult:
    """Every facet isomorphism between distinct facets, and every involutory
    facet automorphism, must be the restriction of an automorphism of ``K``."""
    aut = automorphism_group(K) if aut is None else aut
    facets = sorted(set(facet_labels(K)))
    pairs = [(F, F2) for F in facets for F2 in facets if F != F2] + [(F, F) for F in facets]
    for F, F2 in pairs:
        for mp in facet_maps(K, F, F2):
            if F == F2 and any(mp[mp[f]] != f for f in mp):
                continue
            if not extends(aut, mp):
                return UniquenessResult(False, (F, F2, tuple(sorted(mp.items()))))
    return UniquenessResult(True)


def rn_from_facet_map(K: Premaniplex, fmap: dict[int, int]) -> tuple[int, ...]:
    """Pairing that applies ``fmap`` on one facet, its inverse on the image, identity elsewhere."""
    rn = list(range(K.num_flags))
    for a, b in fmap.items():
        rn[a] = b
        rn[b] = a
    return tuple(rn)


def non_extending_facet_map(K: Premaniplex, aut: AutomorphismGroup | None = None):
    """First isomorphism between two distinct facets that no automorphism induces."""
    aut = automorphism_group(K) if aut is None else aut
    facets = sorted(set(facet_labels(K)))
    for F in facets:
        for F2 in facets:
            if F2 <= F:
                continue
            for mp in facet_maps(K, F, F2):
                if not extends(aut, mp):
                    return F, F2, mp
    return None
