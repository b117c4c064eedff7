"""Pre-extenders, Cayley extenders, derived graphs and polytopality checks.

Derived flags are pairs ``(flag of K, group element)`` indexed as
``flag * |G| + index(element)``.  Colors below ``n`` act on the first
coordinate; color ``n`` sends ``(flag, g)`` to ``(rn(flag), xi(F) * g)`` where
``F`` is the facet of ``flag``.  The voltage group then acts on the right of
the second coordinate by automorphisms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable, Mapping, Sequence

import numpy as np

from .caps import CapExceeded, cap
from .groups import GroupModel, subgroup_closure
from .premaniplex import (
    Premaniplex,
    _UnionFind,
    add_color,
    component_labels,
    dual,
    face_labels,
    facet_labels,
    is_maniplex,
)


class ExtenderError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# pre-extenders -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PreExtender:
    """A base maniplex ``K`` of rank ``n`` with a facet-pairing involution ``rn``.

    ``rn=None`` means the identity (a canonical pre-extender).
    """

    base: Premaniplex
    rn: tuple[int, ...] | None = None

    def __post_init__(self):
        m = self.base.num_flags
        rn = tuple(range(m)) if self.rn is None else tuple(int(x) for x in self.rn)
        object.__setattr__(self, "rn", rn)
        check_pre_extender(self.base, rn)
        labels = facet_labels(self.base)
        object.__setattr__(self, "_facet_of", tuple(labels))
        object.__setattr__(self, "_facets", tuple(sorted(set(labels))))

    @property
    def rank(self) -> int:
        return self.base.rank

    @property
    def is_canonical(self) -> bool:
        return all(g == f for f, g in enumerate(self.rn))

    @property
    def facets(self) -> tuple[int, ...]:
        """Facet labels (smallest flag of each facet), sorted."""
        return self._facets

    def facet_of(self, flag: int) -> int:
        return self._facet_of[flag]

    def paired_facet(self, facet: int) -> int:
        return self._facet_of[self.rn[facet]]

    def pairing(self) -> dict[int, int]:
        return {F: self.paired_facet(F) for F in self.facets}

    def __eq__(self, other):
        return isinstance(other, PreExtender) and self.base == other.base and self.rn == other.rn

    def __hash__(self):
        return hash((self.base, self.rn))


def check_pre_extender(K: Premaniplex, rn: Sequence[int]) -> None:
    m, n = K.num_flags, K.rank
    if len(rn) != m or any(not 0 <= g < m for g in rn):
        raise ExtenderError("rn must be a permutation of the base flags")
    for f in range(m):
        if rn[rn[f]] != f:
            raise ExtenderError(f"rn is not an involution at flag {f}", f)
    for i in range(n - 1):
        row = K.adjacency[i]
        for f in range(m):
            if rn[row[f]] != row[rn[f]]:
                raise ExtenderError(f"rn does not commute with color {i} at flag {f}", (i, f))


def pre_extension(pre: PreExtender) -> Premaniplex:
    """``K`` with color-``n`` edges given by ``rn`` (fixed points are semiedges)."""
    return add_color(pre.base, pre.rn)


# Cayley extenders --------------------------------------------------------

@dataclass(eq=False)
class CayleyExtender:
    pre: PreExtender
    group: GroupModel
    xi: dict[int, Hashable]
    name: str = ""

    def __post_init__(self):
        G = self.group
        for F in self.pre.facets:
            if F not in self.xi:
                raise ExtenderError(f"no voltage for facet {F}", F)
            if self.xi[F] not in G:
                raise ExtenderError(f"voltage of facet {F} is not a group element", F)
        for F in self.pre.facets:
            Fp = self.pre.paired_facet(F)
            if G.mul(self.xi[F], self.xi[Fp]) != G.identity:
                raise ExtenderError(f"voltage of facet {Fp} is not the inverse of that of facet {F}", (F, Fp))

    @classmethod
    def from_orbits(cls, pre: PreExtender, group: GroupModel, xi: Mapping[int, Hashable], name=""):
        """Fill in paired facets with inverse voltages."""
        full = dict(xi)
        for F, g in xi.items():
            Fp = pre.paired_facet(F)
            full.setdefault(Fp, group.inv(g))
        return cls(pre, group, full, name)

    @property
    def base(self) -> Premaniplex:
        return self.pre.base

    @property
    def rank(self) -> int:
        return self.pre.rank

    def voltage_of_flag(self, flag: int):
        return self.xi[self.pre.facet_of(flag)]


@dataclass(eq=False)
class DerivedManiplex:
    """A derived graph with provenance ``flag -> (base flag, group index)``."""

    premaniplex: Premaniplex
    extender: CayleyExtender
    maniplex: bool
    reason: str
    diagnostics: list[str] = field(default_factory=list)

    @property
    def num_flags(self) -> int:
        return self.premaniplex.num_flags

    @property
    def group(self) -> GroupModel:
        return self.extender.group

    def provenance(self, flag: int) -> tuple[int, int]:
        return divmod(flag, self.group.order)

    def flag_of(self, base_flag: int, g_index: int) -> int:
        return base_flag * self.group.order + g_index

    def deck(self, g_index: int) -> tuple[int, ...]:
        """The automorphism ``(flag, h) -> (flag, h * g)``."""
        G = self.group
        k = G.order
        right = [G.mul_idx(h, g_index) for h in range(k)]
        return tuple(f * k + right[h] for f in range(self.extender.base.num_flags) for h in range(k))


def maniplex_conditions(ext: CayleyExtender) -> list[str]:
    """Violations of the sufficient conditions for the derived graph to be a maniplex."""
    G, pre = ext.group, ext.pre
    out = []
    gens = {G.index(g) for g in ext.xi.values()}
    if len(subgroup_closure(G, sorted(gens))) != G.order:
        out.append("voltages do not generate the group")
    K, rn = pre.base, pre.rn
    for f in range(K.num_flags):
        if G.index(ext.voltage_of_flag(f)) != 0:
            continue
        if rn[f] == f:
            out.append(f"trivial voltage on facet {pre.facet_of(f)} fixed by rn at flag {f}")
            break
        hit = [i for i in range(K.rank) if K.adjacency[i][f] == rn[f]]
        if hit:
            out.append(f"trivial voltage with rn({f}) {hit[0]}-adjacent to flag {f}")
            break
    return out


def derived_adjacency(ext: CayleyExtender) -> Premaniplex:
    G, pre = ext.group, ext.pre
    K = pre.base
    k, m = G.order, K.num_flags
    if k * m > cap("group"):
        raise CapExceeded(f"derived graph with {k * m} flags exceeds cap")
    gidx = np.arange(k)
    left = {}
    for F, g in ext.xi.items():
        v = G.index(g)
        if v not in left:
            left[v] = np.array([G.mul_idx(v, h) for h in range(k)], dtype=np.int64)
    rows = []
    for row in K.adjacency:
        r = np.asarray(row, dtype=np.int64)
        rows.append((r[:, None] * k + gidx[None, :]).ravel())
    top = np.empty((m, k), dtype=np.int64)
    for f in range(m):
        v = G.index(ext.voltage_of_flag(f))
        top[f] = pre.rn[f] * k + left[v]
    rows.append(top.ravel())
    return Premaniplex(tuple(tuple(r.tolist()) for r in rows))


def derived_maniplex(ext: CayleyExtender) -> DerivedManiplex:
    P = derived_adjacency(ext)
    ok, reason = is_maniplex(P)
    return DerivedManiplex(P, ext, ok, reason, maniplex_conditions(ext))


# polytopality ------------------------------------------------------------

@dataclass
class PolytopalityReport:
    ok: bool
    witness: tuple[int, int, int, int] | None = None  # (k, m, flag, other flag)

    def __bool__(self):
        return self.ok


def is_polytopal(M: Premaniplex) -> PolytopalityReport:
    """Path intersection property on the flag graph.

    For all ranks ``k, m``: flags joined by a path with colors in ``[k, n-1]``
    and by one with colors in ``[0, m]`` must be joined by one with colors in
    ``[k, m]`` (which for ``k > m`` means they coincide).
    """
    n, flags = M.rank, M.num_flags
    lab = {}

    def labels(k, m):
        if (k, m) not in lab:
            lab[(k, m)] = component_labels(M, range(k, m + 1)) if k <= m else list(range(flags))
        return lab[(k, m)]

    for k in range(n):
        upper = labels(k, n - 1)
        for m in range(n):
            lower = labels(0, m)
            mid = labels(k, m)
            seen: dict[tuple[int, int], int] = {}
            for f in range(flags):
                key = (upper[f], lower[f])
                g = seen.setdefault(key, f)
                if mid[g] != mid[f]:
                    return PolytopalityReport(False, (k, m, g, f))
    return PolytopalityReport(True)


def face_lattice_oracle(M: Premaniplex) -> bool:
    """Decide polytopality by building the face poset and checking the axioms.

    Faces of rank ``i`` are components after deleting color ``i``; a least and
    a greatest face are added.  Checks that incidence is transitive, that
    flags biject with maximal chains, the diamond condition, and strong
    flag-connectivity of every section.
    """
    n, m = M.rank, M.num_flags
    if m > cap("lattice"):
        raise CapExceeded(f"face lattice oracle limited to {cap('lattice')} flags")
    ok, _ = is_maniplex(M)
    if not ok:
        return False
    # chain[f][r] = face of rank r-1 (r = 0..n+1); ranks -1 and n are single faces
    lab = [[-1] * m] + [face_labels(M, i) for i in range(n)] + [[-1] * m]
    R = n + 2
    chain = [tuple(lab[r][f] for r in range(R)) for f in range(m)]
    faces = [sorted(set(lab[r])) for r in range(R)]
    inc = {(r, s): {(c[r], c[s]) for c in chain} for r in range(R) for s in range(r + 1, R)}

    # transitivity of incidence
    for r in range(R):
        for s in range(r + 1, R):
            for t in range(s + 1, R):
                up = {}
                for a, b in inc[(s, t)]:
                    up.setdefault(a, set()).add(b)
                for a, b in inc[(r, s)]:
                    for c in up.get(b, ()):
                        if (a, c) not in inc[(r, t)]:
                            return False

    # maximal chains versus flags
    if len(set(chain)) != m:
        return False
    count = {F: 1 for F in faces[0]}
    for r in range(1, R):
        nxt = dict.fromkeys(faces[r], 0)
        for a, b in inc[(r - 1, r)]:
            nxt[b] += count[a]
        count = nxt
    if sum(count.values()) != m:
        return False

    # diamond condition
    for r in range(1, R - 1):
        between: dict[tuple[int, int], set] = {}
        for c in chain:
            between.setdefault((c[r - 1], c[r + 1]), set()).add(c[r])
        for a, c in inc[(r - 1, r + 1)]:
            if len(between.get((a, c), ())) != 2:
                return False

    # strong flag-connectivity of sections between ranks r < s
    for r in range(R):
        for s in range(r + 3, R):
            uf = _UnionFind(m)
            key_owner: dict[tuple, int] = {}
            for f, c in enumerate(chain):
                key = c[r:s + 1]
                uf.union(f, key_owner.setdefault(key, f))
                for color in range(r, s - 1):  # faces of ranks r..s-2 (colors) lie strictly between
                    uf.union(f, M.adjacency[color][f])
            roots: dict[tuple[int, int], int] = {}
            for f, c in enumerate(chain):
                root = uf.find(f)
                if roots.setdefault((c[r], c[s]), root) != root:
                    return False
    return True


# quotients, coverings, coextenders ---------------------------------------

def _homomorphism_table(G: GroupModel, H: GroupModel, images: Mapping[str, Any]) -> list[int]:
    """Indices in ``H`` of the images of all elements of ``G``.

    ``images`` assigns an ``H`` element to every generator name of ``G``; the
    map is checked to respect multiplication by each generator.
    """
    missing = [nm for nm in G.gen_names if nm not in images]
    if missing:
        raise ExtenderError(f"homomorphism undefined on generators {missing}")
    gen_img = [H.index(images[nm]) for nm in G.gen_names]
    gen_idx = [G.index(g) for g in G.generators]
    table = [-1] * G.order
    table[0] = 0
    for k in range(1, G.order):
        word = G._words[k]
        h = 0
        for letter in word:
            h = H.mul_idx(h, gen_img[letter])
        table[k] = h
    for a in range(G.order):
        for gi, hi in zip(gen_idx, gen_img):
            if table[G.mul_idx(a, gi)] != H.mul_idx(table[a], hi):
                raise ExtenderError("generator images do not define a homomorphism",
                                    (G.word(G.elements[a]), G.gen_names[gen_idx.index(gi)]))
    return table


@dataclass
class QuotientResult:
    extender: CayleyExtender
    table: list[int]
    covering: tuple[int, ...]


def quotient_extension(ext: CayleyExtender, H: GroupModel, images: Mapping[str, Any]) -> QuotientResult:
    """Push voltages through a surjection ``G -> H`` given on generator names.

    Also returns the induced flag map between derived graphs after checking
    that it commutes with every adjacency.
    """
    G = ext.group
    table = _homomorphism_table(G, H, images)
    if len(set(table)) != H.order:
        raise ExtenderError("homomorphism is not surjective")
    xi = {F: H.elements[table[G.index(g)]] for F, g in ext.xi.items()}
    q = CayleyExtender(ext.pre, H, xi, name=f"{ext.name}/{H.name}" if ext.name else "")
    P = derived_adjacency(ext)
    Q = derived_adjacency(q)
    k, h = G.order, H.order
    cover = tuple((f // k) * h + table[f % k] for f in range(P.num_flags))
    for c in range(P.rank):
        rp, rq = P.adjacency[c], Q.adjacency[c]
        for f in range(P.num_flags):
            if cover[rp[f]] != rq[cover[f]]:
                raise ExtenderError(f"induced flag map is not a covering at color {c}", f)
    return QuotientResult(q, table, cover)


def coextender_via_dual(K: Premaniplex, r_minus1: Sequence[int] | None, group: GroupModel,
                        xi: Mapping[int, Hashable], name: str = "") -> CayleyExtender:
    """The extender on ``dual(K)`` that encodes a coextender of ``K``.

    ``xi`` is keyed by vertex labels of ``K`` (smallest flag of each vertex),
    which are the facet labels of the dual.  Paired vertices may be omitted.
    """
    D = dual(K)
    try:
        pre = PreExtender(D, r_minus1)
    except ExtenderError as err:
        raise ExtenderError(str(err).replace("color", "dual color"), err.witness) from None
    return CayleyExtender.from_orbits(pre, group, xi, name)


def coextension(ext_on_dual: CayleyExtender) -> Premaniplex:
    """The coextension itself: the derived graph of the dual extender, dualized back."""
    return dual(derived_adjacency(ext_on_dual))


def vertex_labels(K: Premaniplex) -> list[int]:
    return face_labels(K, 0)

