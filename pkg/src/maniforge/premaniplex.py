"""Flag-graph representation of premaniplexes and maniplexes.

A rank-``n`` premaniplex on ``m`` flags is stored as ``n`` involutions of
``range(m)``; ``adjacency[i][f]`` is the flag ``i``-adjacent to ``f``.  A fixed
point of ``adjacency[i]`` is a semiedge of color ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class StructureError(ValueError):
    """Adjacency data that does not even describe a colored graph."""


@dataclass(frozen=True)
class Premaniplex:
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        adj = tuple(tuple(int(x) for x in row) for row in self.adjacency)
        object.__setattr__(self, "adjacency", adj)
        if not adj:
            raise StructureError("rank must be at least 1")
        m = len(adj[0])
        if m < 1:
            raise StructureError("need at least one flag")
        for i, row in enumerate(adj):
            if len(row) != m:
                raise StructureError(f"adjacency {i} has {len(row)} entries, expected {m}")
            for f, g in enumerate(row):
                if not 0 <= g < m:
                    raise StructureError(f"adjacency {i} maps flag {f} to out-of-range {g}")

    @property
    def rank(self) -> int:
        return len(self.adjacency)

    @property
    def num_flags(self) -> int:
        return len(self.adjacency[0])

    def __len__(self):
        return self.num_flags

    def adj(self, i: int, f: int) -> int:
        return self.adjacency[i][f]


@dataclass
class ValidationReport:
    ok: bool
    involution_failures: list[tuple[int, int]] = field(default_factory=list)
    commutation_failures: list[tuple[int, int, int]] = field(default_factory=list)
    semiedges: list[tuple[int, int]] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def validate_premaniplex(P: Premaniplex) -> ValidationReport:
    """Check the premaniplex axioms.

    Involution failures are ``(color, flag)``; commutation failures are
    ``(i, j, flag)`` with ``|i - j| > 1`` where the ``(i, j, i, j)`` walk from
    ``flag`` is open.  Semiedges are reported but are not violations.
    """
    report = ValidationReport(ok=True)
    n, m = P.rank, P.num_flags
    for i, row in enumerate(P.adjacency):
        for f in range(m):
            if row[row[f]] != f:
                report.involution_failures.append((i, f))
            elif row[f] == f:
                report.semiedges.append((i, f))
    for i in range(n):
        for j in range(i + 2, n):
            ri, rj = P.adjacency[i], P.adjacency[j]
            for f in range(m):
                if rj[ri[rj[ri[f]]]] != f:
                    report.commutation_failures.append((i, j, f))
    report.ok = not (report.involution_failures or report.commutation_failures)
    return report


class _UnionFind:
    def __init__(self, m):
        self.parent = list(range(m))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def component_labels(P: Premaniplex, colors: Iterable[int]) -> list[int]:
    """Label each flag by the smallest flag of its component under ``colors``."""
    m = P.num_flags
    uf = _UnionFind(m)
    for c in colors:
        row = P.adjacency[c]
        for f in range(m):
            uf.union(f, row[f])
    return [uf.find(f) for f in range(m)]


def labels_to_blocks(labels: Sequence[int]) -> list[list[int]]:
    blocks: dict[int, list[int]] = {}
    for f, lab in enumerate(labels):
        blocks.setdefault(lab, []).append(f)
    return [blocks[k] for k in sorted(blocks)]


def is_connected(P: Premaniplex) -> bool:
    return len(set(component_labels(P, range(P.rank)))) == 1


def is_maniplex(P: Premaniplex) -> tuple[bool, str]:
    """Return ``(True, "ok")`` or ``(False, reason)``.

    Reasons: ``"not a premaniplex"``, ``"semiedge"``, ``"parallel edges"``,
    ``"disconnected"``.
    """
    if not validate_premaniplex(P):
        return False, "not a premaniplex"
    n, m = P.rank, P.num_flags
    for row in P.adjacency:
        if any(row[f] == f for f in range(m)):
            return False, "semiedge"
    for i in range(n):
        for j in range(i + 1, n):
            ri, rj = P.adjacency[i], P.adjacency[j]
            if any(ri[rj[f]] == f for f in range(m)):
                return False, "parallel edges"
    if not is_connected(P):
        return False, "disconnected"
    return True, "ok"


def _check_color(P: Premaniplex, i: int):
    if not 0 <= i < P.rank:
        raise ValueError(f"color {i} out of range for rank {P.rank}")


def face_labels(P: Premaniplex, i: int) -> list[int]:
    _check_color(P, i)
    return component_labels(P, [c for c in range(P.rank) if c != i])


def faces(P: Premaniplex, i: int) -> list[list[int]]:
    """The ``i``-faces of ``P`` as blocks of flags, ordered by smallest flag."""
    return labels_to_blocks(face_labels(P, i))


def facets(P: Premaniplex) -> list[list[int]]:
    return faces(P, P.rank - 1)


def facet_labels(P: Premaniplex) -> list[int]:
    return face_labels(P, P.rank - 1)


def section_components(P: Premaniplex, k: int, l: int) -> list[list[int]]:
    if k > l:
        raise ValueError(f"empty color interval [{k}, {l}]")
    _check_color(P, k)
    _check_color(P, l)
    return labels_to_blocks(component_labels(P, range(k, l + 1)))


def vertex_figures(P: Premaniplex) -> list[list[int]]:
    return section_components(P, 1, P.rank - 1)


def dual(P: Premaniplex) -> Premaniplex:
    return Premaniplex(tuple(reversed(P.adjacency)))


def apply_word(P: Premaniplex, f: int, word: Sequence[int]) -> int:
    """Endpoint of the walk from ``f`` following the colors of ``word`` in order."""
    for c in word:
        f = P.adjacency[c][f]
    return f


def induced(P: Premaniplex, flags: Sequence[int], colors: Sequence[int]) -> Premaniplex:
    """The sub-premaniplex on ``flags`` using ``colors`` (renumbered in order).

    ``flags`` must be closed under every color in ``colors``.
    """
    index = {f: k for k, f in enumerate(flags)}
    rows = []
    for c in colors:
        row = P.adjacency[c]
        rows.append(tuple(index[row[f]] for f in flags))
    return Premaniplex(tuple(rows))


def add_color(P: Premaniplex, perm: Sequence[int]) -> Premaniplex:
    return Premaniplex(P.adjacency + (tuple(perm),))
