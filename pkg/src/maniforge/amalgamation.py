"""Flat amalgamation of a Cayley coextension and a Cayley extension of one base."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .extender import CayleyExtender, ExtenderError, coextension, derived_adjacency
from .groups import GroupModel
from .premaniplex import Premaniplex, face_labels, facet_labels, is_maniplex


@dataclass(eq=False)
class Amalgamation:
    """Rank ``n+2`` derived graph with flags ``(base flag, coextension voltage, extension voltage)``."""

    premaniplex: Premaniplex
    coextender: CayleyExtender
    extender: CayleyExtender
    maniplex: bool
    reason: str
    diagnostics: list[str] = field(default_factory=list)

    @property
    def num_flags(self) -> int:
        return self.premaniplex.num_flags

    def provenance(self, flag: int) -> tuple[int, int, int]:
        k1, k2 = self.coextender.group.order, self.extender.group.order
        f, rest = divmod(flag, k1 * k2)
        return f, rest // k2, rest % k2


def check_amalgamation(coext: CayleyExtender, ext: CayleyExtender) -> None:
    """``coext`` lives on the dual of ``ext``'s base (same flags, reversed colors)."""
    K = ext.base
    if coext.base.adjacency != tuple(reversed(K.adjacency)):
        raise ExtenderError("coextender and extender must share the base maniplex")
    rn, rm = ext.pre.rn, coext.pre.rn
    for f in range(K.num_flags):
        if rn[rm[rn[rm[f]]]] != f:
            raise ExtenderError(f"(rn r-1)^2 moves flag {f}", f)


def flat_amalgamate(coext: CayleyExtender, ext: CayleyExtender, require_maniplex: bool = True) -> Amalgamation:
    """Color 0 follows ``r_{-1}`` with voltage ``(xi'(vertex), 1)``, colors ``1..n`` are the
    base colors, and color ``n+1`` follows ``r_n`` with voltage ``(1, xi(facet))``."""
    check_amalgamation(coext, ext)
    diagnostics = []
    if require_maniplex:
        for label, P in (("coextension", coextension(coext)), ("extension", derived_adjacency(ext))):
            ok, why = is_maniplex(P)
            if not ok:
                raise ExtenderError(f"{label} is not a maniplex ({why})")
    K = ext.base
    G1, G2 = coext.group, ext.group
    k1, k2, m = G1.order, G2.order, K.num_flags
    vlab, flab = face_labels(K, 0), facet_labels(K)

    def left_table(G: GroupModel, g) -> np.ndarray:
        v = G.index(g)
        return np.array([G.mul_idx(v, h) for h in range(G.order)], dtype=np.int64)

    i1 = np.arange(k1)[:, None]
    i2 = np.arange(k2)[None, :]
    rows = []
    r0 = np.empty((m, k1, k2), dtype=np.int64)
    for f in range(m):
        t = left_table(G1, coext.xi[vlab[f]])
        r0[f] = coext.pre.rn[f] * k1 * k2 + t[i1] * k2 + i2
    rows.append(r0.ravel())
    for row in K.adjacency:
        r = np.asarray(row, dtype=np.int64)[:, None, None]
        rows.append((r * k1 * k2 + i1 * k2 + i2).ravel())
    top = np.empty((m, k1, k2), dtype=np.int64)
    for f in range(m):
        t = left_table(G2, ext.xi[flab[f]])
        top[f] = ext.pre.rn[f] * k1 * k2 + i1 * k2 + t[i2]
    rows.append(top.ravel())
    P = Premaniplex(tuple(tuple(r.tolist()) for r in rows))
    ok, reason = is_maniplex(P)
    return Amalgamation(P, coext, ext, ok, reason, diagnostics)


def is_flat(M: Premaniplex) -> bool:
    """Every facet shares a flag with every vertex."""
    v, F = face_labels(M, 0), facet_labels(M)
    pairs = set(zip(F, v))
    return len(pairs) == len(set(F)) * len(set(v))
