"""Finite balls of universal Cayley extensions and the order of ``r_{n-1} r_n``.

The universal voltage group has one generator ``a_F`` per facet with the
relations ``a_F a_{rn F} = 1``; its elements are reduced words over facet
labels.  A ball of radius ``L`` keeps the flags ``(flag, w)`` with
``len(w) <= L``; color-``n`` edges leaving the ball are marked missing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .caps import CapExceeded, cap
from .extender import CayleyExtender, PreExtender
from .groups import ReducedWord, element_order, make_pairing, word_multiply, word_order
from .premaniplex import Premaniplex

MISSING = -1


@dataclass
class UniversalBall:
    pre: PreExtender
    radius: int
    words: list[ReducedWord]
    adjacency: list[list[int]]  # MISSING marks an edge that leaves the ball

    @property
    def rank(self) -> int:
        return self.pre.rank + 1

    @property
    def num_flags(self) -> int:
        return len(self.adjacency[0])

    def flag(self, base_flag: int, word_index: int) -> int:
        return base_flag * len(self.words) + word_index

    def provenance(self, flag: int) -> tuple[int, ReducedWord]:
        f, w = divmod(flag, len(self.words))
        return f, self.words[w]

    def is_interior(self, flag: int) -> bool:
        return len(self.words[flag % len(self.words)]) < self.radius

    def boundary(self) -> list[int]:
        return [f for f in range(self.num_flags) if MISSING in (row[f] for row in self.adjacency)]

    def census(self) -> list[int]:
        """Number of reduced words of each length ``0..radius``."""
        out = [0] * (self.radius + 1)
        for w in self.words:
            out[len(w)] += 1
        return out


def pairing_of(pre: PreExtender) -> tuple[tuple[int, int], ...]:
    return make_pairing(pre.pairing())


def reduced_words(pre: PreExtender, radius: int) -> list[ReducedWord]:
    """All reduced words of length at most ``radius``, by length then lexicographically."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    pairing = pairing_of(pre)
    inv = dict(pairing)
    letters = sorted(inv)
    limit = cap("words")
    layer = [()]
    words = [ReducedWord((), pairing)]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for x in letters:
                if w and inv[w[-1]] == x:
                    continue
                nxt.append(w + (x,))
        layer = sorted(nxt)
        words.extend(ReducedWord(w, pairing) for w in layer)
        if len(words) > limit:
            raise CapExceeded(f"more than {limit} reduced words")
    return words


def universal_ball(pre: PreExtender, radius: int) -> UniversalBall:
    words = reduced_words(pre, radius)
    pairing = words[0].pairing
    index = {w.letters: k for k, w in enumerate(words)}
    K = pre.base
    W = len(words)
    adjacency = []
    for row in K.adjacency:
        adjacency.append([row[f] * W + k for f in range(K.num_flags) for k in range(W)])
    gen = {F: ReducedWord((F,), pairing) for F in pre.facets}
    top = []
    for f in range(K.num_flags):
        a = gen[pre.facet_of(f)]
        for w in words:
            img = word_multiply(a, w)
            k = index.get(img.letters)
            top.append(MISSING if k is None else pre.rn[f] * W + k)
    adjacency.append(top)
    return UniversalBall(pre, radius, words, adjacency)


@dataclass
class BallReport:
    ok: bool
    interior_flags: int
    failures: list[str] = field(default_factory=list)
    walk_returns: bool | None = None

    def __bool__(self):
        return self.ok


def ball_local_checks(ball: UniversalBall) -> BallReport:
    """Local maniplex axioms on interior flags, plus the ``(n-1, n)`` walk test.

    When the predicted order of ``r_{n-1} r_n`` is infinite, the alternating
    walk from each flag over the empty word must not come back to its start
    while it stays inside the ball.
    """
    adj = ball.adjacency
    n = ball.rank
    interior = [f for f in range(ball.num_flags) if ball.is_interior(f)]
    fails = []
    for f in interior:
        for i in range(n):
            g = adj[i][f]
            if g == MISSING:
                fails.append(f"interior flag {f} misses color {i}")
            elif g == f:
                fails.append(f"semiedge of color {i} at flag {f}")
            elif adj[i][g] != f:
                fails.append(f"color {i} is not an involution at flag {f}")
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                g = adj[j][f]
                h = adj[i][g] if g != MISSING else MISSING
                if h == f:
                    fails.append(f"parallel edges of colors {i},{j} at flag {f}")
                if abs(i - j) > 1:
                    x = f
                    for c in (i, j, i, j):
                        x = adj[c][x] if x != MISSING else MISSING
                    if x != MISSING and x != f:
                        fails.append(f"(r{i} r{j})^2 moves flag {f}")
    returns = None
    if rn_order_universal(ball.pre) == math.inf:
        returns = False
        W = len(ball.words)
        for base in range(ball.pre.base.num_flags):
            start = base * W
            x = start
            for step in range(2 * ball.radius):
                c = n - 1 if step % 2 == 0 else n - 2
                x = adj[c][x]
                if x == MISSING:
                    break
                if x == start:
                    returns = True
                    fails.append(f"(r{n - 2} r{n - 1}) walk returns to flag {start}")
                    break
    return BallReport(not fails, len(interior), fails[:20], returns)


# order of r_{n-1} r_n ------------------------------------------------------

def _cycles(perm: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for f in range(len(perm)):
        if not seen[f]:
            cyc = []
            x = f
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = perm[x]
            out.append(cyc)
    return out


def _top_step(pre: PreExtender) -> list[int]:
    """Base-flag part of one color-``n`` step followed by one color-``(n-1)`` step."""
    K = pre.base
    sub = K.adjacency[K.rank - 1]
    return [sub[pre.rn[f]] for f in range(K.num_flags)]


def rn_order_predicted(ext: CayleyExtender) -> int:
    """Order of ``r_{n-1} r_n`` from the voltages alone.

    Each cycle of the base-flag step of length ``c`` carries the product of
    the voltages met along it; the cycle contributes ``c`` times that
    product's order.  For canonical extenders this agrees with
    :func:`rn_order_canonical_formula`.
    """
    G = ext.group
    step = _top_step(ext.pre)
    total = 1
    for cyc in _cycles(step):
        g = G.identity
        for f in cyc:
            g = G.mul(ext.voltage_of_flag(f), g)
        total = math.lcm(total, len(cyc) * element_order(G, g))
    return total


def rn_order_canonical_formula(ext: CayleyExtender) -> int:
    """Twice the lcm of the orders of ``xi(F') xi(F)`` over facets sharing a subfacet."""
    if not ext.pre.is_canonical:
        raise ValueError("formula applies to canonical extenders")
    G, K = ext.group, ext.base
    sub = K.adjacency[K.rank - 1]
    total = 1
    for f in range(K.num_flags):
        a = ext.voltage_of_flag(f)
        b = ext.voltage_of_flag(sub[f])
        total = math.lcm(total, element_order(G, G.mul(b, a)))
    return 2 * total


def rn_order_universal(pre: PreExtender) -> float:
    """Order of ``r_{n-1} r_n`` in the universal extension (``math.inf`` if infinite)."""
    pairing = pairing_of(pre)
    step = _top_step(pre)
    total = 1
    for cyc in _cycles(step):
        w = ReducedWord((), pairing)
        for f in cyc:
            w = word_multiply(ReducedWord((pre.facet_of(f),), pairing), w)
        o = word_order(w)
        if o == math.inf:
            return math.inf
        total = math.lcm(total, len(cyc) * int(o))
    return total


def rn_order_actual(M: Premaniplex) -> int:
    """Order of the flag permutation ``r_{n-1} r_n`` of a rank ``n+1`` premaniplex."""
    a, b = M.adjacency[M.rank - 2], M.adjacency[M.rank - 1]
    perm = [a[b[f]] for f in range(M.num_flags)]
    total = 1
    for cyc in _cycles(perm):
        total = math.lcm(total, len(cyc))
    return total
