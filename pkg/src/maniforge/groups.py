"""Finite groups used as voltage groups, and reduced words for the universal one.

Finite groups are fully enumerated.  Each :class:`GroupModel` keeps a concrete
multiplication on hashable element values together with a breadth-first
indexing from the identity; index 0 is always the identity.  Products are read
left to right (``mul(a, b)`` is ``ab``), which for permutations means "apply
``a`` first", matching automorphisms acting on the right.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Hashable, Mapping, Sequence

from .caps import CapExceeded, cap


class GroupSpecError(ValueError):
    pass


class GroupModel:
    def __init__(self, elements, mul, generators, gen_names, words, name=""):
        self.elements: list[Hashable] = elements
        self._mul: Callable[[Any, Any], Any] = mul
        self.generators: list[Hashable] = generators
        self.gen_names: list[str] = gen_names
        self._words: list[tuple[int, ...]] = words
        self.name = name
        self._index = {g: k for k, g in enumerate(elements)}
        self._inv: dict[int, int] = {}

    @classmethod
    def generate(cls, generators, mul, identity, gen_names=None, name="", limit=None, order=None):
        """Breadth-first closure of ``generators`` under right multiplication.

        ``order`` optionally gives the sequence in which generators are tried
        (it only affects element indexing, not naming).
        """
        limit = cap("group") if limit is None else limit
        generators = list(generators)
        if gen_names is None:
            gen_names = [f"g{k}" for k in range(len(generators))]
        order = list(range(len(generators))) if order is None else list(order)
        elements = [identity]
        words = [()]
        seen = {identity: 0}
        head = 0
        while head < len(elements):
            g = elements[head]
            for k in order:
                h = mul(g, generators[k])
                if h not in seen:
                    seen[h] = len(elements)
                    elements.append(h)
                    words.append(words[head] + (k,))
                    if len(elements) > limit:
                        raise CapExceeded(f"group closure exceeds cap {limit}")
            head += 1
        return cls(elements, mul, generators, list(gen_names), words, name)

    # element access -------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    @property
    def identity(self):
        return self.elements[0]

    def index(self, g) -> int:
        try:
            return self._index[g]
        except KeyError:
            raise ValueError(f"{g!r} is not an element of {self.name or 'the group'}") from None

    def __contains__(self, g):
        return g in self._index

    def mul(self, a, b):
        return self._mul(a, b)

    def mul_idx(self, i: int, j: int) -> int:
        return self._index[self._mul(self.elements[i], self.elements[j])]

    def inv_idx(self, i: int) -> int:
        if i not in self._inv:
            g = self.elements[i]
            prev, cur = self.identity, g
            while cur != self.identity:
                prev, cur = cur, self._mul(cur, g)
            j = self._index[prev]
            self._inv[i] = j
            self._inv[j] = i
        return self._inv[i]

    def inv(self, g):
        return self.elements[self.inv_idx(self.index(g))]

    def power(self, g, k: int):
        if k < 0:
            g, k = self.inv(g), -k
        out = self.identity
        for _ in range(k):
            out = self._mul(out, g)
        return out

    def generator(self, name: str):
        return self.generators[self.gen_names.index(name)]

    # rendering ------------------------------------------------------------
    def word(self, g) -> str:
        letters = self._words[self.index(g)]
        return "*".join(self.gen_names[k] for k in letters) or "1"

    def parse_element(self, text: str):
        """Evaluate a generator word such as ``x*y^-1*x`` (``1`` is the identity)."""
        text = text.strip()
        out = self.identity
        if text in ("", "1", "e"):
            return out
        for token in text.split("*"):
            token = token.strip()
            m = re.fullmatch(r"(.+?)(?:\^(-?\d+))?", token)
            base, exp = m.group(1), int(m.group(2) or 1)
            if base in ("1", "e"):
                continue
            if base not in self.gen_names:
                raise GroupSpecError(f"unknown generator {base!r}; known: {', '.join(self.gen_names)}")
            out = self._mul(out, self.power(self.generator(base), exp))
        return out

    def __repr__(self):
        return f"GroupModel({self.name or '?'}, order={self.order})"


def element_order(G: GroupModel, g) -> int:
    k, cur = 1, g
    while cur != G.identity:
        cur = G.mul(cur, g)
        k += 1
    return k


def subgroup_closure(G: GroupModel, gens: Sequence[int]) -> frozenset[int]:
    """Indices of the subgroup generated by the elements with indices ``gens``."""
    members = {0}
    frontier = [0]
    gens = list(dict.fromkeys(gens))
    while frontier:
        nxt = []
        for a in frontier:
            for b in gens:
                c = G.mul_idx(a, b)
                if c not in members:
                    members.add(c)
                    nxt.append(c)
        frontier = nxt
    return frozenset(members)


def all_subgroups(G: GroupModel, limit: int | None = None) -> list[frozenset[int]]:
    """Every subgroup of ``G`` as a frozenset of element indices.

    Sorted by size, then by sorted member indices.
    """
    limit = cap("subgroups") if limit is None else limit
    if G.order > limit:
        raise CapExceeded(f"subgroup enumeration needs |G| <= {limit}, got {G.order}")
    cyclic = {subgroup_closure(G, [i]) for i in range(G.order)}
    found = set(cyclic)
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclic:
                if C <= H:
                    continue
                J = subgroup_closure(G, sorted(H | C))
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted(found, key=lambda H: (len(H), sorted(H)))


# permutation groups ------------------------------------------------------

def perm_mul(p, q):
    """``p`` then ``q``."""
    return tuple(q[x] for x in p)


def perm_inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def group_from_permutations(generators, degree: int | None = None, names=None, limit=None) -> GroupModel:
    generators = [tuple(g) for g in generators]
    if degree is None:
        degree = len(generators[0]) if generators else 1
    for g in generators:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise ValueError(f"{g} is not a permutation of range({degree})")
    if names is None:
        names = [f"p{k}" for k in range(len(generators))]
    order = sorted(range(len(generators)), key=lambda k: generators[k])
    return GroupModel.generate(generators, perm_mul, tuple(range(degree)), names,
                               name="perm", limit=limit, order=order)


# named groups ------------------------------------------------------------

def cyclic(k: int) -> GroupModel:
    if k < 1:
        raise GroupSpecError("cyclic group needs k >= 1")
    return GroupModel.generate([1 % k], lambda a, b: (a + b) % k, 0, ["g"], name=f"cyclic {k}")


def dihedral(m: int) -> GroupModel:
    """Order ``2m``, generated by involutions ``x``, ``y`` with ``(xy)^m = 1``.

    Elements are affine maps ``z -> ±z + k`` of ``Z_m`` stored as ``(k, e)``.
    """
    if m < 1:
        raise GroupSpecError("dihedral group needs m >= 1")

    def mul(a, b):
        k1, e1 = a
        k2, e2 = b
        s2 = -1 if e2 else 1
        return ((s2 * k1 + k2) % m, e1 ^ e2)

    return GroupModel.generate([(0, 1), (1 % m, 1)], mul, (0, 0), ["x", "y"], name=f"dihedral {m}")


def elem_abelian_2(k: int) -> GroupModel:
    if k < 1:
        raise GroupSpecError("elementary abelian group needs k >= 1")
    return GroupModel.generate([1 << j for j in range(k)], lambda a, b: a ^ b, 0,
                               [f"e{j}" for j in range(k)], name=f"elemabelian2 {k}")


def direct_product(*factors: GroupModel) -> GroupModel:
    if not factors:
        raise GroupSpecError("direct product needs at least one factor")

    def mul(a, b):
        return tuple(G.mul(x, y) for G, x, y in zip(factors, a, b))

    identity = tuple(G.identity for G in factors)
    gens, names = [], []
    for i, G in enumerate(factors):
        for g, nm in zip(G.generators, G.gen_names):
            gens.append(tuple(g if j == i else H.identity for j, H in enumerate(factors)))
            names.append(f"{nm}@{i}")
    name = "product " + " ; ".join(G.name for G in factors)
    return GroupModel.generate(gens, mul, identity, names, name=name)


def semidirect_zs_inversion(s: int, m: int) -> GroupModel:
    """``U ⋊ <chi>`` where ``U`` is the zero-sum part of ``Z_s^m`` and ``chi`` negates.

    Generators ``c0 .. c{m-1}`` are the involutions ``(e_j - e_0, chi)``; the
    order is ``2 s^(m-1)``.
    """
    if s < 2 or m < 1:
        raise GroupSpecError("semidirect-inv needs s >= 2 and m >= 1")

    def mul(a, b):
        u1, c1 = a
        u2, c2 = b
        if c1:
            u = tuple((x - y) % s for x, y in zip(u1, u2))
        else:
            u = tuple((x + y) % s for x, y in zip(u1, u2))
        return (u, c1 ^ c2)

    gens = []
    for j in range(m):
        a = [0] * m
        if j:
            a[j] = 1
            a[0] = s - 1
        gens.append((tuple(a), 1))
    return GroupModel.generate(gens, mul, ((0,) * m, 0), [f"c{j}" for j in range(m)],
                               name=f"semidirect-inv {s} {m}")


def _parse_cycles(text: str) -> list[list[int]]:
    cycles = re.findall(r"\(([^()]*)\)", text)
    if not cycles and text.strip() not in ("", "()"):
        raise GroupSpecError(f"cannot read permutation {text!r}")
    return [[int(x) for x in c.replace(",", " ").split()] for c in cycles]


def _split_top_level(text: str) -> list[str]:
    chunks, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            chunks.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        chunks.append("".join(cur))
    return chunks


def named_group(spec: str) -> GroupModel:
    """Build a group from the mini-language.

    ``cyclic 4``, ``dihedral 5``, ``elemabelian2 6``, ``semidirect-inv 3 4``,
    ``product <spec> ; <spec>`` and ``perm (0 1)(2 3), (1 2)``.
    """
    spec = spec.strip()
    head, _, rest = spec.partition(" ")
    rest = rest.strip()
    try:
        if head == "product":
            return direct_product(*(named_group(part) for part in rest.split(";")))
        if head == "cyclic":
            return cyclic(int(rest))
        if head == "dihedral":
            return dihedral(int(rest))
        if head in ("elemabelian2", "elem_abelian_2"):
            return elem_abelian_2(int(rest))
        if head in ("semidirect-inv", "semidirect_Zs_inversion"):
            s, m = rest.split()
            return semidirect_zs_inversion(int(s), int(m))
        if head == "perm":
            gens_cycles = [_parse_cycles(chunk) for chunk in _split_top_level(rest)]
            points = [x for cs in gens_cycles for c in cs for x in c]
            degree = max(points) + 1 if points else 1
            gens = []
            for cs in gens_cycles:
                img = list(range(degree))
                for c in cs:
                    for a, b in zip(c, c[1:] + c[:1]):
                        img[a] = b
                gens.append(tuple(img))
            G = group_from_permutations(gens, degree)
            G.name = spec
            return G
    except GroupSpecError:
        raise
    except (ValueError, IndexError) as exc:
        raise GroupSpecError(f"bad group spec {spec!r}: {exc}") from None
    raise GroupSpecError(f"unknown group spec {spec!r}")


# reduced words ------------------------------------------------------------

class PairingMismatch(ValueError):
    pass


@lru_cache(maxsize=None)
def _pairing_dict(pairing: tuple[tuple[int, int], ...]) -> Mapping[int, int]:
    return dict(pairing)


def make_pairing(mapping: Mapping[int, int]) -> tuple[tuple[int, int], ...]:
    pairing = tuple(sorted((int(a), int(b)) for a, b in mapping.items()))
    d = dict(pairing)
    for a, b in pairing:
        if d.get(b) != a:
            raise ValueError(f"facet pairing is not an involution at {a} -> {b}")
    return pairing


@dataclass(frozen=True)
class ReducedWord:
    """Element of the universal voltage group as a cancellation-free word.

    ``letters[0]`` is the leftmost generator.  The inverse of letter ``F`` is
    the letter ``pairing[F]``.
    """

    letters: tuple[int, ...]
    pairing: tuple[tuple[int, int], ...]

    @classmethod
    def from_letters(cls, letters, pairing) -> "ReducedWord":
        if not isinstance(pairing, tuple):
            pairing = make_pairing(pairing)
        inv = _pairing_dict(pairing)
        out: list[int] = []
        for x in letters:
            if x not in inv:
                raise ValueError(f"letter {x} is not a facet of the pairing")
            if out and out[-1] == inv[x]:
                out.pop()
            else:
                out.append(x)
        return cls(tuple(out), pairing)

    @classmethod
    def empty(cls, pairing) -> "ReducedWord":
        if not isinstance(pairing, tuple):
            pairing = make_pairing(pairing)
        return cls((), pairing)

    def __len__(self):
        return len(self.letters)

    def is_reduced(self) -> bool:
        inv = _pairing_dict(self.pairing)
        return all(inv[a] != b for a, b in zip(self.letters, self.letters[1:]))


def word_multiply(u: ReducedWord, v: ReducedWord) -> ReducedWord:
    if u.pairing != v.pairing:
        raise PairingMismatch("words belong to different facet pairings")
    inv = _pairing_dict(u.pairing)
    out = list(u.letters)
    for x in v.letters:
        if out and out[-1] == inv[x]:
            out.pop()
        else:
            out.append(x)
    return ReducedWord(tuple(out), u.pairing)


def word_invert(u: ReducedWord) -> ReducedWord:
    inv = _pairing_dict(u.pairing)
    return ReducedWord(tuple(inv[x] for x in reversed(u.letters)), u.pairing)


def word_order(u: ReducedWord) -> float:
    """Order of ``u`` in the universal group; ``math.inf`` when infinite.

    Finite-order elements are exactly the identity and conjugates of the
    involutive generators (letters fixed by the pairing).
    """
    inv = _pairing_dict(u.pairing)
    w = list(u.letters)
    while len(w) >= 2 and inv[w[0]] == w[-1]:
        w = w[1:-1]
    if not w:
        return 1
    if len(w) == 1 and inv[w[0]] == w[0]:
        return 2
    return math.inf
