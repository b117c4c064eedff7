"""Bounded search for a non-polytopal Cayley extension of the hexagon.

Pairings change at most two facet restrictions; voltage groups have order at
most 8.  The first derived maniplex failing the path intersection property
and the face-lattice oracle is printed as JSON.
"""
from __future__ import annotations

import itertools
import json
import sys

from maniforge.constructions import polygon
from maniforge.extender import CayleyExtender, ExtenderError, PreExtender, derived_maniplex, face_lattice_oracle, is_polytopal
from maniforge.groups import named_group

GROUPS = ["cyclic 2", "cyclic 3", "elemabelian2 2", "cyclic 4", "cyclic 5", "dihedral 3", "cyclic 6",
          "cyclic 7", "elemabelian2 3", "dihedral 4", "cyclic 8", "product cyclic 2 ; cyclic 4"]


def pairings(K):
    """Involutions of the flags moving at most two facet restrictions off the identity."""
    m = K.num_flags
    edges = [(2 * j, 2 * j + 1) for j in range(m // 2)]
    seen = set()
    for a, b in itertools.combinations_with_replacement(range(len(edges)), 2):
        for twist in (0, 1):
            rn = list(range(m))
            if a == b:
                x, y = edges[a]
                rn[x], rn[y] = y, x
            else:
                (x0, x1), (y0, y1) = edges[a], edges[b]
                pairs = [(x0, y0), (x1, y1)] if twist == 0 else [(x0, y1), (x1, y0)]
                for p, q in pairs:
                    rn[p], rn[q] = q, p
            rn = tuple(rn)
            if rn not in seen:
                seen.add(rn)
                yield rn
    # two facets each swapped onto themselves
    for a, b in itertools.combinations(range(len(edges)), 2):
        rn = list(range(m))
        for j in (a, b):
            x, y = edges[j]
            rn[x], rn[y] = y, x
        yield tuple(rn)


def main():
    K = polygon(6)
    tried = 0
    for spec in GROUPS:
        G = named_group(spec)
        for rn in pairings(K):
            try:
                pre = PreExtender(K, rn)
            except ExtenderError:
                continue
            reps = [F for F in pre.facets if F <= pre.paired_facet(F)]
            for values in itertools.product(range(G.order), repeat=len(reps)):
                xi = {}
                ok = True
                for F, v in zip(reps, values):
                    g = G.elements[v]
                    if pre.paired_facet(F) == F and G.mul(g, g) != G.identity:
                        ok = False
                        break
                    xi[F] = g
                if not ok:
                    continue
                ext = CayleyExtender.from_orbits(pre, G, xi)
                D = derived_maniplex(ext)
                tried += 1
                if not D.maniplex or D.diagnostics:
                    continue
                if not is_polytopal(D.premaniplex) and not face_lattice_oracle(D.premaniplex):
                    out = {
                        "base": "polygon 6",
                        "rn": list(rn),
                        "group": spec,
                        "xi": {str(F): G.word(xi[F]) for F in reps},
                        "flags": D.num_flags,
                        "witness": list(is_polytopal(D.premaniplex).witness),
                        "tried": tried,
                    }
                    json.dump(out, sys.stdout, indent=2)
                    print()
                    return 0
    print(f"no witness among {tried} extenders", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
