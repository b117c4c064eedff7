"""Acceptance checks reproducing the reference numbers, one function per criterion."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

from .amalgamation import flat_amalgamate, is_flat
from .automorphisms import automorphism_group, is_isomorphic, is_regular, num_orbits, stg_equal
from .constructions import (
    color_coded,
    cube,
    cuboctahedron,
    ditope,
    flat_extension,
    polygon,
    simplex,
    square_pyramid_map,
    square_toroidal_rn,
    toroid_44,
    toroid_cubic,
    two_hat,
    two_hat_s_minus1,
)
from .extender import (
    CayleyExtender,
    ExtenderError,
    coextender_via_dual,
    coextension,
    derived_adjacency,
    derived_maniplex,
    face_lattice_oracle,
    is_polytopal,
    quotient_extension,
    vertex_labels,
)
from .friendly import (
    closure_in,
    derived_stg_on_base,
    extension_counts,
    extends,
    facet_maps,
    friendly_group,
    has_unique_universal_extension,
    heart_oracle,
    non_extending_facet_map,
    rn_from_facet_map,
    stg_from_facet_actions,
)
from .groups import ReducedWord, cyclic, direct_product, elem_abelian_2, make_pairing, word_invert, word_multiply
from .io import RunReport, load_extender
from .premaniplex import faces, is_maniplex
from .universal import (
    ball_local_checks,
    rn_order_actual,
    rn_order_canonical_formula,
    rn_order_predicted,
    universal_ball,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    measured: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d}: {self.title} ({self.seconds:.2f}s)"


def square():
    return polygon(4)


def witness_extender() -> CayleyExtender:
    """The frozen non-polytopal extension of the hexagon."""
    path = resources.files("maniforge") / "data" / "nonpolytopal_hexagon.ext"
    with resources.as_file(path) as p:
        return load_extender(p).extender()


def pyramid_triangle_rn():
    K = square_pyramid_map()
    F, F2, mp = non_extending_facet_map(K)
    return rn_from_facet_map(K, mp)


def catalog_extenders() -> list[CayleyExtender]:
    sq = square()
    return [
        ditope(sq),
        ditope(cube(3)),
        color_coded(sq, {0: 0, 2: 1, 4: 0, 6: 1}),
        color_coded(sq, {0: 0, 2: 1, 4: 0, 6: 2}),
        two_hat(sq),
        two_hat_s_minus1(sq, 2),
        two_hat_s_minus1(sq, 3),
        flat_extension(sq, 4),
        flat_extension(sq, 6),
        toroid_44(3, 2),
        toroid_44(4, 4),
        toroid_44(5, 3),
        toroid_cubic(3, 2, 2, 2),
    ]


# criteria ----------------------------------------------------------------

def criterion_1() -> tuple[bool, dict]:
    sq = square()
    t0 = time.perf_counter()
    th = derived_adjacency(two_hat(sq))
    s_flags = {s: derived_adjacency(two_hat_s_minus1(sq, s)).num_flags for s in (2, 3, 4)}
    flat_flags = {s: derived_adjacency(flat_extension(sq, 2 * s)).num_flags for s in (2, 3, 4, 5)}
    iso = is_isomorphic(th, derived_adjacency(toroid_44(4, 4))) is not None
    elapsed = time.perf_counter() - t0
    ok = (th.num_flags == 128 and all(s_flags[s] == 16 * s ** 3 for s in s_flags)
          and all(flat_flags[s] == 16 * s for s in flat_flags) and iso and elapsed < 10)
    return ok, {"two_hat": th.num_flags, "two_hat_s": s_flags, "flat": flat_flags,
                "two_hat_iso_toroid_4_4": iso, "seconds": elapsed}


def criterion_2() -> tuple[bool, dict]:
    ok = True
    out = {}
    for a, b in ((3, 2), (4, 4), (5, 3)):
        P = derived_adjacency(toroid_44(a, b))
        counts = [len(faces(P, i)) for i in range(3)]
        euler = counts[0] - counts[1] + counts[2]
        row = {"flags": P.num_flags, "maniplex": is_maniplex(P)[0], "polytopal": bool(is_polytopal(P)),
               "faces": counts, "euler": euler}
        ok &= (P.num_flags == 8 * a * b and row["maniplex"] and row["polytopal"]
               and counts == [a * b, 2 * a * b, a * b] and euler == 0)
        out[f"{a}x{b}"] = row
    orbits = num_orbits(derived_adjacency(toroid_44(4, 4)))
    out["orbits_4x4"] = orbits
    return ok and orbits == 1, out


def criterion_3() -> tuple[bool, dict]:
    t0 = time.perf_counter()
    ext = two_hat(cube(3))
    P = derived_adjacency(ext)
    aut = automorphism_group(P)
    actual, predicted = rn_order_actual(P), rn_order_predicted(ext)
    elapsed = time.perf_counter() - t0
    out = {"flags": P.num_flags, "polytopal": bool(is_polytopal(P)), "regular": is_regular(P, aut),
           "aut_order": aut.order, "rn_order_actual": actual, "rn_order_predicted": predicted, "seconds": elapsed}
    ok = (P.num_flags == 3072 and out["polytopal"] and out["regular"] and aut.order == 64 * 48
          and actual == predicted == 4 and elapsed < 60)
    return ok, out


def criterion_4() -> tuple[bool, dict]:
    out = {}
    ok = True
    for ext in catalog_extenders():
        P = derived_adjacency(ext)
        actual, predicted = rn_order_actual(P), rn_order_predicted(ext)
        row = {"actual": actual, "predicted": predicted}
        if ext.pre.is_canonical:
            row["canonical_formula"] = rn_order_canonical_formula(ext)
            ok &= row["canonical_formula"] == actual
        ok &= actual == predicted
        out[ext.name + f" [{P.num_flags}]"] = row
    return ok, out


def polytopality_instances() -> list[tuple[str, object]]:
    sq = square()
    co = coextender_via_dual(sq, None, cyclic(2), {v: 1 for v in set(vertex_labels(sq))})
    items = [
        ("square", sq), ("hexagon", polygon(6)), ("cube3", cube(3)), ("simplex3", simplex(3)),
        ("pyramid", square_pyramid_map()), ("cuboctahedron", cuboctahedron()),
        ("coextension {2,4}", coextension(co)),
        ("flat amalgamation", flat_amalgamate(co, ditope(sq)).premaniplex),
        ("two-hat pyramid", derived_adjacency(two_hat(square_pyramid_map()))),
        ("non-polytopal witness", derived_adjacency(witness_extender())),
        ("toroid44 3 1", derived_adjacency(toroid_44(3, 1))),
        ("toroid44 1 1", derived_adjacency(toroid_44(1, 1))),
    ]
    for ext in catalog_extenders():
        P = derived_adjacency(ext)
        if P.num_flags <= 2000:
            items.append((ext.name, P))
    return items


def criterion_5() -> tuple[bool, dict]:
    out = {}
    agree = True
    false_seen = False
    for name, P in polytopality_instances():
        a = bool(is_polytopal(P))
        b = face_lattice_oracle(P)
        out[name] = {"path_intersection": a, "face_lattice": b}
        agree &= a == b
        false_seen |= not a
    out["instances"] = len(out)
    return agree and false_seen and out["instances"] >= 15, out


def friendly_instances():
    sq, pyr = square(), square_pyramid_map()
    return [
        ("square, Id", sq, None, 8),
        ("square, toroidal", sq, square_toroidal_rn(), None),
        ("cube3, Id", cube(3), None, 48),
        ("pyramid, Id", pyr, None, 8),
        ("pyramid, triangle pairing", pyr, pyramid_triangle_rn(), None),
    ]


def criterion_6() -> tuple[bool, dict]:
    out = {}
    ok = True
    for name, K, rn, expect in friendly_instances():
        aut = automorphism_group(K)
        h = friendly_group(K, rn, aut)
        o = heart_oracle(K, rn, aut)
        same = h.as_set() == o.as_set()
        out[name] = {"refinement": h.order, "oracle": o.order, "equal": same}
        ok &= same and (expect is None or h.order == expect == aut.order)
    return ok, out


def stg_instances() -> list[CayleyExtender]:
    pyr = square_pyramid_map()
    exts = [e for e in catalog_extenders() if derived_adjacency(e).num_flags <= 500]
    return exts + [ditope(pyr), two_hat(pyr), witness_extender()]


def criterion_7() -> tuple[bool, dict]:
    out = {}
    ok = True
    for ext in stg_instances():
        D = derived_maniplex(ext)
        aut_M = automorphism_group(D.premaniplex)
        a = derived_stg_on_base(D, aut_M)
        b = stg_from_facet_actions(D, aut_M)
        same = stg_equal(a, b)
        out[f"{ext.name} [{D.num_flags}]"] = {"nodes": a.num_nodes, "equal": same}
        ok &= same
    return ok, out


def criterion_8() -> tuple[bool, dict]:
    out = {}
    ok = True
    for name, K in (("square", square()), ("cube3", cube(3)), ("simplex3", simplex(3))):
        r = has_unique_universal_extension(K)
        out[name] = r.unique
        ok &= r.unique
    pyr = square_pyramid_map()
    aut = automorphism_group(pyr)
    r = has_unique_universal_extension(pyr, aut)
    out["pyramid"] = r.unique
    ok &= not r.unique and r.witness is not None
    if r.witness is not None:
        F, F2, pairs = r.witness
        mp = dict(pairs)
        total, extendable = extension_counts(pyr, F, F2, aut)
        out["pyramid_witness"] = {"facet": F, "other_facet": F2, "map": mp}
        out["pyramid_isomorphisms"] = total
        out["pyramid_extendable"] = extendable
        genuine = mp in facet_maps(pyr, F, F2) and not extends(aut, mp)
        ok &= F != F2 and total == 6 and extendable == 2 and genuine
    return ok, out


def criterion_9() -> tuple[bool, dict]:
    from .extender import PreExtender
    ball = universal_ball(PreExtender(square()), 3)
    census = ball.census()
    cumulative = [sum(census[:k + 1]) for k in range(len(census))]
    flags = [8 * c for c in cumulative]
    sizes = [universal_ball(PreExtender(square()), L).num_flags for L in range(4)]
    report = ball_local_checks(ball)
    out = {"census": census, "cumulative": cumulative, "flags": sizes, "interior_ok": report.ok,
           "walk_returns": report.walk_returns}
    ok = census == [1, 4, 12, 36] and cumulative == [1, 5, 17, 53] and sizes == flags and report.ok
    return ok and report.walk_returns is False, out


def bad_amalgamation():
    """Toroidal pairing with a vertex self-swap; ``(rn r-1)^2`` moves flag 1."""
    sq = square()
    rm = list(range(8))
    rm[1], rm[2] = 2, 1
    co = coextender_via_dual(sq, rm, elem_abelian_2(1),
                             {v: (1 if v == 1 else 0) for v in set(vertex_labels(sq))})
    return co, toroid_44(3, 2)


def criterion_10() -> tuple[bool, dict]:
    sq = square()
    co = coextender_via_dual(sq, None, cyclic(2), {v: 1 for v in set(vertex_labels(sq))})
    A = flat_amalgamate(co, ditope(sq))
    P = A.premaniplex
    out = {"flags": P.num_flags, "rank": P.rank, "flat": is_flat(P), "polytopal": bool(is_polytopal(P))}
    try:
        flat_amalgamate(*bad_amalgamation())
        out["bad_spec"] = "accepted"
        rejected = False
    except ExtenderError as err:
        out["bad_spec"] = f"rejected at flag {err.witness}"
        rejected = err.witness is not None
    ok = P.num_flags == 32 and P.rank == 4 and out["flat"] and out["polytopal"] and rejected
    return ok, out


def _reduce_randomly(letters, inv, rng):
    w = list(letters)
    while True:
        spots = [i for i in range(len(w) - 1) if inv[w[i]] == w[i + 1]]
        if not spots:
            return tuple(w)
        i = rng.choice(spots)
        del w[i:i + 2]


def criterion_11(seed: int = 20240601) -> tuple[bool, dict]:
    rng = random.Random(seed)
    out = {}
    # free action: |Aut| * orbits = flags
    objects = [("square", square()), ("cube3", cube(3)), ("pyramid", square_pyramid_map()),
               ("cuboctahedron", cuboctahedron())]
    objects += [(e.name, derived_adjacency(e)) for e in catalog_extenders()]
    free_ok = True
    for name, P in objects:
        aut = automorphism_group(P)
        free_ok &= aut.order * num_orbits(P, aut) == P.num_flags
    out["free_action_objects"] = len(objects)
    out["free_action"] = free_ok

    # coverings commute with all adjacencies
    cover_ok = True
    big = toroid_44(4, 4)
    H = direct_product(cyclic(2), cyclic(2))
    q = quotient_extension(big, H, {"g@0": (1, 0), "g@1": (0, 1)})
    chains = [(big, q)]
    for s in (2, 3):
        src = two_hat_s_minus1(square(), s)
        tgt = flat_extension(square(), 2 * s)
        images = {f"c{j}": tgt.xi[F] for j, F in enumerate(src.pre.facets)}
        chains.append((src, quotient_extension(src, tgt.group, images)))
        cover_ok &= all(chains[-1][1].extender.xi[F] == tgt.xi[F] for F in src.pre.facets)
    for src, res in chains:
        P, Q = derived_adjacency(src), derived_adjacency(res.extender)
        c = res.covering
        for i in range(P.rank):
            cover_ok &= all(c[P.adjacency[i][f]] == Q.adjacency[i][c[f]] for f in range(P.num_flags))
    out["coverings"] = len(chains)
    out["covering_ok"] = cover_ok

    # normal forms: random cancellation order agrees with the stack reduction,
    # and equality as elements matches equality of letter sequences
    pairings = [make_pairing({0: 0, 2: 2, 4: 4, 6: 6}), make_pairing({0: 4, 4: 0, 2: 6, 6: 2}),
                make_pairing({0: 2, 2: 0, 4: 4, 6: 6})]
    words_ok = True
    trials = 10_000
    for t in range(trials):
        pairing = pairings[t % len(pairings)]
        inv = dict(pairing)
        letters = list(inv)
        raw_u = [rng.choice(letters) for _ in range(rng.randint(0, 8))]
        raw_v = [rng.choice(letters) for _ in range(rng.randint(0, 8))]
        if rng.random() < 0.3:
            raw_v = list(raw_u) + [x for a in rng.sample(letters, 2) for x in (a, inv[a])]
        u = ReducedWord.from_letters(raw_u, pairing)
        v = ReducedWord.from_letters(raw_v, pairing)
        words_ok &= u.letters == _reduce_randomly(raw_u, inv, rng)
        words_ok &= v.letters == _reduce_randomly(raw_v, inv, rng)
        trivial = len(word_multiply(u, word_invert(v))) == 0
        words_ok &= trivial == (u.letters == v.letters)
    out["word_pairs"] = trials
    out["normal_forms"] = words_ok

    # friendly groups are closed under products and inverses
    closure_ok = True
    for name, K, rn, _ in friendly_instances():
        aut = automorphism_group(K)
        h = friendly_group(K, rn, aut)
        closure_ok &= closure_in(aut, [aut.perms[t] for t in h.members]) == sorted(h.members)
    out["friendly_closure"] = closure_ok
    return free_ok and cover_ok and words_ok and closure_ok, out


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, dict]]]] = [
    (1, "table of universal extensions of the square", criterion_1),
    (2, "toroidal maps {4,4}", criterion_2),
    (3, "two-hat of the cube", criterion_3),
    (4, "order of r_(n-1) r_n", criterion_4),
    (5, "polytopality cross-check", criterion_5),
    (6, "friendly group versus subgroup oracle", criterion_6),
    (7, "symmetry type graphs from facet actions", criterion_7),
    (8, "uniqueness of universal extensions", criterion_8),
    (9, "universal ball census", criterion_9),
    (10, "flat amalgamation", criterion_10),
    (11, "property suites", criterion_11),
]


def run_criterion(number: int) -> CriterionResult:
    _, title, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        ok, measured = fn()
    except Exception as err:  # a crash is a failed criterion, not a crashed suite
        ok, measured = False, {"error": f"{type(err).__name__}: {err}"}
    return CriterionResult(number, title, bool(ok), measured, time.perf_counter() - t0)


def acceptance_suite(numbers=None) -> tuple[RunReport, list[CriterionResult]]:
    numbers = [n for n, _, _ in CRITERIA] if numbers is None else list(numbers)
    report = RunReport("accept", {"criteria": numbers})
    t0 = time.perf_counter()
    results = [run_criterion(n) for n in numbers]
    report.wall_time = time.perf_counter() - t0
    report.results = {
        f"{r.number:02d}": {"title": r.title, "passed": r.passed, "measured": r.measured,
                            "seconds": round(r.seconds, 3)}
        for r in results
    }
    report.results["all_passed"] = all(r.passed for r in results)
    return report, results
