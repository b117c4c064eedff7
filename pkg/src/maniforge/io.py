"""File formats: MPX flag graphs, extender files, DOT and JSON exports, run reports."""
from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .extender import CayleyExtender, ExtenderError, PreExtender, coextender_via_dual
from .groups import GroupModel, GroupSpecError, named_group
from .premaniplex import Premaniplex


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        where = f"{path or '<text>'}:{line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


# MPX ---------------------------------------------------------------------

def dumps_mpx(P: Premaniplex) -> str:
    lines = ["mpx 1", f"rank {P.rank}", f"flags {P.num_flags}"]
    for i, row in enumerate(P.adjacency):
        lines.append(f"adj {i}: " + " ".join(map(str, row)))
    return "\n".join(lines) + "\n"


def _expect(line: str, keyword: str, lineno: int, path) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != keyword or not parts[1].isdigit():
        raise ParseError(f"expected '{keyword} <integer>'", lineno, path)
    return int(parts[1])


def loads_mpx(text: str, path: str | None = None) -> Premaniplex:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip() != "mpx 1":
        raise ParseError("expected header 'mpx 1'", 1, path)
    if len(lines) < 3:
        raise ParseError("truncated header", len(lines) + 1, path)
    n = _expect(lines[1].strip(), "rank", 2, path)
    m = _expect(lines[2].strip(), "flags", 3, path)
    if n < 1 or m < 1:
        raise ParseError("rank and flag count must be positive", 2 if n < 1 else 3, path)
    if len(lines) != 3 + n:
        raise ParseError(f"expected {n} adjacency lines, found {len(lines) - 3}", min(len(lines), 3 + n) + 1, path)
    rows = []
    for i in range(n):
        lineno = 4 + i
        head, sep, body = lines[3 + i].partition(":")
        if not sep or head.split() != ["adj", str(i)]:
            raise ParseError(f"expected 'adj {i}: ...'", lineno, path)
        try:
            row = [int(x) for x in body.split()]
        except ValueError:
            raise ParseError("flag images must be integers", lineno, path) from None
        if len(row) != m:
            raise ParseError(f"expected {m} flag images, found {len(row)}", lineno, path)
        bad = [x for x in row if not 0 <= x < m]
        if bad:
            raise ParseError(f"flag image {bad[0]} out of range", lineno, path)
        bad = [f for f in range(m) if row[row[f]] != f]
        if bad:
            raise ParseError(f"adjacency {i} is not an involution at flag {bad[0]}", lineno, path)
        rows.append(tuple(row))
    return Premaniplex(tuple(rows))


def load_mpx(path) -> Premaniplex:
    path = Path(path)
    return loads_mpx(path.read_text(), str(path))


def save_mpx(P: Premaniplex, path) -> None:
    Path(path).write_text(dumps_mpx(P))


# extender files ----------------------------------------------------------

@dataclass
class ExtenderFile:
    """Parsed extender or coextender file.

    ``group`` and ``xi`` are absent for a bare pre-extender.  For a
    coextender, ``pairing`` is ``r_{-1}`` and ``xi`` is keyed by vertex labels.
    """

    kind: str  # "extender" or "coextender"
    base: Premaniplex
    base_path: str
    pairing: tuple[int, ...] | None
    group_spec: str | None
    group: GroupModel | None
    xi: dict[int, Any] = field(default_factory=dict)

    def pre(self) -> PreExtender:
        if self.kind != "extender":
            raise ExtenderError("a coextender file does not describe a pre-extender of its base")
        return PreExtender(self.base, self.pairing)

    def extender(self) -> CayleyExtender:
        """The Cayley extender (for coextenders: the extender on the dual base)."""
        if self.group is None:
            raise ExtenderError("file has no group; it only describes a pre-extender")
        if self.kind == "coextender":
            return coextender_via_dual(self.base, self.pairing, self.group, self.xi)
        return CayleyExtender.from_orbits(self.pre(), self.group, self.xi)


def loads_extender(text: str, path: str | None = None, base_dir: Path | None = None) -> ExtenderFile:
    base_dir = Path(".") if base_dir is None else base_dir
    lines = [(k + 1, ln.strip()) for k, ln in enumerate(text.split("\n"))]
    lines = [(k, ln) for k, ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0][1] not in ("extender", "coextender"):
        raise ParseError("expected header 'extender' or 'coextender'", 1, path)
    kind = lines[0][1]
    pair_key = "rn:" if kind == "extender" else "r-1:"
    base = base_path = None
    pairing = None
    group_spec = group = None
    raw_xi: list[tuple[int, int, str]] = []
    for lineno, ln in lines[1:]:
        word = ln.split()[0]
        if word == "base":
            base_path = ln[len("base"):].strip()
            try:
                base = load_mpx(base_dir / base_path)
            except OSError as err:
                raise ParseError(f"cannot read base file: {err}", lineno, path) from None
        elif word == pair_key:
            try:
                pairing = tuple(int(x) for x in ln[len(pair_key):].split())
            except ValueError:
                raise ParseError("pairing images must be integers", lineno, path) from None
        elif word == "group":
            group_spec = ln[len("group"):].strip()
            try:
                group = named_group(group_spec)
            except GroupSpecError as err:
                raise ParseError(str(err), lineno, path) from None
        elif word == "xi":
            parts = ln.split(None, 2)
            if len(parts) != 3 or not parts[1].isdigit():
                raise ParseError("expected 'xi <label> <element word>'", lineno, path)
            raw_xi.append((lineno, int(parts[1]), parts[2]))
        else:
            raise ParseError(f"unknown directive {word!r}", lineno, path)
    if base is None:
        raise ParseError("missing 'base' line", None, path)
    if pairing is not None and len(pairing) != base.num_flags:
        raise ParseError(f"pairing has {len(pairing)} images, base has {base.num_flags} flags", None, path)
    if raw_xi and group is None:
        raise ParseError("'xi' lines need a 'group' line", raw_xi[0][0], path)
    xi = {}
    for lineno, label, word in raw_xi:
        try:
            xi[label] = group.parse_element(word)
        except GroupSpecError as err:
            raise ParseError(str(err), lineno, path) from None
    return ExtenderFile(kind, base, base_path, pairing, group_spec, group, xi)


def load_extender(path) -> ExtenderFile:
    path = Path(path)
    return loads_extender(path.read_text(), str(path), path.parent)


def dumps_extender(ext: CayleyExtender | None, base_path: str, *, pre: PreExtender | None = None,
                   group_spec: str | None = None, kind: str = "extender") -> str:
    """Text of an extender file; voltages are written once per facet pair."""
    pre = ext.pre if ext is not None else pre
    lines = [kind, f"base {base_path}"]
    if not pre.is_canonical:
        lines.append(("rn: " if kind == "extender" else "r-1: ") + " ".join(map(str, pre.rn)))
    if ext is not None:
        lines.append(f"group {group_spec or ext.group.name}")
        for F in pre.facets:
            if F <= pre.paired_facet(F):
                lines.append(f"xi {F} {ext.group.word(ext.xi[F])}")
    return "\n".join(lines) + "\n"


def save_extender(ext: CayleyExtender, path, base_name: str | None = None) -> None:
    """Write ``ext`` and its base (as ``<stem>.base.mpx`` unless named) next to ``path``."""
    path = Path(path)
    base_name = base_name or f"{path.stem}.base.mpx"
    save_mpx(ext.base, path.parent / base_name)
    path.write_text(dumps_extender(ext, base_name))


# exports -----------------------------------------------------------------

def export_dot(P: Premaniplex, name: str = "flags") -> str:
    """One node per flag; one edge record per color-``i`` pair; semiedges double-circled."""
    lines = [f"graph {name} {{"]
    semi: dict[int, list[int]] = {}
    for i, row in enumerate(P.adjacency):
        for f, g in enumerate(row):
            if g == f:
                semi.setdefault(f, []).append(i)
    for f in range(P.num_flags):
        if f in semi:
            cols = ",".join(map(str, semi[f]))
            lines.append(f'  n{f} [peripheries=2, xlabel="semiedge color={cols}"];')
        else:
            lines.append(f"  n{f};")
    for i, row in enumerate(P.adjacency):
        for f, g in enumerate(row):
            if f < g:
                lines.append(f'  n{f} -- n{g} [label="color={i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def premaniplex_json(P: Premaniplex) -> dict:
    return {"rank": P.rank, "flags": P.num_flags, "adjacency": [list(r) for r in P.adjacency]}


def export_json(obj: Any) -> str:
    return json.dumps(_normalise(obj), sort_keys=True, indent=2, default=_jsonable, allow_nan=False) + "\n"


def _jsonable(x):
    if isinstance(x, Premaniplex):
        return premaniplex_json(x)
    if isinstance(x, (set, frozenset, tuple)):
        return sorted(x) if isinstance(x, (set, frozenset)) else list(x)
    if hasattr(x, "item"):
        return x.item()
    if x == float("inf"):
        return "infinite"
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _normalise(x):
    if isinstance(x, float):
        if x == float("inf"):
            return "infinite"
        return round(x, 6)
    if isinstance(x, dict):
        return {str(k): _normalise(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_normalise(v) for v in x]
    return x


@dataclass
class RunReport:
    operation: str
    params: dict = field(default_factory=dict)
    inputs: dict[str, str] = field(default_factory=dict)  # path -> sha256
    results: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def add_input(self, path) -> None:
        data = Path(path).read_bytes()
        self.inputs[str(path)] = hashlib.sha256(data).hexdigest()

    def to_dict(self) -> dict:
        return _normalise({
            "operation": self.operation,
            "params": self.params,
            "inputs": self.inputs,
            "results": self.results,
            "wall_time": round(self.wall_time, 3),
        })

    def to_json(self, include_time: bool = True) -> str:
        d = self.to_dict()
        if not include_time:
            d.pop("wall_time")
        return json.dumps(d, sort_keys=True, indent=2, default=_jsonable, allow_nan=False) + "\n"


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start

