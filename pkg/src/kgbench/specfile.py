"""Plain-text spec files shared by graphs, functors, actions and windows.

Example::

    NAME: f2theta
    RANK: 2
    VERTICES:
      v
    EDGES:
      color 1 f1 v v        # color <i> <id> <range> <source>
    SQUARES:
      f1 g1 ~ g1 f2         # e_i e_j ~ e_j' e_i'
    MONOID: NAT 2
    FUNCTOR:
      f3 -> 1,0
    WINDOW: 3,3
    ACTION:
      MONOID FINGROUP Z2
      gen 1 : v1->v2, v2->v1
    BOUNDARY:
      v@3,3 1               # (vertex, colour) slot cut by the window

``GENERATOR: delta <k>`` replaces RANK/VERTICES/EDGES/SQUARES by the Δ_k
window of radius WINDOW; its ACTION may be the single line ``translation``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path as FsPath

from .actions import Action, ActionError
from .kgraph import Edge, KGraph, KGraphError
from .monoid import FiniteGroup, Monoid, monoid_from_text

SECTIONS = ("NAME", "RANK", "VERTICES", "EDGES", "SQUARES", "BOUNDARY", "MONOID", "FUNCTOR",
            "WINDOW", "ACTION", "GENERATOR", "CAYLEY")
_HEADER = re.compile(r"^([A-Z]+):\s*(.*)$")


class SpecError(ValueError):
    def __init__(self, msg, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


@dataclass
class ActionSpec:
    monoid: str | None = None
    maps: dict = field(default_factory=dict)  # generator text -> {id: id}
    builtin: str | None = None


@dataclass
class SpecFile:
    name: str = ""
    rank: int | None = None
    vertices: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    squares: list = field(default_factory=list)
    boundary: list = field(default_factory=list)
    monoid_text: str | None = None
    functor: dict | None = None  # edge id -> element text
    window: tuple | None = None
    action: ActionSpec | None = None
    generator: tuple | None = None
    cayley: list | None = None

    # -- builders ----------------------------------------------------------
    def graph(self) -> KGraph:
        if self.generator:
            from .graphs import delta_window

            kind, k = self.generator
            if kind != "delta":
                raise SpecError(f"unknown generator {kind!r}")
            if not self.window or len(set(self.window)) != 1:
                raise SpecError("GENERATOR delta needs a uniform WINDOW radius")
            return delta_window(k, self.window[0])
        if self.rank is None:
            raise SpecError("missing RANK")
        try:
            return KGraph(self.rank, self.vertices, self.edges, self.squares, self.boundary,
                          name=self.name)
        except KGraphError as exc:
            raise SpecError(str(exc)) from exc

    def monoid(self) -> Monoid:
        text = self.monoid_text or (self.action.monoid if self.action else None)
        if text is None:
            raise SpecError("missing MONOID")
        try:
            return monoid_from_text(text, self.cayley)
        except ValueError as exc:
            raise SpecError(str(exc)) from exc

    def functor_values(self, monoid: Monoid | None = None) -> dict:
        if self.functor is None:
            raise SpecError("missing FUNCTOR")
        monoid = monoid or self.monoid()
        try:
            return {e: monoid.parse(t) for e, t in self.functor.items()}
        except ValueError as exc:
            raise SpecError(f"bad functor value: {exc}") from exc

    def build_action(self, graph: KGraph | None = None) -> Action:
        if self.action is None:
            raise SpecError("missing ACTION")
        graph = graph or self.graph()
        if self.action.builtin == "translation":
            from .graphs import delta_translation

            return delta_translation(graph)
        if self.action.builtin:
            raise SpecError(f"unknown builtin action {self.action.builtin!r}")
        m = monoid_from_text(self.action.monoid or self.monoid_text, self.cayley)
        try:
            maps = {m.parse(g): mp for g, mp in self.action.maps.items()}
            return Action.from_maps(m, graph, maps, name=self.name)
        except (ValueError, ActionError) as exc:
            raise SpecError(str(exc)) from exc

    # -- serialisation -----------------------------------------------------
    def to_text(self) -> str:
        out = []
        if self.name:
            out.append(f"NAME: {self.name}")
        if self.generator:
            out.append(f"GENERATOR: {self.generator[0]} {self.generator[1]}")
        if self.rank is not None:
            out.append(f"RANK: {self.rank}")
        if self.vertices:
            out.append("VERTICES:")
            out += [f"  {v}" for v in self.vertices]
        if self.edges:
            out.append("EDGES:")
            out += [f"  color {e.color} {e.id} {e.range} {e.source}" for e in self.edges]
        if self.squares:
            out.append("SQUARES:")
            out += [f"  {a} {b} ~ {c} {d}" for a, b, c, d in self.squares]
        if self.boundary:
            out.append("BOUNDARY:")
            out += [f"  {v} {c}" for v, c in self.boundary]
        if self.cayley:
            out.append("CAYLEY:")
            out += ["  " + " ".join(str(x) for x in row) for row in self.cayley]
        if self.monoid_text:
            out.append(f"MONOID: {self.monoid_text}")
        if self.functor is not None:
            out.append("FUNCTOR:")
            out += [f"  {e} -> {t}" for e, t in self.functor.items()]
        if self.window is not None:
            out.append("WINDOW: " + ",".join(str(x) for x in self.window))
        if self.action is not None:
            out.append("ACTION:")
            if self.action.monoid:
                out.append(f"  MONOID {self.action.monoid}")
            if self.action.builtin:
                out.append(f"  {self.action.builtin}")
            for g, mp in self.action.maps.items():
                out.append(f"  gen {g} : " + ", ".join(f"{x}->{y}" for x, y in mp.items()))
        return "\n".join(out) + "\n"


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_spec(text: str) -> SpecFile:
    spec = SpecFile()
    section = None
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        m = _HEADER.match(line)
        if m and m.group(1) in SECTIONS:
            section, inline = m.group(1), m.group(2).strip()
            if section in seen:
                raise SpecError(f"duplicate section {section}", lineno)
            seen.add(section)
            if section == "FUNCTOR":
                spec.functor = {}
            elif section == "ACTION":
                spec.action = ActionSpec()
            elif section == "CAYLEY":
                spec.cayley = []
            if inline:
                _section_line(spec, section, inline, lineno, inline=True)
            elif section in ("NAME", "RANK", "MONOID", "WINDOW", "GENERATOR"):
                raise SpecError(f"{section} needs a value", lineno)
            continue
        if m:
            raise SpecError(f"unknown section {m.group(1)}", lineno)
        if section is None:
            raise SpecError("content before the first section header", lineno)
        _section_line(spec, section, line, lineno)
    if spec.rank is None and spec.generator is None:
        raise SpecError("missing RANK")
    return spec


def _section_line(spec: SpecFile, section: str, line: str, lineno: int, inline: bool = False):
    parts = line.split()
    try:
        if section == "NAME":
            spec.name = line
        elif section == "RANK":
            spec.rank = int(line)
            if spec.rank < 1:
                raise SpecError("RANK must be >= 1", lineno)
        elif section == "VERTICES":
            spec.vertices.extend(parts)
        elif section == "EDGES":
            if len(parts) != 5 or parts[0] != "color":
                raise SpecError("expected 'color <i> <id> <range> <source>'", lineno)
            spec.edges.append(Edge(parts[2], int(parts[1]), parts[3], parts[4]))
        elif section == "SQUARES":
            if len(parts) != 5 or parts[2] != "~":
                raise SpecError("expected '<e1> <e2> ~ <e3> <e4>'", lineno)
            spec.squares.append((parts[0], parts[1], parts[3], parts[4]))
        elif section == "BOUNDARY":
            if len(parts) != 2:
                raise SpecError("expected '<vertex> <colour>'", lineno)
            spec.boundary.append((parts[0], int(parts[1])))
        elif section == "MONOID":
            spec.monoid_text = " ".join(parts)
        elif section == "FUNCTOR":
            if "->" not in line:
                raise SpecError("expected '<edge-id> -> <element>'", lineno)
            e, val = (x.strip() for x in line.split("->", 1))
            spec.functor[e] = val.replace(" ", "")
        elif section == "WINDOW":
            spec.window = tuple(int(x) for x in line.replace(" ", "").split(","))
        elif section == "GENERATOR":
            if len(parts) != 2:
                raise SpecError("expected 'GENERATOR: <kind> <k>'", lineno)
            spec.generator = (parts[0], int(parts[1]))
        elif section == "CAYLEY":
            spec.cayley.append([int(x) for x in parts])
        elif section == "ACTION":
            _action_line(spec.action, line, lineno)
    except ValueError as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(str(exc), lineno) from exc


def _action_line(act: ActionSpec, line: str, lineno: int):
    if line.startswith("MONOID"):
        act.monoid = " ".join(line.split()[1:])
    elif line.startswith("gen"):
        head, _, body = line[3:].partition(":")
        gen = head.strip()
        if not gen or not body.strip():
            raise SpecError("expected 'gen <g> : a->b, ...'", lineno)
        mp = act.maps.setdefault(gen, {})
        for item in body.split(","):
            item = item.strip()
            if not item:
                continue
            if "->" not in item:
                raise SpecError(f"bad map entry {item!r}", lineno)
            x, y = (s.strip() for s in item.split("->", 1))
            mp[x] = y
    elif re.fullmatch(r"[a-z][a-z-]*", line):
        act.builtin = line
    else:
        raise SpecError(f"bad ACTION line {line!r}", lineno)


def load_spec(path) -> SpecFile:
    try:
        text = FsPath(path).read_text()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_spec(text)


def spec_from_graph(g: KGraph, name: str | None = None) -> SpecFile:
    return SpecFile(name=name if name is not None else g.name, rank=g.rank, vertices=list(g.vertices),
                    edges=list(g.edges.values()), squares=list(g.squares),
                    boundary=sorted(g.incomplete))


def monoid_elements_text(m: Monoid, values: dict) -> dict:
    return {k: m.format(v) for k, v in values.items()}


def group_cayley(m: Monoid):
    return [list(r) for r in m.table] if isinstance(m, FiniteGroup) else None
