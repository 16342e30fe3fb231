"""k-graphs as coloured skeletons with factorisation squares.

A path is stored in colour-block normal form: all colour-1 edges, then all
colour-2 edges, and so on, read from range to source.  Any composable edge
sequence is brought to that form by adjacent square swaps.

Windowed graphs (finite truncations of infinite k-graphs) record which
``(vertex, colour)`` slots lost in-edges to the truncation.  Exact operations
refuse to enumerate through such slots and raise :class:`WindowExhausted`.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .report import Report, Status

Degree = tuple  # tuple[int, ...]


def zero(k: int) -> Degree:
    return (0,) * k


def unit(k: int, color: int) -> Degree:
    """Degree of a single edge of ``color`` (colours are 1-based)."""
    return tuple(1 if i == color - 1 else 0 for i in range(k))


def deg_add(a: Degree, b: Degree) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


def deg_sub(a: Degree, b: Degree) -> Degree:
    return tuple(x - y for x, y in zip(a, b))


def deg_join(a: Degree, b: Degree) -> Degree:
    return tuple(max(x, y) for x, y in zip(a, b))


def deg_le(a: Degree, b: Degree) -> bool:
    return all(x <= y for x, y in zip(a, b))


def degrees_upto(bound: Degree) -> list[Degree]:
    return sorted(itertools.product(*(range(b + 1) for b in bound)), key=lambda n: (sum(n), n))


class KGraphError(Exception):
    pass


class StructuralError(KGraphError):
    """Malformed input: dangling endpoints, duplicate ids, bad colours."""


class DegreeError(KGraphError, ValueError):
    pass


class CompositionError(KGraphError, ValueError):
    pass


class MissingSquare(KGraphError):
    def __init__(self, pair):
        super().__init__(f"no factorisation square for {pair}")
        self.pair = pair


class WindowExhausted(KGraphError):
    """An exact computation needed structure beyond a truncation window."""

    def __init__(self, vertex, color):
        super().__init__(f"in-edges of colour {color} at {vertex} are cut by the window")
        self.vertex = vertex
        self.color = color


@dataclass(frozen=True)
class Edge:
    id: str
    color: int
    range: str
    source: str


@dataclass(frozen=True)
class Path:
    range: str
    source: str
    edges: tuple
    degree: Degree

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def __str__(self) -> str:
        return " ".join(self.edges) if self.edges else self.range

    def __repr__(self) -> str:
        return f"Path({self})"


class KGraph:
    """A finite (possibly window-truncated) k-graph.

    ``squares`` lists quadruples ``(a, b, c, d)`` meaning ``ab = cd`` with
    ``color(a) == color(d)`` and ``color(b) == color(c)``; either orientation
    is accepted.  ``incomplete`` lists ``(vertex, colour)`` slots whose
    in-edges are truncated.
    """

    def __init__(self, rank: int, vertices: Iterable[str], edges: Iterable[Edge],
                 squares: Iterable[tuple] = (), incomplete: Iterable[tuple] = (),
                 name: str = ""):
        if rank < 1:
            raise StructuralError("rank must be at least 1")
        self.rank = rank
        self.name = name
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise StructuralError("duplicate vertex id")
        vset = set(self.vertices)
        self.edges: dict[str, Edge] = {}
        for e in edges:
            if e.id in self.edges or e.id in vset:
                raise StructuralError(f"duplicate id {e.id!r}")
            if not 1 <= e.color <= rank:
                raise StructuralError(f"edge {e.id!r} has colour {e.color} outside 1..{rank}")
            for end in (e.range, e.source):
                if end not in vset:
                    raise StructuralError(f"edge {e.id!r} has dangling endpoint {end!r}")
            self.edges[e.id] = e
        self._in: dict[tuple, list[str]] = defaultdict(list)
        for e in sorted(self.edges.values(), key=lambda e: e.id):
            self._in[(e.range, e.color)].append(e.id)
        self.incomplete = frozenset(tuple(x) for x in incomplete)
        for v, c in self.incomplete:
            if v not in vset:
                raise StructuralError(f"boundary marker for unknown vertex {v!r}")
        self.squares: list[tuple] = []
        self._swap: dict[tuple, tuple] = {}
        for sq in squares:
            a, b, c, d = sq
            for x in sq:
                if x not in self.edges:
                    raise StructuralError(f"square {sq} names unknown edge {x!r}")
            if self.edges[a].color > self.edges[b].color:
                a, b, c, d = c, d, a, b
            self.squares.append((a, b, c, d))
            self._swap.setdefault((a, b), (c, d))
            self._swap.setdefault((c, d), (a, b))

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<KGraph{tag} rank={self.rank} |V|={len(self.vertices)} |E|={len(self.edges)}>"

    # -- skeleton access -------------------------------------------------
    def color(self, e: str) -> int:
        return self.edges[e].color

    def is_complete(self, v: str, color: int) -> bool:
        return (v, color) not in self.incomplete

    @property
    def is_windowed(self) -> bool:
        return bool(self.incomplete)

    def edges_into(self, v: str, color: int, strict: bool = True) -> list[str]:
        if strict and (v, color) in self.incomplete:
            raise WindowExhausted(v, color)
        return self._in.get((v, color), [])

    def vertex(self, v: str) -> Path:
        if v not in self._vertex_set():
            raise KeyError(v)
        return Path(v, v, (), zero(self.rank))

    def edge(self, e: str) -> Path:
        ed = self.edges[e]
        return Path(ed.range, ed.source, (e,), unit(self.rank, ed.color))

    def swap(self, a: str, b: str) -> tuple:
        try:
            return self._swap[(a, b)]
        except KeyError:
            raise MissingSquare((a, b)) from None

    # -- paths -----------------------------------------------------------
    def _reorder(self, seq: Sequence[str], target: Sequence[int]) -> list[str]:
        """Rewrite ``seq`` by square swaps so its colour word equals ``target``."""
        seq = list(seq)
        for i, want in enumerate(target):
            if self.edges[seq[i]].color == want:
                continue
            j = next(j for j in range(i + 1, len(seq)) if self.edges[seq[j]].color == want)
            while j > i:
                seq[j - 1], seq[j] = self.swap(seq[j - 1], seq[j])
                j -= 1
        return seq

    def path(self, edge_ids: Sequence[str] | str, start: str | None = None) -> Path:
        """Build a path from a composable edge sequence, in any colour order."""
        if isinstance(edge_ids, str):
            edge_ids = edge_ids.split()
        edge_ids = list(edge_ids)
        if not edge_ids:
            if start is None:
                raise ValueError("degree-0 path needs a vertex")
            return self.vertex(start)
        for e in edge_ids:
            if e not in self.edges:
                raise KeyError(e)
        for x, y in zip(edge_ids, edge_ids[1:]):
            if self.edges[x].source != self.edges[y].range:
                raise CompositionError(f"{x} then {y} is not composable")
        colors = sorted(self.edges[e].color for e in edge_ids)
        canon = self._reorder(edge_ids, colors)
        deg = [0] * self.rank
        for c in colors:
            deg[c - 1] += 1
        return Path(self.edges[canon[0]].range, self.edges[canon[-1]].source,
                    tuple(canon), tuple(deg))

    def parse_path(self, text: str) -> Path:
        """``v`` for a vertex, otherwise edge ids separated by spaces or dots."""
        text = text.strip()
        if text in self._vertex_set():
            return self.vertex(text)
        return self.path(text.replace(".", " ").split())

    def _vertex_set(self):
        vs = getattr(self, "_vset", None)
        if vs is None:
            vs = self._vset = frozenset(self.vertices)
        return vs

    def compose(self, lam: Path, mu: Path) -> Path:
        if lam.source != mu.range:
            raise CompositionError(f"s({lam}) = {lam.source} but r({mu}) = {mu.range}")
        if lam.is_vertex:
            return mu
        if mu.is_vertex:
            return lam
        return self.path(lam.edges + mu.edges)

    def _color_word(self, n: Degree) -> list[int]:
        return [c + 1 for c in range(self.rank) for _ in range(n[c])]

    def factorise(self, lam: Path, m: Degree) -> tuple[Path, Path]:
        """The unique ``(mu, nu)`` with ``lam = mu nu`` and ``d(mu) = m``."""
        m = tuple(m)
        if len(m) != self.rank or not deg_le(zero(self.rank), m) or not deg_le(m, lam.degree):
            raise DegreeError(f"cannot factorise degree {lam.degree} at {m}")
        rest = deg_sub(lam.degree, m)
        if not any(m):
            return self.vertex(lam.range), lam
        if not any(rest):
            return lam, self.vertex(lam.source)
        seq = self._reorder(lam.edges, self._color_word(m) + self._color_word(rest))
        cut = sum(m)
        return self.path(seq[:cut]), self.path(seq[cut:])

    def segment(self, lam: Path, a: Degree, b: Degree) -> Path:
        """``lam(a, b)``: the middle factor of degree ``b - a``."""
        _, tail = self.factorise(lam, a)
        mid, _ = self.factorise(tail, deg_sub(b, a))
        return mid

    def paths_from(self, v: str, n: Degree, strict: bool = True) -> list[Path]:
        """All paths in ``v Λ^n``.

        With ``strict`` the enumeration is exact or raises WindowExhausted;
        otherwise it lists whatever paths the window contains.
        """
        n = tuple(n)
        if len(n) != self.rank or any(c < 0 for c in n):
            raise DegreeError(f"bad degree {n}")
        if v not in self._vertex_set():
            raise KeyError(v)
        word = self._color_word(n)
        out: list[Path] = []

        def walk(cur: str, i: int, acc: list[str]):
            if i == len(word):
                out.append(Path(v, cur, tuple(acc), n))
                return
            for e in self.edges_into(cur, word[i], strict):
                acc.append(e)
                walk(self.edges[e].source, i + 1, acc)
                acc.pop()

        walk(v, 0, [])
        return out

    def all_paths(self, n: Degree, strict: bool = False) -> list[Path]:
        out = []
        for v in self.vertices:
            out.extend(self.paths_from(v, n, strict))
        return out

    def paths_upto(self, bound: Degree, strict: bool = False) -> list[Path]:
        out = []
        for n in degrees_upto(bound):
            out.extend(self.all_paths(n, strict))
        return out

    def restrict(self, vertices: Iterable[str], edges: Iterable[str], name: str = "") -> "KGraph":
        """The subgraph spanned by the given vertex and edge ids."""
        vs = [v for v in self.vertices if v in set(vertices)]
        es = set(edges)
        sq = [s for s in self.squares if all(x in es for x in s)]
        inc = [(v, c) for (v, c) in self.incomplete if v in set(vs)]
        return KGraph(self.rank, vs, [self.edges[e] for e in sorted(es)], sq, inc, name=name)


def validate_kgraph(g: KGraph) -> Report:
    """Check the square data and the row-finite/no-sources condition.

    Structural problems are raised by the KGraph constructor; this routine
    reports axiom failures with a concrete witness each.
    """
    rep = Report(f"validate {g.name or 'k-graph'}")
    E = g.edges

    # shape of each listed square
    bad_shape = None
    for a, b, c, d in g.squares:
        ok = (E[a].color != E[b].color and E[a].color == E[d].color and E[b].color == E[c].color
              and E[a].source == E[b].range and E[c].source == E[d].range
              and E[a].range == E[c].range and E[b].source == E[d].source)
        if not ok:
            bad_shape = (a, b, c, d)
            break
    rep.add("square shape", bad_shape is None, bad_shape,
            "colours alternate and outer range/source match")

    # bijection between ij-paths and ji-paths for each colour pair
    left = defaultdict(list)
    right = defaultdict(list)
    for sq in g.squares:
        left[sq[:2]].append(sq)
        right[sq[2:]].append(sq)
    missing = duplicate = None
    for e in sorted(E.values(), key=lambda e: e.id):
        for c2 in range(1, g.rank + 1):
            if c2 == e.color:
                continue
            for f in g._in.get((e.source, c2), []):
                pair = (e.id, f)
                table = left if e.color < c2 else right
                hits = table.get(pair, [])
                if not hits and missing is None:
                    missing = pair
                elif len(hits) > 1 and duplicate is None:
                    duplicate = pair
    rep.add("factorisation", missing is None, missing,
            "every two-colour path has a square")
    rep.add("square bijectivity", duplicate is None, duplicate,
            "no two-colour path is rewritten twice")

    # associativity of square rewriting on three colours
    triple_fail = None
    if g.rank >= 3 and missing is None and duplicate is None and bad_shape is None:
        triple_fail = _triple_failure(g)
    if g.rank >= 3:
        rep.add("triple consistency", triple_fail is None, triple_fail,
                "both rewrite orders agree on three-colour paths")

    # row-finite with no sources (only on slots the window has not cut)
    empty = None
    for v in g.vertices:
        for c in range(1, g.rank + 1):
            if g.is_complete(v, c) and not g._in.get((v, c)):
                empty = (v, c)
                break
        if empty:
            break
    rep.add("no sources", empty is None, empty, "every vΛ^{e_i} is nonempty")
    if g.incomplete:
        rep.add("window boundary", Status.UNTESTED, sorted(g.incomplete)[:10],
                f"{len(g.incomplete)} truncated (vertex, colour) slots")
    return rep


def _triple_failure(g: KGraph):
    E = g.edges
    for i, j, l in itertools.combinations(range(1, g.rank + 1), 3):
        for v in g.vertices:
            for a in g._in.get((v, i), []):
                for b in g._in.get((E[a].source, j), []):
                    for c in g._in.get((E[b].source, l), []):
                        x = [a, b, c]
                        y = [a, b, c]
                        try:
                            # order 1: swap (1,2), (2,3), (1,2)
                            x[0], x[1] = g.swap(x[0], x[1])
                            x[1], x[2] = g.swap(x[1], x[2])
                            x[0], x[1] = g.swap(x[0], x[1])
                            # order 2: swap (2,3), (1,2), (2,3)
                            y[1], y[2] = g.swap(y[1], y[2])
                            y[0], y[1] = g.swap(y[0], y[1])
                            y[1], y[2] = g.swap(y[1], y[2])
                        except MissingSquare as exc:
                            return {"path": (a, b, c), "missing": exc.pair}
                        if x != y:
                            return {"path": (a, b, c), "rewrites": (tuple(x), tuple(y))}
    return None


def single_vertex_graph(colors: Sequence[Sequence[str]], pair_maps: dict, name: str = "",
                        vertex: str = "v") -> KGraph:
    """Build a 1-vertex k-graph.

    ``colors[i]`` lists the edge ids of colour ``i+1``; ``pair_maps[(i, j)]``
    (1-based, i < j) maps ``(a, b) -> (c, d)`` meaning ``ab = cd``.
    """
    k = len(colors)
    edges = [Edge(e, i + 1, vertex, vertex) for i, es in enumerate(colors) for e in es]
    squares = []
    for (i, j), mp in pair_maps.items():
        for (a, b), (c, d) in mp.items():
            squares.append((a, b, c, d))
    return KGraph(k, [vertex], edges, squares, name=name)
