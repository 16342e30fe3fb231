"""Named example graphs and generated families used by tests, suites and the CLI."""
from __future__ import annotations

import itertools

from .actions import OUTSIDE, Action
from .kgraph import Edge, KGraph, single_vertex_graph
from .monoid import FreeAbelian

# θ(i,j) = (i',j') means f_i g_j = g_j' f_i'
THETA = {
    (1, 1): (2, 1), (2, 1): (1, 1), (3, 1): (3, 1),
    (1, 3): (2, 3), (2, 3): (1, 3), (3, 3): (3, 3),
    (1, 2): (1, 2), (2, 2): (2, 2), (3, 2): (3, 2),
}
IDENTITY_THETA = {(i, j): (i, j) for i in range(1, 4) for j in range(1, 4)}

# the functor c into N^2
C_FUNCTOR = {"f1": (0, 0), "f2": (0, 0), "f3": (1, 0),
             "g1": (0, 0), "g2": (0, 0), "g3": (0, 1)}


def f2theta(theta: dict | None = None, drop: tuple | None = None, name: str = "f2theta") -> KGraph:
    """The 1-vertex 2-graph with blue f1..f3, red g1..g3 and squares from θ.

    ``drop`` removes the square whose left side is the given pair.
    """
    theta = THETA if theta is None else theta
    if sorted(theta.values()) != sorted(theta):
        raise ValueError("θ must be a permutation of {1,2,3}^2")
    sq = {}
    for (i, j), (i2, j2) in theta.items():
        if drop == (f"f{i}", f"g{j}"):
            continue
        sq[(f"f{i}", f"g{j}")] = (f"g{j2}", f"f{i2}")
    return single_vertex_graph([["f1", "f2", "f3"], ["g1", "g2", "g3"]], {(1, 2): sq}, name=name)


def torus() -> KGraph:
    return single_vertex_graph([["f"], ["g"]], {(1, 2): {("f", "g"): ("g", "f")}}, name="torus")


def twovertex() -> KGraph:
    """A 2-vertex 2-graph: blue a1,a2 (u<-w) and b1,b2 (w<-u); red x (u<-w), y (w<-u)."""
    edges = [Edge("a1", 1, "u", "w"), Edge("a2", 1, "u", "w"),
             Edge("b1", 1, "w", "u"), Edge("b2", 1, "w", "u"),
             Edge("x", 2, "u", "w"), Edge("y", 2, "w", "u")]
    squares = [("a1", "y", "x", "b1"), ("a2", "y", "x", "b2"),
               ("b1", "x", "y", "a1"), ("b2", "x", "y", "a2")]
    return KGraph(2, ["u", "w"], edges, squares, name="twovertex")


def two_tori() -> KGraph:
    """Two disjoint copies of the torus graph."""
    edges, squares = [], []
    for c in ("1", "2"):
        edges += [Edge("f" + c, 1, "v" + c, "v" + c), Edge("g" + c, 2, "v" + c, "v" + c)]
        squares.append(("f" + c, "g" + c, "g" + c, "f" + c))
    return KGraph(2, ["v1", "v2"], edges, squares, name="two-tori")


def cycle2() -> KGraph:
    """The strongly connected 1-graph u -> w -> u."""
    return KGraph(1, ["u", "w"], [Edge("a", 1, "u", "w"), Edge("b", 1, "w", "u")], name="cycle2")


def swap_action(g: KGraph | None = None) -> Action:
    """Z/2 swapping the two components of :func:`two_tori`."""
    from .monoid import cyclic

    g = g or two_tori()
    flip = {"v1": "v2", "v2": "v1", "f1": "f2", "f2": "f1", "g1": "g2", "g2": "g1"}
    return Action.from_maps(cyclic(2), g, {1: flip}, name="swap")


# -- Δ_k ------------------------------------------------------------------

def _coords(x):
    return ",".join(str(c) for c in x)


def _parse_coords(s):
    return tuple(int(c) for c in s.split(","))


def delta_window(k: int, N: int) -> KGraph:
    """Δ_k restricted to vertices in [-N, N]^k.

    Vertex ``m`` is ``"m1,...,mk"``; the edge of colour i from ``m + e_i`` to
    ``m`` is ``"e{i}@m"``.
    """
    box = list(itertools.product(range(-N, N + 1), repeat=k))
    inside = set(box)
    verts = [_coords(m) for m in box]
    edges, squares, incomplete = [], [], []

    def step(m, i):
        return tuple(c + (1 if j == i else 0) for j, c in enumerate(m))

    for m in box:
        for i in range(k):
            n = step(m, i)
            if n in inside:
                edges.append(Edge(f"e{i + 1}@{_coords(m)}", i + 1, _coords(m), _coords(n)))
            else:
                incomplete.append((_coords(m), i + 1))
    have = {e.id for e in edges}
    for m in box:
        for i, j in itertools.combinations(range(k), 2):
            a = f"e{i + 1}@{_coords(m)}"
            b = f"e{j + 1}@{_coords(step(m, i))}"
            c = f"e{j + 1}@{_coords(m)}"
            d = f"e{i + 1}@{_coords(step(m, j))}"
            if all(x in have for x in (a, b, c, d)):
                squares.append((a, b, c, d))
    return KGraph(k, verts, edges, squares, incomplete, name=f"delta{k}[{N}]")


def delta_translation(g: KGraph) -> Action:
    """α_p(m, n) = (m + p, n + p) for p in N^k, partial on the window."""
    k = g.rank
    monoid = FreeAbelian(k)
    vset = g._vertex_set()

    def split(x):
        if "@" in x:
            tag, m = x.split("@")
            return tag, _parse_coords(m)
        return None, _parse_coords(x)

    def join(tag, m):
        return _coords(m) if tag is None else f"{tag}@{_coords(m)}"

    def exists(x):
        return x in vset or x in g.edges

    def step(p, x):
        tag, m = split(x)
        y = join(tag, monoid.mul(m, p))
        return y if exists(y) else None

    def pre(p, x):
        tag, m = split(x)
        y = join(tag, monoid.sub(m, p))
        # Δ_k is translation invariant, so the preimage always exists globally
        return y if exists(y) else OUTSIDE

    return Action(monoid, g, step, pre, name="translation")
