"""Bounded evidence for aperiodicity and a windowed cofinality check.

Neither routine decides the global property; both report what a finite
search found.
"""
from __future__ import annotations

import itertools
from typing import Iterator

from .kgraph import KGraph, Path, deg_add, deg_join, degrees_upto
from .report import Record, Report, Status


def iter_paths(g: KGraph, v: str, n) -> Iterator[Path]:
    """Lazy version of ``g.paths_from(v, n)``."""
    word = g._color_word(tuple(n))

    def walk(cur, i, acc):
        if i == len(word):
            yield Path(v, cur, tuple(acc), tuple(n))
            return
        for e in g.edges_into(cur, word[i]):
            acc.append(e)
            yield from walk(g.edges[e].source, i + 1, acc)
            acc.pop()

    yield from walk(v, 0, [])


def segments_differ(g: KGraph, lam: Path, m, n, depth) -> tuple[Path, Path] | None:
    a = g.segment(lam, m, deg_add(m, depth))
    b = g.segment(lam, n, deg_add(n, depth))
    return (a, b) if a != b else None


def period_candidates(bound) -> list[tuple]:
    degs = degrees_upto(tuple(bound))
    return [(m, n) for m, n in itertools.combinations(degs, 2)]


def find_period_witness(g: KGraph, m, n, depth) -> Path | None:
    total = deg_add(deg_join(m, n), depth)
    for v in g.vertices:
        for lam in iter_paths(g, v, total):
            if segments_differ(g, lam, m, n, depth):
                return lam
    return None


def aperiodicity_search(g: KGraph, bound, depth) -> Report:
    """For each (m, n) ≤ bound with m ≠ n, look for λ of degree (m ∨ n) + depth
    whose segments λ(m, m+depth) and λ(n, n+depth) differ."""
    bound, depth = tuple(bound), tuple(depth)
    rep = Report(f"aperiodicity evidence for {g.name or 'graph'}")
    found = 0
    for m, n in period_candidates(bound):
        label = f"period {m} vs {n}"
        lam = find_period_witness(g, m, n, depth)
        if lam is None:
            rep.add(label, Status.UNTESTED, None, "periodic-on-window")
            continue
        a, b = segments_differ(g, lam, m, n, depth)
        rep.add(label, Status.PASS, {"path": str(lam), "segments": (str(a), str(b))}, "witness found")
        found += 1
    # every witness must re-verify from scratch
    bad = None
    for r in rep.records:
        if r.status is Status.PASS:
            m, n = _candidate_of(r.check)
            lam = g.path(r.witness["path"].split())
            if lam.degree != deg_add(deg_join(m, n), depth) or not segments_differ(g, lam, m, n, depth):
                bad = r.check
                break
    rep.add("witnesses re-verify", bad is None, bad, f"{found} witnesses")
    return rep


def _candidate_of(label: str):
    _, rest = label.split(" ", 1)
    m, n = rest.split(" vs ")
    return tuple(int(x) for x in m.strip("()").split(",") if x), tuple(int(x) for x in n.strip("()").split(",") if x)


def cofinality_check(g: KGraph, depth) -> Report:
    """Single-vertex graphs pass outright; otherwise every vertex must reach
    every other one along paths of degree ≤ depth (a sufficient condition)."""
    rep = Report(f"cofinality of {g.name or 'graph'}")
    if len(g.vertices) == 1:
        rep.add("cofinal", Status.PASS, None, "single vertex: trivially cofinal")
        return rep
    for v in g.vertices:
        reach = set()
        for n in degrees_upto(tuple(depth)):
            reach |= {lam.source for lam in g.paths_from(v, n, strict=False)}
        missing = [w for w in g.vertices if w not in reach]
        if missing:
            rep.records.append(Record("cofinal", Status.FAIL, {"from": v, "unreachable": missing[0]},
                                      f"depth {tuple(depth)}"))
            return rep
    rep.add("cofinal", Status.PASS, None, f"every vertex reaches every vertex within depth {tuple(depth)}")
    return rep
