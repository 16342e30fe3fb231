"""Monoids that act on k-graphs: N^d, Z^d and finite groups given by a Cayley table.

Elements of the lattice kinds are integer tuples; elements of a finite group are
indices into its Cayley table (index 0 need not be the identity).
"""
from __future__ import annotations

import itertools
from collections import deque


class GroupError(ValueError):
    pass


class Monoid:
    kind = "abstract"
    is_group = False

    def mul(self, a, b):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def prod(self, items):
        out = self.one
        for x in items:
            out = self.mul(out, x)
        return out

    def contains(self, x) -> bool:
        raise NotImplementedError

    @property
    def generators(self) -> tuple:
        raise NotImplementedError

    def word(self, t) -> list:
        """A list of generators whose product (left to right) is ``t``."""
        raise NotImplementedError

    def ore_pair(self, t, u):
        """Return ``(x, y)`` with ``x*t == y*u``."""
        raise NotImplementedError

    def elements(self, bound=None) -> list:
        """Elements inside the box ``bound`` (ignored for finite groups)."""
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def key(self, x):
        return x


class _Lattice(Monoid):
    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("lattice dimension must be >= 1")
        self.dim = dim

    def __eq__(self, other):
        return type(self) is type(other) and self.dim == other.dim

    def __hash__(self):
        return hash((self.kind, self.dim))

    def __repr__(self):
        return f"{self.kind} {self.dim}"

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    @property
    def one(self):
        return (0,) * self.dim

    def unit(self, i: int):
        return tuple(1 if j == i else 0 for j in range(self.dim))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def le(self, a, b) -> bool:
        return all(x <= y for x, y in zip(a, b))

    def join(self, a, b):
        return tuple(max(x, y) for x, y in zip(a, b))

    def parse(self, text: str):
        vals = tuple(int(p) for p in text.replace(" ", "").split(","))
        if len(vals) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {text!r}")
        if not self.contains(vals):
            raise ValueError(f"{text!r} is not an element of {self!r}")
        return vals

    def format(self, x) -> str:
        return ",".join(str(c) for c in x)


class FreeAbelian(_Lattice):
    """N^d under addition."""

    kind = "NAT"

    def contains(self, x) -> bool:
        return isinstance(x, tuple) and len(x) == self.dim and all(c >= 0 for c in x)

    @property
    def generators(self):
        return tuple(self.unit(i) for i in range(self.dim))

    def word(self, t):
        out = []
        for i, c in enumerate(t):
            out.extend([self.unit(i)] * c)
        return out

    def ore_pair(self, t, u):
        j = self.join(t, u)
        return self.sub(j, t), self.sub(j, u)

    def elements(self, bound=None):
        if bound is None:
            raise ValueError("N^d needs a window bound to enumerate elements")
        bound = _box(bound, self.dim)
        els = list(itertools.product(*(range(b + 1) for b in bound)))
        return sorted(els, key=lambda x: (sum(x), x))

    def envelope(self) -> "IntegerLattice":
        return IntegerLattice(self.dim)


class IntegerLattice(_Lattice):
    """Z^d under addition."""

    kind = "INT"
    is_group = True

    def contains(self, x) -> bool:
        return isinstance(x, tuple) and len(x) == self.dim

    def inv(self, a):
        return tuple(-c for c in a)

    @property
    def generators(self):
        units = [self.unit(i) for i in range(self.dim)]
        return tuple(units + [self.inv(u) for u in units])

    def word(self, t):
        out = []
        for i, c in enumerate(t):
            g = self.unit(i) if c >= 0 else self.inv(self.unit(i))
            out.extend([g] * abs(c))
        return out

    def ore_pair(self, t, u):
        return u, t

    def elements(self, bound=None):
        if bound is None:
            raise ValueError("Z^d needs a window bound to enumerate elements")
        bound = _box(bound, self.dim)
        els = list(itertools.product(*(range(-b, b + 1) for b in bound)))
        return sorted(els, key=lambda x: (sum(abs(c) for c in x), x))

    def envelope(self) -> "IntegerLattice":
        return self


def _box(bound, dim):
    if isinstance(bound, int):
        return (bound,) * dim
    bound = tuple(bound)
    if len(bound) != dim:
        raise ValueError(f"window {bound} does not have {dim} coordinates")
    return bound


class FiniteGroup(Monoid):
    """A finite group given by its Cayley table ``table[a][b] = a*b``."""

    kind = "FINGROUP"
    is_group = True

    def __init__(self, table, name: str = "cayley", generators=None):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.name = name
        self.order = n = len(self.table)
        if n == 0 or any(len(row) != n for row in self.table):
            raise GroupError("Cayley table must be square and nonempty")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise GroupError("Cayley table entry out of range")
        ids = [e for e in range(n)
               if all(self.table[e][a] == a and self.table[a][e] == a for a in range(n))]
        if len(ids) != 1:
            raise GroupError("Cayley table has no two-sided identity")
        self._one = ids[0]
        for a, b, c in itertools.product(range(n), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise GroupError(f"not associative at {(a, b, c)}")
        self._inv = {}
        for a in range(n):
            inv = [b for b in range(n) if self.table[a][b] == self._one]
            if len(inv) != 1 or self.table[inv[0]][a] != self._one:
                raise GroupError(f"element {a} has no inverse")
            self._inv[a] = inv[0]
        gens = tuple(generators) if generators is not None else tuple(
            a for a in range(n) if a != self._one)
        self._gens = gens
        self._words = self._bfs_words()

    def _bfs_words(self):
        words = {self._one: []}
        queue = deque([self._one])
        while queue:
            a = queue.popleft()
            for g in self._gens:
                b = self.table[a][g]
                if b not in words:
                    words[b] = words[a] + [g]
                    queue.append(b)
        if len(words) != self.order:
            raise GroupError("generators do not generate the group")
        return words

    def __repr__(self):
        return f"FINGROUP {self.name}"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def mul(self, a, b):
        return self.table[a][b]

    @property
    def one(self):
        return self._one

    def inv(self, a):
        return self._inv[a]

    def contains(self, x) -> bool:
        return isinstance(x, int) and 0 <= x < self.order

    @property
    def generators(self):
        return self._gens

    def word(self, t):
        return list(self._words[t])

    def ore_pair(self, t, u):
        # x t = y u with x = t^-1, y = u^-1 (both sides are the identity)
        return self.inv(t), self.inv(u)

    def elements(self, bound=None):
        return list(range(self.order))

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a]
                   for a in range(self.order) for b in range(self.order))

    def parse(self, text: str):
        x = int(text.strip())
        if not self.contains(x):
            raise ValueError(f"{text!r} is not an element of {self!r}")
        return x

    def format(self, x) -> str:
        return str(x)

    def envelope(self):
        return self


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)],
                       name=f"Z{n}", generators=[1 % n] if n > 1 else [])


def klein() -> FiniteGroup:
    els = [(a, b) for a in range(2) for b in range(2)]
    idx = {e: i for i, e in enumerate(els)}
    table = [[idx[((x[0] + y[0]) % 2, (x[1] + y[1]) % 2)] for y in els] for x in els]
    return FiniteGroup(table, name="Z2xZ2")


def symmetric3() -> FiniteGroup:
    """S3 on permutations of (0,1,2) listed in lexicographic order; 0 is the identity."""
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}

    def compose(p, q):  # (p*q)(i) = p(q(i))
        return tuple(p[q[i]] for i in range(3))

    table = [[idx[compose(p, q)] for q in perms] for p in perms]
    return FiniteGroup(table, name="S3")


def group_by_name(name: str) -> FiniteGroup:
    if name == "S3":
        return symmetric3()
    if name == "Z2xZ2":
        return klein()
    if name.startswith("Z") and name[1:].isdigit():
        return cyclic(int(name[1:]))
    raise GroupError(f"unknown finite group {name!r}")


def monoid_from_text(text: str, cayley=None) -> Monoid:
    """Parse ``NAT d``, ``INT d`` or ``FINGROUP <name>``."""
    parts = text.split()
    if len(parts) != 2:
        raise ValueError(f"bad monoid description {text!r}")
    kind, arg = parts[0].upper(), parts[1]
    if kind == "NAT":
        return FreeAbelian(int(arg))
    if kind == "INT":
        return IntegerLattice(int(arg))
    if kind == "FINGROUP":
        if arg.lower() == "cayley":
            if cayley is None:
                raise ValueError("FINGROUP cayley needs a CAYLEY section")
            return FiniteGroup(cayley)
        return group_by_name(arg)
    raise ValueError(f"unknown monoid kind {parts[0]!r}")


def monoid_to_text(m: Monoid) -> str:
    if isinstance(m, _Lattice):
        return f"{m.kind} {m.dim}"
    return f"FINGROUP {m.name}"
