"""Groups the library manipulates.

Elements are plain hashable Python values (ints, tuples, small frozen
records); a ``Group`` object owns the operations on them.  Equality of
elements is structural equality of canonical forms, so values from two
handles to the same group compare equal.

Concrete groups: cyclic, symmetric, the integers, free groups (reduced
words), Cayley-table groups, finitely supported direct sums indexed by a
group, and wreath products built from a lamp group and a base group.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Iterator


class Group:
    """Interface: identity/mul/inv plus a deterministic total ordering key.

    ``key`` must be injective on any finite window and stable across runs;
    it fixes enumeration order everywhere downstream.  ``elements`` is only
    available for finite groups.
    """

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def key(self, a):
        raise NotImplementedError

    def elements(self) -> Iterator:
        raise NotImplementedError(f"{type(self).__name__} is not finitely enumerable")

    def encode(self, a):
        """JSON-compatible canonical form of an element."""
        raise NotImplementedError

    def decode(self, data):
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    def sort(self, els: Iterable) -> tuple:
        return tuple(sorted(els, key=self.key))

    def is_identity(self, a) -> bool:
        return a == self.identity()


@dataclass(frozen=True)
class CyclicGroup(Group):
    n: int

    def identity(self):
        return 0

    def mul(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return (-a) % self.n

    def key(self, a):
        return a

    def elements(self):
        return iter(range(self.n))

    def encode(self, a):
        return a

    def decode(self, data):
        if not isinstance(data, int) or not 0 <= data < self.n:
            raise ValueError(f"not an element of cyclic({self.n}): {data!r}")
        return data

    def descriptor(self):
        return {"kind": "cyclic", "n": self.n}


@dataclass(frozen=True)
class SymmetricGroup(Group):
    """Permutations of {0,...,k-1} as tuples, composed right-to-left."""

    k: int

    def identity(self):
        return tuple(range(self.k))

    def mul(self, a, b):
        return tuple(a[x] for x in b)

    def inv(self, a):
        out = [0] * self.k
        for i, x in enumerate(a):
            out[x] = i
        return tuple(out)

    def key(self, a):
        return a

    def elements(self):
        return itertools.permutations(range(self.k))

    def encode(self, a):
        return list(a)

    def decode(self, data):
        a = tuple(data)
        if sorted(a) != list(range(self.k)):
            raise ValueError(f"not an element of symmetric({self.k}): {data!r}")
        return a

    def descriptor(self):
        return {"kind": "symmetric", "k": self.k}


@dataclass(frozen=True)
class IntegerGroup(Group):
    def identity(self):
        return 0

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def key(self, a):
        return a

    def encode(self, a):
        return a

    def decode(self, data):
        if not isinstance(data, int) or isinstance(data, bool):
            raise ValueError(f"not an integer: {data!r}")
        return data

    def descriptor(self):
        return {"kind": "integers"}


@dataclass(frozen=True)
class FreeGroup(Group):
    """Free group of the given rank.

    Elements are reduced words: tuples of nonzero letters, letter ``+i``
    standing for generator ``i-1`` and ``-i`` for its inverse.  Multiplying
    always reduces, so equality is structural.
    """

    rank: int

    def identity(self):
        return ()

    def generator(self, i: int):
        if not 0 <= i < self.rank:
            raise ValueError(f"no generator {i} in rank-{self.rank} free group")
        return (i + 1,)

    def mul(self, a, b):
        out = list(a)
        for letter in b:
            if out and out[-1] == -letter:
                out.pop()
            else:
                out.append(letter)
        return tuple(out)

    def inv(self, a):
        return tuple(-letter for letter in reversed(a))

    def key(self, a):
        return (len(a), a)

    def ball(self, radius: int) -> tuple:
        """All reduced words of length <= radius, in key order."""
        words = {()}
        frontier = [()]
        letters = [i for i in range(1, self.rank + 1)] + [-i for i in range(1, self.rank + 1)]
        for _ in range(radius):
            frontier = [
                w
                for prev in frontier
                for letter in letters
                if len(w := self.mul(prev, (letter,))) == len(prev) + 1
            ]
            words.update(frontier)
        return self.sort(words)

    def encode(self, a):
        return list(a)

    def decode(self, data):
        word = tuple(data)
        for x, y in zip(word, word[1:]):
            if x == -y:
                raise ValueError(f"word not reduced: {data!r}")
        for letter in word:
            if not isinstance(letter, int) or letter == 0 or abs(letter) > self.rank:
                raise ValueError(f"bad letter {letter!r} for rank {self.rank}")
        return word

    def descriptor(self):
        return {"kind": "free", "rank": self.rank}


@dataclass(frozen=True)
class TableGroup(Group):
    """Finite group given by its Cayley table: table[a][b] = a*b."""

    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.table)
        full = set(range(n))
        for i, row in enumerate(self.table):
            if len(row) != n or set(row) != full:
                raise ValueError(f"invalid Cayley table: row {i} is not a bijection")
        for j in range(n):
            if {row[j] for row in self.table} != full:
                raise ValueError(f"invalid Cayley table: column {j} is not a bijection")
        self._identity_index  # force identity lookup so bad tables fail fast

    @cached_property
    def _identity_index(self) -> int:
        n = len(self.table)
        for e in range(n):
            if all(self.table[e][x] == x for x in range(n)) and all(
                self.table[x][e] == x for x in range(n)
            ):
                return e
        raise ValueError("invalid Cayley table: no two-sided identity")

    def identity(self):
        return self._identity_index

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        e = self._identity_index
        for b in range(len(self.table)):
            if self.table[a][b] == e:
                return b
        raise ValueError(f"no inverse for {a}")  # unreachable: rows are bijections

    def key(self, a):
        return a

    def elements(self):
        return iter(range(len(self.table)))

    def encode(self, a):
        return a

    def decode(self, data):
        if not isinstance(data, int) or not 0 <= data < len(self.table):
            raise ValueError(f"not an element index: {data!r}")
        return data

    def descriptor(self):
        return {"kind": "table", "table": [list(r) for r in self.table]}


@dataclass(frozen=True)
class FinSuppMap:
    """Finitely supported map from a base group's index set into a lamp group.

    Canonical form: entries sorted by the index group's key, values never the
    lamp identity.  Construct through ``DirectSum.make`` rather than directly.
    """

    entries: tuple[tuple[Any, Any], ...]

    def support(self) -> tuple:
        return tuple(x for x, _ in self.entries)

    def get(self, x):
        for y, g in self.entries:
            if y == x:
                return g
        return None

    def as_dict(self) -> dict:
        return dict(self.entries)

    def is_identity(self) -> bool:
        return not self.entries


@dataclass(frozen=True)
class DirectSum(Group):
    """Finitely supported maps index -> lamp under pointwise multiplication."""

    lamp: Group
    index: Group

    def make(self, mapping) -> FinSuppMap:
        items = mapping.items() if hasattr(mapping, "items") else mapping
        out = {}
        for x, g in items:
            if x in out:
                raise ValueError(f"duplicate index {x!r}")
            if not self.lamp.is_identity(g):
                out[x] = g
        return FinSuppMap(tuple(sorted(out.items(), key=lambda item: self.index.key(item[0]))))

    def delta(self, x, g) -> FinSuppMap:
        """The map supported at the single index x with value g."""
        return self.make({x: g})

    def identity(self):
        return FinSuppMap(())

    def mul(self, a: FinSuppMap, b: FinSuppMap) -> FinSuppMap:
        out = dict(a.entries)
        for x, g in b.entries:
            combined = self.lamp.mul(out[x], g) if x in out else g
            if self.lamp.is_identity(combined):
                out.pop(x, None)
            else:
                out[x] = combined
        return self.make(out)

    def inv(self, a: FinSuppMap) -> FinSuppMap:
        return self.make({x: self.lamp.inv(g) for x, g in a.entries})

    def shift(self, h, a: FinSuppMap) -> FinSuppMap:
        """Translate the support: the result maps h*x to a(x).

        Equivalently result(y) = a(h^{-1} y); this is the index-shift action
        of the base group by automorphisms.
        """
        return self.make({self.index.mul(h, x): g for x, g in a.entries})

    def key(self, a: FinSuppMap):
        return tuple((self.index.key(x), self.lamp.key(g)) for x, g in a.entries)

    def elements(self):
        idx = tuple(self.index.sort(self.index.elements()))
        for values in itertools.product(tuple(self.lamp.elements()), repeat=len(idx)):
            yield self.make(zip(idx, values))

    def encode(self, a: FinSuppMap):
        return [[self.index.encode(x), self.lamp.encode(g)] for x, g in a.entries]

    def decode(self, data):
        return self.make([(self.index.decode(x), self.lamp.decode(g)) for x, g in data])

    def descriptor(self):
        return {"kind": "direct-sum", "lamp": self.lamp.descriptor(), "index": self.index.descriptor()}


@dataclass(frozen=True)
class WreathElement:
    """A lamp configuration together with a base-group element."""

    left: FinSuppMap
    right: Any


@dataclass(frozen=True)
class WreathProduct(Group):
    """Wreath product of a lamp group by a base group.

    The product twists the right factor's lamps by the left factor's base
    element: (f, h)(f', h') = (f * shift_h(f'), h h').
    """

    lamp: Group
    base: Group

    @cached_property
    def lamps(self) -> DirectSum:
        return DirectSum(self.lamp, self.base)

    def element(self, mapping, h) -> WreathElement:
        left = mapping if isinstance(mapping, FinSuppMap) else self.lamps.make(mapping)
        return WreathElement(left, h)

    def identity(self):
        return WreathElement(self.lamps.identity(), self.base.identity())

    def mul(self, a: WreathElement, b: WreathElement) -> WreathElement:
        return WreathElement(
            self.lamps.mul(a.left, self.lamps.shift(a.right, b.left)),
            self.base.mul(a.right, b.right),
        )

    def inv(self, a: WreathElement) -> WreathElement:
        h_inv = self.base.inv(a.right)
        return WreathElement(self.lamps.shift(h_inv, self.lamps.inv(a.left)), h_inv)

    def projections(self, a: WreathElement) -> tuple[FinSuppMap, Any]:
        """Split into (lamp configuration, base element).

        The base projection is a homomorphism; the lamp projection is not.
        """
        return a.left, a.right

    def key(self, a: WreathElement):
        return (self.base.key(a.right), self.lamps.key(a.left))

    def elements(self):
        for h in self.base.sort(self.base.elements()):
            for f in self.lamps.elements():
                yield WreathElement(f, h)

    def encode(self, a: WreathElement):
        return {"left": self.lamps.encode(a.left), "right": self.base.encode(a.right)}

    def decode(self, data):
        return WreathElement(self.lamps.decode(data["left"]), self.base.decode(data["right"]))

    def descriptor(self):
        return {"kind": "wreath", "lamp": self.lamp.descriptor(), "base": self.base.descriptor()}


def cyclic(n: int) -> CyclicGroup:
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    return CyclicGroup(n)


def symmetric(k: int) -> SymmetricGroup:
    if k < 1:
        raise ValueError("symmetric group degree must be >= 1")
    return SymmetricGroup(k)


def integers() -> IntegerGroup:
    return IntegerGroup()


def free(rank: int) -> FreeGroup:
    if rank < 1:
        raise ValueError("free group rank must be >= 1")
    return FreeGroup(rank)


def finite_from_table(table) -> TableGroup:
    return TableGroup(tuple(tuple(row) for row in table))


def wreath_product(lamp: Group, base: Group) -> WreathProduct:
    return WreathProduct(lamp, base)


_KINDS = {
    "cyclic": lambda d: cyclic(d["n"]),
    "symmetric": lambda d: symmetric(d["k"]),
    "integers": lambda d: integers(),
    "free": lambda d: free(d["rank"]),
    "table": lambda d: finite_from_table(d["table"]),
    "direct-sum": lambda d: DirectSum(group_from_descriptor(d["lamp"]), group_from_descriptor(d["index"])),
    "wreath": lambda d: WreathProduct(group_from_descriptor(d["lamp"]), group_from_descriptor(d["base"])),
}


def group_from_descriptor(desc: dict) -> Group:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ValueError(f"bad group descriptor: {desc!r}")
    kind = desc["kind"]
    if kind not in _KINDS:
        raise ValueError(f"unknown group kind {kind!r}")
    return _KINDS[kind](desc)
