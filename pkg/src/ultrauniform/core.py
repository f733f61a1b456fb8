"""Finite carriers, bit-matrix relations, and partitions.

Points of an n-point carrier are the indices 0..n-1, so subsets of the
carrier fit in int bitmasks and a relation fits in one mask per row.
All values are immutable after construction.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence


class CarrierMismatch(ValueError):
    """Two structures that must live on the same carrier do not."""


class ValidationError(ValueError):
    """A structural precondition failed; carries a report when one exists."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


def mask_of(points: Iterable[int]) -> int:
    """Pack point indices into a bitmask."""
    m = 0
    for x in points:
        m |= 1 << x
    return m


def bits(mask: int) -> Iterator[int]:
    """Yield the set bits of a mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Carrier:
    """An n-point set; labels are presentation only and never affect equality."""

    __slots__ = ("n", "labels")

    def __init__(self, n: int, labels: Optional[Sequence[str]] = None):
        if not isinstance(n, int) or n < 1:
            raise ValueError("carrier needs a positive number of points")
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise ValueError("need exactly one label per point")
            if len(set(labels)) != n:
                raise ValueError("labels must be pairwise distinct")
        self.n = n
        self.labels = labels

    @property
    def points(self) -> range:
        return range(self.n)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Carrier) and self.n == other.n

    def __hash__(self) -> int:
        return hash(("Carrier", self.n))

    def __repr__(self) -> str:
        return f"Carrier({self.n})"


def same_carrier(first, *rest) -> Carrier:
    """Return the shared carrier of the given structures or raise."""
    carrier = first.carrier
    for other in rest:
        if other.carrier != carrier:
            raise CarrierMismatch(
                f"carriers differ: {carrier!r} vs {other.carrier!r}"
            )
    return carrier


class Relation:
    """Binary relation on a carrier, one successor bitmask per point."""

    __slots__ = ("carrier", "rows")

    def __init__(self, carrier: Carrier, rows: Iterable[int]):
        rows = tuple(rows)
        if len(rows) != carrier.n:
            raise ValueError("need exactly one row per point")
        full = carrier.full_mask
        for i, row in enumerate(rows):
            if row & ~full:
                raise ValueError(f"row {i} mentions points outside the carrier")
        self.carrier = carrier
        self.rows = rows

    @classmethod
    def from_pairs(cls, carrier: Carrier, pairs: Iterable[tuple[int, int]]) -> "Relation":
        rows = [0] * carrier.n
        for x, y in pairs:
            if not (0 <= x < carrier.n and 0 <= y < carrier.n):
                raise ValueError(f"pair ({x},{y}) outside carrier of size {carrier.n}")
            rows[x] |= 1 << y
        return cls(carrier, rows)

    @classmethod
    def identity(cls, carrier: Carrier) -> "Relation":
        return cls(carrier, (1 << x for x in carrier.points))

    @classmethod
    def full(cls, carrier: Carrier) -> "Relation":
        return cls(carrier, (carrier.full_mask,) * carrier.n)

    @classmethod
    def empty(cls, carrier: Carrier) -> "Relation":
        return cls(carrier, (0,) * carrier.n)

    @property
    def n(self) -> int:
        return self.carrier.n

    def has(self, x: int, y: int) -> bool:
        return bool(self.rows[x] >> y & 1)

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return self.has(*pair)

    def pairs(self) -> Iterator[tuple[int, int]]:
        """Yield the member pairs in lexicographic order."""
        for x, row in enumerate(self.rows):
            for y in bits(row):
                yield (x, y)

    def neighborhood(self, x: int) -> int:
        """The slice D[x] = {y | (x,y) in D} as a bitmask."""
        return self.rows[x]

    def __and__(self, other: "Relation") -> "Relation":
        carrier = same_carrier(self, other)
        return Relation(carrier, (a & b for a, b in zip(self.rows, other.rows)))

    def __or__(self, other: "Relation") -> "Relation":
        carrier = same_carrier(self, other)
        return Relation(carrier, (a | b for a, b in zip(self.rows, other.rows)))

    def issubset(self, other: "Relation") -> bool:
        same_carrier(self, other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def is_reflexive(self) -> bool:
        return all(row >> x & 1 for x, row in enumerate(self.rows))

    def is_symmetric(self) -> bool:
        return self.rows == inverse(self).rows

    def is_transitive(self) -> bool:
        return compose(self, self).issubset(self)

    def count(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def to_json(self) -> dict:
        return {"n": self.n, "pairs": [list(p) for p in self.pairs()]}

    @classmethod
    def from_json(cls, obj: dict) -> "Relation":
        carrier = Carrier(_expect_int(obj, "n"))
        pairs = obj.get("pairs")
        if not isinstance(pairs, list):
            raise ValueError("field 'pairs' must be a list of [i, j] pairs")
        checked = []
        for k, p in enumerate(pairs):
            if not (isinstance(p, list) and len(p) == 2):
                raise ValueError(f"field 'pairs[{k}]' must be a two-element list")
            checked.append((p[0], p[1]))
        return cls.from_pairs(carrier, checked)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Relation)
            and self.n == other.n
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"Relation({self.n}, {sorted(self.pairs())})"


def compose(r: Relation, s: Relation) -> Relation:
    """Relational composition: (x,y) iff some z has (x,z) in r and (z,y) in s."""
    carrier = same_carrier(r, s)
    srows = s.rows
    out = []
    for row in r.rows:
        acc = 0
        m = row
        while m:
            low = m & -m
            acc |= srows[low.bit_length() - 1]
            m ^= low
        out.append(acc)
    return Relation(carrier, out)


def inverse(r: Relation) -> Relation:
    """Swap the two coordinates (matrix transpose)."""
    rows = [0] * r.n
    for x, row in enumerate(r.rows):
        bit = 1 << x
        for y in bits(row):
            rows[y] |= bit
    return Relation(r.carrier, rows)


def is_equivalence(r: Relation) -> bool:
    return r.is_reflexive() and r.is_symmetric() and r.is_transitive()


class UnionFind:
    """Disjoint sets over 0..n-1 with path compression and union by size."""

    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]


def eq_closure(r: Relation) -> Relation:
    """Least equivalence relation containing r (union-find over its pairs)."""
    uf = UnionFind(r.n)
    for x, row in enumerate(r.rows):
        for y in bits(row):
            uf.union(x, y)
    class_mask = {}
    for x in range(r.n):
        root = uf.find(x)
        class_mask[root] = class_mask.get(root, 0) | (1 << x)
    return Relation(r.carrier, (class_mask[uf.find(x)] for x in range(r.n)))


class Partition:
    """Disjoint nonempty blocks covering the carrier, in canonical order.

    Canonical order: blocks sorted by their minimum element, elements
    ascending, so structural equality is mathematical equality.
    """

    __slots__ = ("carrier", "blocks")

    def __init__(self, carrier: Carrier, blocks: Iterable[Iterable[int]]):
        masks = []
        seen = 0
        for block in blocks:
            m = mask_of(block)
            if m == 0:
                raise ValueError("empty block")
            if m & ~carrier.full_mask:
                raise ValueError("block mentions points outside the carrier")
            if m & seen:
                raise ValueError("blocks overlap")
            seen |= m
            masks.append(m)
        if seen != carrier.full_mask:
            raise ValueError("blocks do not cover the carrier")
        masks.sort(key=lambda m: m & -m)
        self.carrier = carrier
        self.blocks = tuple(tuple(bits(m)) for m in masks)

    @property
    def n(self) -> int:
        return self.carrier.n

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask_of(b) for b in self.blocks)

    def block_of(self, x: int) -> tuple[int, ...]:
        for block in self.blocks:
            if x in block:
                return block
        raise ValueError(f"point {x} not on the carrier")

    def to_relation(self) -> Relation:
        rows = [0] * self.n
        for block in self.blocks:
            m = mask_of(block)
            for x in block:
                rows[x] = m
        return Relation(self.carrier, rows)

    def to_json(self) -> dict:
        return {"n": self.n, "blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, obj: dict) -> "Partition":
        carrier = Carrier(_expect_int(obj, "n"))
        blocks = obj.get("blocks")
        if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
            raise ValueError("field 'blocks' must be a list of lists of points")
        return cls(carrier, blocks)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Partition)
            and self.n == other.n
            and self.blocks == other.blocks
        )

    def __hash__(self) -> int:
        return hash((self.n, self.blocks))

    def __repr__(self) -> str:
        return f"Partition({self.n}, {[list(b) for b in self.blocks]})"


def to_partition(e: Relation) -> Partition:
    """Convert an equivalence relation to its partition of classes."""
    if not is_equivalence(e):
        raise ValidationError("relation is not an equivalence relation")
    blocks = []
    seen = 0
    for x in range(e.n):
        if not seen >> x & 1:
            row = e.rows[x]
            blocks.append(tuple(bits(row)))
            seen |= row
    return Partition(e.carrier, blocks)


def to_relation(p: Partition) -> Relation:
    return p.to_relation()


def meet(p: Partition, q: Partition) -> Partition:
    """Common refinement: the coarsest partition refining both."""
    same_carrier(p, q)
    return to_partition(p.to_relation() & q.to_relation())


def refines(fine, coarse) -> bool:
    """True iff every set of `fine` is contained in some set of `coarse`.

    Both arguments may be Partitions or Covers (anything exposing a
    carrier and a `masks` tuple).
    """
    same_carrier(fine, coarse)
    coarse_masks = coarse.masks
    return all(
        any(f & ~c == 0 for c in coarse_masks) for f in fine.masks
    )


def _expect_int(obj: dict, field: str) -> int:
    value = obj.get(field)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"field '{field}' must be an integer")
    return value
