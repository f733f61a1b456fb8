"""Finite topological spaces, clopen separation, and induced uniformities."""

from __future__ import annotations

from typing import Iterable, Optional

from .core import (
    Carrier,
    Partition,
    Relation,
    bits,
    mask_of,
    to_partition,
)
from .uniformity import (
    DiagonalBasis,
    ValidationReport,
    intersection_closure,
    minimum_entourage,
    normalize,
)


class FiniteTopology:
    """A family of open sets stored as explicit bitmasks."""

    __slots__ = ("carrier", "opens")

    def __init__(self, carrier: Carrier, opens: Iterable):
        masks = set()
        for o in opens:
            m = o if isinstance(o, int) else mask_of(o)
            if m & ~carrier.full_mask:
                raise ValueError("open set mentions points outside the carrier")
            masks.add(m)
        self.carrier = carrier
        self.opens = frozenset(masks)

    @property
    def n(self) -> int:
        return self.carrier.n

    def is_open(self, mask: int) -> bool:
        return mask in self.opens

    def is_closed(self, mask: int) -> bool:
        return (self.carrier.full_mask & ~mask) in self.opens

    def closed_sets(self) -> list[int]:
        full = self.carrier.full_mask
        return sorted((full & ~o for o in self.opens), key=lambda m: (m.bit_count(), m))

    def opens_sorted(self) -> list[int]:
        return sorted(self.opens, key=lambda m: (m.bit_count(), tuple(bits(m))))

    def to_json(self) -> dict:
        return {"n": self.n, "opens": [list(bits(m)) for m in self.opens_sorted()]}

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteTopology":
        from .core import _expect_int

        carrier = Carrier(_expect_int(obj, "n"))
        opens = obj.get("opens")
        if not isinstance(opens, list) or not all(isinstance(o, list) for o in opens):
            raise ValueError("field 'opens' must be a list of lists of points")
        return cls(carrier, opens)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteTopology)
            and self.n == other.n
            and self.opens == other.opens
        )

    def __hash__(self) -> int:
        return hash((self.n, self.opens))

    def __repr__(self) -> str:
        return f"FiniteTopology({self.n}, {len(self.opens)} opens)"


class BinaryMap:
    """A map into {0,1}, stored as the preimage of 1."""

    __slots__ = ("carrier", "ones")

    def __init__(self, carrier: Carrier, ones: int):
        if ones & ~carrier.full_mask:
            raise ValueError("preimage mentions points outside the carrier")
        self.carrier = carrier
        self.ones = ones

    def value(self, x: int) -> int:
        return self.ones >> x & 1

    def relation(self) -> Relation:
        """Pairs on which the map agrees; an equivalence relation."""
        full = self.carrier.full_mask
        zeros = full & ~self.ones
        return Relation(
            self.carrier,
            ((self.ones if self.ones >> x & 1 else zeros) for x in range(self.carrier.n)),
        )

    def is_continuous(self, t: FiniteTopology) -> bool:
        return t.is_open(self.ones) and t.is_open(t.carrier.full_mask & ~self.ones)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinaryMap)
            and self.carrier.n == other.carrier.n
            and self.ones == other.ones
        )

    def __hash__(self) -> int:
        return hash((self.carrier.n, self.ones))

    def __repr__(self) -> str:
        return f"BinaryMap({self.carrier.n}, ones={sorted(bits(self.ones))})"


def validate_topology(t: FiniteTopology) -> ValidationReport:
    """Membership of the empty set and carrier, closure under union and meet."""
    violations = []
    if 0 not in t.opens:
        violations.append(("contains_empty", []))
    if t.carrier.full_mask not in t.opens:
        violations.append(("contains_carrier", list(t.carrier.points)))
    opens = sorted(t.opens)
    for i, a in enumerate(opens):
        for b in opens[i + 1 :]:
            if a | b not in t.opens:
                violations.append(
                    ("union", [list(bits(a)), list(bits(b))])
                )
            if a & b not in t.opens:
                violations.append(
                    ("intersection", [list(bits(a)), list(bits(b))])
                )
    return ValidationReport(violations)


def _require_valid(t: FiniteTopology) -> None:
    validate_topology(t).require("topology")


def clopen_sets(t: FiniteTopology) -> list[int]:
    """Open sets with open complement, sorted by size then elements."""
    _require_valid(t)
    full = t.carrier.full_mask
    return sorted(
        (o for o in t.opens if (full & ~o) in t.opens),
        key=lambda m: (m.bit_count(), tuple(bits(m))),
    )


def is_zero_dimensional(t: FiniteTopology) -> bool:
    """Every open set is a union of clopen sets."""
    _require_valid(t)
    clopens = clopen_sets(t)
    for o in t.opens:
        covered = 0
        for c in clopens:
            if c & ~o == 0:
                covered |= c
        if covered != o:
            return False
    return True


def satisfies_TA(t: FiniteTopology) -> tuple[bool, Optional[tuple[tuple[int, ...], int]]]:
    """Clopen separation of every closed set from every outside point.

    A disjoint open pair covering the carrier consists of a clopen set and
    its complement, so it suffices to search for a clopen set containing
    the point and missing the closed set.  Returns the first failing
    (closed set, point) pair as a counterexample.
    """
    _require_valid(t)
    clopens = clopen_sets(t)
    for a in t.closed_sets():
        outside = t.carrier.full_mask & ~a
        for x in bits(outside):
            if not any(c >> x & 1 and c & a == 0 for c in clopens):
                return False, (tuple(bits(a)), x)
    return True, None


def continuous_binary_maps(t: FiniteTopology) -> list[BinaryMap]:
    """All continuous maps into the discrete two-point space.

    A binary map is continuous iff the preimage of 1 is clopen, so there
    is one map per clopen set (the constants come from the empty set and
    the carrier).
    """
    _require_valid(t)
    return [BinaryMap(t.carrier, c) for c in clopen_sets(t)]


def uniformity_from_binary_maps(maps: Iterable[BinaryMap]) -> DiagonalBasis:
    """Intersection closure of the agreement relations of the given maps."""
    maps = list(maps)
    if not maps:
        raise ValueError("need at least one binary map")
    carrier = maps[0].carrier
    return DiagonalBasis(carrier, intersection_closure(m.relation() for m in maps))


def partition_topology(p: Partition) -> FiniteTopology:
    """Opens are exactly the unions of blocks."""
    block_masks = p.masks
    if len(block_masks) > 16:
        raise ValueError("too many blocks to materialize the open family")
    opens = set()
    for choice in range(1 << len(block_masks)):
        m = 0
        for i in bits(choice):
            m |= block_masks[i]
        opens.add(m)
    return FiniteTopology(p.carrier, opens)


def induced_topology(b: DiagonalBasis) -> FiniteTopology:
    """Sets O with some entourage slice D[x] inside O around each x in O.

    On a finite carrier the intersection closure has a minimum entourage,
    so this is the partition topology of its equivalence classes.
    """
    nb = normalize(b)
    return partition_topology(to_partition(minimum_entourage(nb)))


def is_uniformizable_na(
    t: FiniteTopology,
) -> tuple[bool, Optional[DiagonalBasis]]:
    """Try to recover t as the induced topology of an equivalence-relation basis.

    The candidate basis is built from all continuous binary maps; the
    topology is uniformizable this way iff that canonical candidate
    induces it exactly.
    """
    _require_valid(t)
    basis = uniformity_from_binary_maps(continuous_binary_maps(t))
    if induced_topology(basis) == t:
        return True, basis
    return False, None


def discrete_topology(n: int) -> FiniteTopology:
    carrier = Carrier(n)
    return FiniteTopology(carrier, range(1 << n))


def indiscrete_topology(n: int) -> FiniteTopology:
    carrier = Carrier(n)
    return FiniteTopology(carrier, [0, carrier.full_mask])


def sierpinski_topology() -> FiniteTopology:
    """Two points with exactly one nontrivial open set {1}."""
    return FiniteTopology(Carrier(2), [0, 0b10, 0b11])


def chain_topology(n: int) -> FiniteTopology:
    """Nested opens: the empty set and all prefixes {0}, {0,1}, ..."""
    carrier = Carrier(n)
    return FiniteTopology(carrier, [(1 << k) - 1 for k in range(n + 1)])
