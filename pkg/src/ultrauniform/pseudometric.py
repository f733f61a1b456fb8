"""Pseudo-metrics with exact rational distances, systems, chains, metrization.

Distances are fractions.Fraction throughout; every comparison is exact,
so strict ball thresholds never suffer float ties.  Internally each table
is also kept as an integer grid over a common denominator, which makes
the triangle checks cheap enough for large random suites.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    Carrier,
    CarrierMismatch,
    Relation,
    ValidationError,
    is_equivalence,
    same_carrier,
)
from .uniformity import DiagonalBasis, is_non_archimedean


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise ValueError(f"distance {value!r} is not an exact rational")


class Pseudometric:
    """Symmetric nonnegative distance table with zero diagonal and triangles."""

    __slots__ = ("carrier", "dist", "scale", "grid")

    def __init__(self, carrier: Carrier, dist: Sequence[Sequence]):
        n = carrier.n
        if len(dist) != n or any(len(row) != n for row in dist):
            raise ValueError("distance table must be n x n")
        table = tuple(tuple(_as_fraction(v) for v in row) for row in dist)
        scale = math.lcm(*(v.denominator for row in table for v in row))
        grid = tuple(
            tuple(v.numerator * (scale // v.denominator) for v in row) for row in table
        )
        for x in range(n):
            if grid[x][x] != 0:
                raise ValueError(f"nonzero self-distance at point {x}")
            for y in range(x + 1, n):
                if grid[x][y] != grid[y][x]:
                    raise ValueError(f"asymmetric distances at ({x},{y})")
                if grid[x][y] < 0:
                    raise ValueError(f"negative distance at ({x},{y})")
        for z in range(n):
            gz = grid[z]
            for x in range(n):
                gxz = grid[x][z]
                gx = grid[x]
                for y in range(x + 1, n):
                    if gx[y] > gxz + gz[y]:
                        raise ValueError(
                            f"triangle inequality fails at ({x},{y}) via {z}"
                        )
        self.carrier = carrier
        self.dist = table
        self.scale = scale
        self.grid = grid

    @property
    def n(self) -> int:
        return self.carrier.n

    def d(self, x: int, y: int) -> Fraction:
        return self.dist[x][y]

    def values(self) -> list[Fraction]:
        """Distinct positive distances, ascending."""
        out = {v for row in self.dist for v in row if v > 0}
        return sorted(out)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "dist": [
                [f"{v.numerator}/{v.denominator}" for v in row] for row in self.dist
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Pseudometric":
        from .core import _expect_int

        carrier = Carrier(_expect_int(obj, "n"))
        dist = obj.get("dist")
        if not isinstance(dist, list) or not all(isinstance(r, list) for r in dist):
            raise ValueError("field 'dist' must be a list of rows of rationals")
        return cls(carrier, dist)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Pseudometric)
            and self.n == other.n
            and self.dist == other.dist
        )

    def __hash__(self) -> int:
        return hash((self.n, self.dist))

    def __repr__(self) -> str:
        return f"Pseudometric({self.n})"


def is_na(d: Pseudometric) -> bool:
    """Strong triangle inequality d(x,y) <= max(d(x,z), d(z,y)) on all triples."""
    n = d.n
    grid = d.grid
    for z in range(n):
        gz = grid[z]
        for x in range(n):
            gxz = grid[x][z]
            gx = grid[x]
            for y in range(x + 1, n):
                gzy = gz[y]
                if gx[y] > (gxz if gxz >= gzy else gzy):
                    return False
    return True


def sup_pm(ds: Sequence[Pseudometric]) -> Pseudometric:
    """Pointwise maximum of the given pseudo-metrics."""
    if not ds:
        raise ValueError("sup of an empty family")
    carrier = same_carrier(*ds)
    n = carrier.n
    first, rest = ds[0], ds[1:]
    if all(d.scale == first.scale for d in rest):
        scale = first.scale
        memo: dict[int, Fraction] = {}
        dist = []
        for x in range(n):
            row = []
            for y in range(n):
                v = max(d.grid[x][y] for d in ds)
                f = memo.get(v)
                if f is None:
                    f = memo[v] = Fraction(v, scale)
                row.append(f)
            dist.append(row)
    else:
        dist = [[max(d.dist[x][y] for d in ds) for y in range(n)] for x in range(n)]
    return Pseudometric(carrier, dist)


def ball_relation(d: Pseudometric, eps) -> Relation:
    """The strict ball relation {(x,y) | d(x,y) < eps}."""
    eps = _as_fraction(eps)
    if eps <= 0:
        raise ValueError("ball radius must be positive")
    # d(x,y) < eps  iff  grid[x][y] * eps.den < eps.num * scale
    bound = eps.numerator * d.scale
    den = eps.denominator
    rows = []
    for x in range(d.n):
        gx = d.grid[x]
        row = 0
        for y in range(d.n):
            if gx[y] * den < bound:
                row |= 1 << y
        rows.append(row)
    return Relation(d.carrier, rows)


class PseudometricSystem:
    """A deduplicated finite family of pseudo-metrics on one carrier."""

    __slots__ = ("carrier", "metrics")

    def __init__(self, carrier: Carrier, metrics: Iterable[Pseudometric]):
        metrics = tuple(metrics)
        if not metrics:
            raise ValueError("a system needs at least one pseudo-metric")
        for m in metrics:
            if m.carrier != carrier:
                raise CarrierMismatch("pseudo-metric on a different carrier")
        self.carrier = carrier
        self.metrics = tuple(sorted(set(metrics), key=lambda m: m.dist))

    @property
    def n(self) -> int:
        return self.carrier.n

    def to_json(self) -> dict:
        return {"n": self.n, "metrics": [m.to_json() for m in self.metrics]}

    @classmethod
    def from_json(cls, obj: dict) -> "PseudometricSystem":
        from .core import _expect_int

        carrier = Carrier(_expect_int(obj, "n"))
        raw = obj.get("metrics")
        if not isinstance(raw, list) or not raw:
            raise ValueError("field 'metrics' must be a nonempty list")
        return cls(carrier, (Pseudometric.from_json(item) for item in raw))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PseudometricSystem)
            and self.n == other.n
            and self.metrics == other.metrics
        )

    def __hash__(self) -> int:
        return hash((self.n, self.metrics))

    def __repr__(self) -> str:
        return f"PseudometricSystem({self.n}, {len(self.metrics)} metrics)"


def thresholds(d: Pseudometric) -> list[Fraction]:
    """Radii realizing every distinct ball relation of d.

    With strict balls, the relation changes exactly when the radius
    crosses a realized distance, so the distinct positive values plus one
    value above the maximum enumerate all of them.
    """
    vals = d.values()
    if not vals:
        return [Fraction(1)]
    return vals + [vals[-1] + 1]


def basis_from_system(m: PseudometricSystem) -> DiagonalBasis:
    """Diagonal basis of all distinct ball relations of the system."""
    rels = set()
    for d in m.metrics:
        for eps in thresholds(d):
            rels.add(ball_relation(d, eps))
    return DiagonalBasis(m.carrier, rels)


def systems_equivalent(m: PseudometricSystem, nsys: PseudometricSystem) -> bool:
    """True iff both systems induce the same uniformity."""
    from .uniformity import uniformity_equal

    if m.carrier != nsys.carrier:
        raise CarrierMismatch("systems on different carriers")
    return uniformity_equal(basis_from_system(m), basis_from_system(nsys))


class Chain:
    """Descending steps [D1..Dk]: D1 the full relation, then equivalences.

    The chain is eventually constant: D_m = D_k for every m >= k.
    """

    __slots__ = ("carrier", "steps")

    def __init__(self, carrier: Carrier, steps: Iterable[Relation]):
        steps = tuple(steps)
        if not steps:
            raise ValueError("a chain needs at least one step")
        for s in steps:
            if s.carrier != carrier:
                raise CarrierMismatch("chain step on a different carrier")
        if steps[0] != Relation.full(carrier):
            raise ValueError("the first chain step must be the full relation")
        for i, s in enumerate(steps[1:], start=2):
            if not is_equivalence(s):
                raise ValueError(f"chain step {i} is not an equivalence relation")
            if not s.issubset(steps[i - 2]):
                raise ValueError(f"chain step {i} is not contained in step {i - 1}")
        self.carrier = carrier
        self.steps = steps

    @property
    def n(self) -> int:
        return self.carrier.n

    def to_json(self) -> dict:
        return {"n": self.n, "steps": [s.to_json() for s in self.steps]}

    @classmethod
    def from_json(cls, obj: dict) -> "Chain":
        from .core import _expect_int

        carrier = Carrier(_expect_int(obj, "n"))
        raw = obj.get("steps")
        if not isinstance(raw, list) or not raw:
            raise ValueError("field 'steps' must be a nonempty list of relations")
        return cls(carrier, (Relation.from_json(item) for item in raw))

    def __eq__(self, other) -> bool:
        return isinstance(other, Chain) and self.n == other.n and self.steps == other.steps

    def __hash__(self) -> int:
        return hash((self.n, self.steps))

    def __repr__(self) -> str:
        return f"Chain({self.n}, depth {len(self.steps)})"


def chain_pm(kappa: Chain) -> Pseudometric:
    """Distance 0 inside the constant tail, else 1/n for the deepest level n.

    Pairs inside the last step stay together forever, so their distance is
    zero; otherwise the distance is 1/n where n is the largest index whose
    step still contains the pair.  The result always satisfies the strong
    triangle inequality because every step is transitive.
    """
    steps = kappa.steps
    k = len(steps)
    n = kappa.n
    dist = [[Fraction(0)] * n for _ in range(n)]
    for x in range(n):
        for y in range(x + 1, n):
            if steps[-1].has(x, y):
                continue
            depth = 1
            for i in range(k - 1, 0, -1):
                if steps[i - 1].has(x, y):
                    depth = i
                    break
            value = Fraction(1, depth)
            dist[x][y] = value
            dist[y][x] = value
    return Pseudometric(kappa.carrier, dist)


def system_from_na_basis(b: DiagonalBasis) -> PseudometricSystem:
    """One two-step chain distance per witness equivalence relation.

    Requires the basis to be non-Archimedean; the produced system induces
    the same uniformity as the input basis.
    """
    ok, witness = is_non_archimedean(b)
    if not ok:
        raise ValidationError("basis is not non-Archimedean")
    full = Relation.full(b.carrier)
    metrics = {chain_pm(Chain(b.carrier, [full, e])) for e in witness.entourages}
    return PseudometricSystem(b.carrier, metrics)


def descending_chain(es: Sequence[Relation]) -> Chain:
    """Cumulative-intersection chain through the given equivalence relations.

    The full relation is prepended when absent; step i+1 is the
    intersection of step i with the next listed relation, which lies in
    the intersection closure of the inputs and keeps the chain decreasing.
    """
    if not es:
        raise ValueError("need at least one relation")
    carrier = same_carrier(*es)
    for i, e in enumerate(es):
        if not is_equivalence(e):
            raise ValidationError(f"relation {i} is not an equivalence relation")
    full = Relation.full(carrier)
    listed = list(es)
    if listed[0] != full:
        listed.insert(0, full)
    steps = [full]
    for e in listed[1:]:
        steps.append(steps[-1] & e)
    return Chain(carrier, steps)


def metrize(es: Sequence[Relation]) -> Pseudometric:
    """Single ultrametric inducing the uniformity generated by `es`.

    Evaluates the chain distance along the cumulative-intersection chain;
    the induced uniformity equals the one generated by the inputs together
    with the full relation.
    """
    return chain_pm(descending_chain(es))


__all__ = [
    "Pseudometric",
    "PseudometricSystem",
    "Chain",
    "is_na",
    "sup_pm",
    "ball_relation",
    "thresholds",
    "basis_from_system",
    "systems_equivalent",
    "chain_pm",
    "system_from_na_basis",
    "descending_chain",
    "metrize",
]
