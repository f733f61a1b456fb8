"""Brute-force enumerators, independent checkers, and law sweeps.

Everything here is deliberately slow and direct: exhaustive enumeration
of small structures, fixpoint closures, and per-triple checks that the
main modules are tested against.  Sampled enumerations are deterministic
given their seed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

from .core import (
    Carrier,
    Partition,
    Relation,
    bits,
    eq_closure,
)
from .pseudometric import (
    Pseudometric,
    PseudometricSystem,
    basis_from_system,
    chain_pm,
    descending_chain,
    is_na,
    system_from_na_basis,
)
from .topology import (
    FiniteTopology,
    is_uniformizable_na,
    is_zero_dimensional,
    satisfies_TA,
)
from .uniformity import (
    Cover,
    CoverBasis,
    DiagonalBasis,
    cover_basis_from_diagonal,
    cover_roundtrip,
    diagonal_roundtrip,
    has_partition_basis,
    is_non_archimedean,
    uniformity_equal,
    validate_cover,
)

DEFAULT_SEED = 1729

EXHAUSTIVE_KINDS = ("partitions", "topologies", "equivalence_bases", "uniformities", "valid_cover_bases")

MAX_TOPOLOGY_POINTS = 4
MAX_SAMPLED_POINTS = 8


@dataclass(frozen=True)
class EnumerationSpec:
    kind: str
    n: int
    max_generators: int = 3
    max_covers: int = 2
    limit: Optional[int] = None
    seed: Optional[int] = None


@dataclass
class SweepReport:
    theorem: str
    n: int
    checked: int
    satisfying: int
    discrepancies: int
    first_counterexample: Optional[object]
    seed: Optional[int]
    ms: int

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "n": self.n,
            "checked": self.checked,
            "satisfying": self.satisfying,
            "discrepancies": self.discrepancies,
            "first_counterexample": self.first_counterexample,
            "seed": self.seed,
            "ms": self.ms,
        }


def bell_number(n: int) -> int:
    """Number of partitions of an n-set, by the Bell triangle recurrence."""
    if n < 1:
        return 1
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[-1]


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """All partitions of {0..n-1} via restricted growth strings."""
    carrier = Carrier(n)

    def grow(prefix: list[int], used: int) -> Iterator[list[int]]:
        if len(prefix) == n:
            yield prefix
            return
        for b in range(used + 1):
            yield from grow(prefix + [b], max(used, b + 1))

    for assignment in grow([0], 1):
        blocks: dict[int, list[int]] = {}
        for x, b in enumerate(assignment):
            blocks.setdefault(b, []).append(x)
        yield Partition(carrier, blocks.values())


def enumerate_equivalences(n: int) -> Iterator[Relation]:
    for p in enumerate_partitions(n):
        yield p.to_relation()


def enumerate_relations(n: int) -> Iterator[Relation]:
    """Every binary relation on n points; 2**(n*n) of them."""
    carrier = Carrier(n)
    row_mask = carrier.full_mask
    for code in range(1 << (n * n)):
        yield Relation(carrier, ((code >> (n * i)) & row_mask for i in range(n)))


def enumerate_topologies(n: int) -> Iterator[FiniteTopology]:
    """Families containing the empty set and carrier, closed under union and meet.

    Direct filter over all families of proper nonempty subsets; only
    sensible for n <= 4.
    """
    if n > MAX_TOPOLOGY_POINTS:
        raise ValueError(f"exhaustive topology enumeration capped at n={MAX_TOPOLOGY_POINTS}")
    carrier = Carrier(n)
    full = carrier.full_mask
    proper = [m for m in range(1, full)]
    for code in range(1 << len(proper)):
        chosen = [proper[i] for i in bits(code)]
        family = set(chosen)
        family.add(0)
        family.add(full)
        ok = True
        members = sorted(family)
        for i, a in enumerate(members):
            for b in members[i + 1 :]:
                if (a | b) not in family or (a & b) not in family:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield FiniteTopology(carrier, family)


def enumerate_topologies_by_closure(n: int) -> Iterator[FiniteTopology]:
    """Same topologies, independently: close every seed family, deduplicate."""
    if n > MAX_TOPOLOGY_POINTS:
        raise ValueError(f"exhaustive topology enumeration capped at n={MAX_TOPOLOGY_POINTS}")
    carrier = Carrier(n)
    full = carrier.full_mask
    proper = [m for m in range(1, full)]
    seen = set()
    for code in range(1 << len(proper)):
        family = {0, full}
        family.update(proper[i] for i in bits(code))
        while True:
            members = sorted(family)
            added = False
            for i, a in enumerate(members):
                for b in members[i + 1 :]:
                    for c in (a | b, a & b):
                        if c not in family:
                            family.add(c)
                            added = True
            if not added:
                break
        key = frozenset(family)
        if key not in seen:
            seen.add(key)
            yield FiniteTopology(carrier, family)


def enumerate_equivalence_bases(n: int, max_generators: int = 3) -> Iterator[DiagonalBasis]:
    """Every basis of at most max_generators distinct equivalence relations."""
    carrier = Carrier(n)
    eqs = list(enumerate_equivalences(n))
    for size in range(1, max_generators + 1):
        for combo in combinations(eqs, size):
            yield DiagonalBasis(carrier, combo)


def enumerate_uniformities(n: int) -> Iterator[DiagonalBasis]:
    """One canonical singleton basis per uniformity on n points."""
    carrier = Carrier(n)
    for e in enumerate_equivalences(n):
        yield DiagonalBasis(carrier, [e])


def enumerate_covers(n: int) -> Iterator[Cover]:
    """Every family of distinct nonempty sets whose union is the carrier."""
    carrier = Carrier(n)
    full = carrier.full_mask
    nonempty = list(range(1, full + 1))
    for size in range(1, len(nonempty) + 1):
        for combo in combinations(nonempty, size):
            acc = 0
            for m in combo:
                acc |= m
            if acc == full:
                yield Cover(carrier, combo)


def enumerate_valid_cover_bases(n: int, max_covers: int = 2) -> Iterator[CoverBasis]:
    """Valid cover bases of at most max_covers covers (exhaustive for n <= 3)."""
    if n > 3:
        raise ValueError("exhaustive cover basis enumeration capped at n=3")
    carrier = Carrier(n)
    covers = list(enumerate_covers(n))
    for size in range(1, max_covers + 1):
        for combo in combinations(covers, size):
            cb = CoverBasis(carrier, combo)
            if validate_cover(cb).valid:
                yield cb


def enumerate_structures(spec: EnumerationSpec) -> Iterator[object]:
    if spec.kind == "partitions":
        gen: Iterator[object] = enumerate_partitions(spec.n)
    elif spec.kind == "topologies":
        gen = enumerate_topologies(spec.n)
    elif spec.kind == "equivalence_bases":
        if spec.seed is None:
            gen = enumerate_equivalence_bases(spec.n, spec.max_generators)
        else:
            gen = _sampled(spec, random_equivalence_basis)
    elif spec.kind == "uniformities":
        gen = enumerate_uniformities(spec.n)
    elif spec.kind == "valid_cover_bases":
        if spec.seed is None:
            gen = enumerate_valid_cover_bases(spec.n, spec.max_covers)
        else:
            gen = _sampled(spec, random_cover_basis)
    else:
        raise ValueError(f"unknown enumeration kind {spec.kind!r}")
    if spec.limit is not None:
        gen = _take(gen, spec.limit)
    return gen


def _take(gen: Iterator[object], limit: int) -> Iterator[object]:
    for i, item in enumerate(gen):
        if i >= limit:
            return
        yield item


def _sampled(spec: EnumerationSpec, make) -> Iterator[object]:
    if spec.n > MAX_SAMPLED_POINTS:
        raise ValueError(f"sampled enumeration capped at n={MAX_SAMPLED_POINTS}")
    rng = random.Random(spec.seed)
    count = spec.limit if spec.limit is not None else 100
    for _ in range(count):
        yield make(rng, spec.n)


# ---------------------------------------------------------------------------
# random structure generators


def random_partition(rng: random.Random, n: int) -> Partition:
    carrier = Carrier(n)
    k = rng.randint(1, n)
    assignment = [rng.randrange(k) for _ in range(n)]
    blocks: dict[int, list[int]] = {}
    for x, b in enumerate(assignment):
        blocks.setdefault(b, []).append(x)
    return Partition(carrier, blocks.values())


def random_equivalence(rng: random.Random, n: int) -> Relation:
    return random_partition(rng, n).to_relation()


def random_equivalence_basis(rng: random.Random, n: int, max_generators: int = 3) -> DiagonalBasis:
    carrier = Carrier(n)
    k = rng.randint(1, max_generators)
    return DiagonalBasis(carrier, (random_equivalence(rng, n) for _ in range(k)))


def random_valid_basis(rng: random.Random, n: int) -> DiagonalBasis:
    """A valid basis mixing equivalences with reflexive supersets of them.

    The intersection of the equivalence members stays in the closure and
    witnesses every axiom, so validity holds by construction.
    """
    carrier = Carrier(n)
    eqs = [random_equivalence(rng, n) for _ in range(rng.randint(1, 3))]
    members = list(eqs)
    base = eqs[0]
    for e in eqs[1:]:
        base = base & e
    for _ in range(rng.randint(0, 2)):
        rows = list(base.rows)
        for _ in range(rng.randint(1, n)):
            x = rng.randrange(n)
            y = rng.randrange(n)
            rows[x] |= 1 << y
        members.append(Relation(carrier, rows))
    return DiagonalBasis(carrier, members)


def random_cover_basis(rng: random.Random, n: int) -> CoverBasis:
    """A valid cover basis: partitions plus covers they refine."""
    carrier = Carrier(n)
    parts = [random_partition(rng, n) for _ in range(rng.randint(1, 2))]
    covers = [Cover.from_partition(p) for p in parts]
    for p in parts:
        if rng.random() < 0.7:
            masks = list(p.masks)
            sets = []
            covered = 0
            for m in masks:
                group = m
                for other in masks:
                    if other != m and rng.random() < 0.4:
                        group |= other
                sets.append(group)
                covered |= group
            if covered == carrier.full_mask:
                covers.append(Cover(carrier, sets))
    return CoverBasis(carrier, covers)


_HEIGHT_POOL = [Fraction(1, k) for k in range(9, 0, -1)] + [Fraction(3, 2), Fraction(2)]


def random_ultrametric(rng: random.Random, n: int) -> Pseudometric:
    """Random dendrogram distance: merge clusters at nondecreasing heights.

    Early merges may happen at height zero, which produces honest
    pseudo-metrics with distinct points at distance zero.
    """
    carrier = Carrier(n)
    start = rng.randint(0, max(0, len(_HEIGHT_POOL) - n))
    zero_merges = rng.randint(0, n // 2)
    dist = [[Fraction(0)] * n for _ in range(n)]
    clusters = [[x] for x in range(n)]
    level = start
    merges = 0
    while len(clusters) > 1:
        i, j = rng.sample(range(len(clusters)), 2)
        if merges < zero_merges:
            h = Fraction(0)
        else:
            h = _HEIGHT_POOL[min(level, len(_HEIGHT_POOL) - 1)]
            if rng.random() < 0.5:
                level += 1
        merges += 1
        for x in clusters[i]:
            for y in clusters[j]:
                dist[x][y] = h
                dist[y][x] = h
        clusters[i] = clusters[i] + clusters[j]
        del clusters[j]
    return Pseudometric(carrier, dist)


# ---------------------------------------------------------------------------
# independent slow checkers


def slow_eq_closure(r: Relation) -> Relation:
    """Least fixpoint of adding reflexive, symmetric, transitive consequences."""
    n = r.n
    pairs = set(r.pairs())
    pairs.update((x, x) for x in range(n))
    while True:
        extra = set()
        for (x, y) in pairs:
            if (y, x) not in pairs:
                extra.add((y, x))
        for (x, y) in pairs:
            for (y2, z) in pairs:
                if y == y2 and (x, z) not in pairs:
                    extra.add((x, z))
        if not extra:
            break
        pairs |= extra
    return Relation.from_pairs(r.carrier, pairs)


def check_strong_triangle(dist: Sequence[Sequence[Fraction]]) -> bool:
    """Direct per-triple check of d(x,y) <= max(d(x,z), d(z,y))."""
    n = len(dist)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if dist[x][y] > max(dist[x][z], dist[z][y]):
                    return False
    return True


def check_pseudometric(dist: Sequence[Sequence[Fraction]]) -> bool:
    """Direct check of symmetry, zero diagonal, and the triangle inequality."""
    n = len(dist)
    for x in range(n):
        if dist[x][x] != 0:
            return False
        for y in range(n):
            if dist[x][y] < 0 or dist[x][y] != dist[y][x]:
                return False
            for z in range(n):
                if dist[x][y] > dist[x][z] + dist[z][y]:
                    return False
    return True


def is_uniformity_filter(minimum: Relation) -> bool:
    """Check the uniformity axioms directly on the principal filter of `minimum`.

    Every relation above `minimum` must be reflexive and admit filter
    members witnessing the symmetry and composition axioms; decided by
    scanning all supersets on a small carrier.
    """
    n = minimum.n
    if n > 3:
        raise ValueError("direct filter check capped at n=3")
    free = [(x, y) for x in range(n) for y in range(n) if not minimum.has(x, y)]
    members = []
    for code in range(1 << len(free)):
        extra = [free[i] for i in bits(code)]
        rows = list(minimum.rows)
        for (x, y) in extra:
            rows[x] |= 1 << y
        members.append(Relation(minimum.carrier, rows))
    from .core import compose, inverse

    for d in members:
        if not d.is_reflexive():
            return False
        if not any(inverse(e).issubset(d) for e in members):
            return False
        if not any(compose(e, e).issubset(d) for e in members):
            return False
    return True


# ---------------------------------------------------------------------------
# law sweeps

SWEEP_ALIASES = {
    "representations": "T2.4",
    "separation": "T3.2",
    "metrization": "T4.1",
    "roundtrip": "R2.1-roundtrip",
}

SWEEP_DESCRIPTIONS = {
    "T2.4": "equivalence-relation, partition-cover, and ultrametric views agree",
    "T3.2": "clopen separation, zero-dimensionality, and uniformizability agree",
    "T4.1": "a single ultrametric recovers any equivalence-generated uniformity",
    "R2.1-roundtrip": "diagonal/covering conversions invert each other",
}


def _diagonal_instances(spec: EnumerationSpec) -> Iterator[DiagonalBasis]:
    if spec.seed is None:
        yield from enumerate_equivalence_bases(spec.n, spec.max_generators)
    else:
        rng = random.Random(spec.seed)
        count = spec.limit if spec.limit is not None else 100
        for _ in range(count):
            yield random_equivalence_basis(rng, spec.n, spec.max_generators)


def _check_representations(b: DiagonalBasis) -> Optional[str]:
    na, _ = is_non_archimedean(b)
    if not na:
        return "not non-Archimedean"
    system = system_from_na_basis(b)
    if not uniformity_equal(basis_from_system(system), b):
        return "induced system does not reproduce the uniformity"
    if not has_partition_basis(cover_basis_from_diagonal(b))[0]:
        return "covering side has no partition basis"
    if not is_non_archimedean(basis_from_system(system))[0]:
        return "system-induced basis not non-Archimedean"
    return None


def _check_metrization(b: DiagonalBasis) -> Optional[str]:
    chain = descending_chain(b.entourages)
    d = chain_pm(chain)
    if not is_na(d):
        return "metrization is not an ultrametric"
    if not uniformity_equal(
        basis_from_system(PseudometricSystem(b.carrier, [d])), b
    ):
        return "metrization induces a different uniformity"
    steps = chain.steps
    half = Fraction(1, 2)
    for x in range(b.n):
        for y in range(b.n):
            v = d.d(x, y)
            if len(steps) >= 2 and v < half and not steps[1].has(x, y):
                return "small distance escapes the second chain step"
            for m in range(1, len(steps)):
                if v < Fraction(1, m) and not steps[m].has(x, y):
                    return "distance bound escapes its chain step"
    return None


def _check_separation(t: FiniteTopology) -> tuple[bool, Optional[str]]:
    ta, _ = satisfies_TA(t)
    zd = is_zero_dimensional(t)
    un, _ = is_uniformizable_na(t)
    if not (ta == zd == un):
        return ta, f"verdicts differ: separation={ta} zero_dim={zd} uniformizable={un}"
    return ta, None


def _check_roundtrip_diagonal(b: DiagonalBasis) -> Optional[str]:
    if not diagonal_roundtrip(b):
        return "diagonal round trip moved the uniformity"
    return None


def _check_roundtrip_cover(cb: CoverBasis) -> Optional[str]:
    if not cover_roundtrip(cb):
        return "covering round trip moved the uniformity"
    return None


def theorem_sweep(theorem_id: str, spec: EnumerationSpec) -> SweepReport:
    """Run one of the built-in law sweeps over an enumerated instance set."""
    canonical = SWEEP_ALIASES.get(theorem_id, theorem_id)
    if canonical not in SWEEP_DESCRIPTIONS:
        known = sorted(SWEEP_DESCRIPTIONS) + sorted(SWEEP_ALIASES)
        raise ValueError(f"unknown sweep {theorem_id!r}; expected one of {known}")
    start = time.perf_counter()
    checked = satisfying = discrepancies = 0
    first: Optional[object] = None

    if canonical == "T3.2":
        for t in enumerate_topologies(spec.n):
            checked += 1
            ta, problem = _check_separation(t)
            if problem is not None:
                discrepancies += 1
                if first is None:
                    first = {"topology": t.to_json(), "problem": problem}
            elif ta:
                satisfying += 1
    elif canonical in ("T2.4", "T4.1"):
        check = _check_representations if canonical == "T2.4" else _check_metrization
        for b in _diagonal_instances(spec):
            checked += 1
            problem = check(b)
            if problem is None:
                satisfying += 1
            else:
                discrepancies += 1
                if first is None:
                    first = {"basis": b.to_json(), "problem": problem}
    else:
        if spec.seed is None:
            diagonals: Iterable[DiagonalBasis] = enumerate_uniformities(spec.n)
            covers: Iterable[CoverBasis] = (
                enumerate_valid_cover_bases(spec.n, spec.max_covers)
                if spec.n <= 3
                else ()
            )
        else:
            rng = random.Random(spec.seed)
            count = spec.limit if spec.limit is not None else 100
            diagonals = [random_valid_basis(rng, spec.n) for _ in range(count)]
            covers = [random_cover_basis(rng, spec.n) for _ in range(count)]
        for b in diagonals:
            checked += 1
            problem = _check_roundtrip_diagonal(b)
            if problem is None:
                satisfying += 1
            else:
                discrepancies += 1
                if first is None:
                    first = {"basis": b.to_json(), "problem": problem}
        for cb in covers:
            checked += 1
            problem = _check_roundtrip_cover(cb)
            if problem is None:
                satisfying += 1
            else:
                discrepancies += 1
                if first is None:
                    first = {"cover_basis": cb.to_json(), "problem": problem}

    ms = int((time.perf_counter() - start) * 1000)
    return SweepReport(
        theorem=canonical,
        n=spec.n,
        checked=checked,
        satisfying=satisfying,
        discrepancies=discrepancies,
        first_counterexample=first,
        seed=spec.seed,
        ms=ms,
    )
