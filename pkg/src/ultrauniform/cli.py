"""Command-line front end: validate, convert, check, generate, and sweep.

Every command reads and writes JSON only.  Exit codes: 0 when the command
succeeds and any checked property holds, 1 when a checked property fails,
2 on malformed input or violated preconditions.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .core import Carrier, CarrierMismatch, Relation, ValidationError
from .jsonio import dumps, structure_from_json
from .oracle import DEFAULT_SEED, EnumerationSpec, theorem_sweep
from .pseudometric import (
    Pseudometric,
    metrize,
    system_from_na_basis,
)
from .topology import (
    FiniteTopology,
    is_uniformizable_na,
    is_zero_dimensional,
    satisfies_TA,
    validate_topology,
)
from .uniformity import (
    CoverBasis,
    DiagonalBasis,
    cover_basis_from_diagonal,
    cover_roundtrip,
    diagonal_from_cover_basis,
    diagonal_roundtrip,
    is_non_archimedean,
    validate_cover,
    validate_diagonal,
)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2


def padic_valuation(x: int, p: int) -> int:
    """Exponent of the largest power of p dividing x (x must be nonzero)."""
    v = 0
    x = abs(x)
    while x % p == 0:
        v += 1
        x //= p
    return v


def padic_pseudometric(p: int, size: int) -> Pseudometric:
    """d(x,y) = p**(-v_p(x-y)) on the carrier {0..size-1}, d(x,x) = 0."""
    if p < 2:
        raise ValueError("base must be at least 2")
    if size < 1:
        raise ValueError("size must be positive")
    carrier = Carrier(size)
    dist = [[Fraction(0)] * size for _ in range(size)]
    for x in range(size):
        for y in range(x + 1, size):
            value = Fraction(1, p ** padic_valuation(x - y, p))
            dist[x][y] = value
            dist[y][x] = value
    return Pseudometric(carrier, dist)


def congruence_relation(modulus: int, step: int) -> Relation:
    """x ~ y iff step divides x - y, restricted to {0..modulus-1}."""
    carrier = Carrier(modulus)
    rows = []
    for x in range(modulus):
        row = 0
        for y in range(modulus):
            if (x - y) % step == 0:
                row |= 1 << y
        rows.append(row)
    return Relation(carrier, rows)


def ideal_chain_basis(modulus: int, ideal: int, depth: int) -> DiagonalBasis:
    """Congruences modulo ideal**k for k = 0..depth on {0..modulus-1}."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if ideal < 1:
        raise ValueError("ideal generator must be positive")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    carrier = Carrier(modulus)
    rels = [congruence_relation(modulus, ideal**k) for k in range(depth + 1)]
    return DiagonalBasis(carrier, rels)


def _read_input(raw: str) -> dict:
    if raw.lstrip().startswith("{"):
        text = raw
    elif raw == "-":
        text = sys.stdin.read()
    else:
        with open(raw, "r", encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def _emit(payload, out_path) -> None:
    text = dumps(payload)
    sys.stdout.write(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_validate(structure) -> tuple[int, dict]:
    if isinstance(structure, DiagonalBasis):
        report = validate_diagonal(structure)
    elif isinstance(structure, CoverBasis):
        report = validate_cover(structure)
    elif isinstance(structure, FiniteTopology):
        report = validate_topology(structure)
    else:
        # the remaining types enforce their invariants at construction
        return EXIT_OK, {"valid": True, "violations": []}
    return (EXIT_OK if report.valid else EXIT_FALSE), report.to_json()


def _cmd_convert(structure, target: str) -> tuple[int, dict]:
    if target == "cover":
        if not isinstance(structure, DiagonalBasis):
            raise ValueError("convert --to cover expects a diagonal basis")
        return EXIT_OK, cover_basis_from_diagonal(structure).to_json()
    if target == "diagonal":
        if not isinstance(structure, CoverBasis):
            raise ValueError("convert --to diagonal expects a cover basis")
        return EXIT_OK, diagonal_from_cover_basis(structure).to_json()
    raise ValueError(f"unknown conversion target {target!r}")


def _cmd_check_na(structure) -> tuple[int, dict]:
    if not isinstance(structure, DiagonalBasis):
        raise ValueError("check-na expects a diagonal basis")
    ok, witness = is_non_archimedean(structure)
    payload = {
        "non_archimedean": ok,
        "witness": witness.to_json() if witness is not None else None,
    }
    return (EXIT_OK if ok else EXIT_FALSE), payload


def _cmd_metrize(structure) -> tuple[int, dict]:
    if not isinstance(structure, DiagonalBasis):
        raise ValueError("metrize expects a diagonal basis of equivalence relations")
    return EXIT_OK, metrize(structure.entourages).to_json()


def _cmd_pm_system(structure) -> tuple[int, dict]:
    if not isinstance(structure, DiagonalBasis):
        raise ValueError("pm-system expects a diagonal basis")
    return EXIT_OK, system_from_na_basis(structure).to_json()


def _cmd_topo_check(structure) -> tuple[int, dict]:
    if not isinstance(structure, FiniteTopology):
        raise ValueError("topo-check expects a topology")
    ta, _ = satisfies_TA(structure)
    zd = is_zero_dimensional(structure)
    un, _ = is_uniformizable_na(structure)
    payload = {"T_A": ta, "zero_dim": zd, "uniformizable": un}
    return (EXIT_OK if ta and zd and un else EXIT_FALSE), payload


def _cmd_uniformize(structure) -> tuple[int, dict]:
    if not isinstance(structure, FiniteTopology):
        raise ValueError("uniformize expects a topology")
    ok, witness = is_uniformizable_na(structure)
    payload = {
        "uniformizable": ok,
        "witness": witness.to_json() if witness is not None else None,
    }
    return (EXIT_OK if ok else EXIT_FALSE), payload


def _cmd_roundtrip(structure) -> tuple[int, dict]:
    if isinstance(structure, DiagonalBasis):
        ok = diagonal_roundtrip(structure)
    elif isinstance(structure, CoverBasis):
        ok = cover_roundtrip(structure)
    else:
        raise ValueError("roundtrip expects a diagonal or cover basis")
    return (EXIT_OK if ok else EXIT_FALSE), {"roundtrip": ok}


def _cmd_sweep(args) -> tuple[int, dict]:
    sampled = args.trials is not None or args.seed is not None
    seed = args.seed
    if sampled and seed is None:
        env = os.environ.get("ULTRAUNIFORM_SEED")
        seed = int(env) if env else DEFAULT_SEED
    spec = EnumerationSpec(
        kind="equivalence_bases",
        n=args.n,
        limit=args.trials,
        seed=seed if sampled else None,
    )
    report = theorem_sweep(args.theorem, spec)
    return (EXIT_OK if report.discrepancies == 0 else EXIT_FALSE), report.to_json()


def _cmd_gen(args) -> tuple[int, dict]:
    if args.kind == "padic":
        size = args.size if args.size is not None else args.n
        if size is None:
            raise ValueError("gen padic needs --size (or --n)")
        return EXIT_OK, padic_pseudometric(args.p, size).to_json()
    if args.kind == "ideal-chain":
        return EXIT_OK, ideal_chain_basis(args.modulus, args.ideal, args.depth).to_json()
    raise ValueError(f"unknown generator {args.kind!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ultrauniform",
        description="Finite uniform structures: validate, convert, check, generate, sweep.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_io(p, needs_in=True):
        if needs_in:
            p.add_argument("--in", dest="input", default="-",
                           help="input path, '-' for stdin, or inline JSON")
        p.add_argument("--out", dest="out", default=None, help="also write output here")

    add_io(sub.add_parser("validate", help="axiom-check a structure"))
    convert = sub.add_parser("convert", help="convert between basis representations")
    add_io(convert)
    convert.add_argument("--to", dest="target", required=True, choices=["cover", "diagonal"])
    add_io(sub.add_parser("check-na", help="decide the non-Archimedean property"))
    add_io(sub.add_parser("metrize", help="single ultrametric for an equivalence basis"))
    add_io(sub.add_parser("pm-system", help="pseudo-metric system for a basis"))
    add_io(sub.add_parser("topo-check", help="separation/zero-dim/uniformizability verdicts"))
    add_io(sub.add_parser("uniformize", help="witness basis inducing a topology"))
    add_io(sub.add_parser("roundtrip", help="convert there and back, compare"))

    sweep = sub.add_parser("sweep", help="run a built-in law sweep")
    add_io(sweep, needs_in=False)
    sweep.add_argument("--theorem", required=True)
    sweep.add_argument("--n", type=int, required=True)
    sweep.add_argument("--trials", type=int, default=None,
                       help="sample this many random instances instead of enumerating")
    sweep.add_argument("--seed", type=int, default=None)

    gen = sub.add_parser("gen", help="generate a ready-made instance")
    add_io(gen, needs_in=False)
    gen.add_argument("kind", choices=["padic", "ideal-chain"])
    gen.add_argument("--p", type=int, default=2)
    gen.add_argument("--size", type=int, default=None)
    gen.add_argument("--n", type=int, default=None, help="alias for --size")
    gen.add_argument("--modulus", type=int, default=27)
    gen.add_argument("--ideal", type=int, default=3)
    gen.add_argument("--depth", type=int, default=3)
    return parser


_STRUCTURE_VERBS = {
    "validate": lambda structure, args: _cmd_validate(structure),
    "convert": lambda structure, args: _cmd_convert(structure, args.target),
    "check-na": lambda structure, args: _cmd_check_na(structure),
    "metrize": lambda structure, args: _cmd_metrize(structure),
    "pm-system": lambda structure, args: _cmd_pm_system(structure),
    "topo-check": lambda structure, args: _cmd_topo_check(structure),
    "uniformize": lambda structure, args: _cmd_uniformize(structure),
    "roundtrip": lambda structure, args: _cmd_roundtrip(structure),
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "sweep":
            code, payload = _cmd_sweep(args)
        elif args.verb == "gen":
            code, payload = _cmd_gen(args)
        else:
            obj = _read_input(args.input)
            structure = structure_from_json(obj)
            code, payload = _STRUCTURE_VERBS[args.verb](structure, args)
    except json.JSONDecodeError as exc:
        _emit({"error": f"malformed JSON: {exc}"}, getattr(args, "out", None))
        return EXIT_INPUT
    except ValidationError as exc:
        payload = {"error": str(exc)}
        if exc.report is not None:
            payload["report"] = exc.report.to_json()
        _emit(payload, getattr(args, "out", None))
        return EXIT_INPUT
    except (ValueError, CarrierMismatch, OSError) as exc:
        _emit({"error": str(exc)}, getattr(args, "out", None))
        return EXIT_INPUT
    _emit(payload, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
