"""Command-line front end.

Subcommands: ``construct`` (run a constructor, print the certified
descriptor, optionally write its recipe), ``verify`` (re-execute a recipe
file and validate), ``scan`` (enumerate realized lattice points as CSV),
``tables`` (the branched-cover invariant tables), ``qset`` (subset gcd
sets) and ``phi`` (the geography transport).  Exit codes: 0 success,
1 validation failure, 2 usage or parameter error.  All output is exact
integer arithmetic.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import coverings, geography, manifolds
from .errors import SymgeoError
from .manifolds import ManifoldDescriptor, derived_invariants
from .recipes import execute_recipe, parse_recipe, serialize_recipe

CSV_HEADER = "constructor,params,chi_h,c1_sq,e,sigma,spin,divisibility,certified"

TABLE_ROWS = ((3, 2), (3, 3), (4, 2), (4, 4), (5, 2), (5, 3), (5, 5), (6, 2), (6, 6))
TABLE_HEADER = "d,m,ma,Delta,e,c1_sq,chi_h,b2_plus,sigma"


def _bool_str(x: bool) -> str:
    return "true" if x else "false"


def _descriptor_lines(name: str, params: str, m: ManifoldDescriptor) -> list[str]:
    inv = derived_invariants(m)
    cert = geography.divisibility(m)
    report = geography.validate(m)
    lines = [
        f"constructor: {name}",
        f"params: {params}",
        f"e: {m.e}",
        f"sigma: {m.sigma}",
        f"c1_sq: {inv.c1_squared}",
        f"chi_h: {inv.chi_h if inv.chi_h is not None else 'undefined'}",
        f"b2_plus: {inv.b2_plus if inv.b2_plus is not None else 'undefined'}",
        f"spin: {_bool_str(m.spin)}",
        f"simply_connected: {_bool_str(m.simply_connected)}",
        f"minimal: {m.minimal}",
        f"divisibility: {cert.value}",
        f"certified: {_bool_str(cert.certified)}",
    ]
    if report.ok:
        lines.append("validation: VALID")
    else:
        lines.append("validation: INVALID " + ",".join(report.failures()))
    return lines


def _csv_row(name: str, params: str, m: ManifoldDescriptor) -> str:
    inv = derived_invariants(m)
    cert = geography.divisibility(m)
    return ",".join(
        [
            name,
            params,
            str(inv.chi_h),
            str(inv.c1_squared),
            str(m.e),
            str(m.sigma),
            _bool_str(m.spin),
            str(cert.value),
            _bool_str(cert.certified),
        ]
    )


def _parse_range(text: str) -> range:
    if ":" in text:
        lo, _, hi = text.partition(":")
        return range(int(lo), int(hi) + 1)
    v = int(text)
    return range(v, v + 1)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --- subcommands -------------------------------------------------------------


def _cmd_construct(args) -> int:
    name = args.constructor
    p = args.params
    if name == "inequivalent_family":
        return _construct_family(p, args)
    builders = {
        "homotopy_elliptic": (2, lambda v: geography.homotopy_elliptic(v[0], v[1])),
        "spin_surface": (3, lambda v: geography.spin_surface(v[0], v[1], v[2])),
        "nonspin_surface": (3, lambda v: geography.nonspin_surface(v[0], v[1], v[2])),
        "negative_c1": (2, lambda v: geography.negative_c1(v[0], v[1])),
        "elliptic_surface": (3, lambda v: manifolds.elliptic_surface(v[0], v[1], v[2])),
        "knot_product": (1, lambda v: manifolds.knot_product(v[0])),
        "surface_bundle_Y": (2, lambda v: manifolds.surface_bundle_y(v[0], v[1])),
        "singular_double_cover": (2, lambda v: coverings.singular_double_cover(v[0], v[1])),
    }
    if name == "catalog":
        if not p:
            print("catalog needs an entry name", file=sys.stderr)
            return 2
        m = manifolds.catalog(p[0], *[int(x) for x in p[1:]])
        params = " ".join(p)
    elif name == "pluricanonical_cover":
        if len(p) != 3:
            print("usage: construct pluricanonical_cover <base> <d> <m>", file=sys.stderr)
            return 2
        base = manifolds.catalog(p[0])
        cover = coverings.CoverParams.from_degrees(int(p[2]), int(p[1]))
        m = coverings.pluricanonical_cover(base, cover)
        params = f"base={p[0]} d={p[1]} m={p[2]}"
    elif name in builders:
        arity, fn = builders[name]
        if len(p) != arity:
            print(f"{name} needs {arity} integer parameters", file=sys.stderr)
            return 2
        values = [int(x) for x in p]
        m = fn(values)
        params = " ".join(p)
    else:
        print(f"unknown constructor {name!r}", file=sys.stderr)
        return 2
    print("\n".join(_descriptor_lines(name, params, m)))
    if args.recipe:
        Path(args.recipe).write_text(serialize_recipe(m.recipe), encoding="utf-8")
    return 0 if geography.validate(m).ok else 1


def _construct_family(p: list[str], args) -> int:
    if len(p) < 4:
        print(
            "usage: construct inequivalent_family <d> <d0,..,dN> <regime> <n|m> [t]",
            file=sys.stderr,
        )
        return 2
    d = int(p[0])
    divisors = [int(x) for x in p[1].split(",")]
    regime = p[2]
    if regime == "c1sq_zero":
        result = geography.inequivalent_family(d, divisors, regime, n=int(p[3]))
    else:
        if len(p) != 5:
            print("positive-c1^2 regimes need m and t", file=sys.stderr)
            return 2
        result = geography.inequivalent_family(
            d, divisors, regime, m=int(p[3]), t=int(p[4])
        )
    w = result.descriptor
    print("\n".join(_descriptor_lines("inequivalent_family", " ".join(p), w)))
    print("q_set: " + " ".join(str(q) for q in sorted(result.q, reverse=True)))
    n_patterns = len(result.canonical_classes)
    big_n = n_patterns.bit_length() - 1
    for mask in range(n_patterns):
        pattern = "".join("-" if mask >> bit & 1 else "+" for bit in range(big_n))
        cert = result.certificates[mask]
        print(f"pattern {pattern}: divisibility {cert.value} certified {_bool_str(cert.certified)}")
    realized = set(result.divisibilities)
    print(f"divisibilities: {' '.join(str(v) for v in sorted(realized, reverse=True))}")
    if args.recipe:
        Path(args.recipe).write_text(serialize_recipe(w.recipe), encoding="utf-8")
    return 0 if realized == set(result.q) else 1


def _cmd_verify(args) -> int:
    text = Path(args.recipe_file).read_text(encoding="utf-8")
    recipe = parse_recipe(text)
    m = execute_recipe(recipe)
    lines = _descriptor_lines(recipe.operation, "from recipe", m)
    print("\n".join(lines))
    return 0 if geography.validate(m).ok else 1


def _scan_points(args):
    regime = args.regime
    if regime == "homotopy_elliptic":
        for n in _parse_range(args.n):
            for d in _parse_range(args.d):
                if n < 1 or d < 1 or (n % 2 == 1 and d % 2 == 0):
                    continue
                yield "homotopy_elliptic", f"n={n};d={d}", geography.homotopy_elliptic(n, d)
    elif regime == "spin":
        for d in _parse_range(args.d):
            if d < 2 or d % 2 != 0:
                continue
            for m in _parse_range(args.m):
                for t in _parse_range(args.t):
                    yield "spin_surface", f"d={d};m={m};t={t}", geography.spin_surface(d, m, t)
    elif regime == "nonspin":
        for d in _parse_range(args.d):
            if d < 1 or d % 2 != 1:
                continue
            for n in _parse_range(args.n):
                if n < 2:
                    continue
                for t in _parse_range(args.t):
                    yield "nonspin_surface", f"d={d};n={n};t={t}", geography.nonspin_surface(d, n, t)
    elif regime == "negative_c1":
        for n in _parse_range(args.n):
            for r in _parse_range(args.r):
                if n < 1 or r < 1:
                    continue
                yield "negative_c1", f"n={n};r={r}", geography.negative_c1(n, r)
    else:
        raise SymgeoError(f"unknown scan regime {regime!r}")


def _cmd_scan(args) -> int:
    rows = [CSV_HEADER]
    recipes_dir = Path(args.recipes) if args.recipes else None
    if recipes_dir:
        recipes_dir.mkdir(parents=True, exist_ok=True)
    for name, params, m in _scan_points(args):
        rows.append(_csv_row(name, params, m))
        if recipes_dir:
            stem = f"{name}_{params.replace('=', '').replace(';', '_')}.txt"
            (recipes_dir / stem).write_text(serialize_recipe(m.recipe), encoding="utf-8")
    _emit("\n".join(rows) + "\n", args.out)
    return 0


def _table_lines(which: str) -> list[str]:
    base = manifolds.catalog(which)
    lines = [f"# {which}", TABLE_HEADER]
    for d, m in TABLE_ROWS:
        p = coverings.CoverParams.from_degrees(m, d)
        cover = coverings.pluricanonical_cover(base, p)
        inv = derived_invariants(cover)
        lines.append(
            ",".join(
                str(v)
                for v in (d, m, p.n, p.delta, cover.e, inv.c1_squared, inv.chi_h,
                          inv.b2_plus, cover.sigma)
            )
        )
    return lines


def _cmd_tables(args) -> int:
    if args.which == "both":
        lines = _table_lines("barlow") + _table_lines("lee_park")
    elif args.which == "barlow":
        lines = _table_lines("barlow")
    elif args.which == "leepark":
        lines = _table_lines("lee_park")
    else:
        print("tables --which must be barlow, leepark or both", file=sys.stderr)
        return 2
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_qset(args) -> int:
    from .lattice import q_set

    divisors = [int(x) for x in args.divisors.split(",")]
    q = q_set(args.d, divisors)
    print(" ".join(str(v) for v in sorted(q, reverse=True)))
    return 0


def _cmd_phi(args) -> int:
    p = coverings.CoverParams.from_degrees(args.m, args.d)
    if args.inverse:
        e, c = coverings.phi_inverse(p, args.e, args.c)
        if e.denominator != 1 or c.denominator != 1:
            print("point is not in the image of the transport", file=sys.stderr)
            return 2
        print(f"{int(e)} {int(c)}")
        return 0
    e_bar, c_bar = coverings.phi_map(p, args.e, args.c)
    print(f"{e_bar} {c_bar}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symgeo",
        description="Exact-arithmetic constructor for simply-connected symplectic "
        "4-manifolds with certified canonical-class divisibility.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="run a constructor and print the descriptor")
    c.add_argument("constructor")
    c.add_argument("params", nargs="*")
    c.add_argument("--recipe", help="write the construction recipe to this path")
    c.set_defaults(fn=_cmd_construct)

    v = sub.add_parser("verify", help="re-execute a recipe file and validate")
    v.add_argument("recipe_file")
    v.set_defaults(fn=_cmd_verify)

    s = sub.add_parser("scan", help="enumerate realized lattice points as CSV")
    s.add_argument("--regime", required=True,
                   choices=["homotopy_elliptic", "spin", "nonspin", "negative_c1"])
    s.add_argument("--n", default="1:4")
    s.add_argument("--d", default="1:4")
    s.add_argument("--m", default="1:2")
    s.add_argument("--t", default="1:2")
    s.add_argument("--r", default="1:2")
    s.add_argument("--out")
    s.add_argument("--recipes", help="also write one recipe file per row into this directory")
    s.set_defaults(fn=_cmd_scan)

    t = sub.add_parser("tables", help="print the branched-cover invariant tables")
    t.add_argument("--which", required=True, choices=["barlow", "leepark", "both"])
    t.add_argument("--out")
    t.set_defaults(fn=_cmd_tables)

    q = sub.add_parser("qset", help="subset gcd set of a divisor list")
    q.add_argument("d", type=int)
    q.add_argument("divisors")
    q.set_defaults(fn=_cmd_qset)

    ph = sub.add_parser("phi", help="apply the geography transport (e, c1^2)")
    ph.add_argument("--m", type=int, required=True)
    ph.add_argument("--d", type=int, required=True)
    ph.add_argument("--inverse", action="store_true")
    ph.add_argument("e", type=int)
    ph.add_argument("c", type=int)
    ph.set_defaults(fn=_cmd_phi)

    return parser


def run_command(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.fn(args)
    except SymgeoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
