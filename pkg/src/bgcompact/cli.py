"""Command line front end.

    bgcompact weyl {order|reflections|show} <type>
    bgcompact group {nilpotent|pnilpotent -p P|sylow -p P|center|iso <name>} --from <cachefile|builtin>
    bgcompact molien <type|builtin>
    bgcompact pcompact {nt <type>|finite <builtin>|toral <descfile> [-p P]|wreath <n>|quotient <pair> --nu <primes>|pair <pair>}
    bgcompact classify --max-rank N
    bgcompact psi --bound B
    bgcompact reproduce

Every verb takes ``--format json|table``.  Group closures are cached as JSON
under ``--cache-dir`` (default ``$WEYLCACHE_DIR`` or ``./.weylcache``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import fingroup
from .exactmat import ExactMatrix
from .fingroup import (
    CapExceeded,
    FinGroup,
    NotAHomomorphism,
    NotNormal,
    SearchBudgetExceeded,
    UnknownCatalogName,
    catalog_group,
    center,
    close,
    has_complement,
    is_nilpotent,
    is_p_nilpotent,
    iso_to_catalog,
    rep_character_norm,
    sylow,
)
from .pcompact import (
    PrimeSpec,
    ToralDesc,
    classify_pairs,
    is_p_compact_toral,
    is_pi_compact_toral,
    mod3_intertwiner_absent,
    pair_verdict,
    prime_set_finite,
    prime_set_nt,
    prime_set_pair,
    prime_set_quotient,
    prime_set_wreath,
    psi_search,
    toral_primes,
)
from .reflect import invariant_degrees, is_reflection_generated, molien
from .weyl import (
    LieType,
    UnsupportedType,
    parse_pair,
    SubsystemSpec,
    reflections_of,
    root_system,
    subsystem_subgroup,
    supported_types,
    triality_subgroup,
    weyl_group,
)

DEFAULT_CACHE = ".weylcache"


def builtin_group(name: str) -> FinGroup:
    """Resolve a builtin group name: a Lie type (``F4`` or ``W(F4)``), ``W(D4):Z3``, or a catalog name."""
    key = name.strip()
    if key.lower() in ("w(d4):z3", "triality", "d4:z3"):
        return triality_subgroup().as_group(name="W(D4):Z3")
    if key.lower() == "z3cyc":
        return catalog_group("Z/3")
    inner = key[2:-1] if key.upper().startswith("W(") and key.endswith(")") else key
    try:
        return weyl_group(LieType.parse(inner))
    except UnsupportedType:
        if inner is not key:
            raise
    return catalog_group(key)


def load_group(source: str) -> FinGroup:
    path = Path(source)
    if path.suffix == ".json" and path.exists():
        return FinGroup.from_json(json.loads(path.read_text()))
    return builtin_group(source)


# --- report --------------------------------------------------------------------------


@dataclass
class Section:
    title: str
    anchor: str
    rows: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"title": self.title, "anchor": self.anchor, "rows": self.rows}


@dataclass
class ReportBundle:
    sections: list[Section]

    def to_json(self) -> dict:
        return {"sections": [s.to_json() for s in self.sections]}


def _ps_row(**kw) -> dict:
    spec = kw.pop("prime_set")
    return {**kw, "prime_set": spec.to_json(), "set": spec.label()}


def reproduce() -> ReportBundle:
    sections = []

    nt = Section("prime sets of torus normalizers", "normalizer of a maximal torus")
    for t in supported_types():
        W = weyl_group(t)
        nt.rows.append(_ps_row(type=str(t), weyl_order=W.order, prime_set=prime_set_nt(t)))
    sections.append(nt)

    sym = Section("prime sets of symmetric groups", "finite groups: p-nilpotence")
    for n in range(2, 6):
        sym.rows.append(_ps_row(group=f"S{n}", prime_set=prime_set_finite(catalog_group(f"S{n}"))))
    sections.append(sym)

    cls = Section("normal reflection subgroups with nilpotent quotient", "classification of pairs (G, H0)")
    verdicts = classify_pairs(4)
    cls.rows = [v.to_json() for v in verdicts]
    sections.append(cls)

    real = Section("realizability of admitted pairs", "realizability at odd primes and at 2")
    for v in verdicts:
        if v.admitted:
            r = prime_set_pair(v)
            real.rows.append(
                {"pair": v.label, **r.to_json(), "set": r.prime_set.label(), "realizable_at_3": r.realizable_at(3)}
            )
    sections.append(real)

    quo = Section("quotients by finite normal subgroups", "quotient groups H/nu")
    for text, nu in (("D<B2", [2]), ("D<B3", [2]), ("D<B4", [2]), ("A1^2<C2", []), ("A2<G2", [3])):
        amb, spec = parse_pair(text)
        v = pair_verdict(amb, spec)
        quo.rows.append(_ps_row(pair=v.label, nu_primes=nu, prime_set=prime_set_quotient(v, nu)))
    sections.append(quo)

    wr = Section("wreath products Sp(1) wr Sigma_n", "Sp(1) wr Sigma_n for n = 1..4")
    for n in range(1, 5):
        w = prime_set_wreath(n)
        row = _ps_row(n=n, prime_set=w.prime_set)
        row["witnesses"] = w.witnesses
        if n == 3:
            row["reflection_witness"] = w.witnesses["reflection"]
        wr.rows.append(row)
    sections.append(wr)

    tri = Section("reflection generation inside W(F4)", "W(Spin(8)) x| Z/3 in W(F4)")
    F4 = LieType("F", 4)
    groups = [
        ("W(F4)", weyl_group(F4)),
        ("W(D4)", subsystem_subgroup(F4, SubsystemSpec("D4_in_F4")).as_group(name="W(D4)")),
        ("W(D4):Z3", triality_subgroup().as_group(name="W(D4):Z3")),
        ("Z/3 on Q^3", catalog_group("Z/3")),
    ]
    for label, G in groups:
        deg = invariant_degrees(G)
        tri.rows.append(
            {
                "group": label,
                "order": G.order,
                "reflections": len(reflections_of(G)),
                "reflection_generated": is_reflection_generated(G),
                "degrees": list(deg.degrees) if deg else None,
            }
        )
    # the resulting prime set for Spin(8) x| Sigma_3 is stated, not derived
    tri.rows.append({"group": "Spin(8) x| Sigma_3", "set": ">3", "status": "asserted"})
    sections.append(tri)

    psi = Section("conjugating W(G2) to its dual", "psi in GL(2, Z) and mod 3 reductions")
    found = psi_search("G2", 3)
    psi.rows.append({"type": "G2", "psi": found.to_json(), "mod3_intertwiner_absent": mod3_intertwiner_absent("G2")})
    sections.append(psi)

    ext = Section("Q8 extension data", "non-split extension by the center")
    Q8 = catalog_group("Q8")
    ext.rows.append(
        {
            "group": "Q8",
            "complement": has_complement(Q8, center(Q8)),
            "char_norm": rep_character_norm(Q8, 2),
            "order": Q8.order,
        }
    )
    V4 = catalog_group("Z/2xZ/2")
    desc = ToralDesc(1, V4, [ExactMatrix.identity(1)] * len(V4.generators))
    ext.rows.append({"group": "S^1 . (Z/2xZ/2)", "pi_compact_toral": is_pi_compact_toral(desc)})
    sections.append(ext)
    return ReportBundle(sections)


# --- output --------------------------------------------------------------------------


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True)


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, dict) and "variant" in v:
        return PrimeSpec.from_json(v).label()
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return str(v)


def _grid(rows: list[dict]) -> str:
    if not rows:
        return "(none)"
    cols: list[str] = []
    for r in rows:
        cols += [k for k in r if k not in cols]
    if "set" in cols and "prime_set" in cols:
        cols.remove("prime_set")
    cells = [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    line = lambda vals: "  ".join(v.ljust(w) for v, w in zip(vals, widths)).rstrip()
    out = [line(cols), line(["-" * w for w in widths])]
    out += [line(row) for row in cells]
    return "\n".join(out)


def render_table(payload) -> str:
    if isinstance(payload, dict) and "sections" in payload:
        blocks = []
        for s in payload["sections"]:
            blocks.append(f"== {s['title']} [{s['anchor']}] ==\n{_grid(s['rows'])}")
        return "\n\n".join(blocks)
    if isinstance(payload, list) and all(isinstance(r, dict) for r in payload):
        return _grid(payload)
    if isinstance(payload, dict) and "variant" not in payload:
        width = max((len(k) for k in payload), default=0)
        return "\n".join(f"{k.ljust(width)}  {_cell(v)}" for k, v in payload.items())
    return _cell(payload)


# --- verbs ---------------------------------------------------------------------------


def _cmd_weyl(args):
    t = LieType.parse(args.type)
    W = weyl_group(t)
    if args.action == "order":
        return W.order
    if args.action == "reflections":
        refl = reflections_of(W)
        return {"type": str(t), "count": len(refl), "reflections": [W.matrix(i).to_json() for i in refl]}
    rs = root_system(t)
    return {
        "type": str(t),
        "order": W.order,
        "basis": rs.basis,
        "cartan": rs.cartan.to_json(),
        "simple_roots": [list(r) for r in rs.simple_roots],
        "generators": [m.to_json() for m in W.generator_matrices()],
    }


def _cmd_group(args):
    G = load_group(args.source)
    if args.action == "nilpotent":
        return is_nilpotent(G)
    if args.action == "pnilpotent":
        return is_p_nilpotent(G, _need_p(args))
    if args.action == "sylow":
        P = sylow(G, _need_p(args))
        return {"order": P.order, "generators": [G.matrix(g).to_json() for g in P.generators]}
    if args.action == "center":
        Z = center(G)
        return {"order": Z.order, "elements": [G.matrix(int(i)).to_json() for i in Z.elements]}
    if args.name is None:
        raise UnknownCatalogName("iso needs a catalog name")
    return iso_to_catalog(G, args.name)


def _need_p(args) -> int:
    if args.p is None:
        raise ValueError("this action needs -p P")
    return args.p


def _cmd_molien(args):
    G = builtin_group(args.target)
    series = molien(G, args.terms)
    out = series.to_json()
    deg = invariant_degrees(G)
    out["degrees"] = list(deg.degrees) if deg else None
    return out


def _read_desc(path: str) -> ToralDesc:
    data = json.loads(Path(path).read_text())
    pi0 = data["pi0"]
    if "builtin" in pi0:
        group = builtin_group(pi0["builtin"])
    else:
        group = close([ExactMatrix.from_json(m) for m in pi0["generators"]])
    action = [ExactMatrix.from_json(m) for m in data["action"]]
    return ToralDesc(int(data["torus_rank"]), group, action)


def _cmd_pcompact(args):
    a = args.action
    if a == "nt":
        return prime_set_nt(LieType.parse(args.arg)).to_json()
    if a == "finite":
        return prime_set_finite(load_group(args.arg)).to_json()
    if a == "toral":
        d = _read_desc(args.arg)
        if args.p is not None:
            return is_p_compact_toral(d, args.p)
        return {"pi_compact_toral": is_pi_compact_toral(d), "toral_primes": toral_primes(d).to_json()}
    if a == "wreath":
        return prime_set_wreath(int(args.arg)).to_json()
    amb, spec = parse_pair(args.arg)
    v = pair_verdict(amb, spec)
    if a == "quotient":
        nu = [int(p) for p in args.nu.split(",") if p.strip()] if args.nu else []
        return prime_set_quotient(v, nu).to_json()
    return prime_set_pair(v, args.p or 3).to_json()


def _cmd_classify(args):
    return [v.to_json() for v in classify_pairs(args.max_rank)]


def _cmd_psi(args):
    psi = psi_search(args.type, args.bound)
    return {"type": args.type, "psi": psi.to_json(), "mod3_intertwiner_absent": mod3_intertwiner_absent(args.type)}


def _cmd_reproduce(args):
    return reproduce().to_json()


GRAMMAR = __doc__.split("\n\n")[1]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="table")
    parser = argparse.ArgumentParser(
        prog="bgcompact",
        description="Finite group computations for p-compact classifying spaces.",
        epilog="verbs:\n" + GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--cache-dir", default=None, help="group cache directory")
    parser.add_argument("--no-cache", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("weyl", parents=[common])
    p.add_argument("action", choices=("order", "reflections", "show"))
    p.add_argument("type")
    p.set_defaults(func=_cmd_weyl)

    p = sub.add_parser("group", parents=[common])
    p.add_argument("action", choices=("nilpotent", "pnilpotent", "sylow", "center", "iso"))
    p.add_argument("name", nargs="?")
    p.add_argument("-p", type=int)
    p.add_argument("--from", dest="source", required=True)
    p.set_defaults(func=_cmd_group)

    p = sub.add_parser("molien", parents=[common])
    p.add_argument("target")
    p.add_argument("--terms", type=int, default=64)
    p.set_defaults(func=_cmd_molien)

    p = sub.add_parser("pcompact", parents=[common])
    p.add_argument("action", choices=("nt", "finite", "toral", "wreath", "quotient", "pair"))
    p.add_argument("arg")
    p.add_argument("-p", type=int)
    p.add_argument("--nu", default="")
    p.set_defaults(func=_cmd_pcompact)

    p = sub.add_parser("classify", parents=[common])
    p.add_argument("--max-rank", type=int, default=4)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("psi", parents=[common])
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--type", default="G2")
    p.set_defaults(func=_cmd_psi)

    p = sub.add_parser("reproduce", parents=[common])
    p.set_defaults(func=_cmd_reproduce)
    return parser


COMPUTATION_ERRORS = (
    CapExceeded,
    NotNormal,
    SearchBudgetExceeded,
    NotAHomomorphism,
    UnknownCatalogName,
    UnsupportedType,
    ValueError,
    ArithmeticError,
    LookupError,
    OSError,
)


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = int(exc.code or 0)
        if code == 2:
            print("verbs:\n" + GRAMMAR, file=stderr)
        return code
    if args.no_cache:
        fingroup.set_cache_dir(None)
    else:
        fingroup.set_cache_dir(args.cache_dir or os.environ.get("WEYLCACHE_DIR") or DEFAULT_CACHE)
    try:
        payload = args.func(args)
    except COMPUTATION_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    finally:
        fingroup.set_cache_dir(None)
    text = dumps(payload) if args.format == "json" else render_table(payload)
    print(text, file=stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
