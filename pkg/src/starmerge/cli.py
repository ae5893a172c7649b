"""Command-line front end: ``starmerge <command> [-m M] [-n N] ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 size guard.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import formulas
from .colorings import (
    LayeredDigraph,
    coloring_from_merging,
    count_monotone_colorings,
    enumerate_farley_chain_maps,
    farley_map,
)
from .fca import (
    contraordinal_scale,
    enumerate_concepts,
    galois_from_dual_bond,
    star_chain_dual_bonds,
)
from .mergings import (
    MAX_CELLS,
    SizeGuardError,
    antichain_chain_lattice,
    classify,
    eta,
    fibers,
    star_chain_lattice,
)
from .relations import make_chain, make_star

SCHEMA = 1
COMMANDS = ("count", "enumerate", "lattice", "fibers", "galois", "bijection", "verify")
COUNT_METHODS = ("formula", "bruteforce", "fibers", "colorings", "farley")
BIJECTION_METHODS = ("farley", "colorings")


@dataclass(frozen=True)
class CommandConfig:
    command: str
    m: int = 0
    n: int = 0
    method: str = "formula"
    format: str = "text"
    highlight_fibers: bool = False
    max_m: int = 3
    max_n: int = 3


def _guard(m: int, n: int) -> None:
    if (m + 1) * n > MAX_CELLS:
        raise SizeGuardError(
            f"(m+1)*n = {(m + 1) * n} exceeds the brute-force limit of {MAX_CELLS}"
        )


def _dump(obj) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, indent=2)


def _fmt_pairs(pairs) -> str:
    return "{" + ", ".join(f"({a},{b})" for a, b in pairs) + "}"


# -- counting -----------------------------------------------------------------


def count(m: int, n: int, method: str) -> int:
    if method == "formula":
        return formulas.F_sc(m, n)
    if method == "fibers":
        return formulas.nested_sum(m, n)
    if method == "colorings":
        return count_monotone_colorings(LayeredDigraph.tripartite(m), n + 1)
    _guard(m, n)
    if method == "bruteforce":
        return len(star_chain_lattice(m, n))
    if method == "farley":
        return len({farley_map(z).key for z in enumerate_farley_chain_maps(m, n)})
    raise ValueError(f"unknown method {method!r}")


def _cmd_count(cfg: CommandConfig) -> tuple[int, str]:
    value = count(cfg.m, cfg.n, cfg.method)
    if cfg.format == "json":
        return 0, _dump({"m": cfg.m, "n": cfg.n, "method": cfg.method, "count": value})
    return 0, str(value)


# -- enumeration and lattice --------------------------------------------------


def _cmd_enumerate(cfg: CommandConfig) -> tuple[int, str]:
    _guard(cfg.m, cfg.n)
    lat = star_chain_lattice(cfg.m, cfg.n)
    if cfg.format == "json":
        return 0, _dump({"m": cfg.m, "n": cfg.n, "mergings": [x.to_dict() for x in lat]})
    lines = [
        f"{i}\tR={_fmt_pairs(x.r.label_pairs())}\tT={_fmt_pairs(x.t.label_pairs())}"
        for i, x in enumerate(lat)
    ]
    return 0, "\n".join(lines)


def _fiber_groups(lat) -> list[list[int]]:
    return sorted(fibers(lat).values())


def _cmd_lattice(cfg: CommandConfig) -> tuple[int, str]:
    _guard(cfg.m, cfg.n)
    lat = star_chain_lattice(cfg.m, cfg.n)
    groups = _fiber_groups(lat)
    if cfg.format == "dot":
        clusters = [g for g in groups if len(g) > 1] if cfg.highlight_fibers else None
        return 0, lat.to_dot(clusters=clusters, name=f"SC_{cfg.m}_{cfg.n}")
    if cfg.format == "json":
        payload = {
            "m": cfg.m,
            "n": cfg.n,
            "elements": [x.to_dict() for x in lat],
            "covers": [list(e) for e in lat.covers()],
            "bottom": lat.bottom,
            "top": lat.top,
        }
        if cfg.highlight_fibers:
            payload["fibers"] = groups
        return 0, _dump(payload)
    lines = [f"{len(lat)} elements, bottom {lat.bottom}, top {lat.top}"]
    lines += [f"{a} < {b}" for a, b in lat.covers()]
    if cfg.highlight_fibers:
        lines += ["fibers:"] + ["  " + " ".join(map(str, g)) for g in groups]
    return 0, "\n".join(lines)


def _cmd_fibers(cfg: CommandConfig) -> tuple[int, str]:
    _guard(cfg.m, cfg.n)
    sc = star_chain_lattice(cfg.m, cfg.n)
    ac = antichain_chain_lattice(cfg.m, cfg.n)
    observed: dict[bytes, int] = {}
    for x in sc:
        key = eta(x).key
        observed[key] = observed.get(key, 0) + 1
    rows = []
    for i, y in enumerate(ac):
        cls = classify(y)
        rows.append(
            {
                "index": i,
                "k1": cls.k1,
                "k2": cls.k2,
                "l": cls.l,
                "fiber_size": formulas.fiber_size(cls.k1, cls.l),
                "observed": observed.get(y.key, 0),
            }
        )
    total = sum(r["observed"] for r in rows)
    if cfg.format == "json":
        return 0, _dump({"m": cfg.m, "n": cfg.n, "classes": rows, "total": total})
    lines = ["idx  k1  k2   l  formula  observed"]
    lines += [
        f"{r['index']:>3} {r['k1']:>3} {r['k2']:>3} {r['l']:>3} {r['fiber_size']:>8} {r['observed']:>9}"
        for r in rows
    ]
    lines.append(f"total {total} over {len(rows)} classes")
    return 0, "\n".join(lines)


# -- Galois connections -------------------------------------------------------


def _cmd_galois(cfg: CommandConfig) -> tuple[int, str]:
    _guard(cfg.m, cfg.n)
    kc = contraordinal_scale(make_chain(cfg.n))
    ks = contraordinal_scale(make_star(cfg.m))
    left, right = enumerate_concepts(kc), enumerate_concepts(ks)
    entries = []
    for bond in star_chain_dual_bonds(cfg.m, cfg.n):
        gc = galois_from_dual_bond(bond, kc, ks, left, right)
        entries.append({"bond": [list(p) for p in bond.label_pairs()], **gc.table()})
    if cfg.format == "json":
        return 0, _dump({"m": cfg.m, "n": cfg.n, "connections": entries})

    def ext(labels) -> str:
        return "{" + ",".join(labels) + "}"

    lines = []
    for i, e in enumerate(entries):
        lines.append(f"# {i}: bond {_fmt_pairs(e['bond'])}")
        lines += [f"  phi {ext(a)} -> {ext(b)}" for a, b in e["phi"]]
        lines += [f"  psi {ext(a)} -> {ext(b)}" for a, b in e["psi"]]
    lines.append(f"{len(entries)} Galois connections")
    return 0, "\n".join(lines)


# -- bijections ---------------------------------------------------------------


def _cmd_bijection(cfg: CommandConfig) -> tuple[int, str]:
    _guard(cfg.m, cfg.n)
    rows = []
    if cfg.method == "farley":
        for z in enumerate_farley_chain_maps(cfg.m, cfg.n):
            x = farley_map(z)
            rows.append(
                {
                    "zeta": [d.label for d in z.images],
                    "R": [list(p) for p in x.r.label_pairs()],
                    "T": [list(p) for p in x.t.label_pairs()],
                }
            )
        head = ("zeta", "R", "T")
    else:
        for y in antichain_chain_lattice(cfg.m, cfg.n):
            rows.append(
                {
                    "R": [list(p) for p in y.r.label_pairs()],
                    "T": [list(p) for p in y.t.label_pairs()],
                    "coloring": coloring_from_merging(y).to_dict(),
                }
            )
        head = ("R", "T", "coloring")
    if cfg.format == "json":
        return 0, _dump({"m": cfg.m, "n": cfg.n, "method": cfg.method, "rows": rows})

    def cell(key, row) -> str:
        if key == "zeta":
            return " ".join(row[key])
        if key == "coloring":
            layers: dict[int, list[str]] = {}
            for v in row[key]:
                layers.setdefault(v["layer"], []).append(str(v["color"]))
            return " | ".join(" ".join(c) for _, c in sorted(layers.items()))
        return _fmt_pairs(row[key])

    table = [head] + [tuple(cell(k, r) for k in head) for r in rows]
    widths = [max(len(t[i]) for t in table) for i in range(len(head))]
    return 0, "\n".join("  ".join(c.ljust(w) for c, w in zip(t, widths)).rstrip() for t in table)


# -- verification grid --------------------------------------------------------


def verify_grid(max_m: int, max_n: int) -> list[dict]:
    """Every counting route for each ``(m, n)``; brute-force routes only within the guard."""
    out = []
    for m in range(max_m + 1):
        for n in range(max_n + 1):
            row: dict = {"m": m, "n": n}
            for method in COUNT_METHODS:
                try:
                    row[method] = count(m, n, method)
                except SizeGuardError:
                    row[method] = None
            row["C(m,n+1)"] = formulas.C(m, n + 1)
            row["identity"] = formulas.verify_appendix_identity(m, n)
            values = {v for k, v in row.items() if k in COUNT_METHODS + ("C(m,n+1)",) and v is not None}
            row["galois"] = (
                len(star_chain_dual_bonds(m, n)) == formulas.galois_count(m, n)
                if (m + 1) * n <= MAX_CELLS
                else None
            )
            row["ok"] = len(values) == 1 and row["identity"] and row["galois"] is not False
            out.append(row)
    return out


def _cmd_verify(cfg: CommandConfig) -> tuple[int, str]:
    grid = verify_grid(cfg.max_m, cfg.max_n)
    status = 0 if all(r["ok"] for r in grid) else 1
    if cfg.format == "json":
        return status, _dump({"max_m": cfg.max_m, "max_n": cfg.max_n, "grid": grid})
    cols = ["m", "n", *COUNT_METHODS, "C(m,n+1)", "identity", "galois", "ok"]

    def show(v) -> str:
        if v is None:
            return "-"
        if isinstance(v, bool):
            return "yes" if v else "NO"
        return str(v)

    table = [cols] + [[show(r[c]) for c in cols] for r in grid]
    widths = [max(len(t[i]) for t in table) for i in range(len(cols))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(t, widths)) for t in table]
    lines.append("all methods agree" if status == 0 else "DISAGREEMENT")
    return status, "\n".join(lines)


HANDLERS = {
    "count": _cmd_count,
    "enumerate": _cmd_enumerate,
    "lattice": _cmd_lattice,
    "fibers": _cmd_fibers,
    "galois": _cmd_galois,
    "bijection": _cmd_bijection,
    "verify": _cmd_verify,
}


def run(cfg: CommandConfig) -> tuple[int, str]:
    """Execute one command; returns ``(exit status, output text)``."""
    return HANDLERS[cfg.command](cfg)


# -- argument parsing ---------------------------------------------------------


def _nonneg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starmerge",
        description="Proper mergings of stars and chains: counts, lattices and bijections.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("text", "json"), mn=True):
        if mn:
            p.add_argument("-m", type=_nonneg, required=True, help="arms of the star")
            p.add_argument("-n", type=_nonneg, required=True, help="length of the chain")
        p.add_argument("--format", choices=formats, default="text")
        p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
        return p

    p = common(sub.add_parser("count", help="number of proper mergings"))
    p.add_argument("--method", choices=COUNT_METHODS, default="formula")
    common(sub.add_parser("enumerate", help="list every proper merging"))
    p = common(sub.add_parser("lattice", help="the merging lattice"), formats=("text", "json", "dot"))
    p.add_argument("--highlight-fibers", action="store_true", help="mark the classes of eta")
    common(sub.add_parser("fibers", help="classification and fiber sizes"))
    common(sub.add_parser("galois", help="Galois connections between chain and star scales"))
    p = common(sub.add_parser("bijection", help="bijection table"))
    p.add_argument("--method", choices=BIJECTION_METHODS, default="farley")
    p = common(sub.add_parser("verify", help="cross-check all counting routes"), mn=False)
    p.add_argument("--max-m", type=_nonneg, default=3)
    p.add_argument("--max-n", type=_nonneg, default=3)
    return parser


def config_from_args(args: argparse.Namespace) -> CommandConfig:
    kwargs = {k: v for k, v in vars(args).items() if k in CommandConfig.__dataclass_fields__}
    return CommandConfig(**kwargs)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(args)
    try:
        status, text = run(cfg)
    except SizeGuardError as exc:
        print(f"starmerge: {exc}", file=sys.stderr)
        return 3
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
