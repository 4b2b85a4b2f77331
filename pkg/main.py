"""
sandpile-resolutions – command-line entry point
===============================================

Builds and checks minimal free resolutions of the G-parking ideal M_G and the
toppling ideal I_G of a connected multigraph with a sink.

Flow of every command:

  1. Read the graph (file path or inline edge list) and move the sink to n
  2. Build what the command asks for:
       betti        Betti numbers from n-acyclic partition counts (--oracle cross-checks)
       generators   minimal generators of M_G
       resolve      F0 (--ideal mg), F1 (ig) or Ft (t) as text, JSON or a Macaulay2 script
       partitions   n-acyclic k-partitions, optionally with their chip-firing classes
       stars        j-star decomposition and the star Betti formula
       cw           the labeled cell poset Part(G), optionally with its checks
       verify       the verification suite
  3. Write the result to stdout or --output

Exit codes:
  0  success
  1  a verification check failed
  2  usage or input error
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import colorlog
import pandas as pd

import config.settings as cfg
from src.cw_part import build_part, check_boundary_spheres, check_cellular_acyclicity, check_label_lcm, check_meets, to_json
from src.formats import cas_script, complex_to_dict, complex_to_text, partition_to_dict
from src.graph import Multigraph, parse_graph
from src.multipoly import render_monomial
from src.partitions import ChipClass, divisor_of, n_acyclic_partitions
from src.resolution import betti, build_F0, build_F1, build_Ft, minimal_generators_MG, weight_vector
from src.verification import CHECKS, betti_oracle, jstar_decompose, printed_star_formula, run_checks, star_betti_formula


# ── Logging setup ─────────────────────────────────────────────────────────────

def _setup_logging(verbose: bool = False) -> None:
    root = logging.getLogger()
    root.setLevel(logging.INFO if verbose else cfg.LOG_LEVEL)
    if root.handlers:
        return

    fmt = "%(log_color)s%(asctime)s [%(levelname)s] %(message)s%(reset)s"
    handler = colorlog.StreamHandler()
    handler.setFormatter(colorlog.ColoredFormatter(fmt))
    root.addHandler(handler)

    if cfg.LOG_FILE:
        file_handler = logging.FileHandler(cfg.LOG_FILE, encoding="utf-8")
        file_handler.setFormatter(
            logging.Formatter("%(asctime)s [%(levelname)s] %(name)s: %(message)s")
        )
        root.addHandler(file_handler)


logger = logging.getLogger(__name__)


# ── Argument parsing ──────────────────────────────────────────────────────────

def _lambda_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("graph", help="graph file (.json or edge list) or an inline edge list such as '1 2 1 / 2 3 1'")
    common.add_argument("--sink", type=int, default=None, help="1-based sink vertex (default: n)")
    common.add_argument("--seed", type=int, default=None, help=f"generic-point seed (default: {cfg.SEED})")
    common.add_argument("--output", type=Path, default=None, help="write output here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress at INFO level")

    weights = argparse.ArgumentParser(add_help=False)
    weights.add_argument("--lambda", dest="lam", type=_lambda_arg, default=None, help="weight vector, e.g. 2,2,2,1")
    weights.add_argument("--t-weight", type=int, default=cfg.DEFAULT_T_WEIGHT, help="weight of t")

    parser = argparse.ArgumentParser(
        prog="sandpile-resolutions",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("betti", parents=[common], help="Betti numbers")
    p.add_argument("--oracle", action="store_true", help="cross-check with the lcm-lattice oracle")

    sub.add_parser("generators", parents=[common], help="minimal generators of M_G")

    p = sub.add_parser("resolve", parents=[common, weights], help="print a resolution")
    p.add_argument("--ideal", choices=("mg", "ig", "t"), default=cfg.DEFAULT_IDEAL)
    p.add_argument("--format", choices=("text", "json", "cas-script"), default=cfg.DEFAULT_FORMAT)

    p = sub.add_parser("partitions", parents=[common], help="n-acyclic k-partitions")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--classes", action="store_true", help="list every member of each chip-firing class")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("stars", parents=[common], help="j-star decomposition of F0")
    p.add_argument("-j", type=int, required=True, help="1-based non-sink vertex")

    p = sub.add_parser("cw", parents=[common], help="the cell poset Part(G)")
    p.add_argument("--check", action="store_true", help="run the label, acyclicity, sphere and meet checks")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("verify", parents=[common, weights], help="run the verification suite")
    p.add_argument("--all", action="store_true", help="every check (the default)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    for name in CHECKS:
        p.add_argument(f"--{name}", action="store_true")
    return parser


def _read_graph(args) -> Multigraph:
    path = Path(args.graph)
    try:
        is_file = path.is_file()
    except OSError:
        # inline edge lists can be too long to be a file name
        is_file = False
    text = path.read_text(encoding="utf-8") if is_file else args.graph
    return parse_graph(text, sink=args.sink)


def _emit(text: str, output: Path | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")
        logger.info("Wrote %s", output)


# ── Commands ──────────────────────────────────────────────────────────────────

def _cmd_betti(g: Multigraph, args) -> tuple[str, int]:
    values = betti(g)
    lines = [" ".join(map(str, values))]
    if not args.oracle:
        return lines[0], 0
    oracle = betti_oracle(g)
    lines.append("oracle: " + " ".join(map(str, oracle.totals)))
    return "\n".join(lines), 0 if oracle.totals == values else 1


def _cmd_generators(g: Multigraph, args) -> tuple[str, int]:
    return "\n".join(render_monomial(g.n, m) for m in minimal_generators_MG(g)), 0


def _cmd_resolve(g: Multigraph, args) -> tuple[str, int]:
    if args.format == "cas-script":
        return cas_script(g, args.ideal), 0
    if args.ideal == "mg":
        f = build_F0(g)
    elif args.ideal == "ig":
        f = build_F1(g)
    else:
        f = build_Ft(g, weight_vector(g, args.lam, args.t_weight))
    if args.format == "json":
        return json.dumps(complex_to_dict(f), indent=2), 0
    return complex_to_text(f), 0


def _cmd_partitions(g: Multigraph, args) -> tuple[str, int]:
    found = n_acyclic_partitions(g, args.k)
    if args.format == "json":
        doc = []
        for c in found:
            entry = partition_to_dict(c) | {"divisor": list(divisor_of(c))}
            if args.classes:
                entry["members"] = [partition_to_dict(m) for m in ChipClass(c).members]
            doc.append(entry)
        return json.dumps(doc, indent=2), 0
    lines = [f"{len(found)} n-acyclic {args.k}-partitions"]
    for c in found:
        lines.append(f"{c.describe():<40} D = {' '.join(map(str, divisor_of(c)))}")
        if args.classes:
            for m in ChipClass(c).members[1:]:
                lines.append(f"    ~ {m.describe()}")
    return "\n".join(lines), 0


def _cmd_stars(g: Multigraph, args) -> tuple[str, int]:
    report = jstar_decompose(g, args.j - 1)
    formula = star_betti_formula(g, args.j - 1)
    lines = [f"maximal {args.j}-stars: {len(report.summands)}"]
    for s in report.summands:
        lines.append(f"  degree {s.degree}, {s.size} vertices: {s.top.describe()}")
    lines.append("census q(r, s):")
    lines.append(report.census_frame().to_string(index=False))
    lines.append("dimensions per degree: " + " ".join(map(str, report.dimensions)))
    lines.append("star Betti formula: " + " ".join(map(str, formula)))
    printed = printed_star_formula(g, args.j - 1)
    if printed != formula:
        lines.append("with C(s-1, k) instead of C(s-1, r-k): " + " ".join(map(str, printed)))
    for problem in report.problems:
        lines.append("FAILED: " + problem)
    ok = report.ok and formula == betti(g)
    return "\n".join(lines), 0 if ok else 1


def _cmd_cw(g: Multigraph, args) -> tuple[str, int]:
    p = build_part(g)
    status = 0
    if args.format == "json":
        text = json.dumps(to_json(p), indent=2)
    else:
        lines = [f"Part(G): cells per dimension {' '.join(str(len(layer)) for layer in p.cells)}"]
        for cell in p.all_cells():
            label = render_monomial(g.n, tuple(p.labels[cell]) + (0,))
            lines.append(f"  {cell[0]}-cell {cell[1] + 1}: {p.cells[cell[0]][cell[1]].describe():<36} label {label}")
        text = "\n".join(lines)
    if args.check:
        acyclic, spheres = check_cellular_acyclicity(p), check_boundary_spheres(p)
        rows = [
            {"check": "label lcm", "ok": check_label_lcm(p)},
            {"check": f"cellular acyclicity ({acyclic.checked} joins)", "ok": acyclic.ok},
            {"check": f"boundary spheres ({spheres.checked} cells)", "ok": spheres.ok},
            {"check": "meets", "ok": check_meets(p)},
        ]
        frame = pd.DataFrame(rows)
        text += "\n" + frame.to_string(index=False)
        status = 0 if frame["ok"].all() else 1
    return text, status


def _cmd_verify(g: Multigraph, args) -> tuple[str, int]:
    names = [name for name in CHECKS if getattr(args, name)]
    if args.all or not names:
        names = list(CHECKS)
    w = None
    if g.n > 1 and (args.lam is not None or args.t_weight != cfg.DEFAULT_T_WEIGHT):
        w = weight_vector(g, args.lam, args.t_weight)
    results = run_checks(g, names, seed=args.seed, w=w)
    rows = [{"check": r.name, "ok": r.ok, "detail": r.detail} for r in results]
    failed = [r.name for r in results if not r.ok]
    for name in failed:
        logger.error("Check failed: %s", name)
    status = 1 if failed else 0
    if args.format == "json":
        return json.dumps(rows, indent=2), status
    return pd.DataFrame(rows).to_string(index=False), status


COMMANDS = {
    "betti": _cmd_betti,
    "generators": _cmd_generators,
    "resolve": _cmd_resolve,
    "partitions": _cmd_partitions,
    "stars": _cmd_stars,
    "cw": _cmd_cw,
    "verify": _cmd_verify,
}


# ── Main ──────────────────────────────────────────────────────────────────────

def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose)
    try:
        g = _read_graph(args)
        text, status = COMMANDS[args.command](g, args)
        _emit(text, args.output)
    except (ValueError, OSError) as exc:
        logger.error("%s", exc)
        return 2
    return status


if __name__ == "__main__":
    sys.exit(main())
