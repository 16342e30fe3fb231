"""``kgbench`` command line: validate, skew, verify, ck, dot.

Exit codes: 0 all checks pass, 1 a check failed, 2 unusable input,
3 only untested results remain and ``--strict`` was given.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import actions as act
from . import suites
from .ck import CKAlgebra
from .kgraph import KGraphError, validate_kgraph
from .monoid import FiniteGroup, FreeAbelian, group_by_name
from .report import Report
from .specfile import SpecError, SpecFile, load_spec, spec_from_graph

SUITES = ("lemma21", "ck-engine", "gross-tucker", "thm51", "main", "dilation-hyp", "aperiodicity")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _tuple(text: str | None):
    if text is None:
        return None
    return tuple(int(x) for x in text.replace(" ", "").split(","))


def exit_code(report: Report, strict: bool = False) -> int:
    if report.failures:
        return EXIT_FAIL
    if strict and report.untested:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def emit(report: Report, fmt: str, full: bool = False, out=None):
    out = out or sys.stdout
    if fmt == "structured":
        out.write(json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(report.render(full) + "\n")


def _fit(value, rank: int, what: str):
    if value is None:
        return None
    if len(value) == 1 and rank > 1:
        value = value * rank
    if len(value) != rank:
        raise UsageError(f"{what} needs {rank} coordinates")
    return value


# -- commands ------------------------------------------------------------------

def cmd_validate(args) -> int:
    spec = load_spec(args.file)
    g = spec.graph()
    rep = validate_kgraph(g)
    emit(rep, args.report, args.full)
    return exit_code(rep, args.strict)


def cmd_skew(args) -> int:
    spec = load_spec(args.file)
    g = spec.graph()
    m = spec.monoid()
    eta = spec.functor_values(m)
    window = _tuple(args.window) or spec.window
    if window is None and not isinstance(m, FiniteGroup):
        raise UsageError("skew needs --window (or a WINDOW section) for an infinite monoid")
    try:
        sk = act.skew_product(g, eta, m, window)
    except act.FunctorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    out = spec_from_graph(sk.graph, name=f"{g.name or 'graph'}-skew")
    text = out.to_text()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_ck(args) -> int:
    spec = load_spec(args.file)
    alg = CKAlgebra(spec.graph())
    try:
        x = alg.parse(args.expr)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.normal_form:
        x = x.normal_form()
    print(alg.dump(x) if x.terms else "0")
    return EXIT_OK


def cmd_dot(args) -> int:
    g = load_spec(args.file).graph()
    colors = ["blue", "red", "darkgreen", "orange", "purple"]
    print(f'digraph "{g.name or "kgraph"}" {{')
    for v in g.vertices:
        print(f'  "{v}";')
    for e in g.edges.values():
        c = colors[(e.color - 1) % len(colors)]
        print(f'  "{e.source}" -> "{e.range}" [label="{e.id}", color={c}];')
    print("}")
    return EXIT_OK


def _need(spec: SpecFile, *sections):
    for s in sections:
        present = {"FUNCTOR": spec.functor is not None, "ACTION": spec.action is not None}[s]
        if not present:
            raise UsageError(f"this suite needs a {s} section")


def run_suite(spec: SpecFile, suite: str, args) -> Report:
    g = spec.graph()
    k = g.rank
    window = _fit(_tuple(args.window), k, "--window") or spec.window
    bound = _fit(_tuple(args.bound), k, "--bound")
    depth = _fit(_tuple(args.depth), k, "--depth")
    if suite == "lemma21":
        return suites.lemma21_suite(g, args.samples or 100, args.seed)
    if suite == "ck-engine":
        return suites.ck_engine_suite(g, args.samples or 200, args.seed)
    if suite == "aperiodicity":
        return suites.aperiodicity_suite(g, bound or (2,) * k, depth or (2,) * k)
    if suite == "gross-tucker":
        if spec.action is not None:
            a = spec.build_action(g)
            return suites.gross_tucker_suite(a, window, bound)
        _need(spec, "FUNCTOR")
        m = spec.monoid()
        window = window or (None if isinstance(m, FiniteGroup) else (3,) * m.dim)
        sk, lt = suites.skew_setup(g, spec.functor_values(m), m, window)
        return suites.gross_tucker_suite(lt, window, bound, skew=sk)
    if suite == "thm51":
        _need(spec, "FUNCTOR")
        m = spec.monoid()
        if isinstance(m, FiniteGroup):
            return suites.thm51_suite(g, spec.functor_values(m), m, bound)
        rep = Report("thm51")
        c = spec.functor_values(m)
        for name in args.groups.split(","):
            G = group_by_name(name.strip())
            rep.extend(suites.thm51_suite(g, suites.reduce_functor(c, G), G, bound), f"{G.name}: ")
        return rep
    if suite == "main":
        _need(spec, "FUNCTOR")
        m = spec.monoid()
        if not isinstance(m, FreeAbelian):
            raise UsageError("the main suite needs MONOID NAT d")
        return suites.main_suite(g, spec.functor_values(m), m, window or (3,) * m.dim, bound)
    if suite == "dilation-hyp":
        _need(spec, "FUNCTOR")
        m = spec.monoid()
        if not isinstance(m, FreeAbelian):
            raise UsageError("the dilation-hyp suite needs MONOID NAT d")
        radius = max(window) if window else 2
        return suites.dilation_suite(g, spec.functor_values(m), m.dim, radius)
    raise UsageError(f"unknown suite {suite!r}")


def cmd_verify(args) -> int:
    spec = load_spec(args.file)
    rep = run_suite(spec, args.suite, args)
    emit(rep, args.report, args.full)
    return exit_code(rep, args.strict)


# -- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kgbench", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file")
        sp.add_argument("--report", choices=("plain", "structured"), default="plain")
        sp.add_argument("--full", action="store_true", help="print witnesses for passing checks too")
        sp.add_argument("--strict", action="store_true", help="exit 3 when untested results remain")

    sp = sub.add_parser("validate", help="check the k-graph axioms")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("skew", help="write the skew product restricted to a window")
    sp.add_argument("file")
    sp.add_argument("--window")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_skew)

    sp = sub.add_parser("verify", help="run a verification suite")
    common(sp)
    sp.add_argument("--suite", required=True, choices=SUITES)
    sp.add_argument("--window")
    sp.add_argument("--bound")
    sp.add_argument("--depth")
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--groups", default="Z2,Z3", help="finite groups for thm51 (default Z2,Z3)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("ck", help="evaluate a CK element literal and dump its terms")
    sp.add_argument("file")
    sp.add_argument("expr")
    sp.add_argument("--normal-form", action="store_true")
    sp.set_defaults(func=cmd_ck)

    sp = sub.add_parser("dot", help="export the coloured skeleton in DOT format")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_dot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except act.FunctorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SpecError, UsageError, KGraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
