"""``cellperv`` command line.

Exit codes: 0 pass, 1 failure or disagreement, 2 unreadable document,
3 hypothesis not satisfied.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import document, fixtures
from .builders import deligne_ic, random_constructible
from .document import DocumentError
from .perversity import (METHODS, NotConstructibleError, perversity_report, verify_lemma_equivalence,
                         verify_proposition)
from .sheaf import (check_constructible, constant_sheaf, skyscraper, validate_sheaf, zero_sheaf)
from .linalg import CochainComplex

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_HYPOTHESIS = 0, 1, 2, 3


def _emit(obj: dict, out) -> None:
    out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _load(path: str, need_sheaf: bool):
    poset, sheaf = document.load(path)
    if need_sheaf and sheaf is None:
        raise DocumentError(f"{path}: document has no sheaf section")
    return poset, sheaf


def _validation(poset, sheaf) -> dict:
    rep = {"poset": [v.to_json() for v in poset.validate()]}
    if sheaf is not None:
        rep["sheaf"] = [v.to_json() for v in validate_sheaf(sheaf)]
        if not rep["sheaf"] and not rep["poset"]:
            rep["constructible"] = [v.to_json() for v in check_constructible(sheaf)]
    rep["valid"] = not any(rep.get(k) for k in ("poset", "sheaf", "constructible"))
    return rep


def _print_violations(rep: dict, out) -> None:
    for section in ("poset", "sheaf", "constructible"):
        for v in rep.get(section, []):
            out.write(f"{section}: {v['kind']}: {v['message']}\n")
    out.write("valid\n" if rep["valid"] else "invalid\n")


def cmd_validate(args, out) -> int:
    poset, sheaf = _load(args.file, need_sheaf=False)
    rep = _validation(poset, sheaf)
    if args.report == "json":
        _emit(rep, out)
    else:
        _print_violations(rep, out)
    return EXIT_OK if rep["valid"] else EXIT_FAIL


def _validated(args, out):
    poset, sheaf = _load(args.file, need_sheaf=True)
    rep = _validation(poset, sheaf)
    if not rep["valid"]:
        _print_violations(rep, sys.stderr)
        return None
    return sheaf


def cmd_check(args, out) -> int:
    sheaf = _validated(args, out)
    if sheaf is None:
        return EXIT_FAIL
    if args.method == "stalkwise" and not sheaf.base.geometric:
        sys.stderr.write("stalkwise conditions need a geometric base (each stratum a manifold "
                         "of real dimension 2*pdim); refusing\n")
        return EXIT_HYPOTHESIS
    conds = METHODS[args.method]
    try:
        rep = perversity_report(sheaf, conds, sets=args.report == "json")
    except NotConstructibleError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_FAIL
    if args.report == "json":
        body = rep.to_json()
        body["method"] = args.method
        _emit(body, out)
    else:
        for c, r in rep.results.items():
            out.write(f"{c}: {'pass' if r.passed else 'fail'}\n")
            for w in r.witnesses:
                where = f"stratum={w.stratum} cell={w.cell}"
                if w.m is not None:
                    where = f"m={w.m} " + where
                out.write(f"  witness {where} k={w.degree} dim={w.dim}\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify(args, out) -> int:
    sheaf = _validated(args, out)
    if sheaf is None:
        return EXIT_FAIL
    if args.prop is not None:
        rep = verify_proposition(sheaf, args.prop)
        _emit(rep.to_json(), out)
        if rep.status == "hypothesis_not_satisfied":
            return EXIT_HYPOTHESIS
        return EXIT_OK if rep.status == "verified" else EXIT_FAIL
    rep = verify_lemma_equivalence(sheaf)
    _emit(rep.to_json(), out)
    return EXIT_OK if rep.agrees else EXIT_FAIL


def cmd_gen(args, out) -> int:
    if args.random is not None:
        if not args.space:
            raise DocumentError("--random needs --space FILE")
        poset, _ = document.load(args.space)
        sheaf = random_constructible(poset, args.random, size=args.size)
    else:
        name = args.fixture
        if name == "ic-cone":
            poset = fixtures.cone()
            sheaf = deligne_ic(poset)
        else:
            try:
                poset = fixtures.get(name)
            except KeyError as e:
                sys.stderr.write(f"{e.args[0]}\n")
                return EXIT_PARSE
            sheaf = None
        if args.sheaf == "constant":
            sheaf = constant_sheaf(poset, args.shift)
        elif args.sheaf == "zero":
            sheaf = zero_sheaf(poset)
        elif args.sheaf == "ic":
            sheaf = deligne_ic(poset.merge_strata_by_dimension()).on_base(poset)
        elif args.sheaf == "skyscraper":
            lowest = min(s.pdim for s in poset.strata.values())
            z = poset.closure(x for x in poset.cells if poset.pdim(x) == lowest)
            sheaf = skyscraper(poset, z, CochainComplex.concentrated(-args.shift))
    text = document.dumps(poset, sheaf)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cellperv",
                                description="Perversity checks for cellular sheaf complexes.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="validate poset, sheaf and constructibility")
    v.add_argument("file")
    v.add_argument("--report", choices=("json", "text"), default="text")
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("check", help="decide support and cosupport conditions")
    c.add_argument("file")
    c.add_argument("--method", choices=tuple(METHODS), default="stratum")
    c.add_argument("--report", choices=("json", "text"), default="text")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("verify", help="cross-check characterizations or the restriction statement")
    g = r.add_mutually_exclusive_group(required=True)
    g.add_argument("--lemma", action="store_true")
    g.add_argument("--prop", type=int, metavar="M")
    r.add_argument("file")
    r.set_defaults(func=cmd_verify)

    gen = sub.add_parser("gen", help="emit fixture or random documents")
    src = gen.add_mutually_exclusive_group(required=True)
    src.add_argument("--fixture", metavar="NAME",
                     help="one of: " + ", ".join(sorted(fixtures.FIXTURES) + ["ic-cone"]))
    src.add_argument("--random", type=int, metavar="SEED")
    gen.add_argument("--space", metavar="FILE", help="space document for --random")
    gen.add_argument("--size", type=int, default=3, help="max number of pieces for --random")
    gen.add_argument("--sheaf", choices=("constant", "zero", "skyscraper", "ic"),
                     help="attach a sheaf to the fixture")
    gen.add_argument("--shift", type=int, default=0, help="shift for --sheaf constant/skyscraper")
    gen.add_argument("-o", "--output", metavar="FILE")
    gen.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except DocumentError as e:
        sys.stderr.write(f"parse error: {e}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
