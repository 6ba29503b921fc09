"""Versioned JSON documents holding a stratified poset and optionally a
sheaf complex on it. See ``schema/document.schema.json``."""

from __future__ import annotations

from fractions import Fraction
from importlib import resources
import json

import jsonschema

from .linalg import ChainMap, CochainComplex, ComplexError, RatMatrix
from .poset import Cell, StratifiedPoset, Stratum
from .sheaf import SheafComplex

FORMAT = "cellperv"
VERSION = 1


class DocumentError(ValueError):
    """Malformed document; the message names the offending location."""


def _schema() -> dict:
    return json.loads(resources.files("cellperv").joinpath("schema/document.schema.json").read_text())


_VALIDATOR = None


def _validator():
    global _VALIDATOR
    if _VALIDATOR is None:
        _VALIDATOR = jsonschema.Draft202012Validator(_schema())
    return _VALIDATOR


# -- writing ------------------------------------------------------------------


def _rat(v) -> str:
    return str(Fraction(v))


def _sparse(m: RatMatrix) -> list:
    return [[i, j, _rat(v)] for i, j, v in m.entries()]


def poset_to_json(p: StratifiedPoset) -> dict:
    return {
        "geometric": p.geometric,
        "strata": [{"id": s.id, "pdim": s.pdim} for s in p.strata.values()],
        "cells": [{"id": c.id, "cell_dim": c.cell_dim, "stratum": c.stratum} for c in p.cells.values()],
        "covers": [list(c) for c in p.covers],
    }


def sheaf_to_json(a: SheafComplex) -> dict:
    stalks = {}
    for x, c in a.stalks.items():
        if c.is_zero():
            continue
        entry = {"dims": {str(k): v for k, v in c.dims.items()}}
        diffs = {str(k): _sparse(d) for k, d in sorted(c.diffs.items())}
        if diffs:
            entry["differentials"] = diffs
        stalks[x] = entry
    restrictions = []
    for (x, y) in a.base.covers:
        f = a.restrictions[(x, y)]
        comps = {str(k): _sparse(m) for k, m in sorted(f.components.items())}
        if comps:
            restrictions.append({"source": x, "target": y, "components": comps})
    return {"stalks": stalks, "restrictions": restrictions}


def to_document(p: StratifiedPoset, a: SheafComplex | None = None) -> dict:
    doc = {"format": FORMAT, "version": VERSION, "poset": poset_to_json(p)}
    if a is not None:
        doc["sheaf"] = sheaf_to_json(a)
    return doc


def dumps(p: StratifiedPoset, a: SheafComplex | None = None) -> str:
    return json.dumps(to_document(p, a), indent=2) + "\n"


# -- reading ------------------------------------------------------------------


def _matrix(triples: list, nrows: int, ncols: int, where: str) -> RatMatrix:
    entries = []
    for n, (i, j, v) in enumerate(triples):
        try:
            val = Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise DocumentError(f"{where}[{n}]: {v!r} is not an exact rational") from None
        if i >= nrows or j >= ncols:
            raise DocumentError(f"{where}[{n}]: entry ({i}, {j}) outside a {nrows}x{ncols} matrix")
        entries.append((i, j, val))
    return RatMatrix.from_entries(nrows, ncols, entries)


def from_document(doc: dict) -> tuple[StratifiedPoset, SheafComplex | None]:
    errors = sorted(_validator().iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        path = "/".join(str(s) for s in e.absolute_path) or "<root>"
        raise DocumentError(f"at {path}: {e.message}")
    pj = doc["poset"]
    try:
        poset = StratifiedPoset(
            [Cell(c["id"], c["cell_dim"], c["stratum"]) for c in pj["cells"]],
            [tuple(c) for c in pj["covers"]],
            [Stratum(s["id"], s["pdim"]) for s in pj["strata"]],
            geometric=pj.get("geometric", False))
    except ValueError as e:
        raise DocumentError(f"at poset: {e}") from None
    sj = doc.get("sheaf")
    if sj is None:
        return poset, None
    stalks = {}
    for x, sd in sj["stalks"].items():
        if x not in poset.cells:
            raise DocumentError(f"at sheaf/stalks/{x}: unknown cell")
        dims = {int(k): v for k, v in sd["dims"].items()}
        diffs = {}
        for k, triples in sd.get("differentials", {}).items():
            k = int(k)
            diffs[k] = _matrix(triples, dims.get(k + 1, 0), dims.get(k, 0),
                               f"sheaf/stalks/{x}/differentials/{k}")
        try:
            stalks[x] = CochainComplex(dims, diffs, check=False)
        except ComplexError as e:
            raise DocumentError(f"at sheaf/stalks/{x}: {e}") from None
    zero = CochainComplex.zero()
    covers = set(poset.covers)
    maps = {}
    for n, rj in enumerate(sj["restrictions"]):
        x, y = rj["source"], rj["target"]
        where = f"sheaf/restrictions/{n}"
        if (x, y) not in covers:
            raise DocumentError(f"at {where}: ({x}, {y}) is not a covering relation")
        if (x, y) in maps:
            raise DocumentError(f"at {where}: duplicate restriction ({x}, {y})")
        sx, sy = stalks.get(x, zero), stalks.get(y, zero)
        comps = {}
        for k, triples in rj["components"].items():
            k = int(k)
            comps[k] = _matrix(triples, sy.dim(k), sx.dim(k), f"{where}/components/{k}")
        try:
            maps[(x, y)] = ChainMap(sx, sy, comps, check=False)
        except ComplexError as e:
            raise DocumentError(f"at {where}: {e}") from None
    return poset, SheafComplex(poset, stalks, maps)


def loads(text: str) -> tuple[StratifiedPoset, SheafComplex | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    return from_document(doc)


def load(path: str) -> tuple[StratifiedPoset, SheafComplex | None]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e.strerror}") from None
    return loads(text)
