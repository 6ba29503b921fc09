"""Support and cosupport conditions for middle perversity.

Three characterizations are implemented independently:

* pointwise (S1/C1): dimensions of the closed sets where stalk or costalk
  cohomology is nonzero;
* stratum-wise (S2/C2): vanishing of ``r_S^*`` and ``r_S^!`` below or above
  ``-dim S``;
* filtration-wise (new support/new cosupport): vanishing of ``u_m^*`` on the
  open sets ``U^m`` and of ``l_m^!`` on the closed sets ``L^m``.

Sheaf-level vanishing is always tested stalk by stalk.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .derived import costalk_cohomology, local_cohomology, restriction_map, stalk_cohomology, \
    hypercohomology
from .linalg import CohomologyTable
from .sheaf import SheafComplex, check_constructible

CONDITIONS = ("S1", "C1", "S2", "C2", "newS", "newC")
METHODS = {"stalkwise": ("S1", "C1"), "stratum": ("S2", "C2"), "filtration": ("newS", "newC")}


class NotConstructibleError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Witness:
    """A cell and degree where a vanishing required by ``condition`` fails.

    ``dim`` is the nonzero cohomology dimension found there. For S1/C1,
    ``set_dim`` is the dimension of the offending support set; ``m`` is the
    filtration index for the new conditions.
    """

    condition: str
    m: int | None
    degree: int
    cell: str
    dim: int
    stratum: str | None = None
    set_dim: int | None = None

    def to_json(self) -> dict:
        out = {"condition": self.condition, "cell": self.cell, "degree": self.degree,
               "dim": self.dim}
        if self.stratum is not None:
            out["stratum"] = self.stratum
        if self.m is not None:
            out["m"] = self.m
        if self.set_dim is not None:
            out["set_dim"] = self.set_dim
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Witness":
        return cls(d["condition"], d.get("m"), d["degree"], d["cell"], d["dim"],
                   d.get("stratum"), d.get("set_dim"))


@dataclass
class ConditionResult:
    condition: str
    witnesses: list[Witness] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.witnesses


def require_constructible(a: SheafComplex) -> None:
    hit = a.cache.get(("constructible",))
    if hit is None:
        hit = a.cache.put(("constructible",), tuple(check_constructible(a)))
    if hit:
        v = hit[0]
        raise NotConstructibleError(f"sheaf is not constructible: {v.message}")


def degree_window(a: SheafComplex) -> range:
    """Degrees scanned for "for all k" statements; every stalk, costalk and
    local cohomology table vanishes outside it."""
    rng = a.degree_range()
    if rng is None:
        return range(0)
    lo, hi = rng
    return range(lo - len(a.base.strata) - 1, hi + a.base.max_cell_dim + 2)


def _stalk(x: str, a: SheafComplex) -> CohomologyTable:
    key = ("stalk_h", x)
    hit = a.cache.get(key)
    return hit if hit is not None else a.cache.put(key, stalk_cohomology(x, a))


def _costalk(x: str, a: SheafComplex) -> CohomologyTable:
    key = ("costalk_h", x)
    hit = a.cache.get(key)
    return hit if hit is not None else a.cache.put(key, costalk_cohomology(x, a))


def _local(x: str, z: frozenset, a: SheafComplex) -> CohomologyTable:
    key = ("local_h", x, z)
    hit = a.cache.get(key)
    return hit if hit is not None else a.cache.put(key, local_cohomology(x, z, a))


def point_costalk(x: str, a: SheafComplex) -> CohomologyTable:
    """Costalk at a point inside the open cell ``x``: the cell costalk moved up
    by ``cell_dim(x)`` degrees."""
    d = a.base.cells[x].cell_dim
    return CohomologyTable({k + d: v for k, v in _costalk(x, a).dims.items()})


def supp_set(k: int, a: SheafComplex) -> frozenset[str]:
    """Closure of the cells whose stalk has ``H^k != 0``."""
    return a.base.closure(x for x in a.base.cells if _stalk(x, a)[k])


def cosupp_set(k: int, a: SheafComplex) -> frozenset[str]:
    """Closure of the cells whose point costalk has ``H^k != 0``."""
    return a.base.closure(x for x in a.base.cells if point_costalk(x, a)[k])


def _scan_degrees(a: SheafComplex, tables) -> list[int]:
    degs = set(degree_window(a))
    for t in tables:
        degs |= set(t.dims)
    return sorted(degs)


def check_S1(a: SheafComplex) -> ConditionResult:
    """``dim supp^{-k} <= k`` for all ``k``."""
    require_constructible(a)
    base = a.base
    tables = {x: _stalk(x, a) for x in base.cells}
    res = ConditionResult("S1")
    for deg in _scan_degrees(a, tables.values()):
        k = -deg
        gens = [x for x in base.cells if tables[x][deg]]
        sdim = base.set_dimension(base.closure(gens))
        if sdim > k:
            for x in gens:
                if base.pdim(x) > k:
                    res.witnesses.append(Witness("S1", None, deg, x, tables[x][deg],
                                                 base.stratum_of(x), sdim))
    res.witnesses.sort()
    return res


def check_C1(a: SheafComplex) -> ConditionResult:
    """``dim cosupp^k <= k`` for all ``k``."""
    require_constructible(a)
    base = a.base
    tables = {x: point_costalk(x, a) for x in base.cells}
    res = ConditionResult("C1")
    for k in _scan_degrees(a, tables.values()):
        gens = [x for x in base.cells if tables[x][k]]
        sdim = base.set_dimension(base.closure(gens))
        if sdim > k:
            for x in gens:
                if base.pdim(x) > k:
                    res.witnesses.append(Witness("C1", None, k, x, tables[x][k],
                                                 base.stratum_of(x), sdim))
    res.witnesses.sort()
    return res


def check_S2(a: SheafComplex) -> ConditionResult:
    """For each stratum ``S`` and ``k > -dim S``, ``H^k(r_S^* A) = 0``."""
    require_constructible(a)
    base = a.base
    res = ConditionResult("S2")
    for sid, s in base.strata.items():
        for x in base.stratum_cells(sid):
            for k, v in _stalk(x, a).dims.items():
                if k > -s.pdim:
                    res.witnesses.append(Witness("S2", None, k, x, v, sid))
    res.witnesses.sort()
    return res


def check_S2_stalkwise(a: SheafComplex) -> ConditionResult:
    """Same condition stated cell by cell: ``H^k(A(x)) = 0`` whenever
    ``k > -pdim(x)``."""
    require_constructible(a)
    res = ConditionResult("S2")
    for x in a.base.cells:
        bound = -a.base.pdim(x)
        for k, v in stalk_cohomology(x, a).dims.items():
            if k > bound:
                res.witnesses.append(Witness("S2", None, k, x, v, a.base.stratum_of(x)))
    res.witnesses.sort()
    return res


def check_C2(a: SheafComplex) -> ConditionResult:
    """For each stratum ``S`` and ``k < -dim S``, ``H^k(r_S^! A) = 0``."""
    require_constructible(a)
    base = a.base
    res = ConditionResult("C2")
    for sid, s in base.strata.items():
        cells = base.stratum_cells(sid)
        z = base.closure(cells)
        for x in cells:
            for k, v in _local(x, z, a).dims.items():
                if k < -s.pdim:
                    res.witnesses.append(Witness("C2", None, k, x, v, sid))
    res.witnesses.sort()
    return res


def check_new_support(a: SheafComplex) -> ConditionResult:
    """For each ``m >= 0`` and ``k > -m``, the stalks on ``U^m`` vanish in
    degree ``k``."""
    require_constructible(a)
    base = a.base
    res = ConditionResult("newS")
    for m in range(0, base.max_pdim + 1):
        for x in base.order(base.upper(m)):
            for k, v in _stalk(x, a).dims.items():
                if k > -m:
                    res.witnesses.append(Witness("newS", m, k, x, v, base.stratum_of(x)))
    res.witnesses.sort()
    return res


def check_new_cosupport(a: SheafComplex) -> ConditionResult:
    """For each ``m >= 0`` and ``k < -m``, ``H^k(l_m^! A) = 0``: local
    cohomology with supports in ``L^m`` vanishes at every cell of ``L^m``."""
    require_constructible(a)
    base = a.base
    res = ConditionResult("newC")
    for m in range(0, base.max_pdim + 1):
        lm = base.lower(m)
        for x in base.order(lm):
            for k, v in _local(x, lm, a).dims.items():
                if k < -m:
                    res.witnesses.append(Witness("newC", m, k, x, v, base.stratum_of(x)))
    res.witnesses.sort()
    return res


CHECKERS = {"S1": check_S1, "C1": check_C1, "S2": check_S2, "C2": check_C2,
            "newS": check_new_support, "newC": check_new_cosupport}


def reverify_witness(w: Witness, a: SheafComplex) -> bool:
    """Recompute the cohomology a witness points at; True iff it is nonzero
    with the reported dimension and the degree violates the bound."""
    base = a.base
    if w.condition in ("S1", "S2", "newS"):
        got = stalk_cohomology(w.cell, a)[w.degree]
    elif w.condition == "C1":
        got = costalk_cohomology(w.cell, a)[w.degree - base.cells[w.cell].cell_dim]
    elif w.condition == "C2":
        got = local_cohomology(w.cell, base.closure(base.stratum_cells(w.stratum)), a)[w.degree]
    elif w.condition == "newC":
        got = local_cohomology(w.cell, base.lower(w.m), a)[w.degree]
    else:
        raise ValueError(f"unknown condition {w.condition!r}")
    if got == 0 or got != w.dim:
        return False
    if w.condition == "S1":
        return base.pdim(w.cell) > -w.degree
    if w.condition == "C1":
        return base.pdim(w.cell) > w.degree
    if w.condition == "S2":
        return w.degree > -base.strata[w.stratum].pdim
    if w.condition == "C2":
        return w.degree < -base.strata[w.stratum].pdim
    if w.condition == "newS":
        return w.degree > -w.m and base.pdim(w.cell) >= w.m
    return w.degree < -w.m and base.pdim(w.cell) <= w.m


@dataclass
class PerversityReport:
    results: dict[str, ConditionResult]
    supports: dict[int, list[str]] = field(default_factory=dict)
    cosupports: dict[int, list[str]] = field(default_factory=dict)

    @property
    def verdicts(self) -> dict[str, bool]:
        return {c: r.passed for c, r in self.results.items()}

    @property
    def witnesses(self) -> list[Witness]:
        return [w for r in self.results.values() for w in r.witnesses]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def to_json(self) -> dict:
        return {
            "verdicts": {c: ("pass" if r.passed else "fail") for c, r in self.results.items()},
            "passed": self.passed,
            "witnesses": [w.to_json() for w in self.witnesses],
            "supports": {str(k): v for k, v in self.supports.items()},
            "cosupports": {str(k): v for k, v in self.cosupports.items()},
        }

    @classmethod
    def from_json(cls, d: dict) -> "PerversityReport":
        results = {c: ConditionResult(c) for c in d["verdicts"]}
        for wj in d["witnesses"]:
            results[wj["condition"]].witnesses.append(Witness.from_json(wj))
        return cls(results, {int(k): v for k, v in d["supports"].items()},
                   {int(k): v for k, v in d["cosupports"].items()})


def perversity_report(a: SheafComplex, conditions=CONDITIONS, sets: bool = True) -> PerversityReport:
    results = {c: CHECKERS[c](a) for c in conditions}
    rep = PerversityReport(results)
    if sets:
        base = a.base
        for k in degree_window(a):
            s = supp_set(k, a)
            if s:
                rep.supports[k] = base.order(s)
            if base.geometric or "C1" in conditions:
                cs = cosupp_set(k, a)
                if cs:
                    rep.cosupports[k] = base.order(cs)
    return rep


# -- the equivalence and the hypercohomology statement ------------------------


@dataclass
class LemmaReport:
    support: dict[str, ConditionResult]
    cosupport: dict[str, ConditionResult]

    @property
    def support_agrees(self) -> bool:
        return self.support["S2"].passed == self.support["newS"].passed

    @property
    def cosupport_agrees(self) -> bool:
        return self.cosupport["C2"].passed == self.cosupport["newC"].passed

    @property
    def agrees(self) -> bool:
        return self.support_agrees and self.cosupport_agrees

    def to_json(self) -> dict:
        def block(rs):
            return {c: {"verdict": "pass" if r.passed else "fail",
                        "witnesses": [w.to_json() for w in r.witnesses]} for c, r in rs.items()}
        return {"agrees": self.agrees, "support_agrees": self.support_agrees,
                "cosupport_agrees": self.cosupport_agrees,
                "support": block(self.support), "cosupport": block(self.cosupport)}


def merged(a: SheafComplex) -> SheafComplex:
    base = a.base.merge_strata_by_dimension()
    return a if base is a.base else a.on_base(base)


def verify_lemma_equivalence(a: SheafComplex) -> LemmaReport:
    """Stratum-wise against filtration-wise conditions, after merging strata
    of equal dimension."""
    a = merged(a)
    return LemmaReport({"S2": check_S2(a), "newS": check_new_support(a)},
                       {"C2": check_C2(a), "newC": check_new_cosupport(a)})


@dataclass
class PropositionRow:
    degree: int
    dim_total: int
    dim_open: int
    rank: int
    requirement: str | None

    @property
    def ok(self) -> bool:
        if self.requirement == "iso":
            return self.rank == self.dim_total == self.dim_open
        if self.requirement == "injective":
            return self.rank == self.dim_total
        return True

    def to_json(self) -> dict:
        return {"degree": self.degree, "dim_X": self.dim_total, "dim_U": self.dim_open,
                "rank": self.rank, "requirement": self.requirement, "ok": self.ok}


@dataclass
class PropositionReport:
    m: int
    status: str  # "verified", "failed" or "hypothesis_not_satisfied"
    rows: list[PropositionRow] = field(default_factory=list)
    hypothesis_witnesses: list[Witness] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"m": self.m, "status": self.status, "rows": [r.to_json() for r in self.rows],
                "hypothesis_witnesses": [w.to_json() for w in self.hypothesis_witnesses]}


def verify_proposition(a: SheafComplex, m: int) -> PropositionReport:
    """Restriction ``H^k(X; A) -> H^k(U^{m+1}; A)`` is an isomorphism for
    ``k <= -m-2`` and injective for ``k = -m-1``, given the cosupport
    condition."""
    if m < 0:
        raise ValueError("m must be >= 0")
    c2 = check_C2(a)
    if not c2.passed:
        return PropositionReport(m, "hypothesis_not_satisfied", hypothesis_witnesses=c2.witnesses)
    base = a.base
    whole = frozenset(base.cells)
    opens = base.upper(m + 1)
    f = restriction_map(opens, whole, a)
    hx, hu = hypercohomology(whole, a), hypercohomology(opens, a)
    degs = sorted(set(degree_window(a)) | set(hx.dims) | set(hu.dims))
    rows = []
    for k in degs:
        req = "iso" if k <= -m - 2 else ("injective" if k == -m - 1 else None)
        rows.append(PropositionRow(k, hx[k], hu[k], f.induced_rank(k), req))
    status = "verified" if all(r.ok for r in rows) else "failed"
    return PropositionReport(m, status, rows)


@dataclass
class RemarkReport:
    status: str  # "checked" or "skipped"
    contained: bool | None = None
    c2_passed: bool | None = None
    violations: list[tuple[int, str]] = field(default_factory=list)
    notice: str = ""

    @property
    def agrees(self) -> bool | None:
        if self.status != "checked":
            return None
        return self.contained == self.c2_passed

    def to_json(self) -> dict:
        return {"status": self.status, "contained": self.contained, "C2": self.c2_passed,
                "agrees": self.agrees, "violations": [list(v) for v in self.violations],
                "notice": self.notice}


def verify_remark_containment(a: SheafComplex) -> RemarkReport:
    """``cosupp^k ⊆ L^k`` for every ``k``, compared against C2. Only
    meaningful when each stratum models a manifold of real dimension
    ``2 pdim``."""
    base = a.base
    if not base.geometric:
        return RemarkReport("skipped", notice="base is not flagged geometric; check skipped")
    require_constructible(a)
    violations = []
    tables = [point_costalk(x, a) for x in base.cells]
    for k in _scan_degrees(a, tables):
        allowed = base.lower(k) if k >= 0 else frozenset()
        for x in base.order(cosupp_set(k, a) - allowed):
            violations.append((k, x))
    return RemarkReport("checked", not violations, check_C2(a).passed, violations)
