"""Finite stratified face posets.

A cell poset carries the Alexandrov topology in which open sets are up-sets:
the smallest open neighbourhood of a cell ``x`` is its star ``U_x = {y >= x}``.
Each cell lies in one stratum, and each stratum carries the complex dimension
``pdim`` that enters every perversity inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable


@dataclass(frozen=True)
class Cell:
    id: str
    cell_dim: int
    stratum: str


@dataclass(frozen=True)
class Stratum:
    id: str
    pdim: int


@dataclass(frozen=True)
class Violation:
    """One failed invariant; ``witness`` names the offending cells/relations."""

    kind: str
    message: str
    witness: tuple = ()

    def to_json(self) -> dict:
        return {"kind": self.kind, "message": self.message, "witness": list(self.witness)}


class StratifiedPoset:
    """Cells, covering relations ``x < y`` (x an immediate face of y) and strata.

    Cells keep their input order, which fixes every enumeration downstream.
    """

    def __init__(self, cells: Iterable[Cell], covers: Iterable[tuple[str, str]],
                 strata: Iterable[Stratum], geometric: bool = False):
        self.cells: dict[str, Cell] = {}
        for c in cells:
            if c.id in self.cells:
                raise ValueError(f"duplicate cell id {c.id!r}")
            self.cells[c.id] = c
        self.strata: dict[str, Stratum] = {}
        for s in strata:
            if s.id in self.strata:
                raise ValueError(f"duplicate stratum id {s.id!r}")
            self.strata[s.id] = s
        self.covers: tuple[tuple[str, str], ...] = tuple(dict.fromkeys(tuple(c) for c in covers))
        for x, y in self.covers:
            for z in (x, y):
                if z not in self.cells:
                    raise ValueError(f"cover ({x!r}, {y!r}) names unknown cell {z!r}")
        for c in self.cells.values():
            if c.stratum not in self.strata:
                raise ValueError(f"cell {c.id!r} names unknown stratum {c.stratum!r}")
        self.geometric = geometric
        self._index = {x: i for i, x in enumerate(self.cells)}
        self._chain_cache: dict[frozenset, list[tuple[str, ...]]] = {}

    # -- basic structure --------------------------------------------------

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, x: str) -> bool:
        return x in self.cells

    def __repr__(self) -> str:
        return f"StratifiedPoset({len(self.cells)} cells, {len(self.strata)} strata)"

    def __eq__(self, other) -> bool:
        if not isinstance(other, StratifiedPoset):
            return NotImplemented
        return (list(self.cells.values()) == list(other.cells.values())
                and set(self.covers) == set(other.covers)
                and self.strata == other.strata and self.geometric == other.geometric)

    def __hash__(self):
        return id(self)

    def order(self, cells: Iterable[str]) -> list[str]:
        """Sort cells into input order."""
        return sorted(cells, key=self._index.__getitem__)

    def pdim(self, x: str) -> int:
        return self.strata[self.cells[x].stratum].pdim

    def stratum_of(self, x: str) -> str:
        return self.cells[x].stratum

    def stratum_cells(self, s: str) -> list[str]:
        return [x for x, c in self.cells.items() if c.stratum == s]

    @cached_property
    def up(self) -> dict[str, list[str]]:
        """Upper covers of each cell."""
        out: dict[str, list[str]] = {x: [] for x in self.cells}
        for x, y in self.covers:
            out[x].append(y)
        return out

    @cached_property
    def down(self) -> dict[str, list[str]]:
        """Lower covers (immediate faces) of each cell."""
        out: dict[str, list[str]] = {x: [] for x in self.cells}
        for x, y in self.covers:
            out[y].append(x)
        return out

    def _reach(self, x: str, nbrs: dict[str, list[str]]) -> frozenset[str]:
        seen = {x}
        stack = [x]
        while stack:
            z = stack.pop()
            for w in nbrs[z]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return frozenset(seen)

    @cached_property
    def _stars(self) -> dict[str, frozenset[str]]:
        return {x: self._reach(x, self.up) for x in self.cells}

    @cached_property
    def _downs(self) -> dict[str, frozenset[str]]:
        return {x: self._reach(x, self.down) for x in self.cells}

    def star(self, x: str) -> frozenset[str]:
        """Minimal open neighbourhood ``U_x = {y : y >= x}``."""
        return self._stars[x]

    def below(self, x: str) -> frozenset[str]:
        """``{y : y <= x}``."""
        return self._downs[x]

    def leq(self, x: str, y: str) -> bool:
        return y in self._stars[x]

    def lt(self, x: str, y: str) -> bool:
        return x != y and y in self._stars[x]

    def closure(self, cells: Iterable[str]) -> frozenset[str]:
        """Smallest down-set (closed set) containing ``cells``."""
        out: set[str] = set()
        for x in cells:
            out |= self._downs[x]
        return frozenset(out)

    def up_closure(self, cells: Iterable[str]) -> frozenset[str]:
        out: set[str] = set()
        for x in cells:
            out |= self._stars[x]
        return frozenset(out)

    def is_upset(self, cells: Iterable[str]) -> bool:
        s = set(cells)
        return all(y in s for x in s for y in self.up[x])

    def is_downset(self, cells: Iterable[str]) -> bool:
        s = set(cells)
        return all(y in s for x in s for y in self.down[x])

    def set_dimension(self, cells: Iterable[str]) -> int:
        """Largest stratum ``pdim`` met by ``cells``; -1 for the empty set."""
        return max((self.pdim(x) for x in cells), default=-1)

    @property
    def max_pdim(self) -> int:
        return max((s.pdim for s in self.strata.values()), default=-1)

    @property
    def max_cell_dim(self) -> int:
        return max((c.cell_dim for c in self.cells.values()), default=0)

    # -- filtrations --------------------------------------------------------

    def filtration(self, m: int, kind: str) -> frozenset[str]:
        """``U^m`` (``kind='upper'``: strata with pdim >= m, open) or
        ``L^m`` (``kind='lower'``: pdim <= m, closed)."""
        if m < 0:
            raise ValueError("filtration index must be >= 0")
        if kind == "upper":
            out = frozenset(x for x in self.cells if self.pdim(x) >= m)
            if not self.is_upset(out):
                raise ValueError(f"U^{m} is not open; the frontier condition fails")
        elif kind == "lower":
            out = frozenset(x for x in self.cells if self.pdim(x) <= m)
            if not self.is_downset(out):
                raise ValueError(f"L^{m} is not closed; the frontier condition fails")
        else:
            raise ValueError(f"unknown filtration kind {kind!r}")
        return out

    def upper(self, m: int) -> frozenset[str]:
        return self.filtration(m, "upper")

    def lower(self, m: int) -> frozenset[str]:
        return self.filtration(m, "lower")

    # -- chains -------------------------------------------------------------

    def chains(self, cells: Iterable[str]) -> list[tuple[str, ...]]:
        """All strict chains ``x_0 < ... < x_p`` inside ``cells``.

        Ordered by length, then lexicographically by cell input order.
        Memoized per cell set.
        """
        key = frozenset(cells)
        hit = self._chain_cache.get(key)
        if hit is not None:
            return hit
        elems = self.order(key)
        succ = {x: [y for y in elems if y != x and y in self._stars[x]] for x in elems}
        out: list[tuple[str, ...]] = []

        def extend(chain: tuple[str, ...]):
            out.append(chain)
            for y in succ[chain[-1]]:
                extend(chain + (y,))

        for x in elems:
            extend((x,))
        idx = self._index
        out.sort(key=lambda ch: (len(ch), [idx[z] for z in ch]))
        self._chain_cache[key] = out
        return out

    # -- validation and normalization ---------------------------------------

    def validate(self) -> list[Violation]:
        """Every violated invariant, with witnesses. Empty iff valid."""
        out: list[Violation] = []
        for s in self.strata.values():
            if s.pdim < 0:
                out.append(Violation("pdim", f"stratum {s.id} has negative pdim", (s.id,)))
        for c in self.cells.values():
            if c.cell_dim < 0:
                out.append(Violation("cell_dim", f"cell {c.id} has negative dimension", (c.id,)))
        for x, y in self.covers:
            if x == y:
                out.append(Violation("cycle", f"cell {x} covers itself", (x, y)))
            elif self.cells[x].cell_dim >= self.cells[y].cell_dim:
                out.append(Violation("cell_dim_order",
                                     f"{x} < {y} but cell_dim {self.cells[x].cell_dim} >= "
                                     f"{self.cells[y].cell_dim}", (x, y)))
        cycle = self._find_cycle()
        if cycle:
            out.append(Violation("cycle", "covering relations contain a cycle", tuple(cycle)))
            return out
        for x in self.cells:
            sx = self.stratum_of(x)
            for y in self.order(self._downs[x]):
                if y != x and self.stratum_of(y) != sx and self.pdim(y) >= self.pdim(x):
                    out.append(Violation(
                        "frontier",
                        f"{y} < {x} lies in stratum {self.stratum_of(y)} (pdim {self.pdim(y)}) "
                        f"not below stratum {sx} (pdim {self.pdim(x)})", (y, x)))
        if self.geometric:
            for s in self.strata.values():
                cells = self.stratum_cells(s.id)
                top = max((self.cells[x].cell_dim for x in cells), default=None)
                if top is not None and top != 2 * s.pdim:
                    out.append(Violation(
                        "geometric", f"stratum {s.id} has top cell dimension {top}, "
                        f"expected 2*pdim = {2 * s.pdim}", (s.id,)))
        return out

    def _find_cycle(self) -> list[str] | None:
        state = {x: 0 for x in self.cells}
        path: list[str] = []

        def visit(x):
            state[x] = 1
            path.append(x)
            for y in self.up[x]:
                if state[y] == 1:
                    return path[path.index(y):] + [y]
                if state[y] == 0:
                    found = visit(y)
                    if found:
                        return found
            state[x] = 2
            path.pop()
            return None

        for x in self.cells:
            if state[x] == 0:
                found = visit(x)
                if found:
                    return found
        return None

    def is_valid(self) -> bool:
        return not self.validate()

    def merge_strata_by_dimension(self) -> "StratifiedPoset":
        """One stratum per ``pdim`` value; merged ids are ``"S<pdim>"``-style
        unless a single stratum already carries that dimension."""
        by_dim: dict[int, list[str]] = {}
        for s in self.strata.values():
            by_dim.setdefault(s.pdim, []).append(s.id)
        if all(len(v) == 1 for v in by_dim.values()):
            return self
        rename: dict[str, str] = {}
        new_strata = []
        taken = {sid for sids in by_dim.values() if len(sids) == 1 for sid in sids}
        for d in sorted(by_dim):
            sids = by_dim[d]
            if len(sids) == 1:
                new_id = sids[0]
            else:
                new_id = f"dim{d}"
                while new_id in taken:
                    new_id += "_"
                taken.add(new_id)
            for sid in sids:
                rename[sid] = new_id
            new_strata.append(Stratum(new_id, d))
        cells = [Cell(c.id, c.cell_dim, rename[c.stratum]) for c in self.cells.values()]
        return StratifiedPoset(cells, self.covers, new_strata, self.geometric)

    def is_merged(self) -> bool:
        dims = [s.pdim for s in self.strata.values()]
        return len(dims) == len(set(dims))

    def induced(self, cells: Iterable[str]) -> "StratifiedPoset":
        """Sub-poset on ``cells`` (intended for open or closed subsets, where
        covers of the ambient poset remain covers)."""
        keep = set(cells)
        sub_cells = [c for x, c in self.cells.items() if x in keep]
        used = {c.stratum for c in sub_cells}
        return StratifiedPoset(sub_cells, [(x, y) for x, y in self.covers if x in keep and y in keep],
                               [s for s in self.strata.values() if s.id in used], self.geometric)

    def is_union_of_strata(self, cells: Iterable[str]) -> bool:
        s = set(cells)
        return all(set(self.stratum_cells(self.stratum_of(x))) <= s for x in s)
