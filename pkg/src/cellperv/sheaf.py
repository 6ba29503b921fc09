"""Bounded complexes of cellular sheaves on a stratified poset.

A sheaf complex assigns a cochain complex ``A(x)`` to every cell and a chain
map ``A(x) -> A(y)`` to every covering relation ``x < y``; sections over the
star ``U_x`` are ``A(x)``. Missing stalks and restrictions are zero.
"""

from __future__ import annotations

from collections import OrderedDict
import os
from typing import Iterable, Mapping

from .linalg import (ChainMap, CochainComplex, ComplexError, RatMatrix, cone, direct_sum_complexes,
                     kernel_free_columns, rank_kernel)
from .poset import StratifiedPoset, Violation


def _cache_size() -> int:
    try:
        return max(0, int(os.environ.get("CELLPERV_CACHE_SIZE", "4096")))
    except ValueError:
        return 4096


class _LRU:
    def __init__(self, size: int):
        self.size = size
        self.data: OrderedDict = OrderedDict()

    def get(self, key):
        hit = self.data.get(key)
        if hit is not None:
            self.data.move_to_end(key)
        return hit

    def put(self, key, value):
        if self.size <= 0:
            return value
        self.data[key] = value
        self.data.move_to_end(key)
        while len(self.data) > self.size:
            self.data.popitem(last=False)
        return value


class SheafComplex:
    """Complex of cellular sheaves; treat as immutable after construction."""

    def __init__(self, base: StratifiedPoset, stalks: Mapping[str, CochainComplex],
                 restrictions: Mapping[tuple[str, str], ChainMap] | None = None):
        self.base = base
        zero = CochainComplex.zero()
        self.stalks = {x: stalks.get(x, zero) for x in base.cells}
        for x in stalks:
            if x not in base.cells:
                raise ValueError(f"stalk given for unknown cell {x!r}")
        covers = set(base.covers)
        self.restrictions: dict[tuple[str, str], ChainMap] = {}
        for xy, f in (restrictions or {}).items():
            if xy not in covers:
                raise ValueError(f"restriction given on non-cover {xy!r}")
            self.restrictions[xy] = f
        for x, y in base.covers:
            if (x, y) not in self.restrictions:
                self.restrictions[(x, y)] = ChainMap.zero(self.stalks[x], self.stalks[y])
        self._composites: dict[tuple[str, str], ChainMap] = {}
        self.cache = _LRU(_cache_size())

    def __repr__(self) -> str:
        dims = sum(c.total_dim() for c in self.stalks.values())
        return f"SheafComplex(on {self.base!r}, total stalk dim {dims})"

    def stalk(self, x: str) -> CochainComplex:
        try:
            return self.stalks[x]
        except KeyError:
            raise KeyError(f"unknown cell {x!r}") from None

    def restriction(self, x: str, y: str) -> ChainMap:
        """The structure map ``A(x) -> A(y)`` for ``x <= y``, composed along
        a fixed path of covers."""
        if x == y:
            return ChainMap.identity(self.stalks[x])
        key = (x, y)
        hit = self._composites.get(key)
        if hit is not None:
            return hit
        if (x, y) in self.restrictions:
            out = self.restrictions[(x, y)]
        else:
            if not self.base.lt(x, y):
                raise ValueError(f"{x!r} is not below {y!r}")
            z = next(z for z in self.base.up[x] if self.base.leq(z, y))
            out = self.restriction(z, y) @ self.restrictions[(x, z)]
        self._composites[key] = out
        return out

    def degree_range(self) -> tuple[int, int] | None:
        los = [c.lo for c in self.stalks.values() if c.dims]
        his = [c.hi for c in self.stalks.values() if c.dims]
        if not los:
            return None
        return min(los), max(his)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.stalks.values())

    def same_data(self, other: "SheafComplex") -> bool:
        return (self.base == other.base and self.stalks == other.stalks
                and all(self.restrictions[k] == other.restrictions[k] for k in self.restrictions))

    def on_base(self, base: StratifiedPoset) -> "SheafComplex":
        """Same data over a poset with identical cells and covers (e.g. after
        merging strata)."""
        return SheafComplex(base, self.stalks, self.restrictions)


class SheafMap:
    """Morphism of sheaf complexes: one chain map per cell, natural in covers."""

    def __init__(self, source: SheafComplex, target: SheafComplex,
                 components: Mapping[str, ChainMap] | None = None):
        if source.base is not target.base and source.base != target.base:
            raise ValueError("sheaf map between different bases")
        self.source = source
        self.target = target
        comps = dict(components or {})
        self.components = {x: comps.get(x) or ChainMap.zero(source.stalks[x], target.stalks[x])
                           for x in source.base.cells}

    def validate(self) -> list[Violation]:
        out = []
        for x, f in self.components.items():
            try:
                f.check()
            except ComplexError as e:
                out.append(Violation("chain_map", f"component at {x}: {e}", (x,)))
        for (x, y) in self.source.base.covers:
            lhs = self.target.restrictions[(x, y)] @ self.components[x]
            rhs = self.components[y] @ self.source.restrictions[(x, y)]
            for k in set(lhs.components) | set(rhs.components):
                if lhs.comp(k) != rhs.comp(k):
                    out.append(Violation("naturality", f"square {x} < {y} fails in degree {k}",
                                         (x, y, k)))
        return out


# -- validation ------------------------------------------------------------


def validate_sheaf(a: SheafComplex) -> list[Violation]:
    """Every violated invariant of ``a`` (d^2 = 0, chain maps, diamonds)."""
    out: list[Violation] = []
    for x, c in a.stalks.items():
        try:
            c.check()
        except ComplexError as e:
            out.append(Violation("d_squared", f"stalk at {x}: {e}", (x,)))
    for (x, y), f in a.restrictions.items():
        try:
            f.check()
        except ComplexError as e:
            out.append(Violation("chain_map", f"restriction {x} < {y}: {e}", (x, y)))
    base = a.base
    for x in base.cells:
        ups = base.up[x]
        # length-2 paths grouped by endpoint
        paths: dict[str, list[str]] = {}
        for m in ups:
            for z in base.up[m]:
                paths.setdefault(z, []).append(m)
        for z, mids in paths.items():
            if len(mids) < 2:
                continue
            first = mids[0]
            ref = a.restrictions[(first, z)] @ a.restrictions[(x, first)]
            for other in mids[1:]:
                alt = a.restrictions[(other, z)] @ a.restrictions[(x, other)]
                for k in sorted(set(ref.components) | set(alt.components)):
                    if ref.comp(k) != alt.comp(k):
                        out.append(Violation(
                            "diamond", f"paths {x}<{first}<{z} and {x}<{other}<{z} differ "
                            f"in degree {k}", (x, first, z, other, k)))
    return out


def check_constructible(a: SheafComplex) -> list[Violation]:
    """Cohomology must be locally constant on strata: every cover inside one
    stratum induces isomorphisms on all ``H^k``. Returns the failures."""
    from .linalg import cohomology
    out = []
    base = a.base
    tables = {}
    for x, y in base.covers:
        if base.stratum_of(x) != base.stratum_of(y):
            continue
        for z in (x, y):
            if z not in tables:
                tables[z] = cohomology(a.stalks[z])
        f = a.restrictions[(x, y)]
        for k in sorted(set(tables[x].dims) | set(tables[y].dims)):
            hx, hy = tables[x][k], tables[y][k]
            if hx != hy or f.induced_rank(k) != hx:
                out.append(Violation(
                    "constructible", f"{x} < {y} in stratum {base.stratum_of(x)} is not an "
                    f"isomorphism on H^{k} ({hx} -> {hy})", (x, y, k)))
    return out


# -- constructors ------------------------------------------------------------


def zero_sheaf(base: StratifiedPoset) -> SheafComplex:
    return SheafComplex(base, {})


def constant_sheaf(base: StratifiedPoset, n_shift: int = 0, rank: int = 1) -> SheafComplex:
    """``Q^rank[n_shift]``: every stalk sits in degree ``-n_shift``."""
    c = CochainComplex.concentrated(-n_shift, rank)
    ident = ChainMap.identity(c)
    return SheafComplex(base, {x: c for x in base.cells}, {xy: ident for xy in base.covers})


def skyscraper(base: StratifiedPoset, closed: Iterable[str], c: CochainComplex) -> SheafComplex:
    """``c`` on the closed set, zero elsewhere (extension by zero)."""
    z = frozenset(closed)
    if not base.is_downset(z):
        raise ValueError("skyscraper support must be a down-set (closed)")
    ident = ChainMap.identity(c)
    return SheafComplex(base, {x: c for x in z},
                        {(x, y): ident for x, y in base.covers if x in z and y in z})


def shift(a: SheafComplex, n: int) -> SheafComplex:
    """``A[n]`` cellwise."""
    if n == 0:
        return a
    stalks = {x: c.shift(n) for x, c in a.stalks.items()}
    maps = {xy: ChainMap(stalks[xy[0]], stalks[xy[1]],
                         {k - n: m for k, m in f.components.items()}, check=False)
            for xy, f in a.restrictions.items()}
    return SheafComplex(a.base, stalks, maps)


def _block_diag_map(f: ChainMap, g: ChainMap, src: CochainComplex, tgt: CochainComplex) -> ChainMap:
    comps = {}
    for k in set(f.components) | set(g.components):
        comps[k] = RatMatrix.block([f.target.dim(k), g.target.dim(k)],
                                   [f.source.dim(k), g.source.dim(k)],
                                   {(0, 0): f.comp(k), (1, 1): g.comp(k)})
    return ChainMap(src, tgt, comps, check=False)


def direct_sum(a: SheafComplex, b: SheafComplex) -> SheafComplex:
    if a.base is not b.base and a.base != b.base:
        raise ValueError("direct sum of sheaves on different bases")
    stalks = {x: direct_sum_complexes(a.stalks[x], b.stalks[x]) for x in a.base.cells}
    maps = {(x, y): _block_diag_map(a.restrictions[(x, y)], b.restrictions[(x, y)],
                                    stalks[x], stalks[y])
            for x, y in a.base.covers}
    return SheafComplex(a.base, stalks, maps)


def cone_of(f: SheafMap) -> SheafComplex:
    """Cellwise mapping cone; restrictions act diagonally on ``B(x) + A(x)[1]``."""
    a, b = f.source, f.target
    stalks = {x: cone(f.components[x]) for x in a.base.cells}
    maps = {}
    for x, y in a.base.covers:
        rb, ra = b.restrictions[(x, y)], a.restrictions[(x, y)]
        comps = {}
        for k in set(stalks[x].dims) | set(stalks[y].dims):
            comps[k] = RatMatrix.block([b.stalks[y].dim(k), a.stalks[y].dim(k + 1)],
                                       [b.stalks[x].dim(k), a.stalks[x].dim(k + 1)],
                                       {(0, 0): rb.comp(k), (1, 1): ra.comp(k + 1)})
        maps[(x, y)] = ChainMap(stalks[x], stalks[y], comps, check=False)
    return SheafComplex(a.base, stalks, maps)


def identity_map(a: SheafComplex) -> SheafMap:
    return SheafMap(a, a, {x: ChainMap.identity(c) for x, c in a.stalks.items()})


def truncate_leq(a: SheafComplex, k: int) -> SheafComplex:
    """Stalkwise good truncation: degrees below ``k`` kept, ``ker d^k`` in
    degree ``k``, nothing above.

    Kernel vectors are coordinatized by their entries at the free columns of
    the RREF of ``d^k``, which makes every induced map a plain row selection.
    """
    free: dict[str, list[int]] = {}
    kbasis: dict[str, RatMatrix] = {}
    stalks = {}
    for x, c in a.stalks.items():
        dk = c.d(k)
        _, basis = rank_kernel(dk)
        fx = kernel_free_columns(dk) if basis.ncols else []
        free[x], kbasis[x] = fx, basis
        dims = {j: v for j, v in c.dims.items() if j < k}
        if basis.ncols:
            dims[k] = basis.ncols
        diffs = {j: m for j, m in c.diffs.items() if j < k - 1}
        if basis.ncols and c.dim(k - 1):
            diffs[k - 1] = c.d(k - 1).select(rows=fx)
        stalks[x] = CochainComplex(dims, diffs, check=False)
    maps = {}
    for (x, y), f in a.restrictions.items():
        comps = {j: m for j, m in f.components.items() if j < k}
        if kbasis[x].ncols and kbasis[y].ncols:
            comps[k] = (f.comp(k) @ kbasis[x]).select(rows=free[y])
        maps[(x, y)] = ChainMap(stalks[x], stalks[y], comps, check=False)
    return SheafComplex(a.base, stalks, maps)


def restrict(a: SheafComplex, cells: Iterable[str]) -> SheafComplex:
    """``A`` restricted to the induced sub-poset on ``cells``."""
    sub = a.base.induced(cells)
    return SheafComplex(sub, {x: a.stalks[x] for x in sub.cells},
                        {xy: a.restrictions[xy] for xy in sub.covers})
