"""Derived pushforward, the Deligne construction and random constructible
complexes."""

from __future__ import annotations

import random

from .derived import restriction_map, sections
from .linalg import ChainMap, CochainComplex, RatMatrix, rank_kernel
from .poset import StratifiedPoset
from .sheaf import (SheafComplex, SheafMap, check_constructible, cone_of, constant_sheaf,
                    direct_sum, shift, skyscraper, truncate_leq, zero_sheaf)


def pushforward_open(a: SheafComplex, into: StratifiedPoset) -> SheafComplex:
    """``Rj_* A`` for ``A`` on an open subset ``V`` of ``into``.

    The stalk at ``x`` is the nerve sections complex of ``A`` over
    ``U_x ∩ V``; the structure maps are the nerve projections.
    """
    v = frozenset(a.base.cells)
    if not v <= set(into.cells):
        raise ValueError("sheaf lives on cells outside the target poset")
    if not into.is_upset(v):
        raise ValueError("pushforward_open needs an open subset (up-set)")
    opens = {x: into.star(x) & v for x in into.cells}
    stalks = {}
    for x, w in opens.items():
        if w:
            stalks[x] = sections(w, a).complex
    maps = {}
    for x, y in into.covers:
        if opens[y]:
            maps[(x, y)] = restriction_map(opens[y], opens[x], a)
    return SheafComplex(into, stalks, maps)


def deligne_ic(base: StratifiedPoset, rank: int = 1, seed: SheafComplex | None = None) -> SheafComplex:
    """Intersection complex by iterated pushforward and truncation.

    Starts from ``seed`` (a sheaf on the open stratum; default the constant
    rank-``rank`` system) placed in degree ``-n``, ``n`` the top stratum
    dimension, then for ``m = n-1, ..., 0`` pushes forward across
    ``U^{m+1} -> U^m`` and truncates at ``-m-1``.
    """
    if not base.is_merged():
        raise ValueError("deligne_ic needs one stratum per dimension (merge first)")
    n = base.max_pdim
    top = base.upper(n)
    if seed is None:
        a = constant_sheaf(base.induced(top), n, rank)
    else:
        if set(seed.base.cells) != set(top):
            raise ValueError("seed must live on the open stratum")
        a = seed
    present = {s.pdim for s in base.strata.values()}
    for m in range(n - 1, -1, -1):
        if m not in present and m != 0:
            continue
        target = base if m == 0 else base.induced(base.upper(m))
        a = truncate_leq(pushforward_open(a, target), -m - 1)
    if n == 0:
        a = a.on_base(base)
    return a


# -- natural maps --------------------------------------------------------------


def natural_maps_basis(a: SheafComplex, b: SheafComplex, max_unknowns: int = 2000) -> list[SheafMap] | None:
    """A basis of the space of sheaf maps ``A -> B`` (degree-0 chain maps,
    natural in every cover). None when the linear system exceeds
    ``max_unknowns``."""
    base = a.base
    slots: dict[tuple[str, int], int] = {}
    n = 0
    for x in base.cells:
        sa, sb = a.stalks[x], b.stalks[x]
        for k in sorted(set(sa.dims) & set(sb.dims)):
            slots[(x, k)] = n
            n += sa.dim(k) * sb.dim(k)
    if n == 0:
        return []
    if n > max_unknowns:
        return None

    def var(x, k, i, j):
        return slots[(x, k)] + i * a.stalks[x].dim(k) + j

    rows = []
    for x in base.cells:
        sa, sb = a.stalks[x], b.stalks[x]
        # d_B F^k - F^{k+1} d_A = 0
        for k in sorted(set(sa.dims) | {j - 1 for j in sb.dims}):
            if not (sb.dim(k + 1) and sa.dim(k)):
                continue
            db, da = sb.d(k), sa.d(k)
            eqs: dict[tuple[int, int], dict[int, int]] = {}
            if (x, k) in slots:
                for i, l, val in db.entries():
                    for j in range(sa.dim(k)):
                        e = eqs.setdefault((i, j), {})
                        e[var(x, k, l, j)] = e.get(var(x, k, l, j), 0) + val
            if (x, k + 1) in slots:
                for l, j, val in da.entries():
                    for i in range(sb.dim(k + 1)):
                        e = eqs.setdefault((i, j), {})
                        e[var(x, k + 1, i, l)] = e.get(var(x, k + 1, i, l), 0) - val
            rows += [{c: v for c, v in e.items() if v} for e in eqs.values()]
    for x, y in base.covers:
        ra, rb = a.restrictions[(x, y)], b.restrictions[(x, y)]
        for k in sorted(set(a.stalks[x].dims) & set(b.stalks[y].dims)):
            eqs = {}
            if (x, k) in slots:
                for i, l, val in rb.comp(k).entries():
                    for j in range(a.stalks[x].dim(k)):
                        e = eqs.setdefault((i, j), {})
                        e[var(x, k, l, j)] = e.get(var(x, k, l, j), 0) + val
            if (y, k) in slots:
                for l, j, val in ra.comp(k).entries():
                    for i in range(b.stalks[y].dim(k)):
                        e = eqs.setdefault((i, j), {})
                        e[var(y, k, i, l)] = e.get(var(y, k, i, l), 0) - val
            rows += [{c: v for c, v in e.items() if v} for e in eqs.values()]
    rows = [r for r in rows if r]
    _, kernel = rank_kernel(RatMatrix(len(rows), n, rows))
    return [_unpack(kernel.column(c), slots, a, b) for c in range(kernel.ncols)]


def _unpack(vec: dict[int, object], slots, a: SheafComplex, b: SheafComplex) -> SheafMap:
    comps: dict[str, dict[int, RatMatrix]] = {}
    for (x, k), off in slots.items():
        na, nb = a.stalks[x].dim(k), b.stalks[x].dim(k)
        entries = [(i, j, vec[off + i * na + j]) for i in range(nb) for j in range(na)
                   if off + i * na + j in vec]
        if entries:
            comps.setdefault(x, {})[k] = RatMatrix.from_entries(nb, na, entries)
    return SheafMap(a, b, {x: ChainMap(a.stalks[x], b.stalks[x], c, check=False)
                           for x, c in comps.items()})


def combine_maps(maps: list[SheafMap], coeffs: list[int], a: SheafComplex, b: SheafComplex) -> SheafMap:
    comps = {}
    for x in a.base.cells:
        total = ChainMap.zero(a.stalks[x], b.stalks[x])
        for f, c in zip(maps, coeffs):
            if c:
                total = total + f.components[x].scale(c)
        comps[x] = total
    return SheafMap(a, b, comps)


def random_sheaf_map(a: SheafComplex, b: SheafComplex, rng: random.Random,
                     max_unknowns: int = 2000) -> SheafMap:
    basis = natural_maps_basis(a, b, max_unknowns)
    if not basis:
        return SheafMap(a, b)
    coeffs = [rng.choice((-2, -1, 0, 1, 1, 2)) for _ in basis]
    return combine_maps(basis, coeffs, a, b)


# -- random constructible complexes ---------------------------------------------


def elementary_pieces(base: StratifiedPoset, max_dim: int = 1500) -> list[tuple[str, int, SheafComplex]]:
    """Constructible building blocks, unshifted: constants on closed unions
    of strata extended by zero, and pushforwards of constants from the open
    sets ``U^m``. Each comes with the shift that centres it on middle
    perversity. Pieces whose total stalk dimension exceeds ``max_dim`` or
    that fail the constructibility check are left out."""
    out = []
    seen = set()
    closed = []
    for m in range(base.max_pdim + 1):
        closed.append((f"const_L{m}", base.lower(m), m))
    for sid, s in base.strata.items():
        z = base.closure(base.stratum_cells(sid))
        if base.is_union_of_strata(z):
            closed.append((f"const_cl_{sid}", z, s.pdim))
    for name, z, d in closed:
        if z in seen or not z:
            continue
        seen.add(z)
        out.append((name, d, skyscraper(base, z, CochainComplex.concentrated(0))))
    n = base.max_pdim
    for m in range(1, n + 1):
        v = base.upper(m)
        if not v or v == frozenset(base.cells):
            continue
        piece = pushforward_open(constant_sheaf(base.induced(v), 0), base)
        if sum(c.total_dim() for c in piece.stalks.values()) > max_dim:
            continue
        out.append((f"push_U{m}", n, piece))
    return [p for p in out if not check_constructible(p[2])]


def random_constructible(base: StratifiedPoset, seed: int, size: int = 3, max_dim: int = 1500,
                         max_unknowns: int = 2000, pieces=None) -> SheafComplex:
    """Direct sums and cones of randomly shifted elementary pieces, joined by
    random sheaf maps. Deterministic in ``seed``; ``size`` bounds the number
    of pieces (0 gives the zero sheaf)."""
    rng = random.Random(seed)
    if size <= 0:
        return zero_sheaf(base)
    if pieces is None:
        pieces = elementary_pieces(base, max_dim)
    count = rng.randint(1, size)
    result = None
    for _ in range(count):
        _, centre, piece = pieces[rng.randrange(len(pieces))]
        piece = shift(piece, centre + rng.choice((-1, 0, 0, 1)))
        if result is None:
            result = piece
            continue
        r = rng.random()
        if r < 0.3:
            result = direct_sum(result, piece)
        elif r < 0.65:
            result = cone_of(random_sheaf_map(piece, result, rng, max_unknowns))
        else:
            result = cone_of(random_sheaf_map(result, piece, rng, max_unknowns))
    return result
