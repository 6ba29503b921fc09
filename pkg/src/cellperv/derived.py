"""Derived sections, stalks, costalks and local cohomology on cell posets.

``RΓ(V; A)`` for an open (up-set) ``V`` is the total complex of the nerve
double complex

    C^{p,q} = sum over chains x_0 < ... < x_p in V of A^q(x_p)

whose horizontal differential is the alternating sum of face deletions, the
last face pushing forward along ``A(x_{p-1}) -> A(x_p)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .linalg import (ChainMap, CochainComplex, CohomologyTable, DoubleComplex, RatMatrix,
                     cohomology, fiber, total_complex)
from .sheaf import SheafComplex


@dataclass
class Sections:
    """A nerve sections complex with its basis bookkeeping.

    ``offsets[n][(chain, q)]`` is where the block ``A^q(max chain)`` starts
    inside the degree-``n`` space.
    """

    cells: frozenset
    complex: CochainComplex
    offsets: dict[int, dict[tuple[tuple[str, ...], int], int]]


def _check_open(a: SheafComplex, v: Iterable[str]) -> frozenset:
    v = frozenset(v)
    unknown = v - set(a.base.cells)
    if unknown:
        raise KeyError(f"unknown cells {sorted(unknown)}")
    if not a.base.is_upset(v):
        raise ValueError("expected an open set (up-set)")
    return v


def _check_closed(a: SheafComplex, z: Iterable[str]) -> frozenset:
    z = frozenset(z)
    unknown = z - set(a.base.cells)
    if unknown:
        raise KeyError(f"unknown cells {sorted(unknown)}")
    if not a.base.is_downset(z):
        raise ValueError("expected a closed set (down-set)")
    return z


def sections(v: Iterable[str], a: SheafComplex) -> Sections:
    """Nerve model of ``RΓ(V; A)``, memoized on ``a`` per open set."""
    v = _check_open(a, v)
    key = ("sections", v)
    hit = a.cache.get(key)
    if hit is not None:
        return hit
    chains = a.base.chains(v)
    by_len: dict[int, list[tuple[str, ...]]] = {}
    for ch in chains:
        by_len.setdefault(len(ch) - 1, []).append(ch)
    qdegs = sorted({q for x in v for q in a.stalks[x].dims})

    # per (p, q): block offsets of each chain
    dims: dict[tuple[int, int], int] = {}
    block_off: dict[tuple[int, int], dict[tuple[str, ...], int]] = {}
    for p, chs in by_len.items():
        for q in qdegs:
            off, pos = 0, {}
            for ch in chs:
                n = a.stalks[ch[-1]].dim(q)
                if n:
                    pos[ch] = off
                    off += n
            if off:
                dims[(p, q)] = off
                block_off[(p, q)] = pos

    dh: dict[tuple[int, int], RatMatrix] = {}
    dv: dict[tuple[int, int], RatMatrix] = {}
    for (p, q), pos in block_off.items():
        # vertical: stalk differentials, block diagonal
        if (p, q + 1) in dims:
            tpos = block_off[(p, q + 1)]
            entries = []
            for ch, o in pos.items():
                if ch in tpos:
                    t = tpos[ch]
                    for i, j, val in a.stalks[ch[-1]].d(q).entries():
                        entries.append((t + i, o + j, val))
            dv[(p, q)] = RatMatrix.from_entries(dims[(p, q + 1)], dims[(p, q)], entries)
        # horizontal: D^{p,q} -> D^{p+1,q}
        if (p + 1, q) in dims:
            tpos = block_off[(p + 1, q)]
            entries = []
            for ch, t in tpos.items():
                top = ch[-1]
                for i in range(p + 2):
                    face = ch[:i] + ch[i + 1:]
                    o = pos.get(face)
                    if o is None:
                        continue
                    sign = -1 if i % 2 else 1
                    if i < p + 1:
                        for r in range(a.stalks[top].dim(q)):
                            entries.append((t + r, o + r, sign))
                    else:
                        rho = a.restriction(face[-1], top).comp(q)
                        for r, c, val in rho.entries():
                            entries.append((t + r, o + c, sign * val))
            dh[(p, q)] = RatMatrix.from_entries(dims[(p + 1, q)], dims[(p, q)], entries)

    total = total_complex(DoubleComplex(dims, dh, dv))
    offsets: dict[int, dict] = {}
    start: dict[int, int] = {}
    for (p, q) in sorted(dims):
        n = p + q
        base = start.get(n, 0)
        table = offsets.setdefault(n, {})
        for ch, o in block_off[(p, q)].items():
            table[(ch, q)] = base + o
        start[n] = base + dims[(p, q)]
    out = Sections(v, total, offsets)
    return a.cache.put(key, out)


def sections_complex(v: Iterable[str], a: SheafComplex) -> CochainComplex:
    return sections(v, a).complex


def _projection(big: Sections, small: Sections, a: SheafComplex) -> ChainMap:
    comps = {}
    for n, table in small.offsets.items():
        btable = big.offsets[n]
        entries = []
        for (ch, q), o in table.items():
            b = btable[(ch, q)]
            for r in range(a.stalks[ch[-1]].dim(q)):
                entries.append((o + r, b + r, 1))
        comps[n] = RatMatrix.from_entries(small.complex.dim(n), big.complex.dim(n), entries)
    return ChainMap(big.complex, small.complex, comps, check=False)


def restriction_map(v: Iterable[str], w: Iterable[str], a: SheafComplex) -> ChainMap:
    """Canonical ``RΓ(W; A) -> RΓ(V; A)`` for opens ``V ⊆ W``: drop every
    chain not contained in ``V``."""
    v, w = frozenset(v), frozenset(w)
    if not v <= w:
        raise ValueError("restriction needs V ⊆ W")
    return _projection(sections(w, a), sections(v, a), a)


def coaugmentation(x: str, v: Iterable[str], a: SheafComplex) -> ChainMap:
    """``A(x) -> RΓ(V; A)`` for ``V ⊆ U_x``: a stalk element goes to its
    restrictions on the vertices of the nerve."""
    sec = sections(v, a)
    stalk = a.stalks[x]
    comps = {}
    for n in stalk.dims:
        table = sec.offsets.get(n)
        if not table:
            continue
        entries = []
        for y in sec.cells:
            o = table.get(((y,), n))
            if o is None:
                continue
            for r, c, val in a.restriction(x, y).comp(n).entries():
                entries.append((o + r, c, val))
        comps[n] = RatMatrix.from_entries(sec.complex.dim(n), stalk.dim(n), entries)
    return ChainMap(stalk, sec.complex, comps, check=False)


def hypercohomology(v: Iterable[str], a: SheafComplex) -> CohomologyTable:
    return cohomology(sections_complex(v, a))


def stalk_cohomology(x: str, a: SheafComplex) -> CohomologyTable:
    return cohomology(a.stalk(x))


def supported_sections(x: str, z: Iterable[str], a: SheafComplex, model: str = "stalk") -> CochainComplex:
    """Local cohomology complex ``RΓ_Z(U_x; A)``, the stalk at ``x`` of the
    sections of ``A`` supported on the closed set ``Z``.

    Computed as the fiber of ``RΓ(U_x) -> RΓ(U_x \\ Z)``. With
    ``model="stalk"`` the source is ``A(x)`` itself (quasi-isomorphic through
    the coaugmentation since ``x`` is the minimum of ``U_x``); ``model="nerve"``
    uses the full nerve complex of ``U_x``.
    """
    a.stalk(x)
    z = _check_closed(a, z)
    key = ("supported", x, z, model)
    hit = a.cache.get(key)
    if hit is not None:
        return hit
    ux = a.base.star(x)
    rest = ux - z
    if model == "stalk":
        f = coaugmentation(x, rest, a)
    elif model == "nerve":
        f = restriction_map(rest, ux, a)
    else:
        raise ValueError(f"unknown model {model!r}")
    return a.cache.put(key, fiber(f))


def local_cohomology(x: str, z: Iterable[str], a: SheafComplex) -> CohomologyTable:
    return cohomology(supported_sections(x, z, a))


def costalk_cohomology(x: str, a: SheafComplex) -> CohomologyTable:
    """``H^*(j_x^! A)`` at the cell ``x``: local cohomology of ``U_x`` with
    support in ``{x}``."""
    a.stalk(x)
    return local_cohomology(x, a.base.closure([x]), a)


def shriek_restriction_table(stratum: str, a: SheafComplex) -> dict[str, CohomologyTable]:
    """Stalk cohomology of ``r_S^! A`` at each cell of ``S``; computed as
    local cohomology with support in the closure of ``S``."""
    cells = a.base.stratum_cells(stratum)
    z = a.base.closure(cells)
    return {x: local_cohomology(x, z, a) for x in cells}


# -- long exact sequence of a closed pair ------------------------------------


@dataclass
class Slot:
    degree: int
    term: str
    dim: int
    rank_in: int
    rank_out: int
    composite_rank: int

    @property
    def exact(self) -> bool:
        return self.composite_rank == 0 and self.rank_in + self.rank_out == self.dim


@dataclass
class ExactnessReport:
    tables: dict[str, CohomologyTable]
    slots: list[Slot] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return all(s.exact for s in self.slots)

    def failures(self) -> list[Slot]:
        return [s for s in self.slots if not s.exact]


def _fiber_map(f1: ChainMap, f2: ChainMap, top: ChainMap, bottom: ChainMap) -> ChainMap:
    """Map of fibers induced by a commuting square
    ``f1: S1 -> T1``, ``f2: S2 -> T2``, ``top: S1 -> S2``, ``bottom: T1 -> T2``."""
    src, tgt = fiber(f1), fiber(f2)
    comps = {}
    for k in set(src.dims) | set(tgt.dims):
        comps[k] = RatMatrix.block(
            [f2.target.dim(k - 1), f2.source.dim(k)], [f1.target.dim(k - 1), f1.source.dim(k)],
            {(0, 0): bottom.comp(k - 1), (1, 1): top.comp(k)})
    return ChainMap(src, tgt, comps, check=False)


def excision_les_check(z_small: Iterable[str], z: Iterable[str], a: SheafComplex,
                       x: str | None = None) -> ExactnessReport:
    """Exactness of

        H^k_{Z'}(V) -> H^k_Z(V) -> H^k_{Z \\ Z'}(V \\ Z') -> H^{k+1}_{Z'}(V)

    for ``V = U_x`` (or the whole space when ``x`` is None), with all three
    terms built as fibers of nerve restriction maps. Exactness at each slot is
    decided by ranks: the incoming and outgoing maps compose to zero on
    cohomology and their ranks add up to the dimension of the slot.
    """
    z_small = _check_closed(a, z_small)
    z = _check_closed(a, z)
    if not z_small <= z:
        raise ValueError("need Z' ⊆ Z")
    v = a.base.star(x) if x is not None else frozenset(a.base.cells)
    v1 = v - z_small
    v2 = v - z
    p1 = restriction_map(v1, v, a)
    p2 = restriction_map(v2, v1, a)
    p = restriction_map(v2, v, a)
    f1, f, f2 = fiber(p1), fiber(p), fiber(p2)
    ident_v = ChainMap.identity(p.source)
    ident_v2 = ChainMap.identity(p.target)
    alpha = _fiber_map(p1, p, ident_v, p2)            # RΓ_{Z'} -> RΓ_Z
    beta = _fiber_map(p, p2, p1, ident_v2)            # RΓ_Z -> RΓ_{Z\Z'}
    # connecting map RΓ_{Z\Z'}(V\Z') -> RΓ_{Z'}(V)[1]: (t, t') -> (t', 0)
    f1s = f1.shift(1)
    gamma = {}
    for k in set(f2.dims) | set(f1s.dims):
        gamma[k] = RatMatrix.block([p1.target.dim(k), p1.source.dim(k + 1)],
                                   [p2.target.dim(k - 1), p2.source.dim(k)],
                                   {(0, 1): RatMatrix.identity(p2.source.dim(k))})
    gamma = ChainMap(f2, f1s, gamma, check=False)
    ba = ChainMap(f1, f2, {k: beta.comp(k) @ alpha.comp(k) for k in set(f1.dims)}, check=False)
    gb = ChainMap(f, f1s, {k: gamma.comp(k) @ beta.comp(k) for k in set(f.dims)}, check=False)
    alpha_s = alpha.shift(1)
    ag = ChainMap(f2, f.shift(1), {k: alpha_s.comp(k) @ gamma.comp(k) for k in set(f2.dims)},
                  check=False)
    h1, h, h2 = cohomology(f1), cohomology(f), cohomology(f2)
    report = ExactnessReport({"closed_small": h1, "closed": h, "difference": h2})
    degs = sorted(set(h1.dims) | set(h.dims) | set(h2.dims)
                  | {k - 1 for k in h1.dims} | {k + 1 for k in h2.dims})
    for k in degs:
        ra, rb, rc = alpha.induced_rank(k), beta.induced_rank(k), gamma.induced_rank(k)
        rc_prev = gamma.induced_rank(k - 1)
        report.slots.append(Slot(k, "closed_small", h1[k], rc_prev, ra, ag.induced_rank(k - 1)))
        report.slots.append(Slot(k, "closed", h[k], ra, rb, ba.induced_rank(k)))
        report.slots.append(Slot(k, "difference", h2[k], rb, rc, gb.induced_rank(k)))
    return report


@dataclass
class PropagationVerdict:
    passed: bool
    hypothesis_holds: bool
    witness_degree: int | None = None


def vanishing_propagation_check(v: Iterable[str], a: SheafComplex, k: int) -> PropagationVerdict:
    """If every stalk on ``V`` has ``H^j = 0`` for ``j < k`` then so does
    ``RΓ(V; A)``."""
    v = _check_open(a, v)
    for x in v:
        if any(j < k for j in stalk_cohomology(x, a).dims):
            return PropagationVerdict(True, False)
    bad = [j for j in hypercohomology(v, a).dims if j < k]
    if bad:
        return PropagationVerdict(False, True, bad[0])
    return PropagationVerdict(True, True)
