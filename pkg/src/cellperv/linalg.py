"""Exact rational linear algebra and the homological kernel built on it.

Matrices are sparse (one ``{col: value}`` dict per row) with entries that are
``int`` or :class:`fractions.Fraction`; integral fractions are stored as ints.
Nothing in here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

Scalar = int | Fraction


class ComplexError(ValueError):
    """Raised when a complex or chain map violates its defining identities."""


def as_scalar(value) -> Scalar:
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        value = Fraction(value)
        return value.numerator if value.denominator == 1 else value
    raise TypeError(f"not an exact rational: {value!r}")


class RatMatrix:
    """Sparse exact rational matrix. Treat instances as immutable."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Iterable[Mapping[int, Scalar]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            self.rows = tuple({} for _ in range(nrows))
        else:
            self.rows = tuple(rows)
            if len(self.rows) != nrows:
                raise ValueError(f"expected {nrows} rows, got {len(self.rows)}")

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int, scale: Scalar = 1) -> "RatMatrix":
        scale = as_scalar(scale)
        if scale == 0:
            return cls(n, n)
        return cls(n, n, ({i: scale} for i in range(n)))

    @classmethod
    def from_dense(cls, data: list[list], ncols: int | None = None) -> "RatMatrix":
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if nrows else 0
        rows = []
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            rows.append({j: as_scalar(v) for j, v in enumerate(row) if v != 0})
        return cls(nrows, ncols, rows)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable[tuple[int, int, object]]) -> "RatMatrix":
        rows: list[dict[int, Scalar]] = [{} for _ in range(nrows)]
        for i, j, v in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
            v = as_scalar(v)
            s = rows[i].get(j, 0) + v
            if s:
                rows[i][j] = _norm(s)
            else:
                rows[i].pop(j, None)
        return cls(nrows, ncols, rows)

    @classmethod
    def block(cls, row_sizes: list[int], col_sizes: list[int],
              blocks: Mapping[tuple[int, int], "RatMatrix"]) -> "RatMatrix":
        """Assemble a block matrix; missing blocks are zero."""
        row_off = _offsets(row_sizes)
        col_off = _offsets(col_sizes)
        rows: list[dict[int, Scalar]] = [{} for _ in range(row_off[-1])]
        for (bi, bj), m in blocks.items():
            if m.nrows != row_sizes[bi] or m.ncols != col_sizes[bj]:
                raise ValueError(
                    f"block ({bi},{bj}) has shape {m.shape}, expected "
                    f"({row_sizes[bi]}, {col_sizes[bj]})")
            r0, c0 = row_off[bi], col_off[bj]
            for i, row in enumerate(m.rows):
                if row:
                    target = rows[r0 + i]
                    for j, v in row.items():
                        s = target.get(c0 + j, 0) + v
                        if s:
                            target[c0 + j] = s
                        else:
                            del target[c0 + j]
        return cls(row_off[-1], col_off[-1], rows)

    # -- inspection -------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self.rows[i].get(j, 0)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def entries(self):
        for i, row in enumerate(self.rows):
            for j in sorted(row):
                yield i, j, row[j]

    def to_dense(self) -> list[list[Scalar]]:
        return [[row.get(j, 0) for j in range(self.ncols)] for row in self.rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(tuple(sorted(r.items())) for r in self.rows)))

    def __repr__(self) -> str:
        return f"RatMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        rows = []
        for a, b in zip(self.rows, other.rows):
            if not b:
                rows.append(a)
                continue
            r = dict(a)
            for j, v in b.items():
                s = r.get(j, 0) + v
                if s:
                    r[j] = _norm(s)
                else:
                    r.pop(j, None)
            rows.append(r)
        return RatMatrix(self.nrows, self.ncols, rows)

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.nrows, self.ncols, ({j: -v for j, v in r.items()} for r in self.rows))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + (-other)

    def scale(self, c) -> "RatMatrix":
        c = as_scalar(c)
        if c == 0:
            return RatMatrix(self.nrows, self.ncols)
        if c == 1:
            return self
        if c == -1:
            return -self
        return RatMatrix(self.nrows, self.ncols,
                         ({j: _norm(c * v) for j, v in r.items()} for r in self.rows))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other.rows
        out = []
        for r in self.rows:
            acc: dict[int, Scalar] = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            out.append({j: _norm(v) for j, v in acc.items() if v})
        return RatMatrix(self.nrows, other.ncols, out)

    def transpose(self) -> "RatMatrix":
        cols: list[dict[int, Scalar]] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return RatMatrix(self.ncols, self.nrows, cols)

    @property
    def T(self) -> "RatMatrix":
        return self.transpose()

    def select(self, rows: list[int] | None = None, cols: list[int] | None = None) -> "RatMatrix":
        """Submatrix on the given row and column index lists (in that order)."""
        src = self.rows if rows is None else [self.rows[i] for i in rows]
        if cols is None:
            return RatMatrix(len(src), self.ncols, src)
        pos = {c: n for n, c in enumerate(cols)}
        out = []
        for r in src:
            out.append({pos[j]: v for j, v in r.items() if j in pos})
        return RatMatrix(len(src), len(cols), out)

    def column(self, j: int) -> dict[int, Scalar]:
        return {i: r[j] for i, r in enumerate(self.rows) if j in r}


def _norm(v: Scalar) -> Scalar:
    if type(v) is int:
        return v
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def _offsets(sizes: list[int]) -> list[int]:
    out = [0]
    for s in sizes:
        out.append(out[-1] + s)
    return out


# -- rank and kernel -------------------------------------------------------


def _integral_rows(m: RatMatrix) -> list[dict[int, int]]:
    rows = []
    for r in m.rows:
        if not r:
            continue
        den = 1
        for v in r.values():
            if isinstance(v, Fraction):
                den = den * v.denominator // gcd(den, v.denominator)
        if den == 1:
            rows.append(dict(r))
        else:
            rows.append({j: int(v * den) for j, v in r.items()})
    return rows


def _primitive(r: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in r.values():
        g = gcd(g, v)
        if g == 1:
            return r
    if g > 1:
        return {j: v // g for j, v in r.items()}
    return r


def rank(m: RatMatrix) -> int:
    """Rank over Q by fraction-free sparse elimination on integer rows.

    Each row is scaled to a primitive integer vector and reduced against the
    pivot rows found so far (cross-multiplication, then division by the row
    content), so intermediate entries stay small on incidence-style input.
    """
    if m.nrows == 0 or m.ncols == 0:
        return 0
    # eliminate along the shorter dimension
    if m.nrows > m.ncols:
        m = m.transpose()
    pivots: dict[int, dict[int, int]] = {}
    for r in sorted(_integral_rows(m), key=len):
        r = _primitive(r)
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = r
                break
            a, b = r[c], p[c]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {}
            for j, v in r.items():
                new[j] = v * fa
            for j, v in p.items():
                s = new.get(j, 0) - v * fb
                if s:
                    new[j] = s
                else:
                    new.pop(j, None)
            r = _primitive(new)
    return len(pivots)


def rref(m: RatMatrix) -> tuple[list[dict[int, Scalar]], list[int]]:
    """Reduced row echelon form over Q.

    Returns the nonzero rows (each with leading entry 1) and their pivot
    columns, both sorted by pivot column.
    """
    pivots: dict[int, dict[int, Scalar]] = {}
    for r0 in m.rows:
        if not r0:
            continue
        r = dict(r0)
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                inv = Fraction(1) / r[c]
                pivots[c] = {j: _norm(v * inv) for j, v in r.items()}
                break
            a = r[c]
            for j, v in p.items():
                s = r.get(j, 0) - a * v
                if s:
                    r[j] = _norm(s)
                else:
                    r.pop(j, None)
    cols = sorted(pivots)
    # back substitution, last pivot first
    for idx in range(len(cols) - 1, -1, -1):
        c = cols[idx]
        prow = pivots[c]
        for c2 in cols[:idx]:
            row = pivots[c2]
            a = row.get(c)
            if a:
                for j, v in prow.items():
                    s = row.get(j, 0) - a * v
                    if s:
                        row[j] = _norm(s)
                    else:
                        row.pop(j, None)
    return [pivots[c] for c in cols], cols


def rank_kernel(m: RatMatrix) -> tuple[int, RatMatrix]:
    """Rank of ``m`` and a kernel basis (as the columns of a matrix).

    The basis is the standard one read off the RREF: one vector per free
    column, with a 1 in that column and zeros in every other free column.
    """
    rows, pivot_cols = rref(m)
    pivset = set(pivot_cols)
    free = [j for j in range(m.ncols) if j not in pivset]
    fpos = {f: n for n, f in enumerate(free)}
    basis_rows: list[dict[int, Scalar]] = [{} for _ in range(m.ncols)]
    for f in free:
        basis_rows[f][fpos[f]] = 1
    for row, c in zip(rows, pivot_cols):
        target = basis_rows[c]
        for j, v in row.items():
            if j != c:
                target[fpos[j]] = -v
    return len(pivot_cols), RatMatrix(m.ncols, len(free), basis_rows)


def kernel_free_columns(m: RatMatrix) -> list[int]:
    """Free columns of the RREF; coordinates of a kernel vector in the
    :func:`rank_kernel` basis are its entries at these columns."""
    _, pivot_cols = rref(m)
    pivset = set(pivot_cols)
    return [j for j in range(m.ncols) if j not in pivset]


# -- complexes -------------------------------------------------------------


@dataclass(frozen=True)
class CohomologyTable:
    """Degree-indexed cohomology dimensions; zero entries are not stored."""

    dims: dict[int, int] = field(default_factory=dict)
    representatives: dict[int, RatMatrix] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dims", {k: v for k, v in sorted(self.dims.items()) if v})

    def __getitem__(self, k: int) -> int:
        return self.dims.get(k, 0)

    def is_zero(self) -> bool:
        return not self.dims

    def degrees(self) -> list[int]:
        return list(self.dims)

    def nonzero_in(self, degrees: Iterable[int]) -> list[int]:
        return [k for k in degrees if self.dims.get(k)]

    def to_json(self) -> dict[str, int]:
        return {str(k): v for k, v in self.dims.items()}

    def __repr__(self) -> str:
        body = ", ".join(f"H^{k}={v}" for k, v in self.dims.items())
        return f"CohomologyTable({body or '0'})"


class CochainComplex:
    """Bounded cochain complex of finite-dimensional Q-vector spaces.

    ``dims[k]`` is the dimension in degree ``k`` and ``diffs[k]`` the matrix of
    ``d^k : C^k -> C^{k+1}`` (shape ``dims[k+1] x dims[k]``). Missing entries
    are zero.
    """

    __slots__ = ("dims", "diffs", "_ranks")

    def __init__(self, dims: Mapping[int, int], diffs: Mapping[int, RatMatrix] | None = None,
                 check: bool = True):
        self.dims = {k: v for k, v in sorted(dims.items()) if v}
        self.diffs = {}
        for k, d in (diffs or {}).items():
            if d.shape != (self.dim(k + 1), self.dim(k)):
                raise ComplexError(
                    f"d^{k} has shape {d.shape}, expected ({self.dim(k + 1)}, {self.dim(k)})")
            if not d.is_zero():
                self.diffs[k] = d
        self._ranks: dict[int, int] = {}
        if check:
            self.check()

    @classmethod
    def zero(cls) -> "CochainComplex":
        return cls({})

    @classmethod
    def concentrated(cls, degree: int, dim: int = 1) -> "CochainComplex":
        return cls({degree: dim})

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def d(self, k: int) -> RatMatrix:
        m = self.diffs.get(k)
        if m is None:
            return RatMatrix(self.dim(k + 1), self.dim(k))
        return m

    @property
    def lo(self) -> int | None:
        return min(self.dims) if self.dims else None

    @property
    def hi(self) -> int | None:
        return max(self.dims) if self.dims else None

    def degrees(self) -> list[int]:
        return list(self.dims)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not self.dims

    def check(self) -> None:
        for k, d in self.diffs.items():
            nxt = self.diffs.get(k + 1)
            if nxt is not None and not (nxt @ d).is_zero():
                raise ComplexError(f"d^{k + 1} . d^{k} != 0")

    def rank_d(self, k: int) -> int:
        r = self._ranks.get(k)
        if r is None:
            m = self.diffs.get(k)
            r = 0 if m is None else rank(m)
            self._ranks[k] = r
        return r

    def shift(self, n: int) -> "CochainComplex":
        """``C[n]``: degree ``k`` holds ``C^{k+n}``, differential ``(-1)^n d``."""
        if n == 0:
            return self
        sign = -1 if n % 2 else 1
        return CochainComplex({k - n: v for k, v in self.dims.items()},
                              {k - n: d.scale(sign) for k, d in self.diffs.items()}, check=False)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * v for k, v in self.dims.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, CochainComplex):
            return NotImplemented
        return self.dims == other.dims and self.diffs == other.diffs

    def __repr__(self) -> str:
        return f"CochainComplex({self.dims})"


def direct_sum_complexes(a: CochainComplex, b: CochainComplex) -> CochainComplex:
    dims = {k: a.dim(k) + b.dim(k) for k in set(a.dims) | set(b.dims)}
    diffs = {}
    for k in set(a.diffs) | set(b.diffs):
        diffs[k] = RatMatrix.block([a.dim(k + 1), b.dim(k + 1)], [a.dim(k), b.dim(k)],
                                   {(0, 0): a.d(k), (1, 1): b.d(k)})
    return CochainComplex(dims, diffs, check=False)


def cohomology(c: CochainComplex, representatives: bool = False) -> CohomologyTable:
    """``dim H^k = dim ker d^k - rank d^{k-1}`` in every degree.

    With ``representatives=True`` also returns, per degree, a matrix whose
    columns are cocycles projecting to a basis of ``H^k``.
    """
    c.check()
    dims = {}
    for k in c.dims:
        dims[k] = c.dim(k) - c.rank_d(k) - c.rank_d(k - 1)
    reps = None
    if representatives:
        reps = {}
        for k, h in dims.items():
            if h:
                reps[k] = _representatives(c, k, h)
    return CohomologyTable(dims, reps)


def _representatives(c: CochainComplex, k: int, h: int) -> RatMatrix:
    _, z = rank_kernel(c.d(k))
    b = c.d(k - 1)
    # greedily extend a basis of the coboundaries by kernel vectors
    chosen: list[int] = []
    current = b
    base = rank(b)
    for j in range(z.ncols):
        trial = RatMatrix.block([c.dim(k)], [current.ncols, 1],
                                {(0, 0): current, (0, 1): z.select(cols=[j])})
        if rank(trial) > base:
            current, base = trial, base + 1
            chosen.append(j)
            if len(chosen) == h:
                break
    return z.select(cols=chosen)


class ChainMap:
    """Degree-0 map of cochain complexes, ``components[k] : S^k -> T^k``."""

    __slots__ = ("source", "target", "components", "_ranks")

    def __init__(self, source: CochainComplex, target: CochainComplex,
                 components: Mapping[int, RatMatrix] | None = None, check: bool = True):
        self.source = source
        self.target = target
        self.components = {}
        for k, f in (components or {}).items():
            if f.shape != (target.dim(k), source.dim(k)):
                raise ComplexError(
                    f"component {k} has shape {f.shape}, expected ({target.dim(k)}, {source.dim(k)})")
            if not f.is_zero():
                self.components[k] = f
        self._ranks: dict[int, int] = {}
        if check:
            self.check()

    def comp(self, k: int) -> RatMatrix:
        f = self.components.get(k)
        if f is None:
            return RatMatrix(self.target.dim(k), self.source.dim(k))
        return f

    def check(self) -> None:
        for k in set(self.source.dims) | set(self.target.dims):
            lhs = self.target.d(k) @ self.comp(k)
            rhs = self.comp(k + 1) @ self.source.d(k)
            if lhs != rhs:
                raise ComplexError(f"chain map fails to commute with d in degree {k}")

    @classmethod
    def identity(cls, c: CochainComplex) -> "ChainMap":
        return cls(c, c, {k: RatMatrix.identity(v) for k, v in c.dims.items()}, check=False)

    @classmethod
    def zero(cls, source: CochainComplex, target: CochainComplex) -> "ChainMap":
        return cls(source, target, {}, check=False)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composite ``self . other``."""
        if other.target is not self.source and other.target != self.source:
            raise ComplexError("composable maps required")
        comps = {}
        for k in set(self.components) & set(other.components):
            comps[k] = self.components[k] @ other.components[k]
        return ChainMap(other.source, self.target, comps, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        comps = {k: self.comp(k) + other.comp(k)
                 for k in set(self.components) | set(other.components)}
        return ChainMap(self.source, self.target, comps, check=False)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {k: f.scale(c) for k, f in self.components.items()}, check=False)

    def shift(self, n: int) -> "ChainMap":
        return ChainMap(self.source.shift(n), self.target.shift(n),
                        {k - n: f for k, f in self.components.items()}, check=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return self.components == other.components

    def induced_rank(self, k: int) -> int:
        """Rank of ``H^k(f)``.

        Uses ``rank H^k(f) = rank M - rank d_S^k - rank d_T^{k-1}`` with
        ``M = [[d_S^k, 0], [f^k, d_T^{k-1}]]``, so no kernel bases are needed.
        """
        r = self._ranks.get(k)
        if r is not None:
            return r
        s, t = self.source, self.target
        if not s.dim(k) or not t.dim(k) or k not in self.components:
            r = 0
        else:
            m = RatMatrix.block([s.dim(k + 1), t.dim(k)], [s.dim(k), t.dim(k - 1)],
                                {(0, 0): s.d(k), (1, 0): self.comp(k), (1, 1): t.d(k - 1)})
            r = rank(m) - s.rank_d(k) - t.rank_d(k - 1)
        self._ranks[k] = r
        return r

    def degrees(self) -> list[int]:
        return sorted(set(self.source.dims) | set(self.target.dims))


def cone(f: ChainMap) -> CochainComplex:
    """Mapping cone: ``Cone^k = T^k + S^{k+1}``, ``d(t, s) = (d t + f s, -d s)``."""
    s, t = f.source, f.target
    degs = set(t.dims) | {k - 1 for k in s.dims}
    dims = {k: t.dim(k) + s.dim(k + 1) for k in degs}
    diffs = {}
    for k in degs:
        blocks = {(0, 0): t.d(k), (0, 1): f.comp(k + 1), (1, 1): s.d(k + 1).scale(-1)}
        diffs[k] = RatMatrix.block([t.dim(k + 1), s.dim(k + 2)], [t.dim(k), s.dim(k + 1)], blocks)
    return CochainComplex(dims, diffs)


def fiber(f: ChainMap) -> CochainComplex:
    """``Cone(f)[-1]``: degree ``k`` is ``T^{k-1} + S^k``,
    ``d(t, s) = (-d t - f s, d s)``."""
    s, t = f.source, f.target
    degs = set(s.dims) | {k + 1 for k in t.dims}
    dims = {k: t.dim(k - 1) + s.dim(k) for k in degs}
    diffs = {}
    for k in degs:
        blocks = {(0, 0): -t.d(k - 1), (0, 1): -f.comp(k), (1, 1): s.d(k)}
        diffs[k] = RatMatrix.block([t.dim(k), s.dim(k + 1)], [t.dim(k - 1), s.dim(k)], blocks)
    return CochainComplex(dims, diffs)


@dataclass
class DoubleComplex:
    """Bigraded spaces ``D^{p,q}`` with ``dh: D^{p,q} -> D^{p+1,q}`` and
    ``dv: D^{p,q} -> D^{p,q+1}``.

    The two differentials must commute; the total complex inserts the sign.
    """

    dims: dict[tuple[int, int], int]
    dh: dict[tuple[int, int], RatMatrix] = field(default_factory=dict)
    dv: dict[tuple[int, int], RatMatrix] = field(default_factory=dict)

    def dim(self, p: int, q: int) -> int:
        return self.dims.get((p, q), 0)


def total_complex(dc: DoubleComplex) -> CochainComplex:
    """``Tot^n = sum_{p+q=n} D^{p,q}``, ``d = dh + (-1)^p dv``.

    Summands within a total degree are ordered by increasing ``p``.
    """
    by_deg: dict[int, list[tuple[int, int]]] = {}
    for (p, q), v in dc.dims.items():
        if v:
            by_deg.setdefault(p + q, []).append((p, q))
    for n in by_deg:
        by_deg[n].sort()
    dims = {n: sum(dc.dims[pq] for pq in pqs) for n, pqs in by_deg.items()}
    diffs = {}
    for n, src in by_deg.items():
        tgt = by_deg.get(n + 1)
        if not tgt:
            continue
        tpos = {pq: i for i, pq in enumerate(tgt)}
        blocks = {}
        for j, (p, q) in enumerate(src):
            h = dc.dh.get((p, q))
            if h is not None and (p + 1, q) in tpos:
                blocks[(tpos[(p + 1, q)], j)] = h
            v = dc.dv.get((p, q))
            if v is not None and (p, q + 1) in tpos:
                blocks[(tpos[(p, q + 1)], j)] = v if p % 2 == 0 else -v
        diffs[n] = RatMatrix.block([dc.dims[pq] for pq in tgt], [dc.dims[pq] for pq in src], blocks)
    return CochainComplex(dims, diffs)
