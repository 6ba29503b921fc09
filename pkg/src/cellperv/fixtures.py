"""Small stratified posets used as test spaces and by ``cellperv gen``."""

from __future__ import annotations

from itertools import product

from .poset import Cell, StratifiedPoset, Stratum


def point() -> StratifiedPoset:
    return StratifiedPoset([Cell("p", 0, "S0")], [], [Stratum("S0", 0)], geometric=True)


def circle() -> StratifiedPoset:
    """Two vertices and two edges; one (non-geometric) stratum."""
    cells = [Cell("v1", 0, "S"), Cell("v2", 0, "S"), Cell("e1", 1, "S"), Cell("e2", 1, "S")]
    covers = [("v1", "e1"), ("v2", "e1"), ("v1", "e2"), ("v2", "e2")]
    return StratifiedPoset(cells, covers, [Stratum("S", 1)], geometric=False)


def cone() -> StratifiedPoset:
    """Closed disk as the cone over a two-edge circle, singular stratum at
    the cone point ``c``.

    ``a1, a2`` join ``c`` to ``v1, v2``; ``t1, t2`` are the triangles over the
    circle edges ``e1, e2``.
    """
    dims = {"c": 0, "v1": 0, "v2": 0, "e1": 1, "e2": 1, "a1": 1, "a2": 1, "t1": 2, "t2": 2}
    cells = [Cell(x, d, "S0" if x == "c" else "S1") for x, d in dims.items()]
    covers = [("c", "a1"), ("c", "a2"), ("v1", "a1"), ("v2", "a2"),
              ("v1", "e1"), ("v2", "e1"), ("v1", "e2"), ("v2", "e2"),
              ("a1", "t1"), ("a2", "t1"), ("e1", "t1"),
              ("a1", "t2"), ("a2", "t2"), ("e2", "t2")]
    return StratifiedPoset(cells, covers, [Stratum("S0", 0), Stratum("S1", 1)], geometric=True)


def _open_disk(prefix: str, center: str = "c") -> tuple[list[tuple[str, int]], list[tuple[str, str]]]:
    """Open star of a vertex in a two-triangle disk: center, two edges, two
    triangles."""
    a1, a2, t1, t2 = (f"{prefix}{s}" for s in ("a1", "a2", "t1", "t2"))
    cells = [(a1, 1), (a2, 1), (t1, 2), (t2, 2)]
    covers = [(center, a1), (center, a2), (a1, t1), (a2, t1), (a1, t2), (a2, t2)]
    return cells, covers


def suspension() -> StratifiedPoset:
    """Two-sphere as the suspension of a circle, poles ``n`` and ``s`` as
    two separate point strata."""
    cells = [Cell("n", 0, "N"), Cell("s", 0, "S")]
    for v in ("v1", "v2"):
        cells.append(Cell(v, 0, "R"))
    for e in ("e1", "e2"):
        cells.append(Cell(e, 1, "R"))
    covers = [("v1", "e1"), ("v2", "e1"), ("v1", "e2"), ("v2", "e2")]
    for pole in ("n", "s"):
        for i in (1, 2):
            cells.append(Cell(f"{pole}a{i}", 1, "R"))
            covers += [(pole, f"{pole}a{i}"), (f"v{i}", f"{pole}a{i}")]
        for j in (1, 2):
            t = f"{pole}t{j}"
            cells.append(Cell(t, 2, "R"))
            covers += [(f"{pole}a1", t), (f"{pole}a2", t), (f"e{j}", t)]
    strata = [Stratum("N", 0), Stratum("S", 0), Stratum("R", 1)]
    return StratifiedPoset(cells, covers, strata, geometric=True)


def nodal() -> StratifiedPoset:
    """Two open disks meeting in one point (the node ``c``)."""
    cells = [Cell("c", 0, "node")]
    covers = []
    for branch in ("p", "q"):
        bc, bcov = _open_disk(branch)
        cells += [Cell(x, d, f"branch_{branch}") for x, d in bc]
        covers += bcov
    strata = [Stratum("node", 0), Stratum("branch_p", 1), Stratum("branch_q", 1)]
    return StratifiedPoset(cells, covers, strata, geometric=True)


def bidisk() -> StratifiedPoset:
    """Product of two open disks stratified by the origin, the two punctured
    coordinate axes and the complement: strata of pdim 0, 1, 1, 2."""
    disk_cells = [("c", 0)]
    dc, dcov = _open_disk("")
    disk_cells += dc
    dim = dict(disk_cells)
    names = [x for x, _ in disk_cells]

    def stratum(x, y):
        if x == "c" and y == "c":
            return "O"
        if x == "c":
            return "X"
        if y == "c":
            return "Y"
        return "T"

    cells = [Cell(f"{x}.{y}", dim[x] + dim[y], stratum(x, y)) for x, y in product(names, names)]
    covers = []
    for a, b in dcov:
        for z in names:
            covers.append((f"{a}.{z}", f"{b}.{z}"))
            covers.append((f"{z}.{a}", f"{z}.{b}"))
    strata = [Stratum("O", 0), Stratum("X", 1), Stratum("Y", 1), Stratum("T", 2)]
    return StratifiedPoset(cells, covers, strata, geometric=True)


FIXTURES = {
    "point": point,
    "circle": circle,
    "cone": cone,
    "suspension": suspension,
    "nodal": nodal,
    "bidisk": bidisk,
}

GEOMETRIC = ("point", "cone", "suspension", "nodal", "bidisk")


def get(name: str) -> StratifiedPoset:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
