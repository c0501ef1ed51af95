"""Exact integer geometry of the triangular lattice and the sphinx hexiamond.

Conventions
===========

Vertices are integer pairs ``(x, y)``; the Cartesian position of a vertex is
``x * e1 + y * e2`` with ``e1 = (1, 0)`` and ``e2 = (1/2, sqrt(3)/2)``.
Floating point appears only in :func:`to_cart`, which exists for rendering.

Cells (unit triangles) are triples ``(col, row, parity)``:

* ``UP`` cell ``(c, r)`` has vertices ``(c, r), (c+1, r), (c, r+1)``.
* ``DOWN`` cell ``(c, r)`` has vertices ``(c, r), (c+1, r), (c+1, r-1)``.

With this addressing an UP cell and the DOWN cell with the *same* ``(c, r)``
share their horizontal edge ``(c, r)-(c+1, r)``; the DOWN cell is the mirror
image of the UP cell through that edge.

Undirected edges are stored as a sorted pair of vertices; directed edges as
``(tail, head)``.

The canonical sphinx occupies six cells with its 3-edge base on ``y = 0``
and its head at the top left; see :data:`SPHINX_CELLS`.  The shape is chiral
and has a simple pentagonal boundary of 8 unit edges.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple

Vertex = tuple[int, int]
Cell = tuple[int, int, int]
Edge = tuple[Vertex, Vertex]

UP = 0
DOWN = 1

SQRT3 = 3.0 ** 0.5

# Linear parts of the point group: ROT[k] is rotation by k*60 degrees CCW,
# MIRROR is the reflection fixing the Cartesian x-axis.  Matrices act on
# lattice coordinates as v -> (m[0]*x + m[1]*y, m[2]*x + m[3]*y).
ROT = (
    (1, 0, 0, 1),
    (0, -1, 1, 1),
    (-1, -1, 1, 0),
    (-1, 0, 0, -1),
    (0, 1, -1, -1),
    (1, 1, -1, 0),
)
MIRROR = (1, 1, 0, -1)


class GeometryError(ValueError):
    """Base class for lattice geometry failures."""


class Disconnected(GeometryError):
    """Region is not edge-connected."""


class NotSimplyConnected(GeometryError):
    """Region has holes (or a self-touching boundary)."""


def _mat_mul(a, b):
    return (
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    )


def _mat_apply(m, v: Vertex) -> Vertex:
    return (m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1])


def _linear(rot: int, refl: bool):
    return _mat_mul(ROT[rot], MIRROR) if refl else ROT[rot]


class Pose(NamedTuple):
    """A lattice isometry: reflect (optionally), rotate by ``rot`` * 60 deg
    CCW, then translate by ``anchor``."""

    anchor: Vertex
    rot: int
    refl: bool

    def canonical(self) -> "Pose":
        return Pose((int(self.anchor[0]), int(self.anchor[1])), self.rot % 6, bool(self.refl))

    def apply(self, v: Vertex) -> Vertex:
        x, y = _mat_apply(_linear(self.rot, self.refl), v)
        return (x + self.anchor[0], y + self.anchor[1])

    def apply_cell(self, cell: Cell) -> Cell:
        return cell_from_vertices([self.apply(v) for v in cell_vertices(cell)])

    def apply_edge(self, e: Edge) -> Edge:
        return undirected(self.apply(e[0]), self.apply(e[1]))

    def compose(self, other: "Pose") -> "Pose":
        """Pose equal to applying ``other`` first, then ``self``."""
        m = _linear(self.rot, self.refl)
        t = _mat_apply(m, other.anchor)
        rot = (self.rot - other.rot) % 6 if self.refl else (self.rot + other.rot) % 6
        return Pose(
            (t[0] + self.anchor[0], t[1] + self.anchor[1]),
            rot,
            self.refl != other.refl,
        )

    def invert(self) -> "Pose":
        rot = self.rot if self.refl else (-self.rot) % 6
        m = _linear(rot, self.refl)
        t = _mat_apply(m, self.anchor)
        return Pose((-t[0], -t[1]), rot, self.refl)

    def scaled(self, factor: int) -> "Pose":
        """Conjugate by scaling: the same rotation/reflection with the
        translation stretched by ``factor``."""
        return Pose((self.anchor[0] * factor, self.anchor[1] * factor), self.rot, self.refl)


IDENTITY = Pose((0, 0), 0, False)

#: The 12 orientation classes (6 rotations x optional reflection), anchored
#: at the origin, in a fixed deterministic order.
ORIENTATIONS = tuple(Pose((0, 0), k, bool(s)) for s in (0, 1) for k in range(6))


def compose_poses(a: Pose, b: Pose) -> Pose:
    return a.compose(b)


def invert_pose(a: Pose) -> Pose:
    return a.invert()


def cell_vertices(cell: Cell) -> tuple[Vertex, Vertex, Vertex]:
    c, r, p = cell
    if p == UP:
        return ((c, r), (c + 1, r), (c, r + 1))
    return ((c, r), (c + 1, r), (c + 1, r - 1))


def cell_from_vertices(verts: Iterable[Vertex]) -> Cell:
    """Identify the unit cell with the given corner set.

    The coordinate sums of a cell's corners determine it: an UP cell ``(c, r)``
    sums to ``(3c+1, 3r+1)``, a DOWN cell to ``(3c+2, 3r-1)``.
    """
    vs = list(verts)
    sx = vs[0][0] + vs[1][0] + vs[2][0]
    sy = vs[0][1] + vs[1][1] + vs[2][1]
    if sx % 3 == 1 and sy % 3 == 1:
        cell = ((sx - 1) // 3, (sy - 1) // 3, UP)
    elif sx % 3 == 2 and sy % 3 == 2:
        cell = ((sx - 2) // 3, (sy + 1) // 3, DOWN)
    else:
        raise GeometryError(f"vertex triple {vs!r} is not a unit cell")
    if set(cell_vertices(cell)) != set(vs):
        raise GeometryError(f"vertex triple {vs!r} is not a unit cell")
    return cell


def undirected(a: Vertex, b: Vertex) -> Edge:
    return (a, b) if a <= b else (b, a)


def cell_boundary_ccw(cell: Cell) -> tuple[tuple[Vertex, Vertex], ...]:
    """The cell's three directed edges in counterclockwise order (interior on
    the left of each edge)."""
    c, r, p = cell
    if p == UP:
        a, b, t = (c, r), (c + 1, r), (c, r + 1)
        return ((a, b), (b, t), (t, a))
    a, b, d = (c, r), (c + 1, r), (c + 1, r - 1)
    return ((a, d), (d, b), (b, a))


def cell_edges(cell: Cell) -> tuple[Edge, Edge, Edge]:
    return tuple(undirected(*de) for de in cell_boundary_ccw(cell))


def cell_neighbors(cell: Cell) -> tuple[Cell, Cell, Cell]:
    c, r, p = cell
    if p == UP:
        return ((c, r, DOWN), (c - 1, r + 1, DOWN), (c, r + 1, DOWN))
    return ((c, r, UP), (c + 1, r - 1, UP), (c, r - 1, UP))


def edge_cells(e: Edge) -> tuple[Cell, Cell]:
    """The two cells flanking an undirected unit edge."""
    (x1, y1), (x2, y2) = e
    dx, dy = x2 - x1, y2 - y1
    if (dx, dy) == (1, 0):  # horizontal
        return ((x1, y1, UP), (x1, y1, DOWN))
    if (dx, dy) == (0, 1):  # NE-pointing
        return ((x1, y1, UP), (x1 - 1, y1 + 1, DOWN))
    if (dx, dy) == (1, -1):  # SE-pointing (canonical order puts (x1,y1) first)
        return ((x1, y1 - 1, UP), (x1, y1, DOWN))
    raise GeometryError(f"{e!r} is not a unit lattice edge")


def to_cart(v: Vertex, scale: float = 1.0) -> tuple[float, float]:
    """Cartesian coordinates of a lattice vertex (rendering only)."""
    return ((v[0] + v[1] / 2.0) * scale, (v[1] * SQRT3 / 2.0) * scale)


# --- the sphinx -----------------------------------------------------------

#: Canonical sphinx: base of 3 unit edges on y=0, head at the top left.
SPHINX_CELLS: frozenset[Cell] = frozenset(
    {
        (0, 0, UP),
        (1, 0, UP),
        (2, 0, UP),
        (0, 1, DOWN),
        (1, 1, DOWN),
        (0, 1, UP),
    }
)

SPHINX_SIZE = len(SPHINX_CELLS)


def place(pose: Pose, cells: Iterable[Cell] = SPHINX_CELLS) -> frozenset[Cell]:
    """Image of a cell set (the canonical sphinx by default) under a pose."""
    return frozenset(pose.apply_cell(c) for c in cells)


def scale_cells(cells: Iterable[Cell], factor: int) -> frozenset[Cell]:
    """All unit cells inside the region scaled by an integer factor."""
    out = set()
    for c, r, p in cells:
        # The scaled image of one unit cell is a size-`factor` triangle.
        if p == UP:
            for i in range(factor):
                for j in range(factor - i):
                    out.add((factor * c + j, factor * r + i, UP))
                for j in range(factor - i - 1):
                    out.add((factor * c + j, factor * r + i + 1, DOWN))
        else:
            for i in range(factor):
                for j in range(factor - i):
                    out.add((factor * c + i + j, factor * r - i, DOWN))
                for j in range(factor - i - 1):
                    out.add((factor * c + i + 1 + j, factor * r - i - 1, UP))
    return frozenset(out)


def sphinx_region(level: int, pose: Pose = IDENTITY) -> frozenset[Cell]:
    """Cells of the sphinx inflated by ``2**level`` and placed at ``pose``."""
    return place(pose, scale_cells(SPHINX_CELLS, 2 ** level))


def region_edges(cells: Iterable[Cell]) -> dict[Edge, int]:
    """Multiplicity (1 or 2) of every unit edge bordering the region."""
    count: dict[Edge, int] = {}
    for cell in cells:
        for e in cell_edges(cell):
            count[e] = count.get(e, 0) + 1
    return count


def is_edge_connected(cells: Iterable[Cell]) -> bool:
    todo = set(cells)
    if not todo:
        return True
    stack = [next(iter(sorted(todo)))]
    todo.discard(stack[0])
    while stack:
        cur = stack.pop()
        for nb in cell_neighbors(cur):
            if nb in todo:
                todo.discard(nb)
                stack.append(nb)
    return not todo


def boundary(cells: Iterable[Cell]) -> list[tuple[Vertex, Vertex]]:
    """Closed CCW boundary cycle of an edge-connected, hole-free region.

    Returns directed edges, starting from the lexicographically least one.
    Raises :class:`Disconnected` or :class:`NotSimplyConnected`.
    """
    cellset = frozenset(cells)
    if not cellset:
        return []
    if not is_edge_connected(cellset):
        raise Disconnected("region is not edge-connected")
    directed = set()
    for cell in cellset:
        for de in cell_boundary_ccw(cell):
            directed.add(de)
    border = [de for de in directed if (de[1], de[0]) not in directed]
    succ: dict[Vertex, Vertex] = {}
    for tail, head in border:
        if tail in succ:
            # A vertex with two outgoing border edges means the boundary is
            # not a simple cycle; such regions are out of scope.
            raise NotSimplyConnected("boundary passes through a vertex twice")
        succ[tail] = head
    start = min(border)
    cycle = [start]
    cur = start[1]
    while cur != start[0]:
        nxt = succ[cur]
        cycle.append((cur, nxt))
        cur = nxt
    if len(cycle) != len(border):
        raise NotSimplyConnected("region has holes")
    return cycle


def region_vertices(cells: Iterable[Cell]) -> frozenset[Vertex]:
    out = set()
    for cell in cells:
        out.update(cell_vertices(cell))
    return frozenset(out)


def interior_vertices(cells: Iterable[Cell]) -> frozenset[Vertex]:
    cellset = frozenset(cells)
    bverts = {v for de in boundary(cellset) for v in de}
    return frozenset(region_vertices(cellset) - bverts)


def orbit_translation_classes(cells: Iterable[Cell]) -> list[frozenset[Cell]]:
    """The 12 oriented copies of a cell set, each translated to a canonical
    position (lexicographically least cell at a fixed offset)."""
    out = []
    for g in ORIENTATIONS:
        img = sorted(place(g, cells))
        c0, r0, _ = img[0]
        out.append(frozenset((c - c0, r - r0, p) for c, r, p in img))
    return out
