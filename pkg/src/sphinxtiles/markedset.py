"""The marked tile set: recomposed tile-, edge- and vertex-tiles with three
label channels.

Pieces live on the 3x-refined lattice.  Each unit cell splits into three
corner smalls, three connector smalls (each hugging one corner), and three
edge-middle smalls.  From these, a tiling decomposes into:

* *vertex-tiles*: at each tiling vertex, per incident sphinx, the arc of
  that sphinx's corner + connector smalls around the vertex;
* *edge-tiles*: astride each tiling edge, the rhombus of the two middle
  smalls (a half on region-boundary edges);
* *tile-tiles*: per sphinx, the remaining bulk: the middle smalls of its
  five interior edges, the only smalls away from every skeleton.

Each interface small edge carries one label text and "colors match" is label
equality.  A tiling edge's data is its owner's wall index (channel 1, with
side and end components orienting the contact), the owner's position in its
parent (channel 2, "U" when unknowable) and the wire token (channel 3).
Vertex arcs meet arcs of neighbouring sphinxes only across tiling edges, on
an interface carrying just that edge's data, so the two sides of a long wall
never couple into one prototile; interfaces across sphinx-interior edges
carry only the wire token.  Markings exist only where skeleton information
flows, which is what keeps the tile set finite.

Wire tokens: "-" none, "U" unknowable (region boundary), else the color
optionally flagged with "@h"/"@t" (a supertile's signal enters here; the
origin sits at the head/tail end) and "!h"/"!t" (the signal terminates at
that end's vertex).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InconsistentContext, NotClosed
from .lattice import (
    IDENTITY,
    ORIENTATIONS,
    Cell,
    Edge,
    Pose,
    Vertex,
    boundary,
    cell_edges,
    cell_vertices,
    edge_cells,
    place,
    scale_cells,
    undirected,
)
from .skeleton import (
    Ownership,
    edge_ownership,
    epivertices,
    route_vertex_wire,
    skeleton_of,
)
from .substitution import CHILD_POSES, SupertileNode, generate

Label = tuple
NO_WIRE = "-"
UNKNOWN = "U"

#: Decoration contexts: (position in parent, wire color), the root context
#: being ("U", "-").  A wire requires a concrete parent position.
ALL_CONTEXTS: tuple[tuple[str, str], ...] = (("U", NO_WIRE),) + tuple(
    (str(s), w) for s in range(4) for w in (NO_WIRE, "A", "B")
)

TILE, EDGE, VERT = "tile", "edge", "vertex"


# --- refined geometry ------------------------------------------------------


@lru_cache(maxsize=None)
def refine_cell(cell: Cell) -> frozenset[Cell]:
    """The nine small cells of a unit cell on the 3x lattice."""
    return scale_cells([cell], 3)


@lru_cache(maxsize=None)
def corner_small(cell: Cell, v: Vertex) -> Cell:
    """The small triangle of ``cell`` at its corner ``v``."""
    p3 = (3 * v[0], 3 * v[1])
    for s in refine_cell(cell):
        if p3 in cell_vertices(s):
            return s
    raise ValueError(f"{v} is not a corner of {cell}")


@lru_cache(maxsize=None)
def middle_small(cell: Cell, e: Edge) -> Cell:
    """The small triangle of ``cell`` along the middle third of its edge."""
    u, v = e
    a = (2 * u[0] + v[0], 2 * u[1] + v[1])
    b = (u[0] + 2 * v[0], u[1] + 2 * v[1])
    for s in refine_cell(cell):
        vs = cell_vertices(s)
        if a in vs and b in vs:
            return s
    raise ValueError(f"{e} is not an edge of {cell}")


@lru_cache(maxsize=None)
def connector_small(cell: Cell, v: Vertex) -> Cell:
    """The interior small of ``cell`` sharing an edge with its corner small
    at ``v``."""
    c = corner_small(cell, v)
    inner = next(f for f in cell_edges(c) if (3 * v[0], 3 * v[1]) not in f)
    a, b = edge_cells(inner)
    return b if a == c else a


@lru_cache(maxsize=None)
def contact_edge(cell: Cell, e: Edge, u: Vertex) -> Edge:
    """Interface small edge between the middle small of ``e`` in ``cell`` and
    the connector small at endpoint ``u``."""
    m = middle_small(cell, e)
    k = connector_small(cell, u)
    shared = set(cell_edges(m)) & set(cell_edges(k))
    if len(shared) != 1:
        raise AssertionError("middle and connector smalls do not meet")
    return shared.pop()


@lru_cache(maxsize=None)
def end_third_edge(e: Edge, v: Vertex) -> Edge:
    """The small edge on the third of tiling edge ``e`` nearest endpoint
    ``v``: the interface between the two corner smalls flanking it."""
    u = e[1] if v == e[0] else e[0]
    return undirected((3 * v[0], 3 * v[1]), (2 * v[0] + u[0], 2 * v[1] + u[1]))


def refine_region(cells) -> frozenset[Cell]:
    out = set()
    for c in cells:
        out |= refine_cell(c)
    return frozenset(out)


# --- pieces ----------------------------------------------------------------


@dataclass(frozen=True)
class MarkedTile:
    """A canonicalized prototile: geometry plus labelled interfaces."""

    kind: str
    smalls: tuple[Cell, ...]
    marks: tuple[tuple[Edge, Label], ...]

    def area(self) -> int:
        return len(self.smalls)

    def sort_key(self):
        return (self.kind, self.smalls, self.marks)


@dataclass(frozen=True)
class PlacedPiece:
    """A piece in global 3x coordinates with its interface labels."""

    kind: str
    smalls: frozenset[Cell]
    marks: tuple[tuple[Edge, Label], ...]

    def content(self):
        return (self.kind, tuple(sorted(self.smalls)), self.marks)


def _transform_piece(piece: PlacedPiece, g: Pose) -> PlacedPiece:
    smalls = frozenset(g.apply_cell(s) for s in piece.smalls)
    marks = tuple(sorted((g.apply_edge(e), lab) for e, lab in piece.marks))
    return PlacedPiece(piece.kind, smalls, marks)


def canonicalize(piece: PlacedPiece) -> tuple[MarkedTile, Pose]:
    """Canonical prototile of a placed piece and the pose placing it back.

    Canonical form: lexicographically least content over the 12 orientations,
    translated so the least small cell sits at column/row zero.
    """
    best = None
    best_pose = None
    for g in ORIENTATIONS:
        moved = _transform_piece(piece, g)
        c0, r0, _ = min(moved.smalls)
        t = Pose((-c0, -r0), 0, False)
        norm = _transform_piece(moved, t)
        content = norm.content()
        if best is None or content < best:
            best = content
            best_pose = t.compose(g)
    tile = MarkedTile(best[0], best[1], best[2])
    return tile, best_pose.invert()


def placement_of(tile: MarkedTile, pose: Pose) -> PlacedPiece:
    piece = PlacedPiece(tile.kind, frozenset(tile.smalls), tile.marks)
    return _transform_piece(piece, pose)


# --- decoration ------------------------------------------------------------


@dataclass(frozen=True)
class DecoratedSupertile:
    level: int
    context: tuple[str, str]
    placements: tuple[PlacedPiece, ...]
    boundary_summary: tuple

    def content_signature(self) -> frozenset:
        return frozenset(p.content() for p in self.placements)


def _normalize_context(context) -> tuple[str, str]:
    if context is None:
        return (UNKNOWN, NO_WIRE)
    s, w = context
    s = UNKNOWN if s in (None, UNKNOWN) else str(s)
    w = NO_WIRE if w in (None, NO_WIRE) else str(w)
    if s not in (UNKNOWN, "0", "1", "2", "3") or w not in (NO_WIRE, "A", "B"):
        raise InconsistentContext(f"bad context {context!r}")
    if s == UNKNOWN and w != NO_WIRE:
        raise InconsistentContext("a wire needs a concrete parent position")
    return (s, w)


class _Decorator:
    """Derives all interface labels for one supertile decoration."""

    def __init__(self, level: int, context: tuple[str, str]):
        if level < 1:
            raise ValueError("decorations exist for level >= 1")
        self.level = level
        self.context = context
        s, w = context
        if s == UNKNOWN:
            self.tree = generate(level)
            self.target = self.tree
        else:
            rel = CHILD_POSES[int(s)].scaled(2 ** level)
            self.tree = generate(level + 1, rel.invert())
            self.target = self.tree.children[int(s)]
            assert self.target.pose == IDENTITY
        self.own = edge_ownership(self.tree)
        self.edge_info: dict[Edge, tuple[int, tuple[Vertex, Vertex], int | None]] = {}
        for node in self.tree.walk():
            if node.level >= 1:
                for se in skeleton_of(node, self.own):
                    self.edge_info[se.edge] = (se.sigma, se.directed, node.child_index)
        self.region = self.target.cells()
        self.boundary_edges = {undirected(*de) for de in boundary(self.region)}
        self.leaf_of: dict[Cell, Pose] = {}
        self.leaves = list(self.target.leaves())
        for lf in self.leaves:
            for c in place(lf.pose):
                self.leaf_of[c] = lf.pose
        self.wire_token: dict[Edge, str] = {}
        if w != NO_WIRE:
            terminal = next(ep for ep in epivertices(self.target) if ep.kind == w)
            vw = route_vertex_wire(self.target, terminal, self.own)
            for e in vw.crossings:
                self.wire_token[e] = w
            for e, o in vw.entries:
                self.wire_token[e] += "@" + self._end(o, e)
            e_last = vw.crossings[-1]
            self.wire_token[e_last] += "!" + self._end(terminal.vertex, e_last)

    # label derivation

    @staticmethod
    def _end(v: Vertex, e_or_directed) -> str:
        a, b = e_or_directed
        if v == a:
            return "t"
        if v == b:
            return "h"
        return UNKNOWN

    @staticmethod
    def _side(cell: Cell, directed) -> str:
        (ax, ay), (bx, by) = directed
        vs = cell_vertices(cell)
        mx = vs[0][0] + vs[1][0] + vs[2][0] - 3 * ax
        my = vs[0][1] + vs[1][1] + vs[2][1] - 3 * ay
        det = (bx - ax) * my - (by - ay) * mx
        return "L" if det > 0 else "R"

    def _wire(self, e: Edge) -> str:
        tok = self.wire_token.get(e)
        if tok is not None:
            return tok
        return UNKNOWN if e in self.boundary_edges else NO_WIRE

    def _is_leaf_interior(self, e: Edge) -> bool:
        c1, c2 = edge_cells(e)
        p1, p2 = self.leaf_of.get(c1), self.leaf_of.get(c2)
        return p1 is not None and p1 == p2

    def contact_label(self, cell: Cell, e: Edge, u: Vertex) -> Label:
        """Label of the connector-to-middle interface at endpoint ``u`` of
        edge ``e`` in ``cell``."""
        if self._is_leaf_interior(e):
            return ("i", self._wire(e))
        info = self.edge_info.get(e)
        if info is None:
            return ("f", UNKNOWN, UNKNOWN, self._wire(e), UNKNOWN, UNKNOWN)
        sigma, directed, owner_idx = info
        s_owner = UNKNOWN if owner_idx is None else str(owner_idx)
        return (
            "f",
            str(sigma),
            s_owner,
            self._wire(e),
            self._side(cell, directed),
            self._end(u, directed),
        )

    def cross_label(self, e: Edge, v: Vertex) -> Label:
        """Label of the corner-to-corner interface across tiling edge ``e``
        at its ``v`` end (side-free: shared by both flanking sphinxes)."""
        info = self.edge_info.get(e)
        if info is None:
            return ("g", UNKNOWN, UNKNOWN, self._wire(e), UNKNOWN)
        sigma, directed, owner_idx = info
        s_owner = UNKNOWN if owner_idx is None else str(owner_idx)
        return ("g", str(sigma), s_owner, self._wire(e), self._end(v, directed))

    # piece assembly

    def pieces(self) -> list[PlacedPiece]:
        out: list[PlacedPiece] = []
        edge_set: set[Edge] = set()
        vert_set: set[Vertex] = set()
        interior_of: dict[Pose, list[Edge]] = {lf.pose: [] for lf in self.leaves}
        for lf in self.leaves:
            cells = place(lf.pose)
            b = boundary(cells)
            bedges = {undirected(*de) for de in b}
            edge_set.update(bedges)
            vert_set.update(v for de in b for v in de)
            seen: set[Edge] = set()
            for x in cells:
                for e in cell_edges(x):
                    if e not in bedges and e not in seen:
                        seen.add(e)
                        interior_of[lf.pose].append(e)
        # tile-tiles: interior-edge middles of each sphinx
        for lf in self.leaves:
            smalls = set()
            marks = []
            for e in sorted(interior_of[lf.pose]):
                for x in edge_cells(e):
                    smalls.add(middle_small(x, e))
                    for u in e:
                        marks.append((contact_edge(x, e, u), self.contact_label(x, e, u)))
            out.append(PlacedPiece(TILE, frozenset(smalls), tuple(sorted(marks))))
        # edge-tiles: tiling-edge middles
        for e in sorted(edge_set):
            smalls = set()
            marks = []
            for x in edge_cells(e):
                if x in self.region:
                    smalls.add(middle_small(x, e))
                    for u in e:
                        marks.append((contact_edge(x, e, u), self.contact_label(x, e, u)))
            out.append(PlacedPiece(EDGE, frozenset(smalls), tuple(sorted(marks))))
        # vertex-tiles: per-sphinx corner/connector arcs around each vertex
        for v in sorted(vert_set):
            by_leaf: dict[Pose, list[Cell]] = {}
            for x in sorted(self.region):
                if v in cell_vertices(x):
                    by_leaf.setdefault(self.leaf_of[x], []).append(x)
            for pose in sorted(by_leaf):
                smalls = set()
                marks = []
                for x in by_leaf[pose]:
                    smalls.add(corner_small(x, v))
                    smalls.add(connector_small(x, v))
                    for e in cell_edges(x):
                        if v not in e:
                            continue
                        marks.append((contact_edge(x, e, v), self.contact_label(x, e, v)))
                        if not self._is_leaf_interior(e):
                            marks.append((end_third_edge(e, v), self.cross_label(e, v)))
                out.append(PlacedPiece(VERT, frozenset(smalls), tuple(sorted(set(marks)))))
        return out

    def boundary_summary(self) -> tuple:
        edges = []
        for e in sorted(self.boundary_edges):
            info = self.edge_info.get(e)
            sigma = UNKNOWN if info is None else str(info[0])
            edges.append((e, sigma, self._wire(e)))
        return (self.context[0], tuple(edges))


def decorate_supertile(level: int, context=None) -> DecoratedSupertile:
    """The fully decorated level-``level`` supertile for one context.

    ``context`` is ``(child_index, wire_color_or_None)`` or None for the
    root (no parent) context.  The supertile sits at the identity pose.
    """
    ctx = _normalize_context(context)
    dec = _Decorator(level, ctx)
    pieces = dec.pieces()
    covered: set[Cell] = set()
    total = 0
    for p in pieces:
        total += len(p.smalls)
        covered |= p.smalls
    expected = refine_region(dec.region)
    if covered != expected or total != len(expected):
        raise AssertionError("decoration pieces do not partition the region")
    return DecoratedSupertile(level, ctx, tuple(pieces), dec.boundary_summary())


def recompose(node: SupertileNode, ownership: Ownership) -> list[tuple[str, MarkedTile, Pose]]:
    """Geometric recomposition of a supertile into tile-/edge-/vertex-tiles
    (no labels), as (kind, canonical geometry, placement pose)."""
    dec = _Decorator.__new__(_Decorator)
    dec.level = node.level
    dec.context = (UNKNOWN, NO_WIRE)
    dec.tree = node
    dec.target = node
    dec.own = ownership
    dec.edge_info = {}
    dec.region = node.cells()
    dec.boundary_edges = {undirected(*de) for de in boundary(dec.region)}
    dec.leaves = list(node.leaves())
    dec.leaf_of = {}
    for lf in dec.leaves:
        for c in place(lf.pose):
            dec.leaf_of[c] = lf.pose
    dec.wire_token = {}
    out = []
    for piece in dec.pieces():
        bare = PlacedPiece(piece.kind, piece.smalls, ())
        tile, pose = canonicalize(bare)
        out.append((piece.kind, tile, pose))
    return out


@dataclass(frozen=True)
class TilesetResult:
    tiles: tuple[MarkedTile, ...]
    closure_level: int
    per_level_sizes: tuple[int, ...]


def _level_tiles(level: int) -> set[MarkedTile]:
    tiles: set[MarkedTile] = set()
    for ctx in ALL_CONTEXTS:
        dec = decorate_supertile(level, ctx)
        for piece in dec.placements:
            tiles.add(canonicalize(piece)[0])
    return tiles


def enumerate_tileset(max_level: int) -> TilesetResult:
    """All marked tiles appearing in decorations up to ``max_level``.

    Raises :class:`NotClosed` unless the cumulative set stops growing at
    ``max_level``; the first stable level is reported as the closure level.
    """
    if max_level < 2:
        raise ValueError("need max_level >= 2 to observe closure")
    cumulative: set[MarkedTile] = set()
    sizes = []
    closure_level = None
    for lv in range(1, max_level + 1):
        before = len(cumulative)
        cumulative |= _level_tiles(lv)
        sizes.append(len(cumulative))
        if lv > 1 and len(cumulative) == before and closure_level is None:
            closure_level = lv
    if sizes[-1] != sizes[-2]:
        raise NotClosed(f"tile set still growing at level {max_level}: sizes {sizes}")
    tiles = tuple(sorted(cumulative, key=MarkedTile.sort_key))
    return TilesetResult(tiles, closure_level, tuple(sizes))
