"""Skeletons, epivertices and vertex wires of sphinx supertiles.

Every tiling edge (a unit edge on some leaf boundary) interior to a generated
supertile lies on the skeleton of exactly one node: the parent of the
highest-level node whose boundary contains it.  A node's skeleton is the set
of interior walls between its four children: 8 straight runs ("walls"),
each ``2**(level-1)`` unit edges long, a scaled copy of one fixed picture.

Epivertices are the two distinguished boundary points of a supertile where
higher-level wall runs may terminate.  They form a substitution system:
each epivertex of a node is, at the same lattice location, an epivertex of
one of its children.  The canonical pair sits on the supertile's base at
one and two thirds; it was found by exhaustive search over all vertex pairs
closed under the child substitution (no such pair exists among interior
wall-graph vertices, so the terminals live on the boundary, consistent with
wall runs of the *parent* needing termination there).

A vertex wire is the terminate signal delivered to an epivertex.  It is a
chain of unit-cell crossings: it enters the node at its origin (where the
node's skeleton meets its parent's), runs to the origin of the child that
inherits the terminal point, and continues recursively until the level-1
supertile delivers it to the terminal vertex itself.  Wire routing is
deterministic (breadth-first shortest cell path, lexicographic tie-break).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import NotAnEpivertex, Unroutable
from .lattice import (
    Cell,
    Edge,
    Pose,
    Vertex,
    boundary,
    cell_vertices,
    edge_cells,
    place,
    undirected,
)
from .substitution import CHILD_POSES, SupertileNode, generate

#: The eight canonical wall edges of a level-1 supertile (the interior walls
#: of the doubled sphinx), lexicographically ordered; the stored direction
#: (tail, head) is part of the canonical labelling.
WALLS: tuple[tuple[Vertex, Vertex], ...] = (
    ((0, 1), (1, 1)),
    ((1, 1), (1, 2)),
    ((1, 2), (2, 1)),
    ((1, 2), (2, 2)),
    ((2, 1), (3, 0)),
    ((3, 0), (3, 1)),
    ((3, 1), (4, 1)),
    ((4, 1), (4, 2)),
)

#: Epivertex locations in the canonical level-1 frame, by terminal kind.
EPI_POINTS: dict[str, Vertex] = {"A": (2, 0), "B": (4, 0)}
EPI_KINDS = ("A", "B")

#: Origin of the root's wire when no parent context exists: the point where
#: the two base children meet, the only skeleton-boundary contact on the base.
ROOT_ORIGIN: Vertex = (3, 0)


def _det(u: tuple[int, int], v: tuple[int, int]) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _cell_center3(cell: Cell) -> tuple[int, int]:
    vs = cell_vertices(cell)
    return (vs[0][0] + vs[1][0] + vs[2][0], vs[0][1] + vs[1][1] + vs[2][1])


def _wall_sides() -> tuple[tuple[int, int], ...]:
    """(left child, right child) of each canonical wall, relative to its
    stored direction."""
    owner_of_cell: dict[Cell, int] = {}
    for i, rel in enumerate(CHILD_POSES):
        for c in place(rel):
            owner_of_cell[c] = i
    sides = []
    for tail, head in WALLS:
        d = (head[0] - tail[0], head[1] - tail[1])
        c1, c2 = edge_cells(undirected(tail, head))
        m1 = _cell_center3(c1)
        rel1 = (m1[0] - 3 * tail[0], m1[1] - 3 * tail[1])
        left, right = (c1, c2) if _det(d, rel1) > 0 else (c2, c1)
        sides.append((owner_of_cell[left], owner_of_cell[right]))
    return tuple(sides)


#: Child indices flanking each wall: WALL_SIDES[j] = (left, right).
WALL_SIDES: tuple[tuple[int, int], ...] = _wall_sides()


def _child_origins() -> tuple[Vertex, ...]:
    """Canonical origin of a child with the given index: the lexicographically
    least point where its skeleton meets the parent's, interior to the parent
    (so a wire can cross into the child there), in the child's level-1 frame.
    """
    from .lattice import SPHINX_CELLS, scale_cells

    wall_endpoints = sorted({v for w in WALLS for v in w})
    bverts = {v for de in boundary(_doubled_cells()) for v in de}
    meet_canon = [v for v in wall_endpoints if v in bverts]
    parent_pts = set()
    for tail, head in WALLS:
        parent_pts.add((2 * tail[0], 2 * tail[1]))
        parent_pts.add((2 * head[0], 2 * head[1]))
        parent_pts.add((tail[0] + head[0], tail[1] + head[1]))
    outer = {v for de in boundary(scale_cells(SPHINX_CELLS, 4)) for v in de}
    origins = []
    for rel in CHILD_POSES:
        q = rel.scaled(2)
        hits = sorted(
            q.apply(y)
            for y in meet_canon
            if q.apply(y) in parent_pts and q.apply(y) not in outer
        )
        if not hits:
            raise Unroutable("child skeleton never meets parent skeleton")
        origins.append(q.invert().apply(hits[0]))
    return tuple(origins)


def _doubled_cells() -> frozenset[Cell]:
    from .lattice import SPHINX_CELLS, scale_cells

    return scale_cells(SPHINX_CELLS, 2)


#: Origin point per child index, in the child's canonical level-1 frame.
CHILD_ORIGINS: tuple[Vertex, ...] = _child_origins()


@dataclass(frozen=True)
class SkeletonEdge:
    """A unit tiling edge with its owning skeleton's labelling."""

    edge: Edge
    directed: tuple[Vertex, Vertex]
    sigma: int
    owner_level: int
    owner_path: tuple[int, ...]


@dataclass(frozen=True)
class Epivertex:
    vertex: Vertex
    owner_path: tuple[int, ...]
    kind: str


@dataclass(frozen=True)
class VertexWire:
    """A routed terminate signal: ordered unit-cell path and the tiling edges
    it crosses, from the owner's origin vertex to the terminal epivertex.

    ``entries`` are the crossings where the signal enters a supertile of the
    descending chain, each with that supertile's origin vertex; the final
    crossing is incident to the terminal vertex.
    """

    color: str
    origin: Vertex
    terminal: Epivertex
    cells: tuple[Cell, ...]
    crossings: tuple[Edge, ...]
    entries: tuple[tuple[Edge, Vertex], ...]


class Ownership:
    """Edge-to-owner assignment for one generated supertile."""

    def __init__(self, root: SupertileNode):
        self.root = root
        self.nodes: dict[tuple[int, ...], SupertileNode] = {
            n.path: n for n in root.walk()
        }
        root_boundary = {undirected(*de) for de in boundary(root.cells())}
        self.ambient: frozenset[Edge] = frozenset(root_boundary)
        best: dict[Edge, tuple[int, list[tuple[int, ...]]]] = {}
        for node in root.walk():
            for de in boundary(node.cells()):
                e = undirected(*de)
                if e in root_boundary:
                    continue
                lv, paths = best.get(e, (-1, []))
                if node.level > lv:
                    best[e] = (node.level, [node.path])
                elif node.level == lv:
                    paths.append(node.path)
        self.owner: dict[Edge, tuple[int, tuple[int, ...]]] = {}
        self.node_skeleton: dict[tuple[int, ...], list[Edge]] = {
            n.path: [] for n in root.walk() if n.level >= 1
        }
        for e, (lv, paths) in best.items():
            parents = {p[:-1] for p in paths}
            if len(parents) != 1:
                raise AssertionError(f"edge {e} has {len(parents)} owners")
            owner_path = parents.pop()
            self.owner[e] = (lv + 1, owner_path)
            self.node_skeleton[owner_path].append(e)
        for edges in self.node_skeleton.values():
            edges.sort()

    def owner_of(self, e: Edge) -> tuple[int, tuple[int, ...]]:
        """(owner_level, owner_path); ambient edges get level n+1 and the
        marker path ('ambient',)."""
        if e in self.ambient:
            return (self.root.level + 1, ("ambient",))  # type: ignore[return-value]
        return self.owner[e]


def edge_ownership(root: SupertileNode) -> Ownership:
    return Ownership(root)


def node_frame_point(node: SupertileNode, p: Vertex) -> Vertex:
    """Map a point given in the canonical level-1 frame (doubled sphinx) to
    the node's position, scaled to its level."""
    s = 2 ** (node.level - 1)
    return node.pose.apply((p[0] * s, p[1] * s))


def walls_of(node: SupertileNode) -> list[tuple[int, tuple[Vertex, Vertex]]]:
    """The node's 8 directed wall runs, as (sigma, (tail, head))."""
    return [
        (j, (node_frame_point(node, t), node_frame_point(node, h)))
        for j, (t, h) in enumerate(WALLS)
    ]


def _unit_steps(tail: Vertex, head: Vertex) -> list[tuple[Vertex, Vertex]]:
    dx, dy = head[0] - tail[0], head[1] - tail[1]
    n = max(abs(dx), abs(dy))
    sx, sy = dx // n, dy // n
    return [
        ((tail[0] + i * sx, tail[1] + i * sy), (tail[0] + (i + 1) * sx, tail[1] + (i + 1) * sy))
        for i in range(n)
    ]


def skeleton_of(node: SupertileNode, ownership: Ownership) -> list[SkeletonEdge]:
    """The node's skeleton in canonical (wall-major) order, labelled."""
    if node.level < 1:
        return []
    out = []
    for j, (tail, head) in walls_of(node):
        for a, b in _unit_steps(tail, head):
            out.append(
                SkeletonEdge(
                    edge=undirected(a, b),
                    directed=(a, b),
                    sigma=j,
                    owner_level=node.level,
                    owner_path=node.path,
                )
            )
    owned = {se.edge for se in out}
    if owned != set(ownership.node_skeleton[node.path]):
        raise AssertionError("wall reconstruction disagrees with ownership")
    return out


def epivertices(node: SupertileNode, ownership: Ownership | None = None) -> list[Epivertex]:
    """The node's two terminal vertices, in kind order."""
    if node.level < 1:
        raise ValueError("leaves have no epivertices")
    return [
        Epivertex(node_frame_point(node, EPI_POINTS[k]), node.path, k)
        for k in EPI_KINDS
    ]


def vertex_substitution(parent: SupertileNode, epi: Epivertex) -> tuple[SupertileNode, Epivertex]:
    """The child epivertex at the same lattice location."""
    if epi not in epivertices(parent):
        raise NotAnEpivertex(f"{epi} is not an epivertex of {parent.path}")
    if parent.level < 2:
        raise ValueError("children of a level-1 node are leaves")
    for child in parent.children:
        for cand in epivertices(child):
            if cand.vertex == epi.vertex:
                return child, cand
    raise AssertionError("vertex substitution failed; child table broken")


def origin_vertex(node: SupertileNode) -> Vertex:
    """Where the node's skeleton meets its parent's (canonical point for the
    generated root)."""
    idx = node.child_index
    local = ROOT_ORIGIN if idx is None else CHILD_ORIGINS[idx]
    return node_frame_point(node, local)


def _lex_shortest_cell_path(
    region: frozenset[Cell], starts: Iterable[Cell], goals: Iterable[Cell]
) -> list[Cell]:
    """Deterministic shortest path in the cell-adjacency graph of ``region``
    (breadth-first; ties broken toward the lexicographically least cells)."""
    from .lattice import cell_neighbors

    starts = sorted(set(starts) & region)
    goalset = set(goals) & region
    if not starts or not goalset:
        raise Unroutable("wire endpoint has no cells in the region")
    dist = {c: 0 for c in starts}
    frontier = list(starts)
    while frontier:
        nxt = []
        for c in frontier:
            for nb in cell_neighbors(c):
                if nb in region and nb not in dist:
                    dist[nb] = dist[c] + 1
                    nxt.append(nb)
        frontier = sorted(nxt)
    reach = sorted(g for g in goalset if g in dist)
    if not reach:
        raise Unroutable("wire target unreachable")
    end = min(reach, key=lambda g: (dist[g], g))
    path = [end]
    while dist[path[-1]] > 0:
        cur = path[-1]
        preds = sorted(
            nb for nb in cell_neighbors(cur) if nb in dist and dist[nb] == dist[cur] - 1
        )
        path.append(preds[0])
    path.reverse()
    return path


def _cells_at(region: frozenset[Cell], v: Vertex) -> list[Cell]:
    return [c for c in region if v in cell_vertices(c)]


def _terminal_cell_path(
    region: frozenset[Cell], starts: Iterable[Cell], v: Vertex
) -> list[Cell]:
    """Shortest deterministic cell path whose final crossing is an edge
    incident to ``v`` (so the signal arrives at that vertex's tile)."""
    from .lattice import cell_edges, cell_neighbors

    starts = sorted(set(starts) & region)
    if not starts:
        raise Unroutable("wire endpoint has no cells in the region")
    dist = {c: 0 for c in starts}
    frontier = list(starts)
    while frontier:
        nxt = []
        for c in frontier:
            for nb in cell_neighbors(c):
                if nb in region and nb not in dist:
                    dist[nb] = dist[c] + 1
                    nxt.append(nb)
        frontier = sorted(nxt)
    best = None
    for x in sorted(region):
        if v not in cell_vertices(x):
            continue
        for p in sorted(cell_neighbors(x)):
            if p not in dist:
                continue
            shared = set(cell_edges(p)) & set(cell_edges(x))
            if shared and v in next(iter(shared)):
                cand = (dist[p] + 1, x, p)
                if best is None or cand < best:
                    best = cand
    if best is None:
        raise Unroutable(f"no crossing into {v} reachable")
    _, x, p = best
    path = [p]
    while dist[path[-1]] > 0:
        cur = path[-1]
        preds = sorted(
            nb for nb in cell_neighbors(cur) if nb in dist and dist[nb] == dist[cur] - 1
        )
        path.append(preds[0])
    path.reverse()
    path.append(x)
    return path


def entry_edge(node: SupertileNode) -> Edge:
    """Canonical boundary edge through which a wire enters the node: the
    lexicographically least unit edge of the node's boundary at its origin."""
    o = origin_vertex(node)
    cands = sorted(
        undirected(*de) for de in boundary(node.cells()) if o in de
    )
    if not cands:
        raise Unroutable("origin vertex not on node boundary")
    return cands[0]


def route_vertex_wire(
    node: SupertileNode, terminal: Epivertex, ownership: Ownership | None = None
) -> VertexWire:
    """Deterministic wire from the node's origin to the terminal epivertex.

    The wire descends recursively: each level routes (outside the terminal
    child) from its own origin to the terminal child's canonical entry edge,
    crosses into the child there, and the level-1 supertile finally delivers
    the signal to the terminal vertex.  For non-root nodes the first crossing
    is the node's own entry edge.
    """
    if terminal not in epivertices(node):
        raise NotAnEpivertex(f"{terminal} is not an epivertex of {node.path}")
    cells: list[Cell] = []
    lead_crossings: list[Edge] = []
    entries: list[tuple[Edge, Vertex]] = []
    cur = node
    kind = terminal.kind
    if cur.path:
        e0 = entry_edge(cur)
        inside = [c for c in edge_cells(e0) if c in cur.cells()]
        starts = inside
        lead_crossings.append(e0)
        entries.append((e0, origin_vertex(cur)))
    else:
        starts = _cells_at(cur.cells(), origin_vertex(cur))
    while True:
        region = cur.cells()
        if cur.level == 1:
            leg = _terminal_cell_path(region, starts, terminal.vertex)
            cells.extend(leg)
            break
        child, child_epi = vertex_substitution(cur, Epivertex(terminal.vertex, cur.path, kind))
        e_in = entry_edge(child)
        flank = edge_cells(e_in)
        in_cell = next(c for c in flank if c in child.cells())
        out_cell = next(c for c in flank if c not in child.cells())
        outer = frozenset(region - child.cells())
        # Stay outside the terminal child when possible so each level's leg
        # crosses the child boundary exactly once, at its canonical entry.
        search_region = outer if set(starts) & outer else frozenset(region)
        leg = _lex_shortest_cell_path(search_region, starts, [out_cell])
        cells.extend(leg)
        cells.append(in_cell)
        entries.append((e_in, origin_vertex(child)))
        starts = [in_cell]
        cur, kind = child, child_epi.kind
    # loop-erase so the final path is cell-simple (hence edge-simple)
    dedup: list[Cell] = []
    seen_at: dict[Cell, int] = {}
    for c in cells:
        if c in seen_at:
            del dedup[seen_at[c] + 1 :]
            for d in list(seen_at):
                if seen_at[d] > seen_at[c]:
                    del seen_at[d]
        else:
            seen_at[c] = len(dedup)
            dedup.append(c)
    from .lattice import cell_edges

    crossings = list(lead_crossings)
    for a, b in zip(dedup, dedup[1:]):
        shared = set(cell_edges(a)) & set(cell_edges(b))
        if len(shared) != 1:
            raise Unroutable("wire legs do not join edge-to-edge")
        crossings.append(shared.pop())
    if len(set(crossings)) != len(crossings):
        raise Unroutable("wire crosses an edge twice")
    kept = set(crossings)
    return VertexWire(
        color=terminal.kind,
        origin=origin_vertex(node),
        terminal=terminal,
        cells=tuple(dedup),
        crossings=tuple(crossings),
        entries=tuple((e, o) for e, o in entries if e in kept),
    )


def wire_capable_edges(root: SupertileNode, ownership: Ownership) -> frozenset[Edge]:
    """Union of crossing edges over every wire of every node in the tree."""
    out: set[Edge] = set()
    for node in root.walk():
        if node.level < 1:
            continue
        for epi in epivertices(node):
            out.update(route_vertex_wire(node, epi, ownership).crossings)
    return frozenset(out)
