"""The sphinx rep-4 substitution: inflate by 2, divide into 4 children.

All levels live on one integer lattice; a level-``n`` supertile at pose ``p``
occupies the canonical sphinx scaled by ``2**n`` and moved by ``p``.  The
four child poses below are the unique way four unit sphinxes tile the doubled
sphinx (verified exhaustively by the partition tests); children are labelled
0..3 by the lexicographic minimum cell of their image in the canonical
parent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import ResourceLimit
from .lattice import (
    IDENTITY,
    ORIENTATIONS,
    SPHINX_CELLS,
    Cell,
    Pose,
    place,
    scale_cells,
)

#: Relative poses of the four children inside a level-1 parent at IDENTITY.
#: Index in this tuple is the child's label (its position within the parent).
CHILD_POSES: tuple[Pose, ...] = (
    Pose((3, 0), 3, True),   # 0: bottom left
    Pose((0, 4), 4, False),  # 1: head (top), same handedness as parent
    Pose((1, 2), 0, True),   # 2: middle
    Pose((6, 0), 3, True),   # 3: bottom right (tail)
)

CHILD_INDICES = tuple(range(4))

#: Default cap on generated leaves (4**7).
DEFAULT_LEAF_CAP = 4 ** 7


def substitute(pose: Pose, child_scale: int = 1) -> list[tuple[int, Pose]]:
    """Child poses of a parent supertile at ``pose``.

    ``child_scale`` is the edge scale of the children (``2**(n-1)`` for a
    level-``n`` parent); with the default 1 the parent is the doubled sphinx
    and the children are unit sphinxes.
    """
    return [(i, pose.compose(rel.scaled(child_scale))) for i, rel in enumerate(CHILD_POSES)]


@dataclass(frozen=True)
class SupertileNode:
    """Node of the substitution hierarchy (a level-``n`` supertile).

    ``path`` is the child-index sequence from the generated root (empty for
    the root itself); its last entry is the node's position in its parent.
    """

    level: int
    pose: Pose
    path: tuple[int, ...] = ()
    children: tuple["SupertileNode", ...] = ()

    @property
    def child_index(self) -> int | None:
        return self.path[-1] if self.path else None

    def cells(self) -> frozenset[Cell]:
        return place(self.pose, scale_cells(SPHINX_CELLS, 2 ** self.level))

    def leaves(self) -> Iterator["SupertileNode"]:
        """Leaves in child-index-major (deterministic) order."""
        if not self.children:
            yield self
        else:
            for ch in self.children:
                yield from ch.leaves()

    def leaf_poses(self) -> list[Pose]:
        return [leaf.pose for leaf in self.leaves()]

    def walk(self) -> Iterator["SupertileNode"]:
        yield self
        for ch in self.children:
            yield from ch.walk()


def generate(level: int, root_pose: Pose = IDENTITY, leaf_cap: int = DEFAULT_LEAF_CAP) -> SupertileNode:
    """Full 4-ary supertile tree of the given depth."""
    if level < 0:
        raise ValueError("level must be >= 0")
    if 4 ** level > leaf_cap:
        raise ResourceLimit(f"4**{level} leaves exceed cap {leaf_cap}")

    def build(lv: int, pose: Pose, path: tuple[int, ...]) -> SupertileNode:
        if lv == 0:
            return SupertileNode(0, pose, path)
        kids = tuple(
            build(lv - 1, child_pose, path + (i,))
            for i, child_pose in substitute(pose, 2 ** (lv - 1))
        )
        return SupertileNode(lv, pose, path, kids)

    return build(level, root_pose.canonical(), ())


def placements_disjoint(poses: Iterable[Pose], scale: int = 1) -> bool:
    seen: set[Cell] = set()
    for p in poses:
        img = place(p, scale_cells(SPHINX_CELLS, scale))
        if seen & img:
            return False
        seen |= img
    return True


def decompose(placements: Iterable[Pose], child_scale: int = 1) -> list[tuple[Pose, dict[int, Pose]]]:
    """Every complete group of 4 placements forming a substitute() image.

    ``placements`` are poses of scale-``child_scale`` supertiles; returned
    parents are one level up.  The empty list means no group exists.
    """
    pool = set(placements)
    groups: dict[Pose, dict[int, Pose]] = {}
    for q in pool:
        for i, rel in enumerate(CHILD_POSES):
            parent = q.compose(rel.scaled(child_scale).invert())
            if parent in groups:
                continue
            members = {}
            for j, rel_j in enumerate(CHILD_POSES):
                cand = parent.compose(rel_j.scaled(child_scale))
                if cand not in pool:
                    break
                members[j] = cand
            else:
                groups[parent] = members
    return sorted(groups.items())


def recompose_root(placements: Iterable[Pose]) -> Pose | None:
    """Repeatedly decompose a unit-sphinx leaf set back to its root pose.

    Returns the root pose when the set is exactly the leaf set of some
    supertile (decomposition unique and complete at every step), else None.
    """
    poses = sorted(set(placements))
    scale = 1
    while len(poses) > 1:
        groups = decompose(poses, scale)
        used = [q for _, members in groups for q in members.values()]
        if len(groups) * 4 != len(poses) or len(set(used)) != len(poses):
            return None
        poses = sorted(parent for parent, _ in groups)
        scale *= 2
    return poses[0] if poses else None


def patch_in_supertile(
    placements: Iterable[Pose],
    max_level: int,
    leaf_cap: int = DEFAULT_LEAF_CAP,
) -> bool:
    """True iff some rigid motion carries the patch into the leaf set of a
    generated supertile of level <= ``max_level``.

    The search is exhaustive over the 12 orientation classes and all anchor
    translations matching the patch onto supertile leaves.
    """
    patch = sorted(set(placements))
    if not patch:
        return True
    for k in range(0, max_level + 1):
        if len(patch) > 4 ** k:
            continue
        leaf_set = set(generate(k, IDENTITY, leaf_cap).leaf_poses())
        for g in ORIENTATIONS:
            oriented = [g.compose(q) for q in patch]
            q0 = oriented[0]
            for leaf in leaf_set:
                if leaf.rot != q0.rot or leaf.refl != q0.refl:
                    continue
                dx = leaf.anchor[0] - q0.anchor[0]
                dy = leaf.anchor[1] - q0.anchor[1]
                t = Pose((dx, dy), 0, False)
                if all(t.compose(q) in leaf_set for q in oriented):
                    return True
    return False
