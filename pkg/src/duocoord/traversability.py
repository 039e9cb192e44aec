"""Accessibility geometry: swept corridors, per-robot traversability graphs,
and hop-minimal relocation planning.

A graph node is either the robot (identified by its robot id, located at the
mount) or a remaining object (located at its footprint center). An edge means
the end-effector can travel between the two locations along a straight swept
corridor without touching any other remaining object.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .geometry import Point, dist, segment_point_distance
from .scene import RobotSpec, SceneState


def corridor_free(
    state: SceneState,
    a: Point,
    b: Point,
    moving_radius: float,
    ignore: Iterable[str] = (),
    stats=None,
) -> bool:
    """True iff a disc of ``moving_radius`` swept along segment a-b clears
    every remaining object outside ``ignore``: for each such object j,
    distance(segment, c_j) >= moving_radius + radius_j. The corridor
    centerline must stay between the side walls and in front of the back
    wall; the front edge is open, so y may extend below 0.
    """
    if stats is not None:
        stats.corridor_checks += 1
    w, h = state.scene.workspace
    for p in (a, b):
        if not (0.0 <= p[0] <= w and p[1] <= h):
            return False
    skip = set(ignore)
    for obj in state.remaining:
        if obj.id in skip:
            continue
        if segment_point_distance(a, b, obj.center) < moving_radius + obj.radius:
            return False
    return True


def robot_object_edge(state: SceneState, robot: RobotSpec, object_id: str, stats=None) -> bool:
    """Mount-to-object corridor at gripper radius, subject to reach and to
    любой edges invalidated by failed motion attempts."""
    if (robot.id, object_id) in state.blocked_edges:
        return False
    obj = state.scene.object(object_id)
    if dist(robot.mount, obj.center) > robot.reach_radius:
        return False
    return corridor_free(
        state, robot.mount, obj.center, state.scene.gripper_radius, {object_id}, stats
    )


def object_object_edge(state: SceneState, id_a: str, id_b: str, stats=None) -> bool:
    """Object-to-object corridor; the carried radius is the larger endpoint
    radius (conservative, since either may be carried through)."""
    a = state.scene.object(id_a)
    b = state.scene.object(id_b)
    moving = state.scene.gripper_radius + max(a.radius, b.radius)
    return corridor_free(state, a.center, b.center, moving, {id_a, id_b}, stats)


@dataclass
class TGraph:
    """Per-robot traversability graph over the remaining objects."""

    robot_id: str
    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    adjacency: dict[str, tuple[str, ...]] = field(init=False, repr=False)

    def __post_init__(self):
        adj: dict[str, list[str]] = {n: [] for n in self.nodes}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adjacency = {n: tuple(sorted(vs)) for n, vs in adj.items()}

    def neighbors(self, node: str) -> tuple[str, ...]:
        return self.adjacency[node]

    def has_edge(self, u: str, v: str) -> bool:
        return (u, v) in self.edges or (v, u) in self.edges


def build_tgraph(state: SceneState, robot: RobotSpec, stats=None) -> TGraph:
    """O(N^2) candidate edges, each checked against O(N) obstacles."""
    objects = state.remaining
    nodes = (robot.id,) + tuple(o.id for o in objects)
    edges: set[tuple[str, str]] = set()
    for obj in objects:
        if robot_object_edge(state, robot, obj.id, stats):
            edges.add((robot.id, obj.id))
    for a, b in combinations(objects, 2):
        if object_object_edge(state, a.id, b.id, stats):
            edges.add((a.id, b.id) if a.id <= b.id else (b.id, a.id))
    return TGraph(robot_id=robot.id, nodes=nodes, edges=frozenset(edges))


@dataclass(frozen=True)
class RelocationPlan:
    """Ordered objects to relocate, nearest first, ending with the target."""

    robot_id: str
    sequence: tuple[str, ...]

    @property
    def k(self) -> int:
        return len(self.sequence)

    def __post_init__(self):
        if not self.sequence:
            raise ValueError("empty relocation plan")
        if len(set(self.sequence)) != len(self.sequence):
            raise ValueError(f"duplicate ids in plan {self.sequence}")


def _hop_distances(graph: TGraph, source: str) -> dict[str, int]:
    distances = {source: 0}
    queue = deque([source])
    while queue:
        node = queue.popleft()
        for neighbor in graph.neighbors(node):
            if neighbor not in distances:
                distances[neighbor] = distances[node] + 1
                queue.append(neighbor)
    return distances


def orp_plan(graph: TGraph, target_id: str) -> RelocationPlan | None:
    """Hop-minimal path robot -> target; None when disconnected.

    Among equal-hop paths the lexicographically smallest object-id sequence
    is returned, chosen greedily over BFS distances to the target.
    """
    if target_id not in graph.adjacency:
        return None
    to_target = _hop_distances(graph, target_id)
    if graph.robot_id not in to_target:
        return None
    sequence: list[str] = []
    node = graph.robot_id
    while node != target_id:
        step_down = to_target[node] - 1
        node = min(
            nb for nb in graph.neighbors(node) if to_target.get(nb, -1) == step_down
        )
        sequence.append(node)
    return RelocationPlan(robot_id=graph.robot_id, sequence=tuple(sequence))


def relocation_plans(state: SceneState, stats=None) -> dict[str, RelocationPlan]:
    """ORP plans for every robot that can reach the target; may be empty."""
    target_id = state.scene.target.id
    plans: dict[str, RelocationPlan] = {}
    if not state.has(target_id):
        return plans
    for robot in state.scene.robots:
        plan = orp_plan(build_tgraph(state, robot, stats), target_id)
        if plan is not None:
            plans[robot.id] = plan
    return plans


def tgraph_to_dict(graph: TGraph) -> dict:
    return {
        "robot": graph.robot_id,
        "nodes": list(graph.nodes),
        "adjacency": {n: list(graph.adjacency[n]) for n in graph.nodes},
    }
