"""World model: disc objects, robot specs, workspace, generation and I/O.

The workspace is an axis-aligned rectangle ``[0, w] x [0, h]`` whose front
edge (y = 0) is open; robots mount on that edge and drop relocated objects
outside (y < 0). Everything is immutable after construction.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace

from .geometry import Point, dist, is_finite_point

# Documented defaults (mm, mm/s, s).
DEFAULT_WORKSPACE: tuple[float, float] = (1100.0, 500.0)
DEFAULT_GRIPPER_RADIUS = 40.0
DEFAULT_RADIUS_RANGE: tuple[float, float] = (25.0, 45.0)
DEFAULT_REACH = 800.0
DEFAULT_SPEED = 100.0
DEFAULT_GRASP_TIME = 2.0
DEFAULT_RELEASE_TIME = 2.0
DEFAULT_STANDBY_TIME = 1.0

OVERLAP_SLACK = 1e-9  # mm slack on the pairwise separation invariant

MAX_CONSECUTIVE_REJECTIONS = 10_000
MAX_PLACEMENT_RESTARTS = 50


class SceneError(Exception):
    """Base class for scene construction and I/O failures."""


class GenerationError(SceneError):
    """Random placement failed (workspace too crowded or no valid target)."""


class InvalidParameters(SceneError, ValueError):
    """Degenerate generation parameters."""


class ParseError(SceneError, ValueError):
    """Serialized scene text is malformed; message carries the locus."""


class InvariantViolation(SceneError, ValueError):
    """A scene invariant does not hold. ``invariant`` names which one."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


@dataclass(frozen=True)
class Disc:
    center: Point
    radius: float


@dataclass(frozen=True)
class ObjectSpec:
    id: str
    footprint: Disc
    is_target: bool = False

    @property
    def center(self) -> Point:
        return self.footprint.center

    @property
    def radius(self) -> float:
        return self.footprint.radius


@dataclass(frozen=True)
class RobotSpec:
    id: str
    mount: Point  # on the open front edge; also the standby pose
    reach_radius: float
    dropoff: Point  # outside the workspace
    speed: float = DEFAULT_SPEED
    grasp_time: float = DEFAULT_GRASP_TIME
    release_time: float = DEFAULT_RELEASE_TIME
    standby_time: float = DEFAULT_STANDBY_TIME


@dataclass(frozen=True)
class Scene:
    workspace: tuple[float, float] = DEFAULT_WORKSPACE
    objects: tuple[ObjectSpec, ...] = ()
    robots: tuple[RobotSpec, ...] = ()
    gripper_radius: float = DEFAULT_GRIPPER_RADIUS

    @property
    def target(self) -> ObjectSpec:
        for obj in self.objects:
            if obj.is_target:
                return obj
        raise InvariantViolation("one-target", "scene has no target object")

    def object(self, object_id: str) -> ObjectSpec:
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        raise KeyError(object_id)

    def robot(self, robot_id: str) -> RobotSpec:
        for robot in self.robots:
            if robot.id == robot_id:
                return robot
        raise KeyError(robot_id)

    def contains(self, p: Point) -> bool:
        w, h = self.workspace
        return 0.0 <= p[0] <= w and 0.0 <= p[1] <= h


@dataclass(frozen=True)
class SceneState:
    """A scene minus relocated objects, plus robot-object edges ruled out by
    failed motion attempts. Immutable; updates return new states."""

    scene: Scene
    removed: frozenset[str] = frozenset()
    blocked_edges: frozenset[tuple[str, str]] = frozenset()
    remaining: tuple[ObjectSpec, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "remaining",
            tuple(o for o in self.scene.objects if o.id not in self.removed),
        )

    def remove(self, object_id: str) -> "SceneState":
        return SceneState(self.scene, self.removed | {object_id}, self.blocked_edges)

    def block(self, robot_id: str, object_id: str) -> "SceneState":
        return SceneState(
            self.scene, self.removed, self.blocked_edges | {(robot_id, object_id)}
        )

    def has(self, object_id: str) -> bool:
        return any(o.id == object_id for o in self.remaining)


def validate_scene(scene: Scene) -> None:
    """Check every scene invariant; raise InvariantViolation on the first failure."""
    w, h = scene.workspace
    if not (w > 0 and h > 0):
        raise InvariantViolation("workspace", f"degenerate workspace {w} x {h}")
    if len(scene.robots) != 2:
        raise InvariantViolation("two-robots", f"expected 2 robots, got {len(scene.robots)}")
    if len(scene.objects) < 2:
        raise InvariantViolation("min-objects", f"expected N >= 2, got {len(scene.objects)}")
    if scene.gripper_radius <= 0:
        raise InvariantViolation("gripper-radius", "gripper_radius must be > 0")

    seen: set[str] = set()
    targets = [o for o in scene.objects if o.is_target]
    if len(targets) != 1:
        raise InvariantViolation(
            "one-target", f"exactly one target required, found {len(targets)}"
        )
    for obj in scene.objects:
        if obj.id in seen:
            raise InvariantViolation("unique-ids", f"duplicate object id {obj.id!r}")
        seen.add(obj.id)
        if obj.radius <= 0:
            raise InvariantViolation("radius-positive", f"{obj.id} has radius {obj.radius}")
        if not is_finite_point(obj.center):
            raise InvariantViolation("center-finite", f"{obj.id} center not finite")
        if not scene.contains(obj.center):
            raise InvariantViolation(
                "object-in-workspace", f"{obj.id} center {obj.center} outside workspace"
            )
    for a_idx in range(len(scene.objects)):
        for b_idx in range(a_idx + 1, len(scene.objects)):
            a, b = scene.objects[a_idx], scene.objects[b_idx]
            if dist(a.center, b.center) < a.radius + b.radius - OVERLAP_SLACK:
                raise InvariantViolation(
                    "overlap",
                    f"{a.id} and {b.id}: distance {dist(a.center, b.center):.3f}"
                    f" < {a.radius + b.radius:.3f}",
                )

    for robot in scene.robots:
        if robot.reach_radius <= 0:
            raise InvariantViolation("reach-positive", f"{robot.id} reach {robot.reach_radius}")
        if scene.contains(robot.dropoff):
            raise InvariantViolation(
                "dropoff-outside", f"{robot.id} dropoff {robot.dropoff} inside workspace"
            )
        for name in ("speed", "grasp_time", "release_time", "standby_time"):
            if getattr(robot, name) <= 0:
                raise InvariantViolation("timing-positive", f"{robot.id}.{name} must be > 0")

    target = targets[0]
    for robot in scene.robots:
        if dist(robot.mount, target.center) > robot.reach_radius:
            raise InvariantViolation(
                "target-in-common-reach",
                f"target outside reach of {robot.id}"
                f" ({dist(robot.mount, target.center):.1f} > {robot.reach_radius})",
            )


def default_robots(
    workspace: tuple[float, float] = DEFAULT_WORKSPACE,
    reach: float = DEFAULT_REACH,
) -> tuple[RobotSpec, RobotSpec]:
    """Two robots mounted at 1/4 and 3/4 of the open front edge."""
    w, _ = workspace
    r1 = RobotSpec(
        id="r1",
        mount=(0.25 * w, 0.0),
        reach_radius=reach,
        dropoff=(0.25 * w - 0.1 * w, -150.0),
    )
    r2 = RobotSpec(
        id="r2",
        mount=(0.75 * w, 0.0),
        reach_radius=reach,
        dropoff=(0.75 * w + 0.1 * w, -150.0),
    )
    return (r1, r2)


def generate_scene(
    seed: int,
    n_objects: int,
    radius_range: tuple[float, float] = DEFAULT_RADIUS_RANGE,
    workspace: tuple[float, float] = DEFAULT_WORKSPACE,
    robots: tuple[RobotSpec, RobotSpec] | None = None,
    gripper_radius: float = DEFAULT_GRIPPER_RADIUS,
) -> Scene:
    """Sample a valid scene uniformly at random; deterministic per seed.

    Object centers are drawn uniformly in the workspace and rejection-sampled
    against pairwise overlap. The target is chosen uniformly among objects
    whose center lies inside both reach discs. Raises GenerationError after
    10,000 consecutive placement rejections, or when no placement round
    yields an eligible target.
    """
    if n_objects < 2:
        raise InvalidParameters(f"n_objects must be >= 2, got {n_objects}")
    rmin, rmax = radius_range
    if not (0 < rmin <= rmax):
        raise InvalidParameters(f"degenerate radius range {radius_range}")
    w, h = workspace
    if not (w > 0 and h > 0):
        raise InvalidParameters(f"degenerate workspace {workspace}")

    if robots is None:
        robots = default_robots(workspace)
    rng = random.Random(seed)

    for _ in range(MAX_PLACEMENT_RESTARTS):
        placed: list[tuple[Point, float]] = []
        rejections = 0
        while len(placed) < n_objects:
            radius = rng.uniform(rmin, rmax)
            center = (rng.uniform(0.0, w), rng.uniform(0.0, h))
            if any(dist(center, c) < radius + r for c, r in placed):
                rejections += 1
                if rejections >= MAX_CONSECUTIVE_REJECTIONS:
                    raise GenerationError(
                        f"{MAX_CONSECUTIVE_REJECTIONS} consecutive rejections"
                        f" placing object {len(placed) + 1}/{n_objects}"
                    )
                continue
            rejections = 0
            placed.append((center, radius))

        eligible = [
            i
            for i, (center, _) in enumerate(placed)
            if all(dist(robot.mount, center) <= robot.reach_radius for robot in robots)
        ]
        if not eligible:
            continue  # redraw the whole placement
        target_index = eligible[rng.randrange(len(eligible))]

        objects = []
        obstacle_counter = 0
        for i, (center, radius) in enumerate(placed):
            if i == target_index:
                objects.append(ObjectSpec("ot", Disc(center, radius), is_target=True))
            else:
                obstacle_counter += 1
                objects.append(ObjectSpec(f"o{obstacle_counter}", Disc(center, radius)))
        scene = Scene(
            workspace=workspace,
            objects=tuple(objects),
            robots=robots,
            gripper_radius=gripper_radius,
        )
        validate_scene(scene)
        return scene

    raise GenerationError(
        f"no eligible target after {MAX_PLACEMENT_RESTARTS} placement rounds"
    )


# --- serialization -----------------------------------------------------------
# Schema (field order fixed for byte-stable output):
# {workspace:{w,h}, gripper_radius, objects:[{id,x,y,r,target}],
#  robots:[{id, mount:[x,y], reach, dropoff:[x,y], speed, grasp_time,
#           release_time, standby_time}]}


def scene_to_dict(scene: Scene) -> dict:
    return {
        "workspace": {"w": scene.workspace[0], "h": scene.workspace[1]},
        "gripper_radius": scene.gripper_radius,
        "objects": [
            {
                "id": o.id,
                "x": o.center[0],
                "y": o.center[1],
                "r": o.radius,
                "target": o.is_target,
            }
            for o in scene.objects
        ],
        "robots": [
            {
                "id": r.id,
                "mount": [r.mount[0], r.mount[1]],
                "reach": r.reach_radius,
                "dropoff": [r.dropoff[0], r.dropoff[1]],
                "speed": r.speed,
                "grasp_time": r.grasp_time,
                "release_time": r.release_time,
                "standby_time": r.standby_time,
            }
            for r in scene.robots
        ],
    }


def save_scene(scene: Scene) -> str:
    return json.dumps(scene_to_dict(scene), indent=2) + "\n"


def _require(mapping: dict, key: str, kind, where: str):
    if key not in mapping:
        raise ParseError(f"{where}: missing field {key!r}")
    value = mapping[key]
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, kind):
        raise ParseError(f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def _point(raw, where: str) -> Point:
    if not (isinstance(raw, list) and len(raw) == 2):
        raise ParseError(f"{where}: expected [x, y]")
    try:
        return (float(raw[0]), float(raw[1]))
    except (TypeError, ValueError):
        raise ParseError(f"{where}: non-numeric coordinate") from None


def scene_from_dict(data: dict) -> Scene:
    ws = _require(data, "workspace", dict, "scene")
    workspace = (
        _require(ws, "w", float, "workspace"),
        _require(ws, "h", float, "workspace"),
    )
    gripper = _require(data, "gripper_radius", float, "scene")
    objects = []
    for i, raw in enumerate(_require(data, "objects", list, "scene")):
        where = f"objects[{i}]"
        if not isinstance(raw, dict):
            raise ParseError(f"{where}: expected object record")
        objects.append(
            ObjectSpec(
                id=_require(raw, "id", str, where),
                footprint=Disc(
                    (_require(raw, "x", float, where), _require(raw, "y", float, where)),
                    _require(raw, "r", float, where),
                ),
                is_target=_require(raw, "target", bool, where),
            )
        )
    robots = []
    for i, raw in enumerate(_require(data, "robots", list, "scene")):
        where = f"robots[{i}]"
        if not isinstance(raw, dict):
            raise ParseError(f"{where}: expected robot record")
        robots.append(
            RobotSpec(
                id=_require(raw, "id", str, where),
                mount=_point(raw.get("mount"), f"{where}.mount"),
                reach_radius=_require(raw, "reach", float, where),
                dropoff=_point(raw.get("dropoff"), f"{where}.dropoff"),
                speed=_require(raw, "speed", float, where),
                grasp_time=_require(raw, "grasp_time", float, where),
                release_time=_require(raw, "release_time", float, where),
                standby_time=_require(raw, "standby_time", float, where),
            )
        )
    return Scene(
        workspace=workspace,
        objects=tuple(objects),
        robots=tuple(robots),
        gripper_radius=gripper,
    )


def load_scene(text: str) -> Scene:
    """Parse and re-validate a serialized scene. load(save(s)) == s."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise ParseError("top level: expected a scene record")
    scene = scene_from_dict(data)
    validate_scene(scene)
    return scene


def scene_digest(scene: Scene) -> str:
    """Stable content hash, used to assert identical instance sets."""
    import hashlib

    return hashlib.sha256(save_scene(scene).encode()).hexdigest()


def with_target(scene: Scene, object_id: str) -> Scene:
    """Return a copy of the scene with the target flag moved to object_id."""
    objects = tuple(
        replace(o, is_target=(o.id == object_id)) for o in scene.objects
    )
    return replace(scene, objects=objects)
