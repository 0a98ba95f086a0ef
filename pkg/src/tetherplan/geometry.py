"""Planar primitives, obstacle distance fields, collision and visibility predicates.

The workspace is an axis-aligned rectangle populated by circular obstacles and
axis-aligned boxes.  Every predicate here is closed form (segment-circle
quadratics, segment-AABB slab/closest-point tests, no sampling) so results are
deterministic and cheap.  All functions are pure; ``Environment`` is immutable
after construction, which makes everything safe to call from any number of
workers.

Clearance convention: tangency counts as a collision, i.e. a segment is
collision-free only if its clearance is *strictly* greater than the robot
radius.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

Bounds = tuple[float, float, float, float]  # xmin, ymin, xmax, ymax

DEFAULT_BOUNDS: Bounds = (-1.0, -1.0, 1.0, 1.0)

_TINY = 1e-30
_DEGENERATE_AREA = 1e-14


def as_point(p) -> np.ndarray:
    """Coerce a point-like (tuple, list, array) to a finite float array of shape (2,)."""
    q = np.asarray(p, dtype=float).reshape(2)
    if not np.all(np.isfinite(q)):
        raise ValueError(f"non-finite point: {p!r}")
    return q


@dataclass(frozen=True)
class Circle:
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise ValueError(f"circle radius must be positive, got {self.radius}")

    def contains(self, p) -> bool:
        q = as_point(p)
        return float(np.hypot(q[0] - self.center[0], q[1] - self.center[1])) <= self.radius


@dataclass(frozen=True)
class Box:
    center: tuple[float, float]
    half_extents: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(
            self, "half_extents", (float(self.half_extents[0]), float(self.half_extents[1]))
        )
        if not (self.half_extents[0] > 0 and self.half_extents[1] > 0):
            raise ValueError(f"box half extents must be positive, got {self.half_extents}")

    def contains(self, p) -> bool:
        q = as_point(p)
        return (
            abs(q[0] - self.center[0]) <= self.half_extents[0]
            and abs(q[1] - self.center[1]) <= self.half_extents[1]
        )


Obstacle = Circle | Box


@dataclass(frozen=True)
class Environment:
    """Bounded rectangular workspace with an ordered obstacle list.

    Obstacle ids are the list indices (0..m-1) and stay stable for the lifetime
    of the environment; winding vectors are indexed the same way.
    """

    bounds: Bounds = DEFAULT_BOUNDS
    obstacles: tuple[Obstacle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple(float(v) for v in self.bounds))
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        xmin, ymin, xmax, ymax = self.bounds
        if not (xmax > xmin and ymax > ymin):
            raise ValueError(f"degenerate bounds {self.bounds}")
        tol = 1e-12
        for i, ob in enumerate(self.obstacles):
            if isinstance(ob, Circle):
                lo = (ob.center[0] - ob.radius, ob.center[1] - ob.radius)
                hi = (ob.center[0] + ob.radius, ob.center[1] + ob.radius)
            elif isinstance(ob, Box):
                lo = (ob.center[0] - ob.half_extents[0], ob.center[1] - ob.half_extents[1])
                hi = (ob.center[0] + ob.half_extents[0], ob.center[1] + ob.half_extents[1])
            else:
                raise TypeError(f"unsupported obstacle type: {type(ob).__name__}")
            if lo[0] < xmin - tol or lo[1] < ymin - tol or hi[0] > xmax + tol or hi[1] > ymax + tol:
                raise ValueError(f"obstacle {i} not fully inside bounds: {ob}")

    @property
    def n_obstacles(self) -> int:
        return len(self.obstacles)

    @cached_property
    def centers(self) -> np.ndarray:
        """Reference centers o_i, shape (m, 2), in obstacle-id order."""
        if not self.obstacles:
            return np.zeros((0, 2))
        return np.array([ob.center for ob in self.obstacles], dtype=float)

    @cached_property
    def _circle_ids(self) -> np.ndarray:
        return np.array([i for i, ob in enumerate(self.obstacles) if isinstance(ob, Circle)], dtype=int)

    @cached_property
    def _box_ids(self) -> np.ndarray:
        return np.array([i for i, ob in enumerate(self.obstacles) if isinstance(ob, Box)], dtype=int)

    @cached_property
    def _circle_centers(self) -> np.ndarray:
        return self.centers[self._circle_ids] if self._circle_ids.size else np.zeros((0, 2))

    @cached_property
    def _circle_radii(self) -> np.ndarray:
        return np.array([self.obstacles[i].radius for i in self._circle_ids], dtype=float)

    @cached_property
    def _box_centers(self) -> np.ndarray:
        return self.centers[self._box_ids] if self._box_ids.size else np.zeros((0, 2))

    @cached_property
    def _box_half(self) -> np.ndarray:
        if not self._box_ids.size:
            return np.zeros((0, 2))
        return np.array([self.obstacles[i].half_extents for i in self._box_ids], dtype=float)

    @cached_property
    def _box_lo(self) -> np.ndarray:
        return self._box_centers - self._box_half

    @cached_property
    def _box_hi(self) -> np.ndarray:
        return self._box_centers + self._box_half

    @cached_property
    def _box_edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Endpoints of the 4 edges of every box: two arrays of shape (mb, 4, 2)."""
        lo, hi = self._box_lo, self._box_hi
        mb = lo.shape[0]
        if mb == 0:
            z = np.zeros((0, 4, 2))
            return z, z
        c0 = lo
        c1 = np.stack([hi[:, 0], lo[:, 1]], axis=1)
        c2 = hi
        c3 = np.stack([lo[:, 0], hi[:, 1]], axis=1)
        e1 = np.stack([c0, c1, c2, c3], axis=1)
        e2 = np.stack([c1, c2, c3, c0], axis=1)
        return e1, e2

    def contains_point(self, p) -> bool:
        """True iff the point is inside (or on the boundary of) any obstacle."""
        q = as_point(p)
        return any(ob.contains(q) for ob in self.obstacles)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Ordered sequence of planar waypoints, the central planning object.

    Exact consecutive duplicates are removed at construction; at least two
    distinct waypoints must remain.  The stored array is read-only.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(pts)):
            raise ValueError("trajectory contains non-finite coordinates")
        if len(pts) >= 2:
            same = np.all(pts[1:] == pts[:-1], axis=1)
            if same.any():
                keep = np.concatenate([[True], ~same])
                pts = pts[keep]
        if len(pts) < 2:
            raise ValueError("trajectory needs at least 2 distinct waypoints")
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    def length(self) -> float:
        return float(np.linalg.norm(np.diff(self.points, axis=0), axis=1).sum())

    def reversed(self) -> "Trajectory":
        return Trajectory(self.points[::-1])

    def waypoint_list(self) -> list[list[float]]:
        return [[float(x), float(y)] for x, y in self.points]


# ---------------------------------------------------------------------------
# point kernels
# ---------------------------------------------------------------------------


def _points_sd_columns(env: Environment, P: np.ndarray) -> np.ndarray:
    """Signed distance from points (k,2) to every obstacle, shape (k, m), id order."""
    k = P.shape[0]
    m = env.n_obstacles
    out = np.empty((k, m))
    if env._circle_ids.size:
        d = np.linalg.norm(P[:, None, :] - env._circle_centers[None], axis=-1)
        out[:, env._circle_ids] = d - env._circle_radii[None]
    if env._box_ids.size:
        q = np.abs(P[:, None, :] - env._box_centers[None]) - env._box_half[None]
        outside = np.linalg.norm(np.maximum(q, 0.0), axis=-1)
        inside = np.minimum(np.maximum(q[..., 0], q[..., 1]), 0.0)
        out[:, env._box_ids] = outside + inside
    return out


def signed_distance_points(env: Environment, P) -> np.ndarray:
    """Minimum signed distance over obstacles for a batch of points (k, 2)."""
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    if env.n_obstacles == 0:
        return np.full(P.shape[0], np.inf)
    return _points_sd_columns(env, P).min(axis=1)


def signed_distance(env: Environment, p) -> float:
    """Signed distance to the nearest obstacle boundary (negative inside).

    Exact for circles and axis-aligned boxes; +inf in an empty environment.
    """
    return float(signed_distance_points(env, as_point(p)[None])[0])


def sd_and_normals(env: Environment, P) -> tuple[np.ndarray, np.ndarray]:
    """Signed distance and outward distance-field normal for points (k, 2).

    The normal belongs to the obstacle realizing the minimum (ties broken by
    lowest obstacle id).  At singular points (circle center, box center) the
    normal defaults to +x, so a guided update pushes the point along +x.
    """
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    k = P.shape[0]
    m = env.n_obstacles
    if m == 0:
        return np.full(k, np.inf), np.tile(np.array([1.0, 0.0]), (k, 1))
    sd = _points_sd_columns(env, P)
    normals = np.zeros((k, m, 2))
    if env._circle_ids.size:
        v = P[:, None, :] - env._circle_centers[None]
        d = np.linalg.norm(v, axis=-1, keepdims=True)
        n = np.divide(v, d, out=np.zeros_like(v), where=d > 1e-12)
        n[(d <= 1e-12)[..., 0]] = (1.0, 0.0)
        normals[:, env._circle_ids] = n
    if env._box_ids.size:
        rel = P[:, None, :] - env._box_centers[None]
        q = np.abs(rel) - env._box_half[None]
        closest = np.clip(P[:, None, :], env._box_lo[None], env._box_hi[None])
        v = P[:, None, :] - closest
        d = np.linalg.norm(v, axis=-1, keepdims=True)
        n_out = np.divide(v, d, out=np.zeros_like(v), where=d > 1e-12)
        # inside or on the boundary: push out of the least-deep face
        axis = np.argmax(q, axis=-1)
        sign = np.where(np.take_along_axis(rel, axis[..., None], axis=-1)[..., 0] < 0, -1.0, 1.0)
        n_in = np.zeros_like(v)
        np.put_along_axis(n_in, axis[..., None], sign[..., None], axis=-1)
        inside = (d <= 1e-12)[..., 0]
        n = np.where(inside[..., None], n_in, n_out)
        normals[:, env._box_ids] = n
    arg = np.argmin(sd, axis=1)
    rows = np.arange(k)
    return sd[rows, arg], normals[rows, arg]


def point_segment_distance(P, A, B) -> np.ndarray:
    """Distance from points to segments; all arguments broadcast together."""
    P = np.asarray(P, dtype=float)
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    AB = B - A
    AP = P - A
    denom = (AB * AB).sum(axis=-1)
    t = np.where(denom > _TINY, (AP * AB).sum(axis=-1) / np.where(denom > _TINY, denom, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = A + t[..., None] * AB
    return np.linalg.norm(P - closest, axis=-1)


# ---------------------------------------------------------------------------
# segment kernels
# ---------------------------------------------------------------------------


def _segment_segment_distance(P1, P2, Q1, Q2) -> np.ndarray:
    """Closest distance between segments P1P2 and Q1Q2 (broadcasting, non-crossing)."""
    d1 = P2 - P1
    d2 = Q2 - Q1
    r = P1 - Q1
    a = (d1 * d1).sum(axis=-1)
    e = (d2 * d2).sum(axis=-1)
    f = (d2 * r).sum(axis=-1)
    c = (d1 * r).sum(axis=-1)
    b = (d1 * d2).sum(axis=-1)
    denom = a * e - b * b
    a_safe = np.where(a > _TINY, a, 1.0)
    e_safe = np.where(e > _TINY, e, 1.0)
    denom_safe = np.where(denom > _TINY, denom, 1.0)
    s = np.where(denom > _TINY, np.clip((b * f - c * e) / denom_safe, 0.0, 1.0), 0.0)
    t = np.where(e > _TINY, (b * s + f) / e_safe, 0.0)
    s = np.where(
        t < 0.0,
        np.clip(-c / a_safe, 0.0, 1.0),
        np.where(t > 1.0, np.clip((b - c) / a_safe, 0.0, 1.0), s),
    )
    s = np.where(a > _TINY, s, 0.0)
    t = np.clip(t, 0.0, 1.0)
    cp1 = P1 + s[..., None] * d1
    cp2 = Q1 + t[..., None] * d2
    return np.linalg.norm(cp1 - cp2, axis=-1)


def _segments_intersect_aabb(A: np.ndarray, B: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Slab test: which of k segments touch which of mb boxes, shape (k, mb)."""
    A = A[:, None, :]
    B = B[:, None, :]
    lo = lo[None]
    hi = hi[None]
    d = B - A
    zero = np.abs(d) < 1e-15
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = (lo - A) / d
        t2 = (hi - A) / d
    tmin_ax = np.minimum(t1, t2)
    tmax_ax = np.maximum(t1, t2)
    inside = (A >= lo) & (A <= hi)
    tmin_ax = np.where(zero, np.where(inside, -np.inf, np.inf), tmin_ax)
    tmax_ax = np.where(zero, np.where(inside, np.inf, -np.inf), tmax_ax)
    tmin = tmin_ax.max(axis=-1)
    tmax = tmax_ax.min(axis=-1)
    return (tmin <= tmax) & (tmax >= 0.0) & (tmin <= 1.0)


def segments_clearance_columns(env: Environment, A, B) -> np.ndarray:
    """Clearance of k segments to each obstacle, shape (k, m), obstacle-id order.

    Clearance is the distance to the obstacle boundary, 0 when the segment
    touches or crosses the obstacle.
    """
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    B = np.asarray(B, dtype=float).reshape(-1, 2)
    k = A.shape[0]
    out = np.empty((k, env.n_obstacles))
    if env._circle_ids.size:
        d = point_segment_distance(env._circle_centers[None], A[:, None], B[:, None])
        out[:, env._circle_ids] = d - env._circle_radii[None]
    if env._box_ids.size:
        hit = _segments_intersect_aabb(A, B, env._box_lo, env._box_hi)
        e1, e2 = env._box_edges
        d = _segment_segment_distance(
            A[:, None, None, :], B[:, None, None, :], e1[None], e2[None]
        ).min(axis=-1)
        out[:, env._box_ids] = np.where(hit, 0.0, d)
    return out


def segments_clearance(env: Environment, A, B) -> np.ndarray:
    """Minimum clearance of k segments to the obstacle set, shape (k,).

    Clearance is the distance to the nearest obstacle boundary, 0 when the
    segment touches or crosses an obstacle; +inf with no obstacles.
    """
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    B = np.asarray(B, dtype=float).reshape(-1, 2)
    if env.n_obstacles == 0:
        return np.full(A.shape[0], np.inf)
    return segments_clearance_columns(env, A, B).min(axis=1)


def segment_collision_free(env: Environment, a, b, robot_radius: float) -> bool:
    """True iff the whole segment keeps strictly more than robot_radius clearance.

    Tangency counts as a collision (strict inequality).
    """
    a = as_point(a)
    b = as_point(b)
    return bool(segments_clearance(env, a[None], b[None])[0] > robot_radius)


def trajectory_collision_free(env: Environment, traj: Trajectory, robot_radius: float) -> bool:
    """Conjunction of segment_collision_free over consecutive waypoint pairs."""
    pts = traj.points if isinstance(traj, Trajectory) else np.asarray(traj, dtype=float)
    clear = segments_clearance(env, pts[:-1], pts[1:])
    return bool(np.all(clear > robot_radius))


# ---------------------------------------------------------------------------
# triangle predicates (homotopy guards for curve shortening)
# ---------------------------------------------------------------------------


def _points_in_triangles(P: np.ndarray, A: np.ndarray, B: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Inclusive point-in-triangle: P (m,2) against k triangles -> (k, m)."""
    tol = 1e-12

    def cross(o, a, b):
        return (a[..., 0] - o[..., 0]) * (b[..., 1] - o[..., 1]) - (a[..., 1] - o[..., 1]) * (
            b[..., 0] - o[..., 0]
        )

    A = A[:, None, :]
    B = B[:, None, :]
    C = C[:, None, :]
    P = P[None]
    s1 = cross(A, B, P)
    s2 = cross(B, C, P)
    s3 = cross(C, A, P)
    pos = (s1 >= -tol) & (s2 >= -tol) & (s3 >= -tol)
    neg = (s1 <= tol) & (s2 <= tol) & (s3 <= tol)
    return pos | neg


def triangles_free(env: Environment, A, B, C) -> np.ndarray:
    """Vectorized triangle_free over k triangles -> boolean (k,).

    A triangle is free iff no obstacle reference center lies inside it (boundary
    inclusive) and no obstacle overlaps its interior.  Box/triangle contact is
    counted as overlap (conservative); degenerate triangles are free because the
    associated sweep is covered by the segment checks.
    """
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    B = np.asarray(B, dtype=float).reshape(-1, 2)
    C = np.asarray(C, dtype=float).reshape(-1, 2)
    k = A.shape[0]
    free = np.ones(k, dtype=bool)
    if env.n_obstacles == 0:
        return free
    area2 = (B[:, 0] - A[:, 0]) * (C[:, 1] - A[:, 1]) - (B[:, 1] - A[:, 1]) * (C[:, 0] - A[:, 0])
    degenerate = np.abs(area2) < _DEGENERATE_AREA

    center_in = _points_in_triangles(env.centers, A, B, C).any(axis=1)
    free &= ~center_in

    if env._circle_ids.size:
        cc = env._circle_centers
        inside = _points_in_triangles(cc, A, B, C)
        d_edges = np.minimum(
            point_segment_distance(cc[None], A[:, None], B[:, None]),
            np.minimum(
                point_segment_distance(cc[None], B[:, None], C[:, None]),
                point_segment_distance(cc[None], C[:, None], A[:, None]),
            ),
        )
        d = np.where(inside, 0.0, d_edges)
        free &= ~(d < env._circle_radii[None]).any(axis=1)

    if env._box_ids.size:
        tri = np.stack([A, B, C], axis=1)  # (k, 3, 2)
        edges = tri[:, [1, 2, 0], :] - tri  # (k, 3, 2)
        normals = np.stack([-edges[..., 1], edges[..., 0]], axis=-1)  # (k, 3, 2)
        fixed = np.tile(np.array([[1.0, 0.0], [0.0, 1.0]]), (k, 1, 1))
        axes = np.concatenate([fixed, normals], axis=1)  # (k, 5, 2)
        tri_proj = np.einsum("kax,ktx->kat", axes, tri)  # (k, 5, 3)
        lo, hi = env._box_lo, env._box_hi
        corners = np.stack(
            [lo, np.stack([hi[:, 0], lo[:, 1]], 1), hi, np.stack([lo[:, 0], hi[:, 1]], 1)], axis=1
        )  # (mb, 4, 2)
        box_proj = np.einsum("kax,bcx->kabc", axes, corners)  # (k, 5, mb, 4)
        t_lo = tri_proj.min(axis=2)[:, :, None]
        t_hi = tri_proj.max(axis=2)[:, :, None]
        b_lo = box_proj.min(axis=3)
        b_hi = box_proj.max(axis=3)
        separated = ((t_hi < b_lo) | (t_lo > b_hi)).any(axis=1)  # (k, mb)
        free &= separated.all(axis=1)

    return free | degenerate


def triangle_free(env: Environment, a, b, c) -> bool:
    """True iff triangle abc contains no obstacle center and overlaps no obstacle."""
    return bool(triangles_free(env, as_point(a)[None], as_point(b)[None], as_point(c)[None])[0])


def centers_in_triangle(env: Environment, a, b, c) -> np.ndarray:
    """Which obstacle centers lie inside (or on) triangle abc, boolean (m,)."""
    if env.n_obstacles == 0:
        return np.zeros(0, dtype=bool)
    return _points_in_triangles(
        env.centers, as_point(a)[None], as_point(b)[None], as_point(c)[None]
    )[0]


def inflated_boundary_samples(ob: Obstacle, robot_radius: float, ang_step: float = 0.066) -> np.ndarray:
    """Sample points just outside an obstacle inflated by robot_radius.

    Samples are placed so that a chord between angularly adjacent samples still
    keeps strictly more than robot_radius clearance from the raw obstacle; they
    discretize the taut-string hull around the shape.
    """
    pad = 1e-6
    if isinstance(ob, Circle):
        n = max(8, int(np.ceil(2.0 * np.pi / ang_step)))
        phi = 2.0 * np.pi / n
        rho = (ob.radius + robot_radius + pad) / np.cos(phi / 2.0)
        ang = np.arange(n) * phi
        return np.array(ob.center) + rho * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    # rounded box: four corner arcs of radius robot_radius
    cx, cy = ob.center
    hx, hy = ob.half_extents
    corners = [(cx + hx, cy + hy), (cx - hx, cy + hy), (cx - hx, cy - hy), (cx + hx, cy - hy)]
    starts = [0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi]
    n_arc = max(3, int(np.ceil(0.5 * np.pi / ang_step)))
    phi = 0.5 * np.pi / n_arc
    rho = (robot_radius + pad) / np.cos(phi / 2.0)
    pts = []
    for (px, py), a0 in zip(corners, starts):
        ang = a0 + np.arange(n_arc + 1) * phi
        pts.append(np.stack([px + rho * np.cos(ang), py + rho * np.sin(ang)], axis=1))
    return np.vstack(pts)


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Indices of the convex hull of a 2D point set, CCW order (monotone chain)."""
    pts = np.asarray(points, dtype=float)
    order = np.lexsort((pts[:, 1], pts[:, 0]))

    def cross(o, a, b):
        return (pts[a, 0] - pts[o, 0]) * (pts[b, 1] - pts[o, 1]) - (pts[a, 1] - pts[o, 1]) * (
            pts[b, 0] - pts[o, 0]
        )

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in order[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    return np.array(lower[:-1] + upper[:-1], dtype=int)


# ---------------------------------------------------------------------------
# shape-to-shape clearance (environment generation)
# ---------------------------------------------------------------------------


def obstacle_clearance(a: Obstacle, b: Obstacle) -> float:
    """Boundary-to-boundary distance between two obstacles (<= 0 when overlapping)."""
    if isinstance(a, Circle) and isinstance(b, Circle):
        d = float(np.hypot(a.center[0] - b.center[0], a.center[1] - b.center[1]))
        return d - a.radius - b.radius
    if isinstance(a, Box) and isinstance(b, Box):
        gx = abs(a.center[0] - b.center[0]) - (a.half_extents[0] + b.half_extents[0])
        gy = abs(a.center[1] - b.center[1]) - (a.half_extents[1] + b.half_extents[1])
        if gx <= 0 and gy <= 0:
            return max(gx, gy)
        return float(np.hypot(max(gx, 0.0), max(gy, 0.0)))
    if isinstance(a, Box):
        a, b = b, a
    # circle vs box
    qx = abs(a.center[0] - b.center[0]) - b.half_extents[0]
    qy = abs(a.center[1] - b.center[1]) - b.half_extents[1]
    outside = float(np.hypot(max(qx, 0.0), max(qy, 0.0)))
    inside = min(max(qx, qy), 0.0)
    return outside + inside - a.radius


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------


def environment_to_json(env: Environment) -> dict:
    """Environment as a JSON-ready dict with the fixed field order."""
    obstacles = []
    for ob in env.obstacles:
        if isinstance(ob, Circle):
            obstacles.append(
                {"type": "circle", "center": [ob.center[0], ob.center[1]], "radius": ob.radius}
            )
        else:
            obstacles.append(
                {
                    "type": "box",
                    "center": [ob.center[0], ob.center[1]],
                    "half_extents": [ob.half_extents[0], ob.half_extents[1]],
                }
            )
    return {"bounds": list(env.bounds), "obstacles": obstacles}


def environment_from_json(data: dict) -> Environment:
    bounds = tuple(float(v) for v in data["bounds"])
    obstacles: list[Obstacle] = []
    for entry in data.get("obstacles", []):
        kind = entry.get("type")
        if kind == "circle":
            obstacles.append(Circle(tuple(entry["center"]), entry["radius"]))
        elif kind == "box":
            obstacles.append(Box(tuple(entry["center"]), tuple(entry["half_extents"])))
        else:
            raise ValueError(f"unknown obstacle type: {kind!r}")
    return Environment(bounds=bounds, obstacles=tuple(obstacles))


def environment_dumps(env: Environment, indent: int | None = None) -> str:
    return json.dumps(environment_to_json(env), indent=indent)


def environment_loads(text: str) -> Environment:
    return environment_from_json(json.loads(text))
