"""Winding-number calculus, homotopy signatures, taut configurations, topological energy.

The generalized winding number of a polyline about a reference point is the
sum over segments of the signed angle subtended at that point, divided by 2*pi
(counterclockwise positive).  For piecewise-linear curves this per-segment
atan2 evaluation is exact, so no quadrature is involved anywhere.

Because winding about a fixed point is invariant under fixed-endpoint
homotopies that avoid the point, any collision-free deformation of a path
(curve shortening included) preserves its whole winding vector exactly; the
integer differences between two paths with shared endpoints are therefore a
well-defined homotopy fingerprint.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import CenterOnCurve, EndpointMismatch, InputInCollision, NonIntegerLoop
from .geometry import (
    Environment,
    Trajectory,
    centers_in_triangle,
    convex_hull,
    inflated_boundary_samples,
    point_segment_distance,
    segments_clearance,
    segments_clearance_columns,
    trajectory_collision_free,
    triangles_free,
)

EPS_CENTER = 1e-9  # degeneracy guard: center this close to the curve is rejected
EPS_INT = 0.05  # integer-snap tolerance for loop counts

TAUT_MAX_SWEEPS = 50
_TIGHTEN_STEPS = (1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125)


def _as_points(traj) -> np.ndarray:
    if isinstance(traj, Trajectory):
        return traj.points
    return np.asarray(traj, dtype=float).reshape(-1, 2)


def _check_centers_clear(points: np.ndarray, centers: np.ndarray) -> None:
    if centers.size == 0:
        return
    d_vert = np.linalg.norm(points[:, None, :] - centers[None], axis=-1)
    if d_vert.min() < EPS_CENTER:
        raise CenterOnCurve("reference center coincides with a waypoint")
    d_seg = point_segment_distance(centers[None], points[:-1, None], points[1:, None])
    if d_seg.min() < EPS_CENTER:
        raise CenterOnCurve("a segment passes through a reference center")


def segment_angles(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Signed angle subtended at each center by each segment, shape (n-1, m).

    Each angle lies in (-pi, pi); counterclockwise positive.
    """
    v = points[:, None, :] - centers[None]
    a, b = v[:-1], v[1:]
    cross = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    dot = (a * b).sum(axis=-1)
    return np.arctan2(cross, dot)


def winding_number(traj, center) -> float:
    """Accumulated turns of the curve around ``center`` (CCW positive).

    Raises CenterOnCurve when the center lies within EPS_CENTER of the curve;
    such a query signals a degenerate trajectory that must be rejected upstream.
    """
    points = _as_points(traj)
    c = np.asarray(center, dtype=float).reshape(1, 2)
    _check_centers_clear(points, c)
    return float(segment_angles(points, c).sum() / (2.0 * np.pi))


def winding_vector(traj, env: Environment) -> np.ndarray:
    """Per-obstacle winding numbers (turns), indexed by obstacle id."""
    points = _as_points(traj)
    centers = env.centers
    if centers.shape[0] == 0:
        return np.zeros(0)
    _check_centers_clear(points, centers)
    return segment_angles(points, centers).sum(axis=0) / (2.0 * np.pi)


def winding_vectors_batch(batch: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Winding vectors for a stack of equally shaped polylines (B, n, 2) -> (B, m)."""
    if centers.shape[0] == 0:
        return np.zeros((batch.shape[0], 0))
    v = batch[:, :, None, :] - centers[None, None]
    a, b = v[:, :-1], v[:, 1:]
    cross = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    dot = (a * b).sum(axis=-1)
    d_vert = np.linalg.norm(v, axis=-1)
    if d_vert.min() < EPS_CENTER:
        raise CenterOnCurve("reference center coincides with a waypoint")
    return np.arctan2(cross, dot).sum(axis=1) / (2.0 * np.pi)


def segment_winding_increments(A, B, centers: np.ndarray) -> np.ndarray:
    """Winding increments of k segments about every center, shape (k, m).

    Shared by the winding-augmented classical planners: along a straight
    segment the swept angle about any fixed point is monotone, so prefix
    windings checked at nodes bound the whole edge.
    """
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    B = np.asarray(B, dtype=float).reshape(-1, 2)
    if centers.shape[0] == 0:
        return np.zeros((A.shape[0], 0))
    a = A[:, None, :] - centers[None]
    b = B[:, None, :] - centers[None]
    cross = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    dot = (a * b).sum(axis=-1)
    return np.arctan2(cross, dot) / (2.0 * np.pi)


def homotopy_signature(traj, ref, env: Environment) -> np.ndarray:
    """Signed loop counts of ``traj`` relative to ``ref`` (integer per obstacle).

    Both paths must share identical endpoints and be collision-free (the caller
    guarantees the latter).  The closed loop traj + reversed(ref) can only wind
    an integer number of times about any obstacle center; a component further
    than EPS_INT from an integer raises NonIntegerLoop.
    """
    p = _as_points(traj)
    q = _as_points(ref)
    if not (np.array_equal(p[0], q[0]) and np.array_equal(p[-1], q[-1])):
        raise EndpointMismatch("paths do not share endpoints")
    if env.n_obstacles == 0:
        return np.zeros(0, dtype=int)
    diff = winding_vector(p, env) - winding_vector(q, env)
    loops = np.rint(diff)
    if np.abs(diff - loops).max() > EPS_INT:
        raise NonIntegerLoop(f"loop count off-integer by {np.abs(diff - loops).max():.3g}")
    return loops.astype(int)


def topological_energy(traj, env: Environment, barrier_gain: float = 1.0) -> float:
    """Quadratic entanglement barrier: sum over obstacles of gain * winding^2."""
    if env.n_obstacles == 0:
        return 0.0
    w = winding_vector(traj, env)
    return float(barrier_gain * (w * w).sum())


def max_abs_winding(traj, env: Environment) -> float:
    """Largest per-obstacle |winding| of the path; 0 with no obstacles."""
    if env.n_obstacles == 0:
        return 0.0
    return float(np.abs(winding_vector(traj, env)).max())


# ---------------------------------------------------------------------------
# taut configuration (curve shortening)
# ---------------------------------------------------------------------------


def _dedup_consecutive(pts: np.ndarray) -> np.ndarray:
    if len(pts) < 2:
        return pts
    same = np.all(pts[1:] == pts[:-1], axis=1)
    if not same.any():
        return pts
    keep = np.concatenate([[True], ~same])
    return pts[keep]


def _prune_pass(pts: np.ndarray, env: Environment, r: float) -> tuple[np.ndarray, int]:
    """Remove interior waypoints whose neighbors see each other, to a fixed point."""
    removed = 0
    while len(pts) > 2:
        A, M, C = pts[:-2], pts[1:-1], pts[2:]
        ok = (segments_clearance(env, A, C) > r) & triangles_free(env, A, M, C)
        if not ok.any():
            break
        keep = np.ones(len(pts), dtype=bool)
        last_deleted = -2
        for j in np.flatnonzero(ok):
            i = j + 1  # interior index
            if i - 1 == last_deleted:
                continue  # neighbor changed this pass; revisit next pass
            keep[i] = False
            last_deleted = i
            removed += 1
        pts = _dedup_consecutive(pts[keep])
    return pts, removed


_TIGHTEN_PAD = 1e-6  # keep relocated waypoints strictly outside the inflated boundary


def _tighten_pass(pts: np.ndarray, env: Environment, r: float) -> tuple[np.ndarray, float]:
    """Pull interior waypoints toward their neighbor midpoints (elastic band).

    Two targets are tried per waypoint: the raw neighbor midpoint, and the
    midpoint pushed out to the robot_radius-inflated obstacle boundary when it
    lands inside.  Each accepted move strictly shortens the local detour, keeps
    both incident segments strictly collision-free and sweeps only
    obstacle-free triangles, so it is a genuine homotopy.  Waypoints are
    relaxed in two interleaved batches (odd then even) for determinism under
    vectorized evaluation.
    """
    from .geometry import sd_and_normals

    moved = 0.0
    for parity in (1, 0):
        interior = np.arange(1, len(pts) - 1)
        idx = interior[interior % 2 == parity]
        if idx.size == 0:
            continue
        A = pts[idx - 1]
        P = pts[idx]
        C = pts[idx + 1]
        M = 0.5 * (A + C)
        f_now = np.linalg.norm(P - A, axis=1) + np.linalg.norm(C - P, axis=1)
        sd_m, n_m = sd_and_normals(env, M)
        push = np.maximum(r + _TIGHTEN_PAD - sd_m, 0.0)
        M_out = M + push[:, None] * n_m
        chosen = np.full(idx.size, False)
        newP = P.copy()
        for target in (M, M_out):
            d = target - P
            active = np.linalg.norm(d, axis=1) > 1e-12
            for s in _TIGHTEN_STEPS:
                open_slots = active & ~chosen
                if not open_slots.any():
                    break
                Q = P + s * d
                f_new = np.linalg.norm(Q - A, axis=1) + np.linalg.norm(C - Q, axis=1)
                valid = (
                    (f_new < f_now - 1e-15)
                    & (segments_clearance(env, A, Q) > r)
                    & (segments_clearance(env, Q, C) > r)
                    & triangles_free(env, A, P, Q)
                    & triangles_free(env, C, P, Q)
                )
                pick = open_slots & valid
                if pick.any():
                    newP[pick] = Q[pick]
                    chosen |= pick
        if chosen.any():
            moved = max(moved, float(np.linalg.norm(newP - P, axis=1)[chosen].max()))
            pts = pts.copy()
            pts[idx] = newP
    return pts, moved


def _hull_chains(A: np.ndarray, C: np.ndarray, samples: np.ndarray) -> list[np.ndarray]:
    """Both one-sided taut paths from A to C around a convex sample ring.

    The shortest path around a single convex obstacle follows the convex hull
    of {A, C} + boundary samples; the two hull chains between A and C are the
    left and right wraps (endpoints excluded from the returned arrays).
    """
    keep = ~(np.all(samples == A, axis=1) | np.all(samples == C, axis=1))
    pts = np.vstack([A[None], C[None], samples[keep]])
    hull = convex_hull(pts)
    pos_a = np.flatnonzero(hull == 0)
    pos_c = np.flatnonzero(hull == 1)
    if pos_a.size != 1 or pos_c.size != 1:
        return []
    ia, ic = int(pos_a[0]), int(pos_c[0])
    n = len(hull)
    fwd = [hull[(ia + k) % n] for k in range(1, (ic - ia) % n)]
    bwd = [hull[(ia - k) % n] for k in range(1, (ia - ic) % n)]
    return [pts[fwd], pts[bwd]]


def _try_wrap(A: np.ndarray, P: np.ndarray, C: np.ndarray, env: Environment, r: float):
    """Replace the detour A-P-C by the taut wrap around its blocking obstacle.

    Returns the interior points of a strictly shorter, collision-free
    replacement whose winding about every obstacle center matches the old
    detour (same local homotopy), or None.
    """
    clear = segments_clearance_columns(env, A[None], C[None])[0]
    seg_blockers = np.flatnonzero(clear <= r)
    tri_blockers = np.flatnonzero(centers_in_triangle(env, A, P, C))
    order = list(tri_blockers[np.argsort(clear[tri_blockers], kind="stable")])
    order += [i for i in seg_blockers[np.argsort(clear[seg_blockers], kind="stable")] if i not in order]
    if not order:
        return None
    old_len = float(np.linalg.norm(P - A) + np.linalg.norm(C - P))
    w_old = segment_winding_increments(np.vstack([A, P]), np.vstack([P, C]), env.centers).sum(axis=0)
    for ob_id in order[:3]:
        samples = inflated_boundary_samples(env.obstacles[int(ob_id)], r)
        for chain in _hull_chains(A, C, samples):
            if len(chain) == 0:
                continue
            sub = np.vstack([A[None], chain, C[None]])
            new_len = float(np.linalg.norm(np.diff(sub, axis=0), axis=1).sum())
            if not new_len < old_len - 1e-12:
                continue
            if not np.all(segments_clearance(env, sub[:-1], sub[1:]) > r):
                continue
            w_new = segment_winding_increments(sub[:-1], sub[1:], env.centers).sum(axis=0)
            if w_new.size and np.abs(w_new - w_old).max() > 0.25:
                continue
            return chain
    return None


def _wrap_pass(pts: np.ndarray, env: Environment, r: float) -> tuple[np.ndarray, int]:
    """Swap blocked single-vertex detours for taut wraps around their blockers."""
    out = [p for p in pts]
    i = 1
    n_wrapped = 0
    while i < len(out) - 1:
        A, P, C = out[i - 1], out[i], out[i + 1]
        chain = _try_wrap(A, P, C, env, r)
        if chain is None:
            i += 1
            continue
        out[i : i + 1] = list(chain)
        n_wrapped += 1
        i += len(chain) + 1
    return np.array(out), n_wrapped


def taut_configuration(
    traj: Trajectory, env: Environment, robot_radius: float, max_sweeps: int = TAUT_MAX_SWEEPS
) -> Trajectory:
    """Shortest-path proxy in the input's homotopy class (the taut cable shape).

    Sweeps alternate three homotopy-preserving moves until a fixed point or the
    sweep cap: (1) deleting any interior waypoint whose bypass segment is
    collision-free and whose bypass triangle is obstacle-free, (2) swapping
    blocked detours for taut wraps around their blocking obstacle, and (3)
    midpoint-tightening the survivors against the robot_radius-inflated
    obstacle boundaries.  Every move strictly shortens the path, so the output
    keeps the input endpoints, has zero homotopy signature relative to the
    input, never grows in length, and is idempotent once converged.
    """
    if not trajectory_collision_free(env, traj, robot_radius):
        raise InputInCollision("taut_configuration requires a collision-free input")
    pts = np.array(traj.points)
    for _ in range(max_sweeps):
        pts, n_deleted = _prune_pass(pts, env, robot_radius)
        pts, n_wrapped = _wrap_pass(pts, env, robot_radius)
        pts, moved = _tighten_pass(pts, env, robot_radius)
        pts = _dedup_consecutive(pts)
        if n_deleted == 0 and n_wrapped == 0 and moved == 0.0:
            break
    else:
        warnings.warn("curve shortening stopped at the sweep cap", RuntimeWarning, stacklevel=2)
    return Trajectory(pts)
