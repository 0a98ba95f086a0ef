"""Stochastic trajectory front-end: batch annealed sampling between fixed endpoints.

Each candidate starts as a straight line with Gaussian-perturbed interior
waypoints and is evolved by T reverse steps.  A step combines a deterministic
prior-shrinkage denoiser (interior waypoints drift toward a three-point
smoothing blended with the straight-line mean), optional cost-gradient
guidance in a late window of steps, and re-injected Langevin noise whose scale
follows an exponential schedule amplified by ``sigma_extra``.  High early
noise spreads candidates across homotopy classes; the late guidance window
then freezes them into low-cost configurations.

The denoiser is a plug-in (``FrontendConfig.denoiser``); the default
shrinkage operator can be swapped for a learned mean predictor with the same
(batch, t, cfg, context) signature.

Determinism contract: a candidate pool is a pure function of (inputs,
master_seed).  Per-chain noise streams are derived from the master seed by
counter, so parallel scheduling can never change results.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateEndpoints
from .geometry import Environment, Trajectory, as_point, sd_and_normals

COLLISION_MARGIN = 0.02  # activation margin added to the robot radius


@dataclass(frozen=True)
class FrontendConfig:
    """Tunables of the sampling front-end.

    Defaults follow the planner's reference configuration: 64-waypoint
    horizon, 25 reverse steps on an exponential noise schedule, noise
    amplification 0.8, guidance delayed past the first tenth of the reverse
    process for 10 steps, 70-candidate pools.
    """

    horizon: int = 64
    n_steps: int = 25
    sigma_max: float = 0.3
    sigma_min: float = 0.005
    sigma_extra: float = 0.8
    tau_guide: float = 0.1
    n_guide: int = 10
    n_samples: int = 70
    lambda_collision: float = 1.0
    lambda_smooth: float = 0.1
    grad_scale: float = 0.1
    robot_radius: float = 0.05
    denoiser: Optional[Callable] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.horizon < 2:
            raise ValueError("horizon must be >= 2")
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")
        if not 0.0 <= self.tau_guide <= 1.0:
            raise ValueError("tau_guide must lie in [0, 1]")
        if not 0 <= self.n_guide <= self.n_steps:
            raise ValueError("n_guide must lie in [0, n_steps]")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")

    def with_sigma_extra(self, value: float) -> "FrontendConfig":
        return replace(self, sigma_extra=float(value))


@dataclass
class CandidatePool:
    """Batch of candidate trajectories sharing exact endpoints, plus diagnostics."""

    start: np.ndarray
    goal: np.ndarray
    trajectories: list[Trajectory]
    collision_costs: np.ndarray
    smoothness_costs: np.ndarray
    guidance_costs: np.ndarray

    def __len__(self) -> int:
        return len(self.trajectories)


def noise_sigma(cfg: FrontendConfig, t: int) -> float:
    """Exponential schedule value at reverse step t (t = n_steps is the noisiest)."""
    if cfg.n_steps == 1:
        return cfg.sigma_max
    frac = (cfg.n_steps - t) / (cfg.n_steps - 1)
    return float(cfg.sigma_max * (cfg.sigma_min / cfg.sigma_max) ** frac)


def guidance_window(t: int, cfg: FrontendConfig) -> bool:
    """Whether cost-gradient guidance is active at reverse step t.

    Guidance occupies n_guide consecutive steps ending after the first
    tau_guide fraction of the reverse process has elapsed: active for
    upper - n_guide < t <= upper with upper = floor(n_steps * (1 - tau_guide)).
    """
    upper = int(np.floor(cfg.n_steps * (1.0 - cfg.tau_guide)))
    return (t <= upper) and (t > upper - cfg.n_guide)


def _straight_line(start: np.ndarray, goal: np.ndarray, horizon: int) -> np.ndarray:
    u = np.linspace(0.0, 1.0, horizon)[:, None]
    return start[None] * (1.0 - u) + goal[None] * u


def prior_sample(start, goal, cfg: FrontendConfig, rng_seed) -> Trajectory:
    """Initial noisy guess: straight-line interpolation plus Gaussian interior jitter.

    Interior waypoints get zero-mean noise of std sigma_max * sigma_extra per
    axis; the endpoints are exact.  Bit-identical for a fixed seed.
    """
    start = as_point(start)
    goal = as_point(goal)
    if np.array_equal(start, goal):
        raise DegenerateEndpoints("start and goal coincide")
    rng = np.random.default_rng(rng_seed)
    pts = _straight_line(start, goal, cfg.horizon)
    if cfg.horizon > 2:
        pts[1:-1] += rng.normal(0.0, cfg.sigma_max * cfg.sigma_extra, (cfg.horizon - 2, 2))
    return Trajectory(pts)


def collision_cost(traj, env: Environment, robot_radius: float) -> tuple[float, np.ndarray]:
    """Hinge-squared clearance penalty summed over waypoints, with analytic gradient.

    cost = sum_i max(margin - sd(q_i), 0)^2 with margin = robot_radius + 0.02;
    the gradient follows the distance-field normal of the nearest obstacle.  At
    field singularities (obstacle centers) the normal defaults to +x, so the
    per-point gradient there is -2 * (margin - sd) * (1, 0).
    """
    pts = traj.points if isinstance(traj, Trajectory) else np.asarray(traj, dtype=float)
    margin = robot_radius + COLLISION_MARGIN
    sd, normals = sd_and_normals(env, pts)
    viol = np.maximum(margin - sd, 0.0)
    cost = float((viol * viol).sum())
    grad = -2.0 * viol[:, None] * normals
    return cost, grad


def smoothness_cost(traj) -> tuple[float, np.ndarray]:
    """Sum of squared second differences over interior waypoints, with gradient."""
    pts = traj.points if isinstance(traj, Trajectory) else np.asarray(traj, dtype=float)
    if len(pts) < 3:
        raise ValueError("smoothness cost needs at least 3 waypoints")
    d = pts[2:] - 2.0 * pts[1:-1] + pts[:-2]
    cost = float((d * d).sum())
    grad = np.zeros_like(pts)
    grad[2:] += 2.0 * d
    grad[1:-1] += -4.0 * d
    grad[:-2] += 2.0 * d
    return cost, grad


# ---------------------------------------------------------------------------
# batched reverse process
# ---------------------------------------------------------------------------


def _collision_grad_batch(X: np.ndarray, env: Environment, robot_radius: float) -> np.ndarray:
    B, H, _ = X.shape
    margin = robot_radius + COLLISION_MARGIN
    sd, normals = sd_and_normals(env, X.reshape(-1, 2))
    viol = np.maximum(margin - sd, 0.0)
    return (-2.0 * viol[:, None] * normals).reshape(B, H, 2)


def _smooth_grad_batch(X: np.ndarray) -> np.ndarray:
    d = X[:, 2:] - 2.0 * X[:, 1:-1] + X[:, :-2]
    grad = np.zeros_like(X)
    grad[:, 2:] += 2.0 * d
    grad[:, 1:-1] += -4.0 * d
    grad[:, :-2] += 2.0 * d
    return grad


def shrinkage_denoiser(X: np.ndarray, t: int, cfg: FrontendConfig, line: np.ndarray) -> np.ndarray:
    """Deterministic stand-in for a learned mean predictor.

    Interior waypoints move a fraction 1/n_steps toward a target blending a
    one-pass three-point average of the trajectory with the straight-line
    mean; the blend weight shifts toward the straight line as t -> 0.  The
    straight line is the unique fixed point, so with noise and guidance off
    repeated application contracts any input onto it.
    """
    smoothed = X.copy()
    if X.shape[1] > 2:
        smoothed[:, 1:-1] = (X[:, :-2] + X[:, 1:-1] + X[:, 2:]) / 3.0
    beta = (cfg.n_steps - t + 1) / cfg.n_steps
    target = (1.0 - beta) * smoothed + beta * line
    gamma = 1.0 / cfg.n_steps
    mu = X + gamma * (target - X)
    mu[:, 0] = X[:, 0]
    mu[:, -1] = X[:, -1]
    return mu


def _denoise_step_batch(
    X: np.ndarray, t: int, cfg: FrontendConfig, env: Environment, Z: np.ndarray, line: np.ndarray
) -> np.ndarray:
    denoiser = cfg.denoiser or shrinkage_denoiser
    mu = denoiser(X, t, cfg, line)
    if guidance_window(t, cfg) and X.shape[1] > 2:
        grad = cfg.lambda_collision * _collision_grad_batch(mu, env, cfg.robot_radius)
        grad += cfg.lambda_smooth * _smooth_grad_batch(mu)
        mu[:, 1:-1] -= cfg.grad_scale * grad[:, 1:-1]
    if X.shape[1] > 2:
        mu[:, 1:-1] += noise_sigma(cfg, t) * cfg.sigma_extra * Z
    return mu


def denoise_step(traj: Trajectory, t: int, cfg: FrontendConfig, env: Environment, rng) -> Trajectory:
    """One guided reverse step on a single trajectory.

    ``rng`` is a numpy Generator supplying the Langevin draw; the draw happens
    unconditionally so a chain's stream stays aligned whatever the noise scale.
    Endpoints are pinned at every step.
    """
    if not 1 <= t <= cfg.n_steps:
        raise ValueError(f"step index {t} outside [1, {cfg.n_steps}]")
    pts = traj.points[None].copy()
    z = rng.normal(0.0, 1.0, (max(len(traj) - 2, 0), 2))
    line = _straight_line(traj.start, traj.end, len(traj))[None]
    out = _denoise_step_batch(pts, t, cfg, env, z[None], line)
    return Trajectory(out[0])


def generate_candidates(start, goal, env: Environment, cfg: FrontendConfig, master_seed) -> CandidatePool:
    """Run the full reverse process on n_samples independent chains.

    Chain k's noise comes from child k of SeedSequence(master_seed), so the
    pool is a pure function of (inputs, master_seed) and unaffected by any
    parallel execution order.  Collisions are not filtered here (that is the
    back-end's job); final per-candidate costs are recorded as diagnostics.
    """
    start = as_point(start)
    goal = as_point(goal)
    if np.array_equal(start, goal):
        raise DegenerateEndpoints("start and goal coincide")
    B, H, T = cfg.n_samples, cfg.horizon, cfg.n_steps
    ss = master_seed if isinstance(master_seed, np.random.SeedSequence) else np.random.SeedSequence(master_seed)
    children = ss.spawn(B)
    n_int = max(H - 2, 0)
    prior = np.empty((B, n_int, 2))
    zs = np.empty((B, T, n_int, 2))
    for k, child in enumerate(children):
        rng = np.random.default_rng(child)
        prior[k] = rng.normal(0.0, 1.0, (n_int, 2))
        zs[k] = rng.normal(0.0, 1.0, (T, n_int, 2))

    line = _straight_line(start, goal, H)[None]
    X = np.repeat(line, B, axis=0)
    if n_int:
        X[:, 1:-1] += cfg.sigma_max * cfg.sigma_extra * prior
    for step, t in enumerate(range(T, 0, -1)):
        X = _denoise_step_batch(X, t, cfg, env, zs[:, step], line)

    sd, _ = sd_and_normals(env, X.reshape(-1, 2))
    viol = np.maximum(cfg.robot_radius + COLLISION_MARGIN - sd, 0.0).reshape(B, H)
    coll = (viol * viol).sum(axis=1)
    d2 = X[:, 2:] - 2.0 * X[:, 1:-1] + X[:, :-2]
    smooth = (d2 * d2).sum(axis=(1, 2))
    return CandidatePool(
        start=start,
        goal=goal,
        trajectories=[Trajectory(X[k]) for k in range(B)],
        collision_costs=coll,
        smoothness_costs=smooth,
        guidance_costs=cfg.lambda_collision * coll + cfg.lambda_smooth * smooth,
    )
