"""Stochastic online power allocation under noisy green-generation readings.

Each slot the controller sees a noisy multiplicative observation of the
green generation, takes a gradient step on the brown-import objective in
the dual space of the squared-Euclidean divergence (which collapses to a
plain gradient step), and projects back onto the slot's constraint set.
The first iterate comes from the one-shot solver on the first observation.

With decreasing steps on a stationary scenario the running-average excess
import over the clairvoyant optimum decays like one over the square root
of the horizon; :func:`convergence_gap` measures exactly that series.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .comm import CapacityDemand, CarbonModel, greenness
from .errors import DimensionMismatch, GreenGridError, UndefinedMetric
from .flow import brown_energy, power_loss
from .grid import LossMatrix
from .optimize import (
    AllocationProblem,
    FeasibleSetProjector,
    OneShotSolver,
    SolverConfig,
    solve_one_shot,
)

__all__ = [
    "NoiseConfig",
    "OnlineConfig",
    "MirrorState",
    "Trajectory",
    "observe",
    "gradient",
    "md_step",
    "run_online",
    "convergence_gap",
]


@dataclass(frozen=True)
class NoiseConfig:
    """Relative Gaussian measurement noise on green generation."""

    relative_sigma: float = 0.20
    seed: int = 0

    def __post_init__(self):
        if self.relative_sigma < 0:
            raise ValueError("relative_sigma must be >= 0")


@dataclass(frozen=True)
class OnlineConfig:
    """Step-size schedule and gradient variant of the online allocator.

    ``step0 = None`` picks the default scale u**2 / (2 * lambda_max(B)).
    ``gradient_mode='quadratic-only'`` drops the constant consumption term
    and the 1/u**2 factor from the gradient (comparison experiments only).
    """

    step0: float | None = None
    schedule: str = "sqrt"  # "sqrt": step0/sqrt(t); "constant": step0
    gradient_mode: str = "exact"  # or "quadratic-only"

    def __post_init__(self):
        if self.schedule not in ("sqrt", "constant"):
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if self.gradient_mode not in ("exact", "quadratic-only"):
            raise ValueError(f"unknown gradient mode {self.gradient_mode!r}")

    def base_step(self, problem: AllocationProblem) -> float:
        if self.step0 is not None:
            return self.step0
        lam = float(np.linalg.eigvalsh(problem.loss.b).max())
        if lam <= 0:
            return 1.0
        return problem.u * problem.u / (2.0 * lam)

    def step_at(self, t: int, base: float) -> float:
        if self.schedule == "constant":
            return base
        return base / np.sqrt(t)


@dataclass(frozen=True)
class MirrorState:
    """Iterate of the online algorithm at slot ``t``.

    ``step`` is the step size the next update will use. The divergence is
    fixed to half the squared Euclidean norm, under which the dual-space
    gradient map is the identity.
    """

    t: int
    p: np.ndarray = field(repr=False)
    step: float
    divergence: str = "half-squared-euclidean"

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("slot index starts at 1")
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        p.flags.writeable = False
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class Trajectory:
    """Per-slot record of an online run (arrays indexed by slot - 1)."""

    t: np.ndarray
    g_true: np.ndarray
    g_obs: np.ndarray
    p: np.ndarray
    e0: np.ndarray
    p_loss: np.ndarray
    capacity_total: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        for name in ("t", "g_true", "g_obs", "p", "e0", "p_loss", "capacity_total", "f"):
            arr = np.asarray(getattr(self, name))
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def mean_e0(self) -> float:
        return float(self.e0.mean())


def observe(g_true: np.ndarray, noise: NoiseConfig, rng: np.random.Generator) -> np.ndarray:
    """Noisy reading of the green vector, floored at zero.

    Each site gets an independent relative Gaussian error drawn from
    ``rng``; generation cannot be measured negative.
    """
    g_true = np.atleast_1d(np.asarray(g_true, dtype=float))
    eps = rng.normal(0.0, noise.relative_sigma, size=g_true.shape)
    return np.maximum(0.0, g_true * (1.0 + eps))


def gradient(
    p: np.ndarray,
    g_obs: np.ndarray,
    loss: LossMatrix,
    u: float,
    mode: str = "exact",
) -> np.ndarray:
    """Gradient of the brown import in the station powers.

    The exact form is 1 + (2/u**2) (B p - M g); ``mode='quadratic-only'``
    returns 2 (B p - M g) without the constant term or the voltage scaling.
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    g_obs = np.atleast_1d(np.asarray(g_obs, dtype=float))
    if p.shape != (loss.n_load,) or g_obs.shape != (loss.n_green,):
        raise DimensionMismatch(
            f"p{p.shape}/g{g_obs.shape} do not match partition "
            f"({loss.n_load} load, {loss.n_green} green)"
        )
    quad = loss.b @ p - loss.m @ g_obs
    if mode == "quadratic-only":
        return 2.0 * quad
    if mode != "exact":
        raise ValueError(f"unknown gradient mode {mode!r}")
    return 1.0 + (2.0 / (u * u)) * quad


def md_step(
    state: MirrorState,
    g_obs: np.ndarray,
    problem: AllocationProblem,
    cfg: SolverConfig | None = None,
    online_cfg: OnlineConfig | None = None,
    projector: FeasibleSetProjector | None = None,
) -> MirrorState:
    """One mirror-descent update: dual gradient step, then projection.

    Under the squared-Euclidean divergence the dual map is the identity, so
    the update is ``project(p - step * grad)`` onto the slot's constraint
    set (built from the observed green vector).
    """
    online_cfg = online_cfg or OnlineConfig()
    slot = replace(problem, g=np.asarray(g_obs, dtype=float))
    grad = gradient(state.p, g_obs, problem.loss, problem.u, mode=online_cfg.gradient_mode)
    omega = state.p - state.step * grad
    if projector is None:
        projector = FeasibleSetProjector(slot, cfg)
    p_next = projector.project(omega, slot)
    base = online_cfg.base_step(problem)
    return MirrorState(t=state.t + 1, p=p_next, step=online_cfg.step_at(state.t + 1, base))


def _demand_at(demand_traces, t: int) -> CapacityDemand:
    if isinstance(demand_traces, CapacityDemand):
        return demand_traces
    return demand_traces[t]


def run_online(
    template: AllocationProblem,
    g_traces: np.ndarray,
    demand_traces,
    horizon: int,
    noise: NoiseConfig,
    cfg: SolverConfig | None = None,
    online_cfg: OnlineConfig | None = None,
    carbon: CarbonModel | None = None,
    slot_kwh_per_pu: float | None = None,
) -> Trajectory:
    """Run the online allocator for ``horizon`` slots.

    ``g_traces`` holds the true green generation per slot (rows);
    ``demand_traces`` is either one :class:`CapacityDemand` (stationary) or
    a per-slot sequence. Metrics are evaluated against the true generation,
    while the controller only ever sees the noisy observations. The run is
    deterministic given the noise seed.

    The greenness column needs a carbon model and the slot's per-unit to
    kWh conversion; without them it is NaN.
    """
    cfg = cfg or SolverConfig()
    online_cfg = online_cfg or OnlineConfig()
    g_traces = np.atleast_2d(np.asarray(g_traces, dtype=float))
    if g_traces.shape[0] < horizon:
        raise ValueError(f"green trace covers {g_traces.shape[0]} slots, horizon is {horizon}")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")

    rng = np.random.default_rng(noise.seed)
    nb = template.n_stations

    rec_g_obs = np.zeros_like(g_traces[:horizon])
    rec_p = np.zeros((horizon, nb))
    rec_e0 = np.zeros(horizon)
    rec_loss = np.zeros(horizon)
    rec_cap = np.zeros(horizon)
    rec_f = np.full(horizon, np.nan)

    one_shot = OneShotSolver(template, cfg)
    projector = FeasibleSetProjector(template, cfg)
    base = online_cfg.base_step(template)
    state: MirrorState | None = None

    for k in range(horizon):
        t = k + 1
        g_true = g_traces[k]
        g_obs = observe(g_true, noise, rng)
        slot = replace(template, g=g_obs, demand=_demand_at(demand_traces, k))
        try:
            if state is None:
                alloc = one_shot.solve(slot)
                state = MirrorState(t=1, p=alloc.p, step=online_cfg.step_at(1, base))
            else:
                grad = gradient(
                    state.p, g_obs, template.loss, template.u, mode=online_cfg.gradient_mode
                )
                omega = state.p - state.step * grad
                p_next = projector.project(omega, slot)
                state = MirrorState(t=t, p=p_next, step=online_cfg.step_at(t, base))
        except GreenGridError as exc:
            raise type(exc)(f"slot {t}: {exc}") from exc

        truth = replace(template, g=g_true, demand=_demand_at(demand_traces, k))
        p = state.p
        rec_g_obs[k] = g_obs
        rec_p[k] = p
        rec_cap[k] = truth.capacity_total(p)
        inj = truth.injection(p)
        rec_loss[k] = power_loss(inj, truth.loss, truth.u)
        rec_e0[k] = brown_energy(inj, truth.loss, truth.u)
        if carbon is not None and slot_kwh_per_pu is not None:
            try:
                rec_f[k] = greenness(rec_cap[k], rec_e0[k] * slot_kwh_per_pu, carbon)
            except UndefinedMetric:
                rec_f[k] = np.nan

    return Trajectory(
        t=np.arange(1, horizon + 1),
        g_true=g_traces[:horizon].copy(),
        g_obs=rec_g_obs,
        p=rec_p,
        e0=rec_e0,
        p_loss=rec_loss,
        capacity_total=rec_cap,
        f=rec_f,
    )


def convergence_gap(
    traj: Trajectory,
    template: AllocationProblem,
    g_traces: np.ndarray | None = None,
    cfg: SolverConfig | None = None,
) -> np.ndarray:
    """Running-average excess import over the clairvoyant comparator.

    The comparator is the one-shot optimum of the problem with the
    horizon-mean true green vector and the template's demand (a stationary
    scenario's fixed demand). Terms that do not depend on the decision
    cancel between the two operands, so the series is exact even though the
    loss kernel's constant green term varies per slot.
    """
    g = np.atleast_2d(np.asarray(g_traces if g_traces is not None else traj.g_true, dtype=float))
    horizon = len(traj)
    g = g[:horizon]
    comparator = solve_one_shot(replace(template, g=g.mean(axis=0)), cfg)
    p_star = comparator.p

    b, m = template.loss.b, template.loss.m
    u2 = template.u * template.u
    p = traj.p

    def decision_part(pmat: np.ndarray) -> np.ndarray:
        quad = np.einsum("ti,ij,tj->t", pmat, b, pmat)
        cross = np.einsum("ti,ij,tj->t", pmat, m, g)
        return pmat.sum(axis=1) + (quad - 2.0 * cross) / u2

    star = np.tile(p_star, (horizon, 1))
    diffs = decision_part(p) - decision_part(star)
    return np.cumsum(diffs) / np.arange(1, horizon + 1)
