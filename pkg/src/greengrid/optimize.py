"""Brown-import minimization and Euclidean projection onto the feasible set.

The decision vector is the per-station power draw ``p``. The objective is
total consumption minus green generation plus quadratic branch loss; the
constraint set couples a network capacity floor (sum of log terms), per
station minimum powers, box bounds, and affine voltage bounds.

Both the one-shot solve and the projection are convex programs handed to
cvxpy (CLARABEL handles the exponential-cone capacity constraint). The
solver classes cache a parametrized program so trace-driven runs pay the
canonicalization cost once per scenario. An exhaustive grid oracle and a
grid-based Pareto check provide the independent verification route on small
instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import cvxpy as cp
import numpy as np

from .comm import BaseStationParams, CapacityDemand, min_power
from .errors import DimensionMismatch, Infeasible, NoConvergence
from .flow import InjectionState, brown_energy, power_loss
from .grid import LossMatrix

__all__ = [
    "AllocationProblem",
    "Allocation",
    "SolverConfig",
    "FeasibilityReport",
    "check_feasible",
    "solve_one_shot",
    "project_feasible",
    "brute_force_oracle",
    "pareto_verify",
    "pareto_frontier",
    "OneShotSolver",
    "FeasibleSetProjector",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class SolverConfig:
    tol_feas: float = 1e-8
    tol_opt: float = 1e-6
    max_iters: int = 200
    # Interior-point tightness passed to the conic solver; an order below
    # tol_feas so reported residuals clear the contract.
    solver: str = "CLARABEL"
    solver_tol: float = 1e-10
    tikhonov: float = 1e-10

    def __post_init__(self):
        if min(self.tol_feas, self.tol_opt, self.solver_tol) <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class AllocationProblem:
    """One slot's decision context: demands, green vector, and bounds.

    ``stations`` follows the loss matrix's load order. ``v_min``/``v_max``
    bound the non-slack voltages (loads-then-greens order); ``None`` leaves
    that side unconstrained.
    """

    loss: LossMatrix
    u: float
    stations: tuple[BaseStationParams, ...]
    demand: CapacityDemand
    g: np.ndarray
    v_min: np.ndarray | None = None
    v_max: np.ndarray | None = None

    def __post_init__(self):
        stations = tuple(self.stations)
        object.__setattr__(self, "stations", stations)
        if len(stations) != self.loss.n_load:
            raise DimensionMismatch(
                f"{len(stations)} stations for {self.loss.n_load} load buses"
            )
        for bs, bus in zip(stations, self.loss.load_order):
            if bs.bus != bus:
                raise ValueError(
                    f"station order must follow load order: station bus {bs.bus} "
                    f"at position of bus {bus}"
                )
        g = np.atleast_1d(np.asarray(self.g, dtype=float))
        if g.shape != (self.loss.n_green,):
            raise DimensionMismatch(
                f"green vector length {g.shape} for {self.loss.n_green} green buses"
            )
        if np.any(g < 0) or not np.all(np.isfinite(g)):
            raise ValueError("green vector must be finite and nonnegative")
        g.flags.writeable = False
        object.__setattr__(self, "g", g)
        n_ns = self.loss.n_load + self.loss.n_green
        for name in ("v_min", "v_max"):
            bound = getattr(self, name)
            if bound is None:
                continue
            arr = np.broadcast_to(np.asarray(bound, dtype=float), (n_ns,)).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.v_min is not None and np.any(self.v_min > self.u):
            raise ValueError("v_min must not exceed the slack voltage")
        if self.v_max is not None and np.any(self.v_max < self.u):
            raise ValueError("v_max must not fall below the slack voltage")
        if self.demand.per_bs_floor is not None and len(self.demand.per_bs_floor) != len(
            stations
        ):
            raise DimensionMismatch(
                f"{len(self.demand.per_bs_floor)} per-station floors for "
                f"{len(stations)} stations"
            )

    @property
    def n_stations(self) -> int:
        return len(self.stations)

    def lower_bounds(self) -> np.ndarray:
        """Effective per-station minimum: box bound or floor power, whichever binds."""
        return np.array(
            [
                max(bs.p_min, min_power(self.demand.floor_for(i), bs))
                for i, bs in enumerate(self.stations)
            ]
        )

    def upper_bounds(self) -> np.ndarray:
        return np.array([bs.p_max for bs in self.stations])

    def circuit_powers(self) -> np.ndarray:
        return np.array([bs.p_c for bs in self.stations])

    def snr_per_watt(self) -> np.ndarray:
        return np.array([bs.snr_per_watt for bs in self.stations])

    def capacity_total(self, p: np.ndarray) -> float:
        """Network spectral efficiency at ``p`` (extended-value for p < p_c)."""
        arg = (np.asarray(p) - self.circuit_powers()) * self.snr_per_watt()
        with np.errstate(invalid="ignore", divide="ignore"):
            terms = np.where(arg > -1.0, np.log1p(np.maximum(arg, -1.0 + 1e-300)), -np.inf)
        return float(terms.sum() / _LN2)

    def voltage_pieces(self) -> tuple[np.ndarray, np.ndarray]:
        """Affine voltage model v(p) = offset - load_block @ p / u."""
        nb = self.loss.n_load
        x_ns = self.loss.nonslack_block
        x_load = x_ns[:, :nb]
        x_green = x_ns[:, nb:]
        offset = self.u + (x_green @ self.g) / self.u
        return offset, x_load

    def injection(self, p: np.ndarray) -> InjectionState:
        return InjectionState(p=np.asarray(p, dtype=float), g=self.g)


@dataclass(frozen=True)
class Allocation:
    """A power vector with its evaluated metrics."""

    p: np.ndarray = field(repr=False)
    e0: float
    p_loss: float
    capacity_total: float
    feasible: bool
    kkt_residual: float


@dataclass(frozen=True)
class FeasibilityReport:
    """Violated constraints with their residuals (positive = violation)."""

    violations: tuple[tuple[str, float], ...] = ()

    @property
    def feasible(self) -> bool:
        return not self.violations

    @property
    def max_violation(self) -> float:
        return max((r for _, r in self.violations), default=0.0)


def check_feasible(
    p: np.ndarray, problem: AllocationProblem, tol: float = 1e-8
) -> FeasibilityReport:
    """Report every constraint violated by ``p`` beyond ``tol``."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if p.shape != (problem.n_stations,):
        raise DimensionMismatch(f"p has shape {p.shape}, expected ({problem.n_stations},)")
    violations: list[tuple[str, float]] = []

    cap = problem.capacity_total(p)
    short = problem.demand.c0 - cap
    if short > tol:
        violations.append(("capacity_floor", float(short)))

    lb = problem.lower_bounds()
    ub = problem.upper_bounds()
    for i in range(problem.n_stations):
        if lb[i] - p[i] > tol:
            violations.append((f"station_min[{i}]", float(lb[i] - p[i])))
        if p[i] - ub[i] > tol:
            violations.append((f"power_max[{i}]", float(p[i] - ub[i])))

    if problem.v_min is not None or problem.v_max is not None:
        offset, x_load = problem.voltage_pieces()
        v = offset - (x_load @ p) / problem.u
        order = problem.loss.nonslack_order
        if problem.v_min is not None:
            for j, bus in enumerate(order):
                if problem.v_min[j] - v[j] > tol:
                    violations.append((f"voltage_min[{bus}]", float(problem.v_min[j] - v[j])))
        if problem.v_max is not None:
            for j, bus in enumerate(order):
                if v[j] - problem.v_max[j] > tol:
                    violations.append((f"voltage_max[{bus}]", float(v[j] - problem.v_max[j])))

    return FeasibilityReport(tuple(violations))


def _objective_gradient(p: np.ndarray, problem: AllocationProblem, tikhonov: float) -> np.ndarray:
    u2 = problem.u * problem.u
    return 1.0 + (2.0 / u2) * (problem.loss.b @ p - problem.loss.m @ problem.g) + 2 * tikhonov * p


class _ConstraintBlock:
    """Shared cvxpy constraint set with per-slot parameters."""

    def __init__(self, problem: AllocationProblem):
        nb = problem.n_stations
        ng = problem.loss.n_green
        self.var_p = cp.Variable(nb, name="p")
        self.par_lb = cp.Parameter(nb, name="lb")
        self.par_c0 = cp.Parameter(nonneg=True, name="c0")
        self.par_g = cp.Parameter(ng, nonneg=True, name="g") if ng else None

        pc = problem.circuit_powers()
        snr = problem.snr_per_watt()
        p = self.var_p
        self.constraints = [
            cp.sum(cp.log1p(cp.multiply(snr, p - pc))) / _LN2 >= self.par_c0,
            p >= self.par_lb,
            p <= problem.upper_bounds(),
        ]
        self.i_cap, self.i_lb, self.i_ub = 0, 1, 2
        self.i_vlo = self.i_vhi = None

        x_ns = problem.loss.nonslack_block
        x_load = x_ns[:, :nb]
        x_green = x_ns[:, nb:]
        self.x_load = x_load
        u = problem.u
        if problem.v_min is not None or problem.v_max is not None:
            green_part = (x_green @ self.par_g) / u if ng else 0.0
            v_expr = u + green_part - (x_load @ p) / u
            if problem.v_min is not None:
                self.constraints.append(v_expr >= problem.v_min)
                self.i_vlo = len(self.constraints) - 1
            if problem.v_max is not None:
                self.constraints.append(v_expr <= problem.v_max)
                self.i_vhi = len(self.constraints) - 1

    def set_slot(self, problem: AllocationProblem) -> None:
        self.par_lb.value = problem.lower_bounds()
        self.par_c0.value = problem.demand.c0
        if self.par_g is not None:
            self.par_g.value = problem.g

    def dual(self, idx) -> np.ndarray | None:
        if idx is None:
            return None
        return self.constraints[idx].dual_value


def _precheck(problem: AllocationProblem) -> None:
    lb = problem.lower_bounds()
    ub = problem.upper_bounds()
    bad = np.nonzero(lb > ub + 1e-12)[0]
    if bad.size:
        i = int(bad[0])
        raise Infeasible(
            f"station {i} (bus {problem.stations[i].bus}): minimum power "
            f"{lb[i]:.6g} exceeds p_max {ub[i]:.6g}"
        )
    cap_max = problem.capacity_total(ub)
    if cap_max < problem.demand.c0 - 1e-12:
        raise Infeasible(
            f"demand c0 = {problem.demand.c0:.6g} exceeds achievable capacity "
            f"{cap_max:.6g} at p_max"
        )


def _solve_cvxpy(prob: cp.Problem, cfg: SolverConfig) -> None:
    kwargs = {}
    if cfg.solver == "CLARABEL":
        kwargs = {
            "tol_gap_abs": cfg.solver_tol,
            "tol_gap_rel": cfg.solver_tol,
            "tol_feas": cfg.solver_tol,
            "max_iter": max(cfg.max_iters, 200),
        }
    try:
        prob.solve(solver=cfg.solver, **kwargs)
    except cp.error.SolverError as exc:
        raise NoConvergence(str(exc)) from exc
    if prob.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        raise Infeasible("solver reported an infeasibility certificate")
    if prob.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise NoConvergence(f"solver status {prob.status}")


class OneShotSolver:
    """Parametrized minimizer of the brown import for one problem structure.

    Reusable across slots that share the loss matrix, stations, and bounds;
    only the green vector and the demand change between solves.
    """

    def __init__(self, template: AllocationProblem, cfg: SolverConfig | None = None):
        self.cfg = cfg or SolverConfig()
        self.template = template
        self.block = _ConstraintBlock(template)
        p = self.block.var_p
        u2 = template.u * template.u
        b_psd = cp.psd_wrap(template.loss.b / u2)
        objective = cp.sum(p) + cp.quad_form(p, b_psd) + self.cfg.tikhonov * cp.sum_squares(p)
        if self.block.par_g is not None:
            objective = objective - (2.0 / u2) * ((template.loss.m @ self.block.par_g) @ p)
        self.prob = cp.Problem(cp.Minimize(objective), self.block.constraints)

    def _kkt_residual(self, p: np.ndarray, problem: AllocationProblem) -> float:
        grad = _objective_gradient(p, problem, self.cfg.tikhonov)
        stat = grad.copy()
        blk = self.block
        lam_cap = blk.dual(blk.i_cap)
        if lam_cap is not None:
            snr = problem.snr_per_watt()
            pc = problem.circuit_powers()
            grad_cap = snr / (_LN2 * (1.0 + np.maximum((p - pc) * snr, -1 + 1e-12)))
            stat -= float(lam_cap) * grad_cap
        mu_lb = blk.dual(blk.i_lb)
        if mu_lb is not None:
            stat -= mu_lb
        mu_ub = blk.dual(blk.i_ub)
        if mu_ub is not None:
            stat += mu_ub
        x_load = blk.x_load
        lam_hi = blk.dual(blk.i_vhi)
        if lam_hi is not None:
            stat -= (x_load.T @ lam_hi) / problem.u
        lam_lo = blk.dual(blk.i_vlo)
        if lam_lo is not None:
            stat += (x_load.T @ lam_lo) / problem.u
        stat_norm = np.abs(stat).max() / (1.0 + np.abs(grad).max())
        violation = check_feasible(p, problem, tol=0.0).max_violation
        return float(max(stat_norm, violation))

    def solve(self, problem: AllocationProblem | None = None) -> Allocation:
        problem = problem if problem is not None else self.template
        _precheck(problem)
        self.block.set_slot(problem)
        _solve_cvxpy(self.prob, self.cfg)
        p = np.clip(self.block.var_p.value, problem.lower_bounds(), problem.upper_bounds())
        state = problem.injection(p)
        return Allocation(
            p=p,
            e0=brown_energy(state, problem.loss, problem.u),
            p_loss=power_loss(state, problem.loss, problem.u),
            capacity_total=problem.capacity_total(p),
            feasible=check_feasible(p, problem, self.cfg.tol_feas).feasible,
            kkt_residual=self._kkt_residual(p, problem),
        )


class FeasibleSetProjector:
    """Euclidean projection onto the constraint set, parametrized per slot."""

    def __init__(self, template: AllocationProblem, cfg: SolverConfig | None = None):
        self.cfg = cfg or SolverConfig()
        self.template = template
        self.block = _ConstraintBlock(template)
        self.par_omega = cp.Parameter(template.n_stations, name="omega")
        objective = cp.sum_squares(self.block.var_p - self.par_omega)
        self.prob = cp.Problem(cp.Minimize(objective), self.block.constraints)

    def project(self, omega: np.ndarray, problem: AllocationProblem | None = None) -> np.ndarray:
        problem = problem if problem is not None else self.template
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        if omega.shape != (problem.n_stations,):
            raise DimensionMismatch(
                f"omega has shape {omega.shape}, expected ({problem.n_stations},)"
            )
        # Projection of a feasible point is the point itself; skip the solve.
        if check_feasible(omega, problem, self.cfg.tol_feas).feasible:
            return omega.copy()
        _precheck(problem)
        self.block.set_slot(problem)
        self.par_omega.value = omega
        _solve_cvxpy(self.prob, self.cfg)
        return np.clip(self.block.var_p.value, problem.lower_bounds(), problem.upper_bounds())


def solve_one_shot(problem: AllocationProblem, cfg: SolverConfig | None = None) -> Allocation:
    """Minimize the brown import over the slot's constraint set."""
    return OneShotSolver(problem, cfg).solve(problem)


def project_feasible(
    omega: np.ndarray, problem: AllocationProblem, cfg: SolverConfig | None = None
) -> np.ndarray:
    """Closest feasible point to ``omega`` in the Euclidean norm."""
    return FeasibleSetProjector(problem, cfg).project(omega, problem)


def _grid_axes(problem: AllocationProblem, resolution: float) -> list[np.ndarray]:
    axes = []
    for bs in problem.stations:
        span = bs.p_max - bs.p_min
        if span <= 0:
            axes.append(np.array([bs.p_min]))
            continue
        n = max(2, int(round(span / resolution)) + 1)
        axes.append(np.linspace(bs.p_min, bs.p_max, n))
    return axes


class _GridEval:
    """Separable pieces of the objective/constraints over a power grid."""

    def __init__(self, problem: AllocationProblem, axes: list[np.ndarray]):
        self.problem = problem
        self.axes = axes
        u2 = problem.u * problem.u
        b = problem.loss.b
        mg = problem.loss.m @ problem.g
        pc = problem.circuit_powers()
        snr = problem.snr_per_watt()
        lb = problem.lower_bounds()

        self.const = float(-problem.g.sum() + (problem.g @ problem.loss.gsub @ problem.g) / u2)
        self.lin = []  # per-axis E0 contribution
        self.cap = []  # per-axis capacity contribution
        self.okdim = []  # per-axis lower-bound mask
        for i, x in enumerate(axes):
            self.lin.append(x + (b[i, i] * x * x - 2.0 * mg[i] * x) / u2)
            arg = (x - pc[i]) * snr[i]
            with np.errstate(invalid="ignore"):
                self.cap.append(
                    np.where(arg > -1.0, np.log1p(np.maximum(arg, -1 + 1e-300)) / _LN2, -np.inf)
                )
            self.okdim.append(x >= lb[i] - 1e-12)
        self.cross = 2.0 * b / u2  # coefficient of x_i * x_j, i != j

        self.v_offset, x_load = problem.voltage_pieces()
        self.v_coef = -x_load / problem.u  # (n_nonslack, n_stations)

    def volt_mask_2d(self, i: int, j: int, xi: np.ndarray, xj: np.ndarray, shift=0.0):
        """Voltage feasibility over an (xi, xj) mesh; shift adds fixed-dim terms."""
        problem = self.problem
        if problem.v_min is None and problem.v_max is None:
            return True
        mask = np.ones((xi.size, xj.size), dtype=bool)
        shift = np.atleast_1d(np.asarray(shift, dtype=float))
        if shift.size == 1:
            shift = np.full(self.v_offset.size, float(shift))
        for r in range(self.v_offset.size):
            v = (
                self.v_offset[r]
                + shift[r]
                + self.v_coef[r, i] * xi[:, None]
                + self.v_coef[r, j] * xj[None, :]
            )
            if problem.v_min is not None:
                mask &= v >= problem.v_min[r] - 1e-12
            if problem.v_max is not None:
                mask &= v <= problem.v_max[r] + 1e-12
        return mask


def _scan_grid(problem: AllocationProblem, resolution: float, dominate=None):
    """Exhaustive sweep of the feasible grid.

    Returns the best (E0, p) pair, or — when ``dominate`` is given as a
    ``(cap_floor, e0_ceiling)`` pair — returns early with ``True`` as the
    third element once any feasible point beats both thresholds.
    """
    if problem.n_stations > 3:
        raise ValueError("grid search supports at most 3 stations")
    axes = _grid_axes(problem, resolution)
    ev = _GridEval(problem, axes)
    c0 = problem.demand.c0
    best_e0, best_p = np.inf, None
    found = False

    def consider(e0_mesh, cap_mesh, mask, coords):
        nonlocal best_e0, best_p, found
        mask = mask & (cap_mesh >= c0 - 1e-12)
        if dominate is not None:
            cap_floor, e0_ceiling = dominate
            if np.any(mask & (cap_mesh > cap_floor) & (e0_mesh < e0_ceiling)):
                found = True
            return
        masked = np.where(mask, e0_mesh, np.inf)
        idx = np.unravel_index(np.argmin(masked), masked.shape) if masked.ndim else ()
        val = masked[idx] if masked.ndim else float(masked)
        if val < best_e0:
            best_e0 = float(val)
            best_p = coords(idx)

    nb = problem.n_stations
    if nb == 1:
        x = axes[0]
        e0 = ev.lin[0] + ev.const
        mask = ev.okdim[0].copy()
        if problem.v_min is not None or problem.v_max is not None:
            vm = ev.volt_mask_2d(0, 0, x, np.zeros(1))
            mask &= vm[:, 0] if vm is not True else True
        consider(e0, ev.cap[0], mask, lambda idx: np.array([x[idx[0]]]))
    elif nb == 2:
        x0, x1 = axes
        e0 = (
            ev.lin[0][:, None]
            + ev.lin[1][None, :]
            + ev.cross[0, 1] * x0[:, None] * x1[None, :]
            + ev.const
        )
        cap = ev.cap[0][:, None] + ev.cap[1][None, :]
        mask = ev.okdim[0][:, None] & ev.okdim[1][None, :]
        vm = ev.volt_mask_2d(0, 1, x0, x1)
        if vm is not True:
            mask &= vm
        consider(e0, cap, mask, lambda idx: np.array([x0[idx[0]], x1[idx[1]]]))
    else:
        x0, x1, x2 = axes
        base_e0 = (
            ev.lin[1][:, None]
            + ev.lin[2][None, :]
            + ev.cross[1, 2] * x1[:, None] * x2[None, :]
            + ev.const
        )
        base_cap = ev.cap[1][:, None] + ev.cap[2][None, :]
        base_mask = ev.okdim[1][:, None] & ev.okdim[2][None, :]
        cross_mesh = ev.cross[0, 1] * x1[:, None] + ev.cross[0, 2] * x2[None, :]
        has_volt = problem.v_min is not None or problem.v_max is not None
        for i0, v0 in enumerate(x0):
            if not ev.okdim[0][i0]:
                continue
            e0 = base_e0 + ev.lin[0][i0] + v0 * cross_mesh
            cap = base_cap + ev.cap[0][i0]
            mask = base_mask
            if has_volt:
                vm = ev.volt_mask_2d(1, 2, x1, x2, shift=ev.v_coef[:, 0] * v0)
                if vm is not True:
                    mask = base_mask & vm
            consider(
                e0,
                cap,
                mask,
                lambda idx, i0=i0, v0=v0: np.array([v0, x1[idx[0]], x2[idx[1]]]),
            )
            if found:
                break

    if dominate is not None:
        return None, None, found
    return best_e0, best_p, False


def brute_force_oracle(problem: AllocationProblem, resolution: float) -> Allocation:
    """Exhaustive grid minimizer, the independent check on the solver.

    Evaluates the brown import on the per-station grid with step
    ``resolution`` and keeps the best feasible point. The returned value
    exceeds the true optimum by at most the objective's Lipschitz constant
    times the resolution (assuming the rounded-up optimum stays feasible,
    which holds unless a lower voltage bound is active there).
    """
    best_e0, best_p, _ = _scan_grid(problem, resolution)
    if best_p is None:
        raise Infeasible("no feasible grid point")
    state = problem.injection(best_p)
    return Allocation(
        p=best_p,
        e0=brown_energy(state, problem.loss, problem.u),
        p_loss=power_loss(state, problem.loss, problem.u),
        capacity_total=problem.capacity_total(best_p),
        feasible=True,
        kkt_residual=float("nan"),
    )


def e0_lipschitz(problem: AllocationProblem) -> float:
    """Bound on the objective's gradient 1-norm over the box (grid error scale)."""
    ub = problem.upper_bounds()
    u2 = problem.u * problem.u
    per_coord = 1.0 + (2.0 / u2) * (
        np.abs(problem.loss.b) @ ub + np.abs(problem.loss.m @ problem.g)
    )
    return float(per_coord.sum())


def pareto_verify(
    alloc: Allocation, problem: AllocationProblem, resolution: float
) -> bool:
    """Grid check that no feasible point beats ``alloc`` on both objectives.

    A point dominates when its total capacity is strictly higher and its
    brown import strictly lower, beyond margins that absorb solver
    tolerance. Infeasible allocations are never Pareto optimal.
    """
    if not check_feasible(alloc.p, problem, tol=1e-6).feasible:
        return False
    m_cap = 1e-6 * (1.0 + abs(alloc.capacity_total))
    m_e0 = 1e-6 * (1.0 + abs(alloc.e0))
    _, _, dominated = _scan_grid(
        problem, resolution, dominate=(alloc.capacity_total + m_cap, alloc.e0 - m_e0)
    )
    return not dominated


def pareto_frontier(
    problem: AllocationProblem,
    points: int,
    cfg: SolverConfig | None = None,
    c0_lo: float | None = None,
    c0_hi: float | None = None,
) -> list[tuple[float, float]]:
    """Trace the (capacity floor, minimum brown import) trade-off curve.

    Solves the one-shot problem along an evenly spaced ladder of capacity
    floors; the resulting curve is nondecreasing and convex.
    """
    if points < 2:
        raise ValueError("need at least 2 ladder points")
    cap_max = problem.capacity_total(problem.upper_bounds())
    lo = 0.0 if c0_lo is None else c0_lo
    hi = 0.98 * cap_max if c0_hi is None else c0_hi
    if hi <= lo:
        raise ValueError(f"empty ladder: [{lo}, {hi}]")
    solver = OneShotSolver(replace(problem, demand=replace(problem.demand, c0=lo)), cfg)
    rows = []
    for c0 in np.linspace(lo, hi, points):
        slot = replace(problem, demand=replace(problem.demand, c0=float(c0)))
        rows.append((float(c0), solver.solve(slot).e0))
    return rows
