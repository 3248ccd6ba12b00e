"""Linearized power-flow quantities and an exact nonlinear oracle.

The linearized model evaluates branch loss as a quadratic form in the bus
injections and voltages as an affine map of them, both driven by the loss
matrix. The Newton oracle solves the exact nonlinear bus power-balance
equations and is used to validate the linearization on small networks.

Sign convention: load buses consume ``p`` (injection ``-p``), green buses
inject ``+g``, and the slack bus balances the residual (the brown import).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NoConvergence
from .grid import BusKind, GridTopology, LossMatrix, build_admittance

__all__ = [
    "InjectionState",
    "FlowResult",
    "power_loss",
    "brown_energy",
    "voltage_profile",
    "linearized_flow",
    "exact_power_flow_oracle",
]


@dataclass(frozen=True)
class InjectionState:
    """Per-bus consumptions and green generations, in per-unit W.

    ``p`` follows the loss matrix's load order, ``g`` its green order.
    """

    p: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        g = np.atleast_1d(np.asarray(self.g, dtype=float))
        for name, vec in (("p", p), ("g", g)):
            if not np.all(np.isfinite(vec)):
                raise ValueError(f"{name} has non-finite entries")
            if np.any(vec < 0):
                raise ValueError(f"{name} has negative entries")
        p.flags.writeable = False
        g.flags.writeable = False
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "g", g)


@dataclass(frozen=True)
class FlowResult:
    """Loss, brown import, and voltage magnitudes for one operating point.

    ``v_mag`` covers the non-slack buses ordered loads-then-greens. The
    energy balance ``e0 = sum(p) - sum(g) + p_loss`` holds by construction.
    ``negative_import`` marks operating points where no brown energy is
    drawn (green oversupply); carbon metrics are undefined there.
    """

    p_loss: float
    e0: float
    v_mag: np.ndarray = field(repr=False)

    @property
    def negative_import(self) -> bool:
        return self.e0 <= 0.0


def _check_dims(state: InjectionState, loss: LossMatrix) -> None:
    if state.p.shape != (loss.n_load,) or state.g.shape != (loss.n_green,):
        raise DimensionMismatch(
            f"state dims p{state.p.shape}/g{state.g.shape} do not match "
            f"partition ({loss.n_load} load, {loss.n_green} green)"
        )


def power_loss(state: InjectionState, loss: LossMatrix, u: float) -> float:
    """Total branch loss of the quadratic model, per-unit W.

    Nonnegative for any injection (the loss kernel is PSD); roundoff
    negatives are floored to zero.
    """
    _check_dims(state, loss)
    p, g = state.p, state.g
    raw = (p @ loss.b @ p - 2.0 * (p @ loss.m @ g) + g @ loss.gsub @ g) / (u * u)
    return max(0.0, float(raw))


def brown_energy(state: InjectionState, loss: LossMatrix, u: float) -> float:
    """Power imported at the coupling bus: consumption - green + loss.

    May be nonpositive under green oversupply; :class:`FlowResult` carries
    the ``negative_import`` flag for that case.
    """
    _check_dims(state, loss)
    return float(state.p.sum() - state.g.sum() + power_loss(state, loss, u))


def voltage_profile(state: InjectionState, loss: LossMatrix, u: float) -> np.ndarray:
    """Affine voltage magnitudes at non-slack buses, loads-then-greens order."""
    _check_dims(state, loss)
    s = np.concatenate([-state.p, state.g])
    return u + (loss.nonslack_block @ s) / u


def linearized_flow(state: InjectionState, loss: LossMatrix, u: float) -> FlowResult:
    """Evaluate loss, brown import and voltages of the linearized model."""
    ploss = power_loss(state, loss, u)
    e0 = float(state.p.sum() - state.g.sum() + ploss)
    return FlowResult(p_loss=ploss, e0=e0, v_mag=voltage_profile(state, loss, u))


def _injection_vector(topology: GridTopology, state: InjectionState) -> np.ndarray:
    load = topology.buses_of_kind(BusKind.LOAD)
    green = topology.buses_of_kind(BusKind.GREEN)
    if state.p.shape != (len(load),) or state.g.shape != (len(green),):
        raise DimensionMismatch(
            f"state dims p{state.p.shape}/g{state.g.shape} do not match topology "
            f"({len(load)} load, {len(green)} green)"
        )
    p_spec = np.zeros(topology.n_bus)
    p_spec[list(load)] = -state.p
    p_spec[list(green)] = state.g
    return p_spec


def exact_power_flow_oracle(
    topology: GridTopology,
    state: InjectionState,
    tol: float = 1e-10,
    max_iter: int = 50,
) -> FlowResult:
    """Solve the exact nonlinear power balance by Newton iteration.

    The slack bus is held at the topology's slack voltage; every other bus
    is a PQ bus with the state's real injection and zero reactive power.
    Raises :class:`NoConvergence` when the mismatch does not fall below
    ``tol`` within ``max_iter`` steps, which signals an infeasible or
    overloaded operating point.
    """
    y = np.asarray(build_admittance(topology).y)
    n = topology.n_bus
    u = topology.slack_voltage
    p_spec = _injection_vector(topology, state)
    q_spec = np.zeros(n)
    pq = np.array([i for i in range(n) if i != 0], dtype=int)

    vm = np.full(n, u, dtype=float)
    va = np.zeros(n)

    for _ in range(max_iter):
        vc = vm * np.exp(1j * va)
        i_bus = y @ vc
        s = vc * np.conj(i_bus)
        mismatch = np.concatenate(
            [p_spec[pq] - s.real[pq], q_spec[pq] - s.imag[pq]]
        )
        if np.abs(mismatch).max() <= tol:
            e0 = float(s.real[0])
            p_loss = float(s.real.sum())
            load = topology.buses_of_kind(BusKind.LOAD)
            green = topology.buses_of_kind(BusKind.GREEN)
            order = np.array(load + green, dtype=int)
            return FlowResult(p_loss=p_loss, e0=e0, v_mag=vm[order].copy())

        # Complex power sensitivities to angle and magnitude (per bus).
        dv = np.diag(vc)
        di = np.diag(i_bus)
        dvn = np.diag(vc / vm)
        ds_dva = 1j * dv @ np.conj(di - y @ dv)
        ds_dvm = dvn @ np.conj(di) + dv @ np.conj(y @ dvn)

        jac = np.block(
            [
                [ds_dva.real[np.ix_(pq, pq)], ds_dvm.real[np.ix_(pq, pq)]],
                [ds_dva.imag[np.ix_(pq, pq)], ds_dvm.imag[np.ix_(pq, pq)]],
            ]
        )
        try:
            step = np.linalg.solve(jac, mismatch)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"singular Jacobian: {exc}") from exc
        if not np.all(np.isfinite(step)):
            raise NoConvergence("Newton step diverged")
        k = len(pq)
        va[pq] += step[:k]
        vm[pq] += step[k:]
        if np.any(vm[pq] <= 0) or np.any(vm[pq] > 10 * u):
            raise NoConvergence("voltage iterate left the physical range")

    raise NoConvergence(f"no convergence after {max_iter} Newton iterations")
