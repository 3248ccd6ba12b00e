"""Green-energy dispatch for microgrid-powered cellular base stations.

The package combines a linearized distribution-grid model, a base-station
capacity model, a convex one-shot dispatch solver, and a stochastic online
allocator robust to noisy green-generation measurements, plus a scenario
harness and CLI for trace-driven policy comparisons.
"""

from .comm import BaseStationParams, CapacityDemand, CarbonModel, capacity, greenness, min_power, total_demand
from .errors import GreenGridError
from .flow import FlowResult, InjectionState, brown_energy, exact_power_flow_oracle, linearized_flow, power_loss, voltage_profile
from .grid import (
    Branch,
    BusKind,
    GridTopology,
    LossMatrix,
    build_admittance,
    build_loss_matrix,
    loss_matrix_from_topology,
    partition_blocks,
    validate_topology,
)
from .online import (
    MirrorState,
    NoiseConfig,
    OnlineConfig,
    Trajectory,
    convergence_gap,
    gradient,
    md_step,
    observe,
    run_online,
)
from .optimize import (
    Allocation,
    AllocationProblem,
    SolverConfig,
    brute_force_oracle,
    check_feasible,
    pareto_frontier,
    pareto_verify,
    project_feasible,
    solve_one_shot,
)

__version__ = "0.1.0"
