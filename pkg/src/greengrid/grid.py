"""Microgrid network model: topology, admittance matrix, and loss matrix.

Buses are integer ids ``0..N`` where bus 0 is the point of common coupling
(slack bus, held at fixed voltage). Each non-slack bus is either a load bus
(hosts a base station) or a green bus (hosts a renewable generator). Branches
carry a complex per-unit admittance and optional shunt admittances at their
endpoints.

The loss matrix is the kernel of the linearized power-flow model: with the
slack row/column removed, it is the real part of the inverse of the reduced
admittance matrix. Total branch loss is a quadratic form in the bus
injections and bus voltages are affine in them (see :mod:`greengrid.flow`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidTopology, PartitionMismatch, SingularReducedMatrix

__all__ = [
    "BusKind",
    "Branch",
    "GridTopology",
    "AdmittanceMatrix",
    "LossMatrix",
    "ValidationReport",
    "validate_topology",
    "build_admittance",
    "build_loss_matrix",
    "loss_matrix_closed_form",
    "partition_blocks",
    "loss_matrix_from_topology",
]

SLACK_BUS = 0


class BusKind(enum.Enum):
    SLACK = "slack"
    LOAD = "load"
    GREEN = "green"


@dataclass(frozen=True)
class Branch:
    """Transmission branch between two buses.

    ``admittance`` is the series admittance in per-unit siemens; a passive
    line has nonnegative real part. ``shunt_from``/``shunt_to`` are optional
    shunt admittances tied to the respective endpoint.
    """

    from_bus: int
    to_bus: int
    admittance: complex
    shunt_from: complex = 0j
    shunt_to: complex = 0j


@dataclass(frozen=True)
class GridTopology:
    """Bus/branch description of the microgrid.

    ``slack_voltage`` is the fixed per-unit voltage magnitude at bus 0.
    """

    buses: tuple[tuple[int, BusKind], ...]
    branches: tuple[Branch, ...]
    slack_voltage: float = 1.0

    def __init__(self, buses, branches, slack_voltage: float = 1.0):
        object.__setattr__(self, "buses", tuple((int(b), k) for b, k in buses))
        object.__setattr__(self, "branches", tuple(branches))
        object.__setattr__(self, "slack_voltage", float(slack_voltage))

    @property
    def n_bus(self) -> int:
        return len(self.buses)

    def buses_of_kind(self, kind: BusKind) -> tuple[int, ...]:
        return tuple(sorted(b for b, k in self.buses if k is kind))


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class AdmittanceMatrix:
    """Nodal admittance matrix, indexed by bus id on both axes."""

    y: np.ndarray = field(repr=False)

    def __post_init__(self):
        y = np.asarray(self.y, dtype=complex)
        y.flags.writeable = False
        object.__setattr__(self, "y", y)

    @property
    def n_bus(self) -> int:
        return self.y.shape[0]


@dataclass(frozen=True)
class LossMatrix:
    """Quadratic loss kernel with its load/green block partition.

    ``x_real`` is (N+1)x(N+1) with the slack row and column identically
    zero. ``load_order`` / ``green_order`` fix the row/column indexing of
    the blocks ``b`` (load x load), ``m`` (load x green) and ``gsub``
    (green x green).
    """

    x_real: np.ndarray = field(repr=False)
    slack: int
    load_order: tuple[int, ...]
    green_order: tuple[int, ...]
    b: np.ndarray = field(repr=False)
    m: np.ndarray = field(repr=False)
    gsub: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("x_real", "b", "m", "gsub"):
            a = np.asarray(getattr(self, name), dtype=float)
            a.flags.writeable = False
            object.__setattr__(self, name, a)

    @property
    def n_load(self) -> int:
        return len(self.load_order)

    @property
    def n_green(self) -> int:
        return len(self.green_order)

    @property
    def nonslack_order(self) -> tuple[int, ...]:
        """Bus ids of the non-slack block rows, loads first then greens."""
        return self.load_order + self.green_order

    @property
    def nonslack_block(self) -> np.ndarray:
        """Non-slack submatrix of ``x_real`` ordered loads-then-greens."""
        idx = np.array(self.nonslack_order, dtype=int)
        return self.x_real[np.ix_(idx, idx)]

    def partitioned(self, load, green) -> "LossMatrix":
        """Return a copy whose blocks follow the given load/green split."""
        b, m, gsub = partition_blocks(self, load, green)
        return LossMatrix(
            x_real=self.x_real,
            slack=self.slack,
            load_order=tuple(sorted(load)),
            green_order=tuple(sorted(green)),
            b=b,
            m=m,
            gsub=gsub,
        )


def validate_topology(topology: GridTopology) -> ValidationReport:
    """Check structural invariants; an empty report means the topology is valid."""
    violations: list[str] = []
    ids = [b for b, _ in topology.buses]
    n = len(ids)

    if len(set(ids)) != n:
        dupes = sorted({b for b in ids if ids.count(b) > 1})
        violations.append(f"duplicate bus ids: {dupes}")
    if sorted(set(ids)) != list(range(n)):
        violations.append(f"bus ids must be contiguous 0..{n - 1}, got {sorted(set(ids))}")

    slack_ids = [b for b, k in topology.buses if k is BusKind.SLACK]
    if len(slack_ids) > 1:
        violations.append(f"multiple slack buses: {sorted(slack_ids)}")
    elif not slack_ids:
        violations.append("no slack bus")
    elif slack_ids[0] != SLACK_BUS:
        violations.append(f"slack bus must be id {SLACK_BUS}, got {slack_ids[0]}")

    id_set = set(ids)
    for br in topology.branches:
        if br.from_bus == br.to_bus:
            violations.append(f"self-loop branch at bus {br.from_bus}")
        for end in (br.from_bus, br.to_bus):
            if end not in id_set:
                violations.append(f"branch endpoint {end} is not a bus")
        if br.admittance.real < 0:
            violations.append(
                f"nonpassive branch {br.from_bus}-{br.to_bus}: Re(y) = {br.admittance.real}"
            )

    # Connectivity over valid branch endpoints only.
    if not violations or all("endpoint" not in v for v in violations):
        adjacency: dict[int, set[int]] = {b: set() for b in id_set}
        for br in topology.branches:
            if br.from_bus in id_set and br.to_bus in id_set and br.from_bus != br.to_bus:
                adjacency[br.from_bus].add(br.to_bus)
                adjacency[br.to_bus].add(br.from_bus)
        if id_set:
            seen = {min(id_set)}
            stack = [min(id_set)]
            while stack:
                node = stack.pop()
                for nxt in adjacency[node]:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            unreached = sorted(id_set - seen)
            if unreached:
                violations.append(f"disconnected buses: {unreached}")

    return ValidationReport(tuple(violations))


def build_admittance(topology: GridTopology) -> AdmittanceMatrix:
    """Assemble the nodal admittance matrix from branches and shunts.

    Raises :class:`InvalidTopology` if :func:`validate_topology` reports
    violations.
    """
    report = validate_topology(topology)
    if not report.ok:
        raise InvalidTopology("; ".join(report.violations))

    n = topology.n_bus
    y = np.zeros((n, n), dtype=complex)
    for br in topology.branches:
        f, t = br.from_bus, br.to_bus
        y[f, f] += br.admittance + br.shunt_from
        y[t, t] += br.admittance + br.shunt_to
        y[f, t] -= br.admittance
        y[t, f] -= br.admittance
    return AdmittanceMatrix(y)


def _reduced_inverse(y: np.ndarray, slack: int) -> np.ndarray:
    keep = [i for i in range(y.shape[0]) if i != slack]
    y_red = y[np.ix_(keep, keep)]
    try:
        x_red = np.linalg.inv(y_red)
    except np.linalg.LinAlgError as exc:
        raise SingularReducedMatrix(str(exc)) from exc
    residual = np.abs(y_red @ x_red - np.eye(len(keep))).max()
    if not np.isfinite(residual) or residual > 1e-6:
        raise SingularReducedMatrix(
            f"reduced admittance matrix is numerically singular (residual {residual:.2e})"
        )
    return x_red


def build_loss_matrix(y: AdmittanceMatrix, slack: int = SLACK_BUS) -> LossMatrix:
    """Invert the slack-reduced admittance matrix and pad with zeros.

    The returned matrix has the slack row/column exactly zero; the remaining
    block is the real part of the reduced inverse, symmetrized to remove
    inversion roundoff (the underlying operator is symmetric). Blocks default
    to the degenerate all-load partition; use ``partitioned`` to fix a
    load/green split.

    Raises :class:`SingularReducedMatrix` when the reduced matrix cannot be
    inverted, which signals a disconnected or degenerate network.
    """
    n = y.n_bus
    x_red = _reduced_inverse(np.asarray(y.y), slack)
    xr = x_red.real
    xr = (xr + xr.T) / 2.0

    x_full = np.zeros((n, n))
    keep = [i for i in range(n) if i != slack]
    x_full[np.ix_(keep, keep)] = xr

    load_order = tuple(keep)
    return LossMatrix(
        x_real=x_full,
        slack=slack,
        load_order=load_order,
        green_order=(),
        b=xr,
        m=np.zeros((len(keep), 0)),
        gsub=np.zeros((0, 0)),
    )


def loss_matrix_closed_form(y: AdmittanceMatrix) -> np.ndarray:
    """Rank-one-deflated inverse of the full admittance matrix (real part).

    Requires an invertible Y, which in practice means shunts are present
    (shunt-free rows sum to zero). Provided for cross-checking loss values
    against :func:`build_loss_matrix` on shunted networks; the reduced
    inverse is the primary construction because it guarantees an exactly
    zero slack row/column.
    """
    ym = np.asarray(y.y)
    n = y.n_bus
    try:
        y_inv = np.linalg.inv(ym)
    except np.linalg.LinAlgError as exc:
        raise SingularReducedMatrix(str(exc)) from exc
    residual = np.abs(ym @ y_inv - np.eye(n)).max()
    if not np.isfinite(residual) or residual > 1e-6:
        raise SingularReducedMatrix(
            f"admittance matrix is numerically singular (residual {residual:.2e}); "
            "the closed form needs shunts"
        )
    ones = np.ones(n)
    u = y_inv @ ones
    x = y_inv - np.outer(u, u) / (ones @ u)
    return x.real


def partition_blocks(x: LossMatrix, load, green) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Slice the load/green blocks out of the loss matrix.

    ``load`` and ``green`` must disjointly cover every non-slack bus.
    Ordering inside each block is ascending bus id.
    """
    load_set, green_set = set(load), set(green)
    overlap = load_set & green_set
    if overlap:
        raise PartitionMismatch(f"buses in both load and green sets: {sorted(overlap)}")
    nonslack = set(range(x.x_real.shape[0])) - {x.slack}
    missing = nonslack - load_set - green_set
    if missing:
        raise PartitionMismatch(f"non-slack buses missing from partition: {sorted(missing)}")
    extra = (load_set | green_set) - nonslack
    if extra:
        raise PartitionMismatch(f"partition names unknown or slack buses: {sorted(extra)}")

    load_idx = np.array(sorted(load_set), dtype=int)
    green_idx = np.array(sorted(green_set), dtype=int)
    b = x.x_real[np.ix_(load_idx, load_idx)]
    gsub = x.x_real[np.ix_(green_idx, green_idx)]
    m = x.x_real[np.ix_(load_idx, green_idx)]
    return b, m, gsub


def loss_matrix_from_topology(topology: GridTopology) -> LossMatrix:
    """Build the loss matrix with blocks split per the topology's bus kinds."""
    y = build_admittance(topology)
    base = build_loss_matrix(y, slack=SLACK_BUS)
    load = topology.buses_of_kind(BusKind.LOAD)
    green = topology.buses_of_kind(BusKind.GREEN)
    return base.partitioned(load, green)
