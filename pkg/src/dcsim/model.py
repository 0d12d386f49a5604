"""Domain types shared by the simulator modules.

All types validate their invariants at construction time and raise
ValueError on violation.  HostState and VmState are the only mutable
types; they are mutated exclusively by the engine.
"""

from dataclasses import dataclass, field
from typing import Optional

POLICY_KINDS = ("NPA", "DVFS", "ST", "MM", "HPG", "RC")
TWO_THRESHOLD_KINDS = ("MM", "HPG", "RC")

HOST_MIPS_CLASSES = (1000.0, 2000.0, 3000.0)
VM_MIPS_CLASSES = (250.0, 500.0, 750.0, 1000.0)


@dataclass(frozen=True)
class HostSpec:
    id: int
    mips_capacity: float
    ram_mb: float
    storage_gb: float
    p_max_watts: float
    idle_fraction: float

    def __post_init__(self):
        if self.mips_capacity <= 0:
            raise ValueError("mips_capacity must be positive")
        if self.ram_mb <= 0:
            raise ValueError("ram_mb must be positive")
        if self.storage_gb <= 0:
            raise ValueError("storage_gb must be positive")
        if self.p_max_watts <= 0:
            raise ValueError("p_max_watts must be positive")
        if not 0.0 <= self.idle_fraction <= 1.0:
            raise ValueError("idle_fraction must be in [0, 1]")


@dataclass(frozen=True)
class VmSpec:
    id: int
    requested_mips: float
    ram_mb: float
    storage_gb: float
    total_work_mi: float

    def __post_init__(self):
        if self.requested_mips <= 0:
            raise ValueError("requested_mips must be positive")
        if self.total_work_mi <= 0:
            raise ValueError("total_work_mi must be positive")


@dataclass
class HostState:
    spec: HostSpec
    powered_on: bool = True
    resident_vms: list = field(default_factory=list)

    def __post_init__(self):
        if not self.powered_on and self.resident_vms:
            raise ValueError("a powered-off host cannot have resident VMs")
        if len(set(self.resident_vms)) != len(self.resident_vms):
            raise ValueError("duplicate VM id in resident_vms")


@dataclass
class VmState:
    spec: VmSpec
    host_id: Optional[int] = None
    demand_mips: float = 0.0
    remaining_work_mi: float = 0.0
    completed: bool = False

    def __post_init__(self):
        if not 0.0 <= self.demand_mips <= self.spec.requested_mips:
            raise ValueError("demand_mips must be in [0, requested_mips]")
        if not 0.0 <= self.remaining_work_mi <= self.spec.total_work_mi:
            raise ValueError("remaining_work_mi must be in [0, total_work_mi]")
        if self.completed != (self.remaining_work_mi == 0.0):
            raise ValueError("completed must mirror remaining_work_mi == 0")
        if self.completed and self.host_id is not None:
            raise ValueError("a completed VM cannot be placed")


@dataclass
class PlacementPlan:
    """Outcome of a placement pass: assigned VMs and the leftovers."""

    assignments: dict  # vm id -> host id
    unplaced: set      # vm ids with no feasible host

    def __post_init__(self):
        if self.unplaced & set(self.assignments):
            raise ValueError("assignments and unplaced must be disjoint")


@dataclass
class MigrationPlan:
    """List of (vm id, source host id or None, destination host id) moves."""

    moves: list

    def __post_init__(self):
        seen = set()
        for vm_id, src, dst in self.moves:
            if vm_id in seen:
                raise ValueError("a VM appears twice in the migration plan")
            seen.add(vm_id)
            if src == dst:
                raise ValueError("source and destination must differ")


@dataclass
class FrameMetrics:
    frame_index: int
    energy_wh: float
    violation_events: int
    measurements: int
    shortfall_sum: float
    migrations: int

    def __post_init__(self):
        if min(self.violation_events, self.measurements, self.migrations) < 0:
            raise ValueError("counts must be non-negative")
        if self.violation_events > self.measurements:
            raise ValueError("violation_events cannot exceed measurements")
        if self.energy_wh < 0:
            raise ValueError("energy_wh must be non-negative")
        if not 0.0 <= self.shortfall_sum <= self.violation_events:
            raise ValueError("shortfall_sum must be in [0, violation_events]")


@dataclass
class RunMetrics:
    energy_kwh: float
    sla_violation_pct: float
    migration_count: int
    avg_sla_pct: float
    sim_duration_s: float

    def __post_init__(self):
        if self.energy_kwh < 0:
            raise ValueError("energy_kwh must be non-negative")
        if not 0.0 <= self.sla_violation_pct <= 100.0:
            raise ValueError("sla_violation_pct must be in [0, 100]")
        if not 0.0 <= self.avg_sla_pct <= 100.0:
            raise ValueError("avg_sla_pct must be in [0, 100]")


@dataclass(frozen=True)
class Scenario:
    hosts: tuple
    vms: tuple
    policy: str
    lower_threshold: Optional[float] = None
    upper_threshold: Optional[float] = None
    frame_seconds: float = 30.0
    seed: int = 42
    runs: int = 10
    # per-frame step of the reflected utilization random walk
    util_step: float = 0.2

    def __post_init__(self):
        if not 0.0 < self.util_step <= 1.0:
            raise ValueError("util_step must be in (0, 1]")
        if self.policy not in POLICY_KINDS:
            raise ValueError("unknown policy %r" % (self.policy,))
        if self.policy in TWO_THRESHOLD_KINDS:
            if self.lower_threshold is None or self.upper_threshold is None:
                raise ValueError("%s requires lower and upper thresholds" % self.policy)
            if not 0.0 <= self.lower_threshold < self.upper_threshold <= 1.0:
                raise ValueError("need 0 <= lower < upper <= 1")
        elif self.policy == "ST":
            if self.upper_threshold is None or not 0.0 < self.upper_threshold <= 1.0:
                raise ValueError("ST requires an upper threshold in (0, 1]")
        if self.frame_seconds <= 0:
            raise ValueError("frame_seconds must be positive")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")


def default_paper_scenario(policy="NPA", lower_threshold=None, upper_threshold=None,
                           frame_seconds=30.0, seed=42, runs=10,
                           n_hosts=100, n_vms=290):
    """Build the default evaluation fleet: 100 heterogeneous hosts and 290 VMs.

    Host CPU classes (1000/2000/3000 MIPS) and VM CPU classes
    (250/500/750/1000 MIPS) are assigned round-robin by index, giving a
    deterministic, approximately uniform mix.
    """
    hosts = tuple(
        HostSpec(id=i,
                 mips_capacity=HOST_MIPS_CLASSES[i % len(HOST_MIPS_CLASSES)],
                 ram_mb=8192.0, storage_gb=1024.0,
                 p_max_watts=250.0, idle_fraction=0.7)
        for i in range(n_hosts)
    )
    vms = tuple(
        VmSpec(id=i,
               requested_mips=VM_MIPS_CLASSES[i % len(VM_MIPS_CLASSES)],
               ram_mb=128.0, storage_gb=1.0,
               total_work_mi=150000.0)
        for i in range(n_vms)
    )
    return Scenario(hosts=hosts, vms=vms, policy=policy,
                    lower_threshold=lower_threshold,
                    upper_threshold=upper_threshold,
                    frame_seconds=frame_seconds, seed=seed, runs=runs)
