"""Power-aware best-fit-decreasing placement.

VMs are sorted by decreasing CPU demand and each is committed to the
feasible host whose power draw grows the least.  Activating an off host
costs its full idle power, so consolidation onto already-running,
power-efficient hosts falls out of the cost function.
"""

from dataclasses import dataclass, field, replace

from .model import HostState, PlacementPlan
from .power import PowerModelParams, power


@dataclass
class VmRequest:
    id: int
    demand_mips: float
    ram_mb: float
    storage_gb: float


@dataclass
class HostSnapshot:
    id: int
    mips_capacity: float
    p_max_watts: float
    idle_fraction: float
    powered_on: bool
    cpu_demand_mips: float
    ram_free_mb: float
    storage_free_gb: float

    @classmethod
    def from_state(cls, host: HostState, cpu_demand_mips, ram_used_mb, storage_used_gb):
        return cls(id=host.spec.id,
                   mips_capacity=host.spec.mips_capacity,
                   p_max_watts=host.spec.p_max_watts,
                   idle_fraction=host.spec.idle_fraction,
                   powered_on=host.powered_on,
                   cpu_demand_mips=cpu_demand_mips,
                   ram_free_mb=host.spec.ram_mb - ram_used_mb,
                   storage_free_gb=host.spec.storage_gb - storage_used_gb)


@dataclass
class PlacementRequest:
    vms: list
    hosts: list
    upper_threshold: float = 1.0
    allow_power_on: bool = True
    # hosts that may not receive any VM (e.g. sources being evacuated)
    excluded_hosts: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not 0.0 < self.upper_threshold <= 1.0:
            raise ValueError("upper_threshold must be in (0, 1]")


def power_increase(host: HostSnapshot, vm_demand_mips: float) -> float:
    """Growth in power draw if a VM demanding ``vm_demand_mips`` lands on ``host``.

    For an off host this includes the full idle component, which
    penalizes activation.
    """
    if vm_demand_mips < 0:
        raise ValueError("vm_demand_mips must be non-negative")
    params = PowerModelParams(host.p_max_watts, host.idle_fraction)
    u_after = min(1.0, (host.cpu_demand_mips + vm_demand_mips) / host.mips_capacity)
    if not host.powered_on:
        return power(params, u_after)
    u_before = min(1.0, host.cpu_demand_mips / host.mips_capacity)
    return power(params, u_after) - power(params, u_before)


def _feasible(host: HostSnapshot, vm: VmRequest, req: PlacementRequest) -> bool:
    if host.id in req.excluded_hosts:
        return False
    if not host.powered_on and not req.allow_power_on:
        return False
    if vm.ram_mb > host.ram_free_mb or vm.storage_gb > host.storage_free_gb:
        return False
    return host.cpu_demand_mips + vm.demand_mips <= req.upper_threshold * host.mips_capacity


def mbfd(req: PlacementRequest) -> PlacementPlan:
    """Place the requested VMs, minimizing each step's power increase.

    Placements commit sequentially: every decision updates the host
    snapshot seen by the VMs placed after it.  Ties on power increase
    break by ascending host id; VMs with equal demand process in
    ascending id order.  The caller's snapshots are not mutated.
    """
    hosts = sorted((replace(h) for h in req.hosts), key=lambda h: h.id)
    order = sorted(req.vms, key=lambda vm: (-vm.demand_mips, vm.id))
    assignments = {}
    unplaced = set()
    for vm in order:
        best = None
        best_delta = None
        for host in hosts:
            if not _feasible(host, vm, req):
                continue
            delta = power_increase(host, vm.demand_mips)
            if best is None or delta < best_delta:
                best, best_delta = host, delta
        if best is None:
            unplaced.add(vm.id)
            continue
        assignments[vm.id] = best.id
        best.powered_on = True
        best.cpu_demand_mips += vm.demand_mips
        best.ram_free_mb -= vm.ram_mb
        best.storage_free_gb -= vm.storage_gb
    return PlacementPlan(assignments=assignments, unplaced=unplaced)
