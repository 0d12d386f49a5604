"""Frame-driven simulation loop.

Each frame, in order: sample per-VM utilization, share host MIPS
proportionally and record SLA measurements, charge energy for the frame,
advance VM work (completed VMs leave the fleet), invoke the policy and
apply its migration plan, then adjust host power states.  SLA and energy
are therefore charged against the placement in force during the frame,
and the policy reacts to the loads it just observed.
"""

import math
from dataclasses import dataclass, field

from .model import FrameMetrics, HostState, RunMetrics, Scenario, VmState
from .power import EnergyAccumulator, accumulate, host_power
from .placement import HostSnapshot, PlacementRequest, VmRequest, mbfd
from .policies import PolicyConfig
from . import policies
from .workload import SeededRng, walk_utilization

# Policies that leave unused hosts off after the initial placement.
# NPA keeps the whole fleet at peak power by definition.  DVFS scales
# power with load but performs no consolidation at run time, so a host
# that empties out stays on at idle; the migrating policies switch
# emptied hosts off.
POWER_MANAGED = ("DVFS", "ST", "MM", "HPG", "RC")
CONSOLIDATING = ("ST", "MM", "HPG", "RC")


class InfeasibleScenarioError(RuntimeError):
    """The VM fleet cannot be placed at requested capacity."""


@dataclass
class SimulationState:
    clock_s: float
    frame_index: int
    hosts: list
    vms: list
    rng: SeededRng
    accumulator: EnergyAccumulator
    frames: list = field(default_factory=list)
    # current utilization fraction per VM id, advanced by the random walk
    utilization: dict = field(default_factory=dict)

    def active_vms(self):
        return [vm for vm in self.vms if not vm.completed]


def _policy_config(scenario: Scenario) -> PolicyConfig:
    return PolicyConfig(kind=scenario.policy,
                        lower_threshold=scenario.lower_threshold,
                        upper_threshold=scenario.upper_threshold)


def initial_placement(scenario: Scenario, seed=None) -> SimulationState:
    """Place the fleet at requested capacity (100% utilization assumed).

    Placement starts from an all-off fleet so the activation penalty
    packs VMs onto as few, as power-efficient hosts as possible.  Hosts
    that receive no VMs stay off under power-managed policies and are
    powered on under NPA.
    """
    snapshots = [HostSnapshot.from_state(HostState(spec=h, powered_on=False), 0.0, 0.0, 0.0)
                 for h in scenario.hosts]
    requests = [VmRequest(id=v.id, demand_mips=v.requested_mips,
                          ram_mb=v.ram_mb, storage_gb=v.storage_gb)
                for v in scenario.vms]
    plan = mbfd(PlacementRequest(vms=requests, hosts=snapshots, upper_threshold=1.0))
    if plan.unplaced:
        raise InfeasibleScenarioError(
            "cannot place %d VM(s) at requested capacity" % len(plan.unplaced))

    used = set(plan.assignments.values())
    power_managed = scenario.policy in POWER_MANAGED
    hosts = []
    for h in scenario.hosts:
        on = (h.id in used) if power_managed else True
        hosts.append(HostState(spec=h, powered_on=on))
    by_id = {h.spec.id: h for h in hosts}
    vms = []
    for v in scenario.vms:
        hid = plan.assignments[v.id]
        by_id[hid].resident_vms.append(v.id)
        vms.append(VmState(spec=v, host_id=hid, demand_mips=v.requested_mips,
                           remaining_work_mi=v.total_work_mi))
    rng = SeededRng(scenario.seed if seed is None else seed)
    return SimulationState(clock_s=0.0, frame_index=0, hosts=hosts, vms=vms,
                           rng=rng, accumulator=EnergyAccumulator())


def share_mips(host: HostState, demands) -> dict:
    """Allocate host capacity to demands, scaling proportionally on overload."""
    capacity = host.spec.mips_capacity
    total = sum(demands.values())
    if total <= capacity:
        return dict(demands)
    scale = capacity / total
    return {vm_id: d * scale for vm_id, d in demands.items()}


def step(state: SimulationState, scenario: Scenario, sampler=None):
    """Advance the simulation by one frame; returns the frame's metrics.

    ``sampler`` overrides utilization sampling for tests: a callable
    (vm_id, frame_index) -> fraction in [0, 1].
    """
    dt = scenario.frame_seconds
    active = state.active_vms()
    vm_by_id = {vm.spec.id: vm for vm in active}

    # 1. sample utilization: a reflected random walk over keyed uniform
    # draws, so the trace for (seed, vm, frame) is policy-independent
    for vm in active:
        vm_id = vm.spec.id
        if sampler is not None:
            u = sampler(vm_id, state.frame_index)
        else:
            draw = state.rng.keyed_u01(vm_id, state.frame_index)
            if state.frame_index == 0:
                u = draw
            else:
                u = walk_utilization(state.utilization[vm_id], draw,
                                     scenario.util_step)
        state.utilization[vm_id] = u
        vm.demand_mips = u * vm.spec.requested_mips

    # 2. proportional sharing + SLA accounting
    measurements = len(active)
    violations = 0
    shortfall_sum = 0.0
    allocations = {}
    for host in state.hosts:
        demands = {v: vm_by_id[v].demand_mips for v in host.resident_vms}
        alloc = share_mips(host, demands)
        allocations.update(alloc)
        for v, a in alloc.items():
            if a < demands[v]:
                violations += 1
                shortfall_sum += (demands[v] - a) / demands[v]

    # 3. energy for the frame; NPA draws peak power everywhere, always
    frame_wh_before = state.accumulator.total_wh
    for host in state.hosts:
        if scenario.policy == "NPA":
            p = host.spec.p_max_watts
        else:
            p = host_power(host, allocations)
        accumulate(state.accumulator, p, dt)
    frame_wh = state.accumulator.total_wh - frame_wh_before

    # 4. advance work; completed VMs leave their hosts for good
    by_id = {h.spec.id: h for h in state.hosts}
    for vm in active:
        executed = min(allocations[vm.spec.id] * dt, vm.remaining_work_mi)
        vm.remaining_work_mi -= executed
        if vm.remaining_work_mi <= 0.0:
            vm.remaining_work_mi = 0.0
            vm.completed = True
            by_id[vm.host_id].resident_vms.remove(vm.spec.id)
            vm.host_id = None
            vm.demand_mips = 0.0

    # 5. policy reallocation, applied atomically
    still_active = {vm.spec.id: vm for vm in active if not vm.completed}
    plan = policies.reallocate(_policy_config(scenario), state.hosts,
                               still_active, state.rng)
    for v, src, dst in plan.moves:
        if src is not None:
            by_id[src].resident_vms.remove(v)
        target = by_id[dst]
        target.powered_on = True
        target.resident_vms.append(v)
        still_active[v].host_id = dst

    # 6. power management
    if scenario.policy in CONSOLIDATING:
        for host in state.hosts:
            if host.powered_on and not host.resident_vms:
                host.powered_on = False

    state.frame_index += 1
    state.clock_s = state.frame_index * dt
    metrics = FrameMetrics(frame_index=state.frame_index - 1, energy_wh=frame_wh,
                           violation_events=violations, measurements=measurements,
                           shortfall_sum=shortfall_sum, migrations=len(plan.moves))
    state.frames.append(metrics)
    return metrics


def simulate(scenario: Scenario, seed=None, sampler=None):
    """Run to completion; returns (final state, aggregated RunMetrics)."""
    state = initial_placement(scenario, seed=seed)
    while state.active_vms():
        step(state, scenario, sampler=sampler)
    violations = sum(f.violation_events for f in state.frames)
    measurements = sum(f.measurements for f in state.frames)
    shortfall = math.fsum(f.shortfall_sum for f in state.frames)
    metrics = RunMetrics(
        energy_kwh=state.accumulator.total_wh / 1000.0,
        sla_violation_pct=100.0 * violations / measurements if measurements else 0.0,
        migration_count=sum(f.migrations for f in state.frames),
        avg_sla_pct=100.0 * shortfall / violations if violations else 0.0,
        sim_duration_s=state.clock_s)
    return state, metrics


def run(scenario: Scenario, seed=None, sampler=None) -> RunMetrics:
    """Simulate one seeded run and return its aggregated metrics."""
    return simulate(scenario, seed=seed, sampler=sampler)[1]
