"""Best-fit-decreasing placement and its power-increase cost."""

import pytest
from hypothesis import given, settings, strategies as st

from dcsim import HostSnapshot, PlacementRequest, VmRequest, mbfd, power_increase


def snap(id=0, cap=1000.0, on=True, demand=0.0, ram=8192.0, storage=1024.0,
         p_max=250.0, k=0.7):
    return HostSnapshot(id=id, mips_capacity=cap, p_max_watts=p_max,
                        idle_fraction=k, powered_on=on, cpu_demand_mips=demand,
                        ram_free_mb=ram, storage_free_gb=storage)


def vm(id=0, demand=100.0, ram=128.0, storage=1.0):
    return VmRequest(id=id, demand_mips=demand, ram_mb=ram, storage_gb=storage)


def test_power_increase_on_host_is_slope_only():
    # linear model: increase on a running host is (1-k)*p_max*d/cap
    host = snap(cap=1000.0, demand=300.0)
    assert power_increase(host, 100.0) == pytest.approx(75.0 * 100.0 / 1000.0)


def test_power_increase_off_host_includes_idle():
    host = snap(cap=1000.0, on=False)
    assert power_increase(host, 100.0) == pytest.approx(175.0 + 7.5)


def test_power_increase_clamps_at_full_utilization():
    host = snap(cap=1000.0, demand=950.0)
    full = power_increase(host, 500.0)
    assert full == pytest.approx(75.0 * 50.0 / 1000.0)


def test_power_increase_rejects_negative_demand():
    with pytest.raises(ValueError):
        power_increase(snap(), -1.0)


def test_mbfd_prefers_running_host_over_activation():
    hosts = [snap(id=0, on=True), snap(id=1, on=False)]
    plan = mbfd(PlacementRequest(vms=[vm(id=0)], hosts=hosts))
    assert plan.assignments == {0: 0}


def test_mbfd_activates_when_no_running_host_fits():
    hosts = [snap(id=0, on=True, demand=950.0), snap(id=1, on=False)]
    plan = mbfd(PlacementRequest(vms=[vm(id=0, demand=100.0)], hosts=hosts))
    assert plan.assignments == {0: 1}


def test_mbfd_prefers_larger_capacity_for_smaller_slope():
    # same demand costs less power on the higher-MIPS host
    hosts = [snap(id=0, cap=1000.0), snap(id=1, cap=3000.0)]
    plan = mbfd(PlacementRequest(vms=[vm(id=0, demand=300.0)], hosts=hosts))
    assert plan.assignments == {0: 1}


def test_mbfd_places_by_decreasing_demand():
    seen = []
    hosts = [snap(id=0, cap=10000.0)]
    vms = [vm(id=0, demand=100.0), vm(id=1, demand=300.0), vm(id=2, demand=200.0)]
    plan = mbfd(PlacementRequest(vms=vms, hosts=hosts))
    assert set(plan.assignments) == {0, 1, 2}
    # order is observable through a capacity that only admits a prefix
    tight = [snap(id=0, cap=1000.0)]
    plan = mbfd(PlacementRequest(vms=vms, hosts=tight, upper_threshold=0.5))
    assert plan.assignments == {1: 0, 2: 0}
    assert plan.unplaced == {0}


def test_mbfd_ties_break_by_ascending_host_id():
    hosts = [snap(id=7), snap(id=3)]
    plan = mbfd(PlacementRequest(vms=[vm(id=0)], hosts=hosts))
    assert plan.assignments == {0: 3}


def test_mbfd_respects_upper_threshold():
    hosts = [snap(id=0, cap=1000.0)]
    plan = mbfd(PlacementRequest(vms=[vm(id=0, demand=600.0)], hosts=hosts,
                                 upper_threshold=0.5))
    assert plan.unplaced == {0}


def test_mbfd_respects_ram_and_storage():
    hosts = [snap(id=0, ram=64.0), snap(id=1, storage=0.5)]
    plan = mbfd(PlacementRequest(vms=[vm(id=0, ram=128.0, storage=1.0)], hosts=hosts))
    assert plan.unplaced == {0}
    assert plan.assignments == {}


def test_mbfd_excluded_hosts_never_receive():
    hosts = [snap(id=0), snap(id=1)]
    plan = mbfd(PlacementRequest(vms=[vm(id=0)], hosts=hosts,
                                 excluded_hosts=frozenset({0})))
    assert plan.assignments == {0: 1}


def test_mbfd_allow_power_on_false_skips_off_hosts():
    hosts = [snap(id=0, on=False), snap(id=1, on=False)]
    plan = mbfd(PlacementRequest(vms=[vm(id=0)], hosts=hosts,
                                 allow_power_on=False))
    assert plan.unplaced == {0}


def test_mbfd_commits_sequentially():
    # second VM must see the first one's demand
    hosts = [snap(id=0, cap=1000.0), snap(id=1, cap=1000.0)]
    vms = [vm(id=0, demand=600.0), vm(id=1, demand=600.0)]
    plan = mbfd(PlacementRequest(vms=vms, hosts=hosts))
    assert set(plan.assignments.values()) == {0, 1}


def test_mbfd_does_not_mutate_caller_snapshots():
    hosts = [snap(id=0, on=False)]
    mbfd(PlacementRequest(vms=[vm(id=0)], hosts=hosts))
    assert hosts[0].powered_on is False
    assert hosts[0].cpu_demand_mips == 0.0


def test_request_rejects_bad_threshold():
    with pytest.raises(ValueError):
        PlacementRequest(vms=[], hosts=[], upper_threshold=0.0)


hosts_strategy = st.lists(
    st.tuples(st.sampled_from([1000.0, 2000.0, 3000.0]), st.booleans()),
    min_size=1, max_size=4)
vms_strategy = st.lists(
    st.sampled_from([250.0, 500.0, 750.0, 1000.0]), min_size=1, max_size=8)


@settings(max_examples=200, deadline=None)
@given(hosts_strategy, vms_strategy, st.sampled_from([0.5, 0.7, 0.9, 1.0]))
def test_mbfd_never_exceeds_threshold_or_resources(host_params, demands, upper):
    hosts = [snap(id=i, cap=cap, on=on) for i, (cap, on) in enumerate(host_params)]
    vms = [vm(id=i, demand=d) for i, d in enumerate(demands)]
    plan = mbfd(PlacementRequest(vms=vms, hosts=hosts, upper_threshold=upper))
    load = {}
    for vm_id, host_id in plan.assignments.items():
        load[host_id] = load.get(host_id, 0.0) + demands[vm_id]
    for host in hosts:
        if host.id in load:
            assert load[host.id] <= upper * host.mips_capacity + 1e-9
    assert set(plan.assignments) | plan.unplaced == set(range(len(vms)))
