"""Keyed workload sampling: identical traces across policies.

Every VM's utilization is a pure function of (seed, vm id, frame), a
reflected random walk over keyed uniform draws. Two consequences worth
seeing:

 1. the trace does not depend on what any policy does, so policy
    comparisons are pointwise fair;
 2. the marginal distribution stays uniform at every frame, while
    consecutive frames stay close (real workloads do not teleport).
"""

from dcsim.workload import utilization_walk

SEED, VM = 42, 7

print("Utilization trace of VM %d under seed %d (step 0.2):" % (VM, SEED))
trace = [utilization_walk(SEED, VM, f, step=0.2) for f in range(20)]
for frame, u in enumerate(trace):
    bar = "#" * int(40 * u)
    print("  frame %2d  %.3f  %s" % (frame, u, bar))

jumps = [abs(b - a) for a, b in zip(trace, trace[1:])]
print()
print("Largest frame-to-frame jump: %.3f (never exceeds the step)" % max(jumps))

n = 2000
frame10 = [utilization_walk(SEED, vm, 10, step=0.2) for vm in range(n)]
print("Mean utilization across %d VMs at frame 10: %.3f (uniform -> 0.5)"
      % (n, sum(frame10) / n))
