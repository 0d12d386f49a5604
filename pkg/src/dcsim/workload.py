"""Seeded, portable random number generation for workload sampling.

Everything stochastic in a run flows through one SeededRng.  The
generator is splitmix64 (Steele, Lea & Flood's 64-bit mixer): pure
integer arithmetic, identical streams on every platform and Python
version.  Platform default generators are deliberately not used.

Utilization samples are *keyed* rather than sequential: the draw for a
VM in a frame is a pure function of (seed, vm id, frame index).  Two
policies run against the same seed therefore see identical per-VM
workloads even when they migrate, complete, or power-manage
differently, which keeps cross-policy comparisons pointwise meaningful.
"""

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """splitmix64 finalizer: bijective 64-bit avalanche."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _mix_key(seed: int, *keys: int) -> int:
    h = _mix64(seed)
    for k in keys:
        h = _mix64(h ^ ((k * _GOLDEN) & _MASK64))
    return h


def _to_unit(word: int) -> float:
    # top 53 bits -> [0, 1)
    return (word >> 11) * (2.0 ** -53)


class SeededRng:
    """Deterministic 64-bit generator with draw-count bookkeeping."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._counter = 0
        self.draws = 0

    def next_u64(self) -> int:
        self._counter += 1
        self.draws += 1
        return _mix64((self.seed + self._counter * _GOLDEN) & _MASK64)

    def next_u01(self) -> float:
        return _to_unit(self.next_u64())

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        return int(self.next_u01() * n)

    def keyed_u01(self, *keys: int) -> float:
        """Uniform draw determined purely by (seed, keys); counted, not streamed."""
        self.draws += 1
        return _to_unit(_mix_key(self.seed, *keys))


def sample_utilization(rng: SeededRng) -> float:
    """One uniform CPU-utilization sample in [0, 1) from the sequential stream."""
    return rng.next_u01()


def utilization_at(seed: int, vm_id: int, frame_index: int) -> float:
    """Keyed utilization sample for a VM in a frame; pure in its arguments."""
    return _to_unit(_mix_key(seed & _MASK64, vm_id, frame_index))


# Default per-frame step of the utilization random walk, as a fraction of
# full CPU.  The walk reflects at 0 and 1, which preserves an exactly
# uniform marginal distribution at every frame while giving workloads
# the short-term stability of real applications.
DEFAULT_UTIL_STEP = 0.2


def reflect_unit(x: float) -> float:
    """Fold x into [0, 1] by reflection at the interval bounds."""
    x = x % 2.0
    return 2.0 - x if x > 1.0 else x


def walk_utilization(previous: float, draw: float, step: float) -> float:
    """Advance a reflected uniform random walk by one keyed draw in [0, 1)."""
    return reflect_unit(previous + step * (2.0 * draw - 1.0))


def utilization_walk(seed: int, vm_id: int, frame_index: int,
                     step: float = DEFAULT_UTIL_STEP) -> float:
    """Utilization of a VM at a frame under the reflected random walk.

    Frame 0 is a keyed uniform draw; each later frame moves by a keyed
    uniform increment in [-step, +step], reflected into [0, 1].  Pure in
    its arguments, so two policies sharing a seed see identical per-VM
    workload traces regardless of how they migrate or power-manage.
    """
    u = utilization_at(seed, vm_id, 0)
    for t in range(1, frame_index + 1):
        u = walk_utilization(u, utilization_at(seed, vm_id, t), step)
    return u


def child_rng(rng, run_index: int) -> SeededRng:
    """Derive an independent per-run stream from a master seed or SeededRng."""
    if run_index < 0:
        raise ValueError("run_index must be non-negative")
    seed = rng.seed if isinstance(rng, SeededRng) else int(rng)
    return SeededRng(_mix_key(seed, run_index))
