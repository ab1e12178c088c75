"""Stochastic simulation of the two-species process.

Each particle carries an independent rate-1 exponential clock; by
superposition this is a single rate-N clock whose events pick a
particle uniformly at random.  An event moves the particle right with
probability p, left with q; the move happens only if allowed by the
species rules (first class displaces second class, everything else
blocks).  Blocked attempts still consume the event, which keeps the
event count Poisson(N t) regardless of the configuration.

Replicas run in fixed-size batches, one counter-based stream per batch
keyed by (seed, batch index), so results are bitwise reproducible and
independent of how batches are spread over worker threads.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

BATCH_SIZE = 32768


@dataclass
class ParticleState:
    """Sorted particle positions plus the rank (1-based, left to
    right) of the second-class particle; rank None means all particles
    are first class."""

    positions: list
    rank: int

    @classmethod
    def initial(cls, Y, second_class=True):
        positions = [int(v) for v in Y]
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise ValueError("positions must be strictly increasing")
        rank = len(positions) if second_class else None
        return cls(positions=positions, rank=rank)

    def tracked_position(self):
        if self.rank is None:
            return self.positions[-1]
        return self.positions[self.rank - 1]


def _attempt(state, params, particle, right, rng):
    """Apply one event to the state in place."""
    pos = state.positions
    n = len(pos)
    if right:
        target = pos[particle] + 1
        if particle + 1 < n and pos[particle + 1] == target:
            if state.rank == particle + 2:
                state.rank = particle + 1
            return
        pos[particle] = target
    else:
        target = pos[particle] - 1
        if particle > 0 and pos[particle - 1] == target:
            if state.rank == particle:
                state.rank = particle + 1
            return
        pos[particle] = target


def simulate_once(params, Y, t, rng_stream, track="second_class"):
    """One replica; returns the tracked particle's position at time t."""
    state = ParticleState.initial(Y, second_class=(track == "second_class"))
    n = len(state.positions)
    events = rng_stream.poisson(n * t)
    for _ in range(events):
        particle = int(rng_stream.integers(0, n))
        right = rng_stream.random() < params.p
        _attempt(state, params, particle, right, rng_stream)
    return state.tracked_position()


def _run_batch(params, ys, t, size, rng, track):
    """Vectorized batch of replicas sharing one stream.

    State per replica: the sorted position row and the 0-based rank of
    the second-class particle.  A swap only relabels the rank; a move
    into an empty site keeps the row sorted because the occupied case
    is excluded first.
    """
    n = len(ys)
    pos = np.tile(np.asarray(ys, dtype=np.int64), (size, 1))
    second = track == "second_class"
    rank = np.full(size, n - 1, dtype=np.int64)
    events = rng.poisson(n * t, size=size)
    steps = int(events.max()) if size else 0
    rows = np.arange(size)
    for k in range(steps):
        active = events > k
        u = rng.integers(0, n, size=size)
        right = rng.random(size) < params.p
        here = pos[rows, u]
        nb_r = pos[rows, np.minimum(u + 1, n - 1)]
        occ_r = (u < n - 1) & (nb_r == here + 1)
        nb_l = pos[rows, np.maximum(u - 1, 0)]
        occ_l = (u > 0) & (nb_l == here - 1)

        move = active & ((right & ~occ_r) | (~right & ~occ_l))
        delta = np.where(right, 1, -1)
        pos[rows[move], u[move]] = here[move] + delta[move]
        if second:
            swap = active & ((right & occ_r & (rank == u + 1))
                             | (~right & occ_l & (rank == u - 1)))
            rank[swap] = u[swap]
    if second:
        return pos[rows, rank]
    return pos[:, -1]


@dataclass(frozen=True)
class MCEstimate:
    """Empirical law over a contiguous range of positions.  Counts sum
    to the replica total, so the means sum to one by construction."""

    xs: np.ndarray
    counts: np.ndarray
    replicas: int
    seed: int

    def __post_init__(self):
        if int(self.counts.sum()) != self.replicas:
            raise ValueError("counts must account for every replica")

    @property
    def means(self):
        return self.counts / self.replicas

    @property
    def stderrs(self):
        m = self.means
        return np.sqrt(m * (1.0 - m) / self.replicas)

    def mean_of(self, x):
        a = int(self.xs[0])
        if a <= x <= int(self.xs[-1]):
            return float(self.counts[x - a]) / self.replicas
        return 0.0


def _worker_count(workers):
    if workers is not None:
        return max(1, int(workers))
    return max(1, int(os.environ.get("ASEP2_THREADS", "1")))


def estimate_pmf(params, Y, t, replicas, seed, track="second_class",
                 workers=None):
    """Monte Carlo estimate of the tracked particle's law at time t.

    Replicas are split into fixed batches; batch i uses a Philox
    stream keyed (seed, i), so the merged counts do not depend on the
    worker count or on scheduling order.
    """
    ys = tuple(int(v) for v in Y)
    if any(b <= a for a, b in zip(ys, ys[1:])):
        raise ValueError("positions must be strictly increasing")
    if replicas <= 0:
        raise ValueError("replicas must be positive")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if track not in ("second_class", "rightmost"):
        raise ValueError("track must be 'second_class' or 'rightmost'")

    sizes = [BATCH_SIZE] * (replicas // BATCH_SIZE)
    if replicas % BATCH_SIZE:
        sizes.append(replicas % BATCH_SIZE)

    def run(i):
        rng = np.random.Generator(
            np.random.Philox(key=np.array([seed, i], dtype=np.uint64)))
        return _run_batch(params, ys, t, sizes[i], rng, track)

    n_workers = _worker_count(workers)
    if n_workers == 1:
        finals = [run(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            finals = list(pool.map(run, range(len(sizes))))
    final = np.concatenate(finals) if finals else np.zeros(0, dtype=np.int64)

    lo = int(final.min())
    hi = int(final.max())
    counts = np.bincount(final - lo, minlength=hi - lo + 1)
    return MCEstimate(xs=np.arange(lo, hi + 1), counts=counts,
                      replicas=replicas, seed=seed)
