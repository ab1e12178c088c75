"""Exact master-equation oracle on a truncated window.

The process restricted to a finite window is a finite CTMC, and the
window can be sized so the probability of ever touching its boundary is
below any requested eps (same Poisson argument as the window helper in
the dist module).  Uniformization then gives the exact law at time t as
a Poisson-weighted power series of a substochastic matrix: no time
stepping, no eigendecomposition, errors only from the two controlled
truncations.

Any attempt that would leave the window routes its rate to a single
absorbing alarm state; mass found there above eps raises instead of
silently polluting the answer.
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np
from scipy import sparse

from .dist import DistributionTable, poisson_window_halfwidth


class WindowTooSmallError(ArithmeticError):
    """Probability mass reached the window boundary above the eps
    budget; enlarge the window or lower t."""


@dataclass(frozen=True)
class StateSpace:
    """All states (strictly increasing positions in the window, rank of
    the second-class particle) with index maps both ways."""

    window: tuple
    n_particles: int
    states: tuple
    index: dict

    @classmethod
    def build(cls, window, n_particles):
        a, b = int(window[0]), int(window[1])
        if b - a + 1 < n_particles:
            raise ValueError("window cannot hold the particles")
        states = []
        for pos in combinations(range(a, b + 1), n_particles):
            for rank in range(1, n_particles + 1):
                states.append((pos, rank))
        index = {s: i for i, s in enumerate(states)}
        expected = comb(b - a + 1, n_particles) * n_particles
        assert len(states) == expected
        return cls(window=(a, b), n_particles=n_particles,
                   states=tuple(states), index=index)

    def __len__(self):
        return len(self.states)


@dataclass(frozen=True)
class GeneratorMatrix:
    """Sparse generator over the state space plus one trailing alarm
    row/column.  Rows sum to zero; the alarm row is all zero."""

    matrix: sparse.csr_matrix
    alarm_index: int


def build_generator(params, space):
    p, q = params.p, params.q
    a, b = space.window
    n = space.n_particles
    alarm = len(space)
    rows, cols, vals = [], [], []

    def add(i, j, rate):
        rows.append(i)
        cols.append(j)
        vals.append(rate)
        rows.append(i)
        cols.append(i)
        vals.append(-rate)

    for i, (pos, rank) in enumerate(space.states):
        for r in range(n):
            species = 1 if r + 1 == rank else 2
            # right attempt, rate p
            target = pos[r] + 1
            if target > b:
                add(i, alarm, p)
            elif r + 1 < n and pos[r + 1] == target:
                if species == 2 and rank == r + 2:
                    # first-class particle displaces the second-class
                    # one; positions stay, the "1" moves down one rank
                    add(i, space.index[(pos, r + 1)], p)
                # otherwise blocked: no transition
            else:
                new = pos[:r] + (target,) + pos[r + 1:]
                add(i, space.index[(new, rank)], p)
            # left attempt, rate q
            target = pos[r] - 1
            if target < a:
                add(i, alarm, q)
            elif r > 0 and pos[r - 1] == target:
                if species == 2 and rank == r:
                    add(i, space.index[(pos, r + 1)], q)
            else:
                new = pos[:r] + (target,) + pos[r + 1:]
                add(i, space.index[(new, rank)], q)

    m = sparse.csr_matrix(
        (vals, (rows, cols)), shape=(alarm + 1, alarm + 1))
    return GeneratorMatrix(matrix=m, alarm_index=alarm)


@dataclass(frozen=True)
class StateVector:
    """Law over the state space at a fixed time, with the truncation
    bookkeeping evolve used to produce it."""

    space: StateSpace
    data: np.ndarray
    alarm_mass: float
    truncation_order: int

    def probability_of(self, positions, rank):
        return float(self.data[self.space.index[(tuple(positions), rank)]])


def evolve(params, Y, t, epsilon=1e-12, window=None):
    """Exact law of the process at time t on a bounded window.

    P(t) = sum_k e^(-Lt) (Lt)^k / k! U^k applied to the point mass at
    the initial state, with L = N and U = I + G/L.  The series stops
    when the remaining Poisson tail is below the eps budget; boundary
    mass above the budget raises WindowTooSmallError.
    """
    ys = tuple(int(v) for v in Y)
    n = len(ys)
    if any(b2 <= a2 for a2, b2 in zip(ys, ys[1:])):
        raise ValueError("positions must be strictly increasing")
    if n > 3:
        raise ValueError("state space grows combinatorially; N <= 3 only")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    if window is None:
        half = poisson_window_halfwidth(n, t, epsilon) + 1
        window = (ys[0] - half, ys[-1] + half)
    space = StateSpace.build(window, n)
    gen = build_generator(params, space)

    lam = float(n)
    size = gen.matrix.shape[0]
    # the generator holds rates row -> column; acting on a column
    # vector of probabilities needs the transpose
    u = (sparse.identity(size, format="csr")
         + gen.matrix.transpose().tocsr() / lam)

    v = np.zeros(size)
    v[space.index[(ys, n)]] = 1.0
    out = np.zeros(size)

    mu = lam * t
    weight = np.exp(-mu)
    accumulated = 0.0
    tail_budget = min(epsilon, 1e-12) / 2.0
    k = 0
    out += weight * v
    accumulated += weight
    while 1.0 - accumulated > tail_budget:
        k += 1
        v = u @ v
        weight = weight * mu / k
        out += weight * v
        accumulated += weight
        if k > 1000 * (1 + int(mu)):
            raise RuntimeError("uniformization failed to converge")

    alarm_mass = float(out[gen.alarm_index])
    if alarm_mass > epsilon:
        raise WindowTooSmallError(
            f"boundary mass {alarm_mass:g} exceeds eps = {epsilon:g}")
    return StateVector(space=space, data=out[:gen.alarm_index],
                       alarm_mass=alarm_mass, truncation_order=k)


def second_class_marginal(vector):
    """Marginal law of the second-class particle's position: sum the
    state probabilities grouped by the position its rank points at."""
    space = vector.space
    a, b = space.window
    probs = np.zeros(b - a + 1)
    for (pos, rank), value in zip(space.states, vector.data):
        probs[pos[rank - 1] - a] += value
    budget = vector.alarm_mass + 1e-12
    size = b - a + 1
    return DistributionTable(
        xs=np.arange(a, b + 1),
        probabilities=probs,
        error_estimates=np.full(size, budget),
        imag_residuals=np.zeros(size),
        window=(a, b),
    )


def joint_position_marginal(vector):
    """Law of the sorted position vector irrespective of the rank of
    the second-class particle (the single-species law when projected)."""
    space = vector.space
    out = {}
    for (pos, rank), value in zip(space.states, vector.data):
        out[pos] = out.get(pos, 0.0) + value
    return out
