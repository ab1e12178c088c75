"""Position laws of the two-species process via contour integrals.

Three closed forms are evaluated here: transition probabilities as
permutation sums over polydisc integrals, the second-class particle law
as a sum over nonempty index subsets, and the rightmost-particle law of
the single-species process in the same subset form with its own
coefficients.

A note on precision.  Every axis of a subset integrand carries
xi^(x - y_u - 1), so at the left tail of a position window the
integrand's modulus is astronomically larger than the value the phases
cancel down to.  Window bounds follow from the fact that each sorted
position moves only when the particle currently holding that rank
rings, a rate-1 clock, so its displacement is dominated by a Poisson(t)
count.  At the 1e-10 tail that puts |x - y_u| near 16 for t = 1, where
the lost digits exceed what float64 can spare.  Grid evaluation
therefore runs in extended precision (clongdouble), which is cheap at
these grid sizes and recovers the deep-tail values.
"""

import warnings
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.stats import poisson

from .algebra import (ModelParams, amplitude, component_amplitude_N3,
                      factor_T, reduced_word, vanishes)
from .qcomb import (coefficient_cS, coefficient_cS_rightmost,
                    coefficient_cS_tilde, subsets_nonempty)
from .quadrature import (Contour, QuadratureResult, default_contour,
                         integrate_polydisc, unit_nodes, wide_points)

ENVELOPE_TIME = 5.0
ENVELOPE_SPAN = 30


class EnvelopeWarning(UserWarning):
    """Inputs are outside the documented validity envelope; results come
    with no accuracy promise and the error estimates deserve a look."""


class TableAlarmError(ArithmeticError):
    """A computed table violated one of its numerical floors, most
    likely a conditioning failure on the chosen contour."""


def _check_envelope(t, span):
    if t > ENVELOPE_TIME:
        warnings.warn(f"t = {t} exceeds the documented envelope "
                      f"t <= {ENVELOPE_TIME}", EnvelopeWarning, stacklevel=3)
    if span > ENVELOPE_SPAN:
        warnings.warn(f"position offset {span} exceeds the documented "
                      f"envelope {ENVELOPE_SPAN}", EnvelopeWarning,
                      stacklevel=3)


def _validate_positions(positions):
    out = tuple(int(v) for v in positions)
    if len(out) < 1:
        raise ValueError("need at least one particle")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ValueError("positions must be strictly increasing")
    return out


@dataclass(frozen=True)
class InitialConfig:
    """Ordered initial positions; the second-class particle starts
    rightmost, all others are first class."""

    positions: tuple

    def __post_init__(self):
        object.__setattr__(self, "positions",
                           _validate_positions(self.positions))

    def __len__(self):
        return len(self.positions)


@dataclass(frozen=True)
class TargetConfig:
    """Ordered positions of a target configuration."""

    positions: tuple

    def __post_init__(self):
        object.__setattr__(self, "positions",
                           _validate_positions(self.positions))

    def __len__(self):
        return len(self.positions)


def _positions(obj):
    if isinstance(obj, (InitialConfig, TargetConfig)):
        return obj.positions
    return _validate_positions(obj)


@dataclass(frozen=True)
class KernelFunctions:
    """The three integrand building blocks bound to one (t, x, Y_S).

    J has simple poles only at xi = 1; I = (prod xi - 1) * J; W is the
    free-evolution kernel, entire in xi and 1/xi jointly away from 0.
    """

    W: callable
    I: callable
    J: callable


def make_kernels(params, y_s, t, x):
    y_s = tuple(int(v) for v in y_s)

    def kernel_j(*grids):
        out = 1.0
        for g in grids:
            out = out / (g - 1.0)
        return out

    def kernel_i(*grids):
        prod = 1.0
        for g in grids:
            prod = prod * g
        return (prod - 1.0) * kernel_j(*grids)

    def kernel_w(*grids):
        out = 1.0
        for g, y in zip(grids, y_s):
            rate = params.p / g + params.q * g - 1.0
            out = out * g ** (x - y - 1) * np.exp(rate * t)
        return out

    return KernelFunctions(W=kernel_w, I=kernel_i, J=kernel_j)


def poisson_window_halfwidth(n_particles, t, eps=1e-10):
    """Smallest K with n * P(Poisson(t) >= K) < eps.

    Each sorted position changes only on rings of the particle holding
    that rank, so its displacement is dominated by a Poisson(t) count;
    the union bound over the n sorted positions confines every particle,
    and with it the second-class particle, to [y_1 - K, y_N + K] up to
    mass eps.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    k = 1
    while n_particles * poisson.sf(k - 1, t) >= eps:
        k += 1
    return k


def max_admissible_radius(params):
    """The radius where r(1 + qr) = p; below it every scattering
    denominator on the polydisc stays away from zero."""
    p, q = params.p, params.q
    return (np.sqrt(1.0 + 4.0 * p * q) - 1.0) / (2.0 * q)


TABLE_NODES = {1: 256, 2: 256, 3: 256, 4: 192, 5: 96}
TABLE_RADIUS_FRACTION = {1: 0.85, 2: 0.85, 3: 0.85, 4: 0.76, 5: 0.70}


def table_contour(params, k, nodes=None):
    """Contour tuned for position tables.

    Two error sources pull the radius in opposite directions.  Deep
    left-tail entries lose accuracy to roundoff like r^(k (x - y_N)),
    which wants the radius large; the scattering-factor pole approaches
    the contour as r nears the admissible maximum, and the trapezoid
    rule's aliasing error then decays only like a high power of the
    pole-distance ratio, which wants the radius small or the node count
    large.  A calibrated fraction of the admissible maximum with a
    generous node count meets both: checked against the master-equation
    oracle, position tables come out well below 1e-9 absolute error for
    N <= 3 over 1e-8-tail windows.  Four-particle tables run against an
    extended-double conditioning floor near 1e-6 over 1e-6-tail windows,
    which the per-entry error estimates track honestly; deeper windows
    trip the table alarm rather than return unvouched digits.
    """
    if nodes is None:
        nodes = TABLE_NODES[k]
    fraction = TABLE_RADIUS_FRACTION[k]
    return Contour(radius=fraction * max_admissible_radius(params),
                   nodes=nodes)


def subset_integral(params, Y, t, x, subset, contour=None):
    """The building block of the position laws: for a nonempty subset S
    of particle indices, the |S|-fold integral of
    (prod of T over ordered pairs in S) * I(xi_S) * W_{t,x,Y_S}(xi_S).
    """
    ys = _positions(Y)
    n = len(ys)
    s = tuple(sorted(set(int(u) for u in subset)))
    if not s or s[0] < 1 or s[-1] > n:
        raise ValueError("subset must be a nonempty subset of 1..N")
    k = len(s)
    if contour is None:
        contour = default_contour(params, k)
    d = int(x) - ys[-1]
    offs = [ys[-1] - ys[u - 1] for u in s]

    def f(*grids):
        total = None
        prod_all = None
        for g, o in zip(grids, offs):
            rate = params.p / g + params.q * g - 1.0
            v = g ** (d + o - 1) * np.exp(rate * t) / (g - 1.0)
            total = v if total is None else total * v
            prod_all = g if prod_all is None else prod_all * g
        total = total * (prod_all - 1.0)
        for i in range(k):
            for j in range(i + 1, k):
                total = total * factor_T(params, grids[i], grids[j])
        return total

    return integrate_polydisc(f, k, contour, wide=True)


def _law_value(params, Y, t, x, coefficient, max_n, contour):
    ys = _positions(Y)
    n = len(ys)
    if n > max_n:
        raise ValueError(f"N = {n} exceeds the supported N <= {max_n}")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    _check_envelope(t, max(abs(int(x) - y) for y in ys))
    value = 0.0 + 0.0j
    err = 0.0
    nodes_used = 0
    for s in subsets_nonempty(n):
        c = coefficient(params, n, s)
        if c == 0.0:
            continue
        # each subset integral has its own dimension, so the default
        # rule is sized per subset, not by the particle count
        use = contour if contour is not None else default_contour(
            params, len(s))
        res = subset_integral(params, Y, t, x, s, use)
        value += c * res.value
        err += abs(c) * res.error_estimate
        nodes_used = max(nodes_used, use.nodes)
    return QuadratureResult(value=value, error_estimate=err,
                            nodes_used=nodes_used)


def second_class_pmf(params, Y, t, x, contour=None):
    """P(eta(t) = x): the law of the second-class particle's position,
    as the coefficient-weighted sum of the 2^N - 1 subset integrals.
    At p = 1/2 every coefficient except the one of S = {N} vanishes and
    the law collapses to the symmetric single-walker law."""
    return _law_value(params, Y, t, x, coefficient_cS, 5, contour)


def rightmost_single_species_pmf(params, Y, t, x, contour=None):
    """Law of the rightmost particle's position in the single-species
    process started from Y, in the same subset form."""
    return _law_value(params, Y, t, x, coefficient_cS_rightmost, 5, contour)


def symmetric_pmf(y_n, t, x, contour=None):
    """The p = 1/2 law: a single contour integral, analytically equal to
    e^{-t} I_{x - y_N}(t).

    The integrand is entire except at the origin, so the radius is free
    in (0, 1); 0.8 keeps the rule well conditioned over |x - y_N| <= 30.
    """
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if contour is None:
        contour = Contour(radius=0.8, nodes=64)
    d = int(x) - int(y_n)
    _check_envelope(t, abs(d))

    def f(g):
        return g ** (d - 1) * np.exp((0.5 / g + 0.5 * g - 1.0) * t)

    return integrate_polydisc(f, 1, contour, wide=True)


def n3_expansion_coefficients(params):
    """The seven subset coefficients of the fully expanded N = 3 law,
    kept in their factored literal form as a regression reference."""
    p, q = params.p, params.q
    return {
        (1, 2, 3): (q - p) ** 2,
        (1, 2): (q - p) ** 2 / p ** 2,
        (1, 3): (q / p) * (q - p),
        (2, 3): q - p,
        (1,): (q / p ** 2) * (q - p),
        (2,): (q - p) / p,
        (3,): 1.0,
    }


def n3_expanded_pmf(params, Y, t, x, contour=None):
    """The N = 3 law written out term by term with literal coefficients;
    must agree with second_class_pmf at N = 3."""
    ys = _positions(Y)
    if len(ys) != 3:
        raise ValueError("the expanded form is specific to N = 3")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if contour is None:
        contour = default_contour(params, 3)
    value = 0.0 + 0.0j
    err = 0.0
    for s, c in n3_expansion_coefficients(params).items():
        if c == 0.0:
            continue
        res = subset_integral(params, Y, t, x, s, contour)
        value += c * res.value
        err += abs(c) * res.error_estimate
    return QuadratureResult(value=value, error_estimate=err,
                            nodes_used=contour.nodes)


@dataclass(frozen=True)
class DistributionTable:
    """Probability table over an integer window with per-entry
    diagnostics.  probabilities are real parts; imag_residuals record
    how far from real the raw integrals came back."""

    xs: np.ndarray
    probabilities: np.ndarray
    error_estimates: np.ndarray
    imag_residuals: np.ndarray
    window: tuple

    def __post_init__(self):
        n = len(self.xs)
        if any(len(a) != n for a in (self.probabilities,
                                     self.error_estimates,
                                     self.imag_residuals)):
            raise ValueError("column lengths disagree")
        if n and (self.xs[0] != self.window[0]
                  or self.xs[-1] != self.window[1]):
            raise ValueError("window does not match the x column")
        # The alarms fire when the numbers are wrong beyond what the
        # table's own error estimates can explain, or when the estimates
        # themselves say the quadrature lost control.  Entry-level
        # estimates come from a half-node comparison, so they honestly
        # track both aliasing and the roundoff floor.
        budget = float(self.error_estimates.sum()) if n else 0.0
        if budget > 1e-3:
            raise TableAlarmError(
                f"summed error estimate {budget:.2e} exceeds 1e-3; the "
                "contour is not resolving this table")
        worst = float(self.error_estimates.max()) if n else 0.0
        neg_floor = max(1e-9, 10.0 * worst)
        if n and float(self.probabilities.min()) < -neg_floor:
            raise TableAlarmError(
                f"probability below the -{neg_floor:.1e} numerical floor")
        if float(self.probabilities.sum()) > 1.0 + max(1e-8, 10.0 * budget):
            raise TableAlarmError(
                "window total exceeds 1 plus the error budget")

    @property
    def max_imag_residual(self):
        return float(self.imag_residuals.max()) if len(self.xs) else 0.0

    def probability(self, x):
        lo, hi = self.window
        if not lo <= x <= hi:
            raise KeyError(f"x = {x} outside window [{lo}, {hi}]")
        return float(self.probabilities[int(x) - lo])


def _axis_vector(params, xi, offset, t, nodes):
    """Static per-axis factor of the binned engine: everything except
    the xi^d powers that vary across the table."""
    p = np.longdouble(params.p)
    q = np.longdouble(params.q)
    rate = p / xi + q * xi - 1.0
    return (xi ** (offset - 1) * np.exp(rate * np.longdouble(t))
            / (xi - 1.0) * xi / nodes)


def _index_sum_bins(params, offs, t, contour):
    """One pass over the subset's tensor grid, folded into M bins.

    Every axis carries the same xi^d power across a table, so the grid
    sum at offset d collapses to r^{kd} * sum_s B[s] w^{sd} with w the
    M-th root of unity and B[s] the sum of grid values whose node
    indices total s mod M.  One pass serves the whole window.  The
    half-resolution bins reuse the even-index nodes for the error
    estimate.  Streaming over axis 0 keeps memory at M^{k-1} values.
    """
    k = len(offs)
    m_nodes = contour.nodes
    xi = wide_points(contour)
    vs = [_axis_vector(params, xi, o, t, m_nodes) for o in offs]

    if k == 1:
        return vs[0].copy(), 2.0 * vs[0][::2].copy()

    # static part over axes 1..k-1, pairwise couplings included
    static = vs[1]
    for j in range(2, k):
        shape = [1] * (j - 1) + [m_nodes]
        static = static[..., None] * vs[j].reshape(shape)
        for i in range(1, j):
            t_shape = [1] * (j - 1)
            t_shape[i - 1] = m_nodes
            t_shape.append(m_nodes)
            pair = factor_T(params, xi.reshape([m_nodes] + [1] * (j - i)),
                            xi.reshape([1] * (j - i) + [m_nodes]))
            static = static * pair.reshape(t_shape)

    rest_shape = (m_nodes,) * (k - 1)
    idx = np.indices(rest_shape).sum(axis=0).ravel() % m_nodes
    order = np.argsort(idx, kind="stable")
    starts = np.searchsorted(idx[order], np.arange(m_nodes))

    half = m_nodes // 2
    half_sl = (slice(None, None, 2),) * (k - 1)
    idx_h = (np.indices(tuple(half for _ in rest_shape)).sum(axis=0)
             .ravel() % half)
    order_h = np.argsort(idx_h, kind="stable")
    starts_h = np.searchsorted(idx_h[order_h], np.arange(half))

    bins = np.zeros(m_nodes, dtype=np.clongdouble)
    bins_h = np.zeros(half, dtype=np.clongdouble)
    for i in range(m_nodes):
        cross = factor_T(params, xi[i], xi)
        slab = static * vs[0][i]
        for j in range(k - 1):
            shape = [1] * (k - 1)
            shape[j] = m_nodes
            slab = slab * cross.reshape(shape)
        part = np.add.reduceat(slab.ravel()[order], starts)
        bins += np.roll(part, i)
        if i % 2 == 0:
            part_h = np.add.reduceat(slab[half_sl].ravel()[order_h],
                                     starts_h)
            bins_h += np.roll(part_h, i // 2)
    bins_h *= np.longdouble(2.0) ** k
    return bins, bins_h


def _profile_from_bins(bins, bins_h, radius, k, ds):
    """Evaluate the binned sums at each window offset d, with the
    (prod xi - 1) coupling restored from the bin index."""
    m_nodes = len(bins)
    half = len(bins_h)
    r = np.longdouble(radius)
    z = unit_nodes(m_nodes, wide=True)
    z_h = unit_nodes(half, wide=True)
    core = bins * (r ** k * z - 1.0)
    core_h = bins_h * (r ** k * z_h - 1.0)
    vals = np.empty(len(ds), dtype=np.clongdouble)
    vals_h = np.empty(len(ds), dtype=np.clongdouble)
    for i, d in enumerate(ds):
        d = int(d)
        scale = r ** (k * d)
        vals[i] = scale * np.dot(core, z ** d)
        vals_h[i] = scale * np.dot(core_h, z_h ** d)
    return vals, vals_h


def _law_table(params, Y, t, coefficient, contour, window, eps):
    ys = _positions(Y)
    n = len(ys)
    if n > 5:
        raise ValueError("N <= 5 supported")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if window is None:
        k_half = poisson_window_halfwidth(n, t, eps)
        window = (ys[0] - k_half, ys[-1] + k_half)
    lo, hi = int(window[0]), int(window[1])
    if hi < lo:
        raise ValueError("empty window")
    if contour is None:
        contour = table_contour(params, n)
    _check_envelope(t, max(abs(lo - ys[-1]), abs(hi - ys[0])))

    ds = np.arange(lo - ys[-1], hi - ys[-1] + 1)
    totals = np.zeros(len(ds), dtype=np.clongdouble)
    totals_h = np.zeros(len(ds), dtype=np.clongdouble)
    for s in subsets_nonempty(n):
        c = coefficient(params, n, s)
        if c == 0.0:
            continue
        offs = [ys[-1] - ys[u - 1] for u in s]
        bins, bins_h = _index_sum_bins(params, offs, t, contour)
        vals, vals_h = _profile_from_bins(bins, bins_h, contour.radius,
                                          len(s), ds)
        totals += np.clongdouble(c) * vals
        totals_h += np.clongdouble(c) * vals_h

    return DistributionTable(
        xs=np.arange(lo, hi + 1),
        probabilities=totals.real.astype(np.float64),
        error_estimates=np.abs(totals - totals_h).astype(np.float64),
        imag_residuals=np.abs(totals.imag).astype(np.float64),
        window=(lo, hi),
    )


def second_class_table(params, Y, t, contour=None, window=None, eps=1e-8):
    """Table of P(eta(t) = x) over an integer window.

    With window=None the window is the Poisson-bounded one at tail mass
    eps.  Exponents enter only as differences against Y, so shifting Y
    and the window together by any integer reproduces the same numbers
    bit for bit.
    """
    return _law_table(params, Y, t, coefficient_cS, contour, window, eps)


def rightmost_single_species_table(params, Y, t, contour=None, window=None,
                                   eps=1e-8):
    """Table of the single-species rightmost-particle law over a
    window; same engine, different coefficients."""
    return _law_table(params, Y, t, coefficient_cS_rightmost, contour,
                      window, eps)


def transition_probability(params, Y, X, n, t, contour=None):
    """P_Y(X, nu_n; t) by the permutation-sum contour formula.

    Permutations with sigma^{-1}(N) > n contribute exactly zero and are
    skipped before any quadrature.  N = 4 runs in double precision to
    keep the tensor grid affordable; smaller N runs wide.
    """
    ys = _positions(Y)
    xs = _positions(X)
    n_part = len(ys)
    if len(xs) != n_part:
        raise ValueError("X and Y must have the same length")
    if not 1 <= n <= n_part:
        raise ValueError("sector index n out of range")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if n_part > 4:
        raise ValueError("exact evaluation supports N <= 4")
    if contour is None:
        contour = default_contour(params, n_part)
    _check_envelope(t, max(abs(a - b) for a in xs for b in ys))

    active = [sigma for sigma in permutations(range(1, n_part + 1))
              if not vanishes(sigma, n)]
    words = {sigma: reduced_word(sigma) for sigma in active}
    wide = n_part <= 3

    def f(*grids):
        expf = None
        for g in grids:
            e = np.exp((params.p / g + params.q * g - 1.0) * t)
            expf = e if expf is None else expf * e
        total = None
        for sigma in active:
            amp = amplitude(params, words[sigma], grids, n)
            mono = None
            for i, a in enumerate(sigma):
                powr = xs[i] - ys[a - 1] - 1
                piece = grids[a - 1] ** powr
                mono = piece if mono is None else mono * piece
            term = amp * mono
            total = term if total is None else total + term
        return total * expf

    return integrate_polydisc(f, n_part, contour, wide=wide)


def _component_config_sum(params, ys, t, x, slot, sign, pin, lower, contour):
    """Sum of a signed transition-probability component over all N = 3
    configurations with the pin-th coordinate held at x.

    Coordinates above the pin are summed to infinity in closed form
    (the geometric series converges on the small contour); coordinates
    below the pin are truncated at `lower` and summed by the finite
    geometric formula.
    """
    x = int(x)

    def f(*grids):
        expf = None
        for g in grids:
            e = np.exp((params.p / g + params.q * g - 1.0) * t)
            expf = e if expf is None else expf * e
        total = None
        for sigma in permutations((1, 2, 3)):
            amp = component_amplitude_N3(params, sigma, grids, slot, sign)
            if isinstance(amp, float) and amp == 0.0:
                continue
            pref = None
            for j, a in enumerate(sigma):
                piece = grids[a - 1] ** (-ys[a - 1] - 1)
                pref = piece if pref is None else pref * piece
            pinned = grids[sigma[pin - 1] - 1] ** x
            if pin == 3:
                ga = grids[sigma[0] - 1]
                gb = grids[sigma[1] - 1]
                gab = ga * gb
                sums = (ga ** lower * (gb ** lower - gb ** x) / (1.0 - gb)
                        - (gab ** lower - gab ** x) / (1.0 - gab)) \
                    / (1.0 - ga)
            elif pin == 2:
                ga = grids[sigma[0] - 1]
                gc = grids[sigma[2] - 1]
                sums = ((ga ** lower - ga ** x) / (1.0 - ga)
                        * gc ** (x + 1) / (1.0 - gc))
            else:
                gb = grids[sigma[1] - 1]
                gc = grids[sigma[2] - 1]
                gbc = gb * gc
                sums = gc / (1.0 - gc) * gbc ** (x + 1) / (1.0 - gbc)
            term = amp * pref * pinned * sums
            total = term if total is None else total + term
        if total is None:
            return np.zeros((1,) * 3, dtype=np.clongdouble)
        return total * expf

    return integrate_polydisc(f, 3, contour, wide=True)


def proposition41_check_N3(params, Y, t, x, n, contour=None, eps=1e-10):
    """Both sides of the per-n configuration-sum identity at N = 3.

    The left side assembles the signed transition-probability components
    by truncated configuration sums; the right side is the closed subset
    form with the per-slot coefficients.  Returns a report with both
    values, their difference, and the truncation bookkeeping.
    """
    ys = _positions(Y)
    if len(ys) != 3:
        raise ValueError("this check is specific to N = 3")
    if n not in (1, 2, 3):
        raise ValueError("n must be 1, 2, or 3")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if contour is None:
        # The truncated configuration sums are far more node-hungry
        # than the closed side: their geometric tail factors add poles
        # near the circle, and small radii sit on a roundoff plateau.
        # The production table contour is the measured convergent
        # regime for three variables, so reuse it here.
        contour = table_contour(params, 3)
    k_half = poisson_window_halfwidth(3, t, eps)
    lower = ys[0] - k_half

    lhs = 0.0 + 0.0j
    lhs_err = 0.0
    # minus component of the sector above, absent for n = 3 by the
    # boundary convention
    if n < 3:
        res = _component_config_sum(params, ys, t, x, n + 1, "-", n + 1,
                                    lower, contour)
        lhs += res.value
        lhs_err += res.error_estimate
    # plus component of sector n; at n = 1 this is the full transition
    # probability by the other boundary convention
    res = _component_config_sum(params, ys, t, x, n, "+", n, lower, contour)
    lhs += res.value
    lhs_err += res.error_estimate

    rhs = 0.0 + 0.0j
    rhs_err = 0.0
    for s in subsets_nonempty(3):
        c = coefficient_cS_tilde(params, 3, n, s)
        if c == 0.0:
            continue
        part = subset_integral(params, Y, t, x, s, contour)
        rhs += c * part.value
        rhs_err += abs(c) * part.error_estimate

    return {
        "n": n,
        "lhs": lhs,
        "rhs": rhs,
        "abs_difference": abs(lhs - rhs),
        "lhs_error_estimate": lhs_err,
        "rhs_error_estimate": rhs_err,
        "truncation_halfwidth": k_half,
        "truncation_tail_bound": float(3 * poisson.sf(k_half - 1, t)),
    }
