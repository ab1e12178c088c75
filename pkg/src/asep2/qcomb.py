"""Deformed integers, binomials, subset coefficients and identity checks.

The subset coefficients weight the contour integrals of the second-class
particle law and of the related single-species rightmost-particle law.
verify_identities re-derives every algebraic identity those formulas
lean on, by brute force at random spectral points, and reports the worst
relative error per identity.
"""

from itertools import combinations
from math import comb

import numpy as np

from .algebra import ModelParams, factor_S, factor_T


def q_bracket(params, n):
    """Deformed integer [n] = (p^n - q^n)/(p - q), with [n] -> n p^(n-1) at p = q."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p, q = params.p, params.q
    if p == q:
        return n * p ** (n - 1) if n else 0.0
    return (p ** n - q ** n) / (p - q)


def q_factorial(params, n):
    out = 1.0
    for k in range(1, n + 1):
        out *= q_bracket(params, k)
    return out


def q_binomial(params, n, m):
    """Deformed binomial; zero when m exceeds n."""
    if n < 0 or m < 0:
        raise ValueError("arguments must be nonnegative")
    if m > n:
        return 0.0
    return q_factorial(params, n) / (q_factorial(params, n - m) * q_factorial(params, m))


def tau_binomial(tau, n, k):
    """Ordinary one-parameter Gaussian binomial in the variable tau."""
    if k > n or k < 0:
        return 0.0
    out = 1.0
    for i in range(1, k + 1):
        out *= (1.0 - tau ** (n - k + i)) / (1.0 - tau ** i)
    return out


def subsets_nonempty(n):
    """All nonempty subsets of {1..n} as sorted tuples."""
    out = []
    for size in range(1, n + 1):
        out.extend(combinations(range(1, n + 1), size))
    return out


def subset_complement(n, s):
    s = set(s)
    return tuple(u for u in range(1, n + 1) if u not in s)


def rank_sum(universe, s):
    """Sum of the 1-based ranks of the elements of s within universe."""
    universe = sorted(universe)
    return sum(universe.index(u) + 1 for u in s)


def coefficient_cS(params, n_particles, s):
    """Subset coefficient of the second-class particle law.

    Two branches, depending on whether the last particle index belongs
    to the subset.  S = {n_particles} gives 1 in every parameter.
    """
    s = tuple(sorted(s))
    if not s or any(u < 1 or u > n_particles for u in s):
        raise ValueError("S must be a nonempty subset of 1..N")
    p, q = params.p, params.q
    sc = subset_complement(n_particles, s)
    sig = sum(sc)
    m = len(sc)
    if n_particles in s:
        prod = 1.0
        for i in range(1, len(s)):
            prod *= q ** i - p ** i
        return prod * (q / p) ** (sig - m * (m + 1) // 2)
    prod = 1.0
    for i in range(1, len(s) + 1):
        prod *= q ** i - p ** i
    return prod / p ** len(s) * (q / p) ** (sig - m * (m - 1) // 2 - n_particles)


def coefficient_cS_rightmost(params, n_particles, s):
    """Subset coefficient of the single-species rightmost-particle law."""
    s = tuple(sorted(s))
    if not s or any(u < 1 or u > n_particles for u in s):
        raise ValueError("S must be a nonempty subset of 1..N")
    p, q = params.p, params.q
    n = n_particles
    sc = subset_complement(n, s)
    sig = sum(sc)
    m = len(sc)
    return (q ** (n * (n - 1) // 2)
            * q ** (sig - n * m)
            / p ** (sig - m * (m + 1) // 2))


def coefficient_cS_tilde(params, n_particles, n, s):
    """Per-slot subset coefficient of the configuration-sum identity.

    n is the slot index of the decomposition; the deformed binomial
    makes the coefficient vanish automatically when the subset is too
    small for the slot.
    """
    s = tuple(sorted(s))
    if not s or any(u < 1 or u > n_particles for u in s):
        raise ValueError("S must be a nonempty subset of 1..N")
    if not 1 <= n <= n_particles:
        raise ValueError("slot index out of range")
    p, q = params.p, params.q
    big_n = n_particles
    sc = subset_complement(big_n, s)
    sig = sum(sc)
    m = len(sc)
    k = big_n - n
    sign = (-1.0) ** k
    if big_n in s:
        return (sign * q ** (n * (n - 1) // 2) * p ** (k * (k + 1) // 2)
                * q ** (sig - n * m) / p ** (sig - m * (m + 1) // 2)
                * q_binomial(params, len(s) - 1, k))
    return (sign * q ** (n * (n - 1) // 2) * p ** (k * (k - 1) // 2)
            * q ** (sig - n * m - k) / p ** (sig - m * (m + 1) // 2 - k)
            * q_binomial(params, len(s), k))


def _rel_err(a, b, floor=1e-30):
    num = abs(a - b)
    den = max(abs(a), abs(b), floor)
    return num / den if num else 0.0


def _random_circle_points(rng, n, radius):
    """n random points on the circle of the given radius, kept pairwise
    well separated: equally spaced angles with a random rotation and
    per-point jitter of up to a quarter gap.  Nearly coincident points
    would blow up the condition number of the brute-force subset sums
    without testing anything extra, the identities being rational."""
    gap = 2.0 * np.pi / n
    theta = (gap * (np.arange(n) + rng.uniform(-0.25, 0.25, size=n))
             + rng.uniform(0.0, 2.0 * np.pi))
    return np.clongdouble(radius) * np.exp(np.clongdouble(1j) * theta)


def _pairwise_T_product(params, xi, members):
    out = 1.0
    members = sorted(members)
    for ai in range(len(members)):
        for bi in range(ai + 1, len(members)):
            a, b = members[ai], members[bi]
            out = out * factor_T(params, xi[a - 1], xi[b - 1])
    return out


def _tw_ratio_product(params, xi, inside, outside):
    """Product over i in A, j in A^c of (p + q xi_i xi_j - xi_i)/(xi_j - xi_i)."""
    p, q = params.p, params.q
    out = 1.0
    for i in inside:
        for j in outside:
            a, b = xi[i - 1], xi[j - 1]
            out = out * (p + q * a * b - a) / (b - a)
    return out


def verify_identities(params, n_max=6, trials=50, seed=0):
    """Numerically check the identity suite at random spectral points.

    Returns a list of dicts with keys name, max_rel_err, tol, passed.
    Identities over spectral variables are evaluated at `trials` random
    draws on the default-size circle; parameter-only identities are
    evaluated directly.  Nothing is raised on failure; callers decide.
    """
    if not 2 <= n_max <= 6:
        raise ValueError("n_max must be between 2 and 6")
    rng = np.random.default_rng(seed)
    radius = params.p / 2.0
    tol = 1e-10
    report = []

    def record(name, err):
        report.append({"name": name, "max_rel_err": err, "tol": tol,
                       "passed": err < tol})

    # Q = S - pT and 1 + S = T, pointwise in two variables.
    from .algebra import factor_pT, factor_Q
    err_q = err_t = 0.0
    for _ in range(trials):
        a, b = _random_circle_points(rng, 2, radius)
        err_q = max(err_q, _rel_err(factor_Q(params, a, b),
                                    factor_S(params, a, b) - factor_pT(params, a, b)))
        err_t = max(err_t, _rel_err(1.0 + factor_S(params, a, b),
                                    factor_T(params, a, b)))
    record("Q equals S minus pT", err_q)
    record("1 plus S equals T", err_t)

    # Factorization of the deformed-sign product into an alternating
    # deformed-binomial sum, for every length up to n_max + 1.  The sum
    # cancels to zero at p = q, so the error is scored against its
    # largest term rather than against the (vanishing) result.
    p, q = params.p, params.q
    err = 0.0
    for ell in range(1, n_max + 2):
        lhs = 1.0
        for i in range(1, ell):
            lhs *= q ** i - p ** i
        terms = [(-1.0) ** k * q_binomial(params, ell - 1, k)
                 * p ** (k * (k + 1) // 2) * q ** ((ell - k) * (ell - k - 1) // 2)
                 for k in range(ell)]
        scale = max(max(abs(x) for x in terms), abs(lhs), 1e-30)
        err = max(err, abs(lhs - sum(terms)) / scale)
    record("alternating binomial factorization", err)

    # Cauchy binomial theorem at random (y, tau).
    err = 0.0
    for _ in range(trials):
        y = rng.uniform(-2.0, 2.0)
        tau = rng.uniform(0.1, 0.9)
        for n in range(1, n_max + 1):
            lhs = 1.0
            for k in range(1, n + 1):
                lhs *= 1.0 + y * tau ** k
            terms = [y ** k * tau ** (k * (k + 1) // 2)
                     * tau_binomial(tau, n, k) for k in range(n + 1)]
            # The product can land arbitrarily close to zero when some
            # 1 + y tau^k nearly cancels, so score against the largest
            # term of the sum rather than the (possibly tiny) value.
            scale = max(max(abs(x) for x in terms), abs(lhs), 1e-30)
            err = max(err, abs(lhs - sum(terms)) / scale)
    record("Cauchy binomial theorem", err)

    # Subset sum with mixed T and S factors against the deformed binomial.
    err = 0.0
    for n in range(2, n_max + 1):
        for m in range(0, n + 1):
            for _ in range(max(1, trials // n_max)):
                xi = _random_circle_points(rng, n, radius)
                total = 0.0
                for s in combinations(range(1, n + 1), m):
                    sc = tuple(u for u in range(1, n + 1) if u not in s)
                    term = (_pairwise_T_product(params, xi, sc)
                            * _pairwise_T_product(params, xi, s))
                    # only cross pairs with the S member on the left
                    # carry a factor; the opposite orientation is absent
                    for a in s:
                        for b in sc:
                            if a < b:
                                term = term * factor_S(params, xi[a - 1], xi[b - 1])
                    total = total + term
                expected = (q_binomial(params, n, m)
                            * _pairwise_T_product(params, xi, range(1, n + 1)))
                err = max(err, _rel_err(total, expected))
    record("mixed subset factor sum", err)

    # Ratio-product subset sums: the plain one and the one twisted by
    # the complement product.
    err_plain = err_twist = 0.0
    for n in range(2, n_max + 1):
        for m in range(0, n + 1):
            for _ in range(max(1, trials // n_max)):
                xi = _random_circle_points(rng, n, radius)
                total_plain = 0.0
                total_twist = 0.0
                for s in combinations(range(1, n + 1), m):
                    sc = tuple(u for u in range(1, n + 1) if u not in s)
                    ratio = _tw_ratio_product(params, xi, s, sc)
                    total_plain = total_plain + ratio
                    total_twist = total_twist + ratio * (1.0 - np.prod(xi[[j - 1 for j in sc]]))
                err_plain = max(err_plain, _rel_err(total_plain, q_binomial(params, n, m)))
                expected = (q ** m * q_binomial(params, n - 1, m)
                            * (1.0 - np.prod(xi)))
                err_twist = max(err_twist, _rel_err(total_twist, expected))
    record("ratio-product subset sum", err_plain)
    record("twisted ratio-product subset sum", err_twist)

    # The per-slot coefficients telescope to the law's coefficients.
    # Same convention as above: the slot sum cancels at p = q.
    err = 0.0
    for big_n in range(2, 6):
        for s in subsets_nonempty(big_n):
            terms = [coefficient_cS_tilde(params, big_n, n, s)
                     for n in range(1, big_n + 1)]
            want = coefficient_cS(params, big_n, s)
            scale = max(max(abs(x) for x in terms), abs(want), 1e-30)
            err = max(err, abs(sum(terms) - want) / scale)
    record("slot-coefficient telescoping", err)

    return report


def _check_mixed_subset_count(n, m):
    # internal sanity: the brute-force loops above touch comb(n, m) terms
    return comb(n, m)
