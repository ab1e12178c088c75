"""Scattering factors, permutation words and sector amplitudes.

The transition probabilities of the two-species exclusion process are
built from matrix elements of products of R factors, one factor per
adjacent transposition in a reduced word of a permutation.  Because the
process has a single second-class particle, the only part of the R
matrices ever needed is their action on the sector spanned by species
words with exactly one "1" among "2"s.  A state of that sector is a
complex vector of length N indexed by the slot holding the "1", which
makes each R application O(N) instead of O(N^N).
"""

from dataclasses import dataclass

import numpy as np

DEGENERATE_TOL = 1e-14


class DegenerateDenominatorError(ArithmeticError):
    """A scattering denominator came too close to zero.

    This signals a bad contour radius, not a recoverable condition.
    """


@dataclass(frozen=True)
class ModelParams:
    """Jump bias of the process.  p is the right-jump probability."""

    p: float

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError("p must lie strictly between 0 and 1, got %r" % (self.p,))

    @property
    def q(self):
        return 1.0 - self.p


def _denominator(params, xi_a, xi_b):
    d = params.p + params.q * xi_a * xi_b - xi_a
    bad = np.min(np.abs(d)) if np.ndim(d) else abs(d)
    if bad < DEGENERATE_TOL:
        raise DegenerateDenominatorError(
            "scattering denominator |p + q*xi_a*xi_b - xi_a| = %g; "
            "shrink or move the contour radius" % bad)
    return d


def factor_S(params, xi_a, xi_b):
    """S factor of the pair (beta, alpha) evaluated at (xi_alpha, xi_beta)."""
    return -(params.p + params.q * xi_a * xi_b - xi_b) / _denominator(params, xi_a, xi_b)


def factor_T(params, xi_a, xi_b):
    """T factor, equal to 1 + S."""
    return (xi_b - xi_a) / _denominator(params, xi_a, xi_b)


def factor_pT(params, xi_a, xi_b):
    """p times the T factor."""
    return params.p * (xi_b - xi_a) / _denominator(params, xi_a, xi_b)


def factor_Q(params, xi_a, xi_b):
    """Q factor, equal to S - pT."""
    return (params.p - params.q * xi_b) * (xi_a - 1.0) / _denominator(params, xi_a, xi_b)


def factor_P(params, xi_a, xi_b):
    """P factor, the diagonal partner of Q in the R matrix."""
    return (params.p - params.q * xi_a) * (xi_b - 1.0) / _denominator(params, xi_a, xi_b)


@dataclass(frozen=True)
class PermutationWord:
    """A permutation together with a labelled reduced decomposition.

    word is a tuple of (slot, beta, alpha) triples in application order:
    the first triple acts first on the identity arrangement.  At the time
    a triple (i, beta, alpha) acts, slot i holds alpha and slot i+1 holds
    beta (1-based slots), and the two values are interchanged.
    """

    sigma: tuple
    word: tuple

    def __len__(self):
        return len(self.word)


def inversions(sigma):
    """Pairs (beta, alpha) with beta > alpha appearing out of order."""
    out = []
    n = len(sigma)
    for i in range(n):
        for j in range(i + 1, n):
            if sigma[i] > sigma[j]:
                out.append((sigma[i], sigma[j]))
    return out


def reduced_word(sigma):
    """Factor sigma into labelled adjacent transpositions.

    Works by repeatedly removing the leftmost descent of the one-line
    arrangement, which is plain bubble sort.  The recorded application
    order reproduces sigma when applied to the identity, and its length
    equals the inversion count.
    """
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise ValueError("not a permutation of 1..N: %r" % (sigma,))
    cur = list(sigma)
    peeled = []
    while True:
        for i in range(len(cur) - 1):
            if cur[i] > cur[i + 1]:
                peeled.append((i + 1, cur[i], cur[i + 1]))
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                break
        else:
            break
    return PermutationWord(sigma=sigma, word=tuple(reversed(peeled)))


def apply_word(word, arrangement=None):
    """Apply a labelled word to an arrangement (defaults to identity)."""
    n = len(word.sigma)
    cur = list(range(1, n + 1)) if arrangement is None else list(arrangement)
    for i, beta, alpha in word.word:
        if cur[i - 1] != alpha or cur[i] != beta:
            raise ValueError("word label (%d,%d,%d) does not match arrangement %r"
                             % (i, beta, alpha, cur))
        cur[i - 1], cur[i] = cur[i], cur[i - 1]
    return tuple(cur)


def all_reduced_words(sigma):
    """Every reduced word of sigma, by recursive descent elimination."""
    sigma = tuple(sigma)
    if all(sigma[i] == i + 1 for i in range(len(sigma))):
        return [PermutationWord(sigma=sigma, word=())]
    out = []
    for i in range(len(sigma) - 1):
        if sigma[i] > sigma[i + 1]:
            prev = list(sigma)
            prev[i], prev[i + 1] = prev[i + 1], prev[i]
            step = (i + 1, sigma[i], sigma[i + 1])
            for sub in all_reduced_words(tuple(prev)):
                out.append(PermutationWord(
                    sigma=sigma, word=sub.word + (step,)))
    return out


class SectorState:
    """Amplitudes over species words with a single "1".

    amps[k] is the coefficient of the word holding the "1" in slot k+1.
    Entries may be scalars or broadcast-compatible numpy arrays, so one
    sector evolution can serve a whole quadrature grid.
    """

    def __init__(self, amps):
        self.amps = list(amps)

    @classmethod
    def initial(cls, n_slots):
        amps = [0.0] * n_slots
        amps[n_slots - 1] = 1.0
        return cls(amps)

    def apply_r(self, params, slot, xi_alpha, xi_beta):
        """Act with the R factor of (beta, alpha) on slots (slot, slot+1)."""
        s = factor_S(params, xi_alpha, xi_beta)
        i = slot - 1
        a_i, a_j = self.amps[i], self.amps[i + 1]
        for k in range(len(self.amps)):
            if k != i and k != i + 1:
                self.amps[k] = self.amps[k] * s
        p_f = factor_P(params, xi_alpha, xi_beta)
        q_f = factor_Q(params, xi_alpha, xi_beta)
        t_f = factor_T(params, xi_alpha, xi_beta)
        self.amps[i] = p_f * a_i + params.p * t_f * a_j
        self.amps[i + 1] = params.q * t_f * a_i + q_f * a_j


def sector_amplitudes(params, word, xi):
    """All matrix elements of A_sigma against the initial species word.

    xi is a sequence of N spectral values (scalars or arrays), indexed by
    particle.  Returns the SectorState whose k-th amplitude is the matrix
    element selecting the species word with the "1" in slot k+1.
    """
    n = len(word.sigma)
    state = SectorState.initial(n)
    for slot, beta, alpha in word.word:
        state.apply_r(params, slot, xi[alpha - 1], xi[beta - 1])
    return state


def amplitude(params, word, xi, n):
    """Matrix element of A_sigma picking the "1" in slot n (1-based)."""
    sigma = word.sigma
    if sigma.index(len(sigma)) + 1 > n:
        # The "1" starts in the last slot and each R application moves it
        # left by at most one transposition touching it, so no path
        # reaches slot n.  Exact zero, no quadrature needed.
        return 0.0
    return sector_amplitudes(params, word, xi).amps[n - 1]


def amplitude_single_species(params, sigma, xi):
    """Product of S factors over all inversions of sigma."""
    out = 1.0
    for beta, alpha in inversions(tuple(sigma)):
        out = out * factor_S(params, xi[alpha - 1], xi[beta - 1])
    return out


def vanishes(sigma, n):
    """True when the matrix element of A_sigma at slot n is exactly zero."""
    sigma = tuple(sigma)
    return sigma.index(len(sigma)) + 1 > n


# The three-particle plus/minus components.  Each entry is a signed list
# of factors; a factor is (kind, beta, alpha).  Absent keys mean zero.
_N3_COMPONENTS = {
    ((1, 2, 3), 3, "+"): (1, []),
    ((2, 1, 3), 3, "+"): (1, [("S", 2, 1)]),
    ((1, 3, 2), 3, "+"): (1, [("S", 3, 2)]),
    ((1, 3, 2), 3, "-"): (-1, [("pT", 3, 2)]),
    ((1, 3, 2), 2, "+"): (1, [("pT", 3, 2)]),
    ((2, 3, 1), 3, "+"): (1, [("S", 2, 1), ("S", 3, 1)]),
    ((2, 3, 1), 3, "-"): (-1, [("pT", 3, 1), ("S", 2, 1)]),
    ((2, 3, 1), 2, "+"): (1, [("pT", 3, 1), ("S", 2, 1)]),
    ((3, 1, 2), 3, "+"): (1, [("S", 3, 1), ("S", 3, 2)]),
    ((3, 1, 2), 3, "-"): (-1, [("pT", 3, 2), ("S", 3, 1)]),
    ((3, 1, 2), 2, "+"): (1, [("pT", 3, 2), ("S", 3, 1)]),
    ((3, 1, 2), 2, "-"): (-1, [("pT", 3, 1), ("pT", 3, 2)]),
    ((3, 1, 2), 1, "+"): (1, [("pT", 3, 1), ("pT", 3, 2)]),
    ((3, 2, 1), 3, "+"): (1, [("S", 2, 1), ("S", 3, 2), ("S", 3, 1)]),
    ((3, 2, 1), 3, "-"): (-1, [("pT", 3, 1), ("S", 2, 1), ("S", 3, 2)]),
    ((3, 2, 1), 2, "+"): (1, [("pT", 3, 1), ("S", 2, 1), ("S", 3, 2)]),
    ((3, 2, 1), 2, "-"): (-1, [("pT", 3, 2), ("pT", 3, 1), ("S", 2, 1)]),
    ((3, 2, 1), 1, "+"): (1, [("pT", 3, 2), ("pT", 3, 1), ("S", 2, 1)]),
}

_FACTOR_FUNCS = {"S": factor_S, "pT": factor_pT, "Q": factor_Q, "P": factor_P}


def component_amplitude_N3(params, sigma, xi, n, sign):
    """Plus or minus component of a three-particle matrix element.

    The split replaces the single Q factor of an element by S (plus
    component) or by -pT (minus component); elements without a Q factor
    are their own plus component and have zero minus component.  Only
    the three-particle table is known in this closed form.
    """
    sigma = tuple(sigma)
    if len(sigma) != 3:
        raise ValueError("component split is tabulated for three particles only")
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if n not in (1, 2, 3):
        raise ValueError("slot index n must be 1, 2 or 3")
    entry = _N3_COMPONENTS.get((sigma, n, sign))
    if entry is None:
        return 0.0
    coeff, factors = entry
    out = complex(coeff)
    for kind, beta, alpha in factors:
        out = out * _FACTOR_FUNCS[kind](params, xi[alpha - 1], xi[beta - 1])
    return out
