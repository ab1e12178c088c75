"""Trapezoidal contour integration on polydiscs.

Every integral in this package is a joint residue functional: small
counterclockwise circles around the origin, one per spectral variable.
On a circle the trapezoidal rule converges geometrically for integrands
analytic in an annulus, so a modest node count gives near machine
precision, and comparing against the half-resolution grid (reusing the
even-index nodes) gives a cheap, honest error estimate.
"""

from dataclasses import dataclass

import numpy as np


class NonFiniteIntegrandError(ArithmeticError):
    """The integrand blew up on the grid, i.e. a pole sits on or near
    the contour.  The radius is misconfigured for this integrand."""


@dataclass(frozen=True)
class Contour:
    """Circle of the given radius about the origin, sampled at `nodes`
    equispaced points.

    `nodes` must be even so the half-grid error estimate can reuse the
    even-index nodes; powers of two are recommended since they keep the
    same property under repeated halving.
    """

    radius: float
    nodes: int = 64

    def __post_init__(self):
        if not 0.0 < self.radius < 1.0:
            raise ValueError("radius must lie in (0, 1)")
        if self.nodes < 4 or self.nodes % 2:
            raise ValueError("nodes must be an even integer >= 4")

    def admissible_for(self, params):
        """True when every scattering denominator stays away from zero
        on the polydisc: r(1 + q r) < p."""
        r = self.radius
        return r * (1.0 + params.q * r) < params.p

    def points(self):
        return self.radius * unit_nodes(self.nodes)

    def weights(self):
        """Per-axis weights turning a node sum into (1/2pi i) * a closed
        circle integral: dxi/(2pi i) = xi dm/M on the circle."""
        return self.points() / self.nodes


def default_contour(params, k):
    """Defaults sized so the tensor grid stays tractable per dimension
    count while the radius keeps all denominators comfortably large."""
    if k <= 3:
        nodes = 64
    elif k == 4:
        nodes = 32
    else:
        nodes = 24
    return Contour(radius=params.p / 2.0, nodes=nodes)


def unit_nodes(nodes, wide=False):
    """The M-th roots of unity.  With wide=True they are built in
    extended precision, which matters when the integrand's dynamic
    range eats most of a double's mantissa: node placement error acts
    like integrand roundoff, so the nodes must be at least as accurate
    as the arithmetic that consumes them."""
    if wide:
        m = np.arange(nodes, dtype=np.longdouble)
        pi = np.arccos(np.longdouble(-1.0))
        ang = 2.0 * pi * m / nodes
        out = np.empty(nodes, dtype=np.clongdouble)
        out.real = np.cos(ang)
        out.imag = np.sin(ang)
        return out
    m = np.arange(nodes)
    return np.exp(2j * np.pi * m / nodes)


def wide_points(contour):
    """Contour nodes in extended precision (clongdouble)."""
    return np.clongdouble(contour.radius) * unit_nodes(contour.nodes, wide=True)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    nodes_used: int

    def __post_init__(self):
        if not np.isfinite(self.error_estimate):
            raise ValueError("error estimate must be finite")


def _open_grids(xi, k):
    """Length-k list of views of xi shaped for broadcasting, axis i
    varying along dimension i."""
    m = xi.shape[0]
    out = []
    for i in range(k):
        shape = [1] * k
        shape[i] = m
        out.append(xi.reshape(shape))
    return out


def _contract(values, w):
    """Sum values[m_1,...,m_k] * prod_i w[m_i] by contracting the last
    axis with w repeatedly.  Node-index order is fixed, so repeated runs
    agree bitwise."""
    out = values
    while out.ndim:
        out = out @ w if out.ndim > 1 else np.dot(out, w)
    return complex(out)


def integrate_polydisc(f, k, contour, wide=False):
    """Joint residue functional of f over the k-fold polydisc.

    f is called once with k broadcastable complex arrays and must return
    the integrand on the full tensor grid.  The error estimate is the
    difference against the half-resolution rule on the even-index nodes.

    wide=True runs the whole rule in extended precision; use it when the
    integrand spans many orders of magnitude on the contour and the
    result relies on phase cancellation (deep left tails of the position
    laws).  On x86 this buys roughly three extra decimal digits.
    """
    if not 1 <= k <= 5:
        raise ValueError("dimension must be between 1 and 5")
    xi = wide_points(contour) if wide else contour.points()
    grids = _open_grids(xi, k)
    values = np.asarray(f(*grids))
    if not np.issubdtype(values.dtype, np.complexfloating):
        values = values.astype(np.complex128)
    full_shape = (contour.nodes,) * k
    if values.shape != full_shape:
        values = np.broadcast_to(values, full_shape)
    if not np.all(np.isfinite(values)):
        raise NonFiniteIntegrandError(
            "integrand not finite on the grid; move the contour radius")

    w = xi / contour.nodes
    half = values[(slice(None, None, 2),) * k]
    w_half = 2.0 * w[::2]
    value_half = _contract(np.ascontiguousarray(half), w_half)
    value = _contract(values, w)
    return QuadratureResult(value=complex(value),
                            error_estimate=float(abs(value - value_half)),
                            nodes_used=contour.nodes)
