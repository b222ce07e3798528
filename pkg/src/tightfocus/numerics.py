"""Special functions and adaptive quadrature used by the beam and atom code.

Bessel functions are only ever needed for integer orders ``|n| <= 3``. The
quadrature engine is a vectorised adaptive Gauss-Kronrod (7/15) rule that
accepts complex and vector-valued integrands, so that all three field
components, or a whole batch of sample points, share one subdivision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

MAX_BESSEL_ORDER = 3

# Kronrod 15-point abscissae (descending, last is the centre) and weights.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss 7-point weights for the abscissae _XGK[1], _XGK[3], _XGK[5], _XGK[7].
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full symmetric node set on [-1, 1] and matching weight vectors.
KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
for _j, _node in enumerate((1, 3, 5)):
    GAUSS_WEIGHTS[_node] = _WG[_j]
    GAUSS_WEIGHTS[14 - _node] = _WG[_j]
GAUSS_WEIGHTS[7] = _WG[3]


class QuadratureError(RuntimeError):
    """Adaptive integration did not reach the requested tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for :func:`integrate_complex`.

    ``max_subdivisions`` caps the number of sub-intervals the adaptive rule
    may create; ``min_panels`` is the number of equal panels it starts from,
    which should be large enough to resolve the oscillations of the
    integrand on the first pass.
    """

    relative_tolerance: float = 1e-9
    absolute_tolerance: float = 1e-12
    max_subdivisions: int = 20000
    min_panels: int = 1

    def __post_init__(self):
        if not (self.relative_tolerance > 0 and self.absolute_tolerance > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.min_panels < 1:
            raise ValueError("min_panels must be >= 1")

    def with_panels(self, n):
        """Copy of this spec starting from at least ``n`` panels."""
        n = int(min(max(n, self.min_panels), self.max_subdivisions))
        return QuadratureSpec(self.relative_tolerance, self.absolute_tolerance,
                              self.max_subdivisions, n)


DEFAULT_QUADRATURE = QuadratureSpec()


def bessel_j(order, x):
    """Bessel function of the first kind for integer order ``|order| <= 3``.

    ``x`` may be a scalar or an array; it must be finite and non-negative.
    Negative orders use ``J_{-n} = (-1)^n J_n``.
    """
    if int(order) != order or abs(order) > MAX_BESSEL_ORDER:
        raise ValueError(f"unsupported Bessel order {order!r}")
    order = int(order)
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ValueError("bessel_j requires finite, non-negative arguments")
    n = abs(order)
    if n == 0:
        val = special.j0(arr)
    elif n == 1:
        val = special.j1(arr)
    else:
        val = special.jv(n, arr)
    if order < 0 and n % 2:
        val = -val
    return val if np.ndim(x) else float(val)


def bessel_j_unchecked(order, x):
    """Same as :func:`bessel_j` without argument validation (hot loops)."""
    n = abs(order)
    if n == 0:
        val = special.j0(x)
    elif n == 1:
        val = special.j1(x)
    else:
        val = special.jv(n, x)
    if order < 0 and n % 2:
        return -val
    return val


def _gk_panels(f, left, right):
    """Apply the 7/15 rule on every panel. Returns (kronrod, error) arrays."""
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    nodes = mid[:, None] + half[:, None] * KRONROD_NODES[None, :]
    vals = np.asarray(f(nodes.ravel()))
    vals = vals.reshape(nodes.shape + vals.shape[1:])
    # vals: (panels, 15, *components)
    kron = np.tensordot(vals, KRONROD_WEIGHTS, axes=([1], [0]))
    gauss = np.tensordot(vals, GAUSS_WEIGHTS, axes=([1], [0]))
    scale = half.reshape((-1,) + (1,) * (kron.ndim - 1))
    kron = kron * scale
    err = np.abs(kron - gauss * scale)
    return kron, err


def integrate_complex(f, a, b, spec=DEFAULT_QUADRATURE, vector_axis=False,
                      return_error=True):
    """Adaptive Gauss-Kronrod integral of ``f`` over ``[a, b]``.

    Parameters
    ----------
    f : callable
        Vectorised integrand. Called with a 1-D array of nodes, it must
        return an array whose first axis runs over the nodes; any trailing
        axes are independent components integrated simultaneously.
    a, b : float
        Finite integration limits, ``a < b``.
    spec : QuadratureSpec
        Tolerances. Each component converges when its summed error estimate
        is below ``max(rel * |I|, abs)``.
    vector_axis : bool
        Treat the last trailing axis as the components of one vector, so
        ``|I|`` above is the largest modulus over that axis.

    Returns
    -------
    (value, error)
        Integral estimate and its (conservative, ``|K15 - G7|``) error.

    Raises
    ------
    QuadratureError
        If the tolerance is not met before ``max_subdivisions`` panels exist.
    """
    if not (np.isfinite(a) and np.isfinite(b)) or not a < b:
        raise ValueError(f"invalid integration interval [{a}, {b}]")
    edges = np.linspace(a, b, spec.min_panels + 1)
    left, right = edges[:-1], edges[1:]
    kron, err = _gk_panels(f, left, right)

    while True:
        total = kron.sum(axis=0)
        total_err = err.sum(axis=0)
        if vector_axis and total.ndim >= 1:
            mag = np.max(np.abs(total), axis=-1, keepdims=True)
            mag = np.broadcast_to(mag, total.shape)
        else:
            mag = np.abs(total)
        tol = np.maximum(spec.relative_tolerance * mag, spec.absolute_tolerance)
        pending = total_err > tol
        if not np.any(pending):
            break
        n = left.size
        if n >= spec.max_subdivisions:
            worst = float(np.max(total_err - tol))
            raise QuadratureError(
                f"no convergence on [{a}, {b}] after {n} subdivisions "
                f"(error exceeds tolerance by {worst:.3g})",
                estimate=total, error=total_err)
        # split panels that carry more than their share of an unmet tolerance
        share = np.where(pending, tol / n, np.inf)
        bad = err > share
        split = bad.reshape(n, -1).any(axis=1)
        if not np.any(split):
            split = err.reshape(n, -1).max(axis=1) >= np.max(err)
        budget = spec.max_subdivisions - n
        idx = np.flatnonzero(split)
        if idx.size > budget:
            order = np.argsort(-err.reshape(n, -1).max(axis=1)[idx])
            idx = idx[order[:max(budget, 1)]]
            split = np.zeros(n, dtype=bool)
            split[idx] = True
        mid = 0.5 * (left[split] + right[split])
        new_left = np.concatenate([left[split], mid])
        new_right = np.concatenate([mid, right[split]])
        k_new, e_new = _gk_panels(f, new_left, new_right)
        keep = ~split
        left = np.concatenate([left[keep], new_left])
        right = np.concatenate([right[keep], new_right])
        kron = np.concatenate([kron[keep], k_new])
        err = np.concatenate([err[keep], e_new])

    if return_error:
        return total, total_err
    return total
