"""Nabla differences, sums and fractional differences on ``N_{a+1}``.

Every operator takes a :class:`~nablalaplace.signals.GridSignal`, an order and
one grid point ``k`` or an array of them.  Internally the whole window
``a+1 .. max(k)`` is computed once (``O(K^2)`` by direct convolution) and the
requested points are picked out.  The ``*_window`` variants return that window
directly and are what the rest of the package uses.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .signals import BaseMismatchError, GridSignal
from .special import signed_binomial_coeffs, sum_weights

__all__ = [
    "OperatorKind",
    "apply",
    "caputo_diff",
    "caputo_window",
    "convolve",
    "convolve_window",
    "frac_sum",
    "frac_sum_window",
    "gl_diff",
    "gl_window",
    "integer_order",
    "nabla_diff",
    "nabla_diff_window",
    "nabla_sum",
    "rl_diff",
    "rl_window",
]


class OperatorKind(enum.Enum):
    INTEGER_DIFF = "integer-diff"
    INTEGER_SUM = "integer-sum"
    FRAC_SUM = "frac-sum"
    CAPUTO = "caputo"
    RIEMANN_LIOUVILLE = "riemann-liouville"
    GRUNWALD_LETNIKOV = "grunwald-letnikov"


def integer_order(alpha: float) -> int:
    """``n = ceil(alpha)`` so that ``alpha`` lies in ``(n - 1, n]``."""
    if alpha <= 0:
        raise ValueError(f"order must be positive, got {alpha!r}")
    return max(1, math.ceil(alpha - 1e-14))


def _causal_conv(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``out[i] = sum_{j<=i} w[j] v[i-j]`` for ``i < len(v)``."""
    n = v.size
    if n == 0:
        return np.zeros(0, dtype=complex)
    return np.convolve(w[:n], v)[:n]


def _offsets(x: GridSignal, k) -> tuple[np.ndarray, bool]:
    m = np.atleast_1d(np.asarray(x.offset(k)))
    if np.any(m < 1):
        raise ValueError(f"k must lie in N_(a+1) with a={x.base:g}")
    return m, np.ndim(k) == 0


def _pick(window: np.ndarray, m: np.ndarray, scalar: bool):
    out = window[m - 1]
    return complex(out[0]) if scalar else out


def _diff_window(values: np.ndarray, history: np.ndarray, n: int) -> np.ndarray:
    """``n``-th backward difference of ``values`` (offsets 1..K) given the
    ``n`` history values ``[v(0), v(-1), ..., v(1-n)]``."""
    ext = np.concatenate([history[::-1], values])
    for _ in range(n):
        ext = ext[1:] - ext[:-1]
    return ext


# integer order


def nabla_diff_window(x: GridSignal, n: int, count: int) -> np.ndarray:
    """``nabla^n x`` at offsets ``1 .. count`` (needs ``n`` pre-samples)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    vals = x.window(count)
    if n == 0:
        return vals
    return _diff_window(vals, x.history(n), n)


def nabla_diff(x: GridSignal, n: int, k):
    """``nabla^n x(k) = sum_{j=0}^n (-1)^j binom(n, j) x(k - j)``."""
    m, scalar = _offsets(x, k)
    return _pick(nabla_diff_window(x, int(n), int(m.max())), m, scalar)


def nabla_sum(x: GridSignal, n: int, k):
    """``n``-fold nabla sum from ``a + 1`` (integer case of :func:`frac_sum`)."""
    return frac_sum(x, int(n), k)


# fractional sum and differences


def frac_sum_window(x: GridSignal, alpha: float, count: int) -> np.ndarray:
    """Order-``alpha`` nabla sum at offsets ``1 .. count``; ``alpha = 0`` is identity."""
    if alpha < 0:
        raise ValueError("sum order must be non-negative")
    vals = x.window(count)
    if alpha == 0:
        return vals
    return _causal_conv(sum_weights(alpha, count), vals)


def frac_sum(x: GridSignal, alpha: float, k):
    """``sum_{j=0}^{k-a-1} (-1)^j binom(-alpha, j) x(k - j)``."""
    m, scalar = _offsets(x, k)
    return _pick(frac_sum_window(x, alpha, int(m.max())), m, scalar)


def caputo_window(x: GridSignal, alpha: float, count: int) -> np.ndarray:
    n = integer_order(alpha)
    d = nabla_diff_window(x, n, count)
    nu = n - alpha
    if nu <= 1e-14:
        return d
    return _causal_conv(sum_weights(nu, count), d)


def caputo_diff(x: GridSignal, alpha: float, k):
    """Caputo difference: the order ``n - alpha`` sum of ``nabla^n x``.

    Requires ``n = ceil(alpha)`` pre-samples of ``x``.
    """
    m, scalar = _offsets(x, k)
    return _pick(caputo_window(x, alpha, int(m.max())), m, scalar)


def rl_window(
    x: GridSignal, alpha: float, count: int, inner_history=None
) -> np.ndarray:
    n = integer_order(alpha)
    nu = n - alpha
    inner = frac_sum_window(x, nu, count) if nu > 1e-14 else x.window(count)
    if inner_history is None:
        # the sum from a+1 is empty at k <= a
        hist = np.zeros(n, dtype=complex)
    else:
        hist = np.asarray(inner_history, dtype=complex)
        if hist.size < n:
            raise ValueError(f"inner_history needs {n} values, got {hist.size}")
        hist = hist[:n]
    return _diff_window(inner, hist, n)


def rl_diff(x: GridSignal, alpha: float, k, inner_history=None):
    """Riemann-Liouville difference: ``nabla^n`` of the order ``n - alpha`` sum.

    ``inner_history`` gives the inner sum at ``a, a-1, ..., a+1-n``; by default
    it is the empty sum (zero).  Those values are the initial data of the
    transform rule, ``[RL nabla^(alpha-j-1) x]_(k=a) = [nabla^(n-1-j) y]_(k=a)``.
    """
    m, scalar = _offsets(x, k)
    return _pick(rl_window(x, alpha, int(m.max()), inner_history), m, scalar)


def gl_window(x: GridSignal, alpha: float, count: int) -> np.ndarray:
    return _causal_conv(signed_binomial_coeffs(alpha, count), x.window(count))


def gl_diff(x: GridSignal, alpha: float, k):
    """Grunwald-Letnikov difference ``sum_{j=0}^{k-a-1} (-1)^j binom(alpha, j) x(k-j)``."""
    m, scalar = _offsets(x, k)
    return _pick(gl_window(x, alpha, int(m.max())), m, scalar)


def convolve_window(x: GridSignal, y: GridSignal, count: int) -> np.ndarray:
    if x.base != y.base:
        raise BaseMismatchError(f"bases differ: {x.base:g} vs {y.base:g}")
    return _causal_conv(x.window(count), y.window(count))


def convolve(x: GridSignal, y: GridSignal, k):
    """Nabla convolution ``sum_{j=a+1}^{k} x(k - j + a + 1) y(j)``."""
    if x.base != y.base:
        raise BaseMismatchError(f"bases differ: {x.base:g} vs {y.base:g}")
    m, scalar = _offsets(x, k)
    return _pick(convolve_window(x, y, int(m.max())), m, scalar)


@dataclass(frozen=True)
class Operator:
    """An operator kind with its order, for dispatch by :func:`apply`."""

    kind: OperatorKind
    order: float

    def __post_init__(self):
        if self.kind in (OperatorKind.CAPUTO, OperatorKind.RIEMANN_LIOUVILLE):
            n = integer_order(self.order)
            if not (n - 1 < self.order < n):
                raise ValueError(
                    f"{self.kind.value} needs a non-integer order, got {self.order!r}"
                )


def apply(op: Operator, x: GridSignal, count: int, **kwargs) -> GridSignal:
    """Sample ``op x`` on offsets ``1 .. count`` as a finite :class:`GridSignal`."""
    kind = op.kind
    if kind is OperatorKind.INTEGER_DIFF:
        vals = nabla_diff_window(x, int(op.order), count)
    elif kind in (OperatorKind.INTEGER_SUM, OperatorKind.FRAC_SUM):
        vals = frac_sum_window(x, op.order, count)
    elif kind is OperatorKind.CAPUTO:
        vals = caputo_window(x, op.order, count)
    elif kind is OperatorKind.RIEMANN_LIOUVILLE:
        vals = rl_window(x, op.order, count, kwargs.get("inner_history"))
    elif kind is OperatorKind.GRUNWALD_LETNIKOV:
        vals = gl_window(x, op.order, count)
    else:  # pragma: no cover
        raise ValueError(kind)
    return GridSignal(x.base, vals)
