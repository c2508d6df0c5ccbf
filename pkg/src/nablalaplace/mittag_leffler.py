"""The discrete Mittag-Leffler function.

``F_{alpha,beta}(lam, k, a) = sum_j lam^j n^(j alpha + beta - 1) / Gamma(j alpha + beta)``
with ``n = k - a`` and ``p^(q)`` the rising function.  The ``j``-th term is
``lam^j * (j alpha + beta)^(n - 1) / (n - 1)!``, a polynomial of degree
``n - 1`` in ``j`` times ``lam^j``, so the series converges exactly when
``|lam| < 1``.

For negative or complex ``lam`` and large ``n`` the terms grow to many orders
of magnitude above the sum before they decay.  The float sum is then
recomputed in mpmath with enough extra digits to absorb the cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.special import gammaln

from .signals import GridSignal
from .special import log_rising
from .transform import DivergenceError, NablaTransform, ml_transform

__all__ = ["DiscreteMLParams", "dml_eval", "dml_signal", "dml_window"]

_CANCEL_DIGITS = 1.0
_LOG_EPS = math.log(np.finfo(float).eps)


@dataclass(frozen=True)
class DiscreteMLParams:
    alpha: float
    beta: float
    lam: complex
    a: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        object.__setattr__(self, "lam", complex(self.lam))

    def transform_guard(self, s: complex) -> bool:
        """Whether ``|lam| < |s|^alpha`` so the transform pair applies at ``s``."""
        return abs(self.lam) < abs(complex(s)) ** self.alpha

    def transform(self) -> NablaTransform:
        return ml_transform(self.alpha, self.beta, self.lam)


def _log_coeffs(alpha: float, beta: float, n: int, j: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``log|c_j|`` and ``sign(c_j)`` for ``c_j = (j alpha + beta)^(n-1) / (n-1)!``."""
    p = j * alpha + beta
    if n == 1:
        return np.zeros(j.shape), np.ones(j.shape)
    out = np.empty(j.shape)
    sgn = np.ones(j.shape)
    pos = p > 0
    if np.any(pos):
        lr, _ = log_rising(p[pos], float(n - 1))
        out[pos] = lr - gammaln(n)
    for idx in np.nonzero(~pos)[0]:
        prod = math.prod(p[idx] + i for i in range(n - 1))
        out[idx] = math.log(abs(prod)) - gammaln(n) if prod != 0 else -np.inf
        sgn[idx] = math.copysign(1.0, prod) if prod != 0 else 0.0
    return out, sgn


def _series_float(p: DiscreteMLParams, n: int, tol: float, j_max: int):
    lam = p.lam
    if lam == 0:
        lc, sg = _log_coeffs(p.alpha, p.beta, n, np.array([0.0]))
        return complex(sg[0] * math.exp(lc[0])), 1, 0.0, float(lc[0])
    llam = math.log(abs(lam))
    arg = np.angle(lam)
    total = 0j
    peak = -np.inf
    small = 0
    grow = 0
    prev = None
    block = 64
    j0 = 0
    while True:
        j = np.arange(j0, j0 + block, dtype=float)
        lc, sg = _log_coeffs(p.alpha, p.beta, n, j)
        lmag = j * llam + lc
        if np.any(lmag > 700):
            raise DivergenceError(f"Mittag-Leffler terms overflow at n={n} (|lam|={abs(lam):g})")
        if lam.imag == 0:
            phase = np.where(j % 2 == 1, math.copysign(1.0, lam.real), 1.0)
        else:
            phase = np.exp(1j * arg * j)
        terms = sg * np.exp(lmag) * phase
        mags = np.abs(terms)
        for i in range(block):
            t = terms[i]
            total += t
            mag = mags[i]
            if mag > 0:
                peak = max(peak, lmag[i])
            if prev is not None and mag > prev:
                grow += 1
                if grow > j_max:
                    raise DivergenceError(f"terms grew for more than {j_max} consecutive steps")
            else:
                grow = 0
            decreasing = prev is None or mag <= prev
            # also wait until the terms are below the rounding level of the
            # largest one, so a cancelled float sum is not mistaken for converged
            settled = mag <= tol * abs(total) and (mag == 0 or lmag[i] <= peak + _LOG_EPS)
            if decreasing and settled:
                small += 1
                if small >= 5:
                    jt = j0 + i + 1
                    size = abs(total)
                    cancel = (peak / math.log(10) - math.log10(size)) if size > 0 else np.inf
                    return total, jt, cancel, peak
            else:
                small = 0
            prev = mag
        j0 += block
        if j0 > 100 * j_max:
            raise DivergenceError("series did not settle")


def _window_mp(p: DiscreteMLParams, ns: np.ndarray, terms: np.ndarray, peak_log10: float, tol: float) -> np.ndarray:
    """Re-sum at the sorted points ``ns`` in mpmath with ``16 + cancellation + 6`` digits.

    Each term is carried from one ``n`` to the next by the ratio
    ``(j alpha + beta + n - 1) / n``, so a window costs one rising factorial
    per ``j``.  The cancellation is measured against the high-precision sums
    and the window is redone with more digits if the first guess was short.
    Beyond ``terms[i]`` the series at ``ns[i]`` is extended until five
    consecutive decreasing terms fall below ``tol`` times its sum.
    """
    guard = 6 + int(math.ceil(math.log10(ns[-1] - ns[0] + 1)))
    digits = 16 + max(0, int(math.ceil(peak_log10))) + guard
    count = ns.size
    for _ in range(8):
        with mpmath.workdps(digits):
            lam = mpmath.mpc(p.lam.real, p.lam.imag)
            alpha = mpmath.mpf(p.alpha)
            beta = mpmath.mpf(p.beta)
            n0 = int(ns[0])
            fact = mpmath.factorial(n0 - 1)
            totals = [mpmath.mpc(0)] * count
            prev = [None] * count
            small = [0] * count
            open_ = count
            lj = mpmath.mpc(1)
            j = 0
            while open_:
                pj = j * alpha + beta
                term = lj * mpmath.rf(pj, n0 - 1) / fact
                n = n0
                for i in range(count):
                    while n < ns[i]:
                        term = term * (pj + (n - 1)) / n
                        n += 1
                    if small[i] >= 5:
                        continue
                    totals[i] += term
                    mag = abs(term)
                    if j >= terms[i] and prev[i] is not None and mag <= prev[i] and mag <= tol * abs(totals[i]):
                        small[i] += 1
                        if small[i] >= 5:
                            open_ -= 1
                    else:
                        small[i] = 0
                    prev[i] = mag
                lj *= lam
                j += 1
            cancel = 0.0
            for tot in totals:
                size = abs(tot)
                if size > 0:
                    cancel = max(cancel, peak_log10 - float(mpmath.log10(size)))
            need = 16 + int(math.ceil(cancel)) + guard
            out = np.array([complex(tot) for tot in totals])
            if need <= digits:
                return out
            digits = need
    return out


def dml_eval(p: DiscreteMLParams, k, tol: float = 1e-17, j_max: int = 10_000):
    """``F_{alpha,beta}(lam, k, a)`` at one grid point or an array of them.

    Terms are summed until five consecutive decreasing terms fall below
    ``tol`` times the running sum (and below the rounding level of the largest
    term).  When the largest term exceeds the sum by more than an order of
    magnitude the series is re-summed in mpmath with the lost digits added
    back.
    """
    ks = np.atleast_1d(np.asarray(k, dtype=float))
    ns = np.round(ks - p.a).astype(int)
    if np.any(np.abs(ks - p.a - ns) > 1e-9) or np.any(ns < 1):
        raise ValueError("k must lie in N_(a+1)")
    if abs(p.lam) >= 1 and p.lam != 0:
        raise DivergenceError(
            f"the series diverges for |lam| = {abs(p.lam):g} >= 1"
        )
    out = np.empty(ns.shape, dtype=complex)
    redo: dict[int, tuple[int, float]] = {}
    for i, n in enumerate(ns):
        val, terms, cancel, peak = _series_float(p, int(n), tol, j_max)
        out[i] = val
        if cancel > _CANCEL_DIGITS:
            redo[int(n)] = (terms, peak / math.log(10))
    if redo:
        pts = np.array(sorted(redo))
        terms = np.array([redo[n][0] for n in pts])
        vals = _window_mp(p, pts, terms, max(v[1] for v in redo.values()), tol)
        lookup = dict(zip(pts.tolist(), vals))
        for i, n in enumerate(ns):
            if int(n) in lookup:
                out[i] = lookup[int(n)]
    return complex(out[0]) if np.ndim(k) == 0 else out


def dml_window(p: DiscreteMLParams, count: int, **kw) -> np.ndarray:
    """``F`` at ``k = a + 1 .. a + count``."""
    return dml_eval(p, p.a + np.arange(1, count + 1), **kw)


def dml_signal(p: DiscreteMLParams) -> GridSignal:
    """``k -> F_{alpha,beta}(lam, k, a)`` as a generator-backed signal.

    Samples are memoised, so repeated transforms of one signal evaluate each
    point once.
    """
    cache = np.zeros(0, dtype=complex)

    def gen(m):
        nonlocal cache
        m = np.asarray(m)
        out = np.zeros(m.shape, dtype=complex)
        pos = m >= 1
        if np.any(pos):
            top = int(m[pos].max())
            if top > cache.size:
                fresh = dml_eval(p, p.a + np.arange(cache.size + 1, top + 1))
                cache = np.concatenate([cache, fresh])
            out[pos] = cache[m[pos].astype(int) - 1]
        return out

    return GridSignal.from_function(p.a, gen)
