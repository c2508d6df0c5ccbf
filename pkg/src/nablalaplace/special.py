"""Gamma-family helpers and binomial coefficient streams.

Every operator in the package reduces to sums weighted by
``(-1)^j binom(nu, j)`` for some real ``nu``.  Those weights are produced by a
two-term recurrence rather than by per-term Gamma evaluations, so they stay
finite far beyond the point where ``Gamma(j + nu)`` overflows.
"""

from __future__ import annotations

import enum
import math
import threading
from functools import lru_cache

import numpy as np
from scipy import special as sp

__all__ = [
    "CoeffKind",
    "CoeffStream",
    "GammaPoleError",
    "UndefinedRatioError",
    "coeff_stream",
    "log_gamma",
    "log_rising",
    "rising_factorial",
    "rising_power",
    "signed_binomial_coeffs",
    "sum_weights",
]


class GammaPoleError(ValueError):
    """Raised when the Gamma function is evaluated at a pole."""


class UndefinedRatioError(ValueError):
    """Raised when ``Gamma(p + q) / Gamma(p)`` has no finite value."""


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def log_gamma(z: complex) -> complex:
    """Principal branch of ``log Gamma(z)``.

    Raises :class:`GammaPoleError` for ``z`` in ``{0, -1, -2, ...}``.
    """
    z = complex(z)
    if z.imag == 0 and _is_nonpositive_integer(z.real):
        raise GammaPoleError(f"Gamma has a pole at z={z.real:g}")
    return complex(sp.loggamma(z))


# Stirling coefficients B_{2k} / (2k (2k - 1)), k = 1..7
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)
_SHIFT = 12.0


def _log_rising_positive(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """``log(Gamma(p + q) / Gamma(p))`` for ``p > 0`` and ``p + q > 0``.

    Both arguments are shifted above ``_SHIFT`` by the functional equation and
    the difference of the Stirling series is formed with ``log1p`` so that the
    result keeps full relative accuracy even when ``p`` is large and ``q`` is
    small (a plain ``gammaln`` difference loses ``log10(gammaln(p))`` digits).
    """
    p = np.array(p, dtype=float)
    q = np.array(q, dtype=float)
    p, q = np.broadcast_arrays(p, q)
    p = p.copy()
    acc = np.zeros(p.shape)
    low = np.minimum(p, p + q)
    nshift = np.maximum(0.0, np.ceil(_SHIFT - low)).astype(int)
    for i in range(int(nshift.max(initial=0))):
        m = nshift > i
        # Gamma(p+q)/Gamma(p) = Gamma(p+q+1)/Gamma(p+1) * p/(p+q)
        acc[m] += np.log(p[m]) - np.log(p[m] + q[m])
        p[m] += 1.0
    x = p
    y = p + q
    out = (x - 0.5) * np.log1p(q / x) + q * np.log(y) - q
    for k, c in enumerate(_STIRLING, start=1):
        e = 1 - 2 * k
        out += c * (y**e - x**e)
    return out + acc


def _lgamma_sign(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``log|Gamma(z)|`` and ``sign(Gamma(z))`` for real ``z`` off the poles."""
    z = np.asarray(z, dtype=float)
    lg = np.empty(z.shape)
    sg = np.ones(z.shape)
    pos = z > 0
    lg[pos] = sp.gammaln(z[pos])
    neg = ~pos
    if np.any(neg):
        # reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        zn = z[neg]
        sn = np.sin(np.pi * zn)
        lg[neg] = math.log(math.pi) - np.log(np.abs(sn)) - sp.gammaln(1.0 - zn)
        sg[neg] = np.sign(sn)
    return lg, sg


def log_rising(p, q) -> tuple[np.ndarray, np.ndarray]:
    """Log-magnitude and sign of ``Gamma(p + q) / Gamma(p)`` (vectorised).

    Both ``p`` and ``p + q`` must avoid the Gamma poles.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    p, q = np.broadcast_arrays(p, q)
    out = np.empty(p.shape)
    sgn = np.ones(p.shape)
    good = (p > 0) & (p + q > 0)
    if np.any(good):
        out[good] = _log_rising_positive(p[good], q[good])
    bad = ~good
    if np.any(bad):
        lnum, snum = _lgamma_sign(p[bad] + q[bad])
        lden, sden = _lgamma_sign(p[bad])
        out[bad] = lnum - lden
        sgn[bad] = snum * sden
    return out, sgn


def rising_factorial(p: float, q: float) -> float:
    """Rising function ``p^(q) = Gamma(p + q) / Gamma(p)``.

    Removable cases are resolved by their limits: the value is ``0`` when only
    ``Gamma(p)`` is at a pole, and a finite product when ``q`` is an integer.
    """
    p = float(p)
    q = float(q)
    if q == 0.0:
        return 1.0
    if q.is_integer() and abs(q) <= 64:
        n = int(q)
        if n > 0:
            return math.prod(p + i for i in range(n))
        den = math.prod(p - i for i in range(1, -n + 1))
        if den == 0.0:
            raise UndefinedRatioError(
                f"Gamma({p + q:g})/Gamma({p:g}) is infinite (numerator pole)"
            )
        return 1.0 / den
    p_pole = _is_nonpositive_integer(p)
    pq_pole = _is_nonpositive_integer(p + q)
    if pq_pole and not p_pole:
        raise UndefinedRatioError(
            f"Gamma({p + q:g})/Gamma({p:g}) is infinite (numerator pole)"
        )
    if p_pole and not pq_pole:
        return 0.0
    if p_pole and pq_pole:
        # both poles with a large integer gap: ratio of residues
        n, m = -int(p + q), -int(p)
        lval = sp.gammaln(m + 1) - sp.gammaln(n + 1)
        return (-1.0) ** (n - m) * math.exp(lval)
    lval, sgn = log_rising(p, q)
    return float(sgn * np.exp(lval))


def rising_power(n, q: float) -> np.ndarray:
    """``n^(q)`` for integer ``n >= 1`` (vectorised over ``n``).

    This is ``(k - a)^(q)`` on the grid ``k = a + n``.  Returns ``0`` where the
    rising function vanishes (``q`` a negative integer with ``n + q <= 0``
    cannot occur for the ``q`` used in transform pairs and raises).
    """
    n = np.asarray(n, dtype=float)
    if np.any(n < 1) or np.any(n != np.round(n)):
        raise ValueError("rising_power expects integer offsets n >= 1")
    if q == 0.0:
        return np.ones(n.shape)
    if float(q).is_integer() and q < 0 and np.any(n + q <= 0):
        raise UndefinedRatioError(f"n^({q:g}) is infinite for n <= {-q:g}")
    lval, sgn = log_rising(n, q)
    return sgn * np.exp(lval)


class CoeffKind(enum.Enum):
    """Which binomial stream a :class:`CoeffStream` produces."""

    SIGNED_BINOMIAL = "signed-binomial"
    """``(-1)^j binom(order, j)``: difference-type weights."""
    RISING_RATIO = "rising-ratio"
    """``Gamma(j + order) / (Gamma(order) Gamma(j + 1))``: sum-type weights."""


class CoeffStream:
    """Lazily grown, thread-safe cache of binomial weights.

    Both kinds obey ``c_0 = 1`` and ``c_j = c_{j-1} * (j - 1 + shift) / j`` with
    ``shift = -order`` (signed binomial) or ``shift = +order`` (rising ratio).
    Published arrays are read-only and never mutated afterwards.
    """

    def __init__(self, order: float, kind: CoeffKind = CoeffKind.SIGNED_BINOMIAL):
        self.order = float(order)
        self.kind = CoeffKind(kind)
        self._shift = -self.order if self.kind is CoeffKind.SIGNED_BINOMIAL else self.order
        self._lock = threading.Lock()
        self._cache = self._extend(np.ones(1), 16)

    def _extend(self, old: np.ndarray, size: int) -> np.ndarray:
        j = np.arange(old.size, size, dtype=float)
        factors = (j - 1.0 + self._shift) / j
        tail = old[-1] * np.cumprod(factors)
        out = np.concatenate([old, tail])
        if not np.all(np.isfinite(out)):
            raise OverflowError(
                f"non-finite binomial weight for order={self.order:g} below j={size}"
            )
        out.setflags(write=False)
        return out

    def take(self, count: int) -> np.ndarray:
        """First ``count`` coefficients as a read-only array."""
        if count < 0:
            raise ValueError("count must be non-negative")
        cache = self._cache
        if cache.size < count:
            with self._lock:
                cache = self._cache
                if cache.size < count:
                    size = max(count, 2 * cache.size)
                    cache = self._extend(cache, size)
                    self._cache = cache
        return cache[:count]

    def __repr__(self) -> str:
        return f"CoeffStream(order={self.order!r}, kind={self.kind.value!r})"


@lru_cache(maxsize=256)
def coeff_stream(order: float, kind: CoeffKind = CoeffKind.SIGNED_BINOMIAL) -> CoeffStream:
    """Shared :class:`CoeffStream` for ``(order, kind)``."""
    return CoeffStream(order, kind)


def signed_binomial_coeffs(alpha: float, count: int) -> np.ndarray:
    """``w_j = (-1)^j binom(alpha, j)`` for ``j = 0 .. count - 1``.

    A negative ``alpha`` gives the fractional-sum weights of order ``-alpha``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    return coeff_stream(float(alpha)).take(count)


def sum_weights(alpha: float, count: int) -> np.ndarray:
    """Fractional-sum weights ``Gamma(j + alpha) / (Gamma(alpha) Gamma(j + 1))``."""
    return coeff_stream(float(alpha), CoeffKind.RISING_RATIO).take(count)
