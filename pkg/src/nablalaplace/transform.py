"""The nabla Laplace transform ``X(s) = sum_{k>=1} (1-s)^(k-1) x(k+a)``.

``X`` is a power series in ``w = 1 - s`` whose coefficients are the samples of
``x``, so most operations here are statements about power series in ``w``:
the inverse transform is a Cauchy coefficient integral on a circle around
``s = 1``, the value theorems are limits ``w -> 0`` and the frequency-domain
product and Parseval rules are Hadamard products of two series.

All contour integrals use the trapezoid rule on circles centred at ``s = 1``;
the integrands are analytic in an annulus so convergence is geometric in the
node count and is checked by doubling.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.special import gamma as _gamma

from .signals import GridSignal

__all__ = [
    "Contour",
    "ContourError",
    "contour_report_json",
    "grid_csv",
    "DivergenceError",
    "LimitError",
    "NablaTransform",
    "NonConvergenceError",
    "OutsideRegionError",
    "PoleOnContourError",
    "PreconditionError",
    "energy",
    "final_value",
    "forward_transform",
    "freq_derivative",
    "freq_path_integral",
    "geometric_transform",
    "impulse_transform",
    "initial_value",
    "inverse_transform",
    "ml_transform",
    "multiply_in_frequency",
    "parseval_inner_product",
    "principal_poles",
    "rising_transform",
    "step_transform",
    "taylor_coefficients",
    "value_at",
]


class DivergenceError(ArithmeticError):
    """A series failed to converge within its term budget."""


class OutsideRegionError(ValueError):
    """A requested point (or stencil, segment) leaves the region of convergence."""


class ContourError(ValueError):
    """The contour is not admissible for the transform being integrated."""


class PoleOnContourError(ContourError):
    pass


class NonConvergenceError(ArithmeticError):
    """Node doubling or extrapolation did not settle."""


class LimitError(ArithmeticError):
    """An extrapolated limit is not finite or does not settle."""


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class NablaTransform:
    """An evaluatable transform ``X(s)`` with what is known about its singularities.

    ``roc_radius`` is the radius ``r`` of the disk ``|s - 1| < r`` on which
    ``func`` is valid; ``poles`` lists known singular points (poles and branch
    points).  ``small_s_exponent`` is the power ``g`` such that ``s X(s)`` is
    analytic in ``s^g`` near ``s = 0`` (used by :func:`final_value`).
    """

    func: Callable[[np.ndarray], np.ndarray]
    roc_radius: float = math.inf
    poles: tuple[complex, ...] = ()
    provenance: str = "closed-form"
    derivative: Callable[[np.ndarray], np.ndarray] | None = None
    small_s_exponent: float = 1.0
    coefficients: np.ndarray | None = field(default=None, repr=False)

    def __call__(self, s):
        s_arr = np.asarray(s, dtype=complex)
        out = np.asarray(self.func(s_arr), dtype=complex)
        out = np.broadcast_to(out, s_arr.shape)
        return complex(out) if out.ndim == 0 else np.array(out)

    @property
    def analyticity_radius(self) -> float:
        """Distance from ``s = 1`` to the nearest listed singularity or ROC edge."""
        dists = [abs(complex(p) - 1.0) for p in self.poles]
        return min([self.roc_radius, *dists])

    def __add__(self, other: NablaTransform) -> NablaTransform:
        return transform_sum([self, other], [1.0, 1.0])

    def scaled(self, c: complex) -> NablaTransform:
        return transform_sum([self], [c])

    @classmethod
    def from_signal(
        cls,
        x: GridSignal,
        radius: float | None = None,
        tol: float = 1e-17,
        k_max: int = 200_000,
    ) -> NablaTransform:
        """Numeric transform of ``x`` as a truncated power series in ``1 - s``.

        The truncation order is fixed once, from a root-test growth estimate
        ``|x(a+k)| <= M r^k``, so that the tail is below ``tol`` (relative to
        the largest sample) everywhere on ``|s - 1| <= radius``.  Evaluation
        outside that disk raises :class:`OutsideRegionError`.
        """
        if x.is_finite:
            coeffs = np.array(x.samples)
            roc = math.inf if radius is None else float(radius)
        else:
            coeffs, roc = _series_prefix(x, radius, tol, k_max)
        coeffs.setflags(write=False)
        deriv_coeffs = coeffs[1:] * np.arange(1, coeffs.size)
        limit = roc

        def func(s):
            w = 1.0 - np.asarray(s, dtype=complex)
            if np.any(np.abs(w) > limit * (1 + 1e-12)):
                raise OutsideRegionError(
                    f"|s - 1| exceeds the certified radius {limit:g} of this series"
                )
            return np.polynomial.polynomial.polyval(w, coeffs)

        def deriv(s):
            w = 1.0 - np.asarray(s, dtype=complex)
            return -np.polynomial.polynomial.polyval(w, deriv_coeffs)

        return cls(func, roc, (), "numeric-series", deriv, 1.0, coeffs)


def _series_prefix(x: GridSignal, radius, tol, k_max) -> tuple[np.ndarray, float]:
    probe = 512
    while True:
        vals = x.window(probe)
        mags = np.abs(vals)
        nz = np.nonzero(mags)[0]
        if nz.size == 0:
            return np.zeros(1, dtype=complex), math.inf if radius is None else radius
        last = nz[-1] + 1
        if last <= probe // 2:
            # effectively finite (decayed to exact zero / underflow)
            return vals[:last].copy(), math.inf if radius is None else radius
        k = np.arange(1, probe + 1)
        half = slice(probe // 2, probe)
        good = mags[half] > 0
        r_hat = float(np.max(mags[half][good] ** (1.0 / k[half][good])))
        roc = 1.0 / r_hat
        R = min(0.9 * roc, 2.0) if radius is None else float(radius)
        q = r_hat * R
        if q >= 1.0:
            raise DivergenceError(
                f"series radius estimate {roc:g} does not cover |s-1| <= {R:g}"
            )
        nzm = mags > 0
        log_M = float(np.max(np.log(mags[nzm]) - k[nzm] * math.log(r_hat)))
        scale = float(mags.max())
        need = (math.log(tol * scale * (1 - q)) - log_M) / math.log(q)
        K = max(1, math.ceil(need))
        if K <= probe:
            return vals[:K].copy(), R
        if K > k_max:
            raise DivergenceError(f"needs {K} terms (> k_max={k_max})")
        probe = 2 * probe


def transform_sum(items: Sequence[NablaTransform], coeffs: Sequence[complex]) -> NablaTransform:
    """``sum c_i X_i`` with the union of singularities."""
    items = list(items)
    coeffs = [complex(c) for c in coeffs]
    poles = tuple(dict.fromkeys(p for X in items for p in X.poles))

    def func(s):
        return sum(c * np.asarray(X.func(s), dtype=complex) for X, c in zip(items, coeffs))

    deriv = None
    if all(X.derivative is not None for X in items):
        def deriv(s):
            return sum(c * np.asarray(X.derivative(s), dtype=complex) for X, c in zip(items, coeffs))

    prov = "closed-form" if all(X.provenance == "closed-form" for X in items) else "numeric-series"
    expo = min(X.small_s_exponent for X in items)
    return NablaTransform(func, min(X.roc_radius for X in items), poles, prov, deriv, expo)


# closed forms


def step_transform() -> NablaTransform:
    """Transform of the unit step ``u(k - a - 1)``: ``1/s``."""
    return NablaTransform(lambda s: 1.0 / s, 1.0, (0j,), derivative=lambda s: -1.0 / s**2)


def impulse_transform() -> NablaTransform:
    """Transform of ``delta(k - a - 1)``: ``1``."""
    return NablaTransform(
        lambda s: np.ones_like(s, dtype=complex), derivative=lambda s: np.zeros_like(s, dtype=complex)
    )


def rising_transform(alpha: float) -> NablaTransform:
    """Transform of the rising power ``(k - a)^(alpha)``: ``Gamma(alpha+1)/s^(alpha+1)``."""
    g = float(_gamma(alpha + 1.0))
    return NablaTransform(
        lambda s: g / np.power(s, alpha + 1.0),
        1.0,
        (0j,),
        derivative=lambda s: -(alpha + 1.0) * g / np.power(s, alpha + 2.0),
    )


def geometric_transform(q: complex, c: complex = 1.0) -> NablaTransform:
    """Transform of ``c q^(k-a-1)``: ``c / (1 - q (1 - s))``."""
    q = complex(q)
    c = complex(c)
    if q == 0:
        return impulse_transform().scaled(c)
    pole = 1.0 - 1.0 / q
    return NablaTransform(
        lambda s: c / (1.0 - q * (1.0 - s)),
        math.inf,
        (pole,),
        derivative=lambda s: -c * q / (1.0 - q * (1.0 - s)) ** 2,
    )


def principal_poles(alpha: float, lam: complex) -> list[complex]:
    """Roots of ``s^alpha = lam`` with ``s^alpha`` on the principal branch."""
    lam = complex(lam)
    if lam == 0:
        return [0j]
    r = abs(lam) ** (1.0 / alpha)
    phi = np.angle(lam)
    out = []
    kmax = int(math.ceil(alpha)) + 1
    for k in range(-kmax, kmax + 1):
        ang = (phi + 2 * math.pi * k) / alpha
        if -math.pi < ang <= math.pi or math.isclose(ang, math.pi, abs_tol=1e-14):
            out.append(complex(r * math.cos(ang), r * math.sin(ang)))
    return out


def ml_transform(alpha: float, beta: float, lam: complex) -> NablaTransform:
    """Transform ``s^(alpha - beta) / (s^alpha - lam)`` of the discrete Mittag-Leffler function."""
    lam = complex(lam)
    poles = tuple(dict.fromkeys([0j, *principal_poles(alpha, lam)]))

    def func(s):
        sa = np.power(s, alpha)
        return np.power(s, alpha - beta) / (sa - lam)

    def deriv(s):
        sa = np.power(s, alpha)
        num = np.power(s, alpha - beta)
        return ((alpha - beta) * num / s * (sa - lam) - num * alpha * sa / s) / (sa - lam) ** 2

    return NablaTransform(func, 1.0, poles, derivative=deriv, small_s_exponent=alpha)


# forward transform


def forward_transform(
    x: GridSignal,
    s: complex,
    tol: float = 1e-14,
    k_max: int = 1_000_000,
    full_output: bool = False,
):
    """Sum ``sum_{k>=1} (1-s)^(k-1) x(k+a)`` with truncation control.

    Finite signals are summed exactly.  Otherwise terms are taken in blocks and
    the tail after ``K`` terms is bounded by a geometric majorant fitted to the
    block maxima; summation stops once that bound is below
    ``tol * max(1, |partial sum|)``.  With ``full_output`` the truncation
    ``K`` and tail bound are also returned.
    """
    s = complex(s)
    w = 1.0 - s
    if x.is_finite:
        value = complex(np.polynomial.polynomial.polyval(w, x.samples)) if x.samples.size else 0j
        info = {"K": x.samples.size, "tail": 0.0}
        return (value, info) if full_output else value
    block = 256
    total = 0j
    K = 0
    prev_peak = None
    zero_blocks = 0
    tail = math.inf
    while K < k_max:
        m = np.arange(K + 1, K + block + 1)
        with np.errstate(under="ignore", over="ignore", invalid="ignore"):
            terms = x.at(m) * np.power(w, m - 1)
        if not np.all(np.isfinite(terms)):
            raise DivergenceError(f"non-finite terms near k = a + {K + block}")
        total += terms.sum()
        peak = float(np.abs(terms).max())
        K += block
        if peak == 0.0:
            zero_blocks += 1
            if zero_blocks >= 2:
                tail = 0.0
                break
            continue
        zero_blocks = 0
        if prev_peak:
            q = (peak / prev_peak) ** (1.0 / block)
            if q < 1.0:
                tail = peak * q / (1.0 - q)
                if tail <= tol * max(1.0, abs(total)):
                    break
        prev_peak = peak
    else:
        raise DivergenceError(
            f"partial sums did not settle within k_max={k_max} terms at s={s}"
        )
    info = {"K": K, "tail": tail}
    return (complex(total), info) if full_output else complex(total)


# contour machinery


@dataclass(frozen=True)
class Contour:
    """Circle ``|s - 1| = radius`` traversed clockwise, sampled at ``nodes`` points."""

    radius: float = 0.5
    nodes: int = 64
    center: complex = 1.0 + 0j
    orientation: str = "clockwise"

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("contour radius must be positive")
        if self.nodes < 16 or self.nodes % 2:
            raise ValueError("contour needs an even node count >= 16")
        if complex(self.center) != 1:
            raise ValueError("the inversion contour is centred at s = 1")
        if self.orientation != "clockwise":
            raise ValueError("the inversion contour is traversed clockwise")

    @classmethod
    def auto(cls, X: NablaTransform, nodes: int = 64) -> Contour:
        """``0.9`` times the analyticity radius, capped at ``1``."""
        R = X.analyticity_radius
        return cls(min(0.9 * R, 1.0) if math.isfinite(R) else 1.0, nodes)

    def points(self, nodes: int | None = None) -> np.ndarray:
        n = self.nodes if nodes is None else nodes
        theta = 2 * np.pi * np.arange(n) / n
        return 1.0 - self.radius * np.exp(1j * theta)


def _check_contour(X: NablaTransform, rho: float) -> None:
    for p in X.poles:
        d = abs(complex(p) - 1.0)
        if abs(d - rho) <= 1e-12 * max(1.0, rho):
            raise PoleOnContourError(f"singularity {complex(p)} lies on |s-1| = {rho:g}")
        if d < rho:
            raise ContourError(f"singularity {complex(p)} lies inside |s-1| = {rho:g}")
    if rho >= X.roc_radius:
        raise ContourError(f"contour radius {rho:g} reaches the ROC edge {X.roc_radius:g}")


def _cauchy_coeffs(X: NablaTransform, rho: float, nodes: int, with_peak: bool = False):
    """Trapezoid approximation of the power-series coefficients of ``X(1 - w)``.

    With ``s = 1 - rho e^{i theta}`` and ``theta`` running backwards the curve
    is clockwise about ``s = 1``; the ``1/(2 pi i)`` contour integral then
    reduces to the mean over ``theta``, i.e. a forward FFT.
    """
    theta = 2 * np.pi * np.arange(nodes) / nodes
    vals = np.asarray(X(1.0 - rho * np.exp(1j * theta)), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise PoleOnContourError("transform is not finite on the contour")
    coeffs = np.fft.fft(vals) / nodes
    return (coeffs, float(np.abs(vals).max())) if with_peak else coeffs


def inverse_transform(
    X: NablaTransform,
    contour: Contour | None,
    k,
    a: float = 0.0,
    tol: float = 1e-10,
    max_doublings: int = 5,
    full_output: bool = False,
):
    """``x(k) = (1/2 pi i) \\oint X(s) (1-s)^(a-k) ds`` on a clockwise circle about 1.

    ``k`` may be a scalar or an array of grid points.  The node count starts
    at ``contour.nodes`` and doubles (at most ``max_doublings`` times in
    total) until it exceeds ``max(k - a)`` and two successive quadratures
    agree to ``tol * max(1, |x|)``, or to the rounding floor
    ``64 eps max|X| rho^(1-m)`` when that is larger (small radii and large
    ``m``).
    """
    if contour is None:
        contour = Contour.auto(X)
    rho = contour.radius
    _check_contour(X, rho)
    m = np.atleast_1d(np.round(np.asarray(k, dtype=float) - a)).astype(int)
    if np.any(m < 1):
        raise ValueError("k must lie in N_(a+1)")
    scalar = np.ndim(k) == 0
    N = contour.nodes
    used = 0
    while N <= m.max():
        N *= 2
        used += 1

    amp = rho ** (-(m - 1.0))
    peak = 0.0

    def quad(n):
        nonlocal peak
        c, top = _cauchy_coeffs(X, rho, n, with_peak=True)
        peak = max(peak, top)
        with np.errstate(over="ignore"):
            return c[m - 1] * amp

    prev = quad(N)
    converged = False
    while used < max_doublings:
        N *= 2
        used += 1
        cur = quad(N)
        # rounding in the samples is amplified by rho^(1-m); doubling cannot beat it
        floor = 64 * np.finfo(float).eps * peak * amp
        if np.all(np.abs(cur - prev) <= tol * np.maximum(1.0, np.abs(cur)) + floor):
            converged = True
            prev = cur
            break
        prev = cur
    if not converged:
        raise NonConvergenceError(
            f"contour quadrature not converged after {max_doublings} doublings (N={N})"
        )
    value = complex(prev[0]) if scalar else prev
    if full_output:
        return value, {"rho": rho, "N": N, "converged": converged, "value": value}
    return value


def taylor_coefficients(
    X: NablaTransform, count: int, radius: float | None = None, tol: float = 1e-13
) -> np.ndarray:
    """First ``count`` coefficients of ``X`` as a power series in ``1 - s``.

    These are the samples ``x(a+1) .. x(a+count)``.
    """
    rho = Contour.auto(X).radius if radius is None else radius
    _check_contour(X, rho)
    n = 64
    while n < 2 * count:
        n *= 2
    scale = rho ** -np.arange(count)
    prev = _cauchy_coeffs(X, rho, n)[:count] * scale
    for _ in range(10):
        n *= 2
        cur = _cauchy_coeffs(X, rho, n)[:count] * scale
        if np.all(np.abs(cur - prev) <= tol * np.maximum(1.0, np.abs(cur))):
            return cur
        prev = cur
    raise NonConvergenceError("Taylor coefficients did not converge")


# frequency-domain calculus


def _stirling2(m: int) -> list[int]:
    """Stirling numbers of the second kind ``S(m, i)`` for ``i = 0..m``."""
    row = [1]
    for n in range(1, m + 1):
        new = [0] * (n + 1)
        for i in range(1, n + 1):
            new[i] = (row[i - 1] if i - 1 < len(row) else 0) + i * (row[i] if i < len(row) else 0)
        row = new
    return row


def freq_derivative(X: NablaTransform, s: complex, m: int = 1, method: str = "auto") -> complex:
    """``[-(1 - s) d/ds]^m X(s)``, the transform of ``(k - a - 1)^m x(k)``.

    ``method='stencil'`` (default for ``m = 1``) uses a fourth-order central
    difference with step ``1e-5 * max(1, |s-1|)``; ``'cauchy'`` (default for
    ``m > 1``) takes derivatives from a trapezoid Cauchy integral on a small
    circle about ``s`` and combines them as ``sum_i S(m,i) w^i f^(i)(w)`` with
    ``w = 1 - s``.  An exact derivative attached to ``X`` is used for ``m = 1``.
    """
    s = complex(s)
    w0 = 1.0 - s
    R = X.analyticity_radius
    if m < 1:
        raise ValueError("m must be >= 1")
    if method == "auto":
        if m == 1 and X.derivative is not None:
            return complex(-w0 * X.derivative(np.asarray(s)))
        method = "stencil" if m == 1 else "cauchy"
    if method == "stencil":
        if m != 1:
            raise ValueError("the stencil route computes m = 1 only")
        h = 1e-5 * max(1.0, abs(w0))
        if abs(w0) + 2 * h >= R:
            raise OutsideRegionError("difference stencil leaves the region of analyticity")
        f = X(np.array([s - 2 * h, s - h, s + h, s + 2 * h]))
        d = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
        return complex(-w0 * d)
    if method != "cauchy":
        raise ValueError(f"unknown method {method!r}")
    r = min(0.5 * (R - abs(w0)), 0.5) if math.isfinite(R) else 0.5
    if r <= 0:
        raise OutsideRegionError("s is not interior to the region of analyticity")
    n = 64
    while n < 4 * m:
        n *= 2
    theta = 2 * np.pi * np.arange(n) / n
    # g(u) = X(1 - (w0 + u)); Taylor coefficients of g in u
    vals = X(1.0 - (w0 + r * np.exp(1j * theta)))
    coef = np.fft.fft(vals) / n
    S = _stirling2(m)
    out = 0j
    for i in range(1, m + 1):
        deriv_i = coef[i] * math.factorial(i) / r**i
        out += S[i] * w0**i * deriv_i
    return complex(out)


def freq_path_integral(X: NablaTransform, s: complex, m: int = 0) -> complex:
    """``-(1 - s)^m \\int_1^s (1 - eta)^(-m-1) X(eta) d eta`` along the segment ``[1, s]``.

    The integrand is singular at ``eta = 1``.  The first ``m + 1`` terms of the
    power series of ``X`` in ``w = 1 - eta`` are integrated termwise (finite
    part, dropping the logarithmic ``k = m + 1`` term, whose time-domain factor
    ``1/(k - a - m - 1)`` is undefined); the remainder is integrated by
    adaptive Gauss-Kronrod on the outer part of the segment and by its series
    on a small disc around ``eta = 1``.  The result is the transform of
    ``x(k) / (k - a - m - 1)`` with the sample at ``k = a + m + 1`` set to zero.
    """
    s = complex(s)
    ws = 1.0 - s
    R = X.analyticity_radius
    if abs(ws) >= R:
        raise OutsideRegionError("segment [1, s] leaves the region of convergence")
    if ws == 0:
        return 0j
    rho_c = min(0.9 * R, 1.0) if math.isfinite(R) else 1.0
    extra = 64
    c = taylor_coefficients(X, m + 2 + extra, radius=rho_c)  # c[j] multiplies w^j
    head = c[: m + 1]
    # the remainder X - P loses about (m+1) log10(1/delta) digits, so keep delta large
    delta = 0.5 * rho_c
    if abs(ws) <= delta:
        w_inner = ws
    else:
        w_inner = ws * (delta / abs(ws))
    # inner part: series of the regular remainder, sum_{j>=m+1} c_j w^(j-m-1)
    j = np.arange(m + 1, c.size)
    inner = np.sum(c[m + 1 :] * w_inner ** (j - m) / (j - m))
    outer = 0j
    if w_inner != ws:
        span = ws - w_inner
        powers = np.arange(m + 1)

        def integrand(t):
            w = w_inner + t * span
            rem = complex(X(1.0 - w)) - np.sum(head * w**powers)
            return rem / w ** (m + 1) * span

        with warnings.catch_warnings():
            # the requested accuracy sits at the rounding floor; judge by the error estimate instead
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            outer, est = integrate.quad(
                integrand, 0.0, 1.0, complex_func=True, epsabs=1e-15, epsrel=1e-13, limit=200
            )
        if abs(est) > 1e-10 * max(1.0, abs(outer)):
            raise NonConvergenceError(f"path integral error estimate {abs(est):.2e} too large")
    reg = inner + outer
    fp = sum(head[jj] * ws**jj / (jj - m) for jj in range(m))
    return complex(ws**m * reg + fp)


def _auto_radius(lo: float, hi: float) -> float:
    if lo >= hi:
        raise OutsideRegionError(
            f"no admissible contour radius: need {lo:g} < rho < {hi:g}"
        )
    if lo == 0:
        return min(0.9 * hi, 1.0)
    # an entire or nearly entire X would otherwise push rho far out, where
    # its values (and their rounding) are huge
    return math.sqrt(lo * min(hi, max(1.0, 2.0 * lo)))


def _mean_converged(sample: Callable[[int], np.ndarray], nodes: int, tol: float, max_doublings: int):
    prev = sample(nodes).mean()
    n = nodes
    for _ in range(max_doublings):
        n *= 2
        cur = sample(n).mean()
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return complex(cur), n
        prev = cur
    raise NonConvergenceError(f"contour quadrature not converged at N={n}")


def multiply_in_frequency(
    X: NablaTransform,
    Y: NablaTransform,
    s: complex,
    contour: Contour | None = None,
    tol: float = 1e-12,
    max_doublings: int = 8,
) -> complex:
    """Transform of ``x(k) y(k)`` from ``X`` and ``Y``.

    ``(1/2 pi i) \\oint X(z) Y((s - z)/(1 - z)) (1 - z)^(-1) dz`` on a clockwise
    circle ``|z - 1| = rho``; the mapped point has ``1 - (s-z)/(1-z) =
    (1-s)/(1-z)`` so ``rho`` must satisfy ``|1-s|/R_Y < rho < R_X``.
    """
    s = complex(s)
    ws = 1.0 - s
    RX, RY = X.analyticity_radius, Y.analyticity_radius
    lo = abs(ws) / RY if math.isfinite(RY) else 0.0
    if contour is None:
        rho = _auto_radius(lo, RX)
        nodes = 64
    else:
        rho, nodes = contour.radius, contour.nodes
        if not (lo < rho < RX):
            raise OutsideRegionError(
                f"rho={rho:g} maps points outside the ROC (need {lo:g} < rho < {RX:g})"
            )

    def sample(n):
        wz = rho * np.exp(2j * np.pi * np.arange(n) / n)
        return np.asarray(X(1.0 - wz)) * np.asarray(Y(1.0 - ws / wz))

    value, _ = _mean_converged(sample, nodes, tol, max_doublings)
    return value


def parseval_inner_product(
    X: NablaTransform,
    Y: NablaTransform,
    contour: Contour | None = None,
    tol: float = 1e-12,
    max_doublings: int = 10,
) -> complex:
    """``sum_k x(k) conj(y(k))`` from the transforms.

    Evaluated as ``(1/2 pi) \\int X(1 + rho e^{i t}) conj(Y(1 + e^{i t}/rho)) dt``
    with ``1/R_Y < rho < R_X`` (``rho = 1`` when admissible).
    """
    RX, RY = X.analyticity_radius, Y.analyticity_radius
    lo = 1.0 / RY if math.isfinite(RY) else 0.0
    if contour is None:
        if lo < 1.0 < RX:
            rho = 1.0
        else:
            rho = _auto_radius(lo, RX)
        nodes = 64
    else:
        rho, nodes = contour.radius, contour.nodes
        if not (lo < rho < RX):
            raise OutsideRegionError(f"rho={rho:g} outside the admissible band ({lo:g}, {RX:g})")

    def sample(n):
        e = np.exp(2j * np.pi * np.arange(n) / n)
        return np.asarray(X(1.0 + rho * e)) * np.conj(np.asarray(Y(1.0 + e / rho)))

    value, _ = _mean_converged(sample, nodes, tol, max_doublings)
    return value


def energy(X: NablaTransform, tol: float = 1e-12, nodes: int = 64) -> float:
    """``(1/2 pi) \\int |X(1 + e^{i t})|^2 dt``, the signal energy when ``R_X > 1``."""
    if not X.analyticity_radius > 1.0:
        raise OutsideRegionError("energy form needs the transform analytic on |s-1| <= 1")

    def sample(n):
        return np.abs(np.asarray(X(1.0 + np.exp(2j * np.pi * np.arange(n) / n)))) ** 2

    value, _ = _mean_converged(sample, nodes, tol, 10)
    return value.real


# value theorems


def _neville_zero(t: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Diagonal of the Neville table extrapolating ``f(t)`` to ``t = 0``."""
    n = t.size
    table = np.array(f, dtype=complex)
    diag = [table[0]]
    cols = table.copy()
    for j in range(1, n):
        new = np.empty(n - j, dtype=complex)
        for i in range(n - j):
            new[i] = (t[i] * cols[i + 1] - t[i + j] * cols[i]) / (t[i] - t[i + j])
        cols = new
        diag.append(cols[0])
    return np.array(diag)


def _ladder_limit(f: Callable[[np.ndarray], np.ndarray], t: np.ndarray, u: np.ndarray, tol: float):
    vals = np.asarray(f(t), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise LimitError("non-finite values on the extrapolation ladder")
    # order rungs from the smallest t so that the last diagonal uses all points
    order = np.argsort(u)
    ext = _neville_zero(u[order], vals[order])
    last, prev = ext[-1], ext[-2]
    if not np.isfinite(last) or abs(last - prev) > tol * max(1.0, abs(last)):
        raise LimitError(
            f"extrapolants did not settle: last two differ by {abs(last - prev):.3g}"
        )
    return complex(last)


_LADDER = 2.0 ** -np.arange(4, 11)


def initial_value(X: NablaTransform, tol: float = 1e-10) -> complex:
    """``x(a + 1) = lim_{s -> 1} X(s)`` by Richardson extrapolation on ``s = 1 - 2^-p``, ``p = 4..10``."""
    return _ladder_limit(lambda t: X(1.0 - t), _LADDER, _LADDER, tol)


def value_at(
    X: NablaTransform,
    m: int,
    known_prefix: Sequence[complex] | None = None,
    method: str = "auto",
    tol: float = 1e-8,
) -> complex:
    """``x(a + m)`` from ``X``.

    ``'limit'`` evaluates ``lim_{s->1} [X(s) - sum_{k<m} (1-s)^(k-1) x(a+k)] /
    (1-s)^(m-1)`` by Richardson extrapolation.  Dividing by ``(1-s)^(m-1)``
    amplifies rounding by ``t^(1-m)``, so the ladder is rescaled with ``m``
    and the route is only reliable for small ``m``.  ``'coefficient'`` reads
    the ``(m-1)``-th power-series coefficient from a Cauchy integral.
    ``'auto'`` uses the limit when its rounding floor is below ``tol`` and the
    coefficient otherwise.  ``known_prefix`` holds ``x(a+1) .. x(a+m-1)``; when
    omitted it is produced by repeated application.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if method == "coefficient":
        return complex(taylor_coefficients(X, m)[m - 1])
    if method not in ("limit", "auto"):
        raise ValueError(f"unknown method {method!r}")
    if m == 1:
        return initial_value(X, tol=min(tol, 1e-10))
    if known_prefix is None:
        known_prefix = [value_at(X, j, None, method, tol) for j in range(1, m)]
    prefix = np.asarray(known_prefix, dtype=complex)[: m - 1]
    if prefix.size != m - 1:
        raise ValueError(f"known_prefix needs {m - 1} values")
    R = X.analyticity_radius
    t0 = min(R, 1.0) * 2.0**-4 if math.isfinite(R) else 2.0**-4
    # rungs t0 * 2^(-p/(m-1)), p = 0..6, so the amplification stays near 2^(6 + 4(m-1))
    ladder = t0 * 2.0 ** (-np.arange(7) / max(1, m - 1))
    scale = float(np.max(np.abs(X(1.0 - ladder))))
    floor = np.finfo(float).eps * scale / ladder.min() ** (m - 1) * 1e3
    if method == "auto" and floor > tol:
        return complex(taylor_coefficients(X, m)[m - 1])
    powers = np.arange(m - 1)

    def g(t):
        t = np.asarray(t)
        poly = np.array([np.sum(prefix * tt**powers) for tt in t])
        return (X(1.0 - t) - poly) / t ** (m - 1)

    return _ladder_limit(g, ladder, ladder, tol)


def final_value(X: NablaTransform, tol: float = 1e-8) -> complex:
    """``x(a + inf) = lim_{s -> 0} s X(s)``.

    Refused unless every listed singularity other than ``s = 0`` (which the
    factor ``s`` may cancel) satisfies ``|p - 1| > 1``.  The limit is taken by
    Richardson extrapolation on ``u = s^g = 2^-p``, ``p = 4..10``, with
    ``g = X.small_s_exponent``.
    """
    for p in X.poles:
        p = complex(p)
        if p != 0 and abs(p - 1.0) <= 1.0:
            raise PreconditionError(
                f"pole {p} of sX(s) has |s-1| = {abs(p - 1):.6g} <= 1; final value theorem does not apply"
            )
    g = X.small_s_exponent
    # dyadic in the variable u = s^g in which sX is analytic
    s = _LADDER ** (1.0 / g)
    return _ladder_limit(lambda t: t * X(t.astype(complex)), s, _LADDER, tol)


# export


def grid_csv(s, values) -> str:
    """CSV ``re_s,im_s,re_X,im_X`` for transform values on a grid of ``s``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re_s", "im_s", "re_X", "im_X"])
    for z, v in zip(np.atleast_1d(s), np.atleast_1d(values)):
        z, v = complex(z), complex(v)
        w.writerow([repr(z.real), repr(z.imag), repr(v.real), repr(v.imag)])
    return buf.getvalue()


def contour_report_json(report: dict) -> str:
    """JSON ``{rho, N, converged, value}``; complex values become ``[re, im]``."""

    def pair(v):
        return [float(np.real(v)), float(np.imag(v))]

    value = report["value"]
    value = [pair(v) for v in value] if np.ndim(value) else pair(value)
    return json.dumps(
        {"rho": float(report["rho"]), "N": int(report["N"]), "converged": bool(report["converged"]), "value": value}
    )
