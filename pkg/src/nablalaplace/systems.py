"""Scalar fractional difference systems ``nabla^alpha x = lam x``.

Three operator kinds are stepped by isolating the ``j = 0`` term of the
defining convolution, which gives an explicit one-step update:

* Caputo, initial value ``x(a)``:
  ``(1 - lam) x(k) = x(k-1) - sum_{j>=1} w_j nabla x(k-j)``;
* Riemann-Liouville, initial value ``c`` of the inner sum at ``k = a``:
  ``(1 - lam) x(k) = y(k-1) - sum_{j>=1} w_j x(k-j)`` where ``y`` is that sum;
* Grunwald-Letnikov in the shifted form ``GL nabla^alpha x(k+1) = lam x(k)``,
  initial value ``x(a+1)``.

``w_j`` are the order ``1 - alpha`` sum weights and the update is exact, so
the only error is rounding.  The module also classifies stability from the
principal poles and realizes ``1/(tau s + 1)^alpha`` as a continuum of
first-order systems indexed by ``omega``.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .operators import OperatorKind, caputo_window, gl_window, rl_window
from .signals import GridSignal
from .special import signed_binomial_coeffs, sum_weights
from .transform import NablaTransform, ml_transform, principal_poles

__all__ = [
    "FracSystem",
    "FrequencyRealization",
    "OmegaQuadrature",
    "ResidualError",
    "SingularStepError",
    "StabilityClass",
    "UnderresolvedWarning",
    "empirical_class",
    "omega_quadrature",
    "realization_reference",
    "realize",
    "simulation_csv",
    "stability_classify",
    "stability_sweep",
    "step_residual",
    "step_system",
    "sweep_lambda",
    "system_transform",
]


class SingularStepError(ZeroDivisionError):
    pass


class ResidualError(ArithmeticError):
    pass


class UnderresolvedWarning(RuntimeWarning):
    pass


_KINDS = (
    OperatorKind.CAPUTO,
    OperatorKind.RIEMANN_LIOUVILLE,
    OperatorKind.GRUNWALD_LETNIKOV,
)


@dataclass(frozen=True)
class FracSystem:
    """``nabla^alpha x = lam x`` on ``N_{a+1}`` with kind-specific initial data.

    ``init`` is ``x(a)`` (Caputo), the inner fractional sum at ``k = a``
    (Riemann-Liouville) or ``x(a+1)`` (shifted Grunwald-Letnikov).
    """

    kind: OperatorKind
    alpha: float
    lam: complex
    a: float = 0.0
    init: complex = 1.0

    def __post_init__(self):
        kind = OperatorKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "init", complex(self.init))
        if kind not in _KINDS:
            raise ValueError(f"unsupported system kind {kind.value!r}")
        top = 1.0 if kind is OperatorKind.CAPUTO else 1.0 - 1e-15
        if not (0 < self.alpha <= top):
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if kind is not OperatorKind.GRUNWALD_LETNIKOV and abs(1 - self.lam) < 1e-14:
            raise SingularStepError("implicit step coefficient 1 - lam vanishes")


def step_system(sys: FracSystem, K: int, check: bool = True, residual_tol: float = 1e-12) -> GridSignal:
    """March ``x(a+1) .. x(a+K)``.

    With ``check`` the operator equation is re-evaluated on the result with
    the operators module and :class:`ResidualError` is raised if the residual,
    relative to ``max(1, max |x|)``, exceeds ``residual_tol``.
    """
    if K < 1:
        raise ValueError("horizon must be >= 1")
    lam = sys.lam
    x = np.zeros(K, dtype=complex)
    if sys.kind is OperatorKind.CAPUTO:
        w = sum_weights(1.0 - sys.alpha, K)
        d = np.zeros(K, dtype=complex)  # d[m-1] = nabla x(a+m)
        prev = sys.init
        for m in range(1, K + 1):
            hist = np.dot(w[1:m], d[m - 2 :: -1]) if m > 1 else 0j
            x[m - 1] = (prev - hist) / (1.0 - lam)
            d[m - 1] = x[m - 1] - prev
            prev = x[m - 1]
    elif sys.kind is OperatorKind.RIEMANN_LIOUVILLE:
        w = sum_weights(1.0 - sys.alpha, K)
        y_prev = sys.init
        for m in range(1, K + 1):
            hist = np.dot(w[1:m], x[m - 2 :: -1]) if m > 1 else 0j
            x[m - 1] = (y_prev - hist) / (1.0 - lam)
            y_prev = x[m - 1] + hist
    else:
        g = signed_binomial_coeffs(sys.alpha, K)
        x[0] = sys.init
        for m in range(1, K):
            # GL nabla^alpha of k -> x(k+1) at k = a+m, j = 0 term isolated
            x[m] = lam * x[m - 1] - np.dot(g[1 : m], x[m - 1 : 0 : -1])
    out = GridSignal(sys.a, x)
    if check:
        res = step_residual(sys, out)
        if res > residual_tol:
            raise ResidualError(f"operator residual {res:.3g} exceeds {residual_tol:g}")
    return out


def step_residual(sys: FracSystem, x: GridSignal) -> float:
    """Scaled residual of the operator equation on the stored window of ``x``."""
    K = x.samples.size
    vals = x.window(K)
    if sys.kind is OperatorKind.CAPUTO:
        sig = GridSignal(sys.a, vals, [sys.init])
        lhs = caputo_window(sig, sys.alpha, K)
        rhs = sys.lam * vals
    elif sys.kind is OperatorKind.RIEMANN_LIOUVILLE:
        lhs = rl_window(GridSignal(sys.a, vals), sys.alpha, K, [sys.init])
        rhs = sys.lam * vals
    else:
        lhs = gl_window(GridSignal(sys.a, vals[1:]), sys.alpha, K - 1)
        rhs = sys.lam * vals[:-1]
    scale = np.maximum.accumulate(np.maximum(1.0, np.abs(vals)))[: lhs.size]
    return float(np.max(np.abs(lhs - rhs) / scale, initial=0.0))


def system_transform(sys: FracSystem) -> NablaTransform:
    """Closed-form transform of the solution.

    Caputo gives ``x(a) s^(alpha-1)/(s^alpha - lam)``, Riemann-Liouville
    ``c/(s^alpha - lam)`` and shifted Grunwald-Letnikov
    ``x(a+1) s^alpha / (s^alpha - lam (1 - s))``.
    """
    c = sys.init
    if sys.kind is OperatorKind.CAPUTO:
        return ml_transform(sys.alpha, 1.0, sys.lam).scaled(c)
    if sys.kind is OperatorKind.RIEMANN_LIOUVILLE:
        return ml_transform(sys.alpha, sys.alpha, sys.lam).scaled(c)
    alpha, lam = sys.alpha, sys.lam

    def func(s):
        sa = np.power(s, alpha)
        return c * sa / (sa - lam * (1.0 - s))

    return NablaTransform(func, 1.0, (0j,))


# stability


class StabilityClass(str, enum.Enum):
    STABLE = "stable"
    MARGINAL = "marginal"
    UNSTABLE = "unstable"


def stability_classify(alpha: float, lam: complex, band: float = 1e-12) -> StabilityClass:
    """Classify by the principal poles (roots of ``s^alpha = lam`` on the principal branch).

    No principal pole means stable; otherwise the pole closest to ``s = 1``
    decides: inside the unit circle about 1 is unstable, on it (within
    ``band``) marginal.
    """
    poles = principal_poles(alpha, lam)
    if not poles:
        return StabilityClass.STABLE
    gap = min(abs(p - 1.0) for p in poles) - 1.0
    if gap < -band:
        return StabilityClass.UNSTABLE
    if gap <= band:
        return StabilityClass.MARGINAL
    return StabilityClass.STABLE


def empirical_class(x: GridSignal, K: int = 500, decay: float = 1e-2, growth: float = 10.0) -> StabilityClass:
    """Stable if ``|x(a+K)| < decay |x(a+1)|``; unstable if some ``|x| > growth |x(a+1)|``."""
    vals = np.abs(x.window(K))
    ref = vals[0]
    if np.any(vals > growth * ref):
        return StabilityClass.UNSTABLE
    if vals[-1] < decay * ref:
        return StabilityClass.STABLE
    return StabilityClass.MARGINAL


def sweep_lambda(alpha: float, rho: float, theta: float) -> complex:
    """``lam = (1 + rho e^{i theta})^alpha``, whose principal pole is ``1 + rho e^{i theta}``."""
    return complex((1.0 + rho * np.exp(1j * theta)) ** alpha)


def stability_sweep(
    alpha: float = 0.5,
    rhos=(0.9, 1.0, 1.1),
    thetas=(0.0, math.pi / 6, math.pi / 3, math.pi / 2),
    a: float = 3.0,
    x0: complex = 1.0,
    K: int = 500,
) -> list[dict]:
    """Caputo sweep over ``lam = (1 + rho e^{i theta})^alpha``.

    Each record has ``rho, theta, class`` (theoretical), ``empirical``,
    ``max_abs`` and ``final_abs``.
    """
    rows = []
    for rho in rhos:
        for theta in thetas:
            lam = sweep_lambda(alpha, rho, theta)
            x = step_system(FracSystem(OperatorKind.CAPUTO, alpha, lam, a, x0), K, check=False)
            vals = np.abs(x.window(K))
            rows.append(
                {
                    "rho": float(rho),
                    "theta": float(theta),
                    "class": stability_classify(alpha, lam).value,
                    "empirical": empirical_class(x, K).value,
                    "max_abs": float(vals.max()),
                    "final_abs": float(vals[-1]),
                }
            )
    return rows


def sweep_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=1)


def simulation_csv(x: GridSignal, count: int | None = None) -> str:
    """CSV ``k,re_x,im_x`` over the stored (or first ``count``) samples."""
    n = x.samples.size if count is None else count
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "re_x", "im_x"])
    for k, v in zip(x.grid(n), x.window(n)):
        w.writerow([repr(float(k)), repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue()


# frequency-distributed realization


@dataclass(frozen=True)
class OmegaQuadrature:
    """Node placement for ``\\int_0^inf mu_alpha(omega) f(omega) d omega``.

    ``scheme='product'`` integrates the weight ``mu_alpha`` exactly against the
    piecewise-linear interpolant of ``f`` (second order, error falls
    monotonically under refinement); ``scheme='exp-trapezoid'`` is the
    trapezoid rule in ``u = log omega`` (spectrally accurate for smooth ``f``).
    Both add the tails ``[0, lower]`` (``f`` constant) and ``[upper, inf)``
    (``f ~ 1/omega``) to the end nodes.
    """

    nodes: int = 1024
    lower: float = 1e-6
    upper: float = 1e6
    scheme: str = "product"

    def __post_init__(self):
        if self.nodes < 2 or not (0 < self.lower < self.upper):
            raise ValueError("need >= 2 nodes on 0 < lower < upper")
        if self.scheme not in ("product", "exp-trapezoid"):
            raise ValueError(f"unknown scheme {self.scheme!r}")

    def refined(self) -> OmegaQuadrature:
        return OmegaQuadrature(2 * self.nodes, self.lower, self.upper, self.scheme)


def omega_quadrature(alpha: float, q: OmegaQuadrature = OmegaQuadrature()) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``omega_i`` and weights with ``mu_alpha = sin(alpha pi)/(pi omega^alpha)`` folded in."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    C = math.sin(alpha * math.pi) / math.pi
    u = np.linspace(math.log(q.lower), math.log(q.upper), q.nodes)
    om = np.exp(u)
    wts = np.zeros(q.nodes)
    if q.scheme == "product":
        lo, hi = om[:-1], om[1:]
        h = hi - lo
        i0 = C * (hi ** (1 - alpha) - lo ** (1 - alpha)) / (1 - alpha)
        i1 = C * (hi ** (2 - alpha) - lo ** (2 - alpha)) / (2 - alpha)
        wts[:-1] += (hi * i0 - i1) / h
        wts[1:] += (i1 - lo * i0) / h
    else:
        du = u[1] - u[0]
        wts = C * om ** (1 - alpha) * du
        wts[0] *= 0.5
        wts[-1] *= 0.5
    wts[0] += C * q.lower ** (1 - alpha) / (1 - alpha)
    wts[-1] += C * q.upper ** (1 - alpha) / alpha
    return om, wts


@dataclass(frozen=True)
class FrequencyRealization:
    """Sampled ``omega``-states of a realization and its output.

    ``states`` has shape ``(K, nodes)``: ``z(omega_i, k)`` (LTI) or the
    rescaled ``(tau/(tau+1))^(k-a-1) varsigma(omega_i, k)`` (LTV).
    """

    tau: float
    alpha: float
    variant: str
    omega: np.ndarray
    weights: np.ndarray
    states: np.ndarray
    output: GridSignal

    @property
    def kappa(self) -> float:
        return (self.tau + 1.0) ** -self.alpha

    @property
    def lam(self) -> float:
        return -1.0 - self.tau


def _march(tau: float, alpha: float, variant: str, om: np.ndarray, wts: np.ndarray, v: np.ndarray):
    K = v.size
    states = np.zeros((K, om.size), dtype=complex)
    if variant == "LTI":
        # tau nabla z = -(omega + 1) z + v, z(a) = 0
        den = tau + om + 1.0
        z = np.zeros(om.size, dtype=complex)
        for m in range(K):
            z = (tau * z + v[m]) / den
            states[m] = z
        return states, states @ wts
    # nabla varsigma = -omega varsigma + ((1+tau)/tau)^(k-a-1) v.  With
    # r = tau/(tau+1) the output uses r^(k-a-1) varsigma, which obeys
    # zeta(k) = (r zeta(k-1) + v(k)) / (1 + omega) and never overflows.
    r = tau / (tau + 1.0)
    kappa = (tau + 1.0) ** -alpha
    zeta = np.zeros(om.size, dtype=complex)
    den = 1.0 + om
    for m in range(K):
        zeta = (r * zeta + v[m]) / den
        states[m] = zeta
    return states, kappa * (states @ wts)


def realize(
    tau: float,
    alpha: float,
    variant: str,
    quadrature: OmegaQuadrature,
    v: GridSignal,
    K: int,
    check_resolution: bool = True,
    tol: float = 1e-3,
) -> FrequencyRealization:
    """Response of ``1/(tau s + 1)^alpha`` to ``v`` via the ``omega``-distributed states.

    With ``check_resolution`` the march is repeated with twice the nodes and
    :class:`UnderresolvedWarning` is issued when the output moves by more
    than ``tol`` (relative to ``max(1, |y|)``).
    """
    if not (-0.5 < tau < 0 or tau > 0):
        raise ValueError("tau must lie in (-0.5, 0) or (0, inf)")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    variant = variant.upper()
    if variant not in ("LTI", "LTV"):
        raise ValueError("variant is LTI or LTV")
    vals = v.window(K)
    om, wts = omega_quadrature(alpha, quadrature)
    states, y = _march(tau, alpha, variant, om, wts, vals)
    if check_resolution:
        om2, wts2 = omega_quadrature(alpha, quadrature.refined())
        _, y2 = _march(tau, alpha, variant, om2, wts2, vals)
        shift = np.max(np.abs(y2 - y) / np.maximum(1.0, np.abs(y2)))
        if shift > tol:
            warnings.warn(
                f"omega quadrature under-resolved: doubling nodes moves the output by {shift:.2e}",
                UnderresolvedWarning,
                stacklevel=2,
            )
    return FrequencyRealization(tau, alpha, variant, om, wts, states, GridSignal(v.base, y))


def realization_reference(tau: float, alpha: float) -> NablaTransform:
    """Step response transform ``(1/s) (tau s + 1)^(-alpha)``."""
    pole = -1.0 / tau
    return NablaTransform(
        lambda s: np.power(tau * s + 1.0, -alpha) / s,
        math.inf,
        (0j, complex(pole)),
    )
