"""Check sum_i w_i / (sigma + omega_i) = sigma^-alpha for both omega quadratures."""

from __future__ import annotations

import numpy as np

from nablalaplace.systems import OmegaQuadrature, omega_quadrature


def main() -> None:
    print(f"{'scheme':>14} {'alpha':>5} {'sigma':>5} {'rel err':>10}")
    for scheme in ("exp-trapezoid", "product"):
        for alpha in (0.3, 0.5, 0.7):
            om, wts = omega_quadrature(alpha, OmegaQuadrature(1024, scheme=scheme))
            for sigma in (0.25, 1.0, 1.75):
                err = abs(np.sum(wts / (sigma + om)) * sigma**alpha - 1)
                print(f"{scheme:>14} {alpha:>5.1f} {sigma:>5.2f} {err:>10.2e}")


if __name__ == "__main__":
    main()
