"""Frequency-distributed realization of 1/(tau s + 1)^alpha vs node count.

Prints the worst relative error of the LTI and LTV step responses against the
contour-inverted reference for a ladder of node counts and both schemes.
"""

from __future__ import annotations

import argparse
import warnings

import numpy as np

from nablalaplace.signals import unit_step
from nablalaplace.systems import OmegaQuadrature, realization_reference, realize
from nablalaplace.transform import inverse_transform


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tau", type=float, default=1.0)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--horizon", type=int, default=100)
    args = ap.parse_args()

    K = args.horizon
    ref = inverse_transform(realization_reference(args.tau, args.alpha), None, np.arange(1, K + 1))
    print(f"{'scheme':>14} {'nodes':>6} {'LTI':>10} {'LTV':>10}")
    for scheme in ("product", "exp-trapezoid"):
        for n in (64, 128, 256, 512, 1024, 2048):
            q = OmegaQuadrature(n, scheme=scheme)
            errs = []
            for variant in ("LTI", "LTV"):
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    y = realize(args.tau, args.alpha, variant, q, unit_step(), K, check_resolution=False)
                errs.append(np.max(np.abs(y.output.window(K) - ref) / np.abs(ref)))
            print(f"{scheme:>14} {n:>6d} {errs[0]:>10.2e} {errs[1]:>10.2e}")


if __name__ == "__main__":
    main()
