"""Caputo stability sweep: theoretical class vs empirical decay/growth.

Usage: python scripts/stability_sweep.py [--horizon 500] [--alpha 0.5]
"""

from __future__ import annotations

import argparse

from nablalaplace.systems import stability_sweep


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--horizon", type=int, default=500)
    args = ap.parse_args()

    rows = stability_sweep(args.alpha, K=args.horizon)
    print(f"{'rho':>5} {'theta':>7} {'theory':>9} {'empirical':>10} {'|x(a+K)|':>11}")
    for r in rows:
        flag = "" if r["class"] == r["empirical"] else "  <- mismatch"
        print(f"{r['rho']:>5.2f} {r['theta']:>7.4f} {r['class']:>9} {r['empirical']:>10} {r['final_abs']:>11.3e}{flag}")


if __name__ == "__main__":
    main()
