"""Suprema of the weighted Green-kernel products over alpha and N."""

import argparse

from ch3lab.kernels import weighted_kernel_scan, limit_sup


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--form", choices=["J", "phi"], default="J")
    ap.add_argument("--derivative", action="store_true")
    ap.add_argument("--Ns", type=int, nargs="+", default=[1, 2, 4, 8, 16, 32])
    args = ap.parse_args()

    alphas = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99]
    print(f"{'alpha':>6} " + " ".join(f"{'N=' + str(N):>9}" for N in args.Ns) + f" {'limit':>9}")
    for a in alphas:
        res = weighted_kernel_scan(a, args.Ns, args.form, args.derivative, points=4000)
        row = " ".join(f"{r.sup_value:9.5f}" for r in res)
        print(f"{a:6.2f} {row} {limit_sup(a, args.derivative):9.5f}")


if __name__ == "__main__":
    main()
