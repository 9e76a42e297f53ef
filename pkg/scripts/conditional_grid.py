"""Grid search of the conditional CHSH expression over [0, 1]^4.

Exact integer evaluation on the grid {0, 1/n, ..., 1}.

    python3 scripts/conditional_grid.py --n 100
"""

import argparse
import time

from bellcheck.inequalities import conditional_chsh_grid_max


def main():
    p = argparse.ArgumentParser(description="conditional CHSH grid maximum")
    p.add_argument("--n", type=int, default=20, help="grid resolution (step 1/n)")
    a = p.parse_args()
    t = time.perf_counter()
    best, arg = conditional_chsh_grid_max(a.n)
    print(f"grid step 1/{a.n}: {(a.n + 1) ** 4} points, max = {best}, first at "
          f"{tuple(f'{x}/{a.n}' for x in arg)}  ({time.perf_counter() - t:.2f}s)")


if __name__ == "__main__":
    main()
