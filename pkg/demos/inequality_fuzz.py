"""Randomized worst-constant search for the five elementary inequalities.

Each inequality bounds one side by the other up to a constant; the fuzzer
samples frequencies with log-uniform magnitudes and reports the largest
observed ratio per branch.  The first and fourth bounds hold with constant
one.  The third is special: it is stated for all frequencies, but it fails
on a resonant set, and with enough samples the empirical maximum creeps
upward without bound.  Run with a larger n to watch that happen.
"""

import sys

from zrbr.exponents import verify_symbolic_inequalities


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    print(f"{n} samples per inequality branch, seed 12345")
    print(f"{'inequality':>10} {'branch':>6} {'d':>3} {'max ratio':>12}")
    for d in (2, 3):
        for res in verify_symbolic_inequalities(n, seed=12345, d=d):
            print(f"{res.inequality:>10} {res.branch:>6} {res.d:>3} {res.max_ratio:>12.4f}")
    print()
    print("note: the ineq3 maximum grows with n; its statement omits the")
    print("restriction that would tame the resonant set tau = -|xi|,")
    print("tau1 = |xi1|^2, xi1 parallel to xi.")


if __name__ == "__main__":
    main()
