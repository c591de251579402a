#!/usr/bin/env python3
"""Random 3-CNF at clause ratio 4.26 with n=10, labelled by brute force."""
import itertools
import random
import sys


def satisfiable(n, clauses):
    for bits in itertools.product([False, True], repeat=n):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def main():
    rng = random.Random(426)
    n, m = 10, 43
    out = []
    for _ in range(100):
        clauses = [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3)] for _ in range(m)]
        label = "sat" if satisfiable(n, clauses) else "unsat"
        body = "".join(" ".join(map(str, c)) + " 0\n" for c in clauses)
        out.append(f"c {label}\np cnf {n} {m}\n{body}")
    sys.stdout.write("%\n".join(out))


if __name__ == "__main__":
    main()
