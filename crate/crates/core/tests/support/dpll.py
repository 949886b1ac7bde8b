#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Plain recursive DPLL with unit propagation, used as an independent
external solver in tests. Reads the DIMACS file named by the last argument
and prints SAT-competition output."""

import sys


def read_dimacs(path):
    n, clauses, cur = 0, [], []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line[0] in "c%":
                continue
            if line[0] == "p":
                n = int(line.split()[2])
                continue
            for tok in line.split():
                lit = int(tok)
                if lit == 0:
                    clauses.append(cur)
                    cur = []
                else:
                    cur.append(lit)
    if cur:
        clauses.append(cur)
    return n, clauses


def simplify(clauses, lit):
    out = []
    for c in clauses:
        if lit in c:
            continue
        reduced = [l for l in c if l != -lit]
        if not reduced:
            return None
        out.append(reduced)
    return out


def dpll(clauses, model):
    while True:
        unit = next((c[0] for c in clauses if len(c) == 1), None)
        if unit is None:
            break
        model[abs(unit)] = unit > 0
        clauses = simplify(clauses, unit)
        if clauses is None:
            return False
    if not clauses:
        return True
    v = abs(clauses[0][0])
    for lit in (v, -v):
        trial = dict(model)
        reduced = simplify(clauses, lit)
        if reduced is None:
            continue
        trial[v] = lit > 0
        if dpll(reduced, trial):
            model.update(trial)
            return True
    return False


def main():
    n, clauses = read_dimacs(sys.argv[-1])
    if any(len(c) == 0 for c in clauses):
        print("s UNSATISFIABLE")
        return
    model = {}
    if not dpll(clauses, model):
        print("s UNSATISFIABLE")
        return
    print("s SATISFIABLE")
    lits = [v if model.get(v, False) else -v for v in range(1, n + 1)]
    print("v " + " ".join(map(str, lits)) + " 0")


if __name__ == "__main__":
    sys.setrecursionlimit(10000)
    main()
