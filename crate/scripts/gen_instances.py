#!/usr/bin/env python3
"""Regenerate the vendored test instances under data/.

Writes:
  data/generated/uf20-gen-02.cnf, uf20-gen-03.cnf, uf50-gen-01.cnf
      uniform random 3-SAT in the SATLIB uf family shape (n=20/m=91,
      n=50/m=218), filtered to satisfiable instances.
  data/tiny/*.cnf
      small instances (n + m <= 18) with known satisfiability.
  data/certificates/<name>.sol
      a satisfying assignment for every satisfiable instance, in
      "v <lit> ... 0" form, found by the DPLL search below.

The search here is independent of the Rust code; its output is used as
frozen fixtures by the test suites.

Usage: python3 scripts/gen_instances.py   (from the repository root)
"""

import itertools
import os
import random
import sys

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..")


def random_3sat(rng, n, m):
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), 3)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return clauses


def dpll(clauses, n):
    """Return a satisfying assignment dict var->bool, or None."""

    def simplify(cls, lit):
        out = []
        for c in cls:
            if lit in c:
                continue
            if -lit in c:
                c = [l for l in c if l != -lit]
                if not c:
                    return None
            out.append(c)
        return out

    def solve(cls, assign):
        while True:
            units = [c[0] for c in cls if len(c) == 1]
            if not units:
                break
            lit = units[0]
            assign[abs(lit)] = lit > 0
            cls = simplify(cls, lit)
            if cls is None:
                return None
        if not cls:
            return assign
        counts = {}
        for c in cls:
            for l in c:
                counts[l] = counts.get(l, 0) + 1
        lit = max(counts, key=lambda l: (counts[l], -abs(l), l > 0))
        for choice in (lit, -lit):
            nxt = simplify(cls, choice)
            if nxt is None:
                continue
            nxt_assign = dict(assign)
            nxt_assign[abs(choice)] = choice > 0
            res = solve(nxt, nxt_assign)
            if res is not None:
                return res
        return None

    res = solve([list(c) for c in clauses], {})
    if res is None:
        return None
    return [res.get(v, False) for v in range(1, n + 1)]


def brute_force_sat(clauses, n):
    for bits in itertools.product([False, True], repeat=n):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return list(bits)
    return None


def check(clauses, assignment):
    return all(any(assignment[abs(l) - 1] == (l > 0) for l in c) for c in clauses)


def parse_dimacs(path):
    clauses, cur, n = [], [], 0
    with open(path) as f:
        for line in f:
            t = line.strip()
            if not t or t.startswith("c"):
                continue
            if t.startswith("%"):
                break
            if t.startswith("p"):
                n = int(t.split()[2])
                continue
            for tok in t.split():
                v = int(tok)
                if v == 0:
                    clauses.append(cur)
                    cur = []
                else:
                    cur.append(v)
    return n, clauses


def write_cnf(path, n, clauses, comment, satlib_trailer=False):
    with open(path, "w") as f:
        f.write("c %s\n" % comment)
        f.write("p cnf %d %d\n" % (n, len(clauses)))
        for c in clauses:
            f.write(" ".join(str(l) for l in c) + " 0\n")
        if satlib_trailer:
            f.write("%\n0\n\n")


def write_certificate(name, assignment):
    path = os.path.join(ROOT, "data", "certificates", name + ".sol")
    lits = [str(i + 1) if b else str(-(i + 1)) for i, b in enumerate(assignment)]
    with open(path, "w") as f:
        f.write("v " + " ".join(lits) + " 0\n")


def satisfiable_uniform(seed, n, m):
    rng = random.Random(seed)
    while True:
        clauses = random_3sat(rng, n, m)
        sol = dpll(clauses, n)
        if sol is not None:
            assert check(clauses, sol)
            return clauses, sol


def tiny_instance(seed, n, m, want_sat):
    rng = random.Random(seed)
    while True:
        clauses = random_3sat(rng, n, m)
        # skip instances whose unsatisfiability is just one full 8-clause block
        triples = {}
        for c in clauses:
            key = tuple(sorted(abs(l) for l in c))
            triples.setdefault(key, set()).add(tuple(sorted(c, key=abs)))
        if any(len(v) == 8 for v in triples.values()):
            continue
        sol = brute_force_sat(clauses, n)
        if (sol is not None) == want_sat:
            return clauses, sol


def main():
    for d in ("generated", "tiny", "certificates"):
        os.makedirs(os.path.join(ROOT, "data", d), exist_ok=True)

    for name, seed, n, m in [
        ("uf20-gen-02", 2002, 20, 91),
        ("uf20-gen-03", 2003, 20, 91),
        ("uf50-gen-01", 5001, 50, 218),
    ]:
        clauses, sol = satisfiable_uniform(seed, n, m)
        write_cnf(
            os.path.join(ROOT, "data", "generated", name + ".cnf"),
            n,
            clauses,
            "uniform random 3-SAT, n=%d m=%d, seed=%d, filtered satisfiable" % (n, m, seed),
            satlib_trailer=True,
        )
        write_certificate(name, sol)
        print(name, "ok")

    n, clauses = parse_dimacs(os.path.join(ROOT, "data", "satlib", "uf20-01.cnf"))
    sol = brute_force_sat(clauses, n)
    assert sol is not None and check(clauses, sol)
    write_certificate("uf20-01", sol)
    print("uf20-01 ok")

    tiny = [
        ("sat-4v-6c", 11, 4, 6, True),
        ("sat-6v-12c", 12, 6, 12, True),
        ("sat-5v-13c", 13, 5, 13, True),
        ("unsat-4v-14c", 14, 4, 14, False),
        ("unsat-5v-13c", 15, 5, 13, False),
    ]
    for name, seed, n, m, want in tiny:
        clauses, sol = tiny_instance(seed, n, m, want)
        write_cnf(
            os.path.join(ROOT, "data", "tiny", name + ".cnf"),
            n,
            clauses,
            "%s (n+m=%d), %s" % (name, n + m, "satisfiable" if want else "unsatisfiable"),
        )
        if sol is not None:
            write_certificate(name, sol)
        print(name, "ok")

    # unsatisfiable by exhausting every sign pattern over one variable triple
    block = [[a * 1, b * 2, c * 3] for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    write_cnf(
        os.path.join(ROOT, "data", "tiny", "unsat-3v-8c.cnf"),
        3,
        block,
        "all eight sign patterns over x1 x2 x3 (n+m=11), unsatisfiable",
    )
    write_cnf(
        os.path.join(ROOT, "data", "tiny", "single-clause.cnf"),
        3,
        [[1, -2, 3]],
        "one clause (n+m=4), satisfiable",
    )
    write_certificate("single-clause", [True, False, False])
    return 0


if __name__ == "__main__":
    sys.exit(main())
