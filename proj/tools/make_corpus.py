#!/usr/bin/env python3
"""Generates the bundled problem corpus under data/corpus/.

Three graded families of clausal problems, all refutable except the *_sat
instances:

  chain<n>   linear implication chain of depth n from the negated goal to a
             ground fact, with dead-ending distractor branches at several
             levels. The distractors punish undirected search.
  trap<n>    like chain, but the distractors are multi-literal clauses that
             multiply open goals before dying out, so searches that prefer
             small tableaux escape them sooner.
  count<n>   counting to s^n(zero) with a successor step clause plus a
             distractor branch that dead-ends.
  *_sat      satisfiable controls (no refutation exists).

The families share predicate names across instances so that guidance learned
on small instances transfers to deeper ones.
"""

import argparse
import os

HEADER = "% generated by tools/make_corpus.py; do not edit by hand\n"


def chain(n, distractor_levels, distractor_len):
    """Implication chain p0 <- p1 <- ... <- pn with dead-end branches."""
    lines = []
    lines.append("cnf(goal, negated_conjecture, (~p0(c))).")
    for i in range(n):
        lines.append(f"cnf(step{i}, axiom, (p{i}(X) | ~p{i+1}(X))).")
    lines.append(f"cnf(base, axiom, (p{n}(c))).")
    for j in distractor_levels:
        if j > n:
            continue
        # branch into a q-chain that dies after distractor_len steps
        lines.append(f"cnf(bait{j}, axiom, (p{j}(X) | ~q0(X))).")
    for k in range(distractor_len):
        lines.append(f"cnf(decoy{k}, axiom, (q{k}(X) | ~q{k+1}(f(X)))).")
    # q{distractor_len} has no positive occurrence: the branch is a dead end
    return lines


def trap(n, trap_levels, arm_len):
    """Chain whose distractors fan out into several goals before dying."""
    lines = []
    lines.append("cnf(goal, negated_conjecture, (~p0(c))).")
    for i in range(n):
        lines.append(f"cnf(step{i}, axiom, (p{i}(X) | ~p{i+1}(X))).")
    lines.append(f"cnf(base, axiom, (p{n}(c))).")
    for j in trap_levels:
        if j > n:
            continue
        lines.append(
            f"cnf(trap{j}, axiom, (p{j}(X) | ~t0(X) | ~u0(X) | ~v0(X)))."
        )
    for name in ("t", "u", "v"):
        for k in range(arm_len):
            lines.append(f"cnf({name}arm{k}, axiom, ({name}{k}(X) | ~{name}{k+1}(X))).")
        # each arm ends openly: no positive {name}{arm_len} clause
    return lines


def widetrap(n, trap_levels):
    """Chain with live side branches that multiply goals without closing.

    The ~w branch spawns two new ~w goals per extension and never reaches a
    dead end, so only the size of the open-goal set marks it as hopeless.
    """
    lines = []
    lines.append("cnf(goal, negated_conjecture, (~p0(c))).")
    for i in range(n):
        lines.append(f"cnf(step{i}, axiom, (p{i}(X) | ~p{i+1}(X))).")
    lines.append(f"cnf(base, axiom, (p{n}(c))).")
    for j in trap_levels:
        if j > n:
            continue
        lines.append(f"cnf(wide{j}, axiom, (p{j}(X) | ~w(X))).")
    lines.append("cnf(grow, axiom, (w(X) | ~w(f(X)) | ~w(g(X)))).")
    return lines


def count(n, with_distractor=True):
    lines = []
    term = "zero"
    for _ in range(n):
        term = f"s({term})"
    lines.append(f"cnf(goal, negated_conjecture, (~num({term}))).")
    lines.append(f"cnf(base, axiom, (num(zero))).")
    lines.append("cnf(step, axiom, (num(s(X)) | ~num(X))).")
    if with_distractor:
        lines.append("cnf(bait, axiom, (num(X) | ~odd(X))).")
        lines.append("cnf(decoy, axiom, (odd(s(X)) | ~even(X))).")
        # even has no positive occurrence: dead end two steps in
    return lines


def sat_control(i):
    """Satisfiable: the goal predicate never appears positively."""
    return [
        f"cnf(goal, negated_conjecture, (~sink{i}(c))).",
        f"cnf(other, axiom, (src{i}(X) | ~sink{i}(X) | ~src{i}(f(X)))).",
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/corpus")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    problems = {}
    for n in range(2, 22):
        problems[f"chain{n:02d}"] = chain(
            n, distractor_levels=list(range(1, n, 2)), distractor_len=4
        )
    for n in range(2, 20):
        problems[f"trap{n:02d}"] = trap(
            n, trap_levels=list(range(1, n, 2)), arm_len=3
        )
    for n in range(2, 20):
        problems[f"count{n:02d}"] = count(n)
    for n in range(3, 15):
        problems[f"wide{n:02d}"] = widetrap(n, trap_levels=list(range(0, n, 2)))
    for i in range(3):
        problems[f"sat{i}"] = sat_control(i)

    listing = []
    for name in sorted(problems):
        path = os.path.join(args.out, f"{name}.p")
        with open(path, "w") as f:
            f.write(HEADER)
            f.write("\n".join(problems[name]) + "\n")
        listing.append(f"{name} corpus/{name}.p")

    listfile = os.path.join(os.path.dirname(args.out.rstrip("/")), "corpus.txt")
    with open(listfile, "w") as f:
        f.write("# bundled problem corpus, one `id path` per line\n")
        f.write("\n".join(listing) + "\n")
    print(f"wrote {len(problems)} problems to {args.out} and {listfile}")


if __name__ == "__main__":
    main()
