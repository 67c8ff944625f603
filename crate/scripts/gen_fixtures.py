#!/usr/bin/env python3
"""Generate small PSPLib-style single-mode instances used as test fixtures.

Each instance has 30 real jobs plus a dummy source and sink and four
renewable resources. Output is written in the `.sm` layout.
"""
import random
import sys
from pathlib import Path

STARS = "*" * 72


def generate(seed, n_jobs=30, n_res=4):
    rng = random.Random(seed)
    total = n_jobs + 2
    succ = {j: set() for j in range(1, total + 1)}
    # real jobs are 2..n_jobs+1; arcs only go forward in id order
    for j in range(2, n_jobs + 2):
        k = rng.randint(1, 3)
        later = list(range(j + 1, n_jobs + 2))
        rng.shuffle(later)
        for s in later[:k]:
            succ[j].add(s)
    preds = {j: set() for j in range(1, total + 1)}
    for j, ss in succ.items():
        for s in ss:
            preds[s].add(j)
    for j in range(2, n_jobs + 2):
        if not preds[j]:
            succ[1].add(j)
            preds[j].add(1)
        if not succ[j]:
            succ[j].add(total)
            preds[total].add(j)
    durations = {1: 0, total: 0}
    demands = {1: [0] * n_res, total: [0] * n_res}
    for j in range(2, n_jobs + 2):
        durations[j] = rng.randint(1, 10)
        d = [0] * n_res
        for r in rng.sample(range(n_res), rng.randint(1, 2)):
            d[r] = rng.randint(1, 10)
        demands[j] = d
    caps = []
    for r in range(n_res):
        peak = max(demands[j][r] for j in demands)
        caps.append(peak + rng.randint(0, 4))
    return succ, durations, demands, caps


def render(name, seed, succ, durations, demands, caps):
    total = len(durations)
    n_res = len(caps)
    horizon = sum(durations.values())
    lines = [
        STARS,
        f"file with basedata            : {name}.bas",
        f"initial value random generator: {seed}",
        STARS,
        "projects                      :  1",
        f"jobs (incl. supersource/sink ):  {total}",
        f"horizon                       :  {horizon}",
        "RESOURCES",
        f"  - renewable                 :  {n_res}   R",
        "  - nonrenewable              :  0   N",
        "  - doubly constrained        :  0   D",
        STARS,
        "PROJECT INFORMATION:",
        "pronr.  #jobs rel.date duedate tardcost  MPM-Time",
        f"    1     {total - 2:2d}      0       0        0        0",
        STARS,
        "PRECEDENCE RELATIONS:",
        "jobnr.    #modes  #successors   successors",
    ]
    for j in range(1, total + 1):
        ss = sorted(succ[j])
        tail = "".join(f"{s:4d}" for s in ss)
        lines.append(f"{j:4d}        1{len(ss):11d}         {tail}".rstrip())
    lines.append(STARS)
    lines.append("REQUESTS/DURATIONS:")
    lines.append("jobnr. mode duration" + "".join(f"  R {r + 1}" for r in range(n_res)))
    lines.append("-" * 72)
    for j in range(1, total + 1):
        req = "".join(f"{d:5d}" for d in demands[j])
        lines.append(f"{j:4d}{1:7d}{durations[j]:6d}{req}")
    lines.append(STARS)
    lines.append("RESOURCEAVAILABILITIES:")
    lines.append("".join(f"  R {r + 1}" for r in range(n_res)))
    lines.append("".join(f"{c:5d}" for c in caps))
    lines.append(STARS)
    return "\n".join(lines) + "\n"


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("crates/core/tests/fixtures")
    out.mkdir(parents=True, exist_ok=True)
    for i, seed in enumerate([28123, 11, 4242], start=1):
        name = f"j30_{i}"
        (out / f"{name}.sm").write_text(render(name, seed, *generate(seed)))


if __name__ == "__main__":
    main()
