#!/usr/bin/env python3
"""Random door systems labelled planar/nonplanar by networkx.

The derived graph is rebuilt here from the system text alone: a hub per
instance joined to its locations, the locations joined in a cycle in
declaration order, each connection subdivided once.
"""
import random
import sys

import networkx as nx

DOORS = {
    "door.open_close": ["T_in", "T_out", "C_out", "C_in", "O"],
    "door.self_closing": ["T_in", "T_out", "O"],
    "door.symmetric_self_closing": ["A_in", "A_out", "B_out", "B_in"],
}
INIT = {"door.open_close": "Open", "door.self_closing": "Open", "door.symmetric_self_closing": "Open"}


def derived(instances, conns):
    g = nx.Graph()
    for iid, kind in instances:
        locs = DOORS[kind]
        for loc in locs:
            g.add_edge(("hub", iid), (iid, loc))
        for a, b in zip(locs, locs[1:] + locs[:1]):
            g.add_edge((iid, a), (iid, b))
    for k, (a, b) in enumerate(conns):
        g.add_edge(a, ("mid", k))
        g.add_edge(("mid", k), b)
    return g


def system_text(instances, conns):
    lines = []
    for kind in sorted({k for _, k in instances}):
        lines.append(f"use {kind} as {kind.split('.')[1]}")
    for iid, kind in instances:
        lines.append(f"instance {iid} : {kind.split('.')[1]} init {INIT[kind]}")
    for a, b in conns:
        ends = [e if isinstance(e, str) else f"{e[0]}.{e[1]}" for e in (a, b)]
        lines.append(f"connect {ends[0]} {ends[1]}")
    return "\n".join(lines) + "\n"


def sample(rng):
    n = rng.randint(2, 6)
    instances = [(f"g{i}", rng.choice(sorted(DOORS))) for i in range(n)]
    ports = [(iid, loc) for iid, kind in instances for loc in DOORS[kind]]
    conns = [("start", rng.choice(ports)), (rng.choice(ports), "goal")]
    for _ in range(rng.randint(1, 3 * n)):
        a, b = rng.sample(ports, 2)
        conns.append((a, b))
    return instances, conns


def main():
    rng = random.Random(20261019)
    out = []
    counts = {True: 0, False: 0}
    while sum(counts.values()) < 100:
        instances, conns = sample(rng)
        planar = nx.check_planarity(derived(instances, conns))[0]
        if counts[planar] >= 50:
            continue
        counts[planar] += 1
        out.append(f"=== {'planar' if planar else 'nonplanar'}\n{system_text(instances, conns)}")
    sys.stdout.write("".join(out))


if __name__ == "__main__":
    main()
