#!/usr/bin/env python3
"""Regenerates the scenario corpus in scenarios/ (deterministic)."""

import json
import math
import sys
from pathlib import Path

RES = 0.1
RADIUS = 0.24


def grid(w, h):
    return [["."] * w for _ in range(h)]


def fill(g, x0, y0, x1, y1):
    """Marks cells x0..x1, y0..y1 (inclusive, y up) occupied."""
    h = len(g)
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            g[h - 1 - y][x] = "#"


def clear(g, x0, y0, x1, y1):
    h = len(g)
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            g[h - 1 - y][x] = "."


def rows(g):
    return ["".join(r) for r in g]


def center(cx, cy):
    return [round((cx + 0.5) * RES, 10), round((cy + 0.5) * RES, 10)]


def agent(i, sx, sy, heading, gx, gy):
    s = center(sx, sy)
    return {
        "id": i,
        "start": [s[0], s[1], heading * math.pi / 4],
        "goal": center(gx, gy),
        "radius": RADIUS,
    }


def vertical_corridor(cid, x, y0, y1):
    return {"id": cid, "cells": [[x, y] for y in range(y0, y1 + 1)]}


def horizontal_corridor(cid, y, x0, x1):
    return {"id": cid, "cells": [[x, y] for x in range(x0, x1 + 1)]}


def scenario(name, g, agents, corridors, **params):
    return {
        "name": name,
        "map": {"resolution": RES, "rows": rows(g)},
        "params": params,
        "agents": agents,
        "corridors": corridors,
    }


def minimal():
    g = grid(40, 40)
    return scenario("minimal", g, [agent(0, 5, 5, 0, 34, 30)], [])


def two_corridor_map(w, h):
    """Warehouse-style band across the middle with two single-file gaps."""
    g = grid(w, h)
    wall_lo, wall_hi = h // 2 - 5, h // 2 + 4
    fill(g, 0, wall_lo, w - 1, wall_hi)
    gaps = (w // 4, 3 * w // 4)
    for gx in gaps:
        clear(g, gx - 3, wall_lo, gx + 3, wall_hi)
    corridors = [
        vertical_corridor("west", gaps[0], wall_lo, wall_hi),
        vertical_corridor("east", gaps[1], wall_lo, wall_hi),
    ]
    return g, corridors, wall_lo, wall_hi


# Congestion weights and corridor trigger used by the swap scenarios.
SWAP_PARAMS = {
    "trigger_radius": 10.0,
    "yield_after": 10,
    "weights": {"k_n": 0.02, "horizon_steps": 20},
}


def swap(n, w=200, h=200, row_gap=40, standoff=40, offset=0.25):
    """Point-symmetric swap: top rows head south, bottom rows head north.

    Columns sit at a quarter-step offset so no goal coincides with another
    agent's start. Ids alternate between the two sides.
    """
    g, corridors, wall_lo, wall_hi = two_corridor_map(w, h)
    per_side = n // 2
    rows_per_side = max(1, per_side // 5)
    per_row = per_side // rows_per_side
    pitch = w / per_row
    xs = [int(round(pitch * (k + offset))) for k in range(per_row)]
    top, bottom = [], []
    for r in range(rows_per_side):
        for x in xs:
            top.append((x, wall_hi + standoff + r * row_gap))
            bottom.append((x, wall_lo - standoff - r * row_gap))
    starts = []
    for t, b in zip(top, bottom):
        starts += [(t, 6), (b, 2)]
    agents = [agent(i, x, y, hd, w - 1 - x, h - 1 - y) for i, ((x, y), hd) in enumerate(starts)]
    return scenario(f"two_corridor_swap_{n}", g, agents, corridors, **SWAP_PARAMS)


def side_by_side(two_corridors):
    """Two agents whose shortest routes share the upper gap, moving in opposite directions."""
    w, h = 100, 60
    g = grid(w, h)
    fill(g, 45, 0, 54, h - 1)
    corridors = [horizontal_corridor("upper", 42, 45, 54)]
    clear(g, 45, 39, 54, 45)
    if two_corridors:
        clear(g, 45, 14, 54, 20)
        corridors.append(horizontal_corridor("lower", 17, 45, 54))
    agents = [agent(0, 10, 40, 0, 90, 40), agent(1, 90, 44, 4, 10, 44)]
    name = "two_agents_two_corridors" if two_corridors else "two_agents_one_corridor"
    return scenario(name, g, agents, corridors)


def crossing():
    """Four agents crossing the centre of an open room."""
    g = grid(60, 60)
    agents = [
        agent(0, 10, 30, 0, 50, 30),
        agent(1, 50, 30, 4, 10, 30),
        agent(2, 30, 10, 2, 30, 50),
        agent(3, 30, 50, 6, 30, 10),
    ]
    return scenario("crossing", g, agents, [])


def head_on():
    """Two rooms joined by a long single-file passage, agents crossing in opposite directions."""
    w, h = 120, 40
    g = grid(w, h)
    fill(g, 30, 0, w - 31, h - 1)
    clear(g, 30, 17, w - 31, 23)
    corridors = [horizontal_corridor("passage", 20, 30, w - 31)]
    agents = [agent(0, 10, 20, 0, w - 20, 30), agent(1, w - 11, 20, 4, 19, 10)]
    return scenario("head_on", g, agents, corridors)


def main(out):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    corpus = {
        "minimal.json": minimal(),
        "two_corridor_swap_10.json": swap(10),
        "two_corridor_swap_20.json": swap(20),
        "two_agents_two_corridors.json": side_by_side(True),
        "two_agents_one_corridor.json": side_by_side(False),
        "crossing.json": crossing(),
        "head_on.json": head_on(),
    }
    for name, sc in corpus.items():
        (out / name).write_text(json.dumps(sc, indent=2) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "scenarios")
