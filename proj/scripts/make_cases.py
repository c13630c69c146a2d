#!/usr/bin/env python3
# Copyright 2026 The edtr Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the bundled reconstruction cases under cases/.

The 6-bus case is written from the table below. The 39- and 118-bus cases
take network data from PYPOWER's case39/case118 (pip install pypower).
Running the script is only needed to regenerate the committed JSON files.
"""

import argparse
import json
import math
import pathlib

TAPS = [0.98, 0.99, 1.00, 1.01, 1.02]


def device(tap=False, shift=False):
    d = {}
    if tap:
        d.update(tap_set=TAPS, tap_step_max=0.01, tap_adjust_budget=8, initial_tap=1.0)
    if shift:
        d.update(shifter_range=[-15.0, 15.0], shift_step_max=3.0, shift_adjust_budget=8,
                 initial_shift=0.0)
    return d


def quadratic_curve(a, b, c, p_min, p_max, segments):
    """Breakpoints of a + b p + c p^2 sampled evenly on [p_min, p_max]."""
    pts = []
    for k in range(segments + 1):
        p = p_min + (p_max - p_min) * k / segments
        pts.append([round(p, 6), round(a + b * p + c * p * p, 6)])
    return pts


# --- 6 bus ------------------------------------------------------------------

SIX_BUS_LOAD = [175.19, 165.15, 158.67, 154.73, 155.06, 160.48, 173.39, 177.60,
                186.81, 206.96, 228.61, 236.10, 242.18, 243.60, 248.86, 255.79,
                256.00, 246.74, 245.97, 237.35, 237.31, 230.65, 219.84, 196.03]


def six_bus():
    # id, from, to, r, x, b, rating MW
    lines = [
        ("1", "1", "2", 0.005, 0.170, 0.00, 200.0),
        ("2", "1", "4", 0.003, 0.258, 0.00, 100.0),
        ("3", "2", "4", 0.007, 0.197, 0.00, 100.0),
        ("4", "5", "6", 0.002, 0.140, 0.00, 100.0),
        ("5", "3", "6", 0.000, 0.018, 0.00, 100.0),
        ("6", "2", "3", 0.000, 0.037, 0.00, 100.0),
        ("7", "4", "5", 0.000, 0.037, 0.00, 100.0),
    ]
    taps = {"2", "5"}
    shifts = {"5", "7"}
    branches = []
    for lid, f, t, r, x, b, rating in lines:
        br = {"id": lid, "from_bus": f, "to_bus": t, "x": x, "r": r, "b": b,
              "rating": rating}
        dev = device(lid in taps, lid in shifts)
        if dev:
            br["device"] = dev
        branches.append(br)
    # id, bus, a, b, c, p_min, p_max, ramp
    units = [
        ("G1", "1", 177.0, 13.5, 0.00045, 100.0, 220.0, 55.0),
        ("G2", "2", 130.0, 40.0, 0.001, 10.0, 100.0, 50.0),
        ("G3", "6", 137.0, 17.7, 0.005, 10.0, 20.0, 20.0),
    ]
    gens = [{"id": gid, "bus": bus, "p_min": lo, "p_max": hi, "ramp_up": ramp,
             "ramp_down": ramp, "cost_curve": quadratic_curve(a, b1, c2, lo, hi, 4)}
            for gid, bus, a, b1, c2, lo, hi, ramp in units]
    share = {"3": 0.2, "4": 0.4, "5": 0.4}
    demand = {bus: [round(s * d, 6) for d in SIX_BUS_LOAD] for bus, s in share.items()}
    return {
        "name": "six_bus",
        "base_mva": 100.0,
        "horizon": len(SIX_BUS_LOAD),
        "buses": [{"id": str(i), "is_reference": i == 1} for i in range(1, 7)],
        "branches": branches,
        "generators": gens,
        "demand": demand,
        "reserve": [round(0.05 * d, 6) for d in SIX_BUS_LOAD],
    }


# --- 39 bus -----------------------------------------------------------------

# Ten-unit thermal data (p_max, p_min, a, b, c) placed on buses 30..39.
TEN_UNITS = [
    (455, 150, 1000, 16.19, 0.00048), (455, 150, 970, 17.26, 0.00031),
    (130, 20, 700, 16.60, 0.002), (130, 20, 680, 16.50, 0.00211),
    (162, 25, 450, 19.70, 0.00398), (80, 20, 370, 22.26, 0.00712),
    (85, 25, 480, 27.74, 0.00079), (55, 10, 660, 25.92, 0.00413),
    (55, 10, 665, 27.27, 0.00222), (55, 10, 670, 27.79, 0.00173),
]
TEN_UNIT_LOAD = [700, 750, 850, 950, 1000, 1100, 1150, 1200, 1300, 1400, 1450, 1500,
                 1400, 1300, 1200, 1050, 1000, 1100, 1200, 1400, 1300, 1100, 900, 800]
THIRTY_NINE_TAPS = {"21", "22", "32"}
THIRTY_NINE_SHIFTS = {"5", "11", "21", "22", "27", "32", "37", "44"}


def network_branches(ppc, taps, shifts, rating_scale):
    branches = []
    for k, row in enumerate(ppc["branch"], start=1):
        lid = str(k)
        rating = float(row[5])
        rating *= rating_scale.get(lid, 1.0)
        br = {"id": lid, "from_bus": str(int(row[0])), "to_bus": str(int(row[1])),
              "x": float(row[3]), "r": float(row[2]), "b": float(row[4]),
              "rating": round(rating, 6)}
        dev = device(lid in taps, lid in shifts)
        if dev:
            br["device"] = dev
        branches.append(br)
    return branches


def scaled_demand(ppc, profile):
    pd = {str(int(b[0])): float(b[2]) for b in ppc["bus"] if b[2] > 0}
    total = sum(pd.values())
    return {bus: [round(v / total * load, 6) for load in profile] for bus, v in pd.items()}


def thirty_nine_bus(cut=True):
    from pypower.case39 import case39
    ppc = case39()
    ref = int(ppc["bus"][ppc["bus"][:, 1] == 3][0, 0])
    gens = []
    for k, (hi, lo, a, b1, c2) in enumerate(TEN_UNITS):
        gens.append({"id": f"G{k + 1}", "bus": str(30 + k), "p_min": float(lo),
                     "p_max": float(hi), "cost_curve": quadratic_curve(a, b1, c2, lo, hi, 4)})
    return {
        "name": "thirty_nine_bus" if cut else "thirty_nine_bus_original_ratings",
        "base_mva": float(ppc["baseMVA"]),
        "horizon": len(TEN_UNIT_LOAD),
        "buses": [{"id": str(int(b[0])), "is_reference": int(b[0]) == ref} for b in ppc["bus"]],
        "branches": network_branches(ppc, THIRTY_NINE_TAPS, THIRTY_NINE_SHIFTS,
                                     {"23": 0.2} if cut else {}),
        "generators": gens,
        "demand": scaled_demand(ppc, TEN_UNIT_LOAD),
        "reserve": [round(0.05 * d, 6) for d in TEN_UNIT_LOAD],
    }


# --- 118 bus ----------------------------------------------------------------

ONE_EIGHTEEN_TAPS = {"8", "32", "36", "51", "93", "95", "102", "107", "127"}
ONE_EIGHTEEN_SHIFTS = {"24", "29", "32", "38", "51", "90", "93", "102", "105", "125", "127"}
# Rated line whose capacity is halved in the bundled case.
ONE_EIGHTEEN_CUT = "123"
RATING_MARGIN = 1.1
RATING_FLOOR = 20.0


def dc_flows_unconstrained(case):
    """MW flows of the cost-optimal DC dispatch with no line limits.

    Hours decouple without ramps, so each hour is a separate LP over segment
    outputs and bus angles.
    """
    import numpy as np
    import scipy.sparse as sp
    from scipy.optimize import linprog

    buses = [b["id"] for b in case["buses"]]
    pos = {b: i for i, b in enumerate(buses)}
    ref = next(i for i, b in enumerate(case["buses"]) if b["is_reference"])
    base = case["base_mva"]
    segs = []  # (bus index, width pu, slope $/pu)
    fixed = np.zeros(len(buses))
    for g in case["generators"]:
        pts = g["cost_curve"]
        fixed[pos[g["bus"]]] += g["p_min"] / base
        for (p0, c0), (p1, c1) in zip(pts, pts[1:]):
            segs.append((pos[g["bus"]], (p1 - p0) / base, (c1 - c0) / (p1 - p0) * base))
    nb, ns = len(buses), len(segs)
    flows = np.zeros((len(case["branches"]), case["horizon"]))
    for h in range(case["horizon"]):
        rows, cols, vals = [], [], []
        for k, (b, _, _) in enumerate(segs):
            rows.append(b), cols.append(k), vals.append(1.0)
        for br in case["branches"]:
            f, t, y = pos[br["from_bus"]], pos[br["to_bus"]], 1.0 / br["x"]
            for bus, sign in ((f, 1.0), (t, -1.0)):
                rows += [bus, bus]
                cols += [ns + f, ns + t]
                vals += [-sign * y, sign * y]
        a_eq = sp.csr_matrix((vals, (rows, cols)), shape=(nb, ns + nb))
        b_eq = -fixed.copy()
        for bus, d in case["demand"].items():
            b_eq[pos[bus]] += d[h] / base
        cost = [s[2] for s in segs] + [0.0] * nb
        bounds = [(0.0, s[1]) for s in segs] + [
            (0.0, 0.0) if i == ref else (None, None) for i in range(nb)]
        res = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
        if res.status != 0:
            raise RuntimeError(f"unconstrained dispatch failed in hour {h + 1}: {res.message}")
        theta = res.x[ns:]
        for l, br in enumerate(case["branches"]):
            flows[l, h] = (theta[pos[br["from_bus"]]] - theta[pos[br["to_bus"]]]) / br["x"] * base
    return flows


def one_eighteen_bus(cut=True):
    from pypower.case118 import case118
    ppc = case118()
    ref = int(ppc["bus"][ppc["bus"][:, 1] == 3][0, 0])
    peak = max(TEN_UNIT_LOAD)
    profile = [ppc["bus"][:, 2].sum() * load / peak for load in TEN_UNIT_LOAD]
    gens = []
    for k, (row, cost) in enumerate(zip(ppc["gen"], ppc["gencost"])):
        c2, c1, c0 = cost[4:7]
        lo, hi = float(row[9]), float(row[8])
        gens.append({"id": f"G{k + 1}", "bus": str(int(row[0])), "p_min": lo, "p_max": hi,
                     "cost_curve": quadratic_curve(c0, c1, c2, lo, hi, 3)})
    case = {
        "name": "one_eighteen_bus" if cut else "one_eighteen_bus_original_ratings",
        "base_mva": float(ppc["baseMVA"]),
        "horizon": len(profile),
        "buses": [{"id": str(int(b[0])), "is_reference": int(b[0]) == ref} for b in ppc["bus"]],
        "branches": network_branches(ppc, ONE_EIGHTEEN_TAPS, ONE_EIGHTEEN_SHIFTS, {}),
        "generators": gens,
        "demand": scaled_demand(ppc, profile),
        "reserve": [round(0.05 * d, 6) for d in profile],
    }
    # The source data carries no usable ratings; rate every line with a
    # margin over its unconstrained flow, then halve the designated one.
    flows = dc_flows_unconstrained(case)
    for br, row in zip(case["branches"], flows):
        rating = max(RATING_MARGIN * abs(row).max(), RATING_FLOOR)
        br["rating"] = float(math.ceil(rating / 10.0) * 10.0)
        if cut and br["id"] == ONE_EIGHTEEN_CUT:
            br["rating"] *= 0.5
    return case


def write(case, out_dir):
    path = out_dir / f"{case['name']}.json"
    path.write_text(json.dumps(case, indent=2) + "\n")
    print(f"wrote {path}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=str(pathlib.Path(__file__).parent.parent / "cases"))
    args = parser.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write(six_bus(), out)
    write(thirty_nine_bus(cut=True), out)
    write(thirty_nine_bus(cut=False), out)
    write(one_eighteen_bus(cut=True), out)
    write(one_eighteen_bus(cut=False), out)


if __name__ == "__main__":
    main()
