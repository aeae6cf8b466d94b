#!/usr/bin/env python3
"""Count the bundled dataset into data/manifest.json.

Reads the generated CSVs back and derives the expected infrastructure-graph
shape by arithmetic alone: a fiber endpoint sitting on a city snaps to it, and
every region/PoP tap that is not coincident with a node splits one edge (one
new junction node, net one extra edge) and hangs the tap node off it by a
connector (one node, one edge). So each tap adds exactly 2 nodes and 2 edges.
"""
import csv
import json
import math
import os

R_KM = 6371.0
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(ROOT, "data")
SNAP_KM = 10.0


def hav(a, b):
    lat1, lon1 = math.radians(a[0]), math.radians(a[1])
    lat2, lon2 = math.radians(b[0]), math.radians(b[1])
    sa = math.sin((lat2 - lat1) / 2)
    so = math.sin((lon2 - lon1) / 2)
    h = sa * sa + math.cos(lat1) * math.cos(lat2) * so * so
    return 2 * R_KM * math.asin(math.sqrt(min(h, 1.0)))


def read(name):
    with open(os.path.join(DATA, name)) as f:
        rows = [r for r in csv.reader(f) if r and not r[0].startswith("#")]
    return rows[0], rows[1:]


def main():
    out = {}

    _, nodes = read("nodes.csv")
    cities = [(float(r[4]), float(r[5])) for r in nodes if r[1] == "peering_city"]
    pops = [(float(r[4]), float(r[5])) for r in nodes if r[1] == "pop"]
    regions = [(r[2] + ":" + r[3], (float(r[4]), float(r[5]))) for r in nodes if r[1] == "region"]
    out["nodes_csv_rows"] = len(nodes)
    out["peering_cities"] = len(cities)
    out["pops"] = len(pops)
    out["regions"] = sorted(k for k, _ in regions)

    _, fibers = read("fibers.csv")
    out["fibers"] = len(fibers)
    out["fiber_types"] = sorted({r[1] for r in fibers})
    for r in fibers:
        body = r[2].split("(", 1)[1].rsplit(")", 1)[0]
        pts = [tuple(map(float, p.split()))[::-1] for p in body.split(", ")]
        for ep in (pts[0], pts[-1]):
            near = min(hav(ep, c) for c in cities)
            assert near <= SNAP_KM, f"fiber {r[0]} endpoint {near:.1f} km from nearest city"

    taps = [p for _, p in regions] + pops
    all_nodes = cities + taps
    for t in taps:
        others = [n for n in all_nodes if n is not t]
        assert min(hav(t, n) for n in others) > 0.5, f"tap {t} coincides with a node"

    graph = {
        "endpoints_only": {
            "nodes": len(cities) + 2 * len(regions),
            "edges": len(fibers) + 2 * len(regions),
        },
        "with_pops": {
            "nodes": len(cities) + 2 * len(regions) + 2 * len(pops),
            "edges": len(fibers) + 2 * len(regions) + 2 * len(pops),
        },
    }
    out["graph"] = graph

    _, wrows = read("waypoints.csv")
    out["waypoint_rows"] = len(wrows)
    cands = 0
    cur_key, prev_idx = None, -1
    for r in wrows:
        key = tuple(r[:4])
        idx = int(r[4])
        if key != cur_key or idx <= prev_idx:
            cands += 1
            cur_key = key
        prev_idx = idx
    out["waypoint_candidates"] = cands
    out["waypoint_pairs"] = len({tuple(r[:4]) for r in wrows})

    _, pairs = read("pairs.csv")
    out["pairs"] = len(pairs)

    _, isos = read("isos.csv")
    out["isos"] = sorted(r[0] for r in isos)

    _, cie = read("cie_sample.csv")
    out["cie_rows"] = len(cie)
    out["cie_isos"] = sorted({r[0] for r in cie})
    stamps = sorted({r[1] for r in cie})
    out["cie_first"] = stamps[0]
    out["cie_last"] = stamps[-1]
    by_iso = {}
    for r in cie:
        by_iso[r[0]] = by_iso.get(r[0], 0) + 1
    assert len(set(by_iso.values())) == 1, "uneven carbon series"
    out["cie_hours_per_iso"] = next(iter(by_iso.values()))
    vals = [float(r[2]) for r in cie]
    out["cie_min"] = min(vals)
    out["cie_max"] = max(vals)

    _, dp = read("device_power.csv")
    out["device_power_rows"] = len(dp)
    _, wl = read("workloads.csv")
    out["workloads"] = len(wl)
    _, pv = read("appendix_preview.csv")
    out["preview_rows"] = len(pv)

    path = os.path.join(DATA, "manifest.json")
    with open(path, "w") as f:
        json.dump(out, f, indent=2, sort_keys=True)
        f.write("\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
