#!/usr/bin/env python3
"""Generate the bundled sample dataset under data/.

Deterministic: same output bytes on every run. Stdlib only.
"""
import math
import os

R_KM = 6371.0
OUT = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")


def hav(a, b):
    lat1, lon1 = math.radians(a[0]), math.radians(a[1])
    lat2, lon2 = math.radians(b[0]), math.radians(b[1])
    sa = math.sin((lat2 - lat1) / 2)
    so = math.sin((lon2 - lon1) / 2)
    h = sa * sa + math.cos(lat1) * math.cos(lat2) * so * so
    return 2 * R_KM * math.asin(math.sqrt(min(h, 1.0)))


def fmt(v):
    if isinstance(v, int):
        return str(v)
    s = repr(float(v))
    if s.endswith(".0"):
        s = s[:-2]
    assert "e" not in s and "E" not in s, f"value {v} needs exponent form"
    return s


def csv_field(s):
    if any(c in s for c in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def write_csv(name, header, rows):
    path = os.path.join(OUT, name)
    with open(path, "w") as f:
        f.write(header + "\n")
        for r in rows:
            f.write(",".join(csv_field(x) for x in r) + "\n")
    print(f"wrote {path} ({len(rows)} rows)")


# --- geography ------------------------------------------------------------

CITIES = {
    # west coast / mountain
    "seattle": (47.6062, -122.3321),
    "portland": (45.5152, -122.6784),
    "umatilla": (45.917, -119.3432),
    "boise": (43.615, -116.2023),
    "sanjose": (37.3382, -121.8863),
    "losangeles": (34.0522, -118.2437),
    "saltlake": (40.7608, -111.891),
    "denver": (39.7392, -104.9903),
    # central
    "dallas": (32.7767, -96.797),
    "kansascity": (39.0997, -94.5786),
    "omaha": (41.2565, -95.9345),
    # east
    "chicago": (41.8781, -87.6298),
    "atlanta": (33.749, -84.388),
    "washington": (38.89731, -77.01376),
    "newyork": (40.7128, -74.006),
    "boston": (42.3601, -71.0589),
    "halifax": (44.6488, -63.5752),
    # europe
    "dublin": (53.3498, -6.2603),
    "london": (51.5074, -0.1278),
    "paris": (48.8566, 2.3522),
    "amsterdam": (52.3676, 4.9041),
    "frankfurt": (50.1109, 8.6821),
    "hamburg": (53.5511, 9.9937),
    "copenhagen": (55.6761, 12.5683),
    "oslo": (59.9139, 10.7522),
    "stockholm": (59.3293, 18.0686),
    "madrid": (40.4168, -3.7038),
}

REGIONS = [
    ("aws", "us-east-1", (39.0469, -77.4903)),     # Ashburn
    ("aws", "us-west-2", (45.8399, -119.7006)),    # Boardman
    ("gcp", "us-central1", (41.2619, -95.8608)),   # Council Bluffs
    ("aws", "eu-west-1", (53.3331, -6.2489)),      # Dublin
    ("aws", "eu-north-1", (59.3262, 17.8419)),     # Stockholm
]

# (id, type, city_a, city_b, lobes, length_over_gc)
# Conduits snake around terrain and rights-of-way, so each fiber is laid a
# fixed factor longer than the great circle; cables run straighter.
FIBERS = [
    ("f_sea_pdx", "land", "seattle", "portland", 3, 1.12),
    ("f_pdx_uma", "land", "portland", "umatilla", 3, 1.11),
    ("f_uma_boi", "land", "umatilla", "boise", 3, 1.16),
    ("f_boi_slc", "land", "boise", "saltlake", 5, 1.12),
    ("f_pdx_sjc", "land", "portland", "sanjose", 7, 1.18),
    ("f_sjc_lax", "land", "sanjose", "losangeles", 5, 1.13),
    ("f_lax_dal", "land", "losangeles", "dallas", 7, 1.17),
    ("f_sjc_slc", "land", "sanjose", "saltlake", 7, 1.19),
    ("f_slc_den", "land", "saltlake", "denver", 5, 1.14),
    ("f_den_oma", "land", "denver", "omaha", 7, 1.12),
    ("f_den_mci", "land", "denver", "kansascity", 7, 1.16),
    ("f_dal_mci", "land", "dallas", "kansascity", 5, 1.13),
    ("f_mci_oma", "land", "kansascity", "omaha", 3, 1.09),
    ("f_oma_chi", "land", "omaha", "chicago", 5, 1.15),
    ("f_dal_atl", "land", "dallas", "atlanta", 7, 1.16),
    ("f_atl_was", "land", "atlanta", "washington", 7, 1.14),
    ("f_chi_was", "land", "chicago", "washington", 7, 1.18),
    ("f_chi_nyc", "land", "chicago", "newyork", 7, 1.16),
    ("f_was_nyc", "land", "washington", "newyork", 3, 1.1),
    ("f_nyc_bos", "land", "newyork", "boston", 3, 1.09),
    ("f_bos_hfx", "land", "boston", "halifax", 5, 1.12),
    ("f_dub_lon", "submarine", "dublin", "london", 3, 1.06),
    ("f_lon_par", "land", "london", "paris", 3, 1.1),
    ("f_lon_ams", "land", "london", "amsterdam", 3, 1.09),
    ("f_par_fra", "land", "paris", "frankfurt", 5, 1.12),
    ("f_par_mad", "land", "paris", "madrid", 7, 1.15),
    ("f_ams_fra", "land", "amsterdam", "frankfurt", 3, 1.1),
    ("f_ams_ham", "land", "amsterdam", "hamburg", 3, 1.09),
    ("f_ham_cph", "land", "hamburg", "copenhagen", 3, 1.08),
    ("f_cph_osl", "land", "copenhagen", "oslo", 5, 1.1),
    ("f_osl_sto", "land", "oslo", "stockholm", 5, 1.12),
    ("f_cph_sto", "land", "copenhagen", "stockholm", 5, 1.11),
    ("tat_nyc_lon", "submarine", "newyork", "london", 5, 1.07),
    ("tat_hfx_dub", "submarine", "halifax", "dublin", 5, 1.06),
    ("tat_was_par", "submarine", "washington", "paris", 5, 1.08),
]

# (id, cloud, host fiber, fraction along, lateral offset in degrees lat)
POPS = [
    ("pop_philadelphia", "aws", "f_was_nyc", 0.5, 0.05),
    ("pop_cleveland", "gcp", "f_chi_nyc", 0.45, 0.05),
    ("pop_pittsburgh", "aws", "f_chi_was", 0.62, 0.05),
    ("pop_desmoines", "gcp", "f_oma_chi", 0.4, 0.05),
    ("pop_lincoln", "aws", "f_den_oma", 0.55, 0.05),
    ("pop_grandjunction", "gcp", "f_slc_den", 0.5, 0.05),
    ("pop_twinfalls", "aws", "f_boi_slc", 0.45, 0.05),
    ("pop_hoodriver", "gcp", "f_pdx_uma", 0.35, 0.05),
    ("pop_bakersfield", "aws", "f_sjc_lax", 0.55, 0.05),
    ("pop_charlotte", "gcp", "f_atl_was", 0.5, 0.05),
    ("pop_rotterdam", "aws", "f_lon_ams", 0.6, 0.04),
    ("pop_cologne", "gcp", "f_ams_fra", 0.5, 0.04),
    ("pop_kiel", "aws", "f_ham_cph", 0.45, 0.04),
    ("pop_jonkoping", "gcp", "f_cph_sto", 0.55, 0.04),
    ("pop_strasbourg", "aws", "f_par_fra", 0.5, 0.04),
]


def guard(v):
    # keep coordinates away from zero so their repr never needs an exponent
    return v if abs(v) >= 5e-4 else (5e-4 if v >= 0 else -5e-4)


def densify(a, b, amp, lobes, step_km=85.0):
    """Polyline a->b: chord interpolation plus a perpendicular sine snake.

    Lobes keep the endpoints exact while pushing the laid length above the
    great circle, like a real conduit following roads and seabed contours.
    """
    mlat = math.radians((a[0] + b[0]) / 2)
    ux = (b[1] - a[1]) * math.cos(mlat)
    uy = b[0] - a[0]
    norm = math.hypot(ux, uy) or 1.0
    nx, ny = -uy / norm, ux / norm
    n = max(2, int(math.ceil(hav(a, b) / step_km)) + 1, 6 * lobes)
    pts = []
    for k in range(n + 1):
        t = k / n
        s = amp * math.sin(lobes * math.pi * t)
        lat = a[0] + t * (b[0] - a[0]) + s * ny
        lon = a[1] + t * (b[1] - a[1]) + s * nx / math.cos(mlat)
        pts.append((guard(lat), guard(lon)))
    return pts


def snake(a, b, lobes, inflation, step_km=85.0):
    """Densified polyline whose length is inflation x great circle."""
    target = inflation * hav(a, b)
    lo, hi = 0.0, 0.2
    while polyline_len(densify(a, b, hi, lobes, step_km)) < target:
        hi *= 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if polyline_len(densify(a, b, mid, lobes, step_km)) < target:
            lo = mid
        else:
            hi = mid
    pts = densify(a, b, 0.5 * (lo + hi), lobes, step_km)
    assert abs(polyline_len(pts) - target) < 1e-6 * target
    return pts


def linestring(pts):
    return "LINESTRING (" + ", ".join(f"{fmt(p[1])} {fmt(p[0])}" for p in pts) + ")"


def polyline_len(pts):
    return sum(hav(pts[i - 1], pts[i]) for i in range(1, len(pts)))


FIBER_PTS = {}


def gen_nodes_fibers():
    rows = [[name, "peering_city", "", "", fmt(lat), fmt(lon)] for name, (lat, lon) in CITIES.items()]
    for cloud, region, (lat, lon) in REGIONS:
        rows.append([f"region_{cloud}_{region}", "region", cloud, region, fmt(lat), fmt(lon)])

    fiber_rows = []
    for fid, ftype, ca, cb, lobes, inflation in FIBERS:
        pts = snake(CITIES[ca], CITIES[cb], lobes, inflation)
        FIBER_PTS[fid] = pts
        fiber_rows.append([fid, ftype, linestring(pts)])

    for pid, cloud, host, frac, off in POPS:
        pts = FIBER_PTS[host]
        total = polyline_len(pts)
        target = frac * total
        cum = 0.0
        at = pts[-1]
        for i in range(1, len(pts)):
            seg = hav(pts[i - 1], pts[i])
            if cum + seg >= target:
                t = (target - cum) / seg if seg > 0 else 0.0
                at = (pts[i - 1][0] + t * (pts[i][0] - pts[i - 1][0]),
                      pts[i - 1][1] + t * (pts[i][1] - pts[i - 1][1]))
                break
            cum += seg
        rows.append([pid, "pop", cloud, "", fmt(round(at[0] + off, 5)), fmt(round(at[1], 5))])

    write_csv("nodes.csv", "id,kind,cloud,region_id,lat,lon", rows)
    write_csv("fibers.csv", "id,fiber_type,wkt", fiber_rows)


# --- waypoints --------------------------------------------------------------

# per pair: list of (popularity, [city names])
WAYPOINT_CHAINS = {
    ("aws:eu-north-1", "aws:eu-west-1"): [
        (12, ["stockholm", "copenhagen", "hamburg", "amsterdam", "london", "dublin"]),
        (4, ["stockholm", "oslo", "copenhagen", "hamburg", "amsterdam", "london", "dublin"]),
    ],
    ("aws:eu-north-1", "aws:us-east-1"): [
        (9, ["stockholm", "copenhagen", "hamburg", "amsterdam", "london", "newyork", "washington"]),
    ],
    ("aws:eu-north-1", "aws:us-west-2"): [
        (7, ["stockholm", "copenhagen", "hamburg", "amsterdam", "london", "newyork",
             "chicago", "omaha", "denver", "saltlake", "boise", "umatilla"]),
    ],
    ("aws:eu-north-1", "gcp:us-central1"): [
        (8, ["stockholm", "copenhagen", "hamburg", "amsterdam", "london", "newyork", "chicago", "omaha"]),
    ],
    ("aws:eu-west-1", "aws:us-east-1"): [
        (10, ["dublin", "halifax", "boston", "newyork", "washington"]),
        (3, ["dublin", "london", "newyork", "washington"]),
    ],
    ("aws:eu-west-1", "aws:us-west-2"): [
        (6, ["dublin", "halifax", "boston", "newyork", "chicago", "omaha",
             "denver", "saltlake", "boise", "umatilla"]),
    ],
    ("aws:eu-west-1", "gcp:us-central1"): [
        (6, ["dublin", "halifax", "boston", "newyork", "chicago", "omaha"]),
    ],
    ("aws:us-east-1", "aws:us-west-2"): [
        (11, ["washington", "chicago", "omaha", "denver", "saltlake", "boise", "umatilla"]),
        (5, ["washington", "atlanta", "dallas", "losangeles", "sanjose", "portland", "umatilla"]),
    ],
    ("aws:us-east-1", "gcp:us-central1"): [
        (14, ["washington", "chicago", "omaha"]),
    ],
    ("aws:us-west-2", "gcp:us-central1"): [
        (13, ["umatilla", "boise", "saltlake", "denver", "omaha"]),
    ],
}


def jitter(city, k):
    # small deterministic displacement so waypoints look like geolocated hops
    a = 0.018 * math.sin(2.1 * k + 0.7 * sum(map(ord, city)))
    b = 0.018 * math.cos(1.3 * k + 0.9 * sum(map(ord, city)))
    return round(CITIES[city][0] + a, 5), round(CITIES[city][1] + b, 5)


def gen_waypoints():
    rows = []

    def emit(src, dst, pop, chain):
        sc, sr = src.split(":")
        dc, dr = dst.split(":")
        for i, city in enumerate(chain):
            lat, lon = jitter(city, i + pop)
            acc = 25 + ((i * 7 + pop) % 4) * 10  # 25..55 km, under the filter
            rows.append([sc, sr, dc, dr, str(i), fmt(lat), fmt(lon), str(acc), str(pop)])

    for (src, dst), cands in sorted(WAYPOINT_CHAINS.items()):
        for pop, chain in cands:
            emit(src, dst, pop, chain)
            emit(dst, src, pop, list(reversed(chain)))

    write_csv("waypoints.csv",
              "src_cloud,src_region,dst_cloud,dst_region,hop_index,lat,lon,accuracy_km,popularity",
              rows)
    write_csv("pairs.csv", "src,dst", [[s, d] for s, d in sorted(WAYPOINT_CHAINS)])


# --- isos and carbon --------------------------------------------------------

ISOS = [
    # id, lon0, lon1, lat0, lat1, tz offset hours, base, solar dip, ripple
    ("iso_us_nw", -125.0, -114.0, 42.0, 50.0, -8, 340, 95, 18),
    ("iso_us_ca", -125.0, -114.0, 32.0, 42.0, -8, 380, 150, 22),
    ("iso_us_mt", -114.0, -100.0, 31.0, 50.0, -7, 520, 110, 25),
    ("iso_us_c", -100.0, -89.0, 25.0, 50.0, -6, 495, 130, 28),
    ("iso_us_e", -89.0, -60.0, 24.0, 50.0, -5, 470, 120, 24),
    ("iso_eu_ie", -11.0, -5.0, 51.0, 56.0, 0, 420, 140, 20),
    ("iso_eu_uk", -5.0, 1.2, 49.0, 59.0, 0, 390, 130, 22),
    ("iso_eu_fr", -5.0, 8.0, 42.0, 49.0, 1, 310, 90, 16),
    ("iso_eu_de", 2.5, 15.0, 49.6, 54.0, 1, 480, 170, 26),
    ("iso_eu_dk", 7.0, 13.5, 54.0, 57.8, 1, 400, 160, 24),
    ("iso_eu_no", 3.0, 12.0, 57.8, 63.0, 1, 265, 55, 14),
    ("iso_eu_se", 13.5, 20.0, 55.0, 63.0, 1, 290, 70, 15),
]

CIE_START = "2023-06-01T00:00:00Z"
CIE_HOURS = 8 * 24  # covers a 7-day sweep plus a 24 h deadline tail


def gen_isos_cie():
    iso_rows = []
    for iso in ISOS:
        iid, x0, x1, y0, y1 = iso[0], iso[1], iso[2], iso[3], iso[4]
        ring = f"POLYGON (({fmt(x0)} {fmt(y0)}, {fmt(x1)} {fmt(y0)}, {fmt(x1)} {fmt(y1)}, {fmt(x0)} {fmt(y1)}, {fmt(x0)} {fmt(y0)}))"
        iso_rows.append([iid, ring])
    write_csv("isos.csv", "iso_id,wkt_polygon", iso_rows)

    import datetime
    t0 = datetime.datetime(2023, 6, 1, tzinfo=datetime.timezone.utc)
    rows = []
    for idx, (iid, _x0, _x1, _y0, _y1, tz, base, dip, ripple) in enumerate(ISOS):
        for h in range(CIE_HOURS):
            local = (h + tz) % 24
            solar = max(0.0, math.sin(math.pi * (local - 6) / 12.0)) if 6 <= local <= 18 else 0.0
            v = base - dip * solar
            v += ripple * math.sin(2 * math.pi * (h + 5 * idx) / 24.0)
            v += 12 * math.sin(2 * math.pi * h / 168.0 + idx)
            v = min(600.0, max(200.0, v))
            ts = (t0 + datetime.timedelta(hours=h)).strftime("%Y-%m-%dT%H:%M:%SZ")
            rows.append([iid, ts, fmt(round(v, 1))])
    write_csv("cie_sample.csv", "iso_id,timestamp_utc,carbon_intensity_g_per_kwh", rows)


# --- small tables ------------------------------------------------------------

def gen_tables():
    write_csv("device_power.csv", "class,era,ie_w_per_gbps", [
        ["core_router", "y2012", "10"],
        ["oxc", "y2012", "0.05"],
        ["transceiver", "y2012", "1.5"],
        ["amplifier", "y2012", "0.03"],
        ["regenerator", "y2012", "3"],
        ["core_router", "y2024", "2"],
        ["oxc", "y2024", "0.05"],
        ["transceiver", "y2024", "0.09"],
        ["amplifier", "y2024", "0.03"],
        ["regenerator", "y2024", "3"],
    ])
    write_csv("workloads.csv", "name,cores,runtime_h,input_gb,output_gb", [
        ["video_resize", "4", "2.2", "138.0", "7.5"],
        ["video_effect", "8", "2.1", "30.0", "3.1"],
        ["compile_small", "40", "2.2", "24.0", "3.9"],
        ["compile_large", "40", "11.9", "132.0", "21.5"],
    ])


# --- appendix preview route ---------------------------------------------------

def gen_preview():
    hops = [
        (39.0469, -77.4903),    # us-east-1 anchor
        (38.89731, -77.01376),  # washington
        (40.7128, -74.006),     # newyork
        (51.5074, -0.1278),     # london
        (52.3676, 4.9041),      # amsterdam
        (53.5511, 9.9937),      # hamburg
        (55.6761, 12.5683),     # copenhagen
        (59.3293, 18.0686),     # stockholm
        (59.3262, 17.8419),     # eu-north-1 anchor
    ]
    types = ["land", "land", "submarine", "land", "land", "land", "land", "land"]
    target = 7889.28
    land_len = sum(hav(hops[i], hops[i + 1]) for i in range(len(hops) - 1) if i != 2)

    def cable(amp):
        a, b = hops[2], hops[3]
        n = 64
        pts = []
        for k in range(n + 1):
            t = k / n
            lat = a[0] + t * (b[0] - a[0]) + amp * math.sin(2 * math.pi * t)
            lon = a[1] + t * (b[1] - a[1])
            pts.append((round(lat, 5), round(lon, 5)))
        pts[0], pts[-1] = a, b
        return pts

    lo, hi = 0.0, 6.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if land_len + polyline_len(cable(mid)) < target:
            lo = mid
        else:
            hi = mid
    amp = 0.5 * (lo + hi)
    pts = cable(amp)
    total = land_len + polyline_len(pts)
    assert abs(total - target) < 1e-4, total

    segs = []
    for i in range(len(hops) - 1):
        segs.append(pts if i == 2 else [hops[i], hops[i + 1]])
    wkt = "MULTILINESTRING (" + ", ".join(
        "(" + ", ".join(f"{fmt(p[1])} {fmt(p[0])}" for p in seg) + ")" for seg in segs) + ")"
    routers = " | ".join(f"({fmt(p[0])}, {fmt(p[1])})" for p in hops)
    row1 = ["aws", "us-east-1", "aws", "eu-north-1", "9", fmt(target), routers, wkt,
            " | ".join(types), "Inferred (waypoints), with PoPs"]

    # a traceroute sibling: bare hops, great-circle distance, no fiber geometry
    tr_pts = [(39.0469, -77.4903), (38.91, -77.02), (40.72, -74.01),
              (51.5, -0.13), (55.68, 12.57), (59.3262, 17.8419)]
    tr_dist = sum(hav(tr_pts[i - 1], tr_pts[i]) for i in range(1, len(tr_pts)))
    row2 = ["aws", "us-east-1", "aws", "eu-north-1", str(len(tr_pts)), fmt(tr_dist),
            " | ".join(f"({fmt(p[0])}, {fmt(p[1])})" for p in tr_pts), "", "", "traceroute"]

    # an endpoints-method sibling on another pair, straight segments
    ep = [(39.0469, -77.4903), (38.89731, -77.01376), (40.7128, -74.006),
          (42.3601, -71.0589), (44.6488, -63.5752), (53.3498, -6.2603), (53.3331, -6.2489)]
    ep_types = ["land", "land", "land", "land", "submarine", "land"]
    ep_dist = sum(hav(ep[i - 1], ep[i]) for i in range(1, len(ep)))
    ep_wkt = "MULTILINESTRING (" + ", ".join(
        f"({fmt(ep[i][1])} {fmt(ep[i][0])}, {fmt(ep[i + 1][1])} {fmt(ep[i + 1][0])})"
        for i in range(len(ep) - 1)) + ")"
    row3 = ["aws", "us-east-1", "aws", "eu-west-1", str(len(ep)), fmt(ep_dist),
            " | ".join(f"({fmt(p[0])}, {fmt(p[1])})" for p in ep), ep_wkt,
            " | ".join(ep_types), "Inferred (endpoints)"]

    write_csv("appendix_preview.csv",
              "src_cloud,src_region,dst_cloud,dst_region,hop_count,distance_km,"
              "routers_latlon,fiber_wkt_paths,fiber_types,source",
              [row1, row2, row3])


def main():
    os.makedirs(OUT, exist_ok=True)
    gen_nodes_fibers()
    gen_waypoints()
    gen_isos_cie()
    gen_tables()
    gen_preview()


if __name__ == "__main__":
    main()
