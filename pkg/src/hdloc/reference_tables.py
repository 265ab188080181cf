"""Reference values the simulation tables are compared against.

T1: asymptotic relative efficiencies per distribution (ratios).
T2: size-corrected power (percent) at 5% for the low-dimensional grid.
T3: empirical size/power (percent) at 5% for scenarios I-III.
T4: empirical size/power (percent) at 5% for scenarios IV-V.

Keys for T2-T4: (scenario, n, p, allocation, test).
Keys for T1: (distribution label, ratio name).
"""

ARE_REFERENCE = {
    ("t3", "ss_cq"): 2.54, ("t4", "ss_cq"): 1.76, ("t5", "ss_cq"): 1.51,
    ("t6", "ss_cq"): 1.38, ("t10", "ss_cq"): 1.18, ("normal", "ss_cq"): 1.00,
    ("mn_0.2_3", "ss_cq"): 1.95, ("mn_0.05_10", "ss_cq"): 5.79,
    ("t3", "sr_cq"): 1.98, ("t4", "sr_cq"): 1.48, ("t5", "sr_cq"): 1.31,
    ("t6", "sr_cq"): 1.22, ("t10", "sr_cq"): 1.10, ("normal", "sr_cq"): 1.00,
    ("mn_0.2_3", "sr_cq"): 1.64, ("mn_0.05_10", "sr_cq"): 5.26,
    ("t3", "sr_ss"): 0.78, ("t4", "sr_ss"): 0.84, ("t5", "sr_ss"): 0.87,
    ("t6", "sr_ss"): 0.88, ("t10", "sr_ss"): 0.93, ("normal", "sr_ss"): 1.00,
    ("mn_0.2_3", "sr_ss"): 0.84, ("mn_0.05_10", "sr_ss"): 0.91,
}

# (scenario, n, p) -> {(allocation, test): percent}
_T2 = {
    ("I", 30, 24): {("dense", "tsr"): 9.6, ("dense", "sr"): 51.8,
                    ("sparse", "tsr"): 11.8, ("sparse", "sr"): 86.0},
    ("I", 40, 32): {("dense", "tsr"): 11.4, ("dense", "sr"): 65.4,
                    ("sparse", "tsr"): 16.2, ("sparse", "sr"): 86.8},
    ("II", 30, 24): {("dense", "tsr"): 11.7, ("dense", "sr"): 68.2,
                     ("sparse", "tsr"): 16.0, ("sparse", "sr"): 97.0},
    ("II", 40, 32): {("dense", "tsr"): 16.6, ("dense", "sr"): 84.8,
                     ("sparse", "tsr"): 21.5, ("sparse", "sr"): 96.8},
    ("III", 30, 24): {("dense", "tsr"): 15.2, ("dense", "sr"): 74.0,
                      ("sparse", "tsr"): 17.2, ("sparse", "sr"): 97.8},
    ("III", 40, 32): {("dense", "tsr"): 19.6, ("dense", "sr"): 88.4,
                      ("sparse", "tsr"): 25.5, ("sparse", "sr"): 97.9},
}

T2_REFERENCE = {(scen, n, p, alloc, test): v
                for (scen, n, p), cells in _T2.items()
                for (alloc, test), v in cells.items()}

# rows: (n, p): size CQ SS SR | dense CQ SS SR | sparse CQ SS SR
_T3_ROWS = {
    "I": {
        (30, 100): (4.7, 5.6, 5.7, 26.9, 30.0, 29.6, 33.2, 37.4, 36.4),
        (30, 200): (5.0, 6.8, 6.3, 26.4, 29.9, 29.3, 29.8, 31.9, 32.8),
        (30, 400): (4.8, 6.0, 5.8, 26.3, 30.0, 29.3, 29.0, 32.5, 31.9),
        (40, 100): (4.5, 5.8, 4.8, 38.0, 40.2, 39.6, 46.4, 49.1, 48.0),
        (40, 200): (4.9, 6.2, 5.8, 38.5, 41.2, 41.1, 42.6, 45.1, 45.4),
        (40, 400): (5.3, 6.2, 6.2, 37.1, 40.5, 40.4, 41.9, 44.4, 43.7),
    },
    "II": {
        (30, 100): (5.5, 5.6, 5.2, 31.2, 50.5, 42.7, 39.6, 63.0, 55.0),
        (30, 200): (4.5, 6.8, 5.9, 31.1, 55.4, 44.9, 34.8, 61.4, 50.2),
        (30, 400): (4.5, 6.0, 5.6, 29.0, 56.2, 43.8, 32.1, 59.5, 48.9),
        (40, 100): (4.3, 5.8, 5.2, 41.3, 67.7, 58.4, 49.1, 80.1, 67.8),
        (40, 200): (5.0, 6.2, 5.5, 42.7, 69.6, 59.6, 48.8, 77.3, 67.0),
        (40, 400): (5.8, 6.2, 6.5, 41.7, 72.2, 62.7, 45.7, 75.7, 65.5),
    },
    "III": {
        (30, 100): (5.1, 5.6, 5.6, 29.7, 56.0, 47.5, 36.8, 68.6, 59.8),
        (30, 200): (4.9, 6.8, 5.8, 29.3, 60.3, 48.8, 32.8, 67.9, 56.6),
        (30, 400): (4.8, 6.0, 5.3, 29.6, 62.3, 53.8, 31.2, 64.5, 55.4),
        (40, 100): (5.0, 5.8, 5.0, 39.4, 72.2, 62.9, 45.7, 85.1, 74.9),
        (40, 200): (4.7, 6.2, 6.4, 42.8, 75.8, 66.1, 45.7, 82.2, 71.9),
        (40, 400): (4.0, 6.2, 5.5, 39.8, 77.9, 68.8, 44.3, 81.4, 72.2),
    },
}

_T4_ROWS = {
    "IV": {
        (30, 100): (5.6, 7.4, 6.1, 26.6, 30.4, 29.1, 31.5, 37.2, 36.4),
        (30, 200): (3.6, 5.8, 5.7, 27.5, 31.0, 30.5, 30.8, 33.4, 33.3),
        (30, 400): (4.5, 5.5, 5.7, 24.9, 30.0, 29.2, 26.7, 31.3, 29.8),
        (40, 100): (5.7, 7.3, 6.3, 39.5, 42.7, 41.6, 46.9, 51.9, 50.1),
        (40, 200): (5.6, 6.9, 6.7, 35.5, 38.6, 38.0, 38.3, 42.1, 41.5),
        (40, 400): (6.0, 6.9, 6.9, 39.3, 43.1, 42.8, 41.2, 44.1, 44.1),
    },
    "V": {
        (30, 100): (4.5, 7.1, 6.0, 29.5, 55.4, 46.6, 33.9, 66.1, 56.7),
        (30, 200): (5.7, 6.1, 6.0, 30.1, 58.6, 48.5, 34.3, 63.5, 53.3),
        (30, 400): (3.7, 6.4, 5.3, 30.9, 58.8, 49.8, 30.8, 62.6, 51.7),
        (40, 100): (6.5, 7.1, 6.0, 42.2, 73.4, 65.4, 50.4, 84.0, 74.5),
        (40, 200): (6.3, 7.0, 6.2, 43.2, 76.4, 66.3, 45.4, 80.8, 70.7),
        (40, 400): (4.6, 4.9, 4.5, 39.0, 75.6, 65.7, 42.4, 79.4, 69.7),
    },
}


def _expand(rows_by_scenario):
    out = {}
    for scen, rows in rows_by_scenario.items():
        for (n, p), vals in rows.items():
            for base, alloc in ((0, "null"), (3, "dense"), (6, "sparse")):
                for off, test in ((0, "cq"), (1, "ss"), (2, "sr")):
                    out[(scen, n, p, alloc, test)] = vals[base + off]
    return out


T3_REFERENCE = _expand(_T3_ROWS)
T4_REFERENCE = _expand(_T4_ROWS)

SIZE_POWER_REFERENCE = {"T2": T2_REFERENCE, "T3": T3_REFERENCE, "T4": T4_REFERENCE}
