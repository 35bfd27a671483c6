#!/usr/bin/env python3
"""Deterministically generate the 13-area / 20-machine synthetic fixture and
its 24-hour commitment/load profile.

All parameters come from closed-form integer formulas, so re-running this
script always reproduces byte-identical fixture files.
"""

import json
import os

N_AREAS = 13
# Areas 1..7 host two machines, areas 8..13 one machine: 20 machines total.
AREA_OF_GEN = [min((k // 2) + 1, 7) if k < 14 else k - 14 + 8 for k in range(20)]

HUB_LOADS = [0.7, 0.5, 0.6, 0.65, 0.55, 0.6, 0.7, 0.5, 0.45, 0.55, 0.6, 0.5, 0.6]

LOAD_SCALES = [0.72, 0.70, 0.68, 0.67, 0.68, 0.72, 0.80, 0.90, 0.98, 1.04, 1.08, 1.10,
               1.12, 1.12, 1.10, 1.08, 1.06, 1.08, 1.12, 1.10, 1.02, 0.92, 0.84, 0.76]

OFFLINE = {
    0: ["g02", "g06"],
    1: ["g02", "g06"],
    2: ["g02", "g06", "g14"],
    3: ["g02", "g06", "g20"],
    4: ["g02"],
    22: ["g06"],
    23: ["g02", "g06"],
}


def hub(i):
    return f"h{i:02d}"


def build_grid():
    buses = [{"id": hub(i)} for i in range(1, N_AREAS + 1)]
    generators = []
    lines = []
    areas = {hub(i): f"A{i:02d}" for i in range(1, N_AREAS + 1)}

    for k in range(20):
        area = AREA_OF_GEN[k]
        machine_bus = f"m{k + 1:02d}"
        buses.append({"id": machine_bus})
        areas[machine_bus] = f"A{area:02d}"
        generators.append({
            "id": f"g{k + 1:02d}",
            "bus": machine_bus,
            "rating_mva": float(80 + 10 * (k % 7)),
            "inertia_s": (250 + 28 * k) / 100,
            "damping_pu": (20 + 5 * (k % 5)) / 1000,
            "xd_transient_pu": (20 + 2 * (k % 6)) / 100,
            "mech_power_pu": (30 + 5 * (k % 4)) / 100,
        })
        lines.append({
            "from": machine_bus,
            "to": hub(area),
            "reactance_pu": (15 + (k % 5)) / 100,
        })

    for i in range(1, N_AREAS + 1):
        j = i % N_AREAS + 1
        lines.append({"from": hub(i), "to": hub(j), "reactance_pu": (40 + 2 * (i % 3)) / 100})
    lines.append({"from": hub(1), "to": hub(7), "reactance_pu": 0.5})

    loads = [{"bus": hub(i + 1), "active_power_pu": HUB_LOADS[i]} for i in range(N_AREAS)]

    return {
        "system_base_mva": 100.0,
        "nominal_frequency_hz": 60.0,
        "buses": buses,
        "generators": generators,
        "lines": lines,
        "loads": loads,
        "areas": areas,
    }


def main():
    fixtures = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")

    scenario = {
        "schema_version": 1,
        "id": "thirteen_area",
        "grid": build_grid(),
        "disturbance": {"kind": "bus_fault", "bus": hub(7), "t_start_s": 1.0, "t_clear_s": 1.1},
        "simulation": {"duration_s": 10.0, "measurement_rate_hz": 60.0},
        "estimators": {
            "sysid": {"enabled": True, "order": 2, "poly_order": 4, "fit_window_s": 0.5},
            "dmd": {"enabled": True, "rank": 0, "start_index": 14, "anchor_at_clear": True},
            "osc": {"enabled": True, "bandwidth_hz": 2.0, "include_dc": False},
        },
    }
    with open(os.path.join(fixtures, "thirteen_area.json"), "w") as f:
        json.dump(scenario, f, indent=2)
        f.write("\n")

    profile = {
        "schema_version": 1,
        "hours": [
            {"hour": h, "load_scale": LOAD_SCALES[h], "offline_generators": OFFLINE.get(h, [])}
            for h in range(24)
        ],
    }
    with open(os.path.join(fixtures, "profile_24h.json"), "w") as f:
        json.dump(profile, f, indent=2)
        f.write("\n")

    total_dispatch = sum(g["mech_power_pu"] for g in scenario["grid"]["generators"])
    total_load = sum(l["active_power_pu"] for l in scenario["grid"]["loads"])
    print(f"dispatch {total_dispatch:.2f} pu, load {total_load:.2f} pu")


if __name__ == "__main__":
    main()
