#!/usr/bin/env python3
"""Regenerates the shipped scenario files under scenarios/.

Layout conventions the simulator relies on:
  - nav target 0 of the work surface is the handoff spot next to bob;
  - the tray is the unique tray-stand furniture; panels are named
    "<color>_panel"; the sandwich board is named "cutting_board";
  - task destination zones sit inside the work-surface footprint;
  - "near" spawn sites are within bob's reach, "far" sites are on the work
    surface beyond it, "remote" sites sit on other surfaces, "hidden" sites
    inside openable furniture.
"""

import json
import math
import os

PI = math.pi
HALF_PI = math.pi / 2.0

COLORS = ["red", "blue", "pink", "green", "yellow", "purple"]


def pose(x, y, theta=0.0):
    return {"x": x, "y": y, "theta": theta}


def rect(x0, x1, y0, y1):
    return [[x, y] for y in range(y0, y1 + 1) for x in range(x0, x1 + 1)]


def perimeter(w, h):
    cells = []
    for x in range(w):
        cells.append([x, 0])
        cells.append([x, h - 1])
    for y in range(1, h - 1):
        cells.append([0, y])
        cells.append([w - 1, y])
    return cells


def furniture(fid, kind, footprint, nav_targets, openable=False):
    return {
        "id": fid,
        "kind": kind,
        "footprint": footprint,
        "openable": openable,
        "open": False,
        "nav_targets": nav_targets,
        "surface": [],
        "contains": [],
    }


def robots(alice, bob, david):
    return [
        {"id": "alice", "role": "mobile_manipulation", "base": alice, "reach_radius": 0.85},
        {"id": "bob", "role": "manipulation", "base": bob, "reach_radius": 0.70},
        {"id": "david", "role": "mobile", "base": david},
    ]


def zones(handoff, panel_cols, panel_row, tray_rect, board_rect):
    """Destination zones carved into the work surface footprint."""
    out = []
    for color, (x0, x1) in zip(COLORS, panel_cols):
        out.append(furniture(f"{color}_panel", "table", rect(x0, x1, panel_row, panel_row),
                             [handoff]))
    out.append(furniture("tray", "tray-stand", rect(*tray_rect), [handoff]))
    out.append(furniture("cutting_board", "table", rect(*board_rect), [handoff]))
    return out


def site(fid, kind, x, y):
    return {"furniture": fid, "kind": kind, "pose": pose(x, y)}


def kitchen():
    handoff = pose(2.85, 0.55, HALF_PI)
    fs = [
        furniture("work_table", "table", rect(20, 31, 8, 15),
                  [handoff, pose(2.35, 1.85, -HALF_PI), pose(1.75, 1.15, 0.0)]),
        furniture("counter", "counter", rect(2, 7, 12, 25), [pose(1.05, 1.85, -PI)]),
        furniture("side_table", "table", rect(40, 46, 20, 26), [pose(4.35, 1.75, HALF_PI)]),
        furniture("fridge", "fridge", rect(4, 9, 32, 37), [pose(0.75, 2.95, HALF_PI)],
                  openable=True),
        furniture("cabinet", "cabinet", rect(50, 55, 30, 36), [pose(5.25, 2.75, HALF_PI)],
                  openable=True),
    ]
    fs += zones(handoff,
                panel_cols=[(20, 21), (22, 23), (24, 25), (26, 27), (28, 29), (30, 31)],
                panel_row=8, tray_rect=(21, 23, 10, 12), board_rect=(25, 27, 10, 11))
    sites = [
        site("work_table", "near", 2.15, 0.95),
        site("work_table", "near", 2.65, 0.95),
        site("work_table", "near", 2.95, 0.95),
        site("work_table", "far", 2.35, 1.45),
        site("work_table", "far", 2.85, 1.55),
        site("counter", "remote", 0.55, 1.85),
        site("counter", "remote", 0.65, 2.25),
        site("side_table", "remote", 4.35, 2.15),
        site("side_table", "remote", 4.55, 2.35),
        site("fridge", "hidden", 0.65, 3.45),
        site("fridge", "hidden", 0.85, 3.45),
        site("cabinet", "hidden", 5.15, 3.15),
        site("cabinet", "hidden", 5.35, 3.25),
    ]
    return {
        "grid": {"resolution": 0.1, "width": 60, "height": 40, "obstacles": perimeter(60, 40)},
        "furniture": fs,
        "objects": [],
        "robots": robots(pose(1.5, 0.5, 0.0), pose(2.45, 0.55, HALF_PI), pose(4.5, 0.8, -PI)),
        "thresholds": {"open_radius": 1.0, "pose_tolerance_m": 0.1,
                       "pose_tolerance_rad": 0.17, "visibility_radius": 1.0},
        "spawn_sites": sites,
    }


def lounge():
    handoff = pose(1.75, 0.35, HALF_PI)
    fs = [
        furniture("work_table", "table", rect(8, 19, 6, 13),
                  [handoff, pose(1.35, 1.75, -HALF_PI), pose(0.45, 0.95, 0.0)]),
        furniture("island", "table", rect(30, 43, 14, 27),
                  [pose(3.65, 1.15, HALF_PI), pose(3.75, 3.05, -HALF_PI),
                   pose(4.75, 2.05, -PI), pose(2.55, 2.15, 0.0)]),
        furniture("shelf", "counter", rect(4, 16, 34, 37), [pose(1.05, 3.15, HALF_PI)]),
        furniture("microwave", "microwave", rect(56, 60, 8, 11), [pose(5.85, 0.55, HALF_PI)],
                  openable=True),
        furniture("drawer", "drawer", rect(56, 61, 30, 34), [pose(5.85, 2.75, HALF_PI)],
                  openable=True),
    ]
    fs += zones(handoff,
                panel_cols=[(8, 9), (10, 11), (12, 13), (14, 15), (16, 17), (18, 19)],
                panel_row=6, tray_rect=(9, 11, 8, 10), board_rect=(13, 15, 8, 9))
    sites = [
        site("work_table", "near", 0.95, 0.75),
        site("work_table", "near", 1.45, 0.75),
        site("work_table", "near", 1.75, 0.75),
        site("work_table", "far", 1.05, 1.25),
        site("work_table", "far", 1.65, 1.35),
        site("island", "remote", 3.65, 2.05),
        site("island", "remote", 3.75, 2.15),
        site("shelf", "remote", 0.55, 3.55),
        site("shelf", "remote", 1.05, 3.55),
        site("shelf", "remote", 1.55, 3.65),
        site("microwave", "hidden", 5.85, 0.95),
        site("drawer", "hidden", 5.85, 3.15),
    ]
    return {
        "grid": {"resolution": 0.1, "width": 70, "height": 40, "obstacles": perimeter(70, 40)},
        "furniture": fs,
        "objects": [],
        "robots": robots(pose(2.2, 0.5, -PI), pose(1.35, 0.35, HALF_PI), pose(5.0, 2.0, -PI)),
        "thresholds": {"open_radius": 1.0, "pose_tolerance_m": 0.1,
                       "pose_tolerance_rad": 0.17, "visibility_radius": 1.0},
        "spawn_sites": sites,
    }


def pantry():
    handoff = pose(2.75, 0.55, HALF_PI)
    fs = [
        furniture("work_table", "table", rect(18, 29, 8, 15),
                  [handoff, pose(2.45, 1.85, -HALF_PI), pose(3.25, 1.15, -PI)]),
        furniture("counter", "counter", rect(2, 7, 18, 32), [pose(1.05, 2.55, -PI)]),
        furniture("side_table", "table", rect(36, 43, 24, 30), [pose(3.95, 2.05, HALF_PI)]),
        furniture("fridge", "fridge", rect(2, 7, 40, 46), [pose(0.45, 3.85, HALF_PI)],
                  openable=True),
        furniture("drawer", "drawer", rect(42, 47, 40, 45), [pose(4.45, 3.75, HALF_PI)],
                  openable=True),
    ]
    fs += zones(handoff,
                panel_cols=[(18, 19), (20, 21), (22, 23), (24, 25), (26, 27), (28, 29)],
                panel_row=8, tray_rect=(19, 21, 10, 12), board_rect=(23, 25, 10, 11))
    sites = [
        site("work_table", "near", 2.05, 0.95),
        site("work_table", "near", 2.45, 0.95),
        site("work_table", "near", 2.65, 0.95),
        site("work_table", "far", 2.25, 1.45),
        site("work_table", "far", 2.85, 1.45),
        site("counter", "remote", 0.55, 2.55),
        site("counter", "remote", 0.65, 2.95),
        site("side_table", "remote", 3.95, 2.55),
        site("side_table", "remote", 4.25, 2.75),
        site("fridge", "hidden", 0.45, 4.25),
        site("fridge", "hidden", 0.65, 4.45),
        site("drawer", "hidden", 4.45, 4.15),
        site("drawer", "hidden", 4.25, 4.35),
    ]
    return {
        "grid": {"resolution": 0.1, "width": 50, "height": 50, "obstacles": perimeter(50, 50)},
        "furniture": fs,
        "objects": [],
        "robots": robots(pose(1.5, 0.6, 0.0), pose(2.35, 0.55, HALF_PI), pose(4.0, 0.8, -PI)),
        "thresholds": {"open_radius": 1.0, "pose_tolerance_m": 0.1,
                       "pose_tolerance_rad": 0.17, "visibility_radius": 1.0},
        "spawn_sites": sites,
    }


def main():
    out_dir = os.path.join(os.path.dirname(__file__), "..", "scenarios")
    os.makedirs(out_dir, exist_ok=True)
    for name, build in [("kitchen", kitchen), ("lounge", lounge), ("pantry", pantry)]:
        path = os.path.join(out_dir, f"{name}.json")
        with open(path, "w") as f:
            json.dump(build(), f, indent=2, sort_keys=True)
            f.write("\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
