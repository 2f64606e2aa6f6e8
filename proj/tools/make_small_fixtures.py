#!/usr/bin/env python3
"""Writes the hand-built fixtures under fixtures/: tiny, corridor, junction, stairs."""
import json
import os
import sys


def node(i, x, y, visible=(), level=0):
    return {"id": i, "level": level, "pos": [x, y],
            "region": [[x - 1, y - 1], [x + 1, y - 1], [x + 1, y + 1], [x - 1, y + 1]],
            "visible": sorted(visible)}


def topo(nodes, links):
    at = {n["id"]: n for n in nodes}
    edges = []
    for a, b in links:
        for u, v in ((a, b), (b, a)):
            nu, nv = at[u], at[v]
            if nu["level"] != nv["level"]:
                d = "U" if nv["level"] > nu["level"] else "D"
            else:
                dx, dy = nv["pos"][0] - nu["pos"][0], nv["pos"][1] - nu["pos"][1]
                d = ("E" if dx > 0 else "W") if abs(dx) >= abs(dy) else ("N" if dy > 0 else "S")
            edges.append([u, d, v])
    return {"nodes": nodes, "edges": edges}


def box(i, cx, cy, w, h, height, tags, fixed=False):
    o = {"id": i, "height": height, "tags": sorted(tags),
         "polygon": [[cx - w / 2, cy - h / 2], [cx + w / 2, cy - h / 2], [cx + w / 2, cy + h / 2], [cx - w / 2, cy + h / 2]],
         "pose": {"tau": 0.0, "x": cx, "y": cy, "z": 0.0, "roll": 0.0, "pitch": 0.0, "yaw": 0.0}}
    if fixed:
        o["fixed"] = True
    return o


def write(path, obj):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as f:
        json.dump(obj, f, indent=1, sort_keys=True)
        f.write("\n")


def main(root):
    # Four-node forklift world small enough for exhaustive search.
    write(f"{root}/tiny/map.json", topo([node("n0", 0, 0), node("n1", 6, 0), node("n2", 6, 6), node("n3", 0, 6)],
                                        [("n0", "n1"), ("n1", "n2"), ("n2", "n3"), ("n3", "n0")]))
    write(f"{root}/tiny/env.json", {
        "bbox": [[-4.0, -4.0], [12.0, 12.0]],
        "objects": [box("pallet1", 6, 1.5, 1.2, 1.0, 0.3, ["pallet", "tire"]),
                    box("pallet2", 0, 7.5, 1.2, 1.0, 0.3, ["box", "pallet"]),
                    box("truck", 6, 8, 4.0, 2.0, 1.0, ["truck"], fixed=True)],
        "places": [],
        "robot_start": {"tau": 0.0, "x": 0.0, "y": 0.0, "z": 0.0, "roll": 0.0, "pitch": 0.0, "yaw": 0.0}})

    # Same map with nothing on it: no noun phrase can be grounded.
    write(f"{root}/tiny/empty_env.json", {
        "bbox": [[-4.0, -4.0], [12.0, 12.0]], "objects": [], "places": [],
        "robot_start": {"tau": 0.0, "x": 0.0, "y": 0.0, "z": 0.0, "roll": 0.0, "pitch": 0.0, "yaw": 0.0}})

    # Straight corridor ending in a kitchen.
    write(f"{root}/corridor/map.json", topo(
        [node("c0", 0, 0, ["door"]), node("c1", 12, 0, ["light"]), node("c2", 24, 0, ["window"]),
         node("c3", 36, 0, ["fridge", "stove"])],
        [("c0", "c1"), ("c1", "c2"), ("c2", "c3")]))

    # A junction whose near branch looks weakly like the goal and whose far branch is the goal.
    write(f"{root}/junction/map.json", topo(
        [node("s", 0, 0), node("j", 12, 0), node("a", 24, 0, ["television"]), node("b", 12, 12),
         node("c", 12, 24, ["fridge", "stove"])],
        [("s", "j"), ("j", "a"), ("j", "b"), ("b", "c")]))

    # Two floors joined by a stairwell.
    write(f"{root}/stairs/map.json", topo(
        [node("g0", 0, 0), node("g1", 12, 0), node("u1", 12, 0, ["microscope"], level=1),
         node("u2", 24, 0, ["computer"], level=1)],
        [("g0", "g1"), ("g1", "u1"), ("u1", "u2")]))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "fixtures"))
