#!/usr/bin/env python3
"""Generate the net fixture files under fixtures/.

Net format: `v x y z`, `e a b`, `b i j c si sj`, `clamp_node n`, `clamp_edge k`,
'#' comments, 0-based indices. Bend signs follow the traversal rule:
si = +1 iff edge i's head is the center, sj = +1 iff edge j's tail is the center.
"""

import math
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def bend_record(edges, ei, ej, center):
    si = 1 if edges[ei][1] == center else -1
    sj = 1 if edges[ej][0] == center else -1
    return (ei, ej, center, si, sj)


def write_net(path, header, verts, edges, bends, clamp_nodes, clamp_edges):
    with open(path, "w") as f:
        f.write(f"# {header}\n")
        for x, y, z in verts:
            f.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
        for a, b in edges:
            f.write(f"e {a} {b}\n")
        for ei, ej, c, si, sj in bends:
            f.write(f"b {ei} {ej} {c} {si} {sj}\n")
        for n in clamp_nodes:
            f.write(f"clamp_node {n}\n")
        for k in clamp_edges:
            f.write(f"clamp_edge {k}\n")


def ring_net():
    # Two stacked rings joined by vertical and diagonal struts; the bottom
    # ring is fully clamped. Bounding sphere diameter = 2.1 m.
    n = 60
    h = 0.16
    radius = math.sqrt(1.05**2 - (h / 2) ** 2)
    verts = []
    for ring, z in ((0, -h / 2), (1, h / 2)):
        for i in range(n):
            a = 2 * math.pi * i / n
            verts.append((radius * math.cos(a), radius * math.sin(a), z))
    bot = lambda i: i % n
    top = lambda i: n + (i % n)
    edges = []
    ring_edge = {}
    for ring_fn, tag in ((bot, "b"), (top, "t")):
        for i in range(n):
            ring_edge[(tag, i)] = len(edges)
            edges.append((ring_fn(i), ring_fn(i + 1)))
    for i in range(n):  # vertical struts
        edges.append((bot(i), top(i)))
    for i in range(n):  # diagonals, triangulating the band
        edges.append((bot(i), top(i + 1)))
    bends = []
    for tag, base in (("b", bot), ("t", top)):
        for i in range(n):
            ei = ring_edge[(tag, (i - 1) % n)]
            ej = ring_edge[(tag, i)]
            bends.append(bend_record(edges, ei, ej, base(i)))
    clamp_nodes = [bot(i) for i in range(n)]
    clamp_edges = [ring_edge[("b", i)] for i in range(n)]
    write_net(
        os.path.join(OUT, "ring.net"),
        "ring net: clamped bottom ring, free top ring on a triangulated band",
        verts, edges, bends, clamp_nodes, clamp_edges,
    )


def knot_net():
    # Non-contacting trefoil closed loop, bounding sphere diameter 6.4 m.
    n = 150
    pts = []
    for i in range(n):
        t = 2 * math.pi * i / n
        pts.append(
            (
                math.sin(t) + 2 * math.sin(2 * t),
                math.cos(t) - 2 * math.cos(2 * t),
                -math.sin(3 * t),
            )
        )
    rmax = max(math.sqrt(x * x + y * y + z * z) for x, y, z in pts)
    s = 3.2 / rmax
    verts = [(s * x, s * y, s * z) for x, y, z in pts]
    edges = [(i, (i + 1) % n) for i in range(n)]
    bends = [bend_record(edges, (i - 1) % n, i, i) for i in range(n)]
    write_net(
        os.path.join(OUT, "knot.net"),
        "trefoil knot loop (no self-contact at this scale)",
        verts, edges, bends, [0, 1], [0],
    )


def fullerene_net():
    # Icosahedral wire frame, circumradius 3.55 m (bounding diameter 7.1 m).
    phi = (1 + math.sqrt(5)) / 2
    raw = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            raw.append((0, s1 * 1.0, s2 * phi))
            raw.append((s1 * 1.0, s2 * phi, 0))
            raw.append((s2 * phi, 0, s1 * 1.0))
    norm = math.sqrt(1 + phi * phi)
    verts = [tuple(3.55 * c / norm for c in v) for v in raw]
    edge_len = 2.0 / norm * 3.55
    edges = []
    for i in range(12):
        for j in range(i + 1, 12):
            d = math.dist(verts[i], verts[j])
            if abs(d - edge_len) < 1e-6 * edge_len:
                edges.append((i, j))
    assert len(edges) == 30, len(edges)

    incident = {v: [] for v in range(12)}
    for k, (a, b) in enumerate(edges):
        incident[a].append(k)
        incident[b].append(k)

    def other(k, v):
        a, b = edges[k]
        return b if a == v else a

    bends = []
    for v in range(12):
        ks = incident[v]
        assert len(ks) == 5
        # order the 5 incident edges by angle around the outward axis
        import numpy as _np  # tiny helper, used only at generation time

        axis = _np.array(verts[v]) / _np.linalg.norm(verts[v])
        ref = _np.array(verts[other(ks[0], v)]) - _np.array(verts[v])
        ref -= axis * ref.dot(axis)
        ref /= _np.linalg.norm(ref)
        ref2 = _np.cross(axis, ref)

        def angle(k):
            d = _np.array(verts[other(k, v)]) - _np.array(verts[v])
            return math.atan2(d.dot(ref2), d.dot(ref))

        ks = sorted(ks, key=angle)
        for i in range(5):
            bends.append(bend_record(edges, ks[i], ks[(i + 1) % 5], v))

    low = min(range(12), key=lambda v: verts[v][2])
    clamp_edges = [incident[low][0]]
    write_net(
        os.path.join(OUT, "fullerene.net"),
        "icosahedral frame, lowest vertex clamped",
        verts, edges, bends, [low], clamp_edges,
    )


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    ring_net()
    knot_net()
    fullerene_net()
    print("fixtures written")
