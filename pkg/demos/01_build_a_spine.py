"""Build a spine by hand and check the conditions it must satisfy.

The running example is the "banana": two vertices joined by four
parallel edges, thickened to a planar surface with four boundary
circles.  Run with `python demos/01_build_a_spine.py`.
"""

from spineflow import (ENTRANCE, EXIT, FatGraph, Spine, enumerate_spines,
                       fatgraph_isomorphic, surface_invariants,
                       trace_boundary_cycles, validate_spine)

# Each edge contributes two darts.  Dart 2k-1 sits at vertex u, dart 2k
# at vertex v; the rotations list the darts counterclockwise.
graph = FatGraph(
    rotation_cycles=[[1, 3, 5, 7], [8, 6, 4, 2]],
    edge_pairs=[[1, 2], [3, 4], [5, 6], [7, 8]],
)

print("vertices:", graph.vertices)
print("edges:   ", graph.edges)

# The boundary circles of the thickened surface are the orbits of
# rotation . involution.
cycles = trace_boundary_cycles(graph)
print("boundary cycles:", cycles)

inv = surface_invariants(graph)
print(f"V={inv.vertex_count} E={inv.edge_count} b={inv.boundary_count} "
      f"chi={inv.euler_characteristic} genus={inv.genus}")

# Color the boundary circles so that the two sides of every edge get
# different colors: the flow will enter through ENTRANCE circles and
# leave through EXIT ones.
colors = {0: EXIT, 1: ENTRANCE, 2: EXIT, 3: ENTRANCE}
report = validate_spine(graph, colors)
print()
for line in report.lines():
    print(" ", line)

# A census of all valid spines with at most 4 edges, one per
# isomorphism class.  The banana is in it.
spines = list(enumerate_spines(4))
print()
print(f"census: {len(spines)} spines with <= 4 edges")
banana = Spine(graph, colors)
hits = [s for s in spines if fatgraph_isomorphic(banana, s) is not None]
print("banana found in census:", len(hits) == 1)
