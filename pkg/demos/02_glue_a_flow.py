"""Glue a spine into a full model-flow specification and explore the
symbolic dynamics of its quotient graph.

Run with `python demos/02_glue_a_flow.py`.
"""

from spineflow import (ENTRANCE, EXIT, FatGraph, GluingMatrix, ItineraryWord,
                       ModelFlowSpec, Spine, build_flow_graph,
                       flow_graph_to_edge_text, is_transitive, path_sign,
                       periodic_words, seed_orientation, unsurgered_piece,
                       validate_itinerary, validate_spec, word_counts)

spine = Spine(
    FatGraph([[1, 3, 5, 7], [8, 6, 4, 2]], [[1, 2], [3, 4], [5, 6], [7, 8]]),
    {0: EXIT, 1: ENTRANCE, 2: EXIT, 3: ENTRANCE},
)
piece = unsurgered_piece("P", spine)

# Pair each exit circle with an entrance circle and put a gluing matrix
# on every pair.  [[0, 1], [1, 0]] swaps the fiber and section classes,
# so it is as far from upper triangular as possible.
spec = ModelFlowSpec(
    pieces=(piece,),
    pairing=((("P", 2), ("P", 1)), (("P", 0), ("P", 3))),
    matrices=(GluingMatrix(0, 1, 1, 0), GluingMatrix(0, 1, 1, 0)),
    orientation_seed={"P": (0, 1)},
)
print("specification valid:", validate_spec(spec).passed)

# Orientations propagate from the seed with a flip across every edge.
orientation = seed_orientation(spec)
print("orbit directions:", dict(sorted(orientation.signs.items())))

# The quotient graph: one vertex per glued torus, one edge per
# Birkhoff annulus, each edge carrying a first-return sign.
graph = build_flow_graph(spec)
print()
print(flow_graph_to_edge_text(graph), end="")
print("transitive:", is_transitive(graph))

# Symbolic itineraries: which torus sequences does the flow realize?
for word in (
    ItineraryWord(("T0", "T0", "T1")),
    ItineraryWord(("T0",), tail_orbit="P.v0"),
    ItineraryWord((), head_orbit="P.v0", tail_orbit="P.v1"),
):
    print(word.to_json(), "->", validate_itinerary(graph, word))

# Closed walks up to rotation, the symbolic shadows of periodic orbits.
words = periodic_words(graph, 4)
print()
print("closed walks by length:", word_counts(words))
print("shortest:", [w.cycle for w in words if len(w) <= 2])

# Signs multiply along walks; the two-cycle is orientation-preserving.
print("sign of the 2-cycle:", path_sign(graph, ["P.e0", "P.e2"]))
