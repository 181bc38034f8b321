import random

import pytest

import oracles
from spineflow import (CapacityError, InputError, ItineraryWord,
                       build_flow_graph, flow_graph_to_edge_text,
                       flow_graph_to_json, is_transitive, orientation_classes,
                       path_sign, periodic_words, seed_orientation,
                       validate_itinerary, word_counts)
from spineflow.flowgraph import least_rotation


def arcs_of(graph):
    return {(e.src, e.dst) for e in graph.edges}


class TestBuildFlowGraph:
    def test_banana_edge_table(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        assert graph.torus_vertices == ("T0", "T1")
        assert sorted(graph.orbit_vertices) == ["P.v0", "P.v1"]
        table = {e.label: (e.src, e.dst, e.sign) for e in graph.edges}
        # entrance-side corner vertex fixes each sign: vertex 0 carries
        # darts 3 and 7, vertex 1 carries darts 2 and 6
        assert table == {
            "P.e0": ("T0", "T1", -1),
            "P.e1": ("T0", "T0", 1),
            "P.e2": ("T1", "T0", -1),
            "P.e3": ("T1", "T1", 1),
        }

    def test_one_graph_edge_per_fat_graph_edge(self, census_specs):
        for spec in census_specs:
            graph = build_flow_graph(spec)
            total = sum(p.spine.graph.edge_count for p in spec.pieces)
            assert len(graph.edges) == total

    def test_negating_the_piece_flips_every_sign(self, banana_spec):
        base = build_flow_graph(banana_spec)
        flipped = build_flow_graph(
            banana_spec, seed_orientation(banana_spec).negated("P"))
        assert [(e.src, e.dst) for e in base.edges] == \
            [(e.src, e.dst) for e in flipped.edges]
        assert all(a.sign == -b.sign
                   for a, b in zip(base.edges, flipped.edges))

    def test_torus_degrees_positive(self, census_specs):
        for spec in census_specs:
            graph = build_flow_graph(spec)
            for torus in graph.torus_vertices:
                assert any(e.src == torus for e in graph.edges)
                assert any(e.dst == torus for e in graph.edges)

    def test_accumulation_edges_from_face_incidence(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        acc = set(graph.accumulation_edges)
        # both vertices touch both entrance faces and both exit faces
        for torus in ("T0", "T1"):
            for orbit in ("P.v0", "P.v1"):
                assert (torus, orbit) in acc
                assert (orbit, torus) in acc

    def test_inconsistent_orientation_rejected(self, banana_spec):
        from spineflow import OrientationAssignment
        bad = OrientationAssignment({("P", 0): 1, ("P", 1): 1})
        with pytest.raises(InputError):
            build_flow_graph(banana_spec, bad)

    def test_invalid_spec_rejected(self, banana_spec):
        from spineflow import GluingMatrix, ModelFlowSpec
        broken = ModelFlowSpec(banana_spec.pieces, banana_spec.pairing,
                               (GluingMatrix(1, 5, 0, 1),
                                banana_spec.matrices[1]),
                               dict(banana_spec.orientation_seed))
        with pytest.raises(InputError):
            build_flow_graph(broken)


class TestTransitivity:
    def test_banana_fixture_is_transitive(self, banana_spec):
        assert is_transitive(build_flow_graph(banana_spec))

    def test_self_loop_single_torus(self):
        # a genus-one piece with one exit and one entrance, self-glued:
        # a single torus vertex carrying four self-loops
        from spineflow import (ENTRANCE, EXIT, FatGraph, GluingMatrix,
                               ModelFlowSpec, Spine, unsurgered_piece)
        spine = Spine(FatGraph([[1, 3, 5, 7], [2, 4, 6, 8]],
                               [[1, 2], [3, 4], [5, 6], [7, 8]]),
                      {0: ENTRANCE, 1: EXIT})
        spec = ModelFlowSpec((unsurgered_piece("P", spine),),
                             ((("P", 1), ("P", 0)),),
                             (GluingMatrix(0, 1, 1, 0),),
                             {"P": (0, 1)})
        graph = build_flow_graph(spec)
        assert graph.torus_vertices == ("T0",)
        assert all(e.src == e.dst == "T0" for e in graph.edges)
        assert is_transitive(graph)

    def test_census_has_a_one_way_example(self, census_specs):
        verdicts = []
        for spec in census_specs:
            graph = build_flow_graph(spec)
            verdicts.append(is_transitive(graph))
            if not verdicts[-1]:
                # one-way: some ordered pair reachable in one direction only
                reach = oracles.reachability_closure(
                    list(graph.torus_vertices), arcs_of(graph))
                assert any(reach[(u, v)] and not reach[(v, u)]
                           for u in graph.torus_vertices
                           for v in graph.torus_vertices)
        assert False in verdicts and True in verdicts

    def test_agrees_with_closure_oracle(self, census_specs):
        for spec in census_specs:
            graph = build_flow_graph(spec)
            expected = oracles.strongly_connected_by_closure(
                list(graph.torus_vertices), arcs_of(graph))
            assert is_transitive(graph) == expected


class TestItineraries:
    def test_body_path(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        assert validate_itinerary(graph, ItineraryWord(("T0", "T0", "T1")))

    def test_missing_arc_rejected(self, census_specs):
        # some census specification has a pair of tori with no edge
        checked = 0
        for spec in census_specs:
            graph = build_flow_graph(spec)
            arcs = arcs_of(graph)
            for u in graph.torus_vertices:
                for v in graph.torus_vertices:
                    if (u, v) not in arcs:
                        assert not validate_itinerary(
                            graph, ItineraryWord((u, v)))
                        checked += 1
        assert checked > 0

    def test_tail_orbit(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        assert validate_itinerary(
            graph, ItineraryWord(("T0",), tail_orbit="P.v0"))
        assert validate_itinerary(
            graph, ItineraryWord(("T1",), head_orbit="P.v1"))

    def test_constant_word_needs_equal_tails(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        assert not validate_itinerary(
            graph, ItineraryWord((), head_orbit="P.v0", tail_orbit="P.v1"))
        assert validate_itinerary(
            graph, ItineraryWord((), head_orbit="P.v0", tail_orbit="P.v0"))
        assert not validate_itinerary(graph, ItineraryWord((), "P.v0", None))

    def test_unknown_ids_raise(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        with pytest.raises(InputError):
            validate_itinerary(graph, ItineraryWord(("T9",)))
        with pytest.raises(InputError):
            validate_itinerary(graph, ItineraryWord(("T0",), head_orbit="X.v0"))

    def test_json_round_trip(self):
        word = ItineraryWord(("T0", "T1"), head_orbit="P.v0")
        assert ItineraryWord.from_json(word.to_json()) == word


class TestPeriodicWords:
    def test_length_one_words_are_self_loops(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        words = periodic_words(graph, 1)
        assert sorted(w.cycle for w in words) == [("P.e1",), ("P.e3",)]
        loops = [e.label for e in graph.edges if e.src == e.dst]
        assert len(words) == len(loops)

    def test_two_cycle_counted_once(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        words = periodic_words(graph, 2)
        assert sum(1 for w in words
                   if sorted(w.cycle) == ["P.e0", "P.e2"]) == 1

    def test_canonical_rotation_storage(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        for word in periodic_words(graph, 4):
            assert word.cycle == least_rotation(word.cycle)

    def test_counts_match_walk_oracle(self, census_specs, banana_spec):
        for spec in list(census_specs) + [banana_spec]:
            graph = build_flow_graph(spec)
            expected = oracles.closed_walks_up_to_rotation(
                [(e.label, e.src, e.dst) for e in graph.edges], 4)
            got = {w.cycle for w in periodic_words(graph, 4)}
            assert got == expected

    def test_capacity(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        with pytest.raises(CapacityError):
            periodic_words(graph, 0)
        with pytest.raises(CapacityError):
            periodic_words(graph, 13)


class TestPathSign:
    def test_empty_walk(self, banana_spec):
        assert path_sign(build_flow_graph(banana_spec), []) == 1

    def test_single_edges(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        for e in graph.edges:
            assert path_sign(graph, [e.label]) == e.sign

    def test_two_cycle_sign_is_seed_independent(self, banana_spec):
        plus = build_flow_graph(banana_spec)
        minus = build_flow_graph(
            banana_spec, seed_orientation(banana_spec).negated("P"))
        walk = ["P.e0", "P.e2"]
        assert path_sign(plus, walk) == path_sign(minus, walk) == 1

    def test_multiplicative_on_random_walks(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        rng = random.Random(5)
        out = {}
        for e in graph.edges:
            out.setdefault(e.src, []).append(e)
        for _ in range(300):
            start = rng.choice(graph.torus_vertices)
            walk = []
            here = start
            for _ in range(rng.randrange(0, 7)):
                edge = rng.choice(out[here])
                walk.append(edge.label)
                here = edge.dst
            cut = rng.randrange(0, len(walk) + 1)
            left, right = walk[:cut], walk[cut:]
            assert path_sign(graph, walk) == \
                path_sign(graph, left) * path_sign(graph, right)

    def test_incompatible_walk_rejected(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        with pytest.raises(InputError):
            path_sign(graph, ["P.e1", "P.e3"])
        with pytest.raises(InputError):
            path_sign(graph, ["Q.e0"])


class TestExports:
    def test_edge_text_format(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        lines = flow_graph_to_edge_text(graph).splitlines()
        assert len(lines) == len(graph.edges)
        for line, edge in zip(lines, graph.edges):
            src, dst, sign, label = line.split()
            assert (src, dst) == (edge.src, edge.dst)
            assert int(sign) == edge.sign
            assert label == edge.label

    def test_json_shape(self, banana_spec):
        graph = build_flow_graph(banana_spec)
        payload = flow_graph_to_json(graph)
        assert set(payload) == {"vertices", "edges", "accumulation"}
        assert all(set(e) == {"from", "to", "piece", "edge", "sign"}
                   for e in payload["edges"])
        vertices = set(payload["vertices"])
        for e in payload["edges"]:
            assert e["from"] in vertices and e["to"] in vertices
