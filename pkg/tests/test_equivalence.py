import itertools
import random

import pytest

import oracles
from spineflow import (EquivalenceMode, EquivalenceWitness, GluingMatrix,
                       InputError, ModelFlowSpec, ModelPiece, negate_seed,
                       normalize_matrix, spec_equivalent, verify_witness)

MODES = list(EquivalenceMode)


def random_gluing_matrix(rng: random.Random) -> GluingMatrix:
    entries = (1, 0, 0, 1)
    for _ in range(rng.randrange(1, 7)):
        kind = rng.randrange(3)
        n = rng.randint(-3, 3)
        if kind == 0:
            factor = (1, n, 0, 1)
        elif kind == 1:
            factor = (1, 0, n, 1)
        else:
            factor = (rng.choice((1, -1)), 0, 0, rng.choice((1, -1)))
        a, b, c, d = entries
        e, f, g, h = factor
        entries = (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    if entries[2] == 0:
        a, b, c, d = entries
        entries = (c, d, a, b)  # swap rows: keeps |det| = 1, makes c = a != 0
    if entries[2] == 0:
        return random_gluing_matrix(rng)
    return GluingMatrix(*entries)


def twist_move(rng: random.Random, m: GluingMatrix) -> GluingMatrix:
    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    left = mul((rng.choice((1, -1)), 0, 0, rng.choice((1, -1))),
               (1, rng.randint(-5, 5), 0, 1))
    right = mul((1, rng.randint(-5, 5), 0, 1),
                (rng.choice((1, -1)), 0, 0, rng.choice((1, -1))))
    entries = mul(mul(left, (m.a, m.b, m.c, m.d)), right)
    return GluingMatrix(*entries)


class TestNormalizeMatrix:
    def test_lower_unipotent_example(self):
        normal = normalize_matrix(GluingMatrix(1, 0, 5, 1))
        assert (normal.a, normal.b, normal.c, normal.d) == (1, 0, 5, 1)
        assert oracles.least_normal_candidate((1, 0, 5, 1), 6) == (1, 0, 5, 1)

    def test_invariant_under_left_twist(self):
        m = GluingMatrix(1, 0, 5, 1)
        twisted = GluingMatrix(1 + 3 * 5, 0 + 3 * 1, 5, 1)  # U(3) . m
        assert normalize_matrix(twisted) == normalize_matrix(m)

    def test_antidiagonal_example(self):
        normal = normalize_matrix(GluingMatrix(0, 1, 1, 0))
        assert (normal.c, normal.a, normal.d) == (1, 0, 0)
        assert (normal.a, normal.b, normal.c, normal.d) == \
            oracles.least_normal_candidate((0, 1, 1, 0), 6)

    def test_canonical_range(self):
        rng = random.Random(23)
        for _ in range(200):
            m = random_gluing_matrix(rng)
            n = normalize_matrix(m)
            assert n.c > 0
            assert 0 <= n.a < n.c or (n.c == 1 and n.a == 0)
            assert 0 <= n.d < n.c or (n.c == 1 and n.d == 0)
            assert abs(n.det) == 1
            if n.c == 1:
                assert n.a == n.d == 0

    def test_idempotent_and_orbit_constant(self):
        rng = random.Random(7)
        for _ in range(200):
            m = random_gluing_matrix(rng)
            n = normalize_matrix(m)
            again = normalize_matrix(GluingMatrix(n.a, n.b, n.c, n.d))
            assert again == n
            moved = twist_move(rng, m)
            assert normalize_matrix(moved) == n

    def test_agrees_with_bounded_orbit_search(self):
        rng = random.Random(41)
        for _ in range(25):
            m = random_gluing_matrix(rng)
            if max(abs(m.a), abs(m.b), abs(m.c), abs(m.d)) > 30:
                continue
            n = normalize_matrix(m)
            span = 6 + max(abs(m.a), abs(m.d)) // max(1, abs(m.c))
            assert (n.a, n.b, n.c, n.d) == \
                oracles.least_normal_candidate((m.a, m.b, m.c, m.d), span)

    def test_rejects_upper_triangular(self):
        with pytest.raises(InputError):
            normalize_matrix(GluingMatrix(1, 5, 0, 1))
        with pytest.raises(InputError):
            normalize_matrix(GluingMatrix(2, 1, 2, 1))


class TestSpecEquivalent:
    def test_self_equivalence_identity_witness(self, banana_spec):
        witness = spec_equivalent(banana_spec, banana_spec,
                                  EquivalenceMode.EXACT)
        assert witness is not None
        assert witness.piece_map == {"P": "P"}
        assert verify_witness(banana_spec, banana_spec, witness,
                              EquivalenceMode.EXACT)

    def test_twisted_copy_modes(self, banana_spec, twisted_spec):
        assert spec_equivalent(banana_spec, twisted_spec,
                               EquivalenceMode.EXACT) is None
        assert spec_equivalent(banana_spec, twisted_spec,
                               EquivalenceMode.ISOTOPY) is None
        witness = spec_equivalent(banana_spec, twisted_spec,
                                  EquivalenceMode.ISOTOPY_WITH_TWISTS)
        assert witness is not None
        assert verify_witness(banana_spec, twisted_spec, witness,
                              EquivalenceMode.ISOTOPY_WITH_TWISTS)

    def test_seed_negation_inequivalent(self, banana_spec):
        negated = negate_seed(banana_spec, "P")
        for mode in MODES:
            assert spec_equivalent(banana_spec, negated, mode) is None

    def test_dart_relabeled_copy_exact(self, banana_spec):
        piece = banana_spec.pieces[0]
        mapping = {d: d + 40 for d in piece.spine.graph.darts}
        relabeled = ModelPiece("P", piece.spine.relabeled(mapping),
                               dict(piece.dehn))
        other = ModelFlowSpec((relabeled,), banana_spec.pairing,
                              banana_spec.matrices,
                              dict(banana_spec.orientation_seed))
        witness = spec_equivalent(banana_spec, other, EquivalenceMode.EXACT)
        assert witness is not None
        assert witness.dart_maps["P"] == mapping
        assert verify_witness(banana_spec, other, witness,
                              EquivalenceMode.EXACT)

    def test_every_matrix_twisted(self, banana_spec):
        # right-multiply every gluing matrix by U(2)
        def right_twist(m):
            return GluingMatrix(m.a, 2 * m.a + m.b, m.c, 2 * m.c + m.d)

        other = ModelFlowSpec(
            banana_spec.pieces, banana_spec.pairing,
            tuple(right_twist(m) for m in banana_spec.matrices),
            dict(banana_spec.orientation_seed))
        assert spec_equivalent(banana_spec, other,
                               EquivalenceMode.EXACT) is None
        witness = spec_equivalent(banana_spec, other,
                                  EquivalenceMode.ISOTOPY_WITH_TWISTS)
        assert witness is not None
        assert verify_witness(banana_spec, other, witness,
                              EquivalenceMode.ISOTOPY_WITH_TWISTS)

    def test_mode_hierarchy_with_witness_reuse(self, census_specs):
        for a, b in itertools.combinations(census_specs, 2):
            exact = spec_equivalent(a, b, EquivalenceMode.EXACT)
            isotopy = spec_equivalent(a, b, EquivalenceMode.ISOTOPY)
            twists = spec_equivalent(a, b, EquivalenceMode.ISOTOPY_WITH_TWISTS)
            if exact is not None:
                assert isotopy is not None
                # an exact witness replays under the looser modes as is
                assert verify_witness(a, b, exact, EquivalenceMode.ISOTOPY)
                assert verify_witness(a, b, exact,
                                      EquivalenceMode.ISOTOPY_WITH_TWISTS)
            if isotopy is not None:
                assert twists is not None
                assert verify_witness(a, b, isotopy,
                                      EquivalenceMode.ISOTOPY_WITH_TWISTS)

    def test_equivalence_relation_on_census(self, census_specs):
        specs = list(census_specs)
        for mode in MODES:
            related = {}
            for i, a in enumerate(specs):
                witness = spec_equivalent(a, a, mode)
                assert witness is not None
                assert verify_witness(a, a, witness, mode)
            for (i, a), (j, b) in itertools.combinations(enumerate(specs), 2):
                forward = spec_equivalent(a, b, mode)
                backward = spec_equivalent(b, a, mode)
                assert (forward is None) == (backward is None)
                related[(i, j)] = forward is not None
            for (i, j), (k, l) in itertools.combinations(related, 2):
                if j == k and related[(i, j)] and related[(k, l)]:
                    assert related[(i, l)]

    def test_dehn_coefficients_matter(self, banana_spec):
        from spineflow import DehnCoefficient
        piece = banana_spec.pieces[0]
        changed = ModelPiece("P", piece.spine,
                             {0: DehnCoefficient(2, 3),
                              1: DehnCoefficient(1, 0)})
        other = ModelFlowSpec((changed,), banana_spec.pairing,
                              banana_spec.matrices,
                              dict(banana_spec.orientation_seed))
        for mode in MODES:
            assert spec_equivalent(banana_spec, other, mode) is None

    def test_invalid_inputs_rejected(self, banana_spec):
        from spineflow import GluingMatrix
        broken = ModelFlowSpec(banana_spec.pieces, banana_spec.pairing,
                               (GluingMatrix(1, 5, 0, 1),
                                banana_spec.matrices[1]),
                               dict(banana_spec.orientation_seed))
        with pytest.raises(InputError):
            spec_equivalent(banana_spec, broken, EquivalenceMode.EXACT)


class TestVerifyWitness:
    def test_round_trip_for_all_census_self_witnesses(self, census_specs):
        for spec in census_specs:
            for mode in MODES:
                witness = spec_equivalent(spec, spec, mode)
                assert verify_witness(spec, spec, witness, mode)

    def test_wrong_twist_exponent_fails(self, banana_spec, twisted_spec):
        mode = EquivalenceMode.ISOTOPY_WITH_TWISTS
        witness = spec_equivalent(banana_spec, twisted_spec, mode)
        twists = dict(witness.twists)
        key = next(k for k, t in twists.items() if t != (0, 0))
        twists[key] = (twists[key][0], twists[key][1] + 1)
        perturbed = EquivalenceWitness(witness.piece_map, witness.dart_maps,
                                       witness.basis_signs, twists,
                                       witness.reflected)
        assert not verify_witness(banana_spec, twisted_spec, perturbed, mode)

    def test_wrong_sign_fails(self, banana_spec):
        mode = EquivalenceMode.ISOTOPY
        witness = spec_equivalent(banana_spec, banana_spec, mode)
        signs = dict(witness.basis_signs)
        label = sorted(signs)[0]
        signs[label] = (-signs[label][0], signs[label][1])
        perturbed = EquivalenceWitness(witness.piece_map, witness.dart_maps,
                                       signs, witness.twists,
                                       witness.reflected)
        assert not verify_witness(banana_spec, banana_spec, perturbed, mode)

    def test_wrong_dart_image_fails(self, banana_spec):
        mode = EquivalenceMode.EXACT
        witness = spec_equivalent(banana_spec, banana_spec, mode)
        darts = dict(witness.dart_maps["P"])
        a, b = sorted(darts)[:2]
        darts[a], darts[b] = darts[b], darts[a]
        perturbed = EquivalenceWitness(witness.piece_map, {"P": darts},
                                       witness.basis_signs, witness.twists,
                                       witness.reflected)
        assert not verify_witness(banana_spec, banana_spec, perturbed, mode)

    def test_altered_coefficient_detected(self, banana_spec):
        from spineflow import DehnCoefficient
        witness = spec_equivalent(banana_spec, banana_spec,
                                  EquivalenceMode.EXACT)
        piece = banana_spec.pieces[0]
        changed = ModelPiece("P", piece.spine,
                             {0: DehnCoefficient(3, 2),
                              1: DehnCoefficient(1, 0)})
        other = ModelFlowSpec((changed,), banana_spec.pairing,
                              banana_spec.matrices,
                              dict(banana_spec.orientation_seed))
        assert not verify_witness(banana_spec, other, witness,
                                  EquivalenceMode.EXACT)

    def test_shape_mismatch_raises(self, banana_spec, necklace_spec):
        witness = spec_equivalent(banana_spec, banana_spec,
                                  EquivalenceMode.EXACT)
        with pytest.raises(InputError):
            verify_witness(banana_spec, necklace_spec, witness,
                           EquivalenceMode.EXACT)
        bad = EquivalenceWitness({"P": "P"}, {"P": {1: 1}})
        with pytest.raises(InputError):
            verify_witness(banana_spec, banana_spec, bad,
                           EquivalenceMode.EXACT)

    def test_witness_json_round_trip(self, banana_spec, twisted_spec):
        witness = spec_equivalent(banana_spec, twisted_spec,
                                  EquivalenceMode.ISOTOPY_WITH_TWISTS)
        back = EquivalenceWitness.from_json(witness.to_json())
        assert back == witness
        assert verify_witness(banana_spec, twisted_spec, back,
                              EquivalenceMode.ISOTOPY_WITH_TWISTS)
