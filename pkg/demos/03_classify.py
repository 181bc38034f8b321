"""Decide when two specifications describe the same flow.

Three comparison modes: EXACT (matrices equal entry for entry),
ISOTOPY (basis sign flips allowed), ISOTOPY_WITH_TWISTS (vertical Dehn
twists allowed too; twisting never changes the flow's class).  Every
positive answer carries a witness that replays mechanically.

Run with `python demos/03_classify.py`.
"""

import json
from pathlib import Path

from spineflow import (EquivalenceMode, GluingMatrix, ModelFlowSpec,
                       negate_seed, normalize_matrix, orientation_classes,
                       spec_from_json, spec_equivalent, verify_witness)

fixtures = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
spec = spec_from_json(json.load(open(fixtures / "banana_spec.json")))

# Twisting a gluing matrix: multiply by an upper-unipotent factor.
twisted = ModelFlowSpec(
    spec.pieces, spec.pairing,
    (spec.matrices[0], GluingMatrix(0, 1, 1, 2)),
    dict(spec.orientation_seed))

for mode in EquivalenceMode:
    witness = spec_equivalent(spec, twisted, mode)
    verdict = "equivalent" if witness else "inequivalent"
    print(f"{mode.value:>20}: {verdict}")
    if witness:
        print("    twists:", witness.twists)
        print("    replay:", verify_witness(spec, twisted, witness, mode))

# Canonical forms see through the twist moves.
print()
for rows in ((0, 1, 1, 0), (0, 1, 1, 2), (1, 0, 5, 1), (16, 3, 5, 1)):
    normal = normalize_matrix(GluingMatrix(*rows))
    print(f"normalize {rows} -> {normal.rows()}")

# Reversing the orbit directions of a piece changes the class: the
# 2^k orientation choices are pairwise inequivalent here.
print()
count, _ = orientation_classes(spec)
print("orientation classes:", count)
negated = negate_seed(spec, "P")
for mode in EquivalenceMode:
    witness = spec_equivalent(spec, negated, mode)
    print(f"seed negation, {mode.value}: "
          f"{'equivalent' if witness else 'inequivalent'}")
