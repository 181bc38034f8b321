"""Equality of model-flow specifications under the allowed moves.

Two specifications describe the same flow when some relabeling of
pieces and darts (a color-, coefficient- and orientation-preserving
isomorphism of the spines, compatible with the pairings) matches their
gluing matrices.  How closely the matrices must match is the *mode*:

* ``EXACT``: entry for entry.
* ``ISOTOPY``: up to the four basis choices per torus, i.e. up to
  multiplying either side by a diagonal sign matrix.
* ``ISOTOPY_WITH_TWISTS``: additionally up to vertical Dehn twists on
  either side, i.e. up to integer upper-unipotent factors.  Twisting
  along a vertical curve never changes the isotopy class of the flow,
  so this is the coarsest, flow-faithful comparison.

Orientation assignments must correspond pointwise under the bijection
in every mode; negating a piece wholesale reverses its vertical orbits
and changes the class, so it is never allowed.

Every positive answer comes with a witness that replays mechanically:
``verify_witness`` applies it to the first specification and compares
with the second, entry for entry.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional

from .errors import InputError
from .fatgraph import induced_face_map, iter_isomorphisms_tagged
from .model import (GluingMatrix, ModelFlowSpec, ModelPiece, TorusId,
                    seed_orientation, torus_label, validate_spec)

Mat = tuple[int, int, int, int]  # row major (a, b, c, d)


def _mul(m: Mat, n: Mat) -> Mat:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _upper(signs: tuple[int, int], twist: int, twist_first: bool) -> Mat:
    """diag(signs) . U(twist) or U(twist) . diag(signs)."""
    sv, sh = signs
    if twist_first:
        return _mul((1, twist, 0, 1), (sv, 0, 0, sh))
    return _mul((sv, 0, 0, sh), (1, twist, 0, 1))


class EquivalenceMode(enum.Enum):
    EXACT = "exact"
    ISOTOPY = "isotopy"
    ISOTOPY_WITH_TWISTS = "isotopy-with-twists"

    @classmethod
    def parse(cls, text: str) -> "EquivalenceMode":
        for mode in cls:
            if mode.value == text:
                return mode
        raise InputError(f"unknown mode {text!r}; expected one of "
                         + ", ".join(m.value for m in cls))


@dataclass(frozen=True)
class NormalizedMatrix:
    """Canonical representative of a gluing matrix modulo vertical
    twists and basis flips on both sides: c > 0, a and d reduced mod c,
    b pinned by the surviving determinant."""

    a: int
    b: int
    c: int
    d: int

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]


def normalize_matrix(matrix: GluingMatrix) -> NormalizedMatrix:
    """Orbit-canonical form of a gluing matrix.

    The moves generate, on each side, every integer matrix
    [[+-1, n], [0, +-1]].  Acting by them sends (a, d) to
    (s*a mod |c|, t*d mod |c|) for independent signs s, t, flips the
    determinant by s*t, and pins b through the determinant identity.
    The representative is the lexicographically least (c, a, d, b)
    with c > 0.
    """
    if matrix.c == 0 or abs(matrix.det) != 1:
        raise InputError(f"not a gluing matrix: {matrix.rows()} "
                         "(need |det| = 1 and c != 0)")
    c = abs(matrix.c)
    best: Optional[tuple[int, int, int]] = None
    for s, t in itertools.product((1, -1), repeat=2):
        a = (s * matrix.a) % c
        d = (t * matrix.d) % c
        det = s * t * matrix.det
        b = (a * d - det) // c
        if best is None or (a, d, b) < best:
            best = (a, d, b)
    a, d, b = best
    return NormalizedMatrix(a, b, c, d)


@dataclass(frozen=True)
class EquivalenceWitness:
    """A replayable equivalence: where every piece, dart and torus
    goes, which basis signs flip, and how much each gluing twists.

    ``basis_signs`` is keyed by the labels of the first specification's
    boundary tori; entrance-torus signs act on the left of the gluing
    matrix of their pair, exit-torus signs on the right.  ``twists``
    holds (left, right) exponents per pairing index of the first
    specification.  The matrix check replayed by ``verify_witness`` is

        diag(entrance signs) . U(left) . M . U(right) . diag(exit signs)
        == matrix of the corresponding pair of the second specification.
    """

    piece_map: dict[str, str]
    dart_maps: dict[str, dict[int, int]]
    basis_signs: dict[str, tuple[int, int]] = field(default_factory=dict)
    twists: dict[int, tuple[int, int]] = field(default_factory=dict)
    reflected: dict[str, bool] = field(default_factory=dict)

    def left_factor(self, entrance: TorusId, pair_index: int) -> Mat:
        signs = self.basis_signs.get(torus_label(entrance), (1, 1))
        left, _ = self.twists.get(pair_index, (0, 0))
        return _upper(signs, left, twist_first=False)

    def right_factor(self, exit_torus: TorusId, pair_index: int) -> Mat:
        signs = self.basis_signs.get(torus_label(exit_torus), (1, 1))
        _, right = self.twists.get(pair_index, (0, 0))
        return _upper(signs, right, twist_first=True)

    def to_json(self) -> dict:
        return {
            "piece_map": dict(sorted(self.piece_map.items())),
            "dart_maps": {pid: {str(d): img for d, img in sorted(m.items())}
                          for pid, m in sorted(self.dart_maps.items())},
            "basis_signs": {label: list(signs) for label, signs
                            in sorted(self.basis_signs.items())},
            "twists": {str(k): list(t) for k, t in sorted(self.twists.items())},
            "reflected": dict(sorted(self.reflected.items())),
        }

    @classmethod
    def from_json(cls, obj, path: str = "") -> "EquivalenceWitness":
        if not isinstance(obj, dict):
            raise InputError(f"{path or '/'}: expected an object")
        try:
            return cls(
                piece_map={str(k): str(v)
                           for k, v in obj.get("piece_map", {}).items()},
                dart_maps={str(p): {int(d): int(img) for d, img in m.items()}
                           for p, m in obj.get("dart_maps", {}).items()},
                basis_signs={str(k): (int(v[0]), int(v[1]))
                             for k, v in obj.get("basis_signs", {}).items()},
                twists={int(k): (int(v[0]), int(v[1]))
                        for k, v in obj.get("twists", {}).items()},
                reflected={str(k): bool(v)
                           for k, v in obj.get("reflected", {}).items()},
            )
        except (TypeError, ValueError, KeyError, IndexError) as err:
            raise InputError(f"{path}: malformed witness: {err}") from err


# ----------------------------------------------------------------------
# matrix matching per mode
# ----------------------------------------------------------------------

def _match_matrices(m1: GluingMatrix, m2: GluingMatrix, mode: EquivalenceMode
                    ) -> Optional[tuple[tuple[int, int], tuple[int, int],
                                        tuple[int, int]]]:
    """Factors turning m1 into m2 under the mode's moves.

    Returns (entrance signs, exit signs, (left twist, right twist)) or
    None.  The first solution in a fixed sign order is returned, so
    witnesses are deterministic.
    """
    if mode is EquivalenceMode.EXACT:
        if (m1.a, m1.b, m1.c, m1.d) == (m2.a, m2.b, m2.c, m2.d):
            return (1, 1), (1, 1), (0, 0)
        return None
    if abs(m1.c) != abs(m2.c):
        return None
    want_s = m2.c // m1.c
    for e1, f1, e2, f2 in itertools.product((1, -1), repeat=4):
        if e2 * f1 != want_s:
            continue
        if mode is EquivalenceMode.ISOTOPY:
            x = y = 0
        else:
            num_x = m2.a - e1 * e2 * m1.a
            num_y = m2.d - f1 * f2 * m1.d
            if num_x % (e2 * m1.c) or num_y % (f1 * m1.c):
                continue
            x = num_x // (e2 * m1.c)
            y = num_y // (f1 * m1.c)
        left: Mat = (e1, x, 0, f1)
        right: Mat = (e2, y, 0, f2)
        product = _mul(_mul(left, (m1.a, m1.b, m1.c, m1.d)), right)
        if product == (m2.a, m2.b, m2.c, m2.d):
            # left = diag(e1, f1) . U(e1 * x), right = U(f2 * y) . diag(e2, f2)
            return (e1, f1), (e2, f2), (e1 * x, f2 * y)
    return None


# ----------------------------------------------------------------------
# search
# ----------------------------------------------------------------------

def _orientation_restrict(orientation, piece: ModelPiece) -> dict[int, int]:
    return {v: orientation.sign(piece.piece_id, v) for v in piece.vertices()}


def _piece_isomorphisms(p1: ModelPiece, o1: dict[int, int],
                        p2: ModelPiece, o2: dict[int, int],
                        allow_reflection: bool
                        ) -> list[tuple[dict[int, int], bool]]:
    """Dart bijections p1 -> p2 preserving colors, coefficients and
    orbit orientations."""
    out = []
    g1, g2 = p1.spine.graph, p2.spine.graph
    for sigma, reflect in iter_isomorphisms_tagged(p1.spine, p2.spine,
                                                   allow_reflection):
        ok = True
        for v, cycle in enumerate(g1.vertices):
            w = g2.vertex_of[sigma[cycle[0]]]
            if p1.dehn[v] != p2.dehn[w] or o1[v] != o2[w]:
                ok = False
                break
        if ok:
            out.append((sigma, reflect))
    return out


def _validated(spec: ModelFlowSpec, name: str) -> None:
    report = validate_spec(spec)
    if not report.passed:
        names = ", ".join(c.name for c in report.failures)
        raise InputError(f"{name} is invalid ({names})")


def spec_equivalent(s1: ModelFlowSpec, s2: ModelFlowSpec,
                    mode: EquivalenceMode = EquivalenceMode.ISOTOPY_WITH_TWISTS,
                    allow_reflection: bool = False
                    ) -> Optional[EquivalenceWitness]:
    """Search for an equivalence witness from s1 to s2.

    The search runs over piece bijections (sorted id order), then over
    the color-, coefficient- and orientation-preserving dart bijections
    of each piece pair, keeps the combinations compatible with both
    pairings, and finally matches gluing matrices pair by pair under
    the mode's moves.  The first witness in this deterministic order is
    returned.
    """
    _validated(s1, "first specification")
    _validated(s2, "second specification")
    if len(s1.pieces) != len(s2.pieces):
        return None
    o1 = seed_orientation(s1)
    o2 = seed_orientation(s2)

    pieces1 = sorted(s1.pieces, key=lambda p: p.piece_id)
    for pieces2 in itertools.permutations(
            sorted(s2.pieces, key=lambda p: p.piece_id)):
        per_piece = []
        for p1, p2 in zip(pieces1, pieces2):
            isos = _piece_isomorphisms(
                p1, _orientation_restrict(o1, p1),
                p2, _orientation_restrict(o2, p2), allow_reflection)
            if not isos:
                per_piece = None
                break
            per_piece.append(isos)
        if per_piece is None:
            continue
        for combo in itertools.product(*per_piece):
            witness = _assemble(s1, s2, pieces1, pieces2, combo, mode)
            if witness is not None:
                return witness
    return None


def _assemble(s1: ModelFlowSpec, s2: ModelFlowSpec,
              pieces1, pieces2, combo, mode: EquivalenceMode
              ) -> Optional[EquivalenceWitness]:
    """Check pairing compatibility and matrices for one combination of
    per-piece bijections; build the witness when everything fits."""
    torus_map: dict[TorusId, TorusId] = {}
    for p1, p2, (sigma, reflect) in zip(pieces1, pieces2, combo):
        faces = induced_face_map(p1.spine.graph, p2.spine.graph, sigma, reflect)
        if faces is None:
            return None
        for f, g in faces.items():
            torus_map[(p1.piece_id, f)] = (p2.piece_id, g)

    pair_index2 = {pair: k for k, pair in enumerate(s2.pairing)}
    basis_signs: dict[str, tuple[int, int]] = {}
    twists: dict[int, tuple[int, int]] = {}
    for k, (src, dst) in enumerate(s1.pairing):
        image = (torus_map[src], torus_map[dst])
        k2 = pair_index2.get(image)
        if k2 is None:
            return None
        match = _match_matrices(s1.matrices[k], s2.matrices[k2], mode)
        if match is None:
            return None
        entrance_signs, exit_signs, twist = match
        basis_signs[torus_label(dst)] = entrance_signs
        basis_signs[torus_label(src)] = exit_signs
        twists[k] = twist

    return EquivalenceWitness(
        piece_map={p1.piece_id: p2.piece_id
                   for p1, p2 in zip(pieces1, pieces2)},
        dart_maps={p1.piece_id: dict(sigma)
                   for p1, (sigma, _) in zip(pieces1, combo)},
        basis_signs=basis_signs,
        twists=twists,
        reflected={p1.piece_id: reflect
                   for p1, (_, reflect) in zip(pieces1, combo)},
    )


# ----------------------------------------------------------------------
# replay
# ----------------------------------------------------------------------

def verify_witness(s1: ModelFlowSpec, s2: ModelFlowSpec,
                   witness: EquivalenceWitness,
                   mode: EquivalenceMode = EquivalenceMode.ISOTOPY_WITH_TWISTS
                   ) -> bool:
    """Replay a witness: apply it to s1 and compare with s2.

    Shape mismatches (unknown pieces, non-bijective dart maps) raise
    ``InputError``; any value that fails to reproduce s2 returns False.
    The matrix comparison applies the witness factors and then demands
    equality entry for entry, so a wrong twist exponent or sign fails
    even in the loosest mode.
    """
    ids1 = set(s1.piece_ids())
    ids2 = set(s2.piece_ids())
    if set(witness.piece_map) != ids1:
        raise InputError("witness piece map must cover exactly the pieces "
                         "of the first specification")
    if sorted(witness.piece_map.values()) != sorted(ids2):
        raise InputError("witness piece map is not a bijection onto the "
                         "pieces of the second specification")
    if set(witness.dart_maps) != ids1:
        raise InputError("witness dart maps must cover exactly the pieces "
                         "of the first specification")

    if mode is EquivalenceMode.EXACT:
        if any(signs != (1, 1) for signs in witness.basis_signs.values()):
            return False
        if any(t != (0, 0) for t in witness.twists.values()):
            return False
    if mode is EquivalenceMode.ISOTOPY:
        if any(t[0] != 0 or t[1] != 0 for t in witness.twists.values()):
            return False

    o1 = seed_orientation(s1)
    o2 = seed_orientation(s2)
    torus_map: dict[TorusId, TorusId] = {}
    for p1 in s1.pieces:
        p2 = s2.piece(witness.piece_map[p1.piece_id])
        sigma = witness.dart_maps[p1.piece_id]
        g1, g2 = p1.spine.graph, p2.spine.graph
        if sorted(sigma) != list(g1.darts):
            raise InputError(f"dart map of piece {p1.piece_id!r} is not "
                             "defined on exactly its darts")
        if sorted(sigma.values()) != list(g2.darts):
            raise InputError(f"dart map of piece {p1.piece_id!r} is not a "
                             "bijection onto the target darts")
        reflect = witness.reflected.get(p1.piece_id, False)
        rot2 = g2.rotation if not reflect else {
            v: k for k, v in g2.rotation.items()}
        for d in g1.darts:
            if sigma[g1.rotation[d]] != rot2[sigma[d]]:
                return False
            if sigma[g1.involution[d]] != g2.involution[sigma[d]]:
                return False
        faces = induced_face_map(g1, g2, sigma, reflect)
        if faces is None:
            return False
        for f, g in faces.items():
            if p1.spine.colors[f] != p2.spine.colors[g]:
                return False
            torus_map[(p1.piece_id, f)] = (p2.piece_id, g)
        for v, cycle in enumerate(g1.vertices):
            w = g2.vertex_of[sigma[cycle[0]]]
            if p1.dehn[v] != p2.dehn.get(w):
                return False
            if o1.sign(p1.piece_id, v) != o2.sign(p2.piece_id, w):
                return False

    pair_index2 = {pair: k for k, pair in enumerate(s2.pairing)}
    for k, (src, dst) in enumerate(s1.pairing):
        image = (torus_map[src], torus_map[dst])
        k2 = pair_index2.get(image)
        if k2 is None:
            return False
        m1 = s1.matrices[k]
        m2 = s2.matrices[k2]
        product = _mul(_mul(witness.left_factor(dst, k),
                            (m1.a, m1.b, m1.c, m1.d)),
                       witness.right_factor(src, k))
        if product != (m2.a, m2.b, m2.c, m2.d):
            return False
    return True
