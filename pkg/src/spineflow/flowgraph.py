"""The quotient oriented graph of a model flow and its augmentation.

Vertices of the graph are the glued tori, one per pairing entry, named
``T0``, ``T1``, ...  Each fat-graph edge contributes one directed graph
edge, from the glued torus containing its ENTRANCE side to the glued
torus containing its EXIT side: orbits cross the entrance torus, the
Birkhoff annulus, then the exit torus.

Each edge carries a first-return sign.  The convention here: the sign
of an edge is the orientation sign of the vertex carrying its
entrance-side dart (the corner orbit the return map tilts around).
Only sign products along closed walks, modulo the global per-piece
seed flips, are convention-independent quantities.

The augmentation adds one vertex per vertical orbit, with a torus ->
orbit edge whenever the orbit's vertex touches an entrance boundary
cycle (forward orbits entering there can accumulate on it) and an
orbit -> torus edge whenever it touches an exit boundary cycle
(backward-trapped orbits escape through it).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import CapacityError, InputError
from .fatgraph import ENTRANCE
from .model import (ModelFlowSpec, OrientationAssignment, seed_orientation,
                    validate_spec)

MAX_WORD_LENGTH = 12


@dataclass(frozen=True)
class FlowEdge:
    label: str
    src: str
    dst: str
    piece: str
    edge_index: int
    sign: int


@dataclass(frozen=True)
class FlowGraph:
    torus_vertices: tuple[str, ...]
    orbit_vertices: tuple[str, ...]
    edges: tuple[FlowEdge, ...]
    accumulation_edges: tuple[tuple[str, str], ...]

    def edge(self, label: str) -> FlowEdge:
        try:
            return self._by_label[label]
        except KeyError:
            raise InputError(f"unknown edge {label!r}") from None

    @property
    def _by_label(self) -> dict[str, FlowEdge]:
        by_label = self.__dict__.get("_by_label_cache")
        if by_label is None:
            by_label = {e.label: e for e in self.edges}
            self.__dict__["_by_label_cache"] = by_label
        return by_label

    def successors(self, torus: str) -> list[str]:
        return sorted({e.dst for e in self.edges if e.src == torus})

    def adjacent(self, src: str, dst: str) -> bool:
        return any(e.src == src and e.dst == dst for e in self.edges)


def orbit_label(piece_id: str, vertex: int) -> str:
    return f"{piece_id}.v{vertex}"


def build_flow_graph(spec: ModelFlowSpec,
                     orientation: Optional[OrientationAssignment] = None
                     ) -> FlowGraph:
    """Quotient graph of a valid specification under an orientation.

    ``orientation`` defaults to the propagation of the recorded seeds;
    a supplied assignment must be total on the vertical orbits and
    anti-aligned across every edge, otherwise the data cannot describe
    the flow and an ``InputError`` is raised.
    """
    report = validate_spec(spec)
    if not report.passed:
        names = ", ".join(c.name for c in report.failures)
        raise InputError(f"specification is invalid ({names})")
    if orientation is None:
        orientation = seed_orientation(spec)
    _check_orientation(spec, orientation)

    entrance_at: dict[tuple[str, int], int] = {}
    exit_at: dict[tuple[str, int], int] = {}
    for k, (src, dst) in enumerate(spec.pairing):
        exit_at[src] = k
        entrance_at[dst] = k

    tori = tuple(f"T{k}" for k in range(len(spec.pairing)))
    orbits = []
    edges = []
    accumulation: set[tuple[str, str]] = set()
    for piece in spec.pieces:
        graph = piece.spine.graph
        face_of = graph.face_of()
        colors = piece.spine.colors
        pid = piece.piece_id
        orbits.extend(orbit_label(pid, v) for v in range(graph.vertex_count))

        for i, (a, b) in enumerate(graph.edges):
            d_in = a if colors[face_of[a]] == ENTRANCE else b
            d_out = b if d_in == a else a
            src = tori[entrance_at[(pid, face_of[d_in])]]
            dst = tori[exit_at[(pid, face_of[d_out])]]
            sign = orientation.sign(pid, graph.vertex_of[d_in])
            edges.append(FlowEdge(f"{pid}.e{i}", src, dst, pid, i, sign))

        for f, cycle in enumerate(graph.boundary_cycles()):
            touched = {graph.vertex_of[d] for d in cycle}
            for v in sorted(touched):
                if colors[f] == ENTRANCE:
                    accumulation.add(
                        (tori[entrance_at[(pid, f)]], orbit_label(pid, v)))
                else:
                    accumulation.add(
                        (orbit_label(pid, v), tori[exit_at[(pid, f)]]))

    return FlowGraph(tori, tuple(orbits), tuple(edges),
                     tuple(sorted(accumulation)))


def _check_orientation(spec: ModelFlowSpec,
                       orientation: OrientationAssignment) -> None:
    expected = {(piece.piece_id, v)
                for piece in spec.pieces for v in piece.vertices()}
    if set(orientation.signs) != expected:
        raise InputError("orientation assignment does not cover exactly the "
                         "vertical orbits of the specification")
    if any(s not in (1, -1) for s in orientation.signs.values()):
        raise InputError("orientation signs must be +-1")
    for piece in spec.pieces:
        graph = piece.spine.graph
        for a, b in graph.edges:
            sa = orientation.sign(piece.piece_id, graph.vertex_of[a])
            sb = orientation.sign(piece.piece_id, graph.vertex_of[b])
            if sa != -sb:
                raise InputError(
                    f"orientation is not anti-aligned across edge "
                    f"({a}, {b}) of piece {piece.piece_id!r}")


# ----------------------------------------------------------------------
# queries
# ----------------------------------------------------------------------

def is_transitive(graph: FlowGraph) -> bool:
    """True when the torus subgraph is strongly connected.

    Tarjan's algorithm, iterative to keep recursion depth flat; the
    answer is a single strongly connected component covering every
    torus vertex.
    """
    succ: dict[str, list[str]] = {t: [] for t in graph.torus_vertices}
    for e in graph.edges:
        succ[e.src].append(e.dst)

    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = [0]
    components = []

    for root in graph.torus_vertices:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.append(w)
                    if w == v:
                        break
                components.append(component)
    return len(components) <= 1


@dataclass(frozen=True)
class ItineraryWord:
    """A finite window of an itinerary: a body of glued-torus ids with
    optional constant orbit tails on either side."""

    body: tuple[str, ...] = ()
    head_orbit: Optional[str] = None
    tail_orbit: Optional[str] = None

    def to_json(self) -> dict:
        out: dict = {"body": list(self.body)}
        if self.head_orbit is not None:
            out["head_orbit"] = self.head_orbit
        if self.tail_orbit is not None:
            out["tail_orbit"] = self.tail_orbit
        return out

    @classmethod
    def from_json(cls, obj, path: str = "") -> "ItineraryWord":
        if not isinstance(obj, dict) or "body" not in obj:
            raise InputError(f"{path or '/'}: expected an object with a body")
        if not isinstance(obj["body"], list):
            raise InputError(f"{path}/body: expected an array of torus ids")
        return cls(tuple(str(t) for t in obj["body"]),
                   obj.get("head_orbit"), obj.get("tail_orbit"))


def validate_itinerary(graph: FlowGraph, word: ItineraryWord) -> bool:
    """Decide whether the word is realizable in the augmented graph.

    Consecutive body letters must be joined by an edge; a head orbit
    needs an orbit -> first letter accumulation edge, a tail orbit a
    last letter -> orbit one.  A word with no body is realizable only
    as the constant itinerary of a vertical orbit: head and tail must
    both be present and equal.
    """
    tori = set(graph.torus_vertices)
    orbits = set(graph.orbit_vertices)
    for t in word.body:
        if t not in tori:
            raise InputError(f"unknown torus {t!r}")
    for orbit in (word.head_orbit, word.tail_orbit):
        if orbit is not None and orbit not in orbits:
            raise InputError(f"unknown orbit {orbit!r}")

    if not word.body:
        return (word.head_orbit is not None
                and word.head_orbit == word.tail_orbit)

    pairs = {(e.src, e.dst) for e in graph.edges}
    for src, dst in zip(word.body, word.body[1:]):
        if (src, dst) not in pairs:
            return False
    acc = set(graph.accumulation_edges)
    if word.head_orbit is not None:
        if (word.head_orbit, word.body[0]) not in acc:
            return False
    if word.tail_orbit is not None:
        if (word.body[-1], word.tail_orbit) not in acc:
            return False
    return True


@dataclass(frozen=True)
class PeriodicWord:
    """A closed directed walk, stored in its least rotation."""

    cycle: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "cycle", least_rotation(self.cycle))

    def __len__(self) -> int:
        return len(self.cycle)


def least_rotation(labels: Iterable[str]) -> tuple[str, ...]:
    labels = tuple(labels)
    if not labels:
        return labels
    return min(labels[i:] + labels[:i] for i in range(len(labels)))


def periodic_words(graph: FlowGraph, max_len: int) -> list[PeriodicWord]:
    """Closed directed walks of length <= max_len through torus
    vertices, one representative per rotation class, sorted by length
    then lexicographically."""
    if not 1 <= max_len <= MAX_WORD_LENGTH:
        raise CapacityError(
            f"max_len must be between 1 and {MAX_WORD_LENGTH}, got {max_len}")
    out_edges: dict[str, list[FlowEdge]] = {t: [] for t in graph.torus_vertices}
    for e in sorted(graph.edges, key=lambda e: e.label):
        out_edges[e.src].append(e)

    found: set[tuple[str, ...]] = set()

    def extend(start: str, here: str, trail: list[str]) -> None:
        for e in out_edges[here]:
            if e.dst == start:
                found.add(least_rotation(trail + [e.label]))
            if len(trail) + 1 < max_len:
                trail.append(e.label)
                extend(start, e.dst, trail)
                trail.pop()

    for start in graph.torus_vertices:
        extend(start, start, [])
    words = [PeriodicWord(cycle) for cycle in found]
    words.sort(key=lambda w: (len(w.cycle), w.cycle))
    return words


def word_counts(words: Iterable[PeriodicWord]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for w in words:
        counts[len(w)] = counts.get(len(w), 0) + 1
    return dict(sorted(counts.items()))


def path_sign(graph: FlowGraph, walk: Iterable[str]) -> int:
    """Product of edge signs along a head-to-tail compatible walk.
    The empty walk has sign +1."""
    sign = 1
    previous = None
    for label in walk:
        edge = graph.edge(label)
        if previous is not None and previous.dst != edge.src:
            raise InputError(
                f"walk breaks at {previous.label} -> {edge.label}: "
                f"{previous.dst} != {edge.src}")
        sign *= edge.sign
        previous = edge
    return sign


# ----------------------------------------------------------------------
# export
# ----------------------------------------------------------------------

def flow_graph_to_json(graph: FlowGraph) -> dict:
    return {
        "vertices": list(graph.torus_vertices) + list(graph.orbit_vertices),
        "edges": [
            {"from": e.src, "to": e.dst, "piece": e.piece,
             "edge": e.edge_index, "sign": e.sign}
            for e in graph.edges
        ],
        "accumulation": [
            {"from": src, "to": dst} for src, dst in graph.accumulation_edges
        ],
    }


def flow_graph_to_edge_text(graph: FlowGraph) -> str:
    lines = [f"{e.src} {e.dst} {e.sign:+d} {e.label}" for e in graph.edges]
    return "\n".join(lines) + "\n" if lines else ""
