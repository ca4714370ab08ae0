"""Anti-commutation graphs, contraction rewriting and canonical-shape recognition.

A generator system pairs a list of Pauli strings with the graph whose edges
join anti-commuting pairs. Contraction replaces a generator by (i/2) times
its commutator with a neighbour; on the adjacency matrix this adds the
source row and column into the target's (a conditioned local
complementation), which is how all rewriting below is carried out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    ContractionPreconditionError,
    IdentityGeneratorError,
    InternalDefectError,
    TogglePreconditionError,
    WidthError,
)
from .gf2 import BitMatrix
from .pauli import PauliString, commutator_pauli, commutes


@dataclass(frozen=True)
class ContractionRecord:
    """One contraction event: the Pauli at ``target`` became (i/2)[target, source].

    Indices are stable generator ids (positions in the original input list),
    so a log replays against the initial Pauli list without re-running any
    graph machinery. ``sign`` is fixed to +1: the package always takes the
    +(i/2)[P,Q] branch and tracks the exact phase inside the Pauli itself.
    """

    target: int
    source: int
    sign: int = 1

    def __post_init__(self):
        if self.target == self.source:
            raise ValueError("contraction target equals source")


@dataclass(frozen=True)
class AntiCommutationGraph:
    """Symmetric zero-diagonal adjacency over packed bit rows."""

    n_vertices: int
    rows: tuple[int, ...]
    vertex_labels: tuple[int, ...]

    def edge(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def neighbours(self, v: int) -> list[int]:
        return _bits(self.rows[v])

    def to_bitmatrix(self) -> BitMatrix:
        return BitMatrix(self.n_vertices, self.n_vertices, self.rows)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def build_graph(
    paulis: list[PauliString], labels: list[int] | None = None
) -> AntiCommutationGraph:
    """Vertex i ~ vertex j iff the Paulis anti-commute.

    Raises:
        IdentityGeneratorError: an identity string is present.
        WidthError: the strings act on different qubit counts.
    """
    n = len(paulis)
    if n:
        width = paulis[0].n_qubits
        for p in paulis:
            if p.n_qubits != width:
                raise WidthError("generators act on different qubit counts")
            if p.is_identity():
                raise IdentityGeneratorError(
                    "identity generator contributes nothing to any Lie algebra"
                )
    rows = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if not commutes(paulis[i], paulis[j]):
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    if labels is None:
        labels = list(range(n))
    return AntiCommutationGraph(n, tuple(rows), tuple(labels))


class GeneratorSystem:
    """A live pairing of Paulis with their graph and a replayable contraction log.

    Vertex arguments to all methods are current positions; log records use the
    stable labels so that a log replays against the original input list even
    after redundant vertices have been deleted.
    """

    def __init__(self, paulis: list[PauliString], labels: list[int] | None = None):
        graph = build_graph(paulis, labels)
        self.paulis: list[PauliString] = list(paulis)
        self.labels: list[int] = list(graph.vertex_labels)
        self._adj: list[int] = list(graph.rows)
        self.log: list[ContractionRecord] = []
        self.removed: list[int] = []
        self.budget: int | None = None

    @property
    def n_vertices(self) -> int:
        return len(self.paulis)

    @property
    def n_qubits(self) -> int:
        return self.paulis[0].n_qubits if self.paulis else 0

    @property
    def graph(self) -> AntiCommutationGraph:
        return AntiCommutationGraph(
            self.n_vertices, tuple(self._adj), tuple(self.labels)
        )

    def edge(self, i: int, j: int) -> bool:
        return bool((self._adj[i] >> j) & 1)

    def adjacency_row(self, v: int) -> int:
        return self._adj[v]

    def clone(self) -> GeneratorSystem:
        other = object.__new__(GeneratorSystem)
        other.paulis = list(self.paulis)
        other.labels = list(self.labels)
        other._adj = list(self._adj)
        other.log = list(self.log)
        other.removed = list(self.removed)
        other.budget = self.budget
        return other

    def induced(self, vertices: list[int]) -> GeneratorSystem:
        """Fresh subsystem over the given vertex positions, with an empty log."""
        return GeneratorSystem(
            [self.paulis[v] for v in vertices], [self.labels[v] for v in vertices]
        )

    def contract_in_place(self, target: int, source: int) -> None:
        """Replace target by (i/2)[target, source]; update adjacency by row addition."""
        if not self.edge(target, source):
            raise ContractionPreconditionError(
                f"no edge between vertices {target} and {source}"
            )
        if self.budget is not None:
            self.budget -= 1
            if self.budget < 0:
                raise InternalDefectError(
                    "contraction budget exhausted: reduction is not converging"
                )
        new_pauli = commutator_pauli(self.paulis[target], self.paulis[source])
        assert new_pauli is not None
        self.paulis[target] = new_pauli
        old_row = self._adj[target]
        new_row = old_row ^ self._adj[source]
        new_row &= ~(1 << target)        # zero diagonal
        new_row |= 1 << source           # the (target, source) edge persists
        self._adj[target] = new_row
        for v in _bits(old_row ^ new_row):
            self._adj[v] ^= 1 << target
        self.log.append(
            ContractionRecord(self.labels[target], self.labels[source])
        )

    def remove_vertex(self, v: int) -> None:
        """Delete a redundant generator; positions above v shift down by one."""
        self.removed.append(self.labels[v])
        del self.paulis[v]
        del self.labels[v]
        del self._adj[v]
        low = (1 << v) - 1
        self._adj = [(row & low) | ((row >> (v + 1)) << v) for row in self._adj]

    def verify_graph(self) -> None:
        """Debug check: the incremental adjacency matches a rebuild from the Paulis."""
        rebuilt = build_graph(self.paulis, self.labels)
        if list(rebuilt.rows) != self._adj:
            raise InternalDefectError("incremental adjacency diverged from rebuild")


def contract(system: GeneratorSystem, target: int, source: int) -> GeneratorSystem:
    """Pure contraction: returns a new system, the input is untouched."""
    out = system.clone()
    out.contract_in_place(target, source)
    return out


def replay_log(
    initial: list[PauliString], log: list[ContractionRecord]
) -> dict[int, PauliString]:
    """Apply a contraction log to the initial Pauli list, keyed by stable label."""
    state = dict(enumerate(initial))
    for record in log:
        result = commutator_pauli(state[record.target], state[record.source])
        if result is None:
            raise InternalDefectError(
                f"log replay hit commuting pair ({record.target}, {record.source})"
            )
        state[record.target] = result
    return state


@dataclass(frozen=True)
class Lightning:
    """A graph minus a pivot vertex, with lit flags marking pivot adjacency.

    ``base_rows`` keep the parent vertex numbering with the pivot row and
    column cleared; ``lit`` is a bitmask (bit v set iff v is adjacent to the
    pivot in the parent graph).
    """

    pivot: int
    n_vertices: int
    base_rows: tuple[int, ...]
    lit: int

    def is_lit(self, v: int) -> bool:
        return bool((self.lit >> v) & 1)

    def lit_vertices(self) -> list[int]:
        return _bits(self.lit)


def make_lightning(
    system: GeneratorSystem, pivot: int, active: list[int] | None = None
) -> Lightning:
    """Snapshot the lightning of ``pivot`` over ``active`` vertices (default: all)."""
    n = system.n_vertices
    if not 0 <= pivot < n:
        raise IndexError(f"pivot {pivot} out of range")
    if active is None:
        mask = (1 << n) - 1
    else:
        mask = 0
        for v in active:
            mask |= 1 << v
    mask &= ~(1 << pivot)
    rows = tuple(
        (system.adjacency_row(v) & mask) if (mask >> v) & 1 else 0 for v in range(n)
    )
    return Lightning(pivot, n, rows, system.adjacency_row(pivot) & mask)


def toggle(lightning: Lightning, w: int) -> Lightning:
    """Flip the lit state of w's neighbours; w must currently be lit."""
    if not lightning.is_lit(w):
        raise TogglePreconditionError(f"vertex {w} is not lit")
    return Lightning(
        lightning.pivot,
        lightning.n_vertices,
        lightning.base_rows,
        lightning.lit ^ lightning.base_rows[w],
    )


def connected_components(graph: AntiCommutationGraph) -> list[list[int]]:
    """Vertex partition into components, ordered by smallest vertex index."""
    n = graph.n_vertices
    seen = [False] * n
    components: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        stack, members = [start], []
        seen[start] = True
        while stack:
            v = stack.pop()
            members.append(v)
            for u in graph.neighbours(v):
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        components.append(sorted(members))
    return components


@dataclass(frozen=True)
class CanonicalShape:
    """One of the four canonical families with its parameters.

    Family A is a line of ``n_L`` vertices with ``n_c`` singles on the
    second-to-last vertex; the star families carry ``n_c + 1`` legs of
    length 1 and ``n_2`` legs of length 2, plus one leg of length 4 (B2)
    or 3 (B3).
    """

    family: str
    n_L: int | None
    n_2: int | None
    n_c: int

    def __post_init__(self):
        if self.family not in ("A", "B1", "B2", "B3"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "A" and (self.n_L is None or self.n_L < 2):
            raise ValueError("family A needs a line length of at least 2")
        if self.family != "A" and (self.n_2 is None or self.n_2 < 1):
            raise ValueError("star families need at least one leg of length 2")
        if self.n_c < 0:
            raise ValueError("negative control count")


@dataclass(frozen=True)
class GraphLayout:
    """Center-and-legs decomposition used by the rewriting engine.

    ``legs`` are vertex tuples ordered from the center outward, sorted by
    their innermost vertex. Pure paths are decomposed with the center at the
    neighbour of the lower-numbered end, which makes every canonical graph a
    single (center, legs) picture.
    """

    center: int
    legs: tuple[tuple[int, ...], ...]

    @property
    def legs1(self) -> tuple[int, ...]:
        return tuple(leg[0] for leg in self.legs if len(leg) == 1)

    def legs_of_length(self, length: int) -> list[tuple[int, ...]]:
        return [leg for leg in self.legs if len(leg) == length]

    def long_legs(self, minimum: int = 3) -> list[tuple[int, ...]]:
        return [leg for leg in self.legs if len(leg) >= minimum]

    def leg_of(self, v: int) -> tuple[int, ...] | None:
        for leg in self.legs:
            if v in leg:
                return leg
        return None

    def vertices(self) -> list[int]:
        out = [self.center]
        for leg in self.legs:
            out.extend(leg)
        return out


def _path_order(rows: list[int], vertices: list[int]) -> list[int] | None:
    """Order a path component from its lower-numbered end; None if not a path."""
    if len(vertices) == 1:
        return vertices
    inside = 0
    for v in vertices:
        inside |= 1 << v
    ends = [v for v in vertices if (rows[v] & inside).bit_count() == 1]
    if len(ends) != 2:
        return None
    if any((rows[v] & inside).bit_count() > 2 for v in vertices):
        return None
    order = [min(ends)]
    prev = -1
    while True:
        nxt = [u for u in _bits(rows[order[-1]] & inside) if u != prev]
        if not nxt:
            break
        prev = order[-1]
        order.append(nxt[0])
    return order if len(order) == len(vertices) else None


def layout_of(
    graph: AntiCommutationGraph, vertices: list[int] | None = None
) -> GraphLayout | None:
    """Decompose a connected induced subgraph into a center with simple legs.

    Returns None when the subgraph is not a tree of spider shape (more than
    one branching vertex, a cycle, or a leg attached away from its end).
    """
    if vertices is None:
        vertices = list(range(graph.n_vertices))
    if len(vertices) < 2:
        return None
    inside = 0
    for v in vertices:
        inside |= 1 << v
    rows = [graph.rows[v] & inside for v in range(graph.n_vertices)]
    edge_count = sum(rows[v].bit_count() for v in vertices) // 2
    if edge_count != len(vertices) - 1:
        return None  # a cycle is never canonical
    branch = [v for v in vertices if rows[v].bit_count() >= 3]
    if len(branch) > 1:
        return None
    if not branch:
        order = _path_order(rows, vertices)
        if order is None:
            return None
        center = order[1]
        legs: list[tuple[int, ...]] = [(order[0],)]
        if len(order) > 2:
            legs.append(tuple(order[2:]))
        return GraphLayout(center, tuple(sorted(legs)))
    center = branch[0]
    remaining = [v for v in vertices if v != center]
    sub = [rows[v] & ~(1 << center) for v in range(graph.n_vertices)]
    seen: set[int] = set()
    legs = []
    for v in remaining:
        if v in seen:
            continue
        stack, members = [v], []
        seen.add(v)
        while stack:
            u = stack.pop()
            members.append(u)
            for w in _bits(sub[u]):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        attached = [u for u in members if (rows[u] >> center) & 1]
        if len(attached) != 1:
            return None
        order = _path_order(sub, sorted(members))
        if order is None:
            return None
        if order[0] != attached[0]:
            order.reverse()
        if order[0] != attached[0]:
            return None
        legs.append(tuple(order))
    return GraphLayout(center, tuple(sorted(legs)))


def shape_from_layout(layout: GraphLayout | None) -> CanonicalShape | None:
    """Map a center-and-legs layout to Theorem-style family parameters.

    The two graph shapes that admit more than one reading are fixed
    deterministically: a star of only length-1 legs reads as the line of
    three with extra singles, and a single length-2 leg beside length-1 legs
    reads as B1 (so a path of four classifies as B1 with one leg of each
    kind, the smallest symplectic graph).
    """
    if layout is None:
        return None
    ones = sum(1 for leg in layout.legs if len(leg) == 1)
    longer = [leg for leg in layout.legs if len(leg) >= 2]
    if ones == 0:
        return None
    if not longer:
        if ones == 1:
            return CanonicalShape("A", 2, None, 0)
        return CanonicalShape("A", 3, None, ones - 2)
    if len(longer) == 1:
        k = len(longer[0])
        if k == 2:
            return CanonicalShape("B1", None, 1, ones - 1)
        return CanonicalShape("A", k + 2, None, ones - 1)
    twos = sum(1 for leg in longer if len(leg) == 2)
    threes = sum(1 for leg in longer if len(leg) == 3)
    fours = sum(1 for leg in longer if len(leg) == 4)
    if twos != len(longer) - threes - fours or twos == 0:
        return None
    if threes == 0 and fours == 0:
        return CanonicalShape("B1", None, twos, ones - 1)
    if fours == 1 and threes == 0:
        return CanonicalShape("B2", None, twos, ones - 1)
    if threes == 1 and fours == 0:
        return CanonicalShape("B3", None, twos, ones - 1)
    return None


def classify_shape(
    graph: AntiCommutationGraph, vertices: list[int] | None = None
) -> CanonicalShape | None:
    """Recognize a Theorem-shaped canonical graph; None for anything else."""
    return shape_from_layout(layout_of(graph, vertices))
