"""Independent ground truth: brute-force Lie closure and valid-colouring counts.

The closure saturates left-nested commutators only (member x generator);
the Jacobi identity lets any non-zero nested commutator be rewritten in that
form, so nothing is missed. A debug flag additionally saturates member x
member and asserts that both rules agree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalDefectError, WidthError
from .graph import (
    AntiCommutationGraph,
    GraphLayout,
    build_graph,
    layout_of,
    shape_from_layout,
)
from .pauli import PauliString

DEFAULT_CAP = 1 << 20


@dataclass(frozen=True)
class ClosureSet:
    """Phase-free keys of a Lie closure; ``cap_hit`` marks truncation."""

    n_qubits: int
    keys: frozenset[int]
    frontier_exhausted: bool
    cap_hit: bool

    def __len__(self) -> int:
        return len(self.keys)


def _anticommutes(key_a: int, key_b: int, n: int) -> bool:
    mask = (1 << n) - 1
    xa, za = key_a >> n, key_a & mask
    xb, zb = key_b >> n, key_b & mask
    return ((xa & zb).bit_count() + (za & xb).bit_count()) % 2 == 1


def lie_closure(
    paulis: list[PauliString],
    cap: int = DEFAULT_CAP,
    *,
    check_pairwise: bool = False,
) -> ClosureSet:
    """Breadth-first saturation of commutators of members with the generators.

    Args:
        paulis: equal-width generators; phases are irrelevant here.
        cap: stop (reporting ``cap_hit``) once the member count passes this.
        check_pairwise: also saturate member x member and assert equality;
            this is the expensive guard for the cheap left-nesting rule.
    """
    if not paulis:
        return ClosureSet(0, frozenset(), True, False)
    n = paulis[0].n_qubits
    for p in paulis:
        if p.n_qubits != n:
            raise WidthError("generators act on different qubit counts")
    gen_keys = sorted({p.key() for p in paulis})
    members: set[int] = set(gen_keys)
    frontier = list(gen_keys)
    cap_hit = False
    while frontier and not cap_hit:
        fresh: list[int] = []
        for key in frontier:
            for g in gen_keys:
                if not _anticommutes(key, g, n):
                    continue
                prod = key ^ g
                if prod not in members:
                    members.add(prod)
                    fresh.append(prod)
                    if len(members) > cap:
                        cap_hit = True
                        break
            if cap_hit:
                break
        frontier = fresh
    result = ClosureSet(n, frozenset(members), not cap_hit, cap_hit)
    if check_pairwise and not cap_hit:
        full = _pairwise_closure(gen_keys, n, cap)
        if full != result.keys:
            raise InternalDefectError(
                "left-nested closure disagrees with member-by-member saturation"
            )
    return result


def _pairwise_closure(gen_keys: list[int], n: int, cap: int) -> frozenset[int]:
    members: set[int] = set(gen_keys)
    changed = True
    while changed:
        changed = False
        snapshot = list(members)
        for i, a in enumerate(snapshot):
            for b in snapshot[i + 1:]:
                if _anticommutes(a, b, n):
                    prod = a ^ b
                    if prod not in members:
                        members.add(prod)
                        changed = True
                        if len(members) > cap:
                            raise InternalDefectError("pairwise closure exceeded cap")
    return frozenset(members)


def verify_closed(closure: ClosureSet) -> None:
    """Post-hoc check: products of non-commuting members stay inside the set."""
    keys = sorted(closure.keys)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            if _anticommutes(a, b, closure.n_qubits) and (a ^ b) not in closure.keys:
                raise InternalDefectError("closure set is not closed")


def closure_dimension(paulis: list[PauliString], cap: int = DEFAULT_CAP) -> int | None:
    """Cardinality of the closure, or None when the cap truncated it."""
    closure = lie_closure(paulis, cap)
    return None if closure.cap_hit else len(closure.keys)


@dataclass(frozen=True)
class Colouring:
    """A vertex subset of a canonical graph, packed as a bitmask."""

    bits: int
    n_vertices: int

    def vertices(self) -> list[int]:
        return [v for v in range(self.n_vertices) if (self.bits >> v) & 1]


def _coloured_components(graph: AntiCommutationGraph, bits: int) -> list[int]:
    """Connected components of the induced coloured subgraph, as bitmasks."""
    components = []
    todo = bits
    while todo:
        seed = todo & -todo
        comp = seed
        stack = [seed.bit_length() - 1]
        todo ^= seed
        while stack:
            v = stack.pop()
            for u_mask in _mask_bits(graph.rows[v] & todo):
                comp |= u_mask
                todo ^= u_mask
                stack.append(u_mask.bit_length() - 1)
        components.append(comp)
    return components


def _mask_bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low)
        mask ^= low
    return out


def enumerate_valid_colourings(
    graph: AntiCommutationGraph, layout: GraphLayout | None = None
) -> list[Colouring]:
    """All colourings whose Pauli product lies in the Lie algebra.

    The characterization is purely combinatorial: on a line-with-singles
    graph the coloured set must fall into one arbitrary component plus an
    even number of isolated length-1 legs; on a star it must have an odd
    number of components, except (one leg of length 3 only) the unreachable
    pattern of the first and third long-leg vertices plus an odd number of
    length-1 legs.
    """
    if layout is None:
        layout = layout_of(graph)
    shape = shape_from_layout(layout)
    if layout is None or shape is None:
        raise ValueError("graph is not in canonical shape")
    n = graph.n_vertices
    legs1_mask = 0
    for v in layout.legs1:
        legs1_mask |= 1 << v
    exception_leg = layout.legs_of_length(3)[0] if shape.family == "B3" else None

    out: list[Colouring] = []
    for bits in range(1, 1 << n):
        comps = _coloured_components(graph, bits)
        if shape.family == "A":
            bulky = [c for c in comps if not (c.bit_count() == 1 and c & legs1_mask)]
            if len(bulky) <= 1 and len(comps) % 2 == 1:
                out.append(Colouring(bits, n))
            continue
        if len(comps) % 2 == 0:
            continue
        if exception_leg is not None:
            long_part = bits & ~legs1_mask
            pattern = (1 << exception_leg[0]) | (1 << exception_leg[2])
            if long_part == pattern and (bits & legs1_mask).bit_count() % 2 == 1:
                continue
        out.append(Colouring(bits, n))
    return out


def colouring_key(paulis: list[PauliString], colouring: Colouring) -> int:
    """Phase-free key of the product of the coloured generators."""
    key = 0
    for v in colouring.vertices():
        key ^= paulis[v].key()
    return key


def build_canonical_graph(paulis: list[PauliString]) -> AntiCommutationGraph:
    """Convenience wrapper used by the colouring cross-checks."""
    return build_graph(paulis)
