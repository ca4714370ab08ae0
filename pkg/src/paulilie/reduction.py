"""Rewriting engine: reduce any connected anti-commutation graph to canonical form.

The reduction inserts vertices one at a time into a canonical subgraph. Each
new vertex's lightning is first normalized to a single lit vertex, then the
attachment is repaired with the long-leg splitting, leg-merging and
branch-relocation moves. Every move is a fixed toggle sequence applied as
contractions, so the whole run is replayable from the log.

The sequences themselves are kept as named, data-driven templates; each is
covered by a unit test replaying it on the configuration it was designed for,
since a silently mistranscribed 28-step sequence would be very hard to debug
downstream.
"""

from __future__ import annotations

from collections import deque

from .errors import InternalDefectError, PauliLieError
from .gf2 import BitMatrix, kernel_basis
from .graph import (
    GeneratorSystem,
    GraphLayout,
    classify_shape,
    connected_components,
    layout_of,
    shape_from_layout,
)

# Toggle sequences from the leg-rewriting proofs. Tokens: O center, w a leg of
# length 1, L*/M* the i-th vertex of the two named legs, P any further centre
# neighbour, V the vertex being inserted.
TOGGLE_TEMPLATES: dict[str, tuple[str, ...]] = {
    # invert L1, M1 (and L3) when both leg heads start unlit / lit
    "even_swap_both_unlit": ("O", "M1", "L1", "O", "M2", "M1", "L2", "L1"),
    "even_swap_both_lit": ("L1", "L2", "M1", "M2", "O", "L1", "M1", "O"),
    # mixed heads route through a lit leg of length 1
    "even_swap_mixed": ("L1", "L2", "w", "O", "L1", "M1", "O", "M2", "M1", "w"),
    # cut a leg of length > 4 behind its fourth vertex (lightning pivot L5)
    "split_leg_beyond_four": (
        "L4", "L3", "L2", "L1", "O", "M1", "P", "O", "L1", "M2", "M1", "O",
        "L2", "L1", "L3", "L2", "L4", "L3", "P", "O", "L1", "L2", "M1", "M2",
        "O", "L1", "M1", "O",
    ),
    # turn one of two legs of length 3 into a 2-leg plus a 1-leg (pivot L3)
    "merge_two_legs_of_three": ("L2", "L1", "O", "M1", "M2", "M3", "w"),
    # first phase of breaking a pair of 4-legs into 2-legs (pivot L3)
    "break_leg_of_four_pair": (
        "L2", "L1", "O", "M1", "M2", "M3", "M4", "w", "O", "L1", "L2", "M1",
        "O", "w", "L1", "M4", "M3", "O", "M1", "M2",
    ),
    # break a 4-leg against the unique 3-leg (pivot L3)
    "break_leg_of_four_with_three": (
        "L2", "L1", "O", "M1", "M2", "M3", "w", "O", "L1", "L2", "M1", "O",
        "w", "L1", "M3", "w", "M3", "M2", "M1", "O",
    ),
}

BUDGET_FACTOR = 64  # contraction allowance is BUDGET_FACTOR * n**3 + 512


def resolve_template(name: str, binding: dict[str, int]) -> list[int]:
    """Instantiate a named toggle template with concrete vertex numbers."""
    return [binding[token] for token in TOGGLE_TEMPLATES[name]]


def relocation_sequence(
    leg_prefix: list[int], center: int, omega: int, new_vertex: int
) -> list[int]:
    """Toggles L_j..L_1, O, w, V, L_j..L_1, O that re-hang a branch onto the center.

    ``leg_prefix`` lists the leg from the branch point inward, i.e.
    [L_j, L_{j-1}, ..., L_1].
    """
    return leg_prefix + [center, omega, new_vertex] + leg_prefix + [center]


def _toggle_run(system: GeneratorSystem, pivot: int, vertices: list[int]) -> None:
    for w in vertices:
        system.contract_in_place(pivot, w)


def _lit(system: GeneratorSystem, pivot: int, v: int) -> bool:
    return system.edge(pivot, v)


def even_leg_swap(
    system: GeneratorSystem,
    pivot: int,
    center: int,
    leg_l: tuple[int, ...],
    leg_m: tuple[int, ...],
    omegas: tuple[int, ...],
) -> None:
    """Invert the lit state of both leg heads (and L3), leaving the rest alone.

    Operates on the working lightning of ``pivot``. Preconditions: the center
    is lit, ``leg_l`` has length 2 to 4 and ``leg_m`` exactly 2, the second
    vertex of each is unlit, and at least one leg of length 1 exists.
    """
    if not 2 <= len(leg_l) <= 4 or len(leg_m) != 2:
        raise InternalDefectError("even_leg_swap leg lengths out of range")
    if not _lit(system, pivot, center):
        raise InternalDefectError("even_leg_swap requires a lit center")
    if _lit(system, pivot, leg_l[1]) or _lit(system, pivot, leg_m[1]):
        raise InternalDefectError("even_leg_swap requires unlit second leg vertices")
    if not omegas:
        raise InternalDefectError("even_leg_swap requires a leg of length 1")
    l1_lit = _lit(system, pivot, leg_l[0])
    m1_lit = _lit(system, pivot, leg_m[0])
    binding = {
        "O": center,
        "L1": leg_l[0],
        "L2": leg_l[1],
        "M1": leg_m[0],
        "M2": leg_m[1],
    }
    if not l1_lit and not m1_lit:
        _toggle_run(system, pivot, resolve_template("even_swap_both_unlit", binding))
        return
    if l1_lit and m1_lit:
        _toggle_run(system, pivot, resolve_template("even_swap_both_lit", binding))
        return
    # mixed: the template's L names the leg whose head is lit
    omega = omegas[0]
    wrap = not _lit(system, pivot, omega)
    if wrap:
        system.contract_in_place(pivot, center)
        l1_lit = not l1_lit
    lit_leg, unlit_leg = (leg_l, leg_m) if l1_lit else (leg_m, leg_l)
    binding = {
        "O": center,
        "w": omega,
        "L1": lit_leg[0],
        "L2": lit_leg[1],
        "M1": unlit_leg[0],
        "M2": unlit_leg[1],
    }
    _toggle_run(system, pivot, resolve_template("even_swap_mixed", binding))
    if wrap:
        system.contract_in_place(pivot, center)


def _layout(system: GeneratorSystem, active: list[int]) -> GraphLayout:
    layout = layout_of(system.graph, active)
    if layout is None:
        raise InternalDefectError("working graph lost its spider shape")
    return layout


def shorten_star(system: GeneratorSystem, active: list[int] | None = None) -> None:
    """Rewrite a star with arbitrary legs into a canonical graph, in place.

    Longest legs are processed first: anything beyond length 4 is split,
    surplus legs of length 3 are merged pairwise, and legs of length 4 are
    broken down two at a time (or against the single leg of length 3).
    Requires at least one leg of length 1.
    """
    if active is None:
        active = list(range(system.n_vertices))
    while True:
        layout = _layout(system, active)
        if shape_from_layout(layout) is not None:
            return
        legs1 = layout.legs1
        if not legs1:
            raise InternalDefectError("shorten_star needs a leg of length 1")
        center = layout.center
        by_length = sorted(layout.legs, key=lambda leg: (-len(leg), leg))
        longest = by_length[0]
        threes = layout.legs_of_length(3)
        fours = layout.legs_of_length(4)
        if len(longest) > 4:
            others = [leg for leg in layout.legs if leg != longest and len(leg) >= 2]
            mate = others[0]
            spares = [
                leg[0]
                for leg in layout.legs
                if leg != longest and leg != mate
            ]
            binding = {
                "O": center,
                "L1": longest[0], "L2": longest[1], "L3": longest[2], "L4": longest[3],
                "M1": mate[0], "M2": mate[1],
                "P": spares[0],
            }
            _toggle_run(
                system, longest[4], resolve_template("split_leg_beyond_four", binding)
            )
        elif len(threes) >= 2:
            first, second = threes[0], threes[1]
            pivot = first[2]
            binding = {
                "O": center,
                "L1": first[0], "L2": first[1],
                "M1": second[0], "M2": second[1], "M3": second[2],
                "w": legs1[0],
            }
            _toggle_run(
                system, pivot, resolve_template("merge_two_legs_of_three", binding)
            )
            even_leg_swap(
                system, pivot, center, second, (first[0], first[1]), legs1
            )
            system.contract_in_place(pivot, center)
        elif len(fours) >= 2 and not threes:
            first, second = fours[0], fours[1]
            pivot = first[2]
            binding = {
                "O": center,
                "L1": first[0], "L2": first[1],
                "M1": second[0], "M2": second[1], "M3": second[2], "M4": second[3],
                "w": legs1[0],
            }
            _toggle_run(
                system, pivot, resolve_template("break_leg_of_four_pair", binding)
            )
            # re-hang the two fresh 2-legs from the branch vertex onto the center
            system.contract_in_place(second[1], second[0])
            system.contract_in_place(center, second[1])
            even_leg_swap(
                system,
                second[1],
                center,
                (second[2], second[3]),
                (first[2], first[3]),
                legs1,
            )
        elif fours and threes:
            four, three = fours[0], threes[0]
            pivot = four[2]
            binding = {
                "O": center,
                "L1": four[0], "L2": four[1],
                "M1": three[0], "M2": three[1], "M3": three[2],
                "w": legs1[0],
            }
            _toggle_run(
                system,
                pivot,
                resolve_template("break_leg_of_four_with_three", binding),
            )
        else:
            raise InternalDefectError("shorten_star dispatch exhausted")


def _legs1_states(
    system: GeneratorSystem, pivot: int, legs1: tuple[int, ...]
) -> bool:
    states = {_lit(system, pivot, v) for v in legs1}
    if len(states) != 1:
        raise InternalDefectError("legs of length 1 drifted out of sync")
    return states.pop()


def _pq_walk(
    system: GeneratorSystem,
    target: int,
    path_to_center: list[int],
    center: int,
    p: int,
    q: int,
) -> None:
    """Contract onto ``target`` the sources that multiply it by the product PQ."""
    sources = path_to_center + [center, p, q, center] + list(reversed(path_to_center))
    for s in sources:
        system.contract_in_place(target, s)


def _normalize_mixed(
    system: GeneratorSystem, pivot: int, layout: GraphLayout
) -> None:
    legs1 = layout.legs1
    lit1 = [v for v in legs1 if _lit(system, pivot, v)]
    unlit1 = [v for v in legs1 if not _lit(system, pivot, v)]
    p, q = lit1[0], unlit1[0]
    for g in sorted(layout.vertices()):
        if g in (p, q) or not _lit(system, pivot, g):
            continue
        if g == layout.center:
            # the walk degenerates: the center touches p and q directly
            system.contract_in_place(g, p)
            system.contract_in_place(g, q)
            continue
        leg = layout.leg_of(g)
        j = leg.index(g)
        _pq_walk(system, g, list(reversed(leg[:j])), layout.center, p, q)


def _sweep_path(
    system: GeneratorSystem, pivot: int, order: list[int | None], cluster: tuple[int, ...]
) -> None:
    """Toggle the second-innermost lit position until one vertex stays lit.

    ``order[0]`` may be None, standing for the cluster of length-1 legs that
    flips as one unit whenever the center is toggled.
    """
    guard = 0
    while True:
        guard += 1
        if guard > 4 * (len(order) + len(cluster)) ** 2 + 16:
            raise InternalDefectError("path sweep failed to converge")
        cluster_lit = (
            _legs1_states(system, pivot, cluster) if order[0] is None else False
        )
        lit_positions = [
            i
            for i, v in enumerate(order)
            if (cluster_lit if v is None else _lit(system, pivot, v))
        ]
        lit_count = sum(
            len(cluster) if order[i] is None else 1 for i in lit_positions
        )
        if lit_count == 1:
            return
        if lit_positions == [0] and order[0] is None:
            system.contract_in_place(pivot, cluster[0])
            continue
        w = order[lit_positions[1]]
        assert w is not None
        system.contract_in_place(pivot, w)


def _normalize_uniform_line(
    system: GeneratorSystem, pivot: int, layout: GraphLayout
) -> None:
    long_legs = [leg for leg in layout.legs if len(leg) >= 2]
    long = list(long_legs[0]) if long_legs else []
    order: list[int | None] = [None, layout.center] + long
    _sweep_path(system, pivot, order, layout.legs1)


def _leg_normalization_moves(
    leg_len: int, start: tuple[int, ...], start_center: int, start_u: int
) -> list[tuple[str, int]]:
    """Shortest move sequence emptying a leg's tail while restoring everything.

    State: (leg bits, center lit, legs-1 state, center-toggle parity). Moves
    flip neighbours exactly as toggles do; the goal keeps only the head
    possibly lit with the center and legs of length 1 lit and an even number
    of center toggles so other legs are untouched.
    """
    initial = (start, start_center, start_u, 0)
    seen = {initial: None}
    queue = deque([initial])
    goal = None
    while queue:
        state = queue.popleft()
        bits, center, u, parity = state
        if all(b == 0 for b in bits[1:]) and center and u and parity == 0:
            goal = state
            break
        moves: list[tuple[str, int]] = [("leg", i) for i in range(leg_len)]
        moves.append(("omega", 0))
        moves.append(("center", 0))
        for move in moves:
            kind, i = move
            if kind == "leg":
                if not bits[i]:
                    continue
                nb = list(bits)
                if i > 0:
                    nb[i - 1] ^= 1
                else:
                    pass
                if i + 1 < leg_len:
                    nb[i + 1] ^= 1
                nxt = (
                    tuple(nb),
                    center ^ (1 if i == 0 else 0),
                    u,
                    parity,
                )
            elif kind == "omega":
                if not u:
                    continue
                nxt = (bits, center ^ 1, u, parity)
            else:
                if not center:
                    continue
                nb = list(bits)
                nb[0] ^= 1
                nxt = (tuple(nb), center, u ^ 1, parity ^ 1)
            if nxt not in seen:
                seen[nxt] = (state, move)
                queue.append(nxt)
    if goal is None:
        raise InternalDefectError("leg normalization search found no route")
    path: list[tuple[str, int]] = []
    cursor = goal
    while seen[cursor] is not None:
        cursor, move = seen[cursor]
        path.append(move)
    path.reverse()
    return path


def _normalize_leg(
    system: GeneratorSystem,
    pivot: int,
    layout: GraphLayout,
    leg: tuple[int, ...],
) -> None:
    bits = tuple(1 if _lit(system, pivot, v) else 0 for v in leg)
    center_lit = 1 if _lit(system, pivot, layout.center) else 0
    u = 1 if _legs1_states(system, pivot, layout.legs1) else 0
    moves = _leg_normalization_moves(len(leg), bits, center_lit, u)
    omega = layout.legs1[0]
    for kind, i in moves:
        if kind == "leg":
            system.contract_in_place(pivot, leg[i])
        elif kind == "omega":
            system.contract_in_place(pivot, omega)
        else:
            system.contract_in_place(pivot, layout.center)


def _normalize_uniform_star(
    system: GeneratorSystem, pivot: int, layout: GraphLayout
) -> None:
    center = layout.center
    # light the center from the innermost lit vertex of some leg
    if not _lit(system, pivot, center):
        lit_leg = None
        for leg in layout.legs:
            if any(_lit(system, pivot, v) for v in leg):
                lit_leg = leg
                break
        if lit_leg is None:
            raise InternalDefectError("normalize called with nothing lit")
        guard = 0
        while not _lit(system, pivot, center):
            guard += 1
            if guard > len(lit_leg) + 2:
                raise InternalDefectError("center lighting failed to converge")
            innermost = next(
                i for i, v in enumerate(lit_leg) if _lit(system, pivot, v)
            )
            system.contract_in_place(pivot, lit_leg[innermost])
    if not _legs1_states(system, pivot, layout.legs1):
        system.contract_in_place(pivot, center)
    # empty every leg tail, then collect all 2-leg heads with pair swaps
    long_legs = sorted(layout.legs, key=lambda leg: (-len(leg), leg))
    designated = long_legs[0]
    for leg in layout.legs:
        if len(leg) >= 2:
            _normalize_leg(system, pivot, layout, leg)
    for leg in layout.legs:
        if leg == designated or len(leg) != 2:
            continue
        if not _lit(system, pivot, leg[0]):
            even_leg_swap(system, pivot, center, designated, leg, layout.legs1)
    system.contract_in_place(pivot, center)
    order: list[int | None] = [center] + list(designated)
    stray = [
        v
        for v in layout.vertices()
        if _lit(system, pivot, v) and v not in order
    ]
    if stray:
        raise InternalDefectError(f"unexpected lit vertices {stray} before final sweep")
    _sweep_path(system, pivot, order, ())


def normalize_lightning(
    system: GeneratorSystem,
    pivot: int,
    active: list[int] | None = None,
) -> list[int]:
    """Rewrite until exactly one vertex of the lightning of ``pivot`` is lit.

    The base graph (the canonical graph the lightning lives on) is left
    untouched; only adjacency to the pivot changes. Returns the indices of
    the log records appended. Raises if nothing is lit, since no toggle can
    ever light a fully dark lightning.
    """
    if active is None:
        active = [v for v in range(system.n_vertices) if v != pivot]
    start = len(system.log)
    lit = [v for v in active if _lit(system, pivot, v)]
    if not lit:
        raise PauliLieError("lightning has no lit vertex")
    if len(lit) == 1:
        return []
    base_before = [system.adjacency_row(v) for v in active]
    layout = _layout(system, active)
    shape = shape_from_layout(layout)
    if shape is None:
        raise PauliLieError("lightning base graph is not canonical")
    legs1 = layout.legs1
    states = {_lit(system, pivot, v) for v in legs1}
    if states == {True, False}:
        _normalize_mixed(system, pivot, layout)
    elif shape.family == "A":
        _normalize_uniform_line(system, pivot, layout)
    else:
        _normalize_uniform_star(system, pivot, layout)
    lit = [v for v in active if _lit(system, pivot, v)]
    if len(lit) != 1:
        raise InternalDefectError("normalization did not reach a single lit vertex")
    mask = 0
    for v in active:
        mask |= 1 << v
    base_after = [system.adjacency_row(v) for v in active]
    if [r & mask & ~(1 << pivot) for r in base_before] != [
        r & mask & ~(1 << pivot) for r in base_after
    ]:
        raise InternalDefectError("normalization disturbed the base graph")
    return list(range(start, len(system.log)))


def _insert_vertex(
    system: GeneratorSystem, inserted: list[int], new_vertex: int
) -> None:
    """Grow the canonical subgraph by one vertex, repairing the attachment."""
    normalize_lightning(system, new_vertex, inserted)
    layout = _layout(system, inserted)
    shape = shape_from_layout(layout)
    assert shape is not None
    (anchor,) = [v for v in inserted if system.edge(new_vertex, v)]
    active = inserted + [new_vertex]
    if anchor == layout.center:
        return
    leg = layout.leg_of(anchor)
    assert leg is not None
    if anchor == leg[-1]:
        # the leg simply grows by one; repair only if that breaks canonicity
        if classify_shape(system.graph, active) is None:
            shorten_star(system, active)
        return
    # interior attachment: re-hang the outer branch onto the center
    j = leg.index(anchor)
    omega = layout.legs1[0]
    sequence = relocation_sequence(
        list(reversed(leg[: j + 1])), layout.center, omega, new_vertex
    )
    _toggle_run(system, leg[j + 1], sequence)
    if classify_shape(system.graph, active) is None:
        shorten_star(system, active)


def reduce_to_canonical(system: GeneratorSystem) -> GeneratorSystem:
    """Contract a connected system until its graph is a canonical graph.

    Returns a rewritten clone; the input is untouched. The clone carries the
    full contraction log, so the result replays from the original Paulis.
    """
    n = system.n_vertices
    if n < 2:
        raise PauliLieError("reduction needs at least two vertices")
    if len(connected_components(system.graph)) != 1:
        raise PauliLieError("reduction needs a connected graph; split components first")
    work = system.clone()
    work.budget = BUDGET_FACTOR * n**3 + 512
    inserted = [0]
    while len(inserted) < n:
        candidates = [
            v
            for v in range(n)
            if v not in inserted
            and any(work.edge(v, u) for u in inserted)
        ]
        if not candidates:
            raise InternalDefectError("connectivity lost during reduction")
        nxt = candidates[0]
        if len(inserted) == 1:
            inserted.append(nxt)
            continue
        _insert_vertex(work, inserted, nxt)
        inserted.append(nxt)
        if classify_shape(work.graph, inserted) is None:
            raise InternalDefectError("insertion left a non-canonical subgraph")
    work.budget = None
    return work


def _symplectic_columns(system: GeneratorSystem) -> BitMatrix:
    n = system.n_qubits
    rows = []
    for bit in range(n):
        rows.append(
            sum(((p.x_bits >> bit) & 1) << j for j, p in enumerate(system.paulis))
        )
    for bit in range(n):
        rows.append(
            sum(((p.z_bits >> bit) & 1) << j for j, p in enumerate(system.paulis))
        )
    return BitMatrix.from_rows(rows, system.n_vertices)


def _legs1_only_kernel_vector(
    kernel: list[int], legs1: tuple[int, ...], n: int
) -> int | None:
    """A nonzero kernel combination supported on length-1 legs, if one exists."""
    legs1_mask = 0
    for v in legs1:
        legs1_mask |= 1 << v
    pool = list(kernel)
    for position in range(n):
        if (legs1_mask >> position) & 1:
            continue
        idx = next((k for k, v in enumerate(pool) if (v >> position) & 1), None)
        if idx is None:
            continue
        pivot = pool.pop(idx)
        pool = [v ^ pivot if (v >> position) & 1 else v for v in pool]
    for v in pool:
        if v:
            return v
    return None


def minimize_generators(system: GeneratorSystem) -> GeneratorSystem:
    """Delete redundant generators until only the allowed dependence can remain.

    Any algebraic relation supported entirely on legs of length 1 marks a
    generator that the rest already produces; one involved vertex is removed
    and the search repeats. The result stays canonical.
    """
    work = system.clone()
    while True:
        if work.n_vertices < 2:
            return work
        layout = layout_of(work.graph)
        if layout is None:
            raise PauliLieError("minimize_generators expects a canonical graph")
        kernel = kernel_basis(_symplectic_columns(work))
        if not kernel:
            return work
        vector = _legs1_only_kernel_vector(kernel, layout.legs1, work.n_vertices)
        if vector is None:
            return work
        victim = (vector & -vector).bit_length() - 1
        work.remove_vertex(victim)
        if classify_shape(work.graph) is None:
            raise InternalDefectError("redundancy removal broke canonical shape")
