"""Enumeration of tropical leaky covers up to isomorphism.

The pipeline runs in three stages:

1. combinatorial types: decorated multigraphs (vertex genera, marking
   partition, edge multiset) satisfying the valence law, connectivity and
   the genus decomposition, deduplicated by a canonical certificate;
2. weights: edge flows solving the balance law.  On a tree the flows are
   determined and come out as affine-linear forms in x and k; each cycle
   edge contributes one free integer weight, scanned over a bounded range;
3. positions: every linear extension of the orientation induced by positive
   flows yields one cover, since vertices occupy distinct ordered positions
   on the target line.

Numeric covers carry positive integer weights; symbolic (genus 0) trees
keep their weight forms for the chamber machinery.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .covers import (CoverGraph, Problem, WeightedCover, assemble_multiplicity,
                     validate_problem)
from .exactarith import LinForm
from .vertexdata import VertexOracle, oracle_from


class WeightBoundError(RuntimeError):
    """An admissible cover touched the free-weight scan bound."""


@dataclass(frozen=True)
class CombinatorialType:
    """Unweighted decorated multigraph in canonical form.

    ``edges`` lists unordered pairs (u, v) with u < v, repeated with
    multiplicity and sorted; parallel edges are therefore adjacent.
    """

    vertex_genus: tuple[int, ...]
    vertex_ends: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_genus)

    @property
    def cycle_rank(self) -> int:
        return len(self.edges) - self.num_vertices + 1

    def valence(self, v: int) -> int:
        deg = sum(1 for a, b in self.edges if a == v or b == v)
        return deg + len(self.vertex_ends[v])


def _end_partitions(n: int, blocks: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Set partitions of 1..n into at most ``blocks`` parts, padded with
    empty parts; parts ordered by smallest element, empty parts last."""
    if n == 0:
        yield ((),) * blocks
        return
    labels = [0] * n

    def rec(i: int, top: int):
        if i == n:
            parts: list[list[int]] = [[] for _ in range(blocks)]
            for j, lab in enumerate(labels):
                parts[lab].append(j + 1)
            yield tuple(tuple(part) for part in parts)
            return
        for lab in range(min(top + 1, blocks - 1) + 1):
            labels[i] = lab
            yield from rec(i + 1, max(top, lab))

    yield from rec(1, 0) if blocks > 0 else iter(())


def _genus_vectors(blocks: int, g: int) -> Iterator[tuple[int, ...]]:
    if g == 0:
        yield (0,) * blocks
        return
    for combo in itertools.product(range(g + 1), repeat=blocks):
        if sum(combo) <= g:
            yield combo


def _edge_multisets(degrees: tuple[int, ...]) -> Iterator[tuple[tuple[int, int], ...]]:
    """Loopless multigraphs on range(V) with the given edge degrees."""
    V = len(degrees)
    pairs = [(u, v) for u in range(V) for v in range(u + 1, V)]
    rem = list(degrees)
    acc: list[tuple[int, int]] = []

    def rec(idx: int):
        if idx == len(pairs):
            if all(r == 0 for r in rem):
                yield tuple(acc)
            return
        u, v = pairs[idx]
        cap = min(rem[u], rem[v])
        for m in range(cap + 1):
            rem[u] -= m
            rem[v] -= m
            # (u, V-1) is the last pair touching u
            if v != V - 1 or rem[u] == 0:
                acc.extend([(u, v)] * m)
                yield from rec(idx + 1)
                del acc[len(acc) - m:]
            rem[u] += m
            rem[v] += m

    yield from rec(0)


def _connected(V: int, edges: Sequence[tuple[int, int]]) -> bool:
    if V == 1:
        return True
    adj: dict[int, set[int]] = {v: set() for v in range(V)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == V


def _canonical_type(genera: Sequence[int], ends: Sequence[tuple[int, ...]],
                    edges: Sequence[tuple[int, int]]) -> CombinatorialType:
    """Relabel vertices canonically.

    Marked vertices are pinned by their smallest marking; only unmarked
    vertices of equal genus are interchangeable, and the lexicographically
    smallest edge encoding over those swaps is chosen.
    """
    V = len(genera)

    def base_key(v: int):
        if ends[v]:
            return (0, ends[v][0], 0)
        return (1, genera[v], 0)

    base = sorted(range(V), key=base_key)
    groups: list[list[int]] = []
    for pos, v in enumerate(base):
        if (pos > 0 and not ends[v] and not ends[base[pos - 1]]
                and genera[v] == genera[base[pos - 1]]):
            groups[-1].append(pos)
        else:
            groups.append([pos])

    best_edges: tuple[tuple[int, int], ...] | None = None
    best_perm: list[int] | None = None
    swappable = [g for g in groups if len(g) > 1]
    fixed_positions = {v: pos for pos, v in enumerate(base)}
    for assignment in itertools.product(
            *(itertools.permutations(g) for g in swappable)):
        position = dict(fixed_positions)
        for group, perm in zip(swappable, assignment):
            for pos, new_pos in zip(group, perm):
                position[base[pos]] = new_pos
        relabeled = tuple(sorted(
            (min(position[a], position[b]), max(position[a], position[b]))
            for a, b in edges))
        if best_edges is None or relabeled < best_edges:
            best_edges = relabeled
            best_perm = [0] * V
            for v, pos in position.items():
                best_perm[pos] = v
    assert best_perm is not None and best_edges is not None
    return CombinatorialType(
        vertex_genus=tuple(genera[v] for v in best_perm),
        vertex_ends=tuple(tuple(ends[v]) for v in best_perm),
        edges=best_edges)


_TYPE_CACHE: dict[tuple, tuple[CombinatorialType, ...]] = {}


def _types_for(g: int, n: int, e: tuple[int, ...]) -> tuple[CombinatorialType, ...]:
    key = (g, n, e)
    cached = _TYPE_CACHE.get(key)
    if cached is not None:
        return cached
    V = 2 * g - 2 + n - sum(e)
    found: dict[CombinatorialType, CombinatorialType] = {}
    if V >= 1:
        for blocks in _end_partitions(n, V):
            psi_sums = [sum(e[i - 1] for i in part) for part in blocks]
            for genera in _genus_vectors(V, g):
                h1 = g - sum(genera)
                degs = []
                ok = True
                for v in range(V):
                    val = psi_sums[v] + 3 - 2 * genera[v]
                    d = val - len(blocks[v])
                    if d < 0 or val < 1 or (V > 1 and d == 0):
                        ok = False
                        break
                    degs.append(d)
                if not ok or sum(degs) % 2:
                    continue
                if sum(degs) // 2 != V - 1 + h1:
                    continue
                for edges in _edge_multisets(tuple(degs)):
                    if not _connected(V, edges):
                        continue
                    t = _canonical_type(genera, blocks, edges)
                    found.setdefault(t, t)
    result = tuple(sorted(found, key=lambda t: (t.vertex_genus, t.vertex_ends,
                                                t.edges)))
    _TYPE_CACHE[key] = result
    return result


def enumerate_types(p: Problem) -> list[CombinatorialType]:
    """All combinatorial types for p, each isomorphism class exactly once."""
    validate_problem(p)
    return list(_types_for(p.genus, p.n, p.e))


def _incidence(V: int, edges: Sequence[tuple[int, int]]) -> list[list[int]]:
    inc: list[list[int]] = [[] for _ in range(V)]
    for idx, (a, b) in enumerate(edges):
        inc[a].append(idx)
        inc[b].append(idx)
    return inc


def _spanning_structure(V: int, edges: Sequence[tuple[int, int]]):
    """BFS tree from vertex 0: discovery order, parent edge index per vertex."""
    inc = _incidence(V, edges)
    parent_edge: dict[int, int] = {}
    order = [0]
    seen = {0}
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        for idx in inc[v]:
            a, b = edges[idx]
            u = b if a == v else a
            if u not in seen:
                seen.add(u)
                parent_edge[u] = idx
                order.append(u)
    if len(order) != V:
        raise ValueError("type is not connected")
    return order, parent_edge, inc


def _solve_flows(V: int, edges: Sequence[tuple[int, int]], net: Sequence,
                 fixed: dict[int, object], order, parent_edge, inc) -> list:
    """Solve the balance system for the tree flows, leaf to root.

    ``net[v]`` is the required net outflow at v; flows are signed relative
    to the stored (u, v) direction.  Entries of ``net`` and ``fixed`` may be
    ints or LinForms.
    """
    flows: dict[int, object] = dict(fixed)
    for v in reversed(order[1:]):
        e = parent_edge[v]
        acc = net[v]
        for idx in inc[v]:
            if idx == e:
                continue
            f = flows[idx]
            if edges[idx][0] == v:
                acc = acc - f
            else:
                acc = acc + f
        flows[e] = acc if edges[e][0] == v else -acc
    return [flows[i] for i in range(len(edges))]


def _net_out_numeric(p: Problem, t: CombinatorialType) -> list[int]:
    out = []
    for v in range(t.num_vertices):
        mu = 2 * t.vertex_genus[v] - 2 + t.valence(v)
        out.append(sum(p.x[i - 1] for i in t.vertex_ends[v]) - p.k * mu)
    return out


def solve_weights_tree(p: Problem, t: CombinatorialType) -> tuple[LinForm, ...]:
    """Weight forms of a tree type, one per edge, as flows in the stored
    (u, v) direction.

    The form of the edge (u, v) is the cut expression of its tail side,

        sum_{i in S} x_i - k (|S| - 1 + 2 g_S)

    over the markings S and genus g_S of the component containing u.  It is
    positive exactly where the stored orientation is realized; where it is
    negative the edge runs the other way with the negated weight.  The forms
    double as the inequalities carving out the chambers in which this tree
    contributes.
    """
    if t.cycle_rank != 0:
        raise ValueError("tree solving requires a type with no cycles")
    V = t.num_vertices
    adjacency: list[list[tuple[int, int]]] = [[] for _ in range(V)]
    for idx, (a, b) in enumerate(t.edges):
        adjacency[a].append((idx, b))
        adjacency[b].append((idx, a))
    forms = []
    for idx, (u, v) in enumerate(t.edges):
        side = {u}
        stack = [u]
        while stack:
            w = stack.pop()
            for jdx, other in adjacency[w]:
                if jdx != idx and other not in side:
                    side.add(other)
                    stack.append(other)
        markings = sorted(i for w in side for i in t.vertex_ends[w])
        side_genus = sum(t.vertex_genus[w] for w in side)
        forms.append(LinForm.of({i: 1 for i in markings},
                                k=-(len(markings) - 1 + 2 * side_genus)))
    return tuple(forms)


def free_weight_bound(p: Problem, t: CombinatorialType) -> int:
    """Scan bound for free cycle weights; generous by construction."""
    span = 2 * p.genus - 2 + p.n
    return (sum(abs(v) for v in p.x)
            + abs(p.k) * span * (p.branch_codim + t.cycle_rank))


def _canonical_parallel(edges: Sequence[tuple[int, int]],
                        flows: Sequence[int]) -> bool:
    """Keep one representative per permutation of parallel edges."""
    i = 0
    E = len(edges)
    while i < E:
        j = i + 1
        while j < E and edges[j] == edges[i]:
            j += 1
        if j - i > 1:
            run = [flows[idx] for idx in range(i, j)]
            if any(run[a] > run[a + 1] for a in range(len(run) - 1)):
                return False
        i = j
    return True


def _orientation_arcs(edges: Sequence[tuple[int, int]],
                      flows: Sequence[int]) -> set[tuple[int, int]]:
    arcs = set()
    for (a, b), f in zip(edges, flows):
        arcs.add((a, b) if f > 0 else (b, a))
    return arcs


def _is_dag(V: int, arcs: set[tuple[int, int]]) -> bool:
    indeg = [0] * V
    succ: list[list[int]] = [[] for _ in range(V)]
    for a, b in arcs:
        succ[a].append(b)
        indeg[b] += 1
    ready = [v for v in range(V) if indeg[v] == 0]
    count = 0
    while ready:
        v = ready.pop()
        count += 1
        for u in succ[v]:
            indeg[u] -= 1
            if indeg[u] == 0:
                ready.append(u)
    return count == V


def count_linear_extensions(num_vertices: int,
                            arcs: Sequence[tuple[int, int]]) -> int:
    """Number of total orders extending the arc relation.

    Dynamic programming over downward-closed vertex subsets; a cyclic
    relation admits no extension and counts 0.
    """
    V = num_vertices
    preds = [0] * V
    for a, b in arcs:
        preds[b] |= 1 << a
    full = (1 << V) - 1
    counts = [0] * (full + 1)
    counts[0] = 1
    for mask in range(full + 1):
        c = counts[mask]
        if not c:
            continue
        for v in range(V):
            bit = 1 << v
            if not mask & bit and (preds[v] & mask) == preds[v]:
                counts[mask | bit] += c
    return counts[full]


def linear_extensions(num_vertices: int,
                      arcs: Sequence[tuple[int, int]]) -> Iterator[tuple[int, ...]]:
    """Generate the extensions counted by :func:`count_linear_extensions`."""
    preds: list[set[int]] = [set() for _ in range(num_vertices)]
    for a, b in arcs:
        preds[b].add(a)
    placed: list[int] = []
    used: set[int] = set()

    def rec():
        if len(placed) == num_vertices:
            yield tuple(placed)
            return
        for v in range(num_vertices):
            if v not in used and preds[v] <= used:
                used.add(v)
                placed.append(v)
                yield from rec()
                placed.pop()
                used.discard(v)

    yield from rec()


def _admissible_flows(p: Problem, t: CombinatorialType) -> Iterator[list[int]]:
    """Integer flow vectors with no zero flow, canonical on parallel edges."""
    V = t.num_vertices
    if not t.edges:
        yield []
        return
    order, parent_edge, inc = _spanning_structure(V, t.edges)
    tree_idx = set(parent_edge.values())
    free_idx = [i for i in range(len(t.edges)) if i not in tree_idx]
    net = _net_out_numeric(p, t)

    if not free_idx:
        flows = _solve_flows(V, t.edges, net, {}, order, parent_edge, inc)
        if all(f != 0 for f in flows):
            yield flows
        return

    bound = free_weight_bound(p, t)
    values = [v for v in range(-bound, bound + 1) if v != 0]
    for combo in itertools.product(values, repeat=len(free_idx)):
        fixed = dict(zip(free_idx, combo))
        flows = _solve_flows(V, t.edges, net, fixed, order, parent_edge, inc)
        if any(f == 0 for f in flows):
            continue
        if not _canonical_parallel(t.edges, flows):
            continue
        if any(abs(f) >= bound for f in combo):
            if _is_dag(V, _orientation_arcs(t.edges, flows)):
                raise WeightBoundError(
                    f"admissible cover reached the scan bound {bound}; "
                    f"the bound is too small for this input")
            continue
        yield flows


def enumerate_covers(p: Problem, oracle: VertexOracle | None = None,
                     types: Sequence[CombinatorialType] | None = None
                     ) -> list[WeightedCover]:
    """All covers for p up to isomorphism, each with its exact multiplicity.

    Every linear extension of a weighted type's orientation is a distinct
    cover (its own placement of vertices over the target line).  ``types``
    restricts the walk to a subset of combinatorial types; callers use it to
    shard work across workers.
    """
    validate_problem(p)
    if oracle is None:
        oracle = oracle_from()
    if types is None:
        types = _types_for(p.genus, p.n, p.e)
    out: list[WeightedCover] = []
    for t in types:
        V = t.num_vertices
        for flows in _admissible_flows(p, t):
            oriented = tuple(
                (a, b, f) if f > 0 else (b, a, -f)
                for (a, b), f in zip(t.edges, flows))
            arcs = {(a, b) for a, b, _ in oriented}
            for order in linear_extensions(V, arcs):
                cover = CoverGraph(vertex_genus=t.vertex_genus,
                                   vertex_ends=t.vertex_ends,
                                   edges=oriented, order=order)
                out.append(assemble_multiplicity(p, cover, oracle))
    out.sort(key=lambda wc: wc.cover.sort_key())
    return out


def compute_H(p: Problem, oracle: VertexOracle | None = None) -> Fraction:
    """The descendant count: sum of multiplicities over all covers."""
    total = Fraction(0)
    for wc in enumerate_covers(p, oracle):
        total += wc.multiplicity
    return total
