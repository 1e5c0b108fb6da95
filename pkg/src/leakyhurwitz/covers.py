"""Problems and tropical leaky covers: validation, automorphisms, multiplicity.

A problem fixes the genus g, leak k, signed degree profile x (positive
entries are left ends, negative right ends, zero-weight markings are
contracted) and psi exponents e.  A cover is a connected decorated
multigraph over c+1 = 2g-2+n-|e| ordered positions: every vertex carries a
genus and a set of markings, every edge a positive weight and an orientation
running left to right.

Two balance laws govern admissibility at each vertex v with valence val(v):

    valence law   val(v) = sum of e_i over markings at v + 3 - 2 g(v)
    flow law      inflow(v) - outflow(v) = k (2 g(v) - 2 + val(v))

where inflow counts inbound edge weights plus positive markings at v and
outflow counts outbound edge weights plus the absolute values of negative
markings.  Zero-weight markings count toward the valence but carry no flow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .exactarith import LinForm, Poly, rat_str
from .vertexdata import VertexKey, genus0_vertex_mult

Weight = Union[int, LinForm]


class ProblemError(ValueError):
    """An input record violating one of the problem invariants."""


class CoverError(ValueError):
    """A cover violating one of its structural invariants."""


@dataclass(frozen=True)
class Problem:
    """Input record (g, k, x, e); n is the length of x."""

    genus: int
    k: int
    x: tuple[int, ...]
    e: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "e", tuple(self.e))

    @staticmethod
    def of(genus: int, k: int, x: Sequence[int],
           e: Sequence[int] | None = None) -> "Problem":
        x = tuple(x)
        e = tuple(e) if e is not None else (0,) * len(x)
        return Problem(genus, k, x, e)

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def psi_total(self) -> int:
        return sum(self.e)

    @property
    def branch_codim(self) -> int:
        """c = 2g - 3 + n - |e|; valid covers have c + 1 vertices."""
        return 2 * self.genus - 3 + self.n - self.psi_total

    def turned_around(self) -> "Problem":
        return Problem(self.genus, -self.k, tuple(-v for v in self.x), self.e)


def validate_problem(p: Problem) -> Problem:
    """Check the problem invariants, raising a distinct diagnostic for each."""
    if p.genus < 0:
        raise ProblemError(f"genus {p.genus} must be nonnegative")
    if len(p.e) != p.n:
        raise ProblemError(
            f"psi vector has length {len(p.e)}, expected n = {p.n}")
    if 2 * p.genus - 2 + p.n <= 0:
        raise ProblemError(
            f"unstable input: 2g-2+n = {2 * p.genus - 2 + p.n} must be positive")
    expected = p.k * (2 * p.genus - 2 + p.n)
    if sum(p.x) != expected:
        raise ProblemError(
            f"degree constraint violated: sum(x) = {sum(p.x)} "
            f"but k(2g-2+n) = {expected}")
    if any(v < 0 for v in p.e):
        raise ProblemError(f"psi exponents must be nonnegative, got {p.e}")
    if p.psi_total > 2 * p.genus - 3 + p.n:
        raise ProblemError(
            f"psi budget exceeded: |e| = {p.psi_total} "
            f"> 2g-3+n = {2 * p.genus - 3 + p.n}")
    return p


@dataclass(frozen=True)
class CoverGraph:
    """One tropical leaky cover.

    ``vertex_ends`` partitions 1..n over the vertices; ``edges`` stores
    (u, v, weight) oriented from u to v (weights are positive ints, or
    LinForms in symbolic mode); ``order`` lists vertex indices from the
    leftmost position to the rightmost.
    """

    vertex_genus: tuple[int, ...]
    vertex_ends: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int, Weight], ...]
    order: tuple[int, ...]

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_genus)

    def valence(self, v: int) -> int:
        deg = sum(1 for a, b, _ in self.edges if a == v or b == v)
        return deg + len(self.vertex_ends[v])

    def is_symbolic(self) -> bool:
        return any(isinstance(w, LinForm) for _, _, w in self.edges)

    def sort_key(self):
        return (self.vertex_genus, self.vertex_ends,
                tuple((a, b, w if isinstance(w, int) else str(w))
                      for a, b, w in self.edges),
                self.order)


def _vertex_balance_form(p: Problem, c: CoverGraph, v: int) -> LinForm:
    """Flow law residual at v as a form in x and k; zero iff balanced."""
    val = c.valence(v)
    form = LinForm.of({i: 1 for i in c.vertex_ends[v]},
                      k=-(2 * c.vertex_genus[v] - 2 + val))
    for a, b, w in c.edges:
        if a == v or b == v:
            term = w if isinstance(w, LinForm) else LinForm.constant(w)
            if b == v:
                form = form + term
            if a == v:
                form = form - term
    return form


def check_cover(p: Problem, c: CoverGraph) -> CoverGraph:
    """Verify every cover invariant against p, naming the first violation."""
    V = c.num_vertices
    if V != len(c.vertex_ends):
        raise CoverError("vertex genus and end lists disagree in length")
    if V == 0:
        raise CoverError("cover has no vertices")
    seen: set[int] = set()
    for ends in c.vertex_ends:
        for i in ends:
            if i in seen:
                raise CoverError(f"marking {i} attached to two vertices")
            seen.add(i)
    if seen != set(range(1, p.n + 1)):
        raise CoverError(
            f"markings {sorted(seen)} do not partition 1..{p.n}")
    for a, b, w in c.edges:
        if a == b:
            raise CoverError(f"edge at vertex {a} is a loop")
        if not (0 <= a < V and 0 <= b < V):
            raise CoverError(f"edge ({a}, {b}) references a missing vertex")
        if isinstance(w, int) and w <= 0:
            raise CoverError(f"edge ({a}, {b}) has nonpositive weight {w}")
    # connectivity
    adj: dict[int, set[int]] = {v: set() for v in range(V)}
    for a, b, _ in c.edges:
        adj[a].add(b)
        adj[b].add(a)
    reached = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for u in adj[v]:
            if u not in reached:
                reached.add(u)
                frontier.append(u)
    if len(reached) != V:
        raise CoverError("cover graph is not connected")
    h1 = len(c.edges) - V + 1
    if h1 + sum(c.vertex_genus) != p.genus:
        raise CoverError(
            f"genus mismatch: h1 = {h1} plus vertex genera "
            f"{sum(c.vertex_genus)} differs from g = {p.genus}")
    if V != p.branch_codim + 1:
        raise CoverError(
            f"vertex count {V} differs from c+1 = {p.branch_codim + 1}")
    for v in range(V):
        val = c.valence(v)
        target = sum(p.e[i - 1] for i in c.vertex_ends[v]) + 3 - 2 * c.vertex_genus[v]
        if val != target:
            raise CoverError(
                f"valence law fails at vertex {v}: val = {val}, "
                f"psi target = {target}")
    degree_form = LinForm.of({i: 1 for i in range(1, p.n + 1)},
                             k=-(2 * p.genus - 2 + p.n))
    for v in range(V):
        residual = _vertex_balance_form(p, c, v)
        if c.is_symbolic():
            # balance need only hold on the degree hyperplane, where the
            # residual is a multiple of the hyperplane form
            factor = residual.coeff(1)
            if residual != degree_form.scale(factor):
                raise CoverError(
                    f"flow balance fails at vertex {v}: residual {residual}")
        else:
            if residual.evaluate(p.x, p.k) != 0:
                raise CoverError(
                    f"flow balance fails at vertex {v}: "
                    f"residual {residual.evaluate(p.x, p.k)}")
    if sorted(c.order) != list(range(V)):
        raise CoverError(f"order {c.order} is not a permutation of the vertices")
    pos = {v: i for i, v in enumerate(c.order)}
    for a, b, _ in c.edges:
        if pos[a] >= pos[b]:
            raise CoverError(
                f"edge ({a}, {b}) runs right to left in the vertex order")
    return c


def automorphism_order(c: CoverGraph) -> int:
    """Order of the automorphism group: permutations of equal parallel edges.

    Distinct positions and labeled markings pin every vertex, so the only
    symmetries left permute parallel edges with equal weight.
    """
    groups: dict[tuple, int] = {}
    for a, b, w in c.edges:
        key = (a, b, w if isinstance(w, int) else w)
        groups[key] = groups.get(key, 0) + 1
    out = 1
    for count in groups.values():
        for m in range(2, count + 1):
            out *= m
    return out


def vertex_key_of(p: Problem, c: CoverGraph, v: int) -> VertexKey:
    """Local signature of vertex v for the multiplicity oracle."""
    degrees: list[int] = []
    psi: list[int] = []
    for i in c.vertex_ends[v]:
        degrees.append(p.x[i - 1])
        psi.append(p.e[i - 1])
    for a, b, w in c.edges:
        if not isinstance(w, int):
            raise CoverError("vertex keys need numeric edge weights")
        if b == v:
            degrees.append(w)
            psi.append(0)
        if a == v:
            degrees.append(-w)
            psi.append(0)
    return VertexKey(genus=c.vertex_genus[v], k=p.k,
                     degrees=tuple(degrees), psi=tuple(psi))


@dataclass(frozen=True)
class WeightedCover:
    """A cover with its assembled exact multiplicity and the factors behind it."""

    cover: CoverGraph
    aut: int
    edge_product: Union[Fraction, Poly]
    vertex_mults: tuple[Fraction, ...]
    multiplicity: Union[Fraction, Poly]


def assemble_multiplicity(p: Problem, c: CoverGraph,
                          oracle: Callable[[VertexKey], Fraction]) -> WeightedCover:
    """multiplicity = (1 / aut) * prod(edge weights) * prod(vertex mults)."""
    aut = automorphism_order(c)
    if c.is_symbolic():
        if any(g != 0 for g in c.vertex_genus):
            raise CoverError("symbolic covers support genus-0 vertices only")
        edge_product: Union[Fraction, Poly] = Poly.const(p.n, 1)
        for _, _, w in c.edges:
            form = w if isinstance(w, LinForm) else LinForm.constant(w)
            edge_product = edge_product * form.as_poly(p.n, p.k)
        mults = tuple(
            genus0_vertex_mult(c.valence(v),
                               tuple(p.e[i - 1] for i in c.vertex_ends[v]))
            for v in range(c.num_vertices))
    else:
        edge_product = Fraction(1)
        for _, _, w in c.edges:
            edge_product *= w
        mults = tuple(oracle(vertex_key_of(p, c, v))
                      for v in range(c.num_vertices))
    scalar = Fraction(1, aut)
    for m in mults:
        scalar *= m
    return WeightedCover(cover=c, aut=aut, edge_product=edge_product,
                         vertex_mults=mults,
                         multiplicity=edge_product * scalar)


def cover_to_json(c: CoverGraph) -> dict:
    return {
        "vertices": [{"genus": g, "ends": list(ends)}
                     for g, ends in zip(c.vertex_genus, c.vertex_ends)],
        "edges": [{"from": a, "to": b,
                   "weight": w if isinstance(w, int) else w.to_json()}
                  for a, b, w in c.edges],
        "order": list(c.order),
    }


def cover_from_json(data: dict) -> CoverGraph:
    vertices = data["vertices"]
    edges = []
    for e in data["edges"]:
        w = e["weight"]
        edges.append((e["from"], e["to"],
                      w if isinstance(w, int) else LinForm.from_json(w)))
    return CoverGraph(
        vertex_genus=tuple(v["genus"] for v in vertices),
        vertex_ends=tuple(tuple(sorted(v["ends"])) for v in vertices),
        edges=tuple(edges),
        order=tuple(data["order"]),
    )


def weighted_cover_to_json(wc: WeightedCover) -> dict:
    def value(v):
        return rat_str(v) if isinstance(v, Fraction) else str(v)

    out = cover_to_json(wc.cover)
    out["aut"] = wc.aut
    out["edge_product"] = value(wc.edge_product)
    out["vertex_mults"] = [rat_str(m) for m in wc.vertex_mults]
    out["multiplicity"] = value(wc.multiplicity)
    return out
