"""Genus-0 chamber polynomials, walls, wall crossings, and the vanishing test.

For genus 0 every cover is a tree, each tree edge weight is the affine form
delta_I = sum_{i in I} x_i - k (|I| - 1) of the marking split I it induces,
and the count is polynomial on every chamber cut out by those forms.  The
chamber polynomial sums, over all tree types, the number of vertex
interlacings times the product of the (sign-corrected) weight forms times
the vertex multinomials, and is normalized by eliminating x_n against the
degree constraint.

Crossing a wall delta = 0 changes the polynomial by

    binom(r; r1, r2) * delta * P_I * P_Ic

where P_I and P_Ic are chamber polynomials of the two cut-off subproblems
carrying the severed edge as an extra marking of weight -delta (on the I
side) and +delta (on the complement), the unique signs meeting each factor's
degree constraint.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .covers import Problem, ProblemError, validate_problem
from .enumeration import (CombinatorialType, count_linear_extensions,
                          _types_for, solve_weights_tree)
from .exactarith import LinForm, Poly
from .vertexdata import genus0_vertex_mult

ZERO = "Zero"
POSITIVE = "Positive"


class WallError(ValueError):
    """A reference point on a wall, or flanking points straddling extra walls."""


@dataclass(frozen=True)
class Wall:
    """A potential discontinuity locus sum_{i in I} x_i = k (|I| - 1).

    The stored subset is the lexicographically smaller of I and its
    complement; the form keeps k symbolic.
    """

    subset: tuple[int, ...]
    form: LinForm

    @staticmethod
    def of(n: int, subset: Sequence[int]) -> "Wall":
        I = tuple(sorted(set(subset)))
        if not 2 <= len(I) <= n - 2:
            raise WallError(f"wall subset {I} must have size 2..{n - 2}")
        if any(i < 1 or i > n for i in I):
            raise WallError(f"wall subset {I} out of range 1..{n}")
        comp = tuple(i for i in range(1, n + 1) if i not in I)
        if comp < I:
            I = comp
        return Wall(I, LinForm.of({i: 1 for i in I}, k=-(len(I) - 1)))


def walls(n: int, k: int = 0, e: Sequence[int] | None = None) -> list[Wall]:
    """All walls for n markings; k and e do not affect the locus list."""
    if e is not None and len(e) != n:
        raise ProblemError(f"psi vector length {len(e)} != n = {n}")
    seen: dict[tuple[int, ...], Wall] = {}
    for size in range(2, n - 1):
        for subset in itertools.combinations(range(1, n + 1), size):
            w = Wall.of(n, subset)
            seen.setdefault(w.subset, w)
    return [seen[key] for key in sorted(seen)]


@dataclass(frozen=True)
class Chamber:
    """A chamber certificate: a reference point and the sign it gives every
    tree weight form of the problem (flattened over the tree system)."""

    point: tuple
    signs: tuple[int, ...]


def chamber_at(p: Problem, at: Sequence | None = None) -> Chamber:
    """Certificate of the chamber containing the reference point.

    Two generic points lie in the same chamber exactly when their
    certificates carry equal signs, in which case their counts agree with
    one polynomial.
    """
    validate_problem(p)
    if p.genus != 0:
        raise ValueError("chambers exist for genus 0 only")
    x0 = tuple(p.x) if at is None else tuple(at)
    _check_generic(p, x0)
    system = _tree_system(p.n, p.e)
    signs = []
    for _, forms, _ in system.entries:
        signs.extend(1 if f.evaluate(x0, p.k) > 0 else -1 for f in forms)
    return Chamber(point=x0, signs=tuple(signs))


class _TreeSystem:
    """Tree types of a genus-0 problem with solved weight forms.

    The per-(k, orientation) linear-extension counts and form products are
    memoized; they are reused across every evaluation point.
    """

    def __init__(self, n: int, e: tuple[int, ...]):
        self.n = n
        reference = Problem.of(0, 0, (0,) * n, e)  # only types(g, n, e) matter
        self.entries: list[tuple[CombinatorialType, tuple[LinForm, ...], Fraction]] = []
        for t in _types_for(0, n, e):
            forms = solve_weights_tree(reference, t)
            mult = Fraction(1)
            for v in range(t.num_vertices):
                mult *= genus0_vertex_mult(
                    t.valence(v), tuple(e[i - 1] for i in t.vertex_ends[v]))
            self.entries.append((t, forms, mult))
        self._cache: dict[tuple, tuple[int, Poly]] = {}

    def contribution(self, idx: int, signs: tuple[int, ...], k: int) -> tuple[int, Poly]:
        key = (idx, signs, k)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        t, forms, mult = self.entries[idx]
        arcs = [(a, b) if s > 0 else (b, a)
                for (a, b), s in zip(t.edges, signs)]
        le = count_linear_extensions(t.num_vertices, arcs)
        product = Poly.const(self.n, mult)
        if le:
            for form, s in zip(forms, signs):
                signed = form if s > 0 else -form
                product = product * signed.as_poly(self.n, k)
        result = (le, product)
        self._cache[key] = result
        return result


_SYSTEMS: dict[tuple[int, tuple[int, ...]], _TreeSystem] = {}


def _tree_system(n: int, e: tuple[int, ...]) -> _TreeSystem:
    key = (n, e)
    system = _SYSTEMS.get(key)
    if system is None:
        system = _TreeSystem(n, e)
        _SYSTEMS[key] = system
    return system


def _check_generic(p: Problem, x0: Sequence) -> None:
    for w in walls(p.n):
        if w.form.evaluate(x0, p.k) == 0:
            raise WallError(
                f"reference point {list(x0)} lies on the wall {list(w.subset)}")


def chamber_polynomial(p: Problem, at: Sequence | None = None) -> Poly:
    """Chamber polynomial at the reference point (p.x by default), in normal
    form with x_n eliminated.

    The reference may have rational entries; it only selects the chamber.
    Evaluating the result at any integer point of the chamber equals the
    cover count there.
    """
    validate_problem(p)
    if p.genus != 0:
        raise ValueError("chamber polynomials exist for genus 0 only")
    x0 = tuple(p.x) if at is None else tuple(at)
    if len(x0) != p.n:
        raise ValueError(f"reference point has length {len(x0)}, expected {p.n}")
    expected = p.k * (p.n - 2)
    if sum(x0) != expected:
        raise ValueError(
            f"reference point off the degree hyperplane: sum = {sum(x0)}, "
            f"expected {expected}")
    _check_generic(p, x0)
    system = _tree_system(p.n, p.e)
    total = Poly.zero(p.n)
    for idx, (t, forms, _) in enumerate(system.entries):
        values = [f.evaluate(x0, p.k) for f in forms]
        signs = tuple(1 if v > 0 else -1 for v in values)
        le, product = system.contribution(idx, signs, p.k)
        if le:
            total = total + product * le
    return total.substitute_degree(expected)


def _flank_candidate(p: Problem, wall: Wall, attempt: int):
    """One deterministic candidate pair of integer points across the wall."""
    n, k = p.n, p.k
    rng = random.Random(f"flank:{n}:{k}:{wall.subset}:{attempt}")
    spread = 6 + 2 * attempt
    I = wall.subset
    comp = tuple(i for i in range(1, n + 1) if i not in I)
    a, b = I[0], comp[0]
    z = [0] * n
    for i in range(1, n + 1):
        if i not in (a, b):
            z[i - 1] = rng.randint(-spread, spread)
    z[a - 1] = k * (len(I) - 1) - sum(z[i - 1] for i in I if i != a)
    z[b - 1] = k * (n - 2) - sum(z[i - 1] for i in range(1, n + 1) if i != b)
    x_plus = list(z)
    x_minus = list(z)
    x_plus[a - 1] += 1
    x_plus[b - 1] -= 1
    x_minus[a - 1] -= 1
    x_minus[b - 1] += 1
    return z, tuple(x_plus), tuple(x_minus)


def _subproblem_refs(p: Problem, wall: Wall, z, x_plus):
    """Reference points for the two cut-off subproblems near the wall.

    Returns None when the induced points are non-generic for the
    subproblems or drift across a subproblem wall between the wall point
    and the perturbed point.
    """
    n, k = p.n, p.k
    I = wall.subset
    comp = tuple(i for i in range(1, n + 1) if i not in I)
    delta_plus = wall.form.evaluate(x_plus, k)
    refs = []
    for part, cut_sign in ((I, -1), (comp, 1)):
        limit = tuple(z[i - 1] for i in part) + (0,)
        ref = tuple(x_plus[i - 1] for i in part) + (cut_sign * delta_plus,)
        m = len(part) + 1
        if m >= 4:
            for w in walls(m):
                at_limit = w.form.evaluate(limit, k)
                at_ref = w.form.evaluate(ref, k)
                if at_limit == 0 or at_ref == 0 or (at_limit > 0) != (at_ref > 0):
                    return None
        refs.append(ref)
    return refs


def _find_flanking(p: Problem, wall: Wall):
    all_walls = walls(p.n)
    for attempt in range(400):
        z, x_plus, x_minus = _flank_candidate(p, wall, attempt)
        ok = True
        for w in all_walls:
            if w.subset == wall.subset:
                continue
            vp = w.form.evaluate(x_plus, p.k)
            vm = w.form.evaluate(x_minus, p.k)
            if vp == 0 or vm == 0 or (vp > 0) != (vm > 0):
                ok = False
                break
        if not ok:
            continue
        refs = _subproblem_refs(p, wall, z, x_plus)
        if refs is None:
            continue
        return x_plus, x_minus, refs
    raise WallError(f"no generic flanking points found for wall {wall.subset}")


def flanking_points(p: Problem, wall: Wall) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Deterministic generic integer points with delta = +1 and -1 that agree
    in sign on every other wall and induce generic subproblem references."""
    x_plus, x_minus, _ = _find_flanking(p, wall)
    return x_plus, x_minus


def wall_crossing(p: Problem, wall: Wall,
                  x_plus: Sequence | None = None,
                  x_minus: Sequence | None = None) -> Poly:
    """Difference of the chamber polynomials flanking the wall, normal form.

    When the flanking points are supplied they must straddle this wall only;
    otherwise suitable points are derived from the wall itself.
    """
    validate_problem(p)
    if p.genus != 0:
        raise ValueError("wall crossings are computed for genus 0 only")
    if (x_plus is None) != (x_minus is None):
        raise WallError("supply both flanking points or neither")
    if x_plus is None:
        x_plus, x_minus = flanking_points(p, wall)
    dp = wall.form.evaluate(x_plus, p.k)
    dm = wall.form.evaluate(x_minus, p.k)
    if not (dp > 0 > dm):
        raise WallError(
            f"flanking points must satisfy delta(x+) > 0 > delta(x-), "
            f"got {dp} and {dm}")
    for w in walls(p.n):
        if w.subset == wall.subset:
            continue
        vp = w.form.evaluate(x_plus, p.k)
        vm = w.form.evaluate(x_minus, p.k)
        if vp == 0 or vm == 0:
            raise WallError(f"flanking point lies on the wall {list(w.subset)}")
        if (vp > 0) != (vm > 0):
            raise WallError(
                f"flanking points straddle the extra wall {list(w.subset)}")
    plus = chamber_polynomial(p, at=x_plus)
    minus = chamber_polynomial(p, at=x_minus)
    return plus - minus


def wall_crossing_formula(p: Problem, wall: Wall) -> Poly:
    """Closed form binom(r; r1, r2) * delta * P_I * P_Ic, in normal form."""
    validate_problem(p)
    if p.genus != 0:
        raise ValueError("wall crossings are computed for genus 0 only")
    n, k = p.n, p.k
    I = wall.subset
    comp = tuple(i for i in range(1, n + 1) if i not in I)
    e_I = sum(p.e[i - 1] for i in I)
    e_comp = sum(p.e[i - 1] for i in comp)
    r = n - 2 - p.psi_total
    r1 = len(I) - 1 - e_I
    r2 = len(comp) - 1 - e_comp
    # r1 counts the vertices of the cut-off piece on the I side; without a
    # vertex to carry the severed edge that side admits no covers at all.
    if r1 < 1 or r2 < 1:
        return Poly.zero(n - 1)

    _, _, refs = _find_flanking(p, wall)

    factors: list[Poly] = []
    for part, ref in zip((I, comp), refs):
        sub_e = tuple(p.e[i - 1] for i in part) + (0,)
        sub_problem = Problem.of(0, k, ref, sub_e)
        sub_poly = chamber_polynomial(sub_problem)
        # the normal form dropped the cut variable, so substituting the
        # surviving markings alone reproduces the factor exactly
        factors.append(sub_poly.compose([Poly.variable(n, i) for i in part]))

    delta_poly = wall.form.as_poly(n, k)
    coeff = Fraction(math.factorial(r),
                     math.factorial(r1) * math.factorial(r2))
    product = delta_poly * factors[0] * factors[1] * coeff
    return product.substitute_degree(k * (n - 2))


def _vanishing_subset_scan(m: Sequence[int], e: Sequence[int]) -> bool:
    """True when sum_I e_i < sum_I m_i - |I| + 1 for every subset I.

    The worst subset collects the indices with positive excess
    e_i - m_i + 1, so the scan reduces to a single pass.
    """
    excess = 0
    for mi, ei in zip(m, e):
        excess += max(0, ei - mi + 1)
    return excess == 0


def classify(p: Problem) -> str:
    """Decide whether the genus-0 count is Zero or strictly Positive."""
    validate_problem(p)
    if p.genus != 0:
        raise ValueError("the vanishing classification applies to genus 0 only")
    if p.k == 0:
        if all(v == 0 for v in p.x) and p.n > p.psi_total + 3:
            return ZERO
        return POSITIVE
    q = p if p.k > 0 else p.turned_around()
    if q.k % 2 != 0:
        return POSITIVE
    half = q.k // 2
    m = []
    for v in q.x:
        if v <= 0 or v % half != 0:
            return POSITIVE
        m.append(v // half)
    return ZERO if _vanishing_subset_scan(m, q.e) else POSITIVE
