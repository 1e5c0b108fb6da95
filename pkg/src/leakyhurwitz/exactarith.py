"""Exact scalars, integer affine-linear forms, and sparse rational polynomials.

Rational values are plain ``fractions.Fraction`` objects; the helpers here
pin down the canonical ``"p/q"`` string format used everywhere else (the
denominator is omitted when it equals 1).

A :class:`LinForm` is an integer-coefficient affine expression in profile
variables x1..xn plus the leak parameter k.  Edge weights of symbolic covers
are stored in this shape, so evaluating one at an integer point always gives
an integer.

A :class:`Poly` is a sparse multivariate polynomial over the rationals,
stored as a dict from exponent tuples to nonzero Fraction coefficients (the
zero polynomial stores no terms).  Profiles live on the hyperplane
x1 + ... + xn = total for a problem-specific integer, so polynomial
identities are only meaningful modulo that relation; ``substitute_degree``
eliminates the last variable against it and serves as the canonical normal
form for equality checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


def rat(num: int, den: int = 1) -> Fraction:
    """Build a reduced rational, rejecting a zero denominator."""
    if den == 0:
        raise ZeroDivisionError("rational with zero denominator")
    return Fraction(num, den)


def rat_str(value: Fraction | int) -> str:
    """Render a rational as "p/q", omitting "/q" when the denominator is 1."""
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_rat(text: str) -> Fraction:
    """Parse the "p/q" (or bare "p") format produced by :func:`rat_str`."""
    return Fraction(text.strip())


@dataclass(frozen=True)
class LinForm:
    """Affine-linear form  sum_i coeff_i * x_i + k_coeff * k + const.

    ``coeffs`` holds (variable index, coefficient) pairs with 1-based
    indices, sorted, and never stores a zero coefficient.
    """

    coeffs: tuple[tuple[int, int], ...] = ()
    k_coeff: int = 0
    const: int = 0

    @staticmethod
    def of(coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = (),
           k: int = 0, const: int = 0) -> "LinForm":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        merged: dict[int, int] = {}
        for i, c in items:
            if i < 1:
                raise ValueError(f"variable index {i} must be >= 1")
            merged[i] = merged.get(i, 0) + c
        cleaned = tuple(sorted((i, c) for i, c in merged.items() if c != 0))
        return LinForm(cleaned, k, const)

    @staticmethod
    def variable(i: int) -> "LinForm":
        return LinForm.of({i: 1})

    @staticmethod
    def constant(c: int) -> "LinForm":
        return LinForm((), 0, c)

    def coeff(self, i: int) -> int:
        for j, c in self.coeffs:
            if j == i:
                return c
        return 0

    def __add__(self, other: "LinForm") -> "LinForm":
        merged = dict(self.coeffs)
        for i, c in other.coeffs:
            merged[i] = merged.get(i, 0) + c
        return LinForm.of(merged, self.k_coeff + other.k_coeff,
                          self.const + other.const)

    def __sub__(self, other: "LinForm") -> "LinForm":
        return self + (-other)

    def __neg__(self) -> "LinForm":
        return LinForm(tuple((i, -c) for i, c in self.coeffs),
                       -self.k_coeff, -self.const)

    def scale(self, factor: int) -> "LinForm":
        if factor == 0:
            return LinForm()
        return LinForm(tuple((i, c * factor) for i, c in self.coeffs),
                       self.k_coeff * factor, self.const * factor)

    def is_zero(self) -> bool:
        return not self.coeffs and self.k_coeff == 0 and self.const == 0

    def evaluate(self, x: Sequence[int | Fraction], k: int | Fraction):
        """Evaluate at a profile and leak; x must cover all indices used."""
        total = self.const + self.k_coeff * k
        for i, c in self.coeffs:
            if i > len(x):
                raise IndexError(
                    f"form uses x{i} but profile has length {len(x)}")
            total += c * x[i - 1]
        return total

    def max_index(self) -> int:
        return self.coeffs[-1][0] if self.coeffs else 0

    def as_poly(self, nvars: int, k_value: int) -> "Poly":
        """Convert to a polynomial in x1..x_nvars with k substituted."""
        p = Poly.const(nvars, Fraction(self.const + self.k_coeff * k_value))
        for i, c in self.coeffs:
            p = p + Poly.variable(nvars, i) * Fraction(c)
        return p

    def to_json(self) -> dict:
        return {"x": {str(i): c for i, c in self.coeffs},
                "k": self.k_coeff, "const": self.const}

    @staticmethod
    def from_json(data: dict) -> "LinForm":
        return LinForm.of({int(i): c for i, c in data.get("x", {}).items()},
                          data.get("k", 0), data.get("const", 0))

    def __str__(self) -> str:
        parts: list[str] = []
        for i, c in self.coeffs:
            parts.append(_term_str(c, f"x{i}", not parts))
        if self.k_coeff:
            parts.append(_term_str(self.k_coeff, "k", not parts))
        if self.const or not parts:
            parts.append(_term_str(self.const, "", not parts))
        return "".join(parts)


def linform_eval(form: LinForm, x: Sequence[int], k: int) -> int:
    """Evaluate an integer form at an integer point; the result is an int."""
    value = form.evaluate(x, k)
    return int(value)


def _term_str(coeff, symbol: str, first: bool) -> str:
    sign = "-" if coeff < 0 else ("" if first else "+")
    sep = "" if first else " "
    lead = f"{sep}{sign}" if first else f" {sign} "
    mag = abs(coeff)
    if not symbol:
        return f"{lead}{mag}"
    if mag == 1:
        return f"{lead}{symbol}"
    return f"{lead}{mag}*{symbol}"


class Poly:
    """Sparse polynomial in x1..x_nvars with Fraction coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.nvars = nvars
        cleaned: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                if len(exp) != nvars:
                    raise ValueError(f"exponent {exp} does not have {nvars} entries")
                c = Fraction(coeff)
                if c != 0:
                    cleaned[tuple(exp)] = c
        self.terms = cleaned

    @staticmethod
    def zero(nvars: int) -> "Poly":
        return Poly(nvars)

    @staticmethod
    def const(nvars: int, value: Fraction | int) -> "Poly":
        c = Fraction(value)
        if c == 0:
            return Poly(nvars)
        return Poly(nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(nvars: int, i: int) -> "Poly":
        """The polynomial x_i, with 1-based index i."""
        if not 1 <= i <= nvars:
            raise ValueError(f"variable index {i} out of range 1..{nvars}")
        exp = [0] * nvars
        exp[i - 1] = 1
        return Poly(nvars, {tuple(exp): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            out[exp] = out.get(exp, Fraction(0)) + coeff
        return Poly(self.nvars, out)

    def __radd__(self, other) -> "Poly":
        return self + other

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {exp: -c for exp, c in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return Poly(self.nvars, {exp: c * f for exp, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        if self.nvars != other.nvars:
            raise ValueError("polynomials in different variable counts")
        out: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exp = tuple(i + j for i, j in zip(ea, eb))
                out[exp] = out.get(exp, Fraction(0)) + ca * cb
        return Poly(self.nvars, out)

    def __rmul__(self, other) -> "Poly":
        return self * other

    def __pow__(self, power: int) -> "Poly":
        if power < 0:
            raise ValueError("negative power")
        result = Poly.const(self.nvars, 1)
        for _ in range(power):
            result = result * self
        return result

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials in different variable counts")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        raise TypeError(f"cannot combine Poly with {type(other)!r}")

    def total_degree(self) -> int:
        """Total degree; the zero polynomial reports 0."""
        if not self.terms:
            return 0
        return max(sum(exp) for exp in self.terms)

    def eval(self, values: Sequence[int | Fraction]) -> Fraction:
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(values)}")
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            term = coeff
            for e, v in zip(exp, values):
                if e:
                    term *= Fraction(v) ** e
            total += term
        return total

    def substitute_degree(self, total: int) -> "Poly":
        """Eliminate the last variable against x1 + ... + xn = total.

        Returns the normal form in one fewer variable, the canonical
        representative of this polynomial on the degree hyperplane.
        """
        n = self.nvars
        if n < 1:
            raise ValueError("no variable to eliminate")
        m = n - 1
        # x_n = total - x_1 - ... - x_{n-1}
        last = Poly.const(m, total)
        for i in range(1, m + 1):
            last = last - Poly.variable(m, i)
        max_pow = max((exp[-1] for exp in self.terms), default=0)
        powers = [Poly.const(m, 1)]
        for _ in range(max_pow):
            powers.append(powers[-1] * last)
        out = Poly.zero(m)
        for exp, coeff in self.terms.items():
            base = Poly(m, {exp[:-1]: coeff})
            out = out + base * powers[exp[-1]]
        return out

    def compose(self, args: Sequence["Poly"]) -> "Poly":
        """Substitute args[i] for variable x_{i+1}; args share a variable space."""
        if len(args) != self.nvars:
            raise ValueError(f"expected {self.nvars} substitution polynomials")
        if not args:
            raise ValueError("compose needs at least one variable")
        m = args[0].nvars
        for a in args:
            if a.nvars != m:
                raise ValueError("substitution polynomials in different variable counts")
        out = Poly.zero(m)
        cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            key = (i, e)
            if key not in cache:
                if e == 0:
                    cache[key] = Poly.const(m, 1)
                else:
                    cache[key] = power(i, e - 1) * args[i]
            return cache[key]

        for exp, coeff in self.terms.items():
            term = Poly.const(m, coeff)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def to_terms(self) -> list[dict]:
        """Term list sorted by exponent tuple, with "p/q" coefficients."""
        return [{"exp": list(exp), "coeff": rat_str(self.terms[exp])}
                for exp in sorted(self.terms)]

    @staticmethod
    def from_terms(nvars: int, terms: Iterable[dict]) -> "Poly":
        data = {tuple(t["exp"]): parse_rat(t["coeff"]) for t in terms}
        return Poly(nvars, data)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ordered = sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e)))
        parts: list[str] = []
        for exp in ordered:
            coeff = self.terms[exp]
            symbol = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                for i, e in enumerate(exp) if e)
            if symbol:
                if abs(coeff) == 1:
                    body = symbol
                else:
                    body = f"{rat_str(abs(coeff))}*{symbol}"
            else:
                body = rat_str(abs(coeff))
            if not parts:
                parts.append(f"-{body}" if coeff < 0 else body)
            else:
                parts.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self})"
