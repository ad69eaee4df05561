"""Exact multigraded polynomials over the rationals.

A polynomial lives on an Ambient (a projective space or a product of two),
and is stored as a map from exponent vectors to exact coefficients.  Each
variable carries a multidegree that is a standard basis vector of Z^g, where
g is the number of projective factors, so homogeneity is decidable per term.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from math import comb

from ..errors import AmbientMismatchError

_NAME_RE = re.compile(r"\A[a-z][0-9]*\Z")

MultiDegree = tuple  # tuple[int, ...], one entry per projective factor


@dataclass(frozen=True)
class Ambient:
    """A projective space P^n or a product P^{n1} x P^{n2} with named coordinates."""

    groups: tuple  # tuple of tuples of variable names, one tuple per factor

    def __post_init__(self):
        names = [v for g in self.groups for v in g]
        if len(set(names)) != len(names):
            raise ValueError("ambient variable names must be distinct")
        for v in names:
            if not _NAME_RE.match(v):
                raise ValueError(f"variable name {v!r} does not match [a-z][0-9]*")
        for g in self.groups:
            if len(g) < 2:
                raise ValueError("each projective factor needs at least 2 coordinates")

    @staticmethod
    def projective(n: int, names=None) -> "Ambient":
        if names is None:
            names = tuple(f"x{i}" for i in range(n + 1))
        names = tuple(names)
        if len(names) != n + 1:
            raise ValueError("expected n+1 variable names")
        return Ambient((names,))

    @staticmethod
    def product_projective(n1: int, n2: int, names=None) -> "Ambient":
        if names is None:
            names = (
                tuple(f"x{i}" for i in range(n1 + 1)),
                tuple(f"y{i}" for i in range(n2 + 1)),
            )
        g1, g2 = tuple(names[0]), tuple(names[1])
        if len(g1) != n1 + 1 or len(g2) != n2 + 1:
            raise ValueError("variable name counts do not match dimensions")
        return Ambient((g1, g2))

    @property
    def arity(self) -> int:
        return len(self.groups)

    @property
    def dims(self) -> tuple:
        return tuple(len(g) - 1 for g in self.groups)

    @property
    def dim(self) -> int:
        return sum(self.dims)

    @property
    def variables(self) -> tuple:
        return tuple(v for g in self.groups for v in g)

    @property
    def nvars(self) -> int:
        return sum(len(g) for g in self.groups)

    def var_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise AmbientMismatchError(f"no variable {name!r} in ambient") from None

    def group_of_var(self, idx: int) -> int:
        for g, names in enumerate(self.groups):
            if idx < len(names):
                return g
            idx -= len(names)
        raise IndexError(idx)

    def group_slices(self):
        out, start = [], 0
        for g in self.groups:
            out.append((start, start + len(g)))
            start += len(g)
        return out

    def zero_degree(self) -> MultiDegree:
        return (0,) * self.arity

    def normalize_degree(self, d) -> MultiDegree:
        """Accept an int for arity-1 ambients; always return a tuple."""
        if isinstance(d, int):
            if self.arity != 1:
                raise AmbientMismatchError("scalar degree on a product ambient")
            return (d,)
        d = tuple(int(c) for c in d)
        if len(d) != self.arity:
            raise AmbientMismatchError(
                f"degree {d} has {len(d)} components, ambient has {self.arity}"
            )
        return d

    def exponent_multidegree(self, exps: tuple) -> MultiDegree:
        """Multidegree of a monomial given by its exponent vector."""
        out = []
        for lo, hi in self.group_slices():
            out.append(sum(exps[lo:hi]))
        return tuple(out)


def mdeg_add(a: MultiDegree, b: MultiDegree) -> MultiDegree:
    return tuple(x + y for x, y in zip(a, b))


def mdeg_sub(a: MultiDegree, b: MultiDegree) -> MultiDegree:
    return tuple(x - y for x, y in zip(a, b))


def mdeg_neg(a: MultiDegree) -> MultiDegree:
    return tuple(-x for x in a)


def mdeg_leq(a: MultiDegree, b: MultiDegree) -> bool:
    """Componentwise partial order."""
    return all(x <= y for x, y in zip(a, b))


class GaussianRational:
    """a + b*i with exact rational a, b.  Extension hook for reality checks."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @property
    def imag(self):
        return self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return self.im == 0 and self.re == other

    def __hash__(self):
        return hash((self.re, self.im))

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        return GaussianRational(other)

    def __add__(self, other):
        o = self._coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


def _coeff(value):
    """Normalize a coefficient: exact rationals stay exact, ints are lifted."""
    if isinstance(value, (Fraction, GaussianRational)):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"unsupported coefficient type {type(value).__name__}")


@dataclass(frozen=True, eq=False)
class RationalPolynomial:
    """Sparse exact polynomial: exponent vector -> nonzero coefficient."""

    ambient: Ambient
    terms: dict

    @staticmethod
    def zero(ambient: Ambient) -> "RationalPolynomial":
        return RationalPolynomial(ambient, {})

    @staticmethod
    def constant(ambient: Ambient, value) -> "RationalPolynomial":
        c = _coeff(value)
        if not c:
            return RationalPolynomial.zero(ambient)
        return RationalPolynomial(ambient, {(0,) * ambient.nvars: c})

    @staticmethod
    def variable(ambient: Ambient, name: str) -> "RationalPolynomial":
        i = ambient.var_index(name)
        e = [0] * ambient.nvars
        e[i] = 1
        return RationalPolynomial(ambient, {tuple(e): Fraction(1)})

    @staticmethod
    def monomial(ambient: Ambient, exps, coeff=1) -> "RationalPolynomial":
        c = _coeff(coeff)
        if not c:
            return RationalPolynomial.zero(ambient)
        exps = tuple(int(e) for e in exps)
        if len(exps) != ambient.nvars or any(e < 0 for e in exps):
            raise ValueError("bad exponent vector")
        return RationalPolynomial(ambient, {exps: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, RationalPolynomial):
            return self.ambient == other.ambient and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == RationalPolynomial.constant(self.ambient, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ambient, frozenset(self.terms.items())))

    def _check_same_ambient(self, other):
        if self.ambient != other.ambient:
            raise AmbientMismatchError("polynomials on different ambients")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = RationalPolynomial.constant(self.ambient, other)
        self._check_same_ambient(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return RationalPolynomial(self.ambient, terms)

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(self.ambient, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = RationalPolynomial.constant(self.ambient, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            c0 = _coeff(other)
            if not c0:
                return RationalPolynomial.zero(self.ambient)
            return RationalPolynomial(self.ambient, {e: c * c0 for e, c in self.terms.items()})
        self._check_same_ambient(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return RationalPolynomial(self.ambient, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        out = RationalPolynomial.constant(self.ambient, 1)
        for _ in range(n):
            out = out * self
        return out

    def homogeneous_multidegree(self):
        """The common multidegree of all terms, or None if mixed.  Zero -> (0,..,0)."""
        deg = None
        for e in self.terms:
            d = self.ambient.exponent_multidegree(e)
            if deg is None:
                deg = d
            elif d != deg:
                return None
        return deg if deg is not None else self.ambient.zero_degree()

    def is_homogeneous_of(self, d) -> bool:
        """Zero is homogeneous of every multidegree."""
        if not self.terms:
            return True
        d = self.ambient.normalize_degree(d)
        return all(self.ambient.exponent_multidegree(e) == d for e in self.terms)

    def coefficient(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def substitute(self, assignment: dict, result_ambient: Ambient) -> "RationalPolynomial":
        """Substitute some variables by constants or polynomials on result_ambient.

        Unsubstituted variables must exist (by name) in result_ambient.
        """
        values = {}
        for name, val in assignment.items():
            self.ambient.var_index(name)  # raises AmbientMismatchError if absent
            if isinstance(val, RationalPolynomial):
                if val.ambient != result_ambient:
                    raise AmbientMismatchError("substituted value on wrong ambient")
                values[name] = val
            else:
                values[name] = RationalPolynomial.constant(result_ambient, val)
        out = RationalPolynomial.zero(result_ambient)
        names = self.ambient.variables
        for exps, c in self.terms.items():
            term = RationalPolynomial.constant(result_ambient, c)
            for name, e in zip(names, exps):
                if e == 0:
                    continue
                if name in values:
                    factor = values[name]
                else:
                    factor = RationalPolynomial.variable(result_ambient, name)
                term = term * factor ** e
            out = out + term
        return out

    def render(self) -> str:
        """Canonical printing; reparses to the same polynomial for integer coefficients."""
        if not self.terms:
            return "0"
        names = self.ambient.variables
        parts = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if isinstance(c, GaussianRational):
                raise ValueError("cannot render non-real coefficients")
            neg = c < 0
            a = -c if neg else c
            coeff_txt = None
            if a.denominator == 1:
                if a.numerator != 1 or not factors:
                    coeff_txt = str(a.numerator)
            else:
                coeff_txt = f"{a.numerator}/{a.denominator}"  # not in the input grammar
            mono = "*".join(([coeff_txt] if coeff_txt else []) + factors)
            parts.append(("-" if neg else "+", mono))
        sign, mono = parts[0]
        text = ("-" if sign == "-" else "") + mono
        for sign, mono in parts[1:]:
            text += f" {sign} {mono}"
        return text

    def __repr__(self):
        return f"<poly {self.render()}>"


def monomial_basis(ambient: Ambient, d) -> list:
    """All exponent vectors of multidegree d, graded-lexicographic per factor.

    Within a factor the order is descending lexicographic on exponents, so on
    P^2 at d=1 the basis reads x0, x1, x2.  Empty when any component of d is
    negative.
    """
    d = ambient.normalize_degree(d)
    if any(c < 0 for c in d):
        return []
    per_group = []
    for names, deg in zip(ambient.groups, d):
        per_group.append(_exponents_of_degree(len(names), deg))
    return [tuple(x for part in combo for x in part) for combo in iter_product(*per_group)]


def _exponents_of_degree(nvars: int, d: int) -> list:
    if nvars == 1:
        return [(d,)]
    out = []
    for e in range(d, -1, -1):
        for rest in _exponents_of_degree(nvars - 1, d - e):
            out.append((e,) + rest)
    return out


def monomial_count(ambient: Ambient, d) -> int:
    """|monomial_basis| in closed form: prod of C(n_i + d_i, n_i)."""
    d = ambient.normalize_degree(d)
    if any(c < 0 for c in d):
        return 0
    total = 1
    for n, deg in zip(ambient.dims, d):
        total *= comb(n + deg, n)
    return total


def intersection_product(ambient: Ambient, d1, d2) -> int:
    """Intersection number of two divisor classes on a surface ambient."""
    d1 = ambient.normalize_degree(d1)
    d2 = ambient.normalize_degree(d2)
    if ambient.arity == 1 and ambient.dim == 2:
        return d1[0] * d2[0]
    if ambient.arity == 2 and ambient.dims == (1, 1):
        return d1[0] * d2[1] + d1[1] * d2[0]
    raise AmbientMismatchError("intersection form only defined on P2 and P1xP1")
