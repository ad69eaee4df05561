"""Intersection lattices of K3 surfaces and the quartic-surface pipeline.

Gram arithmetic and adjunction, effectivity obstruction certificates on
rank-2 lattices, expected moduli dimension, rigid rank-2 classification on
the double plane, cover-doubling of Chern data, and exact section kernels on
a quartic hypersurface's coordinate ring.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import (
    BasepointFailureError,
    HomogeneityError,
    LatticeMismatchError,
    OddSquareError,
    UnsupportedTwistError,
)
from .monad import ChernData
from .polycore import (
    Ambient,
    ExactMatrix,
    RationalPolynomial,
    bareiss_det,
    parse_poly,
)

# --- lattices -----------------------------------------------------------------


@dataclass(frozen=True)
class GramLattice:
    names: tuple
    gram: tuple  # tuple of tuples, symmetric integer matrix

    def __post_init__(self):
        n = len(self.names)
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        if len(g) != n or any(len(row) != n for row in g):
            raise ValueError("Gram matrix shape does not match basis")
        for i in range(n):
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.names)

    @property
    def det(self) -> int:
        return bareiss_det([list(r) for r in self.gram])

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def cls(self, coords, name: str = "") -> "LatticeClass":
        return LatticeClass(self, tuple(int(c) for c in coords), name)

    def basis_class(self, i: int) -> "LatticeClass":
        coords = [0] * self.rank
        coords[i] = 1
        return self.cls(coords, self.names[i])


@dataclass(frozen=True)
class LatticeClass:
    lattice: GramLattice
    coords: tuple
    name: str = ""

    def __add__(self, other):
        _same_lattice(self, other)
        return LatticeClass(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        _same_lattice(self, other)
        return LatticeClass(self.lattice, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, n: int):
        return LatticeClass(self.lattice, tuple(n * a for a in self.coords))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


def _same_lattice(a: LatticeClass, b: LatticeClass):
    if a.lattice != b.lattice:
        raise LatticeMismatchError("classes live on different lattices")


def pair(D1: LatticeClass, D2: LatticeClass) -> int:
    _same_lattice(D1, D2)
    g = D1.lattice.gram
    return sum(
        D1.coords[i] * g[i][j] * D2.coords[j]
        for i in range(len(g))
        for j in range(len(g))
    )


def self_int(D: LatticeClass) -> int:
    return pair(D, D)


def genus(D: LatticeClass) -> int:
    """Adjunction on a K3: D^2 = 2g - 2."""
    sq = self_int(D)
    if sq % 2:
        raise OddSquareError(f"D^2 = {sq} is odd; not a class on an even lattice")
    return sq // 2 + 1


def gram_of(classes) -> tuple:
    """Gram matrix of the given classes and its exact determinant."""
    if not classes:
        return (), 1
    for c in classes[1:]:
        _same_lattice(classes[0], c)
    mat = tuple(tuple(pair(a, b) for b in classes) for a in classes)
    return mat, bareiss_det([list(r) for r in mat])


def dependency(classes) -> tuple:
    """A primitive integer vector in the kernel of the classes' Gram matrix.

    Requires the Gram determinant to vanish with a one-dimensional kernel; the
    returned coefficients (c_1..c_n) satisfy sum c_i (D_i . D_j) = 0 for all j,
    exhibiting the linear dependency among the classes.
    """
    mat, det = gram_of(classes)
    if det != 0:
        raise ValueError("classes are independent (nonzero Gram determinant)")
    rows = [[Fraction(x) for x in row] for row in mat]
    n = len(rows)
    # fraction Gaussian elimination to a row echelon form
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise ValueError("kernel is not one-dimensional")
    from math import gcd, lcm

    j = free[0]
    vec = [Fraction(0)] * n
    vec[j] = Fraction(1)
    for row, c in zip(rows, pivots):
        vec[c] = -row[j]
    denom = lcm(*(x.denominator for x in vec))
    ints = [int(x * denom) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if ints[j] < 0:
        ints = [-x for x in ints]
    return tuple(ints)


# catalogued lattices
def bracket(a: int, b: int, c: int, names=("A", "B")) -> GramLattice:
    """Rank-2 lattice with Gram [[a,b],[b,c]]."""
    return GramLattice(tuple(names), ((a, b), (b, c)))


def span1(a: int, name: str = "H") -> GramLattice:
    return GramLattice((name,), ((a,),))


U = bracket(0, 1, 0, names=("F1", "F2"))
U2 = bracket(0, 2, 0, names=("E1", "E2"))
DOUBLE_PLANE = span1(2, name="H")
QUARTIC_452 = bracket(4, 5, 2, names=("H", "C"))

_E8_GRAM = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, -1),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 0, 0, 2),
)
E8_MINUS = GramLattice(
    tuple(f"e{i}" for i in range(1, 9)),
    tuple(tuple(-x for x in row) for row in _E8_GRAM),
)


def k3_lattice() -> GramLattice:
    """U^3 ⊕ E8(-1)^2 as one 22x22 Gram matrix (context only)."""
    blocks = [U.gram] * 3 + [E8_MINUS.gram] * 2
    names = []
    for t in range(3):
        names += [f"u{t}a", f"u{t}b"]
    for t in range(2):
        names += [f"e{t}_{i}" for i in range(1, 9)]
    n = len(names)
    g = [[0] * n for _ in range(n)]
    ofs = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                g[ofs + i][ofs + j] = x
        ofs += len(b)
    return GramLattice(tuple(names), tuple(tuple(r) for r in g))


# --- cover specifications -------------------------------------------------------


@dataclass(frozen=True)
class CoverSpec:
    """A catalogued branched double cover with small class group."""

    family: str  # "double_plane_sextic" | "double_quadric_44" | "quartic"
    base: str  # "p2" | "p1xp1" | "none"
    pic_isomorphism: bool

    def __post_init__(self):
        allowed = {
            ("double_plane_sextic", "p2", True),
            ("double_quadric_44", "p1xp1", True),
            ("quartic", "none", False),
        }
        if (self.family, self.base, self.pic_isomorphism) not in allowed:
            raise ValueError("not a catalogued cover family")


DOUBLE_PLANE_COVER = CoverSpec("double_plane_sextic", "p2", True)
DOUBLE_QUADRIC_COVER = CoverSpec("double_quadric_44", "p1xp1", True)
QUARTIC_SURFACE = CoverSpec("quartic", "none", False)


# --- numerology -----------------------------------------------------------------


def expected_dim(r: int, c1_sq: int, c2: int) -> int:
    """Expected moduli dimension on a K3: 2rc2 - (r-1)c1^2 - (r^2-1)*chi(O), chi = 2."""
    if r < 1:
        raise ValueError("rank must be positive")
    return 2 * r * c2 - (r - 1) * c1_sq - (r * r - 1) * 2


def rigid_rank2_classes(k: int) -> tuple:
    """The unique family (x, y) with vanishing expected dimension on the double
    plane: c1 = x * (pullback of O(1)), c2 = y."""
    x = 2 * k + 1
    y = 2 + 2 * k + 2 * k * k
    assert expected_dim(2, 2 * x * x, y) == 0
    return x, y


def pullback_chern(c: ChernData) -> ChernData:
    """Chern data of the pullback along a double cover: c1 formal, c2 doubles."""
    return ChernData(c.rank, c.c1, 2 * c.c2)


def cover_c1_squared(base_c1_sq: int) -> int:
    return 2 * base_c1_sq


# --- effectivity obstructions ---------------------------------------------------


@dataclass(frozen=True)
class EffectivityCertificate:
    cls: tuple
    rule: str  # "zero-class" | "nonpositive-degree" | "no-decomposition"
    degree: int
    candidates: tuple = ()
    detail: str = ""


def curve_class_candidates(lattice: GramLattice, H: LatticeClass, max_degree: int) -> list:
    """All classes K with 1 <= K.H <= max_degree and K^2 >= -2.

    On a rank-2 lattice of signature (1,1) the classes of fixed degree form a
    line on which the square is a concave quadratic, so the enumeration per
    degree is finite; these are the only classes an irreducible curve can
    occupy (adjunction forces C^2 >= -2, ampleness forces C.H >= 1).
    """
    if lattice.rank != 2:
        raise ValueError("candidate enumeration implemented for rank-2 lattices")
    g = lattice.gram
    w = (
        g[0][0] * H.coords[0] + g[0][1] * H.coords[1],
        g[1][0] * H.coords[0] + g[1][1] * H.coords[1],
    )  # degree(a, b) = a*w0 + b*w1
    from math import gcd

    gw = gcd(w[0], w[1])
    out = []
    for delta in range(1, max_degree + 1):
        if delta % gw:
            continue
        base = _solve_linear(w, delta)
        direction = (-w[1] // gw, w[0] // gw)
        dd = _q(g, direction, direction)
        if dd >= 0:
            raise ValueError("lattice is not hyperbolic on the degree line")
        bd = _q(g, base, direction)
        bb = _q(g, base, base)
        # q(t) = bb + 2t*bd + t^2*dd is concave; integer solutions of q >= -2
        # form a contiguous range around the vertex -bd/dd
        q = lambda t: bb + 2 * t * bd + t * t * dd
        vertex = Fraction(-bd, dd)
        t0 = vertex.numerator // vertex.denominator
        t = t0
        while q(t) >= -2:
            out.append(((base[0] + t * direction[0], base[1] + t * direction[1]), delta, q(t)))
            t -= 1
        t = t0 + 1
        while q(t) >= -2:
            out.append(((base[0] + t * direction[0], base[1] + t * direction[1]), delta, q(t)))
            t += 1
    out.sort(key=lambda c: (c[1], c[0]))
    return [lattice.cls(c[0]) for c in out], [(c[0], c[1], c[2]) for c in out]


def _solve_linear(w, delta):
    """Some integer (a, b) with a*w0 + b*w1 = delta (delta divisible by gcd)."""
    a, b = _ext_gcd(w[0], w[1])
    g = w[0] * a + w[1] * b
    f = delta // g
    return (a * f, b * f)


def _ext_gcd(a, b):
    if b == 0:
        return (1 if a >= 0 else -1, 0)
    x, y = _ext_gcd(b, a % b)
    return (y, x - (a // b) * y)


def _q(g, u, v):
    return sum(u[i] * g[i][j] * v[j] for i in range(2) for j in range(2))


def not_effective_cert(D: LatticeClass, H: LatticeClass) -> EffectivityCertificate | None:
    """A soundness certificate that D is not the class of an effective divisor.

    Rules (each sound, none asserts effectivity):
      zero-class:         D = 0 is not a curve class;
      nonpositive-degree: effective nonzero classes have positive H-degree;
      no-decomposition:   no multiset of possible irreducible-curve classes
                          (square >= -2, degree in [1, D.H]) sums to D.
    Returns None (Unknown) when no rule applies.
    """
    _same_lattice(D, H)
    if self_int(H) <= 0:
        raise ValueError("H must have positive self-intersection")
    deg = pair(D, H)
    if D.is_zero():
        return EffectivityCertificate(D.coords, "zero-class", 0, detail="the zero class is not a curve class")
    if deg <= 0:
        return EffectivityCertificate(D.coords, "nonpositive-degree", deg)
    classes, raw = curve_class_candidates(D.lattice, H, deg)
    if _decomposes(D.coords, deg, raw):
        return None
    return EffectivityCertificate(D.coords, "no-decomposition", deg, candidates=tuple(raw))


def _decomposes(target, budget, candidates) -> bool:
    """Whether some multiset of candidate (coords, degree, sq) sums to target."""
    cands = sorted(candidates, key=lambda c: -c[1])

    def rec(remaining, budget, start):
        if budget == 0:
            return remaining == (0, 0)
        for i in range(start, len(cands)):
            (a, b), d, _ = cands[i]
            if d > budget:
                continue
            if rec((remaining[0] - a, remaining[1] - b), budget - d, i):
                return True
        return False

    return rec(tuple(target), budget, 0)


# --- quartic coordinate-ring machinery -------------------------------------------

QUARTIC_AMBIENT = Ambient.projective(3, names=("x", "y", "z", "w"))


@dataclass
class QuarticRing:
    """R/(f) for a quartic f in four variables, with monomial normal forms.

    The lex-leading monomial of f is the rewrite head; since the ideal is
    principal, monomials not divisible by it form a basis of each graded
    piece, of dimension C(d+3,3) - C(d-1,3).
    """

    f: RationalPolynomial
    lead: tuple = field(init=False)
    lead_coeff: Fraction = field(init=False)

    def __post_init__(self):
        if self.f.ambient != QUARTIC_AMBIENT:
            raise ValueError("quartic must live on P3 with coordinates x,y,z,w")
        if self.f.is_zero() or not self.f.is_homogeneous_of(4):
            raise ValueError("f must be a nonzero homogeneous quartic")
        self.lead = max(self.f.terms)
        self.lead_coeff = self.f.terms[self.lead]

    def hilbert(self, d: int) -> int:
        if d < 0:
            return 0
        return comb(d + 3, 3) - (comb(d - 1, 3) if d >= 1 else 0)

    def basis(self, d: int) -> list:
        from .polycore import monomial_basis

        if d < 0:
            return []
        out = [
            e
            for e in monomial_basis(QUARTIC_AMBIENT, d)
            if not all(a >= b for a, b in zip(e, self.lead))
        ]
        assert len(out) == self.hilbert(d)
        return out

    def reduce(self, p: RationalPolynomial) -> RationalPolynomial:
        """Normal form modulo f: eliminate every monomial divisible by the head."""
        terms = dict(p.terms)
        while True:
            divisible = [e for e in terms if all(a >= b for a, b in zip(e, self.lead))]
            if not divisible:
                break
            e = max(divisible)
            c = terms[e]
            quot = tuple(a - b for a, b in zip(e, self.lead))
            factor = RationalPolynomial.monomial(QUARTIC_AMBIENT, quot, c / self.lead_coeff)
            reducer = factor * self.f
            for ee, cc in reducer.terms.items():
                s = terms.get(ee, Fraction(0)) - cc
                if s:
                    terms[ee] = s
                else:
                    terms.pop(ee, None)
        return RationalPolynomial(QUARTIC_AMBIENT, terms)

    def evaluate(self, point) -> Fraction:
        total = Fraction(0)
        for e, c in self.f.terms.items():
            v = Fraction(1)
            for coord, exp in zip(point, e):
                if exp:
                    v *= Fraction(coord) ** exp
            total += c * v
        return total


def quartic_h0(
    ring: QuarticRing, entries, source_twists, target_twists, k: int, l: int = 0
) -> int:
    """h^0 of the kernel of a section map between twisted sums on the quartic.

    Only hyperplane twists are computed directly (l = 0); curve twists go
    through effectivity certificates instead.
    """
    if l != 0:
        raise UnsupportedTwistError("only hyperplane twists are computed on the quartic")
    entries = [
        [parse_poly(p, QUARTIC_AMBIENT) if isinstance(p, str) else p for p in row]
        for row in entries
    ]
    src = [int(t) for t in source_twists]
    tgt = [int(t) for t in target_twists]
    for i, row in enumerate(entries):
        for j, p in enumerate(row):
            if not p.is_homogeneous_of(tgt[i] - src[j]):
                raise HomogeneityError(i, j, f"expected degree {tgt[i] - src[j]}")
    src_bases = [ring.basis(t + k) for t in src]
    tgt_bases = [ring.basis(t + k) for t in tgt]
    ncols = sum(len(b) for b in src_bases)
    row_pos = []
    nrows = 0
    for b in tgt_bases:
        row_pos.append({e: nrows + i for i, e in enumerate(b)})
        nrows += len(b)
    M = ExactMatrix.zero(nrows, ncols)
    col = 0
    for j, sb in enumerate(src_bases):
        for mono in sb:
            mono_poly = RationalPolynomial.monomial(QUARTIC_AMBIENT, mono)
            for i, row in enumerate(entries):
                p = row[j]
                if p.is_zero():
                    continue
                prod = ring.reduce(p * mono_poly)
                for e, c in prod.terms.items():
                    M.entries[row_pos[i][e]][col] += c
            col += 1
    return M.kernel_dim()


@dataclass
class QuarticCertificate:
    surface: str
    basepoint_value: str
    h0_checks: list  # [(k, l, value)]
    strata: list  # descriptions of the uniform rules
    sample_points: list  # [(k, l, rule)]
    verdict: str
    lattice: dict

    def to_document(self) -> dict:
        return {
            "schema": "quartic-certificate/1",
            "surface": self.surface,
            "basepoint_value": self.basepoint_value,
            "core_checks": [{"twist": [k, l], "h0": v} for k, l, v in self.h0_checks],
            "strata": self.strata,
            "sample_points": [{"twist": [k, l], "rule": r} for k, l, r in self.sample_points],
            "verdict": self.verdict,
            "lattice": self.lattice,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_document(), sort_keys=True, indent=2) + "\n"


def quartic_region_run(f_text: str, map_entries=("x", "y", "w")) -> QuarticCertificate:
    """Stability verification for the rank-2 kernel bundle on the quartic.

    The bundle is ker((x,y,w): O(-1)^3 -> O) restricted to X = Z(f); its slope
    region {4k + 5l <= 6} is covered by one direct section-kernel check at
    (1,0) and by effectivity obstructions for every other integer point,
    stratified by the H-degree of the would-be effective class
    (k-1)H + lC, which is 4k + 5l - 4 <= 2 throughout the region.
    """
    f = parse_poly(f_text, QUARTIC_AMBIENT)
    ring = QuarticRing(f)
    # local freeness: the map (x,y,w) must not vanish anywhere on X
    val = ring.evaluate((0, 0, 1, 0))
    if val == 0:
        raise BasepointFailureError(
            "f(0,0,1,0) = 0: [0:0:1:0] lies on X and the section map drops rank there"
        )
    lattice = QUARTIC_452
    H = lattice.basis_class(0)
    C = lattice.basis_class(1)

    h0_10 = quartic_h0(ring, [list(map_entries)], [-1, -1, -1], [0], 1)
    checks = [(1, 0, h0_10)]
    ok = h0_10 == 0

    # strata by degree d = deg((k-1)H + lC) = 4k + 5l - 4 <= 2
    strata = [
        {
            "degrees": "<= 0",
            "rule": "nonpositive-degree",
            "statement": "every nonzero class of nonpositive H-degree is non-effective",
        }
    ]
    for d in (1, 2):
        classes, raw = curve_class_candidates(lattice, H, d)
        if raw:
            ok = False
            strata.append({"degrees": str(d), "rule": "unknown", "candidates": raw})
        else:
            strata.append(
                {
                    "degrees": str(d),
                    "rule": "no-decomposition",
                    "statement": (
                        f"no class of square >= -2 has H-degree in [1, {d}], so no "
                        f"effective divisor of H-degree {d} exists"
                    ),
                    "candidates": [],
                }
            )

    samples = []
    for k in range(-3, 3):
        for l in range(-3, 4):
            if 4 * k + 5 * l > 6:
                continue
            if (k, l) == (1, 0):
                samples.append((k, l, "section-kernel"))
                continue
            D = (k - 1) * H + l * C
            cert = not_effective_cert(D, H)
            if cert is None:
                ok = False
                samples.append((k, l, "unknown"))
            else:
                samples.append((k, l, cert.rule))

    return QuarticCertificate(
        surface=f_text,
        basepoint_value=str(val),
        h0_checks=checks,
        strata=strata,
        sample_points=samples,
        verdict="Stable" if ok else "Inconclusive",
        lattice={"names": list(lattice.names), "gram": [list(r) for r in lattice.gram]},
    )
