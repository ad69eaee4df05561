import random

import pytest

from bundlecert.errors import (
    BasepointFailureError,
    LatticeMismatchError,
    OddSquareError,
    UnsupportedTwistError,
)
from bundlecert.k3lat import (
    DOUBLE_PLANE,
    QUARTIC_452,
    QUARTIC_AMBIENT,
    U,
    U2,
    CoverSpec,
    GramLattice,
    QuarticRing,
    bracket,
    cover_c1_squared,
    curve_class_candidates,
    dependency,
    expected_dim,
    genus,
    gram_of,
    k3_lattice,
    not_effective_cert,
    pair,
    pullback_chern,
    quartic_h0,
    quartic_region_run,
    rigid_rank2_classes,
    self_int,
)
from bundlecert.monad import ChernData
from bundlecert.polycore import parse_poly

FX = "-x*(x + z - w)*(x*w - y*z) + z*(x + z)*(x*y - z^2) + (x*y + w^2)*(y^2 - z*w)"


class TestPairing:
    def test_u2(self):
        E1, E2 = U2.basis_class(0), U2.basis_class(1)
        assert pair(E1, E2) == 2
        assert self_int(E1) == 0
        assert U2.det == -4

    def test_quartic_lattice(self):
        H, C = QUARTIC_452.basis_class(0), QUARTIC_452.basis_class(1)
        assert self_int(C) == 2 and pair(C, H) == 5 and genus(C) == 2
        assert self_int(H) == 4 and genus(H) == 3

    def test_branch_curve_genus(self):
        E1, E2 = U2.basis_class(0), U2.basis_class(1)
        R = 2 * E1 + 2 * E2
        assert self_int(R) == 16
        assert genus(R) == 9

    def test_lattice_mismatch(self):
        with pytest.raises(LatticeMismatchError):
            pair(U.basis_class(0), U2.basis_class(0))

    def test_odd_square(self):
        odd = GramLattice(("A",), ((3,),))
        with pytest.raises(OddSquareError):
            genus(odd.basis_class(0))

    def test_bilinearity_random(self):
        rng = random.Random(11)
        for _ in range(50):
            lat = bracket(2 * rng.randint(-3, 3), rng.randint(-4, 4), 2 * rng.randint(-3, 3))
            a = lat.cls((rng.randint(-3, 3), rng.randint(-3, 3)))
            b = lat.cls((rng.randint(-3, 3), rng.randint(-3, 3)))
            c = lat.cls((rng.randint(-3, 3), rng.randint(-3, 3)))
            assert pair(a, b) == pair(b, a)
            assert pair(a + b, c) == pair(a, c) + pair(b, c)

    def test_catalogue_evenness(self):
        for lat in (U, U2, DOUBLE_PLANE, QUARTIC_452, k3_lattice()):
            assert lat.is_even


class TestGramAndDependency:
    def test_branch_relation(self):
        L3 = GramLattice(("E1", "E2", "R"), ((0, 2, 4), (2, 0, 4), (4, 4, 16)))
        classes = [L3.basis_class(i) for i in range(3)]
        mat, det = gram_of(classes)
        assert det == 0
        # R = 2 E1 + 2 E2
        assert dependency(classes) in ((-2, -2, 1), (2, 2, -1))

    def test_rank2_det(self):
        E1, E2 = U2.basis_class(0), U2.basis_class(1)
        _, det = gram_of([E1, E2])
        assert det == -4

    def test_span1(self):
        H = DOUBLE_PLANE.basis_class(0)
        mat, det = gram_of([H])
        assert det == 2


class TestEffectivity:
    H = QUARTIC_452.basis_class(0)
    C = QUARTIC_452.basis_class(1)

    def test_rule_nonpositive_degree(self):
        cert = not_effective_cert(-1 * self.H, self.H)
        assert cert.rule == "nonpositive-degree" and cert.degree == -4

    def test_rule_no_decomposition(self):
        D = -2 * self.H + 2 * self.C
        cert = not_effective_cert(D, self.H)
        assert cert.rule == "no-decomposition"
        assert cert.degree == 2 and cert.candidates == ()

    def test_zero_class(self):
        assert not_effective_cert(0 * self.H, self.H).rule == "zero-class"

    def test_real_curves_are_unknown(self):
        # H, C and the twisted cubic 2H - C are all effective: no certificate
        for D in (self.H, self.C, 2 * self.H - self.C):
            assert not_effective_cert(D, self.H) is None

    def test_candidate_enumeration_finds_twisted_cubic(self):
        classes, raw = curve_class_candidates(QUARTIC_452, self.H, 5)
        assert ((2, -1), 3, -2) in raw  # degree 3, square -2
        assert ((1, 0), 4, 4) in raw and ((0, 1), 5, 2) in raw
        assert all(d >= 1 and sq >= -2 for _, d, sq in raw)

    def test_never_certifies_decomposable_fuzz(self):
        rng = random.Random(5)
        tried = 0
        while tried < 40:
            a, b, c = 2 * rng.randint(0, 2), rng.randint(1, 4), 2 * rng.randint(-3, -1)
            lat = bracket(a, b, c)
            if lat.det >= 0:
                continue
            H = lat.cls((1, 0))
            if self_int(H) <= 0:
                continue
            tried += 1
            _, raw = curve_class_candidates(lat, H, 6)
            if not raw:
                continue
            parts = rng.sample(raw, k=min(len(raw), rng.randint(1, 2)))
            D = lat.cls((0, 0))
            for (x, y), _, _ in parts:
                D = D + lat.cls((x, y))
            if D.is_zero():
                continue
            cert = not_effective_cert(D, H)
            # D is a sum of candidate classes, so rule iii must not certify
            assert cert is None or cert.rule != "no-decomposition"


class TestNumerology:
    def test_expected_dim_examples(self):
        assert expected_dim(3, 64, 24) == 0
        assert expected_dim(2, 2 * 1, 2) == 4 * 2 - 2 - 6
        assert expected_dim(1, 5, 7) == 2 * 7 - 0 - 0

    def test_rank2_formula(self):
        for x in range(-5, 6):
            for y in range(-5, 6):
                assert expected_dim(2, 2 * x * x, y) == 4 * y - 2 * x * x - 6

    def test_rigid_classes(self):
        assert rigid_rank2_classes(0) == (1, 2)
        assert rigid_rank2_classes(-2) == (-3, 6)

    def test_rigid_exhaustive(self):
        family = {rigid_rank2_classes(k) for k in range(-60, 60)}
        for x in range(-99, 100, 2):
            sols = [y for y in range(-200, 200) if 4 * y - 2 * x * x - 6 == 0]
            for y in sols:
                assert (x, y) in family

    def test_pullback_chern(self):
        assert pullback_chern(ChernData(3, (-4, -4), 12)).c2 == 24
        assert pullback_chern(ChernData(2, (-2,), 4)).c2 == 8  # K_2: 2 s^2
        assert pullback_chern(ChernData(2, (-3,), 3)).c2 == 6
        assert cover_c1_squared(32) == 64

    def test_cover_catalogue(self):
        with pytest.raises(ValueError):
            CoverSpec("double_plane_sextic", "p2", False)


class TestQuartic:
    def test_hilbert_function(self):
        ring = QuarticRing(parse_poly(FX, QUARTIC_AMBIENT))
        assert len(ring.basis(1)) == 4
        assert len(ring.basis(4)) == 34
        for d in range(13):
            assert len(ring.basis(d)) == ring.hilbert(d)

    def test_reduce_idempotent(self):
        ring = QuarticRing(parse_poly(FX, QUARTIC_AMBIENT))
        p = parse_poly("x^5*w + y^2*z^4", QUARTIC_AMBIENT)
        r = ring.reduce(p)
        assert ring.reduce(r) == r
        # reduction preserves the residue class: difference divisible by f
        assert all(not all(a >= b for a, b in zip(e, ring.lead)) for e in r.terms)

    def test_h0_at_10(self):
        ring = QuarticRing(parse_poly(FX, QUARTIC_AMBIENT))
        assert quartic_h0(ring, [["x", "y", "w"]], [-1, -1, -1], [0], 1) == 0

    def test_h0_at_00(self):
        ring = QuarticRing(parse_poly(FX, QUARTIC_AMBIENT))
        assert quartic_h0(ring, [["x", "y", "w"]], [-1, -1, -1], [0], 0) == 0

    def test_unsupported_curve_twist(self):
        ring = QuarticRing(parse_poly(FX, QUARTIC_AMBIENT))
        with pytest.raises(UnsupportedTwistError):
            quartic_h0(ring, [["x", "y", "w"]], [-1, -1, -1], [0], 1, l=1)

    def test_region_run_paper_surface(self):
        cert = quartic_region_run(FX)
        assert cert.verdict == "Stable"
        assert cert.basepoint_value != "0"
        rules = {tuple(s[:2]): s[2] for s in cert.sample_points}
        assert rules[(1, 0)] == "section-kernel"
        assert rules[(0, 0)] == "nonpositive-degree"
        assert rules[(-1, 2)] == "no-decomposition"

    def test_region_run_fermat(self):
        cert = quartic_region_run("x^4 + y^4 + z^4 + w^4")
        assert cert.verdict == "Stable"
        assert cert.h0_checks == [(1, 0, 0)]

    def test_basepoint_failure(self):
        # z^4 missing and f(0,0,1,0) = 0
        with pytest.raises(BasepointFailureError):
            quartic_region_run("x^4 + y^4 + z^3*w + w^4")
