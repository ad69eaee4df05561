import pytest

from bundlecert.cohom import (
    fiber_h0_vanishes,
    h0_exterior,
    h0_homology,
    h0_kernel,
    h0_monad,
    h_line,
    tail_vanish,
)
from bundlecert.errors import (
    FiberNotVanishingError,
    IndexOutOfRangeError,
    UnsupportedCokernelRankError,
    UnsupportedOperationError,
)
from bundlecert.monad import homology_monad, kernel_monad, restrict_to_fiber
from bundlecert.polycore import Ambient, RationalPolynomial, mdeg_leq

P2 = Ambient.projective(2, names=("x", "y", "z"))
PP = Ambient.product_projective(1, 1)


def k_rank3():
    return kernel_monad(PP, [(-1, -1)] * 4, [(0, 0)], [["x0*y0", "x0*y1", "x1*y0", "x1*y1"]])


def k_rank3_n2():
    return kernel_monad(
        PP, [(-2, 0), (-2, 0), (0, -2), (0, -2)], [(0, 0)],
        [["x0^2", "x1^2", "y0^2", "y1^2"]],
    )


def e_rank2():
    return homology_monad(
        PP,
        [(0, 0)],
        [(1, 0), (1, 0), (0, 1), (0, 1)],
        [(1, 1)],
        [["x0"], ["x1"], ["y0"], ["y1"]],
        [["y0", "y1", "-x0", "-x1"]],
    )


def euler():
    return kernel_monad(P2, [-1, -1, -1], [0], [["x", "y", "z"]])


class TestHLine:
    def test_product_h0(self):
        assert h_line(PP, (2, 3), 0) == 12

    def test_p2_no_middle_cohomology(self):
        for k in range(-6, 6):
            assert h_line(P2, k, 1) == 0

    def test_product_h1(self):
        assert h_line(PP, (-2, 0), 1) == 1

    def test_serre_top(self):
        assert h_line(P2, -4, 2) == h_line(P2, 1, 0) == 3
        assert h_line(PP, (-2, -2), 2) == 1

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            h_line(P2, 1, 3)


class TestKernelH0:
    def test_k_rank3_band_zero(self):
        assert h0_kernel(k_rank3(), (1, 1)).value == 0

    def test_ks2_floor(self):
        ks2 = kernel_monad(P2, [0, 0, 0], [2], [["x^2", "y^2", "z^2"]])
        assert h0_kernel(ks2, -1).value == 0

    def test_euler_twist2(self):
        res = h0_kernel(euler(), 2)
        assert res.value == 3
        w = res.witness
        assert w["cols"] == w["rank"] + w["nullity"]  # rank-nullity audit

    def test_zero_map_degenerate(self):
        zero = RationalPolynomial.zero(PP)
        m = kernel_monad(PP, [(1, 0), (0, 1)], [(2, 2)], [[zero, zero]])
        # kernel of the zero map is everything
        assert h0_kernel(m, (0, 0)).value == h_line(PP, (1, 0), 0) + h_line(PP, (0, 1), 0)


PAPER_TABLE_K1 = [
    # rows k = 5..0, columns l = 0..5
    [0, 0, 2, 12, 22, 32],
    [0, 0, 1, 8, 15, 22],
    [0, 0, 0, 4, 8, 12],
    [0, 0, 0, 0, 1, 2],
    [0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0],
]


class TestExterior:
    def test_table_entry_33(self):
        assert h0_exterior(k_rank3(), 2, (3, 3)).value == 4

    def test_table_corner_55(self):
        assert h0_exterior(k_rank3(), 2, (5, 5)).value == 32

    def test_s1_matches_kernel(self):
        m = k_rank3()
        for L in [(1, 1), (2, 0), (3, 2)]:
            assert h0_exterior(m, 1, L).value == h0_kernel(m, L).value

    def test_full_first_table(self):
        m = k_rank3()
        got = [[h0_exterior(m, 2, (k, l)).value for l in range(6)] for k in range(5, -1, -1)]
        assert got == PAPER_TABLE_K1

    def test_rank_one_cokernel_required(self):
        m = kernel_monad(
            PP, [(-1, -1)] * 4, [(0, 0), (0, 0)],
            [[
                "x0*y0", "x0*y1", "x1*y0", "x1*y1",
            ], [
                "x1*y1", "x0*y1", "x1*y0", "x0*y0",
            ]],
        )
        with pytest.raises(UnsupportedCokernelRankError):
            h0_exterior(m, 2, (1, 1))

    def test_exterior_rank_identity(self):
        # Λ^s B has C(rank B, s) summands, so rank Λ^s K = C(rank B - 1, s)
        from math import comb

        from bundlecert.cohom import exterior_contraction

        m = k_rank3()
        for s in (1, 2, 3):
            entries, src, tgt = exterior_contraction(m, s)
            assert len(src) == comb(4, s)
            assert len(tgt) == comb(4, s - 1)
            assert comb(4, s) - comb(3, s - 1) == comb(3, s)


class TestHomology:
    def test_core_zeros(self):
        E = e_rank2()
        for L in [(-1, 0), (0, -1), (-1, -1)]:
            res = h0_homology(E, L)
            assert res.exact and res.value == 0

    def test_interval_case(self):
        res = h0_homology(e_rank2(), (-2, 0))
        assert (res.lo, res.hi) == (0, 1)
        assert not res.exact

    def test_h0_monad_dispatch(self):
        assert h0_monad(k_rank3(), 2, (3, 3)).value == 4
        assert h0_monad(e_rank2(), 1, (-1, 0)).value == 0
        with pytest.raises(UnsupportedOperationError):
            h0_monad(e_rank2(), 2, (0, 0))


class TestTailRule:
    def test_k_rank3_s1(self):
        res = tail_vanish(k_rank3(), 1, 1, -1, (0, 1))
        assert res.value == 0
        assert res.witness["fiber"]["rule"] == "kernel-exact"

    def test_e_tail_at_minus2(self):
        res = tail_vanish(e_rank2(), 1, 2, -2, (0, 1))
        assert res.value == 0
        assert res.witness["fiber"]["rule"] == "splitting-bound"
        assert res.witness["fiber"]["max_summand"] <= 1

    def test_e_tail_fails_at_minus1(self):
        with pytest.raises(FiberNotVanishingError):
            tail_vanish(e_rank2(), 1, 2, -1, (0, 1))

    def test_n2_s2_tail(self):
        res = tail_vanish(k_rank3_n2(), 2, 1, -1, (0, 1))
        assert res.value == 0

    def test_fiber_splitting_certificate_matches_paper(self):
        # h^0(E|fiber ⊗ O(-2)) = 0
        fiber = restrict_to_fiber(e_rank2(), 1, (0, 1))
        witness = fiber_h0_vanishes(fiber, 1, -2)
        assert witness["rule"] == "splitting-bound"


class TestMonotoneAndSymmetry:
    def test_monotonicity_spot_checks(self):
        m = k_rank3()
        values = {}
        for k in range(-4, 5):
            for l in range(-4, 5):
                values[(k, l)] = h0_exterior(m, 1, (k, l)).value
        for (k, l), v in values.items():
            for (k2, l2), v2 in values.items():
                if mdeg_leq((k, l), (k2, l2)):
                    assert v <= v2

    def test_swap_symmetry(self):
        m = k_rank3()
        for k in range(-2, 5):
            for l in range(-2, 5):
                a = h0_exterior(m, 2, (k, l)).value
                b = h0_exterior(m, 2, (l, k)).value
                assert a == b
