import json
from fractions import Fraction

import pytest

from bundlecert.errors import (
    NotApplicableError,
    UnsupportedPolarizationError,
    ZeroRankError,
)
from bundlecert.k3lat import DOUBLE_PLANE_COVER, DOUBLE_QUADRIC_COVER
from bundlecert.monad import ChernData, chern_monad, homology_monad, kernel_monad
from bundlecert.polycore import Ambient
from bundlecert.stability import (
    CertifyOptions,
    Polarization,
    audit_coverage,
    certify,
    pullback_degree,
    pullback_transfer,
    slope,
    twist_region,
    verify_certificate,
)

P2 = Ambient.projective(2, names=("x", "y", "z"))
PP = Ambient.product_projective(1, 1)
H_P2 = Polarization(P2, (1,))
H_PP = Polarization(PP, (1, 1))


def euler():
    return kernel_monad(P2, [-1, -1, -1], [0], [["x", "y", "z"]], name="cotangent")


def k_rank3():
    return kernel_monad(
        PP, [(-1, -1)] * 4, [(0, 0)], [["x0*y0", "x0*y1", "x1*y0", "x1*y1"]], name="k3"
    )


def e_rank2():
    return homology_monad(
        PP,
        [(0, 0)],
        [(1, 0), (1, 0), (0, 1), (0, 1)],
        [(1, 1)],
        [["x0"], ["x1"], ["y0"], ["y1"]],
        [["y0", "y1", "-x0", "-x1"]],
        name="e2",
    )


class TestSlope:
    def test_k_rank3(self):
        assert slope(chern_monad(k_rank3()), H_PP) == Fraction(-8, 3)

    def test_cotangent(self):
        assert slope(chern_monad(euler()), H_P2) == Fraction(-3, 2)

    def test_ks_dual(self):
        for s in (1, 2, 3, 4):
            ks = kernel_monad(P2, [0, 0, 0], [s], [[f"x^{s}", f"y^{s}", f"z^{s}"]])
            assert slope(chern_monad(ks).dual(), H_P2) == Fraction(s, 2)

    def test_zero_rank(self):
        with pytest.raises(ZeroRankError):
            slope(ChernData(0, (0, 0), 0), H_PP)


class TestRegion:
    def test_k_rank3_bands(self):
        c = chern_monad(k_rank3())
        assert twist_region(c, 2, H_PP).bound == 5  # 16/3
        assert twist_region(c, 1, H_PP).bound == 2  # 8/3

    def test_cotangent_halfline(self):
        assert twist_region(chern_monad(euler()), 1, H_P2).bound == 1

    def test_scaling_invariance(self):
        c = chern_monad(k_rank3())
        H2 = Polarization(PP, (2, 2))
        for s in (1, 2):
            assert twist_region(c, s, H_PP).bound == twist_region(c, s, H2).bound

    def test_unbalanced_polarization_rejected(self):
        c = chern_monad(k_rank3())
        with pytest.raises(UnsupportedPolarizationError):
            twist_region(c, 1, Polarization(PP, (1, 2)))


class TestCertify:
    def test_euler_stable(self):
        cert = certify(euler(), H_P2)
        assert cert.verdict == "Stable"
        assert audit_coverage(cert)

    def test_e_rank2_stable_with_paper_core(self):
        cert = certify(e_rank2(), H_PP)
        assert cert.verdict == "Stable"
        assert sorted(c.twist for c in cert.core_checks) == [(-1, -1), (-1, 0), (0, -1)]
        assert sorted((t.axis, t.bound) for t in cert.tail_rules) == [(1, -2), (2, -2)]
        assert audit_coverage(cert)

    def test_k_rank3_stable_with_paper_core(self):
        cert = certify(k_rank3(), H_PP)
        assert cert.verdict == "Stable"
        s1 = sorted(c.twist for c in cert.core_checks if c.s == 1)
        assert s1 == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]
        assert {t.s for t in cert.tail_rules} == {1, 2}
        assert audit_coverage(cert)

    def test_scaling_leaves_verdict(self):
        cert = certify(k_rank3(), Polarization(PP, (2, 2)))
        assert cert.verdict == "Stable"

    def test_margin_option_uses_propagation(self):
        cert = certify(k_rank3(), H_PP, CertifyOptions(margin=0))
        assert cert.verdict == "Stable"
        s1 = sorted(c.twist for c in cert.core_checks if c.s == 1)
        assert s1 == [(0, 2), (1, 1), (2, 0)]  # maximal band points only
        assert any(p.s == 1 for p in cert.propagations)
        assert audit_coverage(cert)

    def test_inconclusive_on_destabilized_bundle(self):
        # the kernel splits off the trivial summand, so sections appear in-band
        m = kernel_monad(
            PP, [(0, 0)] + [(-1, -1)] * 4, [(0, 0)],
            [["0", "x0*y0", "x0*y1", "x1*y0", "x1*y1"]],
        )
        cert = certify(m, H_PP)
        assert cert.verdict == "Inconclusive"
        assert cert.failure["reason"] == "nonzero h0 upper bound"
        k, l = cert.failure["twist"]
        assert k + l <= 2  # inside the s=1 band

    def test_unproved_surjectivity_is_inconclusive(self):
        m = kernel_monad(P2, [-1, -1, -1], [0], [["x + y", "y + z", "z"]], name="nonmono")
        cert = certify(m, H_P2)
        assert cert.verdict == "Inconclusive"
        assert cert.failure["reason"] == "exactness not proved"


class TestCertificateDocument:
    def test_replay(self):
        cert = certify(k_rank3(), H_PP)
        doc = json.loads(cert.to_json())
        assert verify_certificate(doc) == []

    def test_tampered_replay_fails(self):
        cert = certify(e_rank2(), H_PP)
        doc = json.loads(cert.to_json())
        doc["core_checks"][0]["h0"] = [1, 1]
        assert verify_certificate(doc) != []

    def test_byte_stability(self):
        a = certify(k_rank3(), H_PP).to_json()
        b = certify(k_rank3(), H_PP).to_json()
        assert a == b


class TestPullback:
    def test_degree_doubling(self):
        assert pullback_degree(1) == 2
        assert pullback_degree(0) == 0
        assert pullback_degree(-4) == -8

    def test_cotangent_transfer(self):
        cert = certify(euler(), H_P2)
        t = pullback_transfer(cert, DOUBLE_PLANE_COVER)
        assert t.rule == "pic-isomorphism"
        assert t.cover_degree_of_c1 == -6
        assert t.cover_c2 == 6

    def test_k_rank3_transfer(self):
        cert = certify(k_rank3(), H_PP)
        t = pullback_transfer(cert, DOUBLE_QUADRIC_COVER)
        assert t.cover_c2 == 24

    def test_rank2_route_without_pic_isomorphism(self):
        class BareCover:
            pic_isomorphism = False

        cert = certify(euler(), H_P2)
        t = pullback_transfer(cert, BareCover())
        assert t.rule == "rank2-double-plane"

    def test_inconclusive_not_applicable(self):
        m = kernel_monad(P2, [-1, -1, -1], [0], [["x + y", "y + z", "z"]])
        cert = certify(m, H_P2)
        with pytest.raises(NotApplicableError):
            pullback_transfer(cert, DOUBLE_PLANE_COVER)
