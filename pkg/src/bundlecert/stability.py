"""Slope-stability certification for monad bundles via vanishing of twisted
sections of exterior powers.

The criterion: a rank-r bundle E is stable once H^0(Λ^s E ⊗ L) = 0 for every
line bundle L with deg_H(L) <= -s·μ(E) and every 1 <= s <= r-1.  The verifier
splits each such region into a finite CORE, checked twist by twist, plus (on
P1 x P1) two infinite TAILS covered by the fiber-descent rule, plus monotone
downward propagation (multiplication by a section of an effective divisor
class is injective on sections of a torsion-free sheaf).  Only the sufficient
direction is used: a nonzero h^0 yields Inconclusive, never "unstable".
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .cohom import h0_monad, tail_vanish
from .errors import (
    FiberNotVanishingError,
    NotApplicableError,
    UnsupportedOperationError,
    UnsupportedPolarizationError,
    ValidationError,
    ZeroRankError,
)
from .monad import (
    ChernData,
    MonadComplex,
    ambient_to_document,
    chern_monad,
    monad_from_document,
    monad_to_document,
    validate,
)
from .polycore import Ambient, intersection_product

STABLE = "Stable"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Polarization:
    """An ample class on the ambient surface."""

    ambient: Ambient
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", self.ambient.normalize_degree(self.coords))
        if self.self_intersection <= 0:
            raise UnsupportedPolarizationError(
                f"polarization {self.coords} has nonpositive self-intersection"
            )
        if any(c <= 0 for c in self.coords):
            raise UnsupportedPolarizationError("polarization components must be positive")

    @property
    def self_intersection(self) -> int:
        return intersection_product(self.ambient, self.coords, self.coords)

    def degree(self, L) -> int:
        return intersection_product(self.ambient, self.ambient.normalize_degree(L), self.coords)

    @property
    def is_balanced(self) -> bool:
        """True when proportional to O(1) resp. O(1,1)."""
        return len(set(self.coords)) == 1


def slope(c: ChernData, H: Polarization) -> Fraction:
    """deg_H(c1) / rank."""
    if c.rank < 1:
        raise ZeroRankError("slope of a rank-0 sheaf")
    return Fraction(H.degree(c.c1), c.rank)


@dataclass(frozen=True)
class Region:
    """The set {L : deg_H(L) <= -s·μ}, described by one integer bound."""

    s: int
    kind: str  # "halfline" (P^n) or "band" (P1xP1, H ∝ O(1,1))
    bound: int  # max k on P^n; max k+l on the product

    def contains(self, L) -> bool:
        return sum(L) <= self.bound


def twist_region(c: ChernData, s: int, H: Polarization) -> Region:
    """Integer description of {deg_H(L) <= -s·μ(E)}."""
    if not 1 <= s <= c.rank - 1:
        raise ValueError(f"s must lie in 1..{c.rank - 1}")
    if not H.is_balanced:
        raise UnsupportedPolarizationError(
            "twist regions are implemented for multiples of O(1) / O(1,1)"
        )
    mu = slope(c, H)
    h = H.coords[0]
    # deg_H(L) = h * (sum of L's components); the region is componentsum <= bound
    bound = -s * mu / h
    bound_int = bound.numerator // bound.denominator  # exact floor
    if c.rank and len(H.coords) == 1:
        return Region(s, "halfline", bound_int)
    return Region(s, "band", bound_int)


@dataclass
class CoreCheck:
    s: int
    twist: tuple
    h0_lo: int
    h0_hi: int
    method: str
    witness: dict


@dataclass
class TailRule:
    s: int
    axis: int
    bound: int
    point: tuple
    witness: dict


@dataclass
class Propagation:
    s: int
    source: tuple
    description: str


@dataclass
class StabilityCertificate:
    bundle: str
    chern: ChernData
    slope: Fraction
    polarization: tuple
    regions: dict  # s -> Region
    core_checks: list
    tail_rules: list
    propagations: list
    verdict: str
    failure: dict | None
    notes: list
    monad_document: dict
    options: dict

    def to_document(self) -> dict:
        return {
            "schema": "stability-certificate/1",
            "bundle": self.bundle,
            "chern": {"rank": self.chern.rank, "c1": list(self.chern.c1), "c2": self.chern.c2},
            "slope": str(self.slope),
            "polarization": list(self.polarization),
            "regions": {
                str(s): {"kind": r.kind, "bound": r.bound} for s, r in self.regions.items()
            },
            "core_checks": [
                {
                    "s": c.s,
                    "twist": list(c.twist),
                    "h0": [c.h0_lo, c.h0_hi],
                    "method": c.method,
                    "witness": c.witness,
                }
                for c in self.core_checks
            ],
            "tail_rules": [
                {
                    "s": t.s,
                    "axis": t.axis,
                    "bound": t.bound,
                    "point": list(t.point),
                    "witness": t.witness,
                }
                for t in self.tail_rules
            ],
            "monotone_propagations": [
                {"s": p.s, "from": list(p.source), "covers": p.description}
                for p in self.propagations
            ],
            "verdict": self.verdict,
            "failure": self.failure,
            "notes": self.notes,
            "input": {"monad": self.monad_document, "options": self.options},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_document(), sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class CertifyOptions:
    fiber_points: tuple = ((0, 1), (0, 1))  # per axis
    tail_floor: int = -6
    margin: int | None = None  # None: evaluate every core point; else maximal points only
    surjectivity_trials: int = 20

    def to_dict(self) -> dict:
        return {
            "fiber_points": [list(p) for p in self.fiber_points],
            "tail_floor": self.tail_floor,
            "margin": self.margin,
        }


_GIESEKER_NOTE = (
    "mu-stable implies Gieseker-stable implies Gieseker-semistable implies mu-semistable"
)


def certify(m: MonadComplex, H: Polarization, options: CertifyOptions | None = None) -> StabilityCertificate:
    """Run the full vanishing verification and assemble a certificate."""
    options = options or CertifyOptions()
    if m.ambient != H.ambient:
        raise ValidationError("polarization ambient differs from the monad's")

    report = validate(m, trials=options.surjectivity_trials)
    if not report.structure_ok:
        raise ValidationError(
            f"monad fails structural validation: {report.homogeneity_detail or 'b∘a != 0'}"
        )
    chern = chern_monad(m)
    mu = slope(chern, H)

    notes = [_GIESEKER_NOTE]
    if not report.exactness_proved:
        cert = _base_certificate(m, H, chern, mu, notes, options)
        cert.verdict = INCONCLUSIVE
        cert.failure = {
            "reason": "exactness not proved",
            "surjectivity_of_b": report.surjectivity_of_b.status,
            "injectivity_of_a": report.injectivity_of_a.status,
        }
        return cert
    notes.append("exactness at the ends proved by the monomial cover rule")

    cert = _base_certificate(m, H, chern, mu, notes, options)
    try:
        for s in range(1, chern.rank):
            region = twist_region(chern, s, H)
            cert.regions[s] = region
            if m.ambient.arity == 1:
                fail = _run_halfline(m, s, region, cert)
            else:
                fail = _run_band(m, s, region, cert, options)
            if fail is not None:
                cert.verdict = INCONCLUSIVE
                cert.failure = fail
                return cert
    except (FiberNotVanishingError, UnsupportedOperationError) as e:
        cert.verdict = INCONCLUSIVE
        cert.failure = {"reason": type(e).__name__, "detail": str(e)}
        return cert

    cert.verdict = STABLE
    return cert


def _base_certificate(m, H, chern, mu, notes, options) -> StabilityCertificate:
    return StabilityCertificate(
        bundle=m.name or "monad-bundle",
        chern=chern,
        slope=mu,
        polarization=H.coords,
        regions={},
        core_checks=[],
        tail_rules=[],
        propagations=[],
        verdict=INCONCLUSIVE,
        failure=None,
        notes=notes,
        monad_document=monad_to_document(m),
        options=options.to_dict(),
    )


def _record_check(cert, s, twist, res) -> dict | None:
    cert.core_checks.append(
        CoreCheck(s, tuple(twist), res.lo, res.hi, res.method, res.witness)
    )
    if res.hi != 0:
        return {
            "reason": "nonzero h0 upper bound",
            "s": s,
            "twist": list(twist),
            "h0": [res.lo, res.hi],
        }
    return None


def _run_halfline(m, s, region, cert) -> dict | None:
    k_max = region.bound
    res = h0_monad(m, s, (k_max,))
    fail = _record_check(cert, s, (k_max,), res)
    if fail:
        return fail
    cert.propagations.append(
        Propagation(s, (k_max,), f"all k <= {k_max} by downward monotonicity")
    )
    return None


def _run_band(m, s, region, cert, options) -> dict | None:
    bound = region.bound
    tail_bounds = []
    for axis in (1, 2):
        point = options.fiber_points[axis - 1]
        t = -1
        rule = None
        while t >= options.tail_floor:
            try:
                res = tail_vanish(m, s, axis, t, point)
                rule = TailRule(s, axis, t, tuple(point), res.witness)
                break
            except FiberNotVanishingError:
                t -= 1
        if rule is None:
            raise FiberNotVanishingError(
                tuple(point), f"no tail bound above the floor {options.tail_floor} (s={s})"
            )
        cert.tail_rules.append(rule)
        tail_bounds.append(t)

    t1, t2 = tail_bounds
    core = [
        (k, l)
        for k in range(t1 + 1, bound - t2)
        for l in range(t2 + 1, bound - k + 1)
    ]
    core.sort(key=lambda kl: (-(kl[0] + kl[1]), -kl[0]))
    if options.margin is not None:
        maximal = [kl for kl in core if kl[0] + kl[1] > bound - 1 - options.margin]
        rest = [kl for kl in core if kl not in maximal]
        for kl in maximal:
            res = h0_monad(m, s, kl)
            fail = _record_check(cert, s, kl, res)
            if fail:
                return fail
        for kl in rest:
            dom = (kl[0], bound - kl[0])
            cert.propagations.append(
                Propagation(s, dom, f"covers {kl} by downward monotonicity")
            )
        return None
    for kl in core:
        res = h0_monad(m, s, kl)
        fail = _record_check(cert, s, kl, res)
        if fail:
            return fail
    return None


def audit_coverage(cert: StabilityCertificate, window: int = 8) -> bool:
    """Every lattice point of each region inside a finite window is justified
    by a core check, a propagation, or a tail rule."""
    H = Polarization(
        ambient_from_cert(cert), tuple(cert.polarization)
    )
    for s, region in cert.regions.items():
        checks = {tuple(c.twist) for c in cert.core_checks if c.s == s and c.h0_hi == 0}
        props = [p for p in cert.propagations if p.s == s]
        tails = [(t.axis, t.bound) for t in cert.tail_rules if t.s == s]
        if region.kind == "halfline":
            pts = [(k,) for k in range(region.bound - window, region.bound + 1)]
        else:
            pts = [
                (k, l)
                for k in range(-window, window + 1)
                for l in range(-window, window + 1)
                if k + l <= region.bound
            ]
        for pt in pts:
            if tuple(pt) in checks:
                continue
            if any(pt[axis - 1] <= b for axis, b in tails):
                continue
            covered = False
            for p in props:
                if all(a <= b for a, b in zip(pt, p.source)) and tuple(p.source) in checks:
                    covered = True
                    break
            if not covered:
                return False
    return True


def ambient_from_cert(cert: StabilityCertificate) -> Ambient:
    from .monad import ambient_from_document

    return ambient_from_document(cert.monad_document["ambient"])


def verify_certificate(doc: dict) -> list:
    """Replay a serialized certificate: recompute every recorded dimension.

    Returns a list of mismatch descriptions; empty means the certificate
    re-verifies.
    """
    problems = []
    try:
        m = monad_from_document(doc["input"]["monad"])
    except Exception as e:  # corrupt document
        return [f"cannot reload monad: {e}"]
    chern = chern_monad(m)
    got = {"rank": chern.rank, "c1": list(chern.c1), "c2": chern.c2}
    if got != doc["chern"]:
        problems.append(f"chern mismatch: {got} != {doc['chern']}")
    H = Polarization(m.ambient, tuple(doc["polarization"]))
    mu = slope(chern, H)
    if str(mu) != doc["slope"]:
        problems.append(f"slope mismatch: {mu} != {doc['slope']}")
    for s_str, r in doc["regions"].items():
        region = twist_region(chern, int(s_str), H)
        if region.bound != r["bound"] or region.kind != r["kind"]:
            problems.append(f"region mismatch at s={s_str}")
    for c in doc["core_checks"]:
        res = h0_monad(m, c["s"], tuple(c["twist"]))
        if [res.lo, res.hi] != c["h0"]:
            problems.append(
                f"core check mismatch at s={c['s']} twist={c['twist']}: "
                f"recomputed [{res.lo},{res.hi}] != {c['h0']}"
            )
    for t in doc["tail_rules"]:
        try:
            res = tail_vanish(m, t["s"], t["axis"], t["bound"], tuple(t["point"]))
        except FiberNotVanishingError:
            problems.append(f"tail rule no longer certifies: s={t['s']} axis={t['axis']}")
            continue
        if res.witness.get("fiber") != t["witness"].get("fiber"):
            problems.append(f"tail witness mismatch: s={t['s']} axis={t['axis']}")
    return problems


# --- pullback transfer ---------------------------------------------------------

def pullback_degree(degree: int) -> int:
    """Degrees double under pullback along a double cover."""
    return 2 * degree


@dataclass(frozen=True)
class TransferredStatement:
    rule: str
    statement: str
    base_slope: Fraction
    cover_degree_of_c1: int
    cover_c2: int


def pullback_transfer(cert: StabilityCertificate, cover) -> TransferredStatement:
    """Transfer a Stable certificate to the double cover.

    Requires either a catalogued cover with an isomorphism on line-bundle
    classes (works for any rank), or the rank-2-over-P2 route.
    """
    if cert.verdict != STABLE:
        raise NotApplicableError("only Stable certificates transfer")
    amb = ambient_from_cert(cert)
    if getattr(cover, "pic_isomorphism", False):
        rule = "pic-isomorphism"
        why = "every line bundle on the cover is pulled back, so the vanishing hypothesis transfers"
    elif cert.chern.rank == 2 and amb.arity == 1 and amb.dims == (2,):
        rule = "rank2-double-plane"
        why = "rank-2 stable bundles on P2 pull back stably along branched double covers"
    else:
        raise NotApplicableError(
            "no transfer rule applies: need a Pic-isomorphism cover or rank 2 over P2"
        )
    H = Polarization(amb, tuple(cert.polarization))
    base_deg = H.degree(cert.chern.c1)
    stmt = (
        f"pullback of {cert.bundle} is mu-stable on the cover w.r.t. the pulled-back "
        f"polarization ({rule}); deg of c1 doubles {base_deg} -> {pullback_degree(base_deg)}, "
        f"c2 doubles {cert.chern.c2} -> {2 * cert.chern.c2}"
    )
    return TransferredStatement(
        rule=rule,
        statement=stmt,
        base_slope=cert.slope,
        cover_degree_of_c1=pullback_degree(base_deg),
        cover_c2=2 * cert.chern.c2,
    )
