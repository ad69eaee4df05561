"""From point counts to a geometric Picard-rank upper bound.

Pipeline: traces t_i = N_i - 1 - p^{2i} are power sums of the 22 Frobenius
eigenvalues on middle cohomology; subtracting p^i per known algebraic class
leaves the power sums of a degree-(22 - k_alg) factor Q.  Newton's identities
convert them to elementary symmetric functions, and the Weil functional
equation T^d Q(p^2/T) = ±p^d Q(T) completes the remaining coefficients.  With
exactly d/2 - 1 power sums the minus sign determines Q outright (the middle
coefficient is forced to zero) while the plus sign leaves a one-parameter
family in the middle coefficient.

Every completed candidate must pass an exact all-roots-on-|z| = p test
(self-inversive reduction u = S + 1/S, squarefree part, Sturm count on
[-2, 2]; no floating point anywhere).  The rank bound adds to k_alg the
maximum number of roots of the form p * (root of unity) over surviving
candidates, counted by trial division of Q(pT) by cyclotomic polynomials.
For the underdetermined plus-sign family, a cyclotomic divisor pins the
middle coefficient by a linear condition, so the family contributes the
maximum over its finitely many solvable completions (zero when none exists);
the bound therefore covers the true polynomial whichever sign holds.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from ..errors import (
    InsufficientCountsError,
    NoCandidateError,
    NoConsistentCandidateError,
)

H2_DIM = 22
WEIL_TRACE_FACTOR = 22  # |t_i| <= 22 p^i


# --- polynomial helpers (dense lists, ascending coefficients) -------------------

def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_divmod_exact(a, b):
    """Division in Z[T] by b with integer quotient; (None, None) if it fails."""
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    quot = [0] * max(1, len(a) - db)
    while True:
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        if len(a) - 1 < db or not any(a):
            break
        c = a[-1]
        if c % lead:
            return None, None
        c //= lead
        shift = len(a) - 1 - db
        quot[shift] = c
        for i, x in enumerate(b):
            a[shift + i] -= c * x
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return quot, a


def poly_eval(a, x):
    total = 0
    for c in reversed(a):
        total = total * x + c
    return total


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> tuple:
    """Phi_k as an ascending integer coefficient tuple."""
    num = [-1] + [0] * (k - 1) + [1]
    for d in range(1, k):
        if k % d == 0:
            num, rem = poly_divmod_exact(num, list(cyclotomic(d)))
            assert not any(rem)
    return tuple(num)


def euler_phi(k: int) -> int:
    return len(cyclotomic(k)) - 1


# --- symmetric-function plumbing -------------------------------------------------

def newton_elementary_from_power_sums(power_sums) -> list:
    """e_1..e_m from p_1..p_m; raises on a non-integral value."""
    e = [Fraction(1)]
    for k in range(1, len(power_sums) + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * power_sums[i - 1]
        e.append(acc / k)
    out = []
    for x in e[1:]:
        if x.denominator != 1:
            raise NoConsistentCandidateError(
                f"Newton identities give non-integral coefficient {x}"
            )
        out.append(int(x))
    return out


def power_sums_from_coeffs(coeffs, m: int) -> list:
    """p_1..p_m for the monic polynomial with ascending coefficients `coeffs`."""
    d = len(coeffs) - 1
    # e_j with sign: coeffs[d - j] = (-1)^j e_j
    e = [coeffs[d - j] * (-1) ** j for j in range(d + 1)]
    p = []
    for k in range(1, m + 1):
        acc = 0
        for i in range(1, k):
            acc += (-1) ** (i - 1) * e[i] * p[k - i - 1] if i <= d else 0
        if k <= d:
            acc += (-1) ** (k - 1) * k * e[k]
        p.append(acc)
    return p


# --- candidates ------------------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    """A degree-d factor of the Frobenius characteristic polynomial."""

    sign: int  # functional-equation sign
    kind: str  # "complete" | "family"
    coeffs: tuple  # ascending; for a family, the middle slot holds 0
    middle_index: int | None = None  # set for families: the free coefficient slot
    status: str = "candidate"  # "surviving" | "discarded"
    reason: str = ""

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def complete_with_functional_equation(e_known, d: int, p: int, sign: int):
    """Coefficients of Q from e_1..e_m and e_{d-j} = sign * p^{d-2j} e_j.

    Returns (coeffs ascending, kind, middle_index).  Requires m >= d/2 - 1.
    """
    m = len(e_known)
    h = d // 2
    if m < h - 1:
        raise InsufficientCountsError(f"need at least {h - 1} counts, got {m}")
    e = [0] * (d + 1)
    e[0] = 1
    for j in range(1, min(m, h) + 1):
        if j <= m:
            e[j] = e_known[j - 1]
    kind = "complete"
    middle_index = None
    if m < h:  # middle coefficient undetermined
        if sign == -1:
            e[h] = 0  # forced: e_h = -e_h
            kind = "complete"
        else:
            e[h] = 0  # free slot
            kind = "family"
            middle_index = d - h  # ascending index of T^{d-h}
    for j in range(0, h):
        e[d - j] = sign * p ** (d - 2 * j) * e[j]
    if sign == -1 and m >= h and e[h] != 0:
        raise NoConsistentCandidateError("middle coefficient nonzero under sign -1")
    # ascending coefficients: coeff of T^{d-j} is (-1)^j e_j
    coeffs = [0] * (d + 1)
    for j in range(d + 1):
        coeffs[d - j] = (-1) ** j * e[j]
    return tuple(coeffs), kind, middle_index


# --- exact all-roots-on-the-circle test ------------------------------------------

def _sturm_count(poly, a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b] for a squarefree rational poly."""

    def evaluate(q, x):
        tot = Fraction(0)
        for c in reversed(q):
            tot = tot * x + c
        return tot

    def rem(f, g):
        f = [Fraction(c) for c in f]
        g = list(g)
        while len(f) >= len(g) and any(f):
            c = f[-1] / g[-1]
            shift = len(f) - len(g)
            for i, x in enumerate(g):
                f[shift + i] -= c * x
            while len(f) > 1 and f[-1] == 0:
                f.pop()
            if len(f) == 1 and f[0] == 0:
                break
        return f

    chain = [[Fraction(c) for c in poly]]
    deriv = [Fraction(i * c) for i, c in enumerate(poly)][1:]
    if any(deriv):
        chain.append(deriv)
        while len(chain[-1]) > 1:
            r = rem(chain[-2], chain[-1])
            r = [-c for c in r]
            if not any(r):
                break
            chain.append(r)

    def signs(x):
        out = []
        for q in chain:
            v = evaluate(q, x)
            if v:
                out.append(1 if v > 0 else -1)
        changes = sum(1 for u, v in zip(out, out[1:]) if u != v)
        return changes

    return signs(a) - signs(b)


def _squarefree_part(poly):
    """poly / gcd(poly, poly') over Q."""
    f = [Fraction(c) for c in poly]
    g = [Fraction(i * c) for i, c in enumerate(poly)][1:]

    def rem(a, b):
        a = list(a)
        while len(a) >= len(b) and any(a):
            c = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, x in enumerate(b):
                a[shift + i] -= c * x
            while len(a) > 1 and a[-1] == 0:
                a.pop()
            if len(a) == 1 and a[0] == 0:
                break
        return a

    a, b = f, g
    while any(b) and len(b) > 1:
        a, b = b, rem(a, b)
    if not any(b):
        gcd = a
    else:
        gcd = b  # a nonzero constant: squarefree already
    if len(gcd) == 1:
        return f
    q, r = _frac_div(f, gcd)
    assert not any(r)
    return q


def _frac_div(a, b):
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = c
        for i, x in enumerate(b):
            a[shift + i] -= c * x
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        if len(a) == 1 and a[0] == 0:
            break
    return q, a


def all_roots_on_circle(coeffs, p: int, sign: int) -> bool:
    """Exact test that every root of the monic integer polynomial has |z| = p.

    Uses the built-in functional equation: R(S) = Q(pS)/p^d is self-inversive
    with the given sign; for sign -1 the forced roots S = ±1 are divided out.
    The remainder satisfies S^e R(1/S) = R(S), hence S^{-e/2} R(S) = G(u) with
    u = S + 1/S; all roots of R lie on |S| = 1 iff all roots of G are real in
    [-2, 2], decided by a Sturm count on the squarefree part.
    """
    d = len(coeffs) - 1
    r = [Fraction(coeffs[j], p ** (d - j)) for j in range(d + 1)]  # R ascending
    if sign == -1:
        # divide by (S-1)(S+1) = S^2 - 1
        q, remdr = _frac_div(r, [Fraction(-1), Fraction(0), Fraction(1)])
        if any(remdr):
            return False
        r = q
    e = len(r) - 1
    if e % 2:
        # self-inversive of odd degree with sign +1 has S = -1 as a root
        q, remdr = _frac_div(r, [Fraction(1), Fraction(1)])
        if any(remdr):
            return False
        r = q
        e = len(r) - 1
    h = e // 2
    # verify self-inversivity of the remainder (sign +1)
    for j in range(e + 1):
        if r[j] != r[e - j]:
            return False
    # G(u) = r_h + sum_{m>=1} r_{h+m} * b_m(u), with b_m = u b_{m-1} - b_{m-2}
    b_prev = [Fraction(2)]  # b_0
    b_cur = [Fraction(0), Fraction(1)]  # b_1
    G = [Fraction(r[h])]
    for m in range(1, h + 1):
        bm = b_cur if m == 1 else None
        if m >= 2:
            # b_m = u*b_{m-1} - b_{m-2}
            shifted = [Fraction(0)] + b_cur
            bm = [
                (shifted[i] if i < len(shifted) else Fraction(0))
                - (b_prev[i] if i < len(b_prev) else Fraction(0))
                for i in range(max(len(shifted), len(b_prev)))
            ]
            b_prev, b_cur = b_cur, bm
        coeff = r[h + m]
        if coeff:
            G = [
                (G[i] if i < len(G) else Fraction(0))
                + coeff * (bm[i] if i < len(bm) else Fraction(0))
                for i in range(max(len(G), len(bm)))
            ]
    while len(G) > 1 and G[-1] == 0:
        G.pop()
    if len(G) == 1:
        return not any(G) or h == 0
    # count roots in [-2, 2]: handle endpoints exactly, then Sturm on the rest
    total_needed = len(_squarefree_part(G)) - 1
    sq = _squarefree_part(G)
    found = 0
    for endpoint in (Fraction(-2), Fraction(2)):
        v = Fraction(0)
        for c in reversed(sq):
            v = v * endpoint + c
        if v == 0:
            q, remdr = _frac_div(sq, [-endpoint, Fraction(1)])
            assert not any(remdr)
            sq = q
            found += 1
    found += _sturm_count(sq, Fraction(-2), Fraction(2))
    return found == total_needed


# --- cyclotomic root counting ------------------------------------------------------

def unit_root_count(coeffs, p: int) -> int:
    """Total multiplicity of roots of the form p * (root of unity)."""
    d = len(coeffs) - 1
    w = [c * p ** j for j, c in enumerate(coeffs)]  # Q(pT), ascending
    total = 0
    for k in range(1, 200):
        phi = euler_phi(k)
        if phi > d:
            continue
        if k > 2 and phi > d:
            continue
        cyc = list(cyclotomic(k))
        mult = 0
        cur = w
        while True:
            q, rem = poly_divmod_exact(cur, cyc)
            if q is None or any(rem):
                break
            mult += 1
            cur = q
        total += phi * mult
        if k > 2 * d + 2:
            break
    return total


# --- profile assembly ----------------------------------------------------------------

@dataclass
class ZetaProfile:
    p: int
    counts: list
    k_alg: int
    traces: list = field(default_factory=list)
    reduced_power_sums: list = field(default_factory=list)
    elementary: list = field(default_factory=list)
    candidates: list = field(default_factory=list)
    weil_audit_ok: bool = True

    def surviving(self) -> list:
        return [c for c in self.candidates if c.status == "surviving"]

    def to_document(self) -> dict:
        return {
            "schema": "picard-bound-profile/1",
            "p": self.p,
            "k_alg": self.k_alg,
            "counts": list(self.counts),
            "traces": list(self.traces),
            "reduced_power_sums": list(self.reduced_power_sums),
            "elementary_symmetric": list(self.elementary),
            "weil_audit_ok": self.weil_audit_ok,
            "candidates": [
                {
                    "sign": c.sign,
                    "kind": c.kind,
                    "status": c.status,
                    "reason": c.reason,
                    "coeffs_ascending": list(c.coeffs),
                }
                for c in self.candidates
            ],
        }


def traces_from_counts(counts, p: int) -> list:
    return [N - 1 - p ** (2 * i) for i, N in enumerate(counts, start=1)]


def assemble_charpoly(counts, p: int, k_alg: int = 2) -> ZetaProfile:
    """Build candidate characteristic-polynomial factors from 9 point counts."""
    counts = list(counts)
    if len(counts) != (H2_DIM - k_alg) // 2 - 1:
        raise InsufficientCountsError(
            f"expected {(H2_DIM - k_alg) // 2 - 1} counts, got {len(counts)}"
        )
    if k_alg > 4:
        raise ValueError("k_alg must be at most 4")
    profile = ZetaProfile(p=p, counts=counts, k_alg=k_alg)
    profile.traces = traces_from_counts(counts, p)
    for i, t in enumerate(profile.traces, start=1):
        if abs(t) > WEIL_TRACE_FACTOR * p ** i:
            profile.weil_audit_ok = False
            raise NoConsistentCandidateError(
                f"trace t_{i} = {t} violates the Weil bound {WEIL_TRACE_FACTOR}*{p}^{i}"
            )
    profile.reduced_power_sums = [
        t - k_alg * p ** i for i, t in enumerate(profile.traces, start=1)
    ]
    profile.elementary = newton_elementary_from_power_sums(profile.reduced_power_sums)
    d = H2_DIM - k_alg
    for sign in (1, -1):
        coeffs, kind, middle = complete_with_functional_equation(
            profile.elementary, d, p, sign
        )
        cand = Candidate(sign=sign, kind=kind, coeffs=coeffs, middle_index=middle)
        profile.candidates.append(_vet(cand, p))
    if not profile.surviving():
        raise NoConsistentCandidateError("both functional-equation signs discarded")
    return profile


def _vet(cand: Candidate, p: int) -> Candidate:
    from dataclasses import replace

    if cand.kind == "family":
        # vetting happens per pinned completion inside the rank bound
        return replace(cand, status="surviving", reason="family: vetted per completion")
    if not all_roots_on_circle(list(cand.coeffs), p, cand.sign):
        return replace(
            cand, status="discarded", reason="roots leave the circle |z| = p"
        )
    return replace(cand, status="surviving", reason="circle test passed")


def family_completions(cand: Candidate, p: int) -> list:
    """Integer middle coefficients that admit some cyclotomic divisor.

    Any completion whose polynomial has a root p*zeta must have the scaled
    cyclotomic as a divisor of Q(pT) = W0 + e * p^mid T^mid, a linear
    condition on e per cyclotomic; collect the finitely many integer
    solutions.
    """
    d = cand.degree
    mid = cand.middle_index
    w0 = [c * p ** j for j, c in enumerate(cand.coeffs)]
    out = set()
    for k in range(1, 200):
        phi = euler_phi(k)
        if phi > d:
            continue
        cyc = list(cyclotomic(k))
        width = len(cyc) - 1
        r0 = _pad(_poly_mod_q(w0, cyc), width)
        t_mid = [0] * mid + [p ** mid]
        r1 = _pad(_poly_mod_q(t_mid, cyc), width)
        if not any(r1):
            continue  # cannot happen: Phi_k never divides T^mid
        # solve r0 + e*r1 = 0
        idx = next(i for i, c in enumerate(r1) if c)
        e = Fraction(-r0[idx], r1[idx])
        if all(Fraction(a) + e * b == 0 for a, b in zip(r0, r1)):
            if e.denominator == 1:
                out.add(int(e))
    completions = []
    for e in sorted(out):
        coeffs = list(cand.coeffs)
        coeffs[mid] = e
        completions.append((e, tuple(coeffs)))
    return completions


def _poly_mod_q(a, b):
    """Remainder of integer a modulo monic integer b, over Q (exact Fractions)."""
    a = [Fraction(c) for c in a]
    while len(a) >= len(b) and any(a):
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, x in enumerate(b):
            a[shift + i] -= c * x
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        if len(a) == 1 and a[0] == 0:
            break
    return a


def _pad(a, width):
    return list(a) + [Fraction(0)] * (width - len(a))


@dataclass
class RankBoundResult:
    bound: int
    per_candidate: list  # (sign, kind, contribution, detail)

    def to_document(self) -> dict:
        return {
            "rank_upper_bound": self.bound,
            "per_candidate": [
                {"sign": s, "kind": k, "contribution": c, "detail": d}
                for s, k, c, d in self.per_candidate
            ],
        }


def rank_upper_bound(profile: ZetaProfile) -> RankBoundResult:
    """k_alg + max over surviving candidates of the unit-root multiplicity."""
    survivors = profile.surviving()
    if not survivors:
        raise NoCandidateError("no surviving characteristic-polynomial candidate")
    per = []
    best = 0
    for cand in survivors:
        if cand.kind == "complete":
            contrib = unit_root_count(list(cand.coeffs), profile.p)
            per.append((cand.sign, cand.kind, contrib, "complete candidate"))
        else:
            contrib = 0
            details = []
            for e, coeffs in family_completions(cand, profile.p):
                if not all_roots_on_circle(list(coeffs), profile.p, cand.sign):
                    details.append(f"middle={e}: fails circle test")
                    continue
                c = unit_root_count(list(coeffs), profile.p)
                details.append(f"middle={e}: unit-root count {c}")
                contrib = max(contrib, c)
            per.append(
                (
                    cand.sign,
                    cand.kind,
                    contrib,
                    "; ".join(details) if details else "no completion admits a unit root",
                )
            )
        best = max(best, contrib)
    return RankBoundResult(bound=profile.k_alg + best, per_candidate=per)
