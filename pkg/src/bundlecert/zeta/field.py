"""Finite fields F_{p^n} with deterministic construction.

The modulus is the lexicographically smallest monic irreducible of degree n
over F_p (high-degree coefficients compared first), elements are packed into
integers base p, and for q <= 2^20 multiplication/addition run on discrete-log
tables with a Zech-logarithm table for addition.  Beyond the cap the field
falls back to polynomial-basis arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iter_product

import numpy as np

from ..errors import EvenCharacteristicError, NotPrimeError, TooLargeError

ZECH_CAP = 1 << 20
DEFAULT_MAX_Q = 1 << 26

LOG_ZERO = -1  # sentinel log value for the zero element


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# --- dense polynomial helpers over F_p (ascending coefficient lists) -----------

def _pol_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pol_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _pol_rem(out, mod, p)


def _pol_rem(a, mod, p):
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        _pol_trim(a)
        if len(a) - 1 < dm:
            break
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, m in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * m) % p
        _pol_trim(a)
    return a


def _pol_powmod(a, e, mod, p):
    result = [1]
    base = _pol_rem(a, mod, p)
    while e:
        if e & 1:
            result = _pol_mulmod(result, base, mod, p)
        base = _pol_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _pol_gcd(a, b, p):
    a, b = list(a), list(b)
    while _pol_trim(b):
        a = _pol_rem(a, b, p)
        a, b = b, a
    return _pol_trim(a)


def _is_irreducible(poly, p) -> bool:
    """Rabin's test: x^(p^n) = x mod f, and gcd(x^(p^(n/l)) - x, f) = 1."""
    n = len(poly) - 1
    if n == 1:
        return True
    x = [0, 1]
    xq = _pol_powmod(x, p ** n, poly, p)
    minus_x = _pol_trim([(a - b) % p for a, b in zip(xq + [0] * 2, [0, 1] + [0] * len(xq))])
    if minus_x:
        return False
    for ell in {d for d in range(2, n + 1) if n % d == 0 and is_prime(d)}:
        xe = _pol_powmod(x, p ** (n // ell), poly, p)
        diff = [(a - b) % p for a, b in zip(xe + [0, 0], [0, 1] + [0] * len(xe))]
        g = _pol_gcd(poly, diff, p)
        if len(g) - 1 >= 1:
            return False
    return True


def smallest_irreducible(p: int, n: int) -> tuple:
    """Monic irreducible of degree n, minimal in lex order on (c_{n-1},..,c_0)."""
    if n == 1:
        return (0, 1)  # the polynomial x
    for high_to_low in iter_product(range(p), repeat=n):
        coeffs = list(reversed(high_to_low)) + [1]  # ascending, monic
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise RuntimeError("unreachable: irreducibles exist in every degree")


@dataclass
class FqField:
    """F_{p^n}; elements are integers packing base-p coefficient vectors."""

    p: int
    n: int
    modulus: tuple
    q: int = field(init=False)
    has_tables: bool = field(init=False)
    exp: np.ndarray | None = field(init=False, default=None, repr=False)
    log: np.ndarray | None = field(init=False, default=None, repr=False)
    zech: np.ndarray | None = field(init=False, default=None, repr=False)
    generator: int = field(init=False, default=0)

    def __post_init__(self):
        self.q = self.p ** self.n
        self.has_tables = self.q <= ZECH_CAP
        if self.has_tables:
            self._build_tables()

    # packing helpers
    def _unpack(self, a: int):
        out = []
        for _ in range(self.n):
            out.append(a % self.p)
            a //= self.p
        return out

    def _pack(self, coeffs) -> int:
        a = 0
        for c in reversed(list(coeffs) + [0] * (self.n - len(coeffs))):
            a = a * self.p + c % self.p
        return a

    # scalar arithmetic (packed representation)
    def add(self, a: int, b: int) -> int:
        ca, cb = self._unpack(a), self._unpack(b)
        return self._pack([(x + y) % self.p for x, y in zip(ca, cb)])

    def neg(self, a: int) -> int:
        return self._pack([(-x) % self.p for x in self._unpack(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            return int(self.exp[(int(self.log[a]) + int(self.log[b])) % (self.q - 1)])
        prod = _pol_mulmod(self._unpack(a), self._unpack(b), list(self.modulus), self.p)
        return self._pack(prod)

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        if self.has_tables:
            return int(self.exp[(int(self.log[a]) * e) % (self.q - 1)])
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError
        return self.pow(a, self.q - 2)

    def from_int(self, c: int) -> int:
        return c % self.p

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        order = 1
        x = a
        while x != 1:
            x = self.mul(x, a)
            order += 1
        return order

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def _build_tables(self):
        q, p = self.q, self.p
        # find the smallest primitive element by packed-integer order
        mod = list(self.modulus)
        gen = None
        for cand in range(1, q):
            if self._multiplicative_order_polybasis(cand) == q - 1:
                gen = cand
                break
        assert gen is not None
        self.generator = gen
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, LOG_ZERO, dtype=np.int64)
        x = 1
        gen_coeffs = self._unpack(gen)
        cur = [1]
        for i in range(q - 1):
            packed = self._pack(cur)
            exp[i] = packed
            log[packed] = i
            cur = _pol_mulmod(cur, gen_coeffs, mod, p)
        # zech[i] = log(1 + g^i), LOG_ZERO when 1 + g^i = 0
        zech = np.full(q - 1, LOG_ZERO, dtype=np.int64)
        for i in range(q - 1):
            s = self.add(int(exp[i]), 1)
            zech[i] = LOG_ZERO if s == 0 else int(log[s])
        self.exp = exp
        self.log = log
        self.zech = zech

    def _multiplicative_order_polybasis(self, a: int) -> int:
        mod = list(self.modulus)
        coeffs = self._unpack(a)
        cur = list(coeffs)
        order = 1
        one = [1]
        limit = self.q
        while _pol_trim(list(cur)) != one:
            cur = _pol_mulmod(cur, coeffs, mod, self.p)
            order += 1
            if order > limit:
                raise RuntimeError("order computation overflow")
        return order

    def quad_char(self, a: int) -> int:
        """0 for zero, +1 for nonzero squares, -1 otherwise."""
        if self.p == 2:
            raise EvenCharacteristicError("quadratic character needs odd characteristic")
        if a == 0:
            return 0
        if self.has_tables:
            return 1 if int(self.log[a]) % 2 == 0 else -1
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1


def make_field(p: int, n: int, max_q: int = DEFAULT_MAX_Q) -> FqField:
    """Deterministic field construction; raises NotPrime / TooLarge."""
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if n < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** n > max_q:
        raise TooLargeError(f"q = {p}^{n} exceeds the configured limit {max_q}")
    return FqField(p, n, smallest_irreducible(p, n))


def quad_char(field: FqField, a: int) -> int:
    return field.quad_char(a)
