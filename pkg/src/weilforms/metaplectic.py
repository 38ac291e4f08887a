"""The metaplectic double cover Mp2(Z) of SL2(Z).

Elements are pairs (M, phi) with M = (a b; c d) integral of determinant one
and phi a holomorphic square root of c*tau + d on the upper half plane.  We
encode phi by a sign eps relative to the principal branch, with the
convention that for c = 0, d < 0 the principal value is i*sqrt(|d|) (the
limit from the upper half plane).

The cocycle sign in products is determined exactly by evaluating both
candidate branches at the probe point tau0 = 2i: the two candidates differ
by a factor of -1, so double precision separates them with an enormous
margin.  Words over the generators

    T = ((1 1; 0 1), 1),   S = ((0 -1; 1 0), sqrt(tau))

are produced by continued-fraction reduction of the bottom row; the center
is generated by Z = S^2 = ((-1 0; 0 -1), i) with Z^4 = 1, and residual
Z-powers are kept explicit rather than expanded into S's.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

_TAU0 = 2j


def _principal_phi(c: int, d: int, tau: complex) -> complex:
    w = complex(d) if c == 0 else c * tau + d
    return cmath.sqrt(w)


@dataclass(frozen=True)
class MpElement:
    a: int
    b: int
    c: int
    d: int
    eps: int = 1

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("matrix must have determinant 1")
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")

    @property
    def matrix(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def act(self, tau: complex) -> complex:
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def phi(self, tau: complex) -> complex:
        """Value of the branch at tau."""
        return self.eps * _principal_phi(self.c, self.d, tau)

    def inv(self) -> "MpElement":
        cand = MpElement(self.d, -self.b, -self.c, self.a, 1)
        if mp_mul(self, cand) == MP_IDENTITY:
            return cand
        return MpElement(self.d, -self.b, -self.c, self.a, -1)

    def __matmul__(self, other: "MpElement") -> "MpElement":
        return mp_mul(self, other)

    def __repr__(self):
        sign = "+" if self.eps == 1 else "-"
        return f"MpElement(({self.a} {self.b}; {self.c} {self.d}), {sign})"


def mp_tilde(matrix: tuple[int, int, int, int]) -> MpElement:
    """The standard lift (M, principal sqrt(c*tau + d))."""
    a, b, c, d = matrix
    return MpElement(a, b, c, d, 1)


def mp_mul(g1: MpElement, g2: MpElement) -> MpElement:
    """Product in Mp2(Z): (M1, phi1)(M2, phi2) = (M1 M2, phi1(M2 tau) phi2(tau))."""
    a = g1.a * g2.a + g1.b * g2.c
    b = g1.a * g2.b + g1.b * g2.d
    c = g1.c * g2.a + g1.d * g2.c
    d = g1.c * g2.b + g1.d * g2.d
    val = g1.phi(g2.act(_TAU0)) * g2.phi(_TAU0)
    ref = _principal_phi(c, d, _TAU0)
    dplus = abs(val - ref)
    dminus = abs(val + ref)
    if not (max(dplus, dminus) > 100 * min(dplus, dminus)):
        raise ArithmeticError("branch sign probe is ambiguous; this should not happen")
    return MpElement(a, b, c, d, 1 if dplus < dminus else -1)


def mp_pow(g: MpElement, n: int) -> MpElement:
    if n < 0:
        return mp_pow(g.inv(), -n)
    out = MP_IDENTITY
    base = g
    while n:
        if n & 1:
            out = mp_mul(out, base)
        n >>= 1
        if n:
            base = mp_mul(base, base)
    return out


MP_IDENTITY = MpElement(1, 0, 0, 1, 1)
MP_T = MpElement(1, 1, 0, 1, 1)
MP_S = MpElement(0, -1, 1, 0, 1)
MP_Z = mp_mul(MP_S, MP_S)  # ((-1 0; 0 -1), i); generates the center, order 4

_GENERATORS = {
    "T": MP_T,
    "T'": MP_T.inv(),
    "S": MP_S,
    "S'": MP_S.inv(),
    "Z": MP_Z,
}


@dataclass(frozen=True)
class Word:
    """A word over {S, S', T, T'} together with a residual center power.

    The element represented is (product of tokens, left to right) * Z^z_power.
    """

    tokens: tuple[str, ...]
    z_power: int = 0

    def __post_init__(self):
        for t in self.tokens:
            if t not in ("S", "S'", "T", "T'"):
                raise ValueError(f"bad token {t!r}")
        if self.z_power not in (0, 1, 2, 3):
            raise ValueError("z_power must lie in 0..3")

    def __len__(self):
        return len(self.tokens)

    def to_element(self) -> MpElement:
        out = MP_IDENTITY
        for t in self.tokens:
            out = mp_mul(out, _GENERATORS[t])
        for _ in range(self.z_power):
            out = mp_mul(out, MP_Z)
        return out


def parse_word(text: str) -> Word:
    """Parse a whitespace-separated token string; Z tokens fold into z_power."""
    tokens: list[str] = []
    zp = 0
    for t in text.split():
        if t == "Z":
            zp += 1
        elif t in ("S", "S'", "T", "T'"):
            tokens.append(t)
        else:
            raise ValueError(f"unknown token {t!r}")
    return Word(tuple(tokens), zp % 4)


def _t_power(n: int) -> MpElement:
    return MpElement(1, n, 0, 1, 1)


def _t_tokens(n: int) -> list[str]:
    return ["T"] * n if n >= 0 else ["T'"] * (-n)


def mp_decompose(g: MpElement) -> Word:
    """Write g as a word in S, T and a residual center power, exactly.

    The bottom row is reduced by a nearest-integer continued fraction, so
    the word length is O(log of the largest entry).
    """
    r = g
    applied: list[tuple] = []  # right factors, in application order
    while r.c != 0:
        q = round(Fraction(r.d, r.c))
        if q:
            r = mp_mul(r, _t_power(-q))
            applied.append(("T", -q))
        r = mp_mul(r, MP_S)
        applied.append(("S",))
    # r is now upper triangular: (+-1, e; 0, +-1)
    tokens: list[str]
    if r.a == 1:
        tokens = _t_tokens(r.b)
        zbase = 0 if r.eps == 1 else 2
    else:
        # (-1, e; 0, -1) = Z * T^(-e) up to center
        tokens = _t_tokens(-r.b)
        zbase = None
        for p in (1, 3):
            cand = mp_pow(MP_Z, p)
            for t in tokens:
                cand = mp_mul(cand, _GENERATORS[t])
            if cand == r:
                zbase = p
                break
        if zbase is None:  # pragma: no cover - the center has order 4
            raise ArithmeticError("failed to match center power")
        tokens = tokens  # Z commutes; keep it in z_power
    for kind in reversed(applied):
        if kind[0] == "S":
            tokens.append("S'")
        else:
            tokens.extend(_t_tokens(-kind[1]))
    word = Word(tuple(tokens), zbase)
    if word.to_element() != g:  # pragma: no cover - exactness guard
        raise ArithmeticError("decomposition failed to reproduce the element")
    return word
