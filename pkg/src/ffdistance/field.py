"""Prime-field arithmetic and the canonical additive character e_q(t) = exp(2 pi i t / q)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class FieldError(ValueError):
    """Raised for invalid moduli or undefined field operations."""


def is_prime(n: int) -> bool:
    """Deterministic trial division."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for f in range(3, math.isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """Odd primes p with lo <= p <= hi."""
    return [p for p in range(max(lo, 3), hi + 1) if is_prime(p)]


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """An odd prime modulus with lookup tables for roots of unity and inverses.

    ``roots[t]`` holds exp(2 pi i t / q); ``inverses[a]`` holds a^{-1} mod q
    for 1 <= a < q (index 0 is unused and set to 0).
    """

    q: int
    roots: np.ndarray = field(init=False, repr=False)
    inverses: np.ndarray = field(init=False, repr=False)
    squares: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        q = self.q
        if not isinstance(q, (int, np.integer)) or isinstance(q, bool):
            raise FieldError(f"modulus must be an integer, got {q!r}")
        q = int(q)
        if q < 3 or not is_prime(q):
            raise FieldError(f"modulus must be an odd prime, got {q}")
        object.__setattr__(self, "q", q)

        t = np.arange(q)
        roots = np.exp(2j * np.pi * t / q)
        roots[0] = 1.0
        roots.setflags(write=False)

        inverses = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inverses[a] = pow(a, -1, q)
        inverses.setflags(write=False)

        # squares[a] is True iff a is a nonzero square
        squares = np.zeros(q, dtype=bool)
        squares[(t[1:] * t[1:]) % q] = True
        squares.setflags(write=False)

        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "inverses", inverses)
        object.__setattr__(self, "squares", squares)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and other.q == self.q

    def __hash__(self):
        return hash(("FieldCtx", self.q))

    def __reduce__(self):
        return (FieldCtx, (self.q,))

    def reduce(self, a: int) -> int:
        return int(a) % self.q


def mod_inverse(a: int, ctx: FieldCtx) -> int:
    a = int(a) % ctx.q
    if a == 0:
        raise FieldError("zero has no inverse")
    return int(ctx.inverses[a])


def legendre(a: int, ctx: FieldCtx) -> int:
    """Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise."""
    a = int(a) % ctx.q
    if a == 0:
        return 0
    return 1 if ctx.squares[a] else -1


def legendre_table(ctx: FieldCtx) -> np.ndarray:
    """Vector of legendre(a) for a = 0..q-1."""
    chi = np.where(ctx.squares, 1, -1).astype(np.int64)
    chi[0] = 0
    return chi


def unit_root(t: int, ctx: FieldCtx) -> complex:
    return complex(ctx.roots[int(t) % ctx.q])
