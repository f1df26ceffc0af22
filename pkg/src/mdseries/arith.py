"""Exact integer arithmetic foundations.

Primes, factorizations, p-adic valuations, and Dirichlet character tables
modulo a prime q.  Characters are kept as exact root-of-unity indices
(integers mod q-1) and only converted to floating complex at evaluation
boundaries, so orthogonality relations stay exact in index space.
"""

from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .limits import FACTOR_INPUT_LIMIT, LPF_SIEVE_LIMIT

# A factorization is ((p1, e1), (p2, e2), ...) with p1 < p2 < ... and e >= 1.
# The factorization of 1 is the empty tuple.
Factorization = tuple


# ---------------------------------------------------------------------------
# prime sieves (grown lazily, shared module-wide)

_sieve_limit = 0
_sieve = None          # np.bool_ array, _sieve[n] == True iff n prime
_primes_list = []      # ascending primes below _sieve_limit

_lpf_limit = 0
_lpf = None            # np.int32 array, _lpf[n] = least prime factor of n


def _grow_sieve(limit: int) -> None:
    global _sieve_limit, _sieve, _primes_list
    if limit <= _sieve_limit:
        return
    limit = max(limit, 1 << 10, 2 * _sieve_limit)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    _sieve = flags
    _sieve_limit = limit
    _primes_list = np.flatnonzero(flags).tolist()


def _grow_lpf(limit: int) -> None:
    global _lpf_limit, _lpf
    if limit <= _lpf_limit:
        return
    limit = min(max(limit, 1 << 16, 2 * _lpf_limit), LPF_SIEVE_LIMIT)
    lpf = np.zeros(limit + 1, dtype=np.int32)
    for i in range(2, math.isqrt(limit) + 1):
        if lpf[i] == 0:
            seg = lpf[i * i :: i]
            seg[seg == 0] = i
    rest = np.flatnonzero(lpf[2:] == 0) + 2
    lpf[rest] = rest.astype(np.int32)
    _lpf = lpf
    _lpf_limit = limit


def primes_up_to(P: int) -> list[int]:
    """All primes <= P, ascending."""
    if P < 2:
        return []
    _grow_sieve(P)
    return _primes_list[: bisect.bisect_right(_primes_list, P)]


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (valid far beyond the 10^12 input cap)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int, *, limit: int = FACTOR_INPUT_LIMIT) -> Factorization:
    """Exact prime factorization of n >= 1 as ((p, e), ...), p ascending.

    Uses a least-prime-factor sieve for small n and trial division by sieved
    primes beyond; inputs above `limit` are rejected.
    """
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    if n > limit:
        raise ValueError(f"factorize input {n} exceeds the cap {limit}")
    if n == 1:
        return ()
    if n <= _lpf_limit or n <= LPF_SIEVE_LIMIT // 4:
        _grow_lpf(n)
    if n <= _lpf_limit:
        out = []
        lpf = _lpf
        while n > 1:
            p = int(lpf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return tuple(out)
    out = []
    _grow_sieve(math.isqrt(n) + 1)
    for p in _primes_list:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def valuation(p: int, x: int) -> int:
    """p-adic valuation v_p(x): the largest k with p^k | x.  p must be prime."""
    if not is_prime(p):
        raise ValueError(f"valuation requires a prime p, got {p}")
    if x < 1:
        raise ValueError(f"valuation requires x >= 1, got {x}")
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


# ---------------------------------------------------------------------------
# Dirichlet characters mod an odd prime q

@lru_cache(maxsize=64)
def _unit_roots(order: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * math.pi * r / order) for r in range(order))


@dataclass(frozen=True)
class CharacterTable:
    """Discrete-log table defining the q-1 Dirichlet characters mod a prime q.

    g generates (Z/qZ)* and log[g^a mod q] = a; character k sends g^a to the
    unit root exp(2*pi*i * k*a / (q-1)).  Negative k means the conjugate
    character (indices live mod q-1).
    """

    q: int
    g: int
    log: tuple     # length q; log[0] = -1 sentinel, log[n] = discrete log of n

    @property
    def order(self) -> int:
        return self.q - 1

    def log_of(self, n: int) -> int:
        """Discrete log of n mod q, or -1 when q | n."""
        return self.log[n % self.q]

    def char_index(self, k: int, n: int):
        """Root-of-unity index of chi_k(n) mod q-1, or None when q | n."""
        a = self.log[n % self.q]
        if a < 0:
            return None
        return (k * a) % (self.q - 1)

    def char_value(self, k: int, n: int) -> complex:
        idx = self.char_index(k, n)
        if idx is None:
            return 0j
        return _unit_roots(self.q - 1)[idx]


def character_table(q: int) -> CharacterTable:
    """Build the character table mod an odd prime q.

    The generator is the smallest primitive root, found by checking orders
    against the prime factorization of q-1.
    """
    if q < 3 or q % 2 == 0 or not is_prime(q):
        raise ValueError(f"character table needs an odd prime modulus, got {q}")
    phi = q - 1
    prime_divs = [p for p, _ in factorize(phi)]
    g = None
    for cand in range(2, q):
        if all(pow(cand, phi // r, q) != 1 for r in prime_divs):
            g = cand
            break
    if g is None:  # unreachable for prime q
        raise ValueError(f"no primitive root mod {q}")
    log = [-1] * q
    cur = 1
    for a in range(phi):
        log[cur] = a
        cur = cur * g % q
    return CharacterTable(q=q, g=g, log=tuple(log))


def char_eval(table: CharacterTable, k: int, n: int) -> complex:
    """chi_k(n) as a complex number; 0 when q | n.

    k is taken mod q-1, so negative k selects the conjugate character.
    """
    return table.char_value(k, n)
