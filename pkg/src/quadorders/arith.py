"""Exact integer arithmetic: factorization, primality testing, Kronecker symbol.

Everything here is pure and deterministic; no floating point is used in any
verdict.  Primality is proven for n < 2**64 (fixed Miller-Rabin base set) and
Baillie-PSW ("probable") above; `is_prime_proven` tells callers which regime
applies so reports can label verdicts honestly.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Iterator

from .errors import DomainError, ResourceBudgetError

TRIAL_DIVISION_LIMIT = 10**6
PRIMALITY_PROOF_LIMIT = 2**64

# These twelve bases give a deterministic Miller-Rabin test for all
# n < 3.3 * 10**24, comfortably past 2**64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_sieve_primes: list[int] = []
_sieve_limit = 0


def primes_up_to(n: int) -> list[int]:
    """All primes <= n, by a cached sieve of Eratosthenes."""
    global _sieve_primes, _sieve_limit
    if n > _sieve_limit:
        limit = max(n, 2 * _sieve_limit, 1 << 16)
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, math.isqrt(limit) + 1):
            if sieve[p]:
                start = p * p
                sieve[start :: p] = bytearray(len(range(start, limit + 1, p)))
        _sieve_primes = [i for i, v in enumerate(sieve) if v]
        _sieve_limit = limit
    if n == _sieve_limit:
        return list(_sieve_primes)
    import bisect

    return _sieve_primes[: bisect.bisect_right(_sieve_primes, n)]


def _mr_composite_witness(n: int, a: int) -> bool:
    """True if a witnesses that odd n > 2 is composite."""
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def _lucas_prp(n: int) -> bool:
    """Strong Lucas probable-prime test with Selfridge's parameter choice."""
    # find D = 5, -7, 9, -11, ... with (D/n) = -1
    d = 5
    while True:
        k = kronecker(d, n)
        if k == -1:
            break
        if k == 0 and abs(d) != n:
            return False
        if d > 0:
            d = -(d + 2)
        else:
            d = -(d - 2)
    q = (1 - d) // 4
    # n + 1 = s * 2^r with s odd
    s = n + 1
    r = 0
    while s % 2 == 0:
        s //= 2
        r += 1
    # compute U_s, V_s mod n by binary chain on bits of s
    u, v, qk = 1, 1, q % n
    for bit in bin(s)[3:]:
        u = u * v % n
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (u + v) % n, (v + d * u) % n
            if u % 2:
                u += n
            if v % 2:
                v += n
            u, v = u // 2 % n, v // 2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(r - 1):
        v = (v * v - 2 * qk) % n
        if v == 0:
            return True
        qk = qk * qk % n
    return False


def is_prime(n: int) -> bool:
    """Primality of n >= 1: proven below 2**64, Baillie-PSW above."""
    if n < 1:
        raise DomainError(f"is_prime expects n >= 1, got {n}")
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    if n < PRIMALITY_PROOF_LIMIT:
        return not any(_mr_composite_witness(n, a) for a in _MR_BASES)
    # Baillie-PSW: no pseudoprime is known; verdict is "strong probable prime"
    if _mr_composite_witness(n, 2):
        return False
    x = math.isqrt(n)
    if x * x == n:
        return False
    return _lucas_prp(n)


def is_prime_proven(n: int) -> bool:
    """True when is_prime(n) is a proof rather than a probable-prime verdict."""
    return n < PRIMALITY_PROOF_LIMIT


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), fully extended to all integers n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    t = 1
    if n < 0:
        n = -n
        if a < 0:
            t = -t
    while n % 2 == 0:
        n //= 2
        if a % 8 in (3, 5):
            t = -t
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def _pollard_brent(n: int) -> int:
    """A nontrivial factor of odd composite n, deterministic seed schedule."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ResourceBudgetError(f"pollard rho failed to split {n}")


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer with its full prime-power factorization.

    `factors` is sorted by prime; the product of p**e recovers `value`.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if e < 1 or p <= last:
                raise DomainError(f"malformed factorization of {self.value}")
            last = p
            prod *= p**e
        if prod != self.value or self.value < 1:
            raise DomainError(f"factorization does not multiply to {self.value}")

    def omega(self) -> int:
        """Number of distinct prime factors."""
        return len(self.factors)

    def big_omega(self) -> int:
        """Number of prime factors counted with multiplicity."""
        return sum(e for _, e in self.factors)

    def radical(self) -> int:
        """Product of the distinct prime factors."""
        return math.prod(p for p, _ in self.factors)

    def divisor_count(self) -> int:
        return math.prod(e + 1 for _, e in self.factors)

    def divisors(self) -> list[int]:
        """All positive divisors, ascending."""
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**i for d in divs for i in range(e + 1)]
        return sorted(divs)

    def prime_powers(self) -> list[tuple[int, int, int]]:
        """List of (p, k, p**k) over the prime-power decomposition."""
        return [(p, k, p**k) for p, k in self.factors]

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def factor(n: int) -> FactoredInteger:
    """Complete factorization of n >= 1; deterministic for a given n."""
    if n < 1:
        raise DomainError(f"factor expects n >= 1, got {n}")
    counts: dict[int, int] = {}
    left = n
    for p in (2, 3, 5):
        while left % p == 0:
            counts[p] = counts.get(p, 0) + 1
            left //= p
    p = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= left and p < TRIAL_DIVISION_LIMIT:
        while left % p == 0:
            counts[p] = counts.get(p, 0) + 1
            left //= p
        p += wheel[i]
        i = (i + 1) % 8
    stack = [left] if left > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.append(d)
        stack.append(m // d)
    return FactoredInteger(n, tuple(sorted(counts.items())))


def factor_partial(n: int, budget_s: float) -> tuple[dict[int, int], int, bool]:
    """Best-effort factorization of n >= 1 within a wall-clock budget.

    Returns (prime factors found with multiplicity, unfactored cofactor,
    complete flag).  The cofactor is 1 when complete; otherwise it is a
    composite (or too-costly) remainder.  Never lies: every returned prime
    passes is_prime and the product identity holds exactly.
    """
    if n < 1:
        raise DomainError(f"factor_partial expects n >= 1, got {n}")
    deadline = time.monotonic() + budget_s
    counts: dict[int, int] = {}
    left = n
    for p in primes_up_to(10**5):
        if p * p > left:
            break
        while left % p == 0:
            counts[p] = counts.get(p, 0) + 1
            left //= p
    stack = [left] if left > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        if time.monotonic() > deadline:
            # give the remainder back unfactored
            rem = m
            for o in stack:
                rem *= o
            return counts, rem, False
        try:
            d = _pollard_brent(m)
        except ResourceBudgetError:
            rem = m
            for o in stack:
                rem *= o
            return counts, rem, False
        stack.append(d)
        stack.append(m // d)
    return counts, 1, True


def divisors_of(n: int) -> list[int]:
    return factor(n).divisors()


def iter_prime_powers(limit: int) -> Iterator[tuple[int, int, int]]:
    """Yield (p, k, p**k) for all prime powers p**k <= limit, p**k >= 2."""
    for p in primes_up_to(limit):
        q, k = p, 1
        while q <= limit:
            yield p, k, q
            q *= p
            k += 1
