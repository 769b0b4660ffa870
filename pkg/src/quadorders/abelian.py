"""Finite abelian groups by invariant factors; Davenport constants and bounds.

The Davenport constant D(G) is the least length forcing a nonempty zero-sum
subsequence.  Exact values come from the cyclic identity D(C_n) = n or from
an exhaustive zero-sum-free search; otherwise the interval
[1 + sum(d_i - 1), floor(#G * (1 + ln r)/r)] is reported, with the upper
bound certified by exact rational bracketing of the logarithm.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .errors import DomainError, ResourceBudgetError


@dataclass(frozen=True)
class AbelianGroup:
    """Invariant factors d_1 | d_2 | ... | d_r, each >= 2; () is trivial."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        prev = 1
        for d in self.invariant_factors:
            if d < 2 or d % prev:
                raise DomainError(
                    f"invalid invariant factors {self.invariant_factors}"
                )
            prev = d

    @classmethod
    def from_cyclic_factors(cls, factors) -> "AbelianGroup":
        """Normalize an arbitrary list of cyclic orders (>= 1) to invariant
        factors via elementary divisors."""
        by_prime: dict[int, list[int]] = {}
        for d in factors:
            if d < 1:
                raise DomainError(f"cyclic factor {d} < 1")
            if d == 1:
                continue
            left = d
            p = 2
            while p * p <= left:
                if left % p == 0:
                    e = 0
                    while left % p == 0:
                        left //= p
                        e += 1
                    by_prime.setdefault(p, []).append(e)
                p += 1
            if left > 1:
                by_prime.setdefault(left, []).append(1)
        cols = [sorted(es, reverse=True) for es in by_prime.values()]
        primes = list(by_prime)
        rank = max((len(c) for c in cols), default=0)
        inv = []
        for i in range(rank):
            d = 1
            for p, col in zip(primes, cols):
                if i < len(col):
                    d *= p ** col[i]
            inv.append(d)
        return cls(tuple(sorted(inv)))

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def rank2(self) -> int:
        return sum(1 for d in self.invariant_factors if d % 2 == 0)

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    def r_index(self) -> int:
        """#G / Exp G; an integer since the exponent divides the order."""
        return self.order // self.exponent

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "1"
        return " x ".join(f"C{d}" for d in self.invariant_factors)


TRIVIAL_GROUP = AbelianGroup(())


class DavenportMethod(enum.Enum):
    CYCLIC_EXACT = "cyclic_exact"
    BRUTE_FORCE = "brute_force"
    BOUNDS_ONLY = "bounds_only"


@dataclass(frozen=True)
class DavenportResult:
    lower: int
    upper: int
    exact: bool
    method: DavenportMethod

    def __post_init__(self):
        if self.lower > self.upper or self.exact != (self.lower == self.upper):
            raise DomainError("inconsistent Davenport interval")


def _unit_scalings(d: int) -> list[int]:
    return [c for c in range(1, d) if math.gcd(c, d) == 1] or [1]


def _first_element_reps(factors: tuple[int, ...], elems, index) -> list[int]:
    """One representative per orbit of nonidentity elements under coordinate
    unit scalings and permutations of equal moduli.  Zero-sum-freeness is
    automorphism invariant, so the first sequence element may be restricted
    to these orbit representatives."""
    units = [_unit_scalings(d) for d in factors]
    combos = [()]
    for us in units:
        combos = [c + (u,) for c in combos for u in us]
    perms = [
        p
        for p in permutations(range(len(factors)))
        if all(factors[p[i]] == factors[i] for i in range(len(factors)))
    ]
    seen: set[int] = set()
    reps = []
    for i, e in enumerate(elems):
        if i == 0 or i in seen:
            continue
        reps.append(i)
        for us in combos:
            v = tuple(x * u % d for x, u, d in zip(e, us, factors))
            for p in perms:
                seen.add(index[tuple(v[j] for j in p)])
    return reps


_dav_cache: dict[tuple[int, ...], int] = {}
_dav_lock = threading.Lock()


def davenport_bruteforce(group: AbelianGroup, cap: int = 64) -> int:
    """Exact Davenport constant by exhaustive zero-sum-free search.

    Sequences are explored in nondecreasing element order; the state is the
    set of nonempty subset sums as a bitmask over group elements, and a
    branch is cut as soon as the identity becomes a subset sum.  Since each
    appended element strictly enlarges the sum set, n - 1 - popcount(sums)
    bounds the remaining length, which prunes the search hard.
    """
    n = group.order
    if n > cap:
        raise ResourceBudgetError(f"group order {n} exceeds brute-force cap {cap}")
    factors = group.invariant_factors
    if not factors:
        return 1
    with _dav_lock:
        cached = _dav_cache.get(factors)
    if cached is not None:
        return cached
    elems = [()]
    for d in factors:
        elems = [e + (r,) for e in elems for r in range(d)]
    index = {e: i for i, e in enumerate(elems)}
    # byte-chunked translation tables: applying "add e" to a sum bitmask costs
    # one lookup per byte of the mask instead of one per set bit
    nbytes = (n + 7) // 8
    tables = []
    for e in elems:
        add_e = [
            index[tuple((x + y) % d for x, y, d in zip(e, f, factors))]
            for f in elems
        ]
        per_byte = []
        for pos in range(nbytes):
            row = [0] * 256
            for byte in range(1, 256):
                low = byte & -byte
                s = pos * 8 + low.bit_length() - 1
                row[byte] = row[byte ^ low] | (
                    1 << add_e[s] if s < n else 0
                )
            per_byte.append(row)
        tables.append(per_byte)

    memo: dict[tuple[int, int], int] = {}

    def extend(mask: int, lo: int) -> int:
        key = (mask, lo)
        hit = memo.get(key)
        if hit is not None:
            return hit
        best = 0
        headroom = n - 1 - mask.bit_count()
        for e in range(lo, n):
            if headroom <= best:
                break
            per_byte = tables[e]
            new_mask = mask | (1 << e)
            m = mask
            pos = 0
            while m:
                new_mask |= per_byte[pos][m & 255]
                m >>= 8
                pos += 1
            if new_mask & 1:
                continue
            if 1 + (n - 1 - new_mask.bit_count()) <= best:
                continue
            got = 1 + extend(new_mask, e)
            if got > best:
                best = got
        memo[key] = best
        return best

    longest = 0
    for e in _first_element_reps(factors, elems, index):
        got = 1 + extend(1 << e, e)
        if got > longest:
            longest = got
    return 1 + longest


def davenport_lower(group: AbelianGroup) -> int:
    """The classical lower bound 1 + sum(d_i - 1)."""
    return 1 + sum(d - 1 for d in group.invariant_factors)


def _ln_bounds(r: int, terms: int) -> tuple[Fraction, Fraction]:
    """Exact rational bracket (lo, hi) with lo < ln(r) < hi, r >= 2.

    Uses ln r = k*ln 2 + ln q with q = r / 2^k in [1, 2) and the atanh
    series 2*sum x^(2j+1)/(2j+1), x = (q-1)/(q+1) <= 1/3, whose tail is
    bounded by a geometric series.
    """

    def atanh2_bounds(x: Fraction) -> tuple[Fraction, Fraction]:
        if x == 0:
            return Fraction(0), Fraction(0)
        total = Fraction(0)
        power = x
        x2 = x * x
        for j in range(terms):
            total += power / (2 * j + 1)
            power *= x2
        tail = power / ((2 * terms + 1) * (1 - x2))
        return 2 * total, 2 * (total + tail)

    k = r.bit_length() - 1
    q = Fraction(r, 1 << k)
    lo_q, hi_q = atanh2_bounds((q - 1) / (q + 1))
    lo_2, hi_2 = atanh2_bounds(Fraction(1, 3))
    return k * lo_2 + lo_q, k * hi_2 + hi_q


def ebk_upper(group: AbelianGroup) -> int:
    """floor(#G * (1 + ln r)/r) with r = #G / Exp G, certified exactly."""
    n = group.order
    if n == 1:
        return 1
    r = group.r_index()
    if r == 1:
        return n
    terms = 16
    while True:
        lo, hi = _ln_bounds(r, terms)
        val_lo = n * (1 + lo) / r
        val_hi = n * (1 + hi) / r
        if val_lo.__floor__() == val_hi.__floor__():
            return val_lo.__floor__()
        terms *= 2


def davenport(group: AbelianGroup, budget: int = 64) -> DavenportResult:
    """Davenport constant: exact where cheap, a certified interval otherwise."""
    n = group.order
    if group.is_cyclic:
        return DavenportResult(n, n, True, DavenportMethod.CYCLIC_EXACT)
    if n <= budget:
        d = davenport_bruteforce(group, cap=budget)
        return DavenportResult(d, d, True, DavenportMethod.BRUTE_FORCE)
    lower = davenport_lower(group)
    upper = max(lower, ebk_upper(group))
    return DavenportResult(lower, upper, lower == upper, DavenportMethod.BOUNDS_ONLY)


def rank2_exponent_bound_check(group: AbelianGroup) -> bool:
    """Whether Exp G * 2^(rk2 - 1) divides #G, stated as an integer test."""
    return (2 * group.order) % (group.exponent << group.rank2) == 0


def _smith_diagonal(rows: list[list[int]]) -> list[int]:
    """Diagonal of the Smith normal form of an integer matrix (in-place on a
    copy), as nonnegative integers d_1 | d_2 | ... including zeros."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    diag = []
    top = 0
    while top < min(nrows, ncols):
        # locate a nonzero pivot of least magnitude
        pivot = None
        for i in range(top, nrows):
            for j in range(top, ncols):
                v = mat[i][j]
                if v and (pivot is None or abs(v) < abs(pivot[2])):
                    pivot = (i, j, v)
        if pivot is None:
            break
        pi, pj, _ = pivot
        mat[top], mat[pi] = mat[pi], mat[top]
        for row in mat:
            row[top], row[pj] = row[pj], row[top]
        while True:
            # clear column
            again = False
            for i in range(top + 1, nrows):
                if mat[i][top]:
                    q = mat[i][top] // mat[top][top]
                    for j in range(top, ncols):
                        mat[i][j] -= q * mat[top][j]
                    if mat[i][top]:
                        mat[top], mat[i] = mat[i], mat[top]
                        again = True
            if again:
                continue
            # clear row
            for j in range(top + 1, ncols):
                if mat[top][j]:
                    q = mat[top][j] // mat[top][top]
                    for i in range(top, nrows):
                        mat[i][j] -= q * mat[i][top]
                    if mat[top][j]:
                        for i in range(top, nrows):
                            mat[i][top], mat[i][j] = mat[i][j], mat[i][top]
                        again = True
            if again:
                continue
            # enforce divisibility of the rest by the pivot
            bad = None
            for i in range(top + 1, nrows):
                for j in range(top + 1, ncols):
                    if mat[i][j] % mat[top][top]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            for j in range(top, ncols):
                mat[top][j] += mat[bad][j]
        diag.append(abs(mat[top][top]))
        top += 1
    diag += [0] * (min(nrows, ncols) - len(diag))
    return diag


def quotient_structure(relations, generators: int) -> AbelianGroup:
    """Structure of Z^generators modulo the lattice spanned by the relation
    rows; the presentation must define a finite group."""
    if generators == 0:
        return TRIVIAL_GROUP
    rows = [list(r) + [0] * (generators - len(r)) for r in relations]
    for r in rows:
        if len(r) != generators:
            raise DomainError("relation row longer than generator count")
    if not rows:
        raise DomainError("presentation defines an infinite group")
    diag = _smith_diagonal(rows)
    if len(diag) < generators or any(d == 0 for d in diag):
        raise DomainError("presentation defines an infinite group")
    return AbelianGroup.from_cyclic_factors(d for d in diag if d > 1)


def abelian_groups_of_order(n: int) -> list[AbelianGroup]:
    """Every abelian group of order n, as invariant-factor shapes."""
    if n < 1:
        raise DomainError(f"order must be positive, got {n}")
    if n == 1:
        return [TRIVIAL_GROUP]

    def partitions(e: int, most: int):
        if e == 0:
            yield ()
            return
        for first in range(min(e, most), 0, -1):
            for rest in partitions(e - first, first):
                yield (first,) + rest

    from .arith import factor

    per_prime = []
    for p, e in factor(n).factors:
        per_prime.append([(p, part) for part in partitions(e, e)])
    shapes = [[]]
    for options in per_prime:
        shapes = [s + [opt] for s in shapes for opt in options]
    groups = []
    for shape in shapes:
        cyc = [p**e for p, part in shape for e in part]
        groups.append(AbelianGroup.from_cyclic_factors(cyc))
    return groups
