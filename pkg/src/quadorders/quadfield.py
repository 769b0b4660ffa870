"""Quadratic field data: discriminant, splitting behavior, fundamental unit.

A field Q(sqrt(D)) is described by its unique squarefree D.  The ring of
integers has Z-basis {1, tau} where tau = sqrt(D) for D = 2, 3 (mod 4) and
tau = (1 + sqrt(D))/2 for D = 1 (mod 4).  All unit computations are exact:
the fundamental unit is stored as rational coordinates with denominator
1 or 2, never as a float.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from .arith import factor, is_prime, kronecker
from .errors import DomainError


class TauKind(enum.Enum):
    SQRT_D = "sqrt_d"
    HALF_ONE_PLUS_SQRT_D = "half_one_plus_sqrt_d"


class SplittingType(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class QuadField:
    """The quadratic field Q(sqrt(D)) for squarefree D != 0, 1."""

    D: int
    disc: int
    tau_kind: TauKind

    @property
    def real(self) -> bool:
        return self.D > 0

    def __str__(self) -> str:
        return f"Q(sqrt({self.D}))"


def new_field(D: int) -> QuadField:
    """Validated construction; rejects non-squarefree or degenerate D."""
    if D in (0, 1):
        raise DomainError(f"D = {D} does not define a quadratic field")
    if any(e > 1 for _, e in factor(abs(D)).factors):
        raise DomainError(f"D = {D} is not squarefree")
    if D % 4 == 1:
        return QuadField(D, D, TauKind.HALF_ONE_PLUS_SQRT_D)
    return QuadField(D, 4 * D, TauKind.SQRT_D)


def splitting_type(field: QuadField, p: int) -> SplittingType:
    """Behavior of the rational prime p in the maximal order."""
    if p < 2 or not is_prime(p):
        raise DomainError(f"{p} is not prime")
    k = kronecker(field.disc, p)
    if k == 1:
        return SplittingType.SPLIT
    if k == -1:
        return SplittingType.INERT
    return SplittingType.RAMIFIED


def is_split_free(field: QuadField, f: int) -> bool:
    """True when no prime factor of f splits in the field."""
    if f < 1:
        raise DomainError(f"conductor must be positive, got {f}")
    return all(kronecker(field.disc, p) != 1 for p, _ in factor(f).factors)


def unit_group_size(field: QuadField) -> int:
    """Number of roots of unity in an imaginary quadratic field."""
    if field.real:
        raise DomainError("unit_group_size applies to imaginary fields only")
    if field.D == -3:
        return 6
    if field.D == -1:
        return 4
    return 2


@dataclass(frozen=True)
class FundamentalUnit:
    """The unit eps = u + v*sqrt(D) > 1 generating the units modulo +-1.

    u and v are nonnegative rationals with denominator 1 or 2 (both
    half-integral exactly when the unit lies outside Z[sqrt(D)]).
    """

    field: QuadField
    u: Fraction
    v: Fraction
    norm: int

    def tau_coords(self) -> tuple[int, int]:
        """Integer coordinates (A, B) with eps = A + B*tau."""
        if self.field.tau_kind is TauKind.SQRT_D:
            return int(self.u), int(self.v)
        # sqrt(D) = 2*tau - 1
        return int(self.u - self.v), int(2 * self.v)

    def trace(self) -> int:
        """2u, an integer; eps satisfies eps^2 = trace*eps - norm."""
        t = 2 * self.u
        return int(t)

    def __str__(self) -> str:
        if self.u.denominator == 2:
            return f"({2 * self.u} + {2 * self.v}*sqrt({self.field.D}))/2"
        return f"{self.u} + {self.v}*sqrt({self.field.D})"


def _pell_min_solution(D: int) -> tuple[int, int, int]:
    """Least (x, y), y >= 1, with x*x - D*y*y = +-1, via the continued
    fraction of sqrt(D); the third component is the achieved sign."""
    a0 = math.isqrt(D)
    P, Q, a = 0, 1, a0
    p_cur, p_prev = a0, 1
    q_cur, q_prev = 1, 0
    i = 0
    while True:
        i += 1
        P = a * Q - P
        Q = (D - P * P) // Q
        if Q == 1:
            return p_cur, q_cur, (-1) ** i
        a = (a0 + P) // Q
        p_cur, p_prev = a * p_cur + p_prev, p_cur
        q_cur, q_prev = a * q_cur + q_prev, q_cur


def _icbrt(n: int) -> int:
    """Floor of the cube root of n >= 0."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            return x
        x = y


_unit_cache: dict[int, FundamentalUnit] = {}
_unit_lock = threading.Lock()


def fundamental_unit(field: QuadField) -> FundamentalUnit:
    """Minimal unit > 1 of the maximal order (not merely of Z[sqrt(D)])."""
    if not field.real:
        raise DomainError("imaginary fields have no fundamental unit")
    with _unit_lock:
        cached = _unit_cache.get(field.D)
        if cached is not None:
            return cached
        unit = _compute_fundamental_unit(field)
        _unit_cache[field.D] = unit
        return unit


def _compute_fundamental_unit(field: QuadField) -> FundamentalUnit:
    D = field.D
    x1, y1, nrm = _pell_min_solution(D)
    if D % 4 == 1:
        # The unit index [O_K^x : Z[sqrt(D)]^x] is 1 or 3.  Index 3 means the
        # minimal Z[sqrt(D)]-unit is a cube: x1 + y1*sqrt(D) = ((u+v*sqrt(D))/2)^3
        # with u, v odd, which pins u by the integer cubic u(u^2 - 3s) = 2*x1.
        s = nrm
        target = 2 * x1
        u0 = _icbrt(target)
        for u in range(max(1, u0 - 2), u0 + 4):
            if u % 2 == 0 or u * (u * u - 3 * s) != target:
                continue
            num = u * u - 4 * s
            if num <= 0 or num % D:
                continue
            v = math.isqrt(num // D)
            if v * v != num // D or v % 2 == 0:
                continue
            a, b = Fraction(u, 2), Fraction(v, 2)
            ca, cb = a, b
            for _ in range(2):
                ca, cb = ca * a + cb * b * D, ca * b + cb * a
            if ca == x1 and cb == y1:
                return FundamentalUnit(field, a, b, s)
    return FundamentalUnit(field, Fraction(x1), Fraction(y1), nrm)


def delta_exponent(field: QuadField) -> int:
    """1 when the fundamental unit has norm +1, else 2."""
    return 1 if fundamental_unit(field).norm == 1 else 2
