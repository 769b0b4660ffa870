"""Class number of the maximal order via binary quadratic forms.

Imaginary: count reduced forms of discriminant Delta_K.  Real: count cycles
of reduced indefinite forms under the reduction operator; that count is the
narrow class number, which is h_K when the fundamental unit has norm -1 and
2*h_K when it has norm +1.  All comparisons against sqrt(Delta) are done
with integer square roots, never floats.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .errors import DomainError, ResourceBudgetError
from .quadfield import QuadField, fundamental_unit

DEFAULT_DISC_BOUND = 10**6


@dataclass(frozen=True)
class ReducedForm:
    """ax^2 + bxy + cy^2 with b^2 - 4ac equal to the field discriminant."""

    a: int
    b: int
    c: int

    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


def reduced_forms_imaginary(disc: int) -> list[ReducedForm]:
    """All reduced positive definite forms: |b| <= a <= c, b >= 0 when
    |b| = a or a = c."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise DomainError(f"{disc} is not an imaginary discriminant")
    forms = []
    # |b| <= a <= c forces 3a^2 <= -disc
    for a in range(1, math.isqrt(-disc // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a:
                continue
            if b < 0 and (abs(b) == a or a == c):
                continue
            forms.append(ReducedForm(a, b, c))
    return forms


def is_reduced_indefinite(form: ReducedForm, disc: int) -> bool:
    """0 < b < sqrt(disc) and sqrt(disc) - b < 2|a| < sqrt(disc) + b, with
    exact integer comparisons (disc is never a perfect square here)."""
    s = math.isqrt(disc)
    b = form.b
    if not (0 < b <= s):
        return False
    ta = 2 * abs(form.a)
    return ta + b >= s + 1 and ta - b <= s


def reduced_forms_real(disc: int) -> list[ReducedForm]:
    if disc <= 0 or disc % 4 not in (0, 1):
        raise DomainError(f"{disc} is not a real discriminant")
    s = math.isqrt(disc)
    if s * s == disc:
        raise DomainError(f"{disc} is a perfect square")
    forms = []
    for b in range(1, s + 1):
        if (disc - b * b) % 4:
            continue
        ac = (b * b - disc) // 4  # negative
        for a in _divisor_range(-ac, b, s):
            for sign in (1, -1):
                form = ReducedForm(sign * a, b, ac // (sign * a))
                if is_reduced_indefinite(form, disc):
                    forms.append(form)
    return forms


def _divisor_range(n: int, b: int, s: int) -> list[int]:
    """Positive divisors a of n inside the reduction window for this b."""
    out = []
    for a in range(1, (s + b) // 2 + 1):
        if n % a == 0 and 2 * a + b >= s + 1 and 2 * a - b <= s:
            out.append(a)
    return out


def rho_step(form: ReducedForm, disc: int) -> ReducedForm:
    """The classical reduction operator on reduced indefinite forms."""
    s = math.isqrt(disc)
    c = form.c
    ac2 = 2 * abs(c)
    # b' = -b (mod 2|c|), maximal with b' <= s
    r = (-form.b) % ac2
    b2 = s - (s - r) % ac2
    c2 = (b2 * b2 - disc) // (4 * c)
    return ReducedForm(c, b2, c2)


def _real_cycle_count(disc: int) -> int:
    forms = reduced_forms_real(disc)
    pool = {(f.a, f.b, f.c) for f in forms}
    cycles = 0
    while pool:
        start = pool.pop()
        cycles += 1
        cur = ReducedForm(*start)
        while True:
            nxt = rho_step(cur, disc)
            key = (nxt.a, nxt.b, nxt.c)
            if key == start:
                break
            if key not in pool:
                raise DomainError(f"rho left the reduced set at {nxt}")
            pool.remove(key)
            cur = nxt
    return cycles


_h_cache: dict[int, int] = {}
_h_lock = threading.Lock()


def class_number(field: QuadField, bound: int = DEFAULT_DISC_BOUND) -> int:
    """h_K of the maximal order, exact and integer-only; cached per field."""
    with _h_lock:
        if field.D in _h_cache:
            return _h_cache[field.D]
    if abs(field.disc) > bound:
        raise ResourceBudgetError(
            f"|disc| = {abs(field.disc)} exceeds class number bound {bound}"
        )
    if field.disc < 0:
        h = len(reduced_forms_imaginary(field.disc))
    else:
        cycles = _real_cycle_count(field.disc)
        if fundamental_unit(field).norm == 1:
            # no unit of norm -1: the form cycles count the narrow class
            # group, which is twice the ideal class group
            if cycles % 2:
                raise DomainError(f"odd cycle count {cycles} with norm +1 unit")
            h = cycles // 2
        else:
            h = cycles
    with _h_lock:
        _h_cache[field.D] = h
    return h
