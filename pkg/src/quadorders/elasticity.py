"""Elasticity intervals, principal part of the class group, half-factoriality.

For a split-free conductor f the elasticity of the order is bracketed by
half the Davenport constant of the class group from below and by the same
term plus (3/2)*Omega(f) from above; the class group's Davenport constant
is in turn squeezed between Dav(PrinCl) and h_K * Dav(PrinCl).  Conductors
with a split prime factor have infinite elasticity.  All interval endpoints
are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .abelian import (
    AbelianGroup,
    DavenportResult,
    abelian_groups_of_order,
    davenport,
    quotient_structure,
)
from .arith import factor, is_prime
from .classnum import class_number
from .errors import DomainError
from .quadfield import (
    QuadField,
    SplittingType,
    delta_exponent,
    fundamental_unit,
    is_split_free,
    splitting_type,
)
from .residue import (
    DEFAULT_ENUM_BUDGET,
    big_L,
    ell,
    get_ring,
    group_table,
    psi,
    unit_image_coords,
)

DEFAULT_DAVENPORT_BUDGET = 64


def princl_structure(
    field: QuadField, f: int, budget: int = DEFAULT_ENUM_BUDGET
) -> AbelianGroup:
    """Invariant factors of PrinCl(O_f) = PreCl(O_f) / (unit image).

    The enumerated pre-class group yields a triangular relation matrix over
    its tower generators; appending the exponent vector of the unit-image
    generator presents the quotient, and integer diagonalization reads off
    its invariant factors.
    """
    if f < 1:
        raise DomainError(f"conductor must be positive, got {f}")
    table, gens, rels = group_table(field, f, budget)
    rows = list(rels)
    coords = unit_image_coords(field, f)
    if coords is not None and f > 1:
        ring = get_ring(field, f)
        rows.append(table[ring.canon(coords)])
    if not gens:
        return AbelianGroup(())
    return quotient_structure(rows, len(gens))


@dataclass(frozen=True)
class ElasticityDiagnostics:
    h_K: int
    psi: int
    ell: int
    big_omega: int
    princl: AbelianGroup | None
    davenport_used: DavenportResult | None


@dataclass(frozen=True)
class ElasticityInterval:
    """Exact bounds for the elasticity of the order of conductor f."""

    field_d: int
    conductor: int
    lower: Fraction
    upper: Fraction | None
    infinite: bool
    diagnostics: ElasticityDiagnostics

    def __post_init__(self):
        if not self.infinite:
            if self.upper is None or self.lower > self.upper:
                raise DomainError("malformed elasticity interval")
            if self.lower < 1:
                raise DomainError("elasticity is at least 1")

    def upper_str(self) -> str:
        return "inf" if self.infinite else str(self.upper)

    def __str__(self) -> str:
        if self.infinite:
            return "rho = inf"
        return f"rho in [{self.lower}, {self.upper}]"


def _maximal_order_interval(field: QuadField, h: int) -> tuple[Fraction, Fraction]:
    """Bounds for rho(O_K) knowing only #Cl = h: range the Davenport constant
    over every abelian group of order h (exact when they all agree, e.g.
    whenever h <= 3)."""
    lo = None
    hi = None
    for shape in abelian_groups_of_order(h):
        d = davenport(shape, DEFAULT_DAVENPORT_BUDGET)
        lo = d.lower if lo is None else min(lo, d.lower)
        hi = d.upper if hi is None else max(hi, d.upper)
    return max(Fraction(1), Fraction(lo, 2)), max(Fraction(1), Fraction(hi, 2))


def elasticity_interval(
    field: QuadField,
    f: int,
    enum_budget: int = DEFAULT_ENUM_BUDGET,
    davenport_budget: int = DEFAULT_DAVENPORT_BUDGET,
) -> ElasticityInterval:
    """Exact rational elasticity bounds; infinite iff f has a split factor."""
    if f < 1:
        raise DomainError(f"conductor must be positive, got {f}")
    h = class_number(field)
    fct = factor(f)
    if not is_split_free(field, f):
        diag = ElasticityDiagnostics(
            h, psi(field, f), ell(field, f), fct.big_omega(), None, None
        )
        return ElasticityInterval(field.D, f, Fraction(1), None, True, diag)
    psi_f = psi(field, f)
    ell_f = ell(field, f)
    if f == 1:
        lo, hi = _maximal_order_interval(field, h)
        diag = ElasticityDiagnostics(h, 1, 1, 0, AbelianGroup(()), None)
        return ElasticityInterval(field.D, 1, lo, hi, False, diag)
    princl = princl_structure(field, f, enum_budget)
    dav = davenport(princl, davenport_budget)
    big_omega = fct.big_omega()
    lower = max(Fraction(1), Fraction(dav.lower, 2))
    upper = max(
        Fraction(1), Fraction(h * dav.upper, 2) + Fraction(3 * big_omega, 2)
    )
    # prime conductor refinement: for p > 3 the pre-class group is cyclic,
    # so rho >= psi(p) / (2*ell(p)) outright
    if (
        len(fct.factors) == 1
        and fct.factors[0][1] == 1
        and fct.factors[0][0] > 3
        and splitting_type(field, f) is not SplittingType.SPLIT
    ):
        lower = max(lower, Fraction(psi_f, 2 * ell_f))
    diag = ElasticityDiagnostics(h, psi_f, ell_f, big_omega, princl, dav)
    return ElasticityInterval(field.D, f, lower, upper, False, diag)


@dataclass(frozen=True)
class HfdReason:
    condition: str
    satisfied: bool
    detail: str = ""


@dataclass(frozen=True)
class HfdVerdict:
    verdict: str  # "HFD" or "NOT_HFD"
    reasons: tuple[HfdReason, ...]

    @property
    def is_hfd(self) -> bool:
        return self.verdict == "HFD"


def _generates_precl(field: QuadField, p: int) -> bool:
    """Whether the fundamental unit's class generates PreCl(O_p)."""
    return ell(field, p) == psi(field, p)


def hfd_check(field: QuadField, f: int) -> HfdVerdict:
    """Half-factoriality of the order of conductor f.

    Imaginary fields have a single nonmaximal half-factorial order, the one
    of conductor 2 over D = -3.  Real fields require h_K <= 2, a conductor
    of the shape p or 2p with the stated inertness pattern, and the unit
    class generating the pre-class group at each prime part.
    """
    if f < 1:
        raise DomainError(f"conductor must be positive, got {f}")
    reasons: list[HfdReason] = []
    if f == 1:
        h = class_number(field)
        ok = h <= 2
        reasons.append(
            HfdReason("maximal_order_class_number_at_most_2", ok, f"h_K = {h}")
        )
        return HfdVerdict("HFD" if ok else "NOT_HFD", tuple(reasons))
    if not field.real:
        ok = field.D == -3 and f == 2
        reasons.append(
            HfdReason(
                "imaginary_conductor_2_over_D_minus_3",
                ok,
                f"(D, f) = ({field.D}, {f})",
            )
        )
        return HfdVerdict("HFD" if ok else "NOT_HFD", tuple(reasons))

    h = class_number(field)
    cond_h = h <= 2
    reasons.append(
        HfdReason("maximal_order_class_number_at_most_2", cond_h, f"h_K = {h}")
    )
    fct = factor(f)
    primes = fct.factors
    shape_p = len(primes) == 1 and primes[0][1] == 1
    shape_2p = (
        len(primes) == 2
        and primes[0] == (2, 1)
        and primes[1][1] == 1
    )
    if shape_p:
        p = primes[0][0]
        inert = splitting_type(field, p) is SplittingType.INERT
        reasons.append(
            HfdReason("conductor_is_inert_prime", inert, f"f = {p}")
        )
        if not (cond_h and inert):
            return HfdVerdict("NOT_HFD", tuple(reasons))
        gen = _generates_precl(field, p)
        reasons.append(
            HfdReason(
                "unit_generates_preclass_group",
                gen,
                f"ell({p}) = {ell(field, p)}, psi({p}) = {psi(field, p)}",
            )
        )
        verdict = cond_h and inert and gen
        return HfdVerdict("HFD" if verdict else "NOT_HFD", tuple(reasons))
    if shape_2p:
        p = primes[1][0]
        both_inert = (
            splitting_type(field, 2) is SplittingType.INERT
            and splitting_type(field, p) is SplittingType.INERT
        )
        reasons.append(
            HfdReason(
                "conductor_is_twice_inert_prime_with_2_inert",
                both_inert,
                f"f = 2 * {p}",
            )
        )
        if not (cond_h and both_inert):
            return HfdVerdict("NOT_HFD", tuple(reasons))
        no3 = (p + 1) % 3 != 0
        reasons.append(HfdReason("three_does_not_divide_p_plus_1", no3, f"p = {p}"))
        sub2 = _generates_precl(field, 2)
        reasons.append(
            HfdReason(
                "order_of_conductor_2_half_factorial",
                sub2,
                f"ell(2) = {ell(field, 2)}, psi(2) = {psi(field, 2)}",
            )
        )
        subp = _generates_precl(field, p)
        reasons.append(
            HfdReason(
                "order_of_conductor_p_half_factorial",
                subp,
                f"ell({p}) = {ell(field, p)}, psi({p}) = {psi(field, p)}",
            )
        )
        verdict = cond_h and both_inert and no3 and sub2 and subp
        return HfdVerdict("HFD" if verdict else "NOT_HFD", tuple(reasons))
    reasons.append(
        HfdReason("conductor_shape_p_or_2p", False, f"f = {fct}")
    )
    return HfdVerdict("NOT_HFD", tuple(reasons))


def unit_order_mod_p(field: QuadField, p: int) -> int:
    """Multiplicative order of the fundamental unit in (O_K/pO_K)^x for an
    inert prime p; a divisor of delta*(p+1)."""
    ring = get_ring(field, p)
    eps = ring.reduce(*fundamental_unit(field).tau_coords())
    bound = delta_exponent(field) * (p + 1)
    if ring.pow(eps, bound) != ring.identity:
        raise DomainError(f"unit order does not divide {bound} at p = {p}")
    e = bound
    for q, _ in factor(bound).factors:
        while e % q == 0 and ring.pow(eps, e // q) == ring.identity:
            e //= q
    return e


def roskam_condition(field: QuadField, p: int) -> bool:
    """Whether the fundamental unit has the maximal order delta*(p+1) in
    (O_K/pO_K)^x; defined for inert primes of real fields only."""
    if not field.real:
        raise DomainError("the unit-order condition applies to real fields")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if splitting_type(field, p) is not SplittingType.INERT:
        raise DomainError(f"{p} is not inert in {field}")
    return unit_order_mod_p(field, p) == delta_exponent(field) * (p + 1)


def roskam_elasticity_cap(field: QuadField, p: int) -> Fraction:
    """h_K + 3/2, valid whenever the maximal-unit-order condition holds;
    verifies the implied facts ell(p) >= (p+1)/2 and rho <= the cap."""
    if not roskam_condition(field, p):
        raise DomainError(f"unit order condition fails at p = {p}")
    h = class_number(field)
    cap = Fraction(h) + Fraction(3, 2)
    ell_p = ell(field, p)
    if 2 * ell_p < p + 1:
        raise DomainError(f"ell({p}) = {ell_p} < (p+1)/2; cap reasoning broken")
    interval = elasticity_interval(field, p)
    if interval.infinite or interval.upper > cap:
        raise DomainError(
            f"elasticity upper bound {interval.upper_str()} exceeds cap {cap}"
        )
    return cap
