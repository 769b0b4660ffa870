"""Arithmetic in O_K/fO_K and the pre-class group invariants.

Classes of the pre-class group are units of O_K/fO_K up to multiplication
by rational integers prime to f.  Each class gets a canonical label: for a
unit a + b*tau at least one coordinate is invertible modulo every prime
power of f, so a CRT-assembled scalar normalizes the pair to a unique orbit
representative in O(omega(f)) modular inversions.

psi(f) is the group order, L(f) the lcm of the prime-power orders, and
ell(f) the order of the unit-image subgroup (the class of the fundamental
unit for real fields, of the primitive root of unity for imaginary ones).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .arith import factor, kronecker
from .errors import DomainError, ResourceBudgetError
from .quadfield import QuadField, TauKind, fundamental_unit

DEFAULT_ENUM_BUDGET = 10**6


class ResidueRing:
    """O_K/mO_K in the integral basis {1, tau}, with class-label support."""

    __slots__ = ("field", "modulus", "_half", "_t", "_crt")

    def __init__(self, field: QuadField, modulus: int):
        if modulus < 1:
            raise DomainError(f"modulus must be positive, got {modulus}")
        self.field = field
        self.modulus = modulus
        self._half = field.tau_kind is TauKind.HALF_ONE_PLUS_SQRT_D
        # tau^2 = tau + t (half case) or tau^2 = t (sqrt case)
        self._t = (field.D - 1) // 4 if self._half else field.D
        self._crt = []
        m = modulus
        for p, k in factor(m).factors:
            q = p**k
            cof = m // q
            self._crt.append((p, q, cof * pow(cof, -1, q) % m))

    @property
    def identity(self) -> tuple[int, int]:
        return (1 % self.modulus, 0)

    def reduce(self, a: int, b: int) -> tuple[int, int]:
        return (a % self.modulus, b % self.modulus)

    def mul(self, x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
        a, b = x
        c, d = y
        bd = b * d
        m = self.modulus
        if self._half:
            return ((a * c + bd * self._t) % m, (a * d + b * c + bd) % m)
        return ((a * c + bd * self._t) % m, (a * d + b * c) % m)

    def pow(self, x: tuple[int, int], n: int) -> tuple[int, int]:
        if n < 0:
            raise DomainError("negative exponent")
        result = self.identity
        while n:
            if n & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            n >>= 1
        return result

    def norm(self, x: tuple[int, int]) -> int:
        a, b = x
        if self._half:
            return a * a + a * b - self._t * b * b
        return a * a - self.field.D * b * b

    def is_unit(self, x: tuple[int, int]) -> bool:
        return math.gcd(self.norm(x) % self.modulus, self.modulus) == 1

    def canon(self, x: tuple[int, int]) -> tuple[int, int]:
        """Canonical representative of x's integer-scaling orbit.

        Per prime power the scaling is pinned by normalizing whichever
        coordinate is a p-adic unit (b preferred); a unit element always has
        one.  Classes of rational integers all map to (1, 0).
        """
        m = self.modulus
        if m == 1:
            return (0, 0)
        a, b = x
        c = 0
        for p, q, idem in self._crt:
            bq = b % q
            if bq % p:
                c += idem * pow(bq, -1, q)
            else:
                aq = a % q
                if aq % p == 0:
                    raise DomainError(f"({a}, {b}) is not a unit modulo {m}")
                c += idem * pow(aq, -1, q)
        c %= m
        return (a * c % m, b * c % m)

    def canon_bruteforce(self, x: tuple[int, int]) -> tuple[int, int]:
        """Reference canonical form: lexicographically least (b', a') over
        all scalings by integers prime to the modulus.  O(m) per call; used
        to cross-check the fast labels."""
        m = self.modulus
        if m == 1:
            return (0, 0)
        a, b = x
        best = None
        for c in range(1, m):
            if math.gcd(c, m) != 1:
                continue
            cand = (b * c % m, a * c % m)
            if best is None or cand < best:
                best = cand
        return (best[1], best[0])


_ring_cache: dict[tuple[int, int], ResidueRing] = {}
_ring_lock = threading.Lock()


def get_ring(field: QuadField, modulus: int) -> ResidueRing:
    key = (field.D, modulus)
    with _ring_lock:
        ring = _ring_cache.get(key)
        if ring is None:
            if len(_ring_cache) > 4096:
                _ring_cache.clear()
            ring = ResidueRing(field, modulus)
            _ring_cache[key] = ring
        return ring


@dataclass(frozen=True)
class ResidueElement:
    """a + b*tau in O_K/fO_K, coordinates reduced to [0, f)."""

    field: QuadField
    modulus: int
    a: int
    b: int

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "a", self.a % self.modulus)
        object.__setattr__(self, "b", self.b % self.modulus)

    def coords(self) -> tuple[int, int]:
        return (self.a, self.b)

    def is_unit(self) -> bool:
        return get_ring(self.field, self.modulus).is_unit(self.coords())

    def __str__(self) -> str:
        return f"{self.a} + {self.b}*tau mod {self.modulus}"


def res_mul(x: ResidueElement, y: ResidueElement) -> ResidueElement:
    if x.field != y.field or x.modulus != y.modulus:
        raise DomainError("residue elements live in different rings")
    a, b = get_ring(x.field, x.modulus).mul(x.coords(), y.coords())
    return ResidueElement(x.field, x.modulus, a, b)


def res_pow(x: ResidueElement, n: int) -> ResidueElement:
    a, b = get_ring(x.field, x.modulus).pow(x.coords(), n)
    return ResidueElement(x.field, x.modulus, a, b)


@dataclass(frozen=True)
class PreClElement:
    """A pre-class-group class, held by a unit representative."""

    rep: ResidueElement
    canonical: bool

    @classmethod
    def from_residue(cls, x: ResidueElement) -> "PreClElement":
        ring = get_ring(x.field, x.modulus)
        if not ring.is_unit(x.coords()):
            raise DomainError(f"{x} is not a unit")
        a, b = ring.canon(x.coords())
        return cls(ResidueElement(x.field, x.modulus, a, b), True)

    def label(self) -> tuple[int, int]:
        if self.canonical:
            return self.rep.coords()
        return get_ring(self.rep.field, self.rep.modulus).canon(self.rep.coords())

    def is_identity(self) -> bool:
        # trivial classes are exactly those congruent to a rational integer
        return self.rep.b % self.rep.modulus == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, PreClElement):
            return NotImplemented
        if (
            self.rep.field != other.rep.field
            or self.rep.modulus != other.rep.modulus
        ):
            return False
        return self.label() == other.label()

    def __hash__(self) -> int:
        return hash((self.rep.field.D, self.rep.modulus, self.label()))


def precl_class(field: QuadField, f: int, a: int, b: int) -> PreClElement:
    return PreClElement.from_residue(ResidueElement(field, f, a, b))


def psi(field: QuadField, f: int) -> int:
    """Order of the pre-class group: f * prod(1 - (disc/p)/p) over p | f."""
    if f < 1:
        raise DomainError(f"conductor must be positive, got {f}")
    result = 1
    for p, k in factor(f).factors:
        result *= p**k - kronecker(field.disc, p) * p ** (k - 1)
    return result


def big_L(field: QuadField, f: int) -> int:
    """lcm of psi(p^k) over the prime powers exactly dividing f."""
    if f < 1:
        raise DomainError(f"conductor must be positive, got {f}")
    result = 1
    for p, k in factor(f).factors:
        result = math.lcm(result, p**k - kronecker(field.disc, p) * p ** (k - 1))
    return result


def _class_order(ring: ResidueRing, x: tuple[int, int], group_order: int) -> int:
    """Order of the class of x in the pre-class group, by dividing the known
    group order down through its prime factors."""
    e = group_order
    for q, _ in factor(group_order).factors:
        while e % q == 0 and ring.pow(x, e // q)[1] == 0:
            e //= q
    return e


def precl_order(x: PreClElement) -> int:
    """Least n >= 1 whose n-th power is the class of a rational integer."""
    rep = x.rep
    ring = get_ring(rep.field, rep.modulus)
    if not ring.is_unit(rep.coords()):
        raise DomainError(f"{rep} is not a unit")
    return _class_order(ring, rep.coords(), psi(rep.field, rep.modulus))


def ell(field: QuadField, f: int) -> int:
    """Order of the unit-image subgroup of the pre-class group.

    Real fields: the least l with eps^l congruent to a rational integer mod
    fO_K (equivalently, eps^l in the order of conductor f).  Imaginary
    fields: the order of the class of the primitive root of unity, which is
    tau itself for D = -1 and D = -3 and trivial otherwise.
    """
    if f < 1:
        raise DomainError(f"conductor must be positive, got {f}")
    if f == 1:
        return 1
    ring = get_ring(field, f)
    if field.real:
        coords = fundamental_unit(field).tau_coords()
        return _class_order(ring, ring.reduce(*coords), psi(field, f))
    if field.D in (-1, -3):
        return _class_order(ring, (0, 1), psi(field, f))
    return 1


def ell_bruteforce(field: QuadField, f: int) -> int:
    """Reference for ell on real fields: iterate multiplication by the
    fundamental unit's residue until the tau-coordinate vanishes mod f."""
    if not field.real:
        raise DomainError("ell_bruteforce applies to real fields")
    if f < 1:
        raise DomainError(f"conductor must be positive, got {f}")
    if f == 1:
        return 1
    ring = get_ring(field, f)
    eps = ring.reduce(*fundamental_unit(field).tau_coords())
    x = eps
    bound = 2 * psi(field, f)
    for n in range(1, bound + 1):
        if x[1] == 0:
            return n
        x = ring.mul(x, eps)
    raise DomainError(f"unit image order not found within {bound} steps")


def _generator_candidates(ring: ResidueRing):
    m = ring.modulus
    yield (0, 1 % m)
    for a in range(1, m):
        yield (a, 1)
    for b in range(2, m):
        yield (1, b)
    for a in range(m):
        for b in range(m):
            yield (a, b)


def group_table(
    field: QuadField, f: int, budget: int = DEFAULT_ENUM_BUDGET
) -> tuple[dict[tuple[int, int], tuple[int, ...]], list[tuple[int, int]], list[tuple[int, ...]]]:
    """Enumerate PreCl(O_f) as canonical labels with a polycyclic tower.

    Returns (table, generators, relations): `table` maps every class label
    to its exponent vector over the generator list, and `relations` are
    triangular rows g_i^{t_i} = prod_{j<i} g_j^{c_j} spanning the full
    relation lattice, so the group is Z^len(generators) modulo the rows.
    """
    order = psi(field, f)
    if order > budget:
        worst = max(
            ((p**k - kronecker(field.disc, p) * p ** (k - 1), p, k)
             for p, k in factor(f).factors),
            default=(order, f, 1),
        )
        raise ResourceBudgetError(
            f"psi({f}) = {order} exceeds enumeration budget {budget}"
            f" (largest prime power {worst[1]}^{worst[2]})"
        )
    ring = get_ring(field, f)
    identity = ring.canon(ring.identity) if f > 1 else (0, 0)
    table: dict[tuple[int, int], tuple[int, ...]] = {identity: ()}
    gens: list[tuple[int, int]] = []
    rels: list[tuple[int, ...]] = []
    for cand in _generator_candidates(ring):
        if len(table) == order:
            break
        if not ring.is_unit(cand):
            continue
        lab = ring.canon(cand)
        if lab in table:
            continue
        snapshot = list(table.items())
        powers = [lab]
        gp = ring.canon(ring.mul(lab, lab))
        while gp not in table:
            powers.append(gp)
            gp = ring.canon(ring.mul(gp, lab))
        t = len(powers) + 1
        i = len(gens)
        gens.append(lab)
        base = table[gp]
        rels.append(tuple(-c for c in base) + (0,) * (i - len(base)) + (t,))
        for tp in range(1, t):
            glab = powers[tp - 1]
            for h_lab, h_vec in snapshot:
                nl = ring.canon(ring.mul(glab, h_lab))
                table[nl] = h_vec + (0,) * (i - len(h_vec)) + (tp,)
    if len(table) != order:
        raise DomainError(
            f"enumeration found {len(table)} classes, expected {order}"
        )
    return table, gens, rels


def _prime_power_structure(
    field: QuadField, p: int, k: int, budget: int
) -> tuple[int, ...]:
    """Cyclic factors (elementary divisors) of PreCl(O_{p^k}), by counting
    element orders within each Sylow piece of the enumerated group."""
    q = p**k
    order = psi(field, q)
    if order == 1:
        return ()
    ring = get_ring(field, q)
    table, _, _ = group_table(field, q, budget)
    labels = list(table)
    identity = ring.canon(ring.identity)
    cyclic: list[int] = []
    for r, e in factor(order).factors:
        cof = order // r**e
        sylow = {ring.canon(ring.pow(x, cof)) for x in labels}
        if len(sylow) != r**e:
            raise DomainError(f"Sylow {r}-subgroup size mismatch at {p}^{k}")
        # N_j = number of elements killed by r^j; the successive ratios
        # count the cyclic factors of each length
        exps = []
        for y in sylow:
            z = y
            j = 0
            while z != identity:
                z = ring.canon(ring.pow(z, r))
                j += 1
            exps.append(j)
        col_counts = []
        for j in range(1, e + 1):
            nj = sum(1 for x in exps if x <= j)
            nj_prev = sum(1 for x in exps if x <= j - 1)
            ratio = nj // nj_prev
            mj = 0
            while ratio > 1:
                ratio //= r
                mj += 1
            col_counts.append(mj)
        rank = col_counts[0]
        for i in range(rank):
            lam = sum(1 for mj in col_counts if mj >= i + 1)
            cyclic.append(r**lam)
    return tuple(sorted(cyclic))


_pp_cache: dict[tuple[int, int, int], tuple[int, ...]] = {}
_pp_lock = threading.Lock()


def precl_structure(field: QuadField, f: int, budget: int = DEFAULT_ENUM_BUDGET):
    """Invariant factors of PreCl(O_f), assembled prime power by prime power."""
    from .abelian import AbelianGroup

    if f < 1:
        raise DomainError(f"conductor must be positive, got {f}")
    total = psi(field, f)
    if total > budget:
        worst = max(
            (p**k - kronecker(field.disc, p) * p ** (k - 1), p, k)
            for p, k in factor(f).factors
        )
        raise ResourceBudgetError(
            f"psi({f}) = {total} exceeds enumeration budget {budget}"
            f" (largest prime power {worst[1]}^{worst[2]})"
        )
    cyclic: list[int] = []
    for p, k in factor(f).factors:
        key = (field.D, p, k)
        with _pp_lock:
            cached = _pp_cache.get(key)
        if cached is None:
            cached = _prime_power_structure(field, p, k, budget)
            with _pp_lock:
                if len(_pp_cache) > 65536:
                    _pp_cache.clear()
                _pp_cache[key] = cached
        cyclic.extend(cached)
    return AbelianGroup.from_cyclic_factors(cyclic)


def unit_image_coords(field: QuadField, f: int) -> tuple[int, int] | None:
    """Residue coordinates of the generator of the unit image, or None when
    the image is trivial (imaginary fields with only the units +-1)."""
    ring = get_ring(field, f)
    if field.real:
        return ring.reduce(*fundamental_unit(field).tau_coords())
    if field.D in (-1, -3):
        return ring.reduce(0, 1)
    return None
