import math
from fractions import Fraction

import pytest

from quadorders.abelian import AbelianGroup
from quadorders.arith import factor
from quadorders.errors import DomainError, ResourceBudgetError
from quadorders.quadfield import TauKind, fundamental_unit, new_field
from quadorders.residue import (
    PreClElement,
    ResidueElement,
    ResidueRing,
    big_L,
    ell,
    ell_bruteforce,
    get_ring,
    group_table,
    precl_class,
    precl_order,
    precl_structure,
    psi,
    res_mul,
    res_pow,
    unit_image_coords,
)

K2 = new_field(2)
K5 = new_field(5)
KI = new_field(-1)
KM3 = new_field(-3)
KM5 = new_field(-5)


def matrix_mul_oracle(field, m, x, y):
    """Multiply a + b*tau via the 2x2 regular representation of tau."""
    if field.tau_kind is TauKind.SQRT_D:
        M = ((0, field.D), (1, 0))
    else:
        M = ((0, (field.D - 1) // 4), (1, 1))
    def to_mat(a, b):
        return (
            (a + b * M[0][0], b * M[0][1]),
            (b * M[1][0], a + b * M[1][1]),
        )
    xa, xb = x
    ya, yb = y
    A, B = to_mat(xa, xb), to_mat(ya, yb)
    prod = tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(2)) % m for j in range(2))
        for i in range(2)
    )
    # product is cI + d*M: read off c and d
    d = prod[1][0]
    c = prod[0][0] - d * M[0][0]
    return (c % m, d % m)


def enumerate_classes(field, m):
    """Brute-force class enumeration: all unit pairs grouped by scalar orbits."""
    ring = ResidueRing(field, m)
    units = [
        (a, b)
        for a in range(m)
        for b in range(m)
        if ring.is_unit((a, b))
    ]
    scalars = [c for c in range(1, m) if math.gcd(c, m) == 1] or [1]
    seen = set()
    classes = []
    for ab in units:
        if ab in seen:
            continue
        orbit = {(c * ab[0] % m, c * ab[1] % m) for c in scalars}
        seen |= orbit
        classes.append(orbit)
    return classes


class TestResidueArithmetic:
    def test_sqrt2_mod5_square(self):
        x = ResidueElement(K2, 5, 1, 1)
        assert res_mul(x, x).coords() == (3, 2)

    def test_pow_zero_is_identity(self):
        for K, f in ((K2, 7), (K5, 9), (KI, 4)):
            x = ResidueElement(K, f, 2, 1)
            assert res_pow(x, 0).coords() == (1 % f, 0)

    def test_half_tau_square(self):
        # tau = (1+sqrt(5))/2 satisfies tau^2 = tau + 1; (1+tau)^2 = 2 + 3*tau = 2 mod 3
        x = ResidueElement(K5, 3, 1, 1)
        assert res_mul(x, x).coords() == (2, 0)

    def test_against_matrix_representation(self):
        for K in (K2, K5, KI, KM3, KM5):
            for m in (2, 3, 5, 6, 12):
                ring = get_ring(K, m)
                for xa in range(m):
                    for xb in range(m):
                        got = ring.mul((xa, xb), (2 % m, 3 % m))
                        want = matrix_mul_oracle(K, m, (xa, xb), (2 % m, 3 % m))
                        assert got == want, (K.D, m, xa, xb)

    def test_modulus_mismatch(self):
        with pytest.raises(DomainError):
            res_mul(ResidueElement(K2, 5, 1, 1), ResidueElement(K2, 7, 1, 1))
        with pytest.raises(DomainError):
            res_mul(ResidueElement(K2, 5, 1, 1), ResidueElement(K5, 5, 1, 1))

    def test_unit_criterion_vs_invertibility(self):
        # gcd(norm, f) = 1 must coincide with the existence of an inverse
        for K in (K2, K5, KI):
            for m in (2, 3, 4, 6, 10):
                ring = get_ring(K, m)
                for a in range(m):
                    for b in range(m):
                        invertible = any(
                            ring.mul((a, b), (c, d)) == ring.identity
                            for c in range(m)
                            for d in range(m)
                        )
                        assert ring.is_unit((a, b)) == invertible, (K.D, m, a, b)


class TestPsi:
    def test_psi_one(self):
        assert psi(K2, 1) == 1

    def test_sqrt2_mod3_by_unit_count(self):
        # oracle: count units of O_K/3O_K and divide by phi(3)
        ring = get_ring(K2, 3)
        units = sum(
            1 for a in range(3) for b in range(3) if ring.is_unit((a, b))
        )
        assert units == 8
        assert psi(K2, 3) == units // 2 == 4

    def test_gauss_mod4_by_unit_count(self):
        ring = get_ring(KI, 4)
        units = sum(
            1 for a in range(4) for b in range(4) if ring.is_unit((a, b))
        )
        assert psi(KI, 4) == units // 2 == 4

    def test_multiplicative(self):
        for K in (K2, K5, KI, KM5):
            for a, b in ((3, 5), (4, 9), (2, 25), (7, 8)):
                assert psi(K, a * b) == psi(K, a) * psi(K, b)

    def test_unit_count_oracle_range(self):
        import numpy as np

        for K in (K2, K5, KI, KM3, KM5):
            half = K.tau_kind is TauKind.HALF_ONE_PLUS_SQRT_D
            t = (K.D - 1) // 4 if half else K.D
            for f in range(1, 80):
                a = np.arange(f).reshape(-1, 1)
                b = np.arange(f).reshape(1, -1)
                if half:
                    norm = (a * a + a * b - t * b * b) % f
                else:
                    norm = (a * a - t * b * b) % f
                units = int(np.count_nonzero(np.gcd(norm, f) == 1))
                phi = sum(1 for c in range(1, f + 1) if math.gcd(c, f) == 1)
                assert psi(K, f) * phi == units, (K.D, f)

    def test_class_count_oracle_small(self):
        for K in (K2, K5, KI, KM3, KM5):
            for f in range(1, 36):
                assert psi(K, f) == len(enumerate_classes(K, f)), (K.D, f)


class TestBigL:
    def test_one(self):
        assert big_L(K2, 1) == 1

    def test_sqrt2_twelve(self):
        assert big_L(K2, 12) == math.lcm(psi(K2, 4), psi(K2, 3)) == 4

    def test_gauss_fifteen(self):
        assert psi(KI, 3) == 4 and psi(KI, 5) == 4
        assert big_L(KI, 15) == 4

    def test_divides_psi(self):
        for K in (K2, K5, KI, KM5):
            for f in range(1, 200):
                assert psi(K, f) % big_L(K, f) == 0


class TestEll:
    def test_conductor_one(self):
        for K in (K2, K5, KI, KM3, KM5):
            assert ell(K, 1) == 1

    def test_sqrt2_examples(self):
        # sqrt(2)-coefficients of eps^m are 1, 2, 5, 12, ...
        coeffs = [1, 2]
        while len(coeffs) < 8:
            coeffs.append(2 * coeffs[-1] + coeffs[-2])
        assert ell(K2, 2) == 2 and coeffs[1] % 2 == 0 and coeffs[0] % 2 == 1
        assert ell(K2, 3) == 1 + next(i for i, v in enumerate(coeffs) if v % 3 == 0)
        assert ell(K2, 3) == 4

    def test_agrees_with_iteration(self):
        for K in (K2, K5):
            for f in range(1, 300):
                assert ell(K, f) == ell_bruteforce(K, f), (K.D, f)

    def test_divides_group_order(self):
        for K in (K2, K5, KI, KM3, KM5):
            for f in range(1, 300):
                assert psi(K, f) % ell(K, f) == 0

    def test_imaginary_bounded_by_roots_of_unity(self):
        for K, w in ((KI, 4), (KM3, 6), (KM5, 2)):
            for f in range(1, 200):
                l = ell(K, f)
                assert l <= w
                assert w % l == 0  # the image of a cyclic group of order w
                if K.D == -5:
                    assert l == 1

    def test_membership_characterization_matches_class_order(self):
        # eps^l lands in the conductor-f order exactly when its class dies:
        # the two definitions must agree everywhere
        for K in (K2, K5):
            eps = fundamental_unit(K).tau_coords()
            for f in range(2, 200):
                ring = get_ring(K, f)
                l = ell(K, f)
                assert ring.pow(ring.reduce(*eps), l)[1] == 0
                for d in factor(l).divisors():
                    if d < l:
                        assert ring.pow(ring.reduce(*eps), d)[1] != 0


class TestPreClOrder:
    def test_identity_class(self):
        assert precl_order(precl_class(K2, 7, 1, 0)) == 1
        assert precl_order(precl_class(K2, 7, 3, 0)) == 1

    def test_gauss_i_mod3(self):
        # i - a has norm a^2 + 1, never 0 mod 3, so i is not an integer class;
        # i^2 = -1 is one
        assert all((a * a + 1) % 3 for a in range(3))
        assert precl_order(precl_class(KI, 3, 0, 1)) == 2

    def test_eps_class_mod3(self):
        x = precl_class(K2, 3, *fundamental_unit(K2).tau_coords())
        assert precl_order(x) == ell(K2, 3) == 4

    def test_rejects_nonunit(self):
        with pytest.raises(DomainError):
            precl_class(K2, 4, 0, 2)

    def test_order_divides_psi_random(self):
        import random

        rng = random.Random(31)
        for _ in range(300):
            K = (K2, K5, KI, KM3, KM5)[rng.randrange(5)]
            f = rng.randrange(2, 120)
            ring = get_ring(K, f)
            a, b = rng.randrange(f), rng.randrange(f)
            if not ring.is_unit((a, b)):
                continue
            x = precl_class(K, f, a, b)
            n = precl_order(x)
            assert psi(K, f) % n == 0
            assert res_pow(x.rep, n).b == 0
            for q, _ in factor(n).factors:
                assert res_pow(x.rep, n // q).b != 0


class TestCanonicalLabels:
    def test_partition_matches_scan(self):
        for K in (K2, K5, KI, KM3, KM5):
            for f in range(2, 40):
                ring = get_ring(K, f)
                for orbit in enumerate_classes(K, f):
                    labels = {ring.canon(x) for x in orbit}
                    assert len(labels) == 1, (K.D, f, orbit)
                    scan_labels = {ring.canon_bruteforce(x) for x in orbit}
                    assert len(scan_labels) == 1

    def test_distinct_classes_distinct_labels(self):
        for K in (K2, KI):
            for f in range(2, 30):
                ring = get_ring(K, f)
                classes = enumerate_classes(K, f)
                labels = {ring.canon(next(iter(orb))) for orb in classes}
                assert len(labels) == len(classes)

    def test_integer_classes_all_share_identity_label(self):
        for K in (K2, K5):
            for f in range(2, 30):
                ring = get_ring(K, f)
                for c in range(1, f):
                    if math.gcd(c, f) == 1:
                        assert ring.canon((c, 0)) == ring.identity


def brute_structure(field, f):
    """Invariant factors by computing every class's order directly."""
    classes = enumerate_classes(field, f)
    n = len(classes)
    ring = get_ring(field, f)
    reps = [next(iter(orb)) for orb in classes]
    orders = []
    for rep in reps:
        x = rep
        k = 1
        while x[1] % f != 0:
            x = ring.mul(x, rep)
            k += 1
        orders.append(k)
    # the multiset of element orders determines the abelian group
    return sorted(orders)


def group_element_orders(group: AbelianGroup):
    elems = [()]
    for d in group.invariant_factors:
        elems = [e + (r,) for e in elems for r in range(d)]
    return sorted(
        math.lcm(*(d // math.gcd(d, x) for d, x in zip(group.invariant_factors, e)))
        if e and any(e)
        else 1
        for e in elems
    )


class TestPreClStructure:
    def test_trivial(self):
        assert precl_structure(K2, 1).invariant_factors == ()

    def test_sqrt2_mod3_cyclic4(self):
        assert precl_structure(K2, 3).invariant_factors == (4,)

    def test_sqrt2_mod9_cyclic12(self):
        # p = 3 is not covered by the cyclicity lemma; full enumeration decides
        assert psi(K2, 9) == 12
        assert precl_structure(K2, 9).invariant_factors == (12,)
        assert brute_structure(K2, 9) == group_element_orders(AbelianGroup((12,)))

    def test_order_agreement(self):
        for K in (K2, K5, KI, KM3, KM5):
            for f in range(1, 150):
                assert precl_structure(K, f).order == psi(K, f), (K.D, f)

    def test_element_orders_against_bruteforce(self):
        for K in (K2, K5, KI, KM3, KM5):
            for f in range(2, 60):
                got = precl_structure(K, f)
                assert group_element_orders(got) == brute_structure(K, f), (K.D, f)

    def test_budget_error_names_prime_power(self):
        with pytest.raises(ResourceBudgetError) as err:
            precl_structure(K2, 9973, budget=100)
        assert "9973" in str(err.value)

    def test_witness_order_at_powers_of_two(self):
        # the class of 1 + 2*sqrt(D) in the conductor-2^k group has order
        # 2^(k-2) or 2^(k-1) once k >= 3
        for K in (K2, KI, KM5):
            for k in range(3, 8):
                x = precl_class(K, 2**k, 1, 2)
                n = precl_order(x)
                assert n in (2 ** (k - 2), 2 ** (k - 1)), (K.D, k, n)

    def test_witness_order_at_powers_of_three(self):
        # the class of 1 + 3*sqrt(D) has exact order 3^(k-1) for k >= 2
        for K in (K2, KI, KM5):
            for k in range(2, 6):
                x = precl_class(K, 3**k, 1, 3)
                assert precl_order(x) == 3 ** (k - 1), (K.D, k)


class TestGroupTable:
    def test_table_size_is_group_order(self):
        for K in (K2, K5, KI, KM3, KM5):
            for f in (1, 2, 6, 9, 25, 30, 49):
                table, gens, rels = group_table(K, f)
                assert len(table) == psi(K, f)
                assert len(gens) == len(rels)

    def test_relations_have_group_determinant(self):
        # triangular relations: the product of the diagonal entries is the order
        for K in (K2, KI):
            for f in (3, 9, 15, 16, 27):
                table, gens, rels = group_table(K, f)
                det = math.prod(rels[i][i] for i in range(len(gens)))
                assert det == psi(K, f)

    def test_unit_image_coords(self):
        assert unit_image_coords(K2, 5) == (1, 1)
        assert unit_image_coords(KI, 5) == (0, 1)
        assert unit_image_coords(KM5, 5) is None
