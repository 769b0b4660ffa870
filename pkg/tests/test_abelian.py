import math
import random

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form
from sympy import Matrix

from quadorders.abelian import (
    AbelianGroup,
    DavenportMethod,
    TRIVIAL_GROUP,
    _ln_bounds,
    _smith_diagonal,
    abelian_groups_of_order,
    davenport,
    davenport_bruteforce,
    davenport_lower,
    ebk_upper,
    quotient_structure,
    rank2_exponent_bound_check,
)
from quadorders.errors import DomainError, ResourceBudgetError


def random_group(rng, max_rank=4, max_factor=20):
    inv = []
    d = 1
    for _ in range(rng.randrange(0, max_rank + 1)):
        d *= rng.randrange(1, max_factor)
        if d == 1:
            d = 2
        inv.append(d)
    return AbelianGroup(tuple(inv))


class TestAbelianGroup:
    def test_trivial(self):
        assert TRIVIAL_GROUP.order == 1
        assert TRIVIAL_GROUP.exponent == 1
        assert TRIVIAL_GROUP.rank2 == 0
        assert str(TRIVIAL_GROUP) == "1"

    def test_validation(self):
        with pytest.raises(DomainError):
            AbelianGroup((2, 3))
        with pytest.raises(DomainError):
            AbelianGroup((1, 2))
        AbelianGroup((2, 6, 12))

    def test_from_cyclic_factors(self):
        assert AbelianGroup.from_cyclic_factors([2, 3]).invariant_factors == (6,)
        assert AbelianGroup.from_cyclic_factors([6, 10]).invariant_factors == (2, 30)
        assert AbelianGroup.from_cyclic_factors([4, 2, 3]).invariant_factors == (2, 12)
        assert AbelianGroup.from_cyclic_factors([1, 1]).invariant_factors == ()

    def test_from_cyclic_preserves_order(self):
        rng = random.Random(3)
        for _ in range(200):
            cyc = [rng.randrange(1, 40) for _ in range(rng.randrange(0, 5))]
            g = AbelianGroup.from_cyclic_factors(cyc)
            assert g.order == math.prod(cyc) if cyc else g.order == 1

    def test_rank2(self):
        assert AbelianGroup((2, 4, 12)).rank2 == 3
        assert AbelianGroup((3, 9)).rank2 == 0
        assert AbelianGroup((3, 6)).rank2 == 1


class TestDavenportBruteforce:
    def test_trivial(self):
        assert davenport_bruteforce(TRIVIAL_GROUP) == 1

    def test_klein(self):
        # zero-sum-free over C2 x C2: {a, b} with a != b works, length 3 never
        assert davenport_bruteforce(AbelianGroup((2, 2))) == 3

    def test_three_three(self):
        assert davenport_bruteforce(AbelianGroup((3, 3))) == 5

    def test_two_four(self):
        g = AbelianGroup((2, 4))
        assert davenport_bruteforce(g) == 5
        assert davenport_lower(g) == 5

    def test_two_cubed(self):
        assert davenport_bruteforce(AbelianGroup((2, 2, 2))) == 4

    def test_cyclic_up_to_twelve(self):
        for n in range(2, 13):
            assert davenport_bruteforce(AbelianGroup((n,))) == n

    def test_p_groups_match_olson(self):
        # for p-groups the Davenport constant equals 1 + sum(d_i - 1)
        for shape in [(4, 8), (2, 2, 8), (3, 9), (3, 3, 3), (5, 5), (2, 4, 4)]:
            g = AbelianGroup(shape)
            assert davenport_bruteforce(g) == davenport_lower(g), shape

    def test_rank_two_matches_olson(self):
        # rank-2 groups also achieve the lower bound
        for shape in [(2, 6), (3, 6), (2, 10), (6, 6), (2, 14), (3, 12)]:
            g = AbelianGroup(shape)
            assert davenport_bruteforce(g) == davenport_lower(g), shape

    def test_cap_enforced(self):
        with pytest.raises(ResourceBudgetError):
            davenport_bruteforce(AbelianGroup((100,)))


class TestDavenport:
    def test_trivial_exact(self):
        res = davenport(TRIVIAL_GROUP, 64)
        assert res.lower == res.upper == 1 and res.exact
        assert res.method is DavenportMethod.CYCLIC_EXACT

    def test_cyclic_exact_to_64(self):
        for n in range(2, 65):
            res = davenport(AbelianGroup((n,)), 64)
            assert res.exact and res.lower == n
            assert res.method is DavenportMethod.CYCLIC_EXACT

    def test_brute_force_region(self):
        res = davenport(AbelianGroup((2, 2)), 64)
        assert res.exact and res.lower == 3
        assert res.method is DavenportMethod.BRUTE_FORCE

    def test_bounds_region(self):
        g = AbelianGroup((10, 10))
        res = davenport(g, 64)
        assert res.method is DavenportMethod.BOUNDS_ONLY
        assert res.lower == 19
        assert res.lower <= res.upper

    def test_upper_never_below_lower(self):
        rng = random.Random(5)
        for _ in range(100):
            g = random_group(rng)
            res = davenport(g, 30)
            assert res.lower <= res.upper


class TestEbkUpper:
    def test_cyclic_is_order(self):
        for n in (1, 2, 7, 64, 1000):
            g = AbelianGroup((n,)) if n > 1 else TRIVIAL_GROUP
            assert ebk_upper(g) == n

    def test_klein(self):
        # 4 * (1 + ln 2)/2 = 3.386...
        assert ebk_upper(AbelianGroup((2, 2))) == 3

    def test_three_three(self):
        # 9 * (1 + ln 3)/3 = 6.295...
        assert ebk_upper(AbelianGroup((3, 3))) == 6

    def test_floor_against_high_precision(self):
        import mpmath

        mpmath.mp.dps = 60
        rng = random.Random(7)
        for _ in range(200):
            g = random_group(rng)
            if g.order == 1:
                continue
            r = g.r_index()
            want = int(mpmath.floor(g.order * (1 + mpmath.log(r)) / r))
            assert ebk_upper(g) == want, g

    def test_ln_bounds_bracket(self):
        import mpmath

        mpmath.mp.dps = 50
        for r in (2, 3, 7, 100, 12345):
            lo, hi = _ln_bounds(r, 24)
            assert lo < hi
            true = mpmath.log(r)
            assert mpmath.mpf(lo.numerator) / lo.denominator < true
            assert mpmath.mpf(hi.numerator) / hi.denominator > true


class TestRank2Bound:
    def test_examples(self):
        assert rank2_exponent_bound_check(AbelianGroup((6,)))
        assert rank2_exponent_bound_check(AbelianGroup((2, 4)))
        assert rank2_exponent_bound_check(AbelianGroup((2, 2, 2)))

    def test_thousand_random_shapes(self):
        rng = random.Random(11)
        for _ in range(1000):
            assert rank2_exponent_bound_check(random_group(rng, max_rank=5))


class TestQuotientStructure:
    def test_c4_mod_c2(self):
        assert quotient_structure([[4], [2]], 1).invariant_factors == (2,)

    def test_klein_mod_diagonal(self):
        got = quotient_structure([[2, 0], [0, 2], [1, 1]], 2)
        assert got.invariant_factors == (2,)

    def test_c12_mod_c4(self):
        # the order-4 subgroup of C12 is generated by 3
        assert quotient_structure([[12], [3]], 1).invariant_factors == (3,)

    def test_infinite_presentation_rejected(self):
        with pytest.raises(DomainError):
            quotient_structure([[2, 0]], 2)
        with pytest.raises(DomainError):
            quotient_structure([], 1)

    def test_order_multiplicativity(self):
        # quotient of G by the cyclic subgroup generated by a random element:
        # #quotient * #subgroup == #G, where #subgroup is the element's order
        rng = random.Random(13)
        for _ in range(200):
            g = random_group(rng, max_rank=3, max_factor=12)
            if g.order == 1:
                continue
            inv = g.invariant_factors
            elem = [rng.randrange(d) for d in inv]
            elem_order = math.lcm(
                *(d // math.gcd(d, x) for d, x in zip(inv, elem))
            )
            rows = [
                [inv[i] if j == i else 0 for j in range(len(inv))]
                for i in range(len(inv))
            ]
            rows.append(list(elem))
            q = quotient_structure(rows, len(inv))
            assert q.order * elem_order == g.order

    def test_smith_matches_sympy(self):
        rng = random.Random(17)
        for _ in range(100):
            rows = rng.randrange(1, 5)
            cols = rng.randrange(1, 5)
            mat = [[rng.randrange(-30, 31) for _ in range(cols)] for _ in range(rows)]
            got = _smith_diagonal(mat)
            snf = smith_normal_form(Matrix(mat))
            want = [abs(int(snf[i, i])) for i in range(min(rows, cols))]
            assert got == want, mat


class TestShapes:
    def test_counts_against_chain_enumeration(self):
        def chains(n):
            # all divisibility chains d1 | d2 | ... with product n
            if n == 1:
                return [()]
            out = []
            def rec(remaining, prev, acc):
                if remaining == 1:
                    out.append(tuple(acc))
                    return
                d = prev
                while d <= remaining:
                    if remaining % d == 0 and d % prev == 0 and d > 1:
                        rec(remaining // d, d, acc + [d])
                    d += 1
            rec(n, 1, [])
            # chains list factors largest-last; invariant factors ascending
            return {tuple(sorted(c)) for c in out}

        for n in range(1, 40):
            got = {g.invariant_factors for g in abelian_groups_of_order(n)}
            want = chains(n) if n > 1 else {()}
            assert got == want, n

    def test_total_count_up_to_36(self):
        total = sum(len(abelian_groups_of_order(n)) for n in range(1, 37))
        # 62 shapes including the trivial group (61 nontrivial)
        assert total == 62
