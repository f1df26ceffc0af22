import itertools
import random
from fractions import Fraction

import pytest

from mdseries.errors import ConstraintSyntaxError, WorkCapExceeded
from mdseries.system import LaurentMonomialSystem, make_system
from mdseries.variety import (IntegerPoint, cartesian_check, check_property_S,
                              enumerate_box, local_solutions,
                              on_monomial_variety, on_monomial_variety_rational,
                              parse_constraints, recombine)


def random_system(rng, tmax=3, mmax=2, amax=3, wmax=6):
    t = rng.randint(1, tmax)
    m = rng.randint(1, mmax)
    rows = []
    for _ in range(m):
        while True:
            row = tuple(rng.randint(-amax, amax) for _ in range(t))
            if any(row):
                break
        rows.append(row)
    return LaurentMonomialSystem(
        t=t, m=m, A=tuple(rows),
        omega=tuple(rng.randint(1, wmax) for _ in range(m)),
        omega_prime=tuple(rng.randint(1, wmax) for _ in range(m)))


def brute_force_box(S, N):
    """Oracle: exact rational check of every point in the box."""
    out = []
    for point in itertools.product(range(1, N + 1), repeat=S.t):
        ok = True
        for i in range(S.m):
            val = Fraction(S.omega[i])
            for a, n in zip(S.A[i], point):
                val *= Fraction(n) ** a
            if val != S.omega_prime[i]:
                ok = False
                break
        if ok:
            out.append(point)
    return out


class TestParser:
    def test_additive_example(self):
        V = parse_constraints("x1 + x2 - 5", 2)
        assert V.is_solution((2, 3))
        assert not V.is_solution((2, 4))

    def test_monomial_form(self):
        V = parse_constraints("x1*x2 - x3", 3)
        assert V.is_solution((2, 3, 6))
        assert not V.is_solution((2, 3, 7))

    def test_power(self):
        V = parse_constraints("x1^2 - 4", 1)
        assert [p.coords for p in enumerate_box(V, 10)] == [(2,)]

    def test_multiple_constraints(self):
        V = parse_constraints("x1 - x2; x1 - 3", 2)
        assert [p.coords for p in enumerate_box(V, 5)] == [(3, 3)]

    def test_parentheses_and_precedence(self):
        V = parse_constraints("(x1 + 1)*(x1 - 1) - x1^2 + 1", 1)
        # identically zero
        assert len(enumerate_box(V, 7)) == 7

    def test_syntax_error_carries_position(self):
        with pytest.raises(ConstraintSyntaxError) as exc:
            parse_constraints("x1 + \n* 2", 1)
        assert exc.value.line == 2 and exc.value.col == 1

    def test_variable_out_of_range(self):
        with pytest.raises(ConstraintSyntaxError):
            parse_constraints("x3 - 1", 2)

    def test_bare_x(self):
        with pytest.raises(ConstraintSyntaxError):
            parse_constraints("x + 1", 1)

    def test_exponent_overflow(self):
        with pytest.raises(ConstraintSyntaxError):
            parse_constraints("x1^99999999", 1)

    def test_unexpected_character(self):
        with pytest.raises(ConstraintSyntaxError):
            parse_constraints("x1 % 2", 1)

    def test_trailing_garbage(self):
        with pytest.raises(ConstraintSyntaxError):
            parse_constraints("x1 - 1)", 1)


class TestEnumerateBox:
    def test_additive(self):
        V = parse_constraints("x1 + x2 - 5", 2)
        assert [p.coords for p in enumerate_box(V, 5)] == [
            (1, 4), (2, 3), (3, 2), (4, 1)]

    def test_diagonal(self):
        S = make_system([[1, -1]])
        assert [p.coords for p in enumerate_box(S, 4)] == [
            (1, 1), (2, 2), (3, 3), (4, 4)]

    def test_product_count(self):
        S = make_system([[1, 1, -1]])
        pts = enumerate_box(S, 4)
        assert len(pts) == 8
        assert all(a * b == c for a, b, c in (p.coords for p in pts))

    def test_lexicographic_order(self):
        S = make_system([[1, 1, -1]])
        pts = [p.coords for p in enumerate_box(S, 6)]
        assert pts == sorted(pts)

    def test_empty_variety(self):
        S = make_system([[0, 0]], omega=(2,), omega_prime=(3,))
        assert enumerate_box(S, 10) == []

    def test_no_constraints_full_box(self):
        S = LaurentMonomialSystem(t=2, m=0, A=(), omega=(), omega_prime=())
        assert len(enumerate_box(S, 5)) == 25

    def test_monomial_against_brute_force(self):
        rng = random.Random(42)
        for _ in range(40):
            S = random_system(rng)
            N = rng.randint(2, 12)
            assert [p.coords for p in enumerate_box(S, N)] == brute_force_box(S, N)

    def test_twisted_cases(self):
        S = make_system([[2]], omega=(1,), omega_prime=(4,))
        assert [p.coords for p in enumerate_box(S, 10)] == [(2,)]
        S = make_system([[1, -1]], omega=(2,), omega_prime=(1,))
        assert [p.coords for p in enumerate_box(S, 10)] == [
            (1, 2), (2, 4), (3, 6), (4, 8), (5, 10)]

    def test_work_cap(self):
        V = parse_constraints("x1 - x2", 2)
        with pytest.raises(WorkCapExceeded):
            enumerate_box(V, 100, work_cap=100)


class TestMembership:
    def test_valuation_equals_rational_full_box(self):
        rng = random.Random(8)
        for _ in range(10):
            S = random_system(rng, tmax=3)
            for point in itertools.product(range(1, 31), repeat=S.t):
                assert on_monomial_variety(S, point) == \
                    on_monomial_variety_rational(S, point)

    def test_twist_prime_outside_support(self):
        # (1,1) has no prime support, but the twists force a condition at 2
        S = make_system([[1, -1]], omega=(2,), omega_prime=(1,))
        assert not on_monomial_variety(S, (1, 1))
        assert on_monomial_variety(S, (1, 2))


class TestRecombine:
    def test_idempotent(self):
        x = IntegerPoint((4, 9))
        assert recombine(x, x, {2: "x", 3: "y"}).coords == (4, 9)

    def test_mixed_choice(self):
        x, y = IntegerPoint((4, 1)), IntegerPoint((2, 3))
        assert recombine(x, y, {2: "x", 3: "y"}).coords == (4, 3)

    def test_all_x(self):
        x, y = IntegerPoint((4, 1)), IntegerPoint((2, 3))
        assert recombine(x, y, {2: "x", 3: "x"}).coords == (4, 1)

    def test_valuations_match_chosen_side(self):
        rng = random.Random(13)
        for _ in range(50):
            x = IntegerPoint(tuple(rng.randint(1, 400) for _ in range(3)))
            y = IntegerPoint(tuple(rng.randint(1, 400) for _ in range(3)))
            primes = sorted(set(x.support_primes()) | set(y.support_primes()))
            choice = {p: rng.choice(["x", "y"]) for p in primes}
            z = recombine(x, y, choice)
            for p in primes:
                src = x if choice[p] == "x" else y
                assert z.exponent_column(p) == src.exponent_column(p)

    def test_missing_choice(self):
        with pytest.raises(ValueError):
            recombine(IntegerPoint((2,)), IntegerPoint((3,)), {2: "x"})


class TestPropertyS:
    def test_additive_witness(self):
        V = parse_constraints("x1 + x2 - 5", 2)
        w = check_property_S(V, 5)
        assert w is not None
        assert V.is_solution(w.x.coords) and V.is_solution(w.y.coords)
        assert not V.is_solution(w.point.coords)
        assert recombine(w.x, w.y, dict(w.choice)).coords == w.point.coords

    def test_monomial_systems_pass(self):
        S = make_system([[1, 1, -1]])
        assert check_property_S(S, 30) is None

    def test_diagonal_poly_passes(self):
        V = parse_constraints("x1 - x2", 2)
        assert check_property_S(V, 20) is None

    def test_random_monomial_systems_pass(self):
        rng = random.Random(314)
        for _ in range(25):
            S = random_system(rng)
            assert check_property_S(S, 30) is None

    def test_work_cap(self):
        V = parse_constraints("x1 + x2 - 30", 2)
        with pytest.raises(WorkCapExceeded):
            check_property_S(V, 29, work_cap=40)


class TestLocalSolutions:
    def test_diagonal(self):
        S = make_system([[1, -1]])
        assert local_solutions(S, 7, 3).solutions == (
            (0, 0), (1, 1), (2, 2), (3, 3))

    def test_product(self):
        S = make_system([[1, 1, -1]])
        got = set(local_solutions(S, 3, 2).solutions)
        assert got == {(0, 0, 0), (1, 0, 1), (0, 1, 1), (2, 0, 2), (0, 2, 2), (1, 1, 2)}

    def test_twisted(self):
        S = make_system([[2]], omega=(1,), omega_prime=(4,))
        assert local_solutions(S, 2, 3).solutions == ((1,),)
        assert local_solutions(S, 3, 3).solutions == ((0,),)

    def test_brute_force_oracle(self):
        rng = random.Random(66)
        for _ in range(40):
            S = random_system(rng, tmax=4)
            B = rng.randint(0, 4)
            p = rng.choice([2, 3, 5])
            rhs = [0] * S.m
            for i in range(S.m):
                w, wp = S.omega[i], S.omega_prime[i]
                vw = vwp = 0
                while w % p == 0:
                    w //= p
                    vw += 1
                while wp % p == 0:
                    wp //= p
                    vwp += 1
                rhs[i] = vwp - vw
            expect = tuple(
                alpha for alpha in itertools.product(range(B + 1), repeat=S.t)
                if all(sum(a * e for a, e in zip(S.A[i], alpha)) == rhs[i]
                       for i in range(S.m)))
            assert local_solutions(S, p, B).solutions == expect

    def test_bound_validation(self):
        S = make_system([[1]])
        with pytest.raises(ValueError):
            local_solutions(S, 2, 65)


class TestCartesianCheck:
    def test_diagonal(self):
        S = make_system([[1, -1]])
        assert cartesian_check(S, 30, 30, 5).equal

    def test_product(self):
        S = make_system([[1, 1, -1]])
        assert cartesian_check(S, 36, 7, 3).equal

    def test_empty_variety(self):
        S = make_system([[0, 0]], omega=(2,), omega_prime=(3,))
        assert cartesian_check(S, 20, 5, 3).equal

    def test_twisted(self):
        S = make_system([[2]], omega=(1,), omega_prime=(4,))
        assert cartesian_check(S, 20, 5, 4).equal

    def test_random_systems(self):
        rng = random.Random(1000)
        for _ in range(15):
            S = random_system(rng, tmax=3, mmax=2, wmax=4)
            if any(p > 7 for p in S.twist_primes()):
                continue
            assert cartesian_check(S, 16, 7, 4).equal

    def test_twist_prime_beyond_P(self):
        S = make_system([[1]], omega=(1,), omega_prime=(11,))
        with pytest.raises(ValueError):
            cartesian_check(S, 20, 7, 4)


class TestIntegerPoint:
    def test_factorizations(self):
        p = IntegerPoint((12, 1))
        assert p.factorizations == (((2, 2), (3, 1)), ())

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            IntegerPoint((0, 1))

    def test_ordering_and_hash(self):
        a, b = IntegerPoint((1, 2)), IntegerPoint((1, 3))
        assert a < b and len({a, b, IntegerPoint((1, 2))}) == 2
