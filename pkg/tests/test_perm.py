import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from mbfix.perm import (CycleType, Permutation, act_on_point, class_size,
                        cycle_poset, cycle_type, enumerate_cycle_types,
                        parse_cycles, point_table)
from mbfix.poset import boolean_cube, count_upsets, chain, product, validate_poset


class TestParsing:
    def test_transposition(self):
        assert parse_cycles("(12)", 2).map == (2, 1)

    def test_two_cycles(self):
        p = parse_cycles("(12)(345)", 5)
        assert p.map == (2, 1, 4, 5, 3)

    def test_multi_digit_with_space(self):
        p = parse_cycles("(1 10)", 10)
        assert p.map[0] == 10 and p.map[9] == 1
        assert parse_cycles("(1,10)", 10) == p

    def test_identity_spellings(self):
        assert parse_cycles("e", 4).is_identity()

    def test_trailing_fixed_points(self):
        p = parse_cycles("(12)", 5)
        assert p.n == 5 and p.support() == [0, 1]

    def test_repeated_element_rejected(self):
        with pytest.raises(ValueError):
            parse_cycles("(12)(13)", 3)
        with pytest.raises(ValueError):
            parse_cycles("(11)", 2)

    def test_malformed_rejected(self):
        for bad in ["12)", "(12", "(a b)", "(1 2))", "( )"]:
            with pytest.raises(ValueError):
                parse_cycles(bad, 4)

    def test_degree_too_small(self):
        with pytest.raises(ValueError):
            parse_cycles("(123)", 2)

    def test_text_round_trip(self):
        for text, n in [("(12)", 3), ("(12)(345)", 6), ("(123)(45)", 5)]:
            p = parse_cycles(text, n)
            assert parse_cycles(p.to_text(), n) == p


class TestAction:
    def test_worked_table_n3(self):
        pi1 = parse_cycles("(12)", 3)
        pi2 = parse_cycles("(123)", 3)
        # columns x = 000 100 010 110 001 101 011 111
        assert [act_on_point(pi1, x) for x in range(8)] == [0, 2, 1, 3, 4, 6, 5, 7]
        assert [act_on_point(pi2, x) for x in range(8)] == [0, 4, 1, 5, 2, 6, 3, 7]

    def test_identity_action(self):
        e = Permutation.identity(4)
        assert all(act_on_point(e, x) == x for x in range(16))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            act_on_point(parse_cycles("(12)", 2), 4)

    @given(st.integers(min_value=1, max_value=7), st.data())
    @settings(max_examples=80, deadline=None)
    def test_action_preserves_subset_order(self, n, data):
        images = data.draw(st.permutations(range(n)))
        pi = Permutation(images)
        table = point_table(pi)
        x = data.draw(st.integers(min_value=0, max_value=(1 << n) - 1))
        y = data.draw(st.integers(min_value=0, max_value=(1 << n) - 1))
        assert (x & ~y == 0) == (table[x] & ~table[y] == 0)

    def test_inverse_composes_to_identity(self):
        pi = parse_cycles("(123)(45)", 5)
        assert pi.compose(pi.inverse()).is_identity()
        assert pi.inverse().compose(pi).is_identity()


class TestCycleTypes:
    def test_identity_type(self):
        assert cycle_type(Permutation.identity(4)).parts == (1, 1, 1, 1)

    def test_mixed_type(self):
        assert cycle_type(parse_cycles("(12)(345)", 5)).parts == (3, 2)

    def test_four_transpositions(self):
        assert cycle_type(parse_cycles("(12)(34)(56)(78)", 8)).parts == (2, 2, 2, 2)

    def test_class_sizes(self):
        assert class_size(CycleType((4,))) == 6
        assert class_size(CycleType((2, 2, 2, 2))) == 105
        assert class_size(CycleType((2, 1, 1, 1, 1, 1))) == 21
        assert class_size(CycleType((6, 1, 1))) == 3360

    def test_enumeration_counts(self):
        for n, want in [(4, 5), (7, 15), (8, 22)]:
            assert len(enumerate_cycle_types(n)) == want

    def test_class_sizes_sum_to_factorial(self):
        for n in range(1, 13):
            assert sum(class_size(t) for t in enumerate_cycle_types(n)) == math.factorial(n)

    def test_canonical_representative(self):
        t = CycleType((3, 2, 1))
        rep = t.canonical_permutation()
        assert rep.to_text() == "(123)(45)"
        assert cycle_type(rep) == t


class TestCyclePoset:
    def test_transposition_on_square(self):
        cp = cycle_poset(parse_cycles("(12)", 2))
        assert cp.size == 3
        assert cp.poset.is_chain()
        assert cp.lengths() == [1, 2, 1]

    def test_four_cycle_on_b4(self):
        cp = cycle_poset(parse_cycles("(1234)", 4))
        assert cp.size == 6
        assert sorted(cp.lengths()) == [1, 1, 2, 4, 4, 4]
        # order C0 < C1 < {C2, C3} < C4 < C5
        p = cp.poset
        assert p.leq(0, 1) and p.leq(1, 2) and p.leq(1, 3)
        assert not p.leq(2, 3) and not p.leq(3, 2)
        assert p.leq(2, 4) and p.leq(3, 4) and p.leq(4, 5)
        assert count_upsets(p) == 8

    def test_five_cycle_on_b5(self):
        cp = cycle_poset(parse_cycles("(12345)", 5))
        assert cp.size == 8
        assert sorted(cp.lengths()) == [1, 1, 5, 5, 5, 5, 5, 5]
        assert count_upsets(cp.poset) == 11

    def test_printed_matrix_of_12_on_b3(self):
        cp = cycle_poset(parse_cycles("(12)", 3))
        rows = ["".join("1" if cp.poset.rows[i] >> j & 1 else "0" for j in range(6))
                for i in range(6)]
        assert rows == ["111111", "011011", "001001", "000111", "000011", "000001"]

    def test_identity_cycle_poset_is_cube(self):
        cp = cycle_poset(Permutation.identity(3))
        assert cp.poset == boolean_cube(3)
        assert all(length == 1 for length in cp.lengths())

    def test_cycles_partition_all_points(self):
        for text, n in [("(12)(34)", 4), ("(123456)", 6), ("(12)(3456)", 6)]:
            cp = cycle_poset(parse_cycles(text, n))
            points = sorted(x for c in cp.cycles for x in c)
            assert points == list(range(1 << n))
            order = parse_cycles(text, n)
            for cyc in cp.cycles:
                # each cycle is closed under the action
                members = set(cyc)
                assert {act_on_point(order, x) for x in cyc} == members

    def test_representatives_are_minima_and_sorted(self):
        cp = cycle_poset(parse_cycles("(123)(456)", 6))
        reps = cp.representatives()
        assert reps == sorted(reps)
        assert all(rep == min(cyc) for rep, cyc in zip(reps, cp.cycles))

    def test_relation_is_valid_partial_order_without_closure(self):
        for text, n in [("(12)", 4), ("(1234)", 4), ("(12)(34)(56)", 6),
                        ("(123)(456)", 6), ("(12345678)", 8)]:
            cp = cycle_poset(parse_cycles(text, n))
            assert not cp.closed
            assert validate_poset(cp.poset) == "ok"

    def test_labels_carry_rep_and_length(self):
        cp = cycle_poset(parse_cycles("(12)", 2))
        assert cp.poset.labels == ((0, 1), (1, 2), (3, 1))


class TestCountingInvariance:
    def test_conjugates_have_equal_counts(self):
        rng = random.Random(7)
        for text, n in [("(12)(34)", 4), ("(123)", 5), ("(12345)", 5), ("(12)(3456)", 6)]:
            pi = parse_cycles(text, n)
            base = count_upsets(cycle_poset(pi).poset)
            for _ in range(3):
                images = list(range(n))
                rng.shuffle(images)
                sigma = Permutation(images)
                conj = sigma.compose(pi).compose(sigma.inverse())
                assert cycle_type(conj) == cycle_type(pi)
                assert count_upsets(cycle_poset(conj).poset) == base

    def test_coprime_product_structure(self):
        # Cycl((123)(45), B^5) is the product P_4 x P_3 at the counting level
        whole = count_upsets(cycle_poset(parse_cycles("(123)(45)", 5)).poset)
        split = count_upsets(product(chain(4), chain(3)))
        assert whole == split == 35
