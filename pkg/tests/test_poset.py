import pytest
from hypothesis import given, settings, strategies as st

from mbfix.errors import ResourceLimitError
from mbfix.poset import (Poset, antichain, boolean_cube, chain, count_chain_maps,
                         count_monotone_maps, count_upsets, disjoint_sum, empty,
                         enumerate_upsets, is_upset, principal_upset, product,
                         transitive_closure, upset_lattice, validate_poset)


def brute_force_upsets(p):
    """Independent oracle: scan all subsets for upward closure."""
    count = 0
    for mask in range(1 << p.size):
        if all(not (p.rows[i] & ~mask) for i in range(p.size) if mask >> i & 1):
            count += 1
    return count


@st.composite
def posets(draw, max_size=6):
    """Random posets: orient random edges low-to-high, then close."""
    n = draw(st.integers(min_value=0, max_value=max_size))
    rows = [1 << i for i in range(n)]
    if n > 1:
        pairs = draw(st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
            max_size=2 * n))
        for a, b in pairs:
            if a != b:
                rows[min(a, b)] |= 1 << max(a, b)
    return Poset(transitive_closure(rows))


class TestConstructors:
    def test_chain_one_is_single_reflexive_element(self):
        c = chain(1)
        assert c.size == 1 and c.rows == (1,)
        assert c == antichain(1)

    def test_chain_three_matrix(self):
        assert chain(3).rows == (0b111, 0b110, 0b100)

    def test_chain_upset_counts(self):
        for k in range(1, 9):
            assert count_upsets(chain(k)) == k + 1

    def test_antichain_upset_counts(self):
        for k in range(1, 9):
            assert count_upsets(antichain(k)) == 2 ** k

    def test_boolean_cube_zero_is_chain_one(self):
        assert boolean_cube(0) == chain(1)

    def test_boolean_cube_counts(self):
        assert count_upsets(boolean_cube(2)) == 6
        assert count_upsets(boolean_cube(3)) == 20

    def test_cube_order_is_inclusion(self):
        b3 = boolean_cube(3)
        for x in range(8):
            for y in range(8):
                assert b3.leq(x, y) == (x & ~y == 0)

    def test_cube_range_errors(self):
        with pytest.raises(ValueError):
            boolean_cube(-1)
        with pytest.raises(ValueError):
            boolean_cube(17)
        with pytest.raises(ResourceLimitError):
            boolean_cube(16)

    def test_product_with_singleton_is_identity(self):
        assert count_upsets(product(chain(3), chain(1))) == count_upsets(chain(3))
        assert product(chain(3), chain(1)).rows == chain(3).rows

    def test_product_of_chains(self):
        assert count_upsets(product(chain(4), chain(3))) == 35

    def test_product_of_cubes_is_bigger_cube(self):
        p = product(boolean_cube(1), boolean_cube(1))
        assert p == boolean_cube(2)

    def test_disjoint_sum_of_singletons_is_antichain(self):
        assert disjoint_sum(chain(1), chain(1)) == antichain(2)

    def test_disjoint_sum_of_antichains(self):
        assert disjoint_sum(antichain(2), antichain(3)) == antichain(5)

    def test_empty_poset_everywhere(self):
        e = empty()
        assert count_upsets(e) == 1
        assert count_upsets(product(e, chain(3))) == 1
        assert count_upsets(disjoint_sum(e, chain(3))) == 4
        assert validate_poset(e) == "ok"


class TestValidate:
    def test_constructors_validate_ok(self):
        for p in [chain(4), antichain(3), boolean_cube(3),
                  product(chain(2), chain(3)), disjoint_sum(chain(2), antichain(2))]:
            assert validate_poset(p) == "ok"

    def test_antisymmetry_violation(self):
        p = Poset([0b11, 0b11])
        assert validate_poset(p).startswith("antisymmetry")

    def test_transitivity_violation(self):
        p = Poset([0b011, 0b110, 0b100])
        assert validate_poset(p).startswith("transitivity")

    def test_reflexivity_violation(self):
        p = Poset([0b10, 0b10])
        assert validate_poset(p).startswith("reflexivity")

    def test_constructor_can_reject(self):
        with pytest.raises(ValueError):
            Poset([0b11, 0b11], validate=True)


class TestCountUpsets:
    def test_chain_three_is_four(self):
        assert count_upsets(chain(3)) == 4

    def test_empty_is_one(self):
        assert count_upsets(empty()) == 1

    def test_product_chain_cube(self):
        assert count_upsets(product(chain(3), boolean_cube(2))) == 50

    def test_matches_brute_force_on_small_structured(self):
        for p in [chain(5), antichain(4), boolean_cube(3),
                  product(chain(3), chain(4)), disjoint_sum(chain(3), antichain(2)),
                  product(chain(2), boolean_cube(2))]:
            assert count_upsets(p) == brute_force_upsets(p)

    @given(posets(max_size=10))
    @settings(max_examples=120, deadline=None)
    def test_matches_brute_force_on_random(self, p):
        assert count_upsets(p) == brute_force_upsets(p)

    def test_resource_limit_reported(self):
        with pytest.raises(ResourceLimitError):
            count_upsets(boolean_cube(7), max_states=1000)


class TestSumProductIdentities:
    @given(posets(max_size=6), posets(max_size=6))
    @settings(max_examples=60, deadline=None)
    def test_sum_factorises(self, s, t):
        assert count_upsets(disjoint_sum(s, t)) == count_upsets(s) * count_upsets(t)

    @given(posets(max_size=4), posets(max_size=3))
    @settings(max_examples=60, deadline=None)
    def test_product_order_independent_and_exact(self, s, t):
        a = count_upsets(product(s, t))
        b = count_upsets(product(t, s))
        assert a == b == brute_force_upsets(product(s, t))

    def test_counting_example(self):
        assert count_upsets(disjoint_sum(chain(2), chain(3))) == 3 * 4


class TestUpsetMasks:
    def test_principal_of_maximal_is_singleton(self):
        c = chain(4)
        assert principal_upset(c, 3).bits == 0b1000

    def test_principal_of_minimum_is_full(self):
        c = chain(4)
        assert principal_upset(c, 0).bits == 0b1111

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            principal_upset(chain(2), 2)

    def test_all_principal_upsets_are_upsets(self):
        for p in [chain(4), boolean_cube(3), product(chain(2), chain(3))]:
            for i in range(p.size):
                assert is_upset(p, principal_upset(p, i).bits)

    def test_enumerate_upsets_all_closed(self):
        p = product(chain(2), chain(3))
        masks = enumerate_upsets(p)
        assert len(masks) == count_upsets(p)
        assert all(is_upset(p, m) for m in masks)
        assert masks[0] == 0 and masks[-1] == p.full_mask


class TestMonotoneMaps:
    def test_chain_to_chain(self):
        assert count_monotone_maps(chain(4), chain(4)) == 35

    def test_singleton_source_counts_targets(self):
        q = boolean_cube(2)
        assert count_monotone_maps(chain(1), q) == q.size

    def test_cube_to_chain_vs_brute(self):
        # maps B^2 -> P_2 are exactly the up-sets of B^2
        assert count_monotone_maps(boolean_cube(2), chain(2)) == 6

    def test_upset_lattice_reduction(self):
        base = chain(2)
        lattice = upset_lattice(base)  # B^{P_2} = P_3
        assert lattice.size == 3
        s = boolean_cube(2)
        assert count_monotone_maps(s, lattice) == count_upsets(product(base, s))

    @given(posets(max_size=3), posets(max_size=3))
    @settings(max_examples=40, deadline=None)
    def test_dfs_matches_exhaustive(self, s, t):
        from itertools import product as iproduct
        if t.size == 0:
            return
        expected = 0
        for assignment in iproduct(range(t.size), repeat=s.size):
            if all(t.leq(assignment[i], assignment[j])
                   for i in range(s.size) for j in range(s.size) if s.leq(i, j)):
                expected += 1
        assert count_monotone_maps(s, t) == expected


class TestChainMaps:
    def test_small_cases_match_definition(self):
        q = product(chain(2), chain(3))
        assert count_chain_maps(q, 0) == 1
        for k in range(1, 7):
            assert count_chain_maps(q, k) == count_monotone_maps(chain(k), q)

    def test_closed_forms(self):
        q = boolean_cube(2)
        assert count_chain_maps(q, 2) == 9
        assert count_chain_maps(q, 3) == count_monotone_maps(chain(3), q)
        assert count_chain_maps(q, 4) == count_monotone_maps(chain(4), q)


class TestJson:
    def test_round_trip(self):
        p = product(chain(2), antichain(2))
        data = p.to_json_dict()
        q = Poset.from_json_dict(data)
        assert q == p

    def test_bad_matrix_rejected(self):
        with pytest.raises(ValueError):
            Poset.from_json_dict({"size": 2, "order": ["11", "11"], "labels": None})
