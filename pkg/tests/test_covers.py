from itertools import product

import pytest

from oddtown import (
    GpCover,
    KPartiteProduct,
    Mod2Cover,
    SubsetBits,
    build_b22_pair,
    build_cover_33,
    cover_to_ok_biclique_cover,
    cover_to_tuple,
    coverage_parity,
    distinct_index_count,
    is_target_edge,
    link_cover,
    permute_gp_cover,
    restrict_cover,
    trivial_gp_cover,
    tuple_to_cover,
    verify_bollobas_tuple,
    verify_exact_gp_cover,
    verify_mod2_cover,
    verify_ok_biclique_cover,
)
from oddtown.covers import parity_functions_equal


def prod(n, *parts):
    return KPartiteProduct.from_lists(n, parts)


def cover_22_of_3():
    # {1} x {2,3}, {2} x {1,3}, {3} x {1,2}
    return Mod2Cover(
        2, 2, 3,
        (prod(3, [1], [2, 3]), prod(3, [2], [1, 3]), prod(3, [3], [1, 2])),
    )


def naive_parity(cover, idx):
    count = 0
    for p in cover.products:
        if all(idx[j] in p.parts[j].elements() for j in range(cover.k)):
            count += 1
    return count % 2


class TestIndexHelpers:
    def test_distinct_counts(self):
        assert distinct_index_count((1, 1, 1), 3) == 1
        assert distinct_index_count((1, 2, 1), 3) == 2
        assert distinct_index_count((3, 1, 2), 3) == 3

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            distinct_index_count((0, 1), 3)
        with pytest.raises(ValueError):
            distinct_index_count((4,), 3)

    def test_is_target_edge(self):
        assert is_target_edge((1, 2, 3), 3, 3)
        assert not is_target_edge((1, 1, 2), 3, 3)
        assert not is_target_edge((1, 1), 2, 2)


class TestCoverageParity:
    def test_full_product_covers_once(self):
        full = Mod2Cover(2, 2, 3, (prod(3, [1, 2, 3], [1, 2, 3]),))
        for idx in product((1, 2, 3), repeat=2):
            assert coverage_parity(full, idx) == 1

    def test_empty_cover(self):
        empty = Mod2Cover(2, 2, 3, ())
        assert coverage_parity(empty, (1, 2)) == 0

    def test_three_product_cover_cells(self):
        c = cover_22_of_3()
        assert coverage_parity(c, (3, 3)) == 0
        assert coverage_parity(c, (1, 2)) == 1
        for idx in product((1, 2, 3), repeat=2):
            assert coverage_parity(c, idx) == naive_parity(c, idx)


class TestVerifyMod2Cover:
    def test_three_product_cover_valid(self):
        assert verify_mod2_cover(cover_22_of_3()).valid

    def test_bare_full_product_invalid(self):
        c = Mod2Cover(2, 2, 3, (prod(3, [1, 2, 3], [1, 2, 3]),))
        report = verify_mod2_cover(c)
        assert not report.valid
        assert report.violations[0].indices == (1, 1)

    def test_cover33_small(self):
        c = build_cover_33(2)
        assert len(c) == 7 and verify_mod2_cover(c).valid

    def test_empty_parts_banned(self):
        with pytest.raises(ValueError):
            prod(3, [], [1])

    def test_repeated_products_cancel(self):
        base = cover_22_of_3()
        doubled = Mod2Cover(2, 2, 3, base.products + base.products[:1])
        assert not verify_mod2_cover(doubled).valid  # repeat flips its cells
        cancelled = Mod2Cover(2, 2, 3, base.products + base.products)
        for idx in product((1, 2, 3), repeat=2):
            assert coverage_parity(cancelled, idx) == 0


class TestExactGpCover:
    def test_enumeration_cover(self):
        c = GpCover(2, 3, (prod(3, [1], [2]), prod(3, [1], [3]), prod(3, [2], [3])))
        assert verify_exact_gp_cover(c).valid

    def test_size_two_cover(self):
        c = GpCover(2, 3, (prod(3, [1, 2], [3]), prod(3, [1], [2])))
        assert verify_exact_gp_cover(c).valid and len(c) == 2

    def test_overlapping_parts_rejected_and_double_cover_invalid(self):
        with pytest.raises(ValueError):
            GpCover(2, 3, (prod(3, [1, 2], [2, 3]),))
        doubled = GpCover(2, 3, (prod(3, [1], [2]), prod(3, [1], [2])))
        report = verify_exact_gp_cover(doubled)
        assert not report.valid
        assert report.violations[0].indices == (1, 2)


class TestTupleCorrespondence:
    def test_cover_to_tuple_size3(self):
        system = cover_to_tuple(cover_22_of_3())
        assert system.m == 3 and system.ground_size == 3
        a, b = system.families
        assert [s.elements() for s in a] == [(1,), (2,), (3,)]
        assert [s.elements() for s in b] == [(2, 3), (1, 3), (1, 2)]

    def test_empty_cover(self):
        system = cover_to_tuple(Mod2Cover(2, 2, 3, ()))
        assert system.ground_size == 0 and system.m == 3

    def test_cover33_tuple(self):
        system = cover_to_tuple(build_cover_33(2))
        assert verify_bollobas_tuple(system).valid

    def test_tuple_to_cover_example(self):
        n = 2
        a = (SubsetBits.from_elements(n, [1]), SubsetBits.from_elements(n, [2]),
             SubsetBits.full(n))
        b = (SubsetBits.from_elements(n, [2]), SubsetBits.from_elements(n, [1]),
             SubsetBits.full(n))
        from oddtown import TupleSystem

        system = TupleSystem(2, 2, 3, n, (a, b))
        cover = tuple_to_cover(system)
        assert cover.n == 3 and len(cover) == 2
        parts = [[p.elements() for p in pr.parts] for pr in cover.products]
        assert parts == [[(1, 3), (2, 3)], [(2, 3), (1, 3)]]
        assert verify_mod2_cover(cover).valid

    def test_b22_pair_gives_cover(self):
        cover = tuple_to_cover(build_b22_pair(4))
        assert cover.n == 5 and len(cover) == 4
        assert verify_mod2_cover(cover).valid

    def test_empty_part_dropped_with_warning(self):
        from oddtown import TupleSystem

        # ground element 2 appears in no set of family B
        a = (SubsetBits.from_elements(2, [1, 2]),)
        b = (SubsetBits.from_elements(2, [1]),)
        system = TupleSystem(2, 2, 1, 2, (a, b))
        with pytest.warns(UserWarning, match="empty part"):
            cover = tuple_to_cover(system)
        assert len(cover) == 1

    def test_round_trip_parity(self, cover_pool):
        for c in cover_pool:
            back = tuple_to_cover(cover_to_tuple(c))
            assert parity_functions_equal(c, back)

    def test_correspondence_validity_equivalence(self, cover_pool):
        for c in cover_pool:
            assert verify_mod2_cover(c).valid
            assert verify_bollobas_tuple(cover_to_tuple(c)).valid
        # mutazione: dropping one product flips something on both sides
        for c in cover_pool:
            if not (2 <= len(c) <= 40 and c.n <= 3):
                continue
            mutated = Mod2Cover(c.k, c.t, c.n, c.products[1:])
            assert verify_mod2_cover(mutated).valid == verify_bollobas_tuple(
                cover_to_tuple(mutated)
            ).valid


class TestOkBicliqueCover:
    def test_pipeline_h44_5(self):
        cover = permute_gp_cover(trivial_gp_cover(5, 4))
        assert len(cover) == 120
        ok = cover_to_ok_biclique_cover(cover)
        report = verify_ok_biclique_cover(ok)
        assert report.valid

    def test_pipeline_h44_4(self):
        cover = permute_gp_cover(trivial_gp_cover(4, 4))
        assert verify_ok_biclique_cover(cover_to_ok_biclique_cover(cover)).valid

    def test_empty_cover_leaves_edges_uncovered(self):
        # OK on 4 elements with pairs does have edges, e.g. (1,2)-(3,4)
        ok = cover_to_ok_biclique_cover(Mod2Cover(4, 4, 4, ()))
        report = verify_ok_biclique_cover(ok)
        assert not report.valid
        # whereas on 3 elements no two pairs are disjoint: vacuously fine
        ok3 = cover_to_ok_biclique_cover(Mod2Cover(4, 4, 3, ()))
        assert verify_ok_biclique_cover(ok3).valid

    def test_no_edges_vacuous(self):
        # the only valid cover of the edgeless 2-element target is even
        # everywhere; the empty cover maps to a vacuously valid biclique cover
        # over the edgeless pair graph
        empty = Mod2Cover(4, 4, 2, ())
        assert verify_mod2_cover(empty).valid
        assert verify_ok_biclique_cover(cover_to_ok_biclique_cover(empty)).valid

        # the bare full product covers the non-edge cells oddly, so it is not
        # a valid cover, and its biclique image covers overlapping pairs oddly
        full = SubsetBits.full(2)
        bad = Mod2Cover(4, 4, 2, (KPartiteProduct((full, full, full, full)),))
        assert not verify_mod2_cover(bad).valid
        ok = cover_to_ok_biclique_cover(bad)
        report = verify_ok_biclique_cover(ok)
        assert not report.valid
        assert report.violations[0].expected == "even coverage"

    def test_odd_k_rejected(self):
        with pytest.raises(ValueError):
            cover_to_ok_biclique_cover(build_cover_33(2))

    def test_vertex_validation(self):
        from oddtown import OkBicliqueCover

        with pytest.raises(ValueError, match="distinct"):
            OkBicliqueCover(3, 2, ((((1, 1),), ((2, 3),)),))
        with pytest.raises(ValueError, match="outside"):
            OkBicliqueCover(3, 2, ((((1, 4),), ((2, 3),)),))


class TestPermuteGpCover:
    def test_trivial_3_2(self):
        out = permute_gp_cover(trivial_gp_cover(3, 2))
        assert len(out) == 6
        assert verify_mod2_cover(out).valid

    def test_size_two_input(self):
        gp = GpCover(2, 3, (prod(3, [1, 2], [3]), prod(3, [1], [2])))
        out = permute_gp_cover(gp)
        assert len(out) == 4 and verify_mod2_cover(out).valid

    def test_single_product_n_equals_k(self):
        out = permute_gp_cover(trivial_gp_cover(3, 3))
        assert len(out) == 6
        cells = {tuple(p.parts[j].elements()[0] for j in range(3)) for p in out.products}
        assert len(cells) == 6  # exactly the all-distinct tuples

    def test_size_law(self):
        from math import factorial

        for n, k in ((3, 2), (4, 2), (4, 3), (5, 4)):
            gp = trivial_gp_cover(n, k)
            assert len(permute_gp_cover(gp)) == factorial(k) * len(gp)

    def test_invalid_input_rejected(self):
        bad = GpCover(2, 3, (prod(3, [1], [2]),))
        with pytest.raises(ValueError):
            permute_gp_cover(bad)


class TestLinkCover:
    def test_link_of_permuted_trivial(self):
        cover = permute_gp_cover(trivial_gp_cover(3, 3))
        linked = link_cover(cover)
        assert (linked.k, linked.t, linked.n) == (2, 2, 2)
        assert verify_mod2_cover(linked).valid

    def test_link_of_cover33(self):
        linked = link_cover(build_cover_33(3))
        assert (linked.k, linked.n) == (2, 2)
        assert len(linked) <= 10
        assert verify_mod2_cover(linked).valid

    def test_invalid_input_rejected(self):
        c = Mod2Cover(3, 3, 2, (prod(2, [1], [1], [1]),))
        with pytest.raises(ValueError):
            link_cover(c)

    def test_requires_k_at_least_3(self):
        with pytest.raises(ValueError):
            link_cover(cover_22_of_3())

    def test_general_element_and_coordinate(self):
        cover = build_cover_33(3)
        for element in (1, 2, 3):
            for coordinate in (1, 2, 3):
                linked = link_cover(cover, element=element, coordinate=coordinate)
                assert verify_mod2_cover(linked).valid


class TestRestriction:
    def test_restriction_preserves_validity(self, cover_pool):
        for c in cover_pool:
            if c.n < 1:
                continue
            smaller = restrict_cover(c, c.n - 1)
            assert smaller.n == c.n - 1
            assert verify_mod2_cover(smaller).valid
