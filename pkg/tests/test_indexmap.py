"""Index-map semantics: frozen examples, invariants, and differentials.

Every test runs against each available implementation (pure Python and,
when the extension built, compiled); the differential tests additionally
hold both to the naive full-scan oracle and to the array baseline.
"""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import IMPL_NAMES, IMPLS
from naive_oracle import NaiveMap
from optmap.errors import CapacityError
from optmap.indexmap import INVALID_INDEX, _pure

MODULES = [pytest.param(IMPLS[name], id=name) for name in IMPL_NAMES]


def build_five_with_middle_deleted(module):
    m = module.BipurMap()
    for _ in range(5):
        m.add_entity()
    m.delete_entity(2)
    return m


# -- construction and allocation ---------------------------------------------


def test_fresh_map_is_empty_with_one_chunk_allocated(impl):
    m = impl.BipurMap()
    assert m.live_count == 0
    assert m.next_bit == 0
    assert m.num_chunks == 1
    assert m.storage_bits() == 104


def test_query_on_fresh_map_is_out_of_range(impl):
    with pytest.raises(IndexError):
        impl.BipurMap().calculate_index(0)


def test_first_add_returns_location_zero_and_index_zero(impl):
    m = impl.BipurMap()
    assert m.add_entity() == 0
    assert m.calculate_index(0) == 0


def test_adds_return_consecutive_locations(impl):
    m = impl.BipurMap()
    assert [m.add_entity() for _ in range(3)] == [0, 1, 2]


def test_location_64_allocates_second_chunk(impl):
    m = impl.BipurMap()
    for _ in range(64):
        m.add_entity()
    assert m.num_chunks == 1
    assert m.add_entity() == 64
    assert m.num_chunks == 2


def test_deleted_locations_are_never_reused(impl):
    m = build_five_with_middle_deleted(impl)
    assert m.add_entity() == 5
    assert m.calculate_index(2) == INVALID_INDEX
    assert m.calculate_index(5) == 4


# -- deletion and queries ---------------------------------------------


def test_deletion_shifts_later_indices_down(impl):
    m = build_five_with_middle_deleted(impl)
    assert [m.calculate_index(i) for i in range(5)] == [
        0,
        1,
        INVALID_INDEX,
        2,
        3,
    ]


def test_delete_is_idempotent(impl):
    m = build_five_with_middle_deleted(impl)
    before = m.debug_state()
    live_before = m.live_count
    m.delete_entity(2)
    assert m.debug_state() == before
    assert m.live_count == live_before


def test_delete_never_allocated_location_raises(impl):
    m = impl.BipurMap()
    m.add_entity()
    with pytest.raises(IndexError):
        m.delete_entity(1)
    with pytest.raises(IndexError):
        m.delete_entity(-1)


def test_query_never_allocated_location_raises(impl):
    m = impl.BipurMap()
    m.add_entity()
    with pytest.raises(IndexError):
        m.calculate_index(1)
    with pytest.raises(IndexError):
        m.calculate_index(-1)


def test_deleting_a_prefix_rebases_the_survivors(impl):
    m = impl.BipurMap()
    for _ in range(100):
        m.add_entity()
    for location in range(10):
        m.delete_entity(location)
    assert m.calculate_index(10) == 0
    assert m.calculate_index(99) == 89


def test_is_live_tracks_the_bit(impl):
    m = build_five_with_middle_deleted(impl)
    assert [m.is_live(i) for i in range(5)] == [True, True, False, True, True]
    with pytest.raises(IndexError):
        m.is_live(5)


# -- lazy rank caching ---------------------------------------------


def test_cold_query_in_second_chunk_propagates_exactly_one_popcount(impl):
    m = impl.BipurMap()
    for _ in range(128):
        m.add_entity()
    assert m.scan_counter == 0
    assert m.calculate_index(127) == 127
    assert m.scan_counter == 1  # chunk 0 counted; in-chunk count not tallied


def test_repeat_query_performs_no_further_scans(impl):
    m = impl.BipurMap()
    for _ in range(256):
        m.add_entity()
    first = m.calculate_index(200)
    scans = m.scan_counter
    assert m.calculate_index(200) == first
    assert m.scan_counter == scans


def test_ascending_full_scan_is_amortized_one_popcount_per_chunk(impl):
    n = 1000
    m = impl.BipurMap()
    for _ in range(n):
        m.add_entity()
    results = [m.calculate_index(i) for i in range(n)]
    assert results == list(range(n))
    assert m.scan_counter <= -(-n // 64)  # ceil
    scans = m.scan_counter
    assert [m.calculate_index(i) for i in range(n)] == results
    assert m.scan_counter == scans


def test_deletes_perform_no_scans(impl):
    m = impl.BipurMap()
    for _ in range(500):
        m.add_entity()
    for location in range(0, 500, 7):
        m.delete_entity(location)
    assert m.scan_counter == 0


def test_delete_lowers_cache_watermark_to_exactly_that_chunk(impl):
    m = impl.BipurMap()
    for _ in range(200):
        m.add_entity()
    m.calculate_index(199)  # warms chunks 0..2
    assert m.last_correct_chunk == 3
    m.delete_entity(70)  # chunk 1
    assert m.last_correct_chunk == 1
    state = m.debug_state()
    assert state["chunk_ranks"][1] == 0xFF  # invalidated
    assert state["cumulated_ranks"][1] == 64  # prefix of chunk 1 still valid
    assert m.calculate_index(199) == 198


def test_precompute_at_or_below_watermark_changes_nothing(impl):
    m = impl.BipurMap()
    for _ in range(200):
        m.add_entity()
    m.calculate_index(150)
    state = m.debug_state()
    scans = m.scan_counter
    m.precompute_chunk_rank(1)
    assert m.debug_state() == state
    assert m.scan_counter == scans


def test_query_results_do_not_depend_on_query_order(impl):
    rng = random.Random(7)
    m = impl.BipurMap()
    for _ in range(300):
        m.add_entity()
    for location in rng.sample(range(300), 90):
        m.delete_entity(location)
    locations = list(range(300))
    baseline = {loc: m.calculate_index(loc) for loc in locations}
    for seed in (1, 2, 3):
        random.Random(seed).shuffle(locations)
        assert {loc: m.calculate_index(loc) for loc in locations} == baseline


# -- storage accounting ---------------------------------------------


@pytest.mark.parametrize(
    "entities,expected_bits",
    [(0, 104), (1, 104), (64, 104), (65, 208), (6400, 10400)],
)
def test_storage_bits_counts_chunks_and_both_caches(impl, entities, expected_bits):
    m = impl.BipurMap()
    for _ in range(entities):
        m.add_entity()
    assert m.storage_bits() == expected_bits


def test_storage_is_sixty_five_hundredths_bits_per_entity_at_full_chunks(impl):
    m = impl.BipurMap()
    for _ in range(6400):
        m.add_entity()
    assert m.storage_bits() / m.next_bit == 1.625


@pytest.mark.parametrize("entities", [1, 63, 64, 65, 129, 1000, 6400])
def test_storage_overhead_is_chunk_rounding_only(impl, entities):
    m = impl.BipurMap()
    for _ in range(entities):
        m.add_entity()
    assert m.storage_bits() / m.next_bit <= 1.625 + 104 / entities


def test_add_raises_when_dense_index_headroom_exhausted():
    # Jumping the counter forward is only possible on the pure build; the
    # guard fires before any per-chunk state is touched.
    m = _pure.BipurMap()
    m._next_bit = _pure._LOCATION_LIMIT
    with pytest.raises(CapacityError):
        m.add_entity()


def test_location_just_below_the_cap_is_accepted(monkeypatch):
    # Shrink the cap so the boundary is reachable by real adds.
    monkeypatch.setattr(_pure, "_LOCATION_LIMIT", 130)
    m = _pure.BipurMap()
    for expected in range(130):
        assert m.add_entity() == expected
    with pytest.raises(CapacityError):
        m.add_entity()
    assert m.live_count == 130


# -- array baseline ---------------------------------------------


def test_array_adds_store_consecutive_indices(impl):
    a = impl.ArrayMap()
    assert [a.add() for _ in range(3)] == [0, 1, 2]
    assert [a.index(p) for p in range(3)] == [0, 1, 2]
    assert a.storage_bits() == 96


def test_array_batch_delete_shifts_later_indices(impl):
    a = impl.ArrayMap()
    for _ in range(5):
        a.add()
    a.delete_batch([2])
    assert [a.index(p) for p in range(5)] == [0, 1, INVALID_INDEX, 2, 3]
    assert a.live_count == 4


def test_array_total_deletion_empties_the_map(impl):
    a = impl.ArrayMap()
    for _ in range(5):
        a.add()
    a.delete_batch([0, 1, 2, 3, 4])
    assert all(a.index(p) == INVALID_INDEX for p in range(5))
    assert a.live_count == 0


def test_array_empty_batch_is_a_no_op(impl):
    a = impl.ArrayMap()
    for _ in range(3):
        a.add()
    before = a.to_list()
    a.delete_batch([])
    assert a.to_list() == before


def test_array_redeleting_is_idempotent(impl):
    a = impl.ArrayMap()
    for _ in range(5):
        a.add()
    a.delete_batch([1, 3])
    snapshot = a.to_list()
    a.delete_batch([3, 1, 1])
    assert a.to_list() == snapshot
    assert a.live_count == 3


def test_array_delete_out_of_range_raises(impl):
    a = impl.ArrayMap()
    a.add()
    with pytest.raises(IndexError):
        a.delete_batch([1])
    with pytest.raises(IndexError):
        a.index(1)


def test_array_storage_is_thirty_two_bits_per_entity(impl):
    a = impl.ArrayMap()
    for _ in range(640):
        a.add()
    assert a.storage_bits() == 32 * 640


# -- differential properties ---------------------------------------------

operations = st.lists(
    st.tuples(
        st.sampled_from(["add", "delete", "query"]),
        st.integers(min_value=0, max_value=2**32),
    ),
    max_size=120,
)


@pytest.mark.parametrize("module", MODULES)
@settings(max_examples=250, deadline=None)
@given(ops=operations)
def test_any_op_sequence_matches_oracle_and_array(module, ops):
    bipur = module.BipurMap()
    array = module.ArrayMap()
    naive = NaiveMap()
    for kind, selector in ops:
        if kind == "add" or naive.next_bit == 0:
            locations = (bipur.add_entity(), array.add(), naive.add_entity())
            assert len(set(locations)) == 1
        else:
            location = selector % naive.next_bit
            if kind == "delete":
                bipur.delete_entity(location)
                array.delete_batch([location])
                naive.delete_entity(location)
            else:
                expected = naive.calculate_index(location)
                assert bipur.calculate_index(location) == expected
                assert array.index(location) == expected
    for location in range(naive.next_bit):
        expected = naive.calculate_index(location)
        assert bipur.calculate_index(location) == expected
        assert array.index(location) == expected
        assert bipur.is_live(location) == naive.is_live(location)
    assert bipur.live_count == array.live_count == naive.live_count
    assert bipur.next_bit == naive.next_bit


@pytest.mark.parametrize("module", MODULES)
@settings(max_examples=100, deadline=None)
@given(ops=operations)
def test_repeated_queries_are_stable_and_scan_free(module, ops):
    m = module.BipurMap()
    for kind, selector in ops:
        if kind == "add" or m.next_bit == 0:
            m.add_entity()
        elif kind == "delete":
            m.delete_entity(selector % m.next_bit)
        else:
            m.calculate_index(selector % m.next_bit)
    first = [m.calculate_index(i) for i in range(m.next_bit)]
    scans = m.scan_counter
    assert [m.calculate_index(i) for i in range(m.next_bit)] == first
    assert m.scan_counter == scans


@pytest.mark.parametrize("module", MODULES)
@settings(max_examples=150, deadline=None)
@given(ops=operations)
def test_live_count_equals_adds_minus_distinct_deletes(module, ops):
    m = module.BipurMap()
    adds = 0
    deleted = set()
    for kind, selector in ops:
        if kind == "add" or m.next_bit == 0:
            m.add_entity()
            adds += 1
        elif kind == "delete":
            location = selector % m.next_bit
            m.delete_entity(location)
            deleted.add(location)
        else:
            m.calculate_index(selector % m.next_bit)
    assert m.live_count == adds - len(deleted)


@pytest.mark.skipif(len(IMPLS) < 2, reason="compiled extension not built")
def test_compiled_and_pure_agree_state_for_state():
    rng = random.Random(20240613)
    maps = [IMPLS[name].BipurMap() for name in IMPL_NAMES]
    for step in range(5000):
        roll = rng.random()
        next_bit = maps[0].next_bit
        if roll < 0.55 or next_bit == 0:
            assert len({m.add_entity() for m in maps}) == 1
        elif roll < 0.80:
            location = rng.randrange(next_bit)
            for m in maps:
                m.delete_entity(location)
        else:
            location = rng.randrange(next_bit)
            assert len({m.calculate_index(location) for m in maps}) == 1
        if step % 1000 == 0:
            states = [m.debug_state() for m in maps]
            assert all(state == states[0] for state in states)
    finals = [
        ([m.calculate_index(i) for i in range(m.next_bit)], m.scan_counter, m.debug_state())
        for m in maps
    ]
    assert all(final == finals[0] for final in finals)
