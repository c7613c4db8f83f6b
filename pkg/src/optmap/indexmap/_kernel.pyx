# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled index maps: same contract as ``_pure``, C storage and popcount.

Hot kernels only; all semantics are pinned by the differential tests that
run this module against the pure-Python twin.
"""

from libcpp.vector cimport vector
from libc.stdint cimport uint64_t, uint32_t, uint8_t, int32_t

from optmap.errors import CapacityError

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int optmap_popcount64(unsigned long long x) {
        return __builtin_popcountll(x);
    }
    #else
    static inline int optmap_popcount64(unsigned long long x) {
        x = x - ((x >> 1) & 0x5555555555555555ULL);
        x = (x & 0x3333333333333333ULL) + ((x >> 2) & 0x3333333333333333ULL);
        x = (x + (x >> 4)) & 0x0f0f0f0f0f0f0f0fULL;
        return (int)((x * 0x0101010101010101ULL) >> 56);
    }
    #endif
    """
    int optmap_popcount64(unsigned long long x) nogil

DEF UNCOUNTED = 0xFF

cdef uint64_t INVALID = 0xFFFFFFFFULL
cdef uint64_t LOCATION_LIMIT = 0xFFFFFFFFULL

INVALID_INDEX = 0xFFFF_FFFF


cdef class BipurMap:
    """Bitmap with progressively updated ranks (compiled twin of _pure)."""

    cdef vector[uint64_t] _chunks
    cdef vector[uint32_t] _cumulated_ranks
    cdef vector[uint8_t] _chunk_ranks
    cdef uint64_t _next_bit
    cdef size_t _last_correct_chunk
    cdef uint64_t _scan_counter
    cdef uint64_t _live_count

    def __cinit__(self):
        self._chunks.push_back(0)
        self._cumulated_ranks.push_back(0)
        self._chunk_ranks.push_back(UNCOUNTED)
        self._next_bit = 0
        self._last_correct_chunk = 0
        self._scan_counter = 0
        self._live_count = 0

    def add_entity(self):
        """Allocate the next bit location and return it as the entity handle."""
        cdef uint64_t location = self._next_bit
        if location >= LOCATION_LIMIT:
            raise CapacityError(
                "index map is full: 32-bit dense-index headroom exhausted"
            )
        cdef size_t chunk_index = <size_t>(location >> 6)
        if chunk_index == self._chunks.size():
            self._chunks.push_back(1)
            self._cumulated_ranks.push_back(0)
            self._chunk_ranks.push_back(UNCOUNTED)
        else:
            self._chunks[chunk_index] |= (<uint64_t>1) << (location & 63)
        self._next_bit = location + 1
        self._live_count += 1
        return location

    def delete_entity(self, bit_location):
        """Clear the bit; a no-op if the entity is already deleted."""
        cdef uint64_t loc = self._check_location(bit_location)
        cdef size_t chunk_index = <size_t>(loc >> 6)
        cdef uint64_t mask = (<uint64_t>1) << (loc & 63)
        if not (self._chunks[chunk_index] & mask):
            return
        self._chunks[chunk_index] ^= mask
        self._chunk_ranks[chunk_index] = UNCOUNTED
        if self._last_correct_chunk > chunk_index:
            self._last_correct_chunk = chunk_index
        self._live_count -= 1

    def calculate_index(self, bit_location):
        """Dense index of a live entity, or INVALID_INDEX for a deleted one."""
        cdef uint64_t loc = self._check_location(bit_location)
        cdef size_t chunk_index = <size_t>(loc >> 6)
        cdef int bit_index = <int>(loc & 63)
        cdef uint64_t chunk = self._chunks[chunk_index]
        if not (chunk >> bit_index) & 1:
            return INVALID_INDEX
        if self._last_correct_chunk < chunk_index:
            self._propagate(chunk_index)
        cdef uint64_t low_bits = chunk & (((<uint64_t>1) << bit_index) - 1)
        return self._cumulated_ranks[chunk_index] + <uint32_t>optmap_popcount64(low_bits)

    def precompute_chunk_rank(self, chunk_index):
        """Propagate the prefix-rank caches forward to ``chunk_index``."""
        cdef size_t target = <size_t>chunk_index
        if target >= self._chunks.size():
            raise IndexError(f"chunk {chunk_index} does not exist")
        if target <= self._last_correct_chunk:
            return
        self._propagate(target)

    cdef void _propagate(self, size_t chunk_index):
        cdef size_t j
        cdef uint8_t rank
        cdef uint64_t scans = 0
        for j in range(self._last_correct_chunk, chunk_index):
            rank = self._chunk_ranks[j]
            if rank == UNCOUNTED:
                rank = <uint8_t>optmap_popcount64(self._chunks[j])
                self._chunk_ranks[j] = rank
                scans += 1
            self._cumulated_ranks[j + 1] = self._cumulated_ranks[j] + rank
        self._last_correct_chunk = chunk_index
        self._scan_counter += scans

    cdef uint64_t _check_location(self, object bit_location) except? 0xFFFFFFFFFFFFFFFF:
        cdef object loc = bit_location
        if loc < 0 or loc >= self._next_bit:
            raise IndexError(f"bit location {bit_location} was never allocated")
        return <uint64_t>loc

    def is_live(self, bit_location):
        """Whether the bit at an allocated location is currently set."""
        cdef uint64_t loc = self._check_location(bit_location)
        return bool((self._chunks[<size_t>(loc >> 6)] >> (loc & 63)) & 1)

    def storage_bits(self):
        """Logical payload size in bits: chunks plus both rank caches."""
        return (
            64 * self._chunks.size()
            + 32 * self._cumulated_ranks.size()
            + 8 * self._chunk_ranks.size()
        )

    @property
    def next_bit(self):
        return self._next_bit

    @property
    def live_count(self):
        return self._live_count

    @property
    def scan_counter(self):
        """Number of per-chunk popcounts performed by cache propagation."""
        return self._scan_counter

    @property
    def num_chunks(self):
        return self._chunks.size()

    @property
    def last_correct_chunk(self):
        return self._last_correct_chunk

    def debug_state(self):
        """Copies of the internal arrays, for tests."""
        return {
            "chunks": [self._chunks[i] for i in range(self._chunks.size())],
            "cumulated_ranks": [
                self._cumulated_ranks[i] for i in range(self._cumulated_ranks.size())
            ],
            "chunk_ranks": [
                self._chunk_ranks[i] for i in range(self._chunk_ranks.size())
            ],
            "next_bit": self._next_bit,
            "last_correct_chunk": self._last_correct_chunk,
        }


cdef class ArrayMap:
    """Array-based baseline mapping (compiled twin of _pure)."""

    cdef vector[int32_t] _indices
    cdef uint64_t _live_count

    def __cinit__(self):
        self._live_count = 0

    def add(self):
        """Append a new live entry and return its permanent position."""
        self._indices.push_back(<int32_t>self._live_count)
        self._live_count += 1
        return self._indices.size() - 1

    def index(self, position):
        """Dense index stored at ``position``, or INVALID_INDEX if deleted."""
        cdef size_t pos = self._check_position(position)
        cdef int32_t value = self._indices[pos]
        if value < 0:
            return INVALID_INDEX
        return value

    def delete_batch(self, positions):
        """Delete a batch of positions; already-deleted ones are no-ops."""
        cdef size_t pos, q
        cdef int32_t value
        for position in positions:
            self._check_position(position)
        cdef vector[size_t] dead
        for position in sorted({p for p in positions if self._indices[p] >= 0}):
            dead.push_back(<size_t>position)
        if dead.size() == 0:
            return
        for q in range(dead.size()):
            self._indices[dead[q]] = -1
        cdef size_t lo, hi, mid, shift
        for q in range(dead[0] + 1, self._indices.size()):
            value = self._indices[q]
            if value < 0:
                continue
            lo = 0
            hi = dead.size()
            while lo < hi:  # number of deleted positions before q
                mid = (lo + hi) >> 1
                if dead[mid] < q:
                    lo = mid + 1
                else:
                    hi = mid
            self._indices[q] = value - <int32_t>lo
        self._live_count -= dead.size()

    cdef size_t _check_position(self, object position) except? 0xFFFFFFFFFFFFFFFF:
        if position < 0 or position >= self._indices.size():
            raise IndexError(f"position {position} was never allocated")
        return <size_t>position

    def storage_bits(self):
        """Logical payload size in bits: one 32-bit index per entity."""
        return 32 * self._indices.size()

    @property
    def live_count(self):
        return self._live_count

    @property
    def size(self):
        """Number of positions ever allocated."""
        return self._indices.size()

    def to_list(self):
        """Copy of the raw index array (negative = deleted), for tests."""
        return [self._indices[i] for i in range(self._indices.size())]
