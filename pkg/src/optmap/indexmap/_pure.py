"""Pure-Python index maps: the lazy-rank bitmap and the array baseline.

Both structures map permanent entity handles (bit locations / array
positions) to the dense, shift-on-delete indices a solver uses.  The
compiled twin in ``_kernel.pyx`` implements the same contract; the
package selects one at import time.
"""

from bisect import bisect_left

from optmap.errors import CapacityError

#: Distinguished "deleted entity" result, distinct from every valid dense
#: index (all-ones in 32 bits).
INVALID_INDEX = 0xFFFF_FFFF

#: Dense indices are 32-bit; locations must stay below INVALID_INDEX.
_LOCATION_LIMIT = 0xFFFF_FFFF

#: Sentinel in the 8-bit per-chunk rank cache: popcount not yet taken.
_UNCOUNTED = 0xFF


class BipurMap:
    """Bitmap with progressively updated ranks.

    Bit k of chunk j represents entity 64*j + k; 1 = live, 0 = deleted.
    A live entity's dense index is the number of live bits before it,
    served from per-chunk prefix caches that are propagated lazily and
    invalidated by deletion.  Queries mutate the caches, so instances are
    single-owner; see the package docs for the concurrency contract.
    """

    __slots__ = (
        "_chunks",
        "_cumulated_ranks",
        "_chunk_ranks",
        "_next_bit",
        "_last_correct_chunk",
        "_scan_counter",
        "_live_count",
    )

    def __init__(self):
        self._chunks = [0]
        self._cumulated_ranks = [0]
        self._chunk_ranks = [_UNCOUNTED]
        self._next_bit = 0
        self._last_correct_chunk = 0
        self._scan_counter = 0
        self._live_count = 0

    def add_entity(self):
        """Allocate the next bit location and return it as the entity handle.

        Locations are never reused; a fresh chunk (with paired cache slots)
        is appended when the current one is full.
        """
        location = self._next_bit
        if location >= _LOCATION_LIMIT:
            raise CapacityError(
                "index map is full: 32-bit dense-index headroom exhausted"
            )
        chunk_index = location >> 6
        if chunk_index == len(self._chunks):
            self._chunks.append(1)  # bit 0 of the new chunk == this location
            self._cumulated_ranks.append(0)
            self._chunk_ranks.append(_UNCOUNTED)
        else:
            self._chunks[chunk_index] |= 1 << (location & 63)
        self._next_bit = location + 1
        self._live_count += 1
        return location

    def delete_entity(self, bit_location):
        """Clear the bit; a no-op if the entity is already deleted.

        Invalidates the chunk's cached popcount and lowers the cache
        watermark to this chunk (its own cumulated rank summarizes strictly
        earlier chunks and stays valid).
        """
        if bit_location >= self._next_bit or bit_location < 0:
            raise IndexError(f"bit location {bit_location} was never allocated")
        chunk_index = bit_location >> 6
        mask = 1 << (bit_location & 63)
        if not self._chunks[chunk_index] & mask:
            return  # already deleted
        self._chunks[chunk_index] ^= mask
        self._chunk_ranks[chunk_index] = _UNCOUNTED
        if self._last_correct_chunk > chunk_index:
            self._last_correct_chunk = chunk_index
        self._live_count -= 1

    def calculate_index(self, bit_location):
        """Return the dense index of a live entity, or INVALID_INDEX.

        Logically read-only but physically advances the rank caches up to
        the queried chunk (amortized O(1) per query).
        """
        if bit_location >= self._next_bit or bit_location < 0:
            raise IndexError(f"bit location {bit_location} was never allocated")
        chunk_index = bit_location >> 6
        bit_index = bit_location & 63
        chunk = self._chunks[chunk_index]
        if not (chunk >> bit_index) & 1:
            return INVALID_INDEX
        if self._last_correct_chunk < chunk_index:
            self.precompute_chunk_rank(chunk_index)
        low_bits = chunk & ((1 << bit_index) - 1)
        return self._cumulated_ranks[chunk_index] + low_bits.bit_count()

    def precompute_chunk_rank(self, chunk_index):
        """Propagate the prefix-rank caches forward to ``chunk_index``.

        Internal: callers guarantee chunk_index < number of chunks.  Chunks
        whose popcount is already cached are not recounted.
        """
        if chunk_index <= self._last_correct_chunk:
            return
        chunks = self._chunks
        cumulated = self._cumulated_ranks
        ranks = self._chunk_ranks
        scans = 0
        for j in range(self._last_correct_chunk, chunk_index):
            rank = ranks[j]
            if rank == _UNCOUNTED:
                rank = chunks[j].bit_count()
                ranks[j] = rank
                scans += 1
            cumulated[j + 1] = cumulated[j] + rank
        self._last_correct_chunk = chunk_index
        self._scan_counter += scans

    def is_live(self, bit_location):
        """Whether the bit at an allocated location is currently set."""
        if bit_location >= self._next_bit or bit_location < 0:
            raise IndexError(f"bit location {bit_location} was never allocated")
        return bool((self._chunks[bit_location >> 6] >> (bit_location & 63)) & 1)

    def storage_bits(self):
        """Logical payload size in bits: chunks plus both rank caches."""
        return (
            64 * len(self._chunks)
            + 32 * len(self._cumulated_ranks)
            + 8 * len(self._chunk_ranks)
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
        return len(self._chunks)

    @property
    def last_correct_chunk(self):
        return self._last_correct_chunk

    def debug_state(self):
        """Copies of the internal arrays, for tests."""
        return {
            "chunks": list(self._chunks),
            "cumulated_ranks": list(self._cumulated_ranks),
            "chunk_ranks": list(self._chunk_ranks),
            "next_bit": self._next_bit,
            "last_correct_chunk": self._last_correct_chunk,
        }


class ArrayMap:
    """Array-based baseline mapping with optimized batch deletion.

    Every position stores its dense index directly (negative = deleted), so
    queries are O(1) but deleting M of N entities costs O(M log M + N log M).
    Serves as the correctness oracle and the benchmark foil for BipurMap.
    """

    __slots__ = ("_indices", "_live_count")

    def __init__(self):
        self._indices = []
        self._live_count = 0

    def add(self):
        """Append a new live entry and return its permanent position."""
        self._indices.append(self._live_count)
        self._live_count += 1
        return len(self._indices) - 1

    def index(self, position):
        """Dense index stored at ``position``, or INVALID_INDEX if deleted."""
        if position >= len(self._indices) or position < 0:
            raise IndexError(f"position {position} was never allocated")
        value = self._indices[position]
        return INVALID_INDEX if value < 0 else value

    def delete_batch(self, positions):
        """Delete a batch of positions; already-deleted ones are no-ops.

        Marks the dead entries, then shifts every later live index down by
        the number of deleted positions before it (binary search over the
        sorted batch).
        """
        indices = self._indices
        for position in positions:
            if position >= len(indices) or position < 0:
                raise IndexError(f"position {position} was never allocated")
        dead = sorted({p for p in positions if indices[p] >= 0})
        if not dead:
            return
        for position in dead:
            indices[position] = -1
        for q in range(dead[0] + 1, len(indices)):
            value = indices[q]
            if value >= 0:
                indices[q] = value - bisect_left(dead, q)
        self._live_count -= len(dead)

    def storage_bits(self):
        """Logical payload size in bits: one 32-bit index per entity."""
        return 32 * len(self._indices)

    @property
    def live_count(self):
        return self._live_count

    @property
    def size(self):
        """Number of positions ever allocated."""
        return len(self._indices)

    def to_list(self):
        """Copy of the raw index array (negative = deleted), for tests."""
        return list(self._indices)
