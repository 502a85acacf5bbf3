import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapcycles.cycle import (
    GapCycle,
    build_cycle,
    direct_sieve,
    recurse,
    rotation_equivalent,
    seed_cycle,
)
from gapcycles.errors import PreconditionError, ResourceError
from gapcycles.primes import next_prime, phi_primorial, primorial

from oracles import coprime_gaps

PUBLISHED_G5 = [6, 4, 2, 4, 2, 4, 6, 2]


def test_seed():
    s = seed_cycle()
    assert s.prime == 3
    assert s.gaps.tolist() == [4, 2]
    assert (s.length, s.span) == (2, 6)


def test_recurse_seed_gives_published_g5():
    c5, _ = recurse(seed_cycle(), 5)
    assert c5.gaps.tolist() == PUBLISHED_G5
    assert rotation_equivalent(c5, np.roll(PUBLISHED_G5, 3))


def test_g7_shape():
    c7 = build_cycle(7)
    assert (c7.length, c7.span) == (48, 210)
    assert int(np.count_nonzero(c7.gaps == 2)) == 15


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_direct_sieve_matches_gcd_oracle(p):
    assert direct_sieve(p).gaps.tolist() == coprime_gaps(primorial(p))


def test_direct_sieve_11():
    c = direct_sieve(11)
    assert (c.length, c.span, int(c.gaps.max())) == (480, 2310, 14)


def test_length_17():
    assert build_cycle(17).length == 92160


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19])
def test_recursion_equals_direct_sieve(p):
    assert build_cycle(p) == direct_sieve(p)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19])
def test_cycle_invariants(p):
    c = build_cycle(p)
    c.validate()
    assert c.length == phi_primorial(p)
    assert c.span == primorial(p)
    assert c.is_symmetric()
    assert c.gaps.dtype == np.uint8


def test_cycle_is_immutable():
    c = build_cycle(7)
    with pytest.raises(ValueError):
        c.gaps[0] = 8


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_fusion_trace(p):
    prev = build_cycle(p)
    q = next_prime(p)
    _, trace = recurse(prev, q, trace_wanted=True)
    assert len(trace) == prev.length
    # removed integers are q times the running sums of G(p#) started at 1
    running = 1 + np.concatenate([[0], np.cumsum(prev.gaps[:-1], dtype=np.int64)])
    assert np.array_equal(trace.absolute_offset, q * running)
    assert np.all(np.diff(trace.absolute_offset) >= 2 * q)
    assert np.all(np.diff(trace.absolute_offset) >= 2 * p)
    # each event points at the gap that ends on the removed integer
    pts = prev.points()
    for e in list(trace)[:200]:
        assert e.copy_index * prev.span + pts[e.position_in_copy + 1] == e.absolute_offset
        assert 0 <= e.copy_index < q


@pytest.mark.parametrize("p", [7, 11, 13])
def test_lemma_boundary_fusions_share_a_copy(p):
    """A run of span 2q has both ends removed in the same copy."""
    prev = build_cycle(p)
    q = next_prime(p)
    _, trace = recurse(prev, q, trace_wanted=True)
    removed = set(trace.absolute_offset.tolist())
    copy_of = dict(zip(trace.absolute_offset.tolist(), trace.copy_index.tolist()))
    pts = prev.points()
    pts_set = set(pts.tolist())
    span, g = prev.span, 2 * q
    rng = np.random.default_rng(p)
    checked = 0
    for a in rng.choice(pts[:-1], size=min(300, prev.length), replace=False):
        a = int(a)
        if a + g > span + 1 or (a + g) not in pts_set:
            continue
        starts = [m for m in range(q) if m * span + a in removed]
        ends = [m for m in range(q) if m * span + a + g in removed]
        assert len(starts) == len(ends) == 1
        assert starts == ends
        # the trace files a fusion under the copy holding its left gap
        x = starts[0] * span + a
        assert copy_of[x] == (x - 2) // span
        checked += 1
    assert checked > 0


@settings(max_examples=25, deadline=None)
@given(chunk=st.integers(min_value=1, max_value=20000), threads=st.sampled_from([1, 2]))
def test_chunked_recursion_agrees(chunk, threads):
    prev = build_cycle(11)
    whole, _ = recurse(prev, 13)
    parts, _ = recurse(prev, 13, threads=threads, chunk_gaps=chunk)
    assert parts == whole


def test_recurse_rejects_non_prime():
    with pytest.raises(PreconditionError, match="not prime"):
        recurse(build_cycle(7), 9)


def test_recurse_rejects_skipped_prime():
    with pytest.raises(PreconditionError, match="next stage prime is 11"):
        recurse(build_cycle(7), 13)


def test_recurse_rejects_invalid_cycle():
    bad = GapCycle(7, np.array([2, 4, 6], dtype=np.uint8))
    with pytest.raises(PreconditionError):
        recurse(bad, 11)


def test_resource_error_names_gap_count():
    with pytest.raises(ResourceError, match="5760 gaps"):
        recurse(build_cycle(11), 13, memory_limit=1000)
    with pytest.raises(ResourceError):
        direct_sieve(29)


def test_widening_to_uint16():
    c = GapCycle(3, np.array([300, 2], dtype=np.int64))
    assert c.gaps.dtype == np.uint16


def test_rotation_equivalent():
    c = build_cycle(7)
    assert rotation_equivalent(c, np.roll(c.gaps, 17))
    assert not rotation_equivalent(c, np.roll(c.gaps, 1)[:-1])
    assert not rotation_equivalent(np.array([2, 4, 6]), np.array([2, 6, 4]))


def test_validate_catches_bad_span():
    c = GapCycle(5, np.array([6, 4, 2, 4, 2, 4, 6, 4], dtype=np.uint8))
    with pytest.raises(PreconditionError, match="span"):
        c.validate()
