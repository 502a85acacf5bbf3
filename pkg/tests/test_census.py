import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapcycles.census import census_all, census_gap, census_subpop
from gapcycles.cycle import GapCycle, build_cycle
from gapcycles.errors import PreconditionError
from gapcycles.primes import twin_count

from oracles import naive_census, naive_subpop

G5 = build_cycle(5)


def test_gap2_in_g5():
    assert census_gap(G5, 2).counts == {1: 3}


def test_gap6_in_g5():
    # oracle over the eight cyclic windows: two 6s and four (4,2)/(2,4) pairs
    assert naive_census(G5.gaps, 6) == {1: 2, 2: 4}
    c = census_gap(G5, 6)
    assert c.counts == {1: 2, 2: 4}
    assert c.max_length == 2


def test_census_all_g5():
    res = census_all(G5, 6)
    assert {g: c.counts for g, c in res.items()} == {2: {1: 3}, 4: {1: 3}, 6: {1: 2, 2: 4}}


@pytest.mark.parametrize("p", [3, 5, 7])
def test_census_all_matches_naive_small(p):
    c = build_cycle(p)
    top = min(c.span, 40)
    top -= top % 2
    res = census_all(c, top)
    for g in range(2, top + 1, 2):
        assert res[g].counts == naive_census(c.gaps, g)
        assert census_gap(c, g).counts == res[g].counts


def test_census_all_agrees_with_census_gap_7():
    c = build_cycle(7)
    res = census_all(c, 14)
    assert all(res[g].counts == census_gap(c, g).counts for g in res)
    assert res[14][1] >= 0


def test_matches_naive_on_11():
    c = build_cycle(11)
    res = census_all(c, 30)
    for g in (2, 12, 22, 30):
        assert res[g].counts == naive_census(c.gaps, g)


@settings(max_examples=40, deadline=None)
@given(start=st.integers(0, 92159), size=st.integers(5, 400), gap=st.sampled_from(range(2, 41, 2)))
def test_random_windows_of_17(start, size, gap):
    """Census of a window, as its own cycle, against the naive scan."""
    gaps = np.roll(build_cycle(17).gaps, -start)[:size]
    piece = GapCycle(17, gaps)
    if gap > piece.span:
        return
    assert census_gap(piece, gap).counts == naive_census(gaps, gap)


@settings(max_examples=20, deadline=None)
@given(shift=st.integers(0, 479), gap=st.sampled_from(range(2, 31, 2)))
def test_rotation_invariant(shift, gap):
    c = build_cycle(11)
    rotated = GapCycle(11, np.roll(c.gaps, shift))
    assert census_gap(rotated, gap).counts == census_gap(c, gap).counts


def test_wrap_around_counted_once():
    # the run (2, 4) only exists across the end of the stored array
    c = GapCycle(3, np.array([4, 6, 2], dtype=np.uint8))
    assert census_gap(c, 6).counts == {1: 1, 2: 1}
    assert naive_census([4, 6, 2], 6) == {1: 1, 2: 1}


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19])
def test_gap2_count_is_product(p):
    assert census_gap(build_cycle(p), 2).counts == {1: twin_count(p)}


def test_gap2_count_13():
    assert census_all(build_cycle(13), 26)[2].counts == {1: 1485}


def test_gap2_has_only_length_one():
    c = census_gap(build_cycle(13), 2)
    assert c.max_length == 1


def test_max_len_truncates():
    c = build_cycle(11)
    full = census_gap(c, 20)
    part = census_gap(c, 20, max_len=3)
    assert part.truncated and not full.truncated
    assert part.counts == {j: n for j, n in full.counts.items() if j <= 3}
    assert not census_gap(c, 20, max_len=full.max_length + 2).truncated


def test_threads_and_chunks(monkeypatch):
    from gapcycles import census

    c = build_cycle(13)
    ref = census_all(c, 30)
    sub_ref = census_subpop(c, 28)
    monkeypatch.setattr(census, "CHUNK_STARTS", 997)
    assert {g: r.counts for g, r in census_all(c, 30, threads=2).items()} == {
        g: r.counts for g, r in ref.items()
    }
    assert census_gap(c, 28, threads=2).counts == ref[28].counts
    assert census_subpop(c, 28, threads=2) == sub_ref


@pytest.mark.parametrize("gap", [1, 3, 0])
def test_rejects_bad_gap(gap):
    with pytest.raises(PreconditionError):
        census_gap(G5, gap)


def test_rejects_gap_over_span():
    with pytest.raises(PreconditionError, match="exceeds"):
        census_gap(G5, 32)
    with pytest.raises(PreconditionError):
        census_all(G5, 31)


def test_subpop_g5():
    sp = census_subpop(G5, 6)
    # (2,4) starts with 2 -> class c; (4,2) ends with 2 -> class b
    assert sp.b == {2: 2} and sp.c == {2: 2}
    assert sp.a == {1: 2}
    assert naive_subpop(G5.gaps, 6) == {"a": {1: 2}, "b": {2: 2}, "c": {2: 2}, "d": {}}


@pytest.mark.parametrize("p, gap", [(7, 16), (7, 24), (11, 28), (13, 36)])
def test_subpop_partition(p, gap):
    c = build_cycle(p)
    sp = census_subpop(c, gap)
    plain = census_gap(c, gap)
    assert sp.merged().counts == plain.counts
    assert sp.class_total("b") == sp.class_total("c")
    assert all(sp.d.get(j, 0) == 0 for j in (1, 2))
    if p <= 11:
        assert sp.classes() == naive_subpop(c.gaps, gap)


def test_subpop_rejects_small_gap():
    with pytest.raises(PreconditionError):
        census_subpop(G5, 4)
