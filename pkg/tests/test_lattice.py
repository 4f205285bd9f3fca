import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from resteg import errors
from resteg.lattice import make_lattice, masked_context_image, merge, split


def test_2x2_split():
    img = np.array([[1, 2], [3, 4]], dtype=np.uint8)
    ctx, qry, lat = split(img)
    assert ctx.tolist() == [1, 4]  # cells (0,0) and (1,1)
    assert qry.tolist() == [2, 3]


def test_parity_rule_exhaustive():
    for h in range(2, 6):
        for w in range(2, 6):
            lat = make_lattice(h, w)
            for r, c in lat.context_idx():
                assert (r + c) % 2 == 0
            for r, c in lat.query_idx():
                assert (r + c) % 2 == 1


def test_counts():
    lat = make_lattice(3, 3)
    assert lat.n_context == 5
    assert lat.n_query == 4
    lat = make_lattice(512, 512)
    assert lat.n_context == 131072
    assert lat.n_query == 131072


def test_query_neighbours_are_context():
    lat = make_lattice(5, 7)
    for r, c in lat.query_idx():
        for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            rr, cc = r + dr, c + dc
            if 0 <= rr < 5 and 0 <= cc < 7:
                assert lat.context_mask[rr, cc]


def test_merge_example():
    lat = make_lattice(2, 2)
    img = merge(np.array([1, 4]), np.array([2, 3]), lat)
    assert img.tolist() == [[1, 2], [3, 4]]


def test_merge_count_mismatch():
    lat = make_lattice(2, 2)
    with pytest.raises(errors.CountMismatch):
        merge(np.array([1]), np.array([2, 3]), lat)
    with pytest.raises(errors.CountMismatch):
        merge(np.array([1, 4]), np.array([2]), lat)


def test_too_small():
    with pytest.raises(errors.ImageTooSmall):
        make_lattice(1, 5)


@settings(max_examples=60)
@given(
    arrays(np.uint8, st.tuples(st.integers(2, 16), st.integers(2, 16)),
           elements=st.integers(0, 255))
)
def test_split_merge_round_trip(img):
    ctx, qry, lat = split(img)
    assert np.array_equal(merge(ctx, qry, lat), img)


def test_masked_context_image():
    img = np.full((2, 2), 9, dtype=np.uint8)
    lat = make_lattice(2, 2)
    masked = masked_context_image(img, lat)
    assert masked.tolist() == [[9, 0], [0, 9]]
    # idempotent, and all-zero stays all-zero
    assert np.array_equal(masked_context_image(masked, lat), masked)
    zero = np.zeros((2, 2), dtype=np.uint8)
    assert np.array_equal(masked_context_image(zero, lat), zero)
