import pytest
from hypothesis import given, strategies as st

from smmconv import ConvGeometry, GeometryError, output_shape
from smmconv.tensors import (input_flat_index, output_flat_index,
                             smm_weight_flat_index, weight_flat_index)


def test_output_shape_3x3_on_4x4():
    geom = ConvGeometry(1, 1, 4, 4, 3, 3)
    assert output_shape(geom) == (2, 2)


def test_output_shape_1x1_preserves_dims():
    geom = ConvGeometry(1, 1, 5, 5, 1, 1)
    assert output_shape(geom) == (5, 5)


def test_output_shape_strided_padded():
    geom = ConvGeometry(3, 64, 224, 224, 11, 11, stride_h=4, stride_w=4,
                        pad_h=2, pad_w=2)
    assert output_shape(geom) == (55, 55)


def test_rectangular_fields_kept_apart():
    geom = ConvGeometry(1, 1, 10, 6, 5, 3, stride_h=2, stride_w=1,
                        pad_h=0, pad_w=1)
    assert geom.out_h == (10 - 5) // 2 + 1
    assert geom.out_w == 6 + 2 - 3 + 1
    assert geom.padded_h == 10
    assert geom.padded_w == 8


@pytest.mark.parametrize("bad", [
    dict(in_channels=0),
    dict(out_channels=0),
    dict(in_h=0),
    dict(k_w=0),
    dict(stride_h=0),
    dict(pad_h=-1),
])
def test_rejects_nonpositive_parameters(bad):
    kw = dict(in_channels=1, out_channels=1, in_h=4, in_w=4, k_h=3, k_w=3)
    kw.update(bad)
    with pytest.raises(GeometryError):
        ConvGeometry(**kw)


def test_rejects_kernel_larger_than_padded_input():
    with pytest.raises(GeometryError):
        ConvGeometry(1, 1, 4, 4, 5, 3)
    # padding rescues it
    ConvGeometry(1, 1, 4, 4, 5, 3, pad_h=1)


def test_rejects_empty_output():
    # an over-wide kernel is exactly the case that would make out_w < 1
    with pytest.raises(GeometryError):
        ConvGeometry(1, 1, 4, 4, 3, 7, pad_h=0, pad_w=1)


def test_rejects_non_int():
    with pytest.raises(GeometryError):
        ConvGeometry(1.0, 1, 4, 4, 3, 3)
    with pytest.raises(GeometryError):
        ConvGeometry(True, 1, 4, 4, 3, 3)


@given(k=st.integers(1, 6), p=st.integers(0, 3))
def test_output_monotone_in_kernel_and_padding(k, p):
    base = ConvGeometry(1, 1, 8, 8, k, k, pad_h=p, pad_w=p)
    if k < 6:
        bigger_k = ConvGeometry(1, 1, 8, 8, k + 1, k + 1, pad_h=p, pad_w=p)
        assert bigger_k.out_h <= base.out_h
        assert bigger_k.out_w <= base.out_w
    more_pad = ConvGeometry(1, 1, 8, 8, k, k, pad_h=p + 1, pad_w=p + 1)
    assert more_pad.out_h >= base.out_h
    assert more_pad.out_w >= base.out_w


def test_flat_index_maps_are_bijections():
    geom = ConvGeometry(3, 4, 5, 6, 3, 2, pad_h=1)
    seen = set()
    for c in range(geom.in_channels):
        for r in range(geom.in_h):
            for x in range(geom.in_w):
                seen.add(input_flat_index(geom, c, r, x))
    assert seen == set(range(geom.in_channels * geom.in_h * geom.in_w))

    seen = set()
    for m in range(geom.out_channels):
        for c in range(geom.in_channels):
            for k in range(geom.k_h):
                for j in range(geom.k_w):
                    seen.add(weight_flat_index(geom, m, c, k, j))
    n_weights = geom.out_channels * geom.in_channels * geom.k_h * geom.k_w
    assert seen == set(range(n_weights))

    seen = set()
    for c in range(geom.in_channels):
        for j in range(geom.k_w):
            for k in range(geom.k_h):
                for m in range(geom.out_channels):
                    seen.add(smm_weight_flat_index(geom, c, j, k, m))
    assert seen == set(range(n_weights))

    seen = set()
    for m in range(geom.out_channels):
        for r in range(geom.out_h):
            for x in range(geom.out_w):
                seen.add(output_flat_index(geom, m, r, x))
    assert seen == set(range(geom.out_channels * geom.out_h * geom.out_w))


def test_flat_index_bounds_checked():
    geom = ConvGeometry(2, 2, 4, 4, 3, 3)
    with pytest.raises(IndexError):
        input_flat_index(geom, 2, 0, 0)
    with pytest.raises(IndexError):
        weight_flat_index(geom, 0, 0, 3, 0)
