import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polarmlc.polar import (
    DecodeNode,
    PolarCode,
    encode,
    encode_matrix,
    generator_matrix,
    node_children,
    parse_code_file,
    format_code_file,
    root_node,
    validate_code,
)


def full_code(n):
    return PolarCode.from_info_set(n, range(1, 2 ** n + 1))


@pytest.mark.parametrize("u, x", [
    ([0, 0], [0, 0]),
    ([1, 0], [1, 0]),
    ([0, 1], [1, 1]),
    ([0, 0, 0, 1], [1, 1, 1, 1]),
])
def test_encode_small(u, x):
    assert encode(u).tolist() == x


def test_generator_kernel_rows():
    G2 = generator_matrix(2)
    assert G2.tolist() == [[1, 0, 0, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_butterfly_matches_matrix_exhaustive(n):
    N = 2 ** n
    us = np.array(list(itertools.product([0, 1], repeat=N)), dtype=np.uint8)
    assert np.array_equal(encode(us), encode_matrix(us))


def test_butterfly_matches_matrix_n4(rng):
    us = rng.integers(0, 2, (2000, 16)).astype(np.uint8)
    assert np.array_equal(encode(us), encode_matrix(us))


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 6), data=st.data())
def test_encode_linear_and_involutive(n, data):
    N = 2 ** n
    bits = st.lists(st.integers(0, 1), min_size=N, max_size=N)
    u = np.array(data.draw(bits), dtype=np.uint8)
    v = np.array(data.draw(bits), dtype=np.uint8)
    assert np.array_equal(encode(u ^ v), encode(u) ^ encode(v))
    assert np.array_equal(encode(encode(u)), u)


def test_encode_checks_frozen_and_length():
    code = PolarCode.from_info_set(2, [4])
    assert encode([0, 0, 0, 1], code).tolist() == [1, 1, 1, 1]
    with pytest.raises(ValueError, match="frozen"):
        encode([1, 0, 0, 1], code)
    with pytest.raises(ValueError, match="length"):
        encode([0, 0, 0, 0, 0, 0, 0, 1], code)
    with pytest.raises(ValueError):
        encode([0, 0, 0])


def test_node_children_geometry():
    left, right = node_children(root_node(3))
    assert list(left.leaf_range) == [1, 2, 3, 4]
    assert list(right.leaf_range) == [5, 6, 7, 8]
    l, r = node_children(DecodeNode(3, 2, 3))
    assert list(l.leaf_range) == [7] and list(r.leaf_range) == [8]
    with pytest.raises(ValueError):
        node_children(DecodeNode(3, 3, 0))


@pytest.mark.parametrize("n", [1, 3, 5])
def test_children_partition_leaf_range(n):
    for depth in range(n):
        for index in range(2 ** depth):
            v = DecodeNode(n, depth, index)
            l, r = node_children(v)
            assert list(l.leaf_range) + list(r.leaf_range) == list(v.leaf_range)
            assert l.size == r.size == v.size // 2
            assert (l.index, r.index) == (2 * index, 2 * index + 1)


def test_validate_code():
    assert validate_code(PolarCode(3, 8, 3, (6, 7, 8))) is None
    assert "power of two" in validate_code(PolarCode(3, 7, 3, (5, 6, 7)))
    assert "out of range" in validate_code(PolarCode(2, 4, 2, (1, 5)))
    assert "K=" in validate_code(PolarCode(2, 4, 3, (1, 2)))
    assert "increasing" in validate_code(PolarCode(2, 4, 2, (3, 2)))
    with pytest.raises(ValueError):
        PolarCode.from_info_set(2, [0])


def test_code_properties():
    code = PolarCode.from_info_set(3, [8, 6, 7])
    assert code.info_set == (6, 7, 8)
    assert code.rate == 3 / 8
    assert code.info_mask.tolist() == [False] * 5 + [True] * 3
    assert PolarCode.from_mask(code.info_mask) == code
    assert full_code(2).K == 4


def test_code_file_roundtrip():
    code = PolarCode.from_info_set(3, [6, 7, 8])
    text = format_code_file(code, 4)
    assert text == "n=3\nL=4\nA=6,7,8\n"
    assert parse_code_file(text) == (code, 4)
    assert parse_code_file("# comment\nn=2\nA=\n") == (PolarCode.from_info_set(2, []), None)


@pytest.mark.parametrize("text", [
    "n=3\n",
    "n=3\nA=1,2\nA=3\n",
    "n=3\nX=1\nA=1\n",
    "n=3\nA=1,1\n",
    "n=3\nA=9\n",
    "n=x\nA=1\n",
    "n=3\nL=0\nA=1\n",
])
def test_code_file_rejects(text):
    with pytest.raises(ValueError):
        parse_code_file(text)
