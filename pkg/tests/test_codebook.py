import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rissim import (
    ArrayGeometry,
    RISConfiguration,
    UnsupportedConfigurationError,
    bitstream_to_hex,
    decode_bias_bitstream,
    encode_bias_bitstream,
    pack_bitstream,
    quantize_phase,
    quantize_phases,
    unpack_bitstream,
)

TWO_PI = 2 * math.pi


@pytest.mark.parametrize(
    "phase,bits,code",
    [
        (0.0, 2, 0),
        (3.0, 2, 2),
        (TWO_PI - 0.1, 2, 0),
        (math.pi / 2, 2, 1),
        (-0.1, 2, 0),
        (0.0, 1, 0),
        (math.pi + 0.01, 1, 1),
    ],
)
def test_quantize_examples(phase, bits, code):
    assert quantize_phase(phase, bits) == code


def test_quantize_midpoints_resolve_down():
    # midpoint between codes 0 and 1 at b=2 is pi/4
    assert quantize_phase(math.pi / 4, 2) == 0
    assert quantize_phase(3 * math.pi / 4, 2) == 1
    assert quantize_phase(math.pi / 2, 1) == 0


def test_quantize_bits_validation():
    with pytest.raises(ValueError):
        quantize_phase(0.0, 0)
    with pytest.raises(ValueError):
        quantize_phases(np.zeros(3), 0)


@given(phase=st.floats(-100.0, 100.0), bits=st.integers(1, 8))
def test_quantize_error_bound(phase, bits):
    code = quantize_phase(phase, bits)
    grid = code * TWO_PI / (1 << bits)
    err = abs((phase - grid + math.pi) % TWO_PI - math.pi)
    assert err <= math.pi / (1 << bits) + 1e-9


@given(bits=st.integers(1, 6))
def test_quantize_vector_matches_scalar(bits):
    phases = np.random.default_rng(bits).uniform(-10, 10, size=64)
    vec = quantize_phases(phases, bits)
    assert vec.tolist() == [quantize_phase(p, bits) for p in phases]


def test_configuration_validation():
    geom = ArrayGeometry(2, 3)
    with pytest.raises(ValueError):
        RISConfiguration(geom=geom, bits=2, codes=np.zeros((3, 2), dtype=int))
    with pytest.raises(ValueError):
        RISConfiguration(geom=geom, bits=2, codes=np.full((2, 3), 4))
    with pytest.raises(ValueError):
        RISConfiguration(geom=geom, bits=0, codes=np.zeros((2, 3), dtype=int))
    config = RISConfiguration.uniform(geom, 2, code=3)
    assert config.codes.shape == (2, 3)
    with pytest.raises(ValueError):
        config.codes[0, 0] = 1  # frozen grid


def test_configuration_nominal_phases():
    geom = ArrayGeometry(1, 4)
    config = RISConfiguration(geom=geom, bits=2, codes=np.array([[0, 1, 2, 3]]))
    np.testing.assert_allclose(config.nominal_phases(), [[0, math.pi / 2, math.pi, 3 * math.pi / 2]])


def test_configuration_shift_wraps():
    geom = ArrayGeometry(1, 4)
    config = RISConfiguration(geom=geom, bits=2, codes=np.array([[0, 1, 2, 3]]))
    assert config.shifted(2).codes.tolist() == [[2, 3, 0, 1]]


def test_configuration_csv_round_trip(tmp_path):
    geom = ArrayGeometry(4, 5)
    rng = np.random.default_rng(7)
    config = RISConfiguration(geom=geom, bits=2, codes=rng.integers(0, 4, size=(4, 5)))
    path = tmp_path / "codes.csv"
    config.to_csv(path)
    loaded = RISConfiguration.from_csv(path, geom, 2)
    assert loaded.codes.tolist() == config.codes.tolist()


def test_bitstream_all_zero(panel16):
    bits = encode_bias_bitstream(RISConfiguration.uniform(panel16, 2))
    assert bits.size == 512
    assert not bits.any()
    assert pack_bitstream(bits) == b"\x00" * 64
    assert bitstream_to_hex(bits) == "00" * 64


def test_bitstream_single_element(panel16):
    codes = np.zeros((16, 16), dtype=int)
    codes[0, 0] = 3
    bits = encode_bias_bitstream(RISConfiguration(geom=panel16, bits=2, codes=codes))
    assert bits[0] == 1 and bits[1] == 1
    assert not bits[2:].any()


def test_bitstream_bit_assignment(panel16):
    codes = np.zeros((16, 16), dtype=int)
    codes[0, 0] = 2  # current-reversal line only (code bit 1)
    bits = encode_bias_bitstream(RISConfiguration(geom=panel16, bits=2, codes=codes))
    assert bits[0] == 1 and bits[1] == 0
    codes[0, 0] = 1  # 90-degree shifter line only (code bit 0)
    bits = encode_bias_bitstream(RISConfiguration(geom=panel16, bits=2, codes=codes))
    assert bits[0] == 0 and bits[1] == 1


def test_bitstream_round_trip(rng):
    geom = ArrayGeometry(5, 7)
    for _ in range(20):
        config = RISConfiguration(geom=geom, bits=2, codes=rng.integers(0, 4, size=(5, 7)))
        bits = encode_bias_bitstream(config)
        assert decode_bias_bitstream(bits, geom).codes.tolist() == config.codes.tolist()
        packed = pack_bitstream(bits)
        np.testing.assert_array_equal(unpack_bitstream(packed, bits.size), bits)


def test_bitstream_requires_two_bits():
    geom = ArrayGeometry(2, 2)
    with pytest.raises(UnsupportedConfigurationError):
        encode_bias_bitstream(RISConfiguration.uniform(geom, 3))


def test_bitstream_decode_validation(panel16):
    with pytest.raises(ValueError):
        decode_bias_bitstream(np.zeros(100, dtype=np.uint8), panel16)
    with pytest.raises(ValueError):
        decode_bias_bitstream(np.full(512, 2, dtype=np.uint8), panel16)


def test_pack_msb_first():
    assert pack_bitstream(np.array([1, 0, 0, 0, 0, 0, 0, 0], dtype=np.uint8)) == b"\x80"
    assert pack_bitstream(np.array([0, 0, 0, 0, 0, 0, 0, 1], dtype=np.uint8)) == b"\x01"


@given(bits=st.integers(1, 8), data=st.data())
def test_quantize_grid_phases_are_fixed_points(bits, data):
    code = data.draw(st.integers(0, (1 << bits) - 1))
    turns = data.draw(st.integers(-3, 3))
    phase = code * TWO_PI / (1 << bits) + turns * TWO_PI
    assert quantize_phase(phase, bits) == code
