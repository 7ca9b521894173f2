import math

import numpy as np
import pytest

from rissim import ElementState, ElementStateTable, state_coefficient, state_coefficients


def test_default_table_values(table):
    assert table.bits == 2
    assert table.reference_freq == 26.5e9
    np.testing.assert_allclose(
        table.magnitudes(),
        10.0 ** (-np.array([1.1, 1.3, 1.1, 1.5]) / 20.0),
    )
    np.testing.assert_allclose(
        np.degrees(table.realized_phases()), [-141.2, -56.8, 34.9, 129.0]
    )
    assert table.mean_insertion_loss_db() == pytest.approx(1.25)


def test_default_table_steps_near_quarter_turn(table):
    steps = np.diff(np.degrees(table.realized_phases()))
    np.testing.assert_allclose(steps, [84.4, 91.7, 94.1], atol=1e-9)
    assert np.all(np.abs(steps - 90.0) <= 10.0)


def test_state_coefficient_realized(table):
    c = state_coefficient(table, 0, "realized")
    assert abs(c) == pytest.approx(10 ** (-1.1 / 20), rel=1e-12)
    assert math.degrees(np.angle(c)) == pytest.approx(-141.2)


def test_state_coefficient_nominal_identity(table):
    assert state_coefficient(table, 0, "nominal") == pytest.approx(1.0 + 0.0j)
    for code in range(4):
        c = state_coefficient(table, code, "nominal")
        assert abs(c) == pytest.approx(1.0)
        assert np.angle(c) % (2 * math.pi) == pytest.approx(code * math.pi / 2, abs=1e-12)


def test_state_coefficient_code_range(table):
    with pytest.raises(ValueError):
        state_coefficient(table, 4, "nominal")
    with pytest.raises(ValueError):
        state_coefficient(table, -1, "realized")
    with pytest.raises(ValueError):
        state_coefficient(table, 0, "measured")


def test_state_coefficients_vectorized(table):
    codes = np.array([[0, 1], [2, 3]])
    got = state_coefficients(table, codes, "realized")
    expected = np.array(
        [[state_coefficient(table, c, "realized") for c in row] for row in codes]
    )
    np.testing.assert_allclose(got, expected)
    with pytest.raises(ValueError):
        state_coefficients(table, np.array([0, 4]), "nominal")


def test_ideal_table():
    t = ElementStateTable.ideal(3)
    assert t.bits == 3
    np.testing.assert_allclose(t.magnitudes(), 1.0)
    np.testing.assert_allclose(t.realized_phases(), t.nominal_phases())


def test_table_validation_state_count():
    with pytest.raises(ValueError):
        ElementStateTable.from_states([(0.0, 1.0), (90.0, 1.0), (180.0, 1.0)])


def test_table_validation_nominal_grid():
    good = ElementStateTable.ideal(1).states
    with pytest.raises(ValueError):
        ElementStateTable(bits=1, states=(good[0], ElementState(1, 0.1, 0.0, 0.0)))


def test_table_validation_magnitude():
    with pytest.raises(ValueError):
        ElementStateTable.from_states([(0.0, -0.5), (90.0, 0.0), (180.0, 0.0), (270.0, 0.0)])


def test_opaque_state_allowed():
    t = ElementStateTable.from_states([(0.0, math.inf), (90.0, math.inf),
                                       (180.0, math.inf), (270.0, math.inf)])
    np.testing.assert_allclose(t.magnitudes(), 0.0)


def test_csv_round_trip(tmp_path, table):
    path = tmp_path / "states.csv"
    path.write_text(
        "code,phase_deg,loss_db\n"
        "0,-141.2,1.1\n"
        "1,-56.8,1.3\n"
        "2,34.9,1.1\n"
        "3,129.0,1.5\n"
    )
    loaded = ElementStateTable.from_csv(path)
    np.testing.assert_allclose(loaded.magnitudes(), table.magnitudes())
    np.testing.assert_allclose(loaded.realized_phases(), table.realized_phases())


def test_csv_errors(tmp_path):
    bad_header = tmp_path / "bad1.csv"
    bad_header.write_text("code,phase\n0,0\n")
    with pytest.raises(ValueError):
        ElementStateTable.from_csv(bad_header)
    bad_codes = tmp_path / "bad2.csv"
    bad_codes.write_text("code,phase_deg,loss_db\n0,0,1\n2,90,1\n")
    with pytest.raises(ValueError):
        ElementStateTable.from_csv(bad_codes)
    dup = tmp_path / "bad3.csv"
    dup.write_text("code,phase_deg,loss_db\n0,0,1\n0,90,1\n")
    with pytest.raises(ValueError):
        ElementStateTable.from_csv(dup)
