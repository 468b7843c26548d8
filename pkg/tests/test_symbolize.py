import numpy as np
import pytest
from hypothesis import given, strategies as st

from mapbias import RngStream, SymbolString, digitize, perturb_measurements

binary_text = st.text(alphabet="01", min_size=1, max_size=64)


class TestSymbolString:
    def test_packing_is_msb_first(self):
        s = SymbolString.from_text("001")
        assert s.bits == 0b001
        assert s.length == 3
        assert s.text == "001"

    @given(binary_text)
    def test_text_round_trip(self, text):
        assert SymbolString.from_text(text).text == text

    def test_rejects_bits_beyond_length(self):
        with pytest.raises(ValueError):
            SymbolString(bits=0b100, length=2)

    def test_rejects_bad_lengths(self):
        with pytest.raises(ValueError):
            SymbolString(bits=0, length=0)
        with pytest.raises(ValueError):
            SymbolString(bits=0, length=65)

    def test_rejects_non_binary_text(self):
        with pytest.raises(ValueError):
            SymbolString.from_text("01x")
        with pytest.raises(ValueError):
            SymbolString.from_text("")

    @given(binary_text)
    def test_reversed_and_complement(self, text):
        s = SymbolString.from_text(text)
        assert s.reversed().text == text[::-1]
        assert s.complement().text == "".join("1" if ch == "0" else "0" for ch in text)

    def test_len_and_str(self):
        s = SymbolString.from_text("0101")
        assert len(s) == 4
        assert str(s) == "0101"


class TestDigitize:
    def test_worked_example_prefix_and_suffix(self):
        # 25 recorded values starting 0.12, 0.47, 0.66 and ending
        # 0.21, 0.05, 0.78, 0.97 digitize to "001...0011".
        traj = [0.12, 0.47, 0.66] + [0.3] * 18 + [0.21, 0.05, 0.78, 0.97]
        text = digitize(traj).text
        assert len(text) == 25
        assert text.startswith("001")
        assert text.endswith("0011")

    def test_threshold_is_inclusive(self):
        assert digitize([0.5] * 7).text == "1111111"

    def test_split_around_threshold(self):
        assert digitize([0.49999, 0.50001]).text == "01"

    def test_order_preserving(self):
        assert digitize([0.9, 0.1, 0.9, 0.1]).text == "1010"

    @given(
        st.lists(
            st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
            min_size=1,
            max_size=64,
        )
    )
    def test_complement_symmetry(self, values):
        # flipping the trajectory around 0.5 complements the string,
        # provided no value sits exactly on the threshold
        if any(v == 0.5 for v in values):
            return
        flipped = [1.0 - v for v in values]
        assert digitize(flipped).text == digitize(values).complement().text

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            digitize([])
        with pytest.raises(ValueError):
            digitize([[0.1, 0.2]])


class TestPerturbMeasurements:
    def test_zero_delta_is_identity(self):
        traj = np.array([0.1, 0.5, 0.9])
        out = perturb_measurements(traj, 0.0, RngStream(1, 0))
        assert np.array_equal(out, traj)
        out[0] = 5.0  # returned array is a copy
        assert traj[0] == 0.1

    def test_support_bound(self):
        traj = np.linspace(0.0, 1.0, 500)
        out = perturb_measurements(traj, 0.2, RngStream(1, 0))
        assert np.all(np.abs(out - traj) <= 0.2)

    def test_values_not_clamped(self):
        traj = np.full(4000, 0.99)
        out = perturb_measurements(traj, 0.3, RngStream(1, 0))
        assert (out > 1.0).any()

    def test_rejects_negative_delta(self):
        with pytest.raises(ValueError):
            perturb_measurements([0.5], -0.1, RngStream(1, 0))

    def test_flip_probability_near_threshold(self):
        # value 0.5 - delta/2 crosses the threshold iff the draw
        # exceeds delta/2, which happens with probability 1/4
        delta = 0.2
        values = np.full(2 * 10**5, 0.5 - delta / 2)
        out = perturb_measurements(values, delta, RngStream(77, 0))
        flipped = float((out >= 0.5).mean())
        assert abs(flipped - 0.25) < 0.01
