import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opquot import matrixio as mio
from opquot.errors import IoError, ParseError

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def bits(m):
    return np.ascontiguousarray(m, dtype=np.complex128).view(np.float64).tobytes()


class TestRoundTrip:
    @pytest.mark.parametrize("fmt", mio.FORMATS)
    def test_random_complex(self, fmt, rng, tmp_path):
        m = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
        path = tmp_path / f"m.{fmt}"
        mio.write_matrix(m, path)
        assert bits(mio.read_matrix(path)) == bits(m)

    @pytest.mark.parametrize("fmt", mio.FORMATS)
    def test_real_and_extremes(self, fmt):
        m = np.array([[0.1, -0.0, 5e-324], [1.7976931348623157e308, -2.2250738585072014e-308, 1 / 3]])
        assert bits(mio.parse_matrix(mio.format_matrix(m, fmt), fmt)) == bits(m)

    @pytest.mark.parametrize("fmt", mio.FORMATS)
    def test_negative_zero_imaginary(self, fmt):
        m = np.array([[complex(1.0, -0.0), 2.0]])
        assert bits(mio.parse_matrix(mio.format_matrix(m, fmt), fmt)) == bits(m)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.tuples(finite, finite), min_size=1, max_size=12), st.sampled_from(mio.FORMATS))
    def test_any_double(self, pairs, fmt):
        m = np.array([[complex(re, im) for re, im in pairs]])
        assert bits(mio.parse_matrix(mio.format_matrix(m, fmt), fmt)) == bits(m)

    def test_real_header_for_real_input(self):
        text = mio.format_mm(np.eye(2))
        assert text.splitlines()[0] == "%%MatrixMarket matrix array real general"
        assert text.splitlines()[1] == "2 2"

    def test_column_major(self):
        text = mio.format_mm(np.array([[1.0, 2.0], [3.0, 4.0]]))
        assert text.split()[-4:] == ["1", "3", "2", "4"]


class TestMatrixMarket:
    def test_comments_and_blank_lines(self):
        text = "%%MatrixMarket matrix array complex general\n% note\n\n2 1\n1 2\n\n3 -4\n"
        np.testing.assert_array_equal(mio.parse_mm(text), [[1 + 2j], [3 - 4j]])

    def test_malformed_dimension_line(self):
        with pytest.raises(ParseError) as err:
            mio.parse_mm("%%MatrixMarket matrix array real general\n2 x\n1\n2\n", path="bad.mm")
        assert err.value.line == 2
        assert str(err.value).startswith("bad.mm:2:")

    @pytest.mark.parametrize("text, line", [
        ("%%MatrixMarket matrix coordinate real general\n1 1\n1\n", 1),
        ("", 1),
        ("%%MatrixMarket matrix array real general\n", 2),
        ("%%MatrixMarket matrix array real general\n0 2\n", 2),
        ("%%MatrixMarket matrix array real general\n1 2\n1\n", 3),
        ("%%MatrixMarket matrix array real general\n1 1\n1\n2\n", 4),
        ("%%MatrixMarket matrix array complex general\n1 1\n1\n", 3),
        ("%%MatrixMarket matrix array real general\n1 1\nnan\n", 3),
    ])
    def test_errors(self, text, line):
        with pytest.raises(ParseError) as err:
            mio.parse_mm(text)
        assert err.value.line == line


class TestCsv:
    @pytest.mark.parametrize("literal, value", [
        ("1-2i", 1 - 2j),
        ("3", 3),
        ("-2.5i", -2.5j),
        ("i", 1j),
        ("-j", -1j),
        (" 1 + 2 i ", 1 + 2j),
        ("1e-3+4E2i", 1e-3 + 400j),
        ("+.5-.25i", 0.5 - 0.25j),
    ])
    def test_literals(self, literal, value):
        assert mio.parse_complex(literal) == value

    @pytest.mark.parametrize("literal", ["", "1+", "i2", "1+2", "abc", "1..2", "inf"])
    def test_bad_literals(self, literal):
        assert mio.parse_complex(literal) is None

    def test_ragged(self):
        with pytest.raises(ParseError) as err:
            mio.parse_csv("1,2\n3\n")
        assert err.value.line == 2

    def test_bad_cell_position(self):
        with pytest.raises(ParseError) as err:
            mio.parse_csv("1,2\n3,zz\n", path="x.csv")
        assert (err.value.line, err.value.column) == (2, 3)

    def test_empty(self):
        with pytest.raises(ParseError):
            mio.parse_csv("\n\n")


class TestFiles:
    def test_missing(self, tmp_path):
        with pytest.raises(IoError):
            mio.read_matrix(tmp_path / "absent.mm")

    def test_unwritable(self, tmp_path):
        with pytest.raises(IoError):
            mio.write_matrix(np.eye(2), tmp_path / "no" / "such" / "dir.mm")

    def test_format_guess(self):
        assert mio.guess_format("a.csv") == "csv"
        assert mio.guess_format("a.TXT") == "csv"
        assert mio.guess_format("a.mm") == "mm"
        assert mio.guess_format("a.mtx") == "mm"

    def test_explicit_format_overrides_extension(self, tmp_path):
        path = tmp_path / "m.dat"
        mio.write_matrix([[1.0, 2.0]], path, "csv")
        assert path.read_text() == "1,2\n"
        np.testing.assert_array_equal(mio.read_matrix(path, "csv"), [[1.0, 2.0]])
