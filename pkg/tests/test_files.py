import numpy as np
import pytest

from nuqft.errors import InputFormatError
from nuqft.files import load_angles, load_vector


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_angles_with_comments(tmp_path):
    path = write(tmp_path, "a.txt", "# angles\n31.75\n\n0.25  # inline\n")
    a = load_angles(path, 64)
    assert a.angles.tolist() == [31.75, 0.25]
    assert a.partition.tolist() == [63, 0]


def test_empty_angle_file(tmp_path):
    with pytest.raises(InputFormatError, match="no angles"):
        load_angles(write(tmp_path, "e.txt", "# nothing\n"), 8)


def test_angle_out_of_range_names_line(tmp_path):
    with pytest.raises(InputFormatError, match="line 3") as exc:
        load_angles(write(tmp_path, "r.txt", "1.0\n2.0\n8.0\n"), 8)
    assert exc.value.line == 3


def test_angle_not_a_number(tmp_path):
    with pytest.raises(InputFormatError, match="line 1"):
        load_angles(write(tmp_path, "n.txt", "abc\n"), 8)


def test_missing_file(tmp_path):
    with pytest.raises(InputFormatError, match="cannot read"):
        load_angles(str(tmp_path / "missing.txt"), 8)


def test_vector_pairs(tmp_path):
    v = load_vector(write(tmp_path, "v.txt", "0.5,-0.5\n1, 2\n"))
    np.testing.assert_array_equal(v, [0.5 - 0.5j, 1 + 2j])


def test_vector_malformed(tmp_path):
    with pytest.raises(InputFormatError, match="line 2"):
        load_vector(write(tmp_path, "m.txt", "1,0\n1;0\n"))
