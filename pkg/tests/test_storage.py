"""
Tests for matrix, code and channel files and for atomic result output.
"""
import os

import numpy as np
import pytest

from awtc.bitlinalg import BitMatrix
from awtc.codes import CosetCode, LinearCode, PseudolinearCode, sample_pseudolinear
from awtc.errors import DomainError, MatrixFormatError
from awtc.storage import (
    format_csv,
    format_matrix,
    load_channel,
    load_code,
    parse_code,
    parse_matrix,
    read_matrix,
    save_code,
    write_matrix,
    write_text_atomic,
)

# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


def test_matrix_text_format(tmp_path):
    m = BitMatrix.from_rows(["101", "011"])
    assert format_matrix(m) == "2 3\n101\n011\n"
    path = tmp_path / "m.txt"
    write_matrix(str(path), m)
    assert read_matrix(str(path)) == m


def test_empty_matrix():
    m, used = parse_matrix(["0 4"])
    assert (m.rows, m.cols, used) == (0, 4, 1)


@pytest.mark.parametrize(
    "lines",
    [[], ["2"], ["x y"], ["2 3", "101"], ["1 3", "10"], ["1 3", "1a1"]],
)
def test_malformed_matrices(lines):
    with pytest.raises(MatrixFormatError):
        parse_matrix(lines)


def test_trailing_content_rejected(tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("1 2\n10\n11\n")
    with pytest.raises(MatrixFormatError):
        read_matrix(str(path))


# ---------------------------------------------------------------------------
# Code files
# ---------------------------------------------------------------------------


def test_bundled_codes(n3_code, hamming):
    assert load_code("builtin:example-n3") == n3_code
    assert load_code("builtin:hamming74") == hamming
    with pytest.raises(MatrixFormatError):
        load_code("builtin:no-such-code")


def test_linear_code_file(tmp_path, n3_code):
    path = tmp_path / "n3.code"
    save_code(str(path), n3_code)
    assert path.read_text().startswith('{"family": "linear"')
    assert load_code(str(path)) == n3_code


def test_pseudolinear_code_file_keeps_field_and_seed(tmp_path):
    code = sample_pseudolinear(6, 1, 2, k=4, seed=21)
    path = tmp_path / "pl.code"
    save_code(str(path), code)
    loaded = load_code(str(path))
    assert isinstance(loaded, PseudolinearCode)
    assert loaded.g == code.g
    assert loaded.field.primitive_poly == code.field.primitive_poly
    assert (loaded.k, loaded.seed) == (4, 21)


def test_coset_code_file(tmp_path):
    code = CosetCode(4, BitMatrix.from_rows(["1100", "0011"]))
    path = tmp_path / "coset.code"
    save_code(str(path), code)
    assert load_code(str(path)) == code


@pytest.mark.parametrize(
    "text",
    [
        "",
        "not json\n1 3\n100\n",
        '{"family": "linear", "n": 3}\n1 3\n100\n',
        '{"family": "linear", "n": 4, "mbits": 1, "wbits": 0}\n1 3\n100\n',
        '{"family": "linear", "n": 3, "mbits": 1, "wbits": 1}\n1 3\n100\n',
        '{"family": "coset", "n": 3, "mbits": 2}\n2 3\n110\n110\n',
        '{"family": "pseudolinear", "n": 3, "mbits": 1}\n1 3\n100\n',
        '{"family": "turbo", "n": 3, "mbits": 1}\n1 3\n100\n',
    ],
)
def test_malformed_code_files(text):
    with pytest.raises(MatrixFormatError):
        parse_code(text)


def test_linear_code_without_key_rows():
    code = parse_code('{"family": "linear", "n": 3, "mbits": 1}\n1 3\n111\n')
    assert isinstance(code, LinearCode)
    assert code.wbits == 0


# ---------------------------------------------------------------------------
# Channels
# ---------------------------------------------------------------------------


def test_channel_specs(tmp_path):
    assert load_channel("bsc:0.25").matrix[0, 1] == 0.25
    path = tmp_path / "z.ch"
    path.write_text("2 2\n1 0\n0.5 0.5\n")
    ch = load_channel(f"file:{path}")
    assert np.allclose(ch.matrix, [[1.0, 0.0], [0.5, 0.5]])


def test_bad_channel_specs(tmp_path):
    with pytest.raises(MatrixFormatError):
        load_channel("bsc:abc")
    with pytest.raises(MatrixFormatError):
        load_channel("awgn:1.0")
    path = tmp_path / "bad.ch"
    path.write_text("2 2\n1 0\n")
    with pytest.raises(MatrixFormatError):
        load_channel(f"file:{path}")
    with pytest.raises(DomainError):
        load_channel("bsc:0.9")


# ---------------------------------------------------------------------------
# Result files
# ---------------------------------------------------------------------------


def test_csv_cells():
    rows = [{"r": 0.1, "ok": True, "read_set": [1, 3], "note": None}]
    assert format_csv(rows) == "r,ok,read_set,note\n0.1,true,1 3,\n"
    assert format_csv([]) == ""


def test_atomic_write_leaves_no_temporaries(tmp_path):
    target = tmp_path / "out" / "result.csv"
    write_text_atomic(str(target), "a\n")
    write_text_atomic(str(target), "b\n")
    assert target.read_text() == "b\n"
    assert os.listdir(target.parent) == ["result.csv"]
