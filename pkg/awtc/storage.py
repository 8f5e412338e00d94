# awtc/storage.py
import csv
import io
import json
import logging
import os
import tempfile
from importlib import resources
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np

from .bitlinalg import BitMatrix
from .channel import Dmc
from .codes import CosetCode, LinearCode, PseudolinearCode
from .errors import AwtcError, MatrixFormatError
from .gf2m import Field

# Set up logging
logger = logging.getLogger(__name__)

Code = Union[LinearCode, CosetCode, PseudolinearCode]

BUILTIN_PREFIX = "builtin:"


# ---------------------------------------------------------------------------
# Matrix text format: "rows cols" then one 0/1 string per row
# ---------------------------------------------------------------------------


def format_matrix(m: BitMatrix) -> str:
    return "\n".join([f"{m.rows} {m.cols}"] + m.to_strings()) + "\n"


def parse_matrix(lines: Sequence[str]) -> Tuple[BitMatrix, int]:
    """Parse one matrix from the head of lines; returns it and the lines consumed."""
    if not lines:
        raise MatrixFormatError("missing matrix header")
    try:
        rows, cols = (int(x) for x in lines[0].split())
    except ValueError:
        raise MatrixFormatError(f"bad matrix header {lines[0]!r}")
    body = [line.strip() for line in lines[1 : rows + 1]]
    if len(body) != rows:
        raise MatrixFormatError(f"expected {rows} rows, found {len(body)}")
    for line in body:
        if len(line) != cols or any(ch not in "01" for ch in line):
            raise MatrixFormatError(f"bad matrix row {line!r} for {cols} columns")
    if rows == 0:
        return BitMatrix.zeros(0, cols), 1
    return BitMatrix.from_rows(body, cols), rows + 1


def read_matrix(path: str) -> BitMatrix:
    with open(path) as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]
    m, used = parse_matrix(lines)
    if used != len(lines):
        raise MatrixFormatError(f"{path}: trailing content after matrix")
    return m


def write_matrix(path: str, m: BitMatrix) -> None:
    write_text_atomic(path, format_matrix(m))


# ---------------------------------------------------------------------------
# Code files: one JSON header line, then the matrix
# ---------------------------------------------------------------------------


def format_code(code: Code) -> str:
    if isinstance(code, LinearCode):
        header = {
            "family": "linear", "n": code.n, "mbits": code.mbits, "wbits": code.wbits
        }
        body = code.g
    elif isinstance(code, CosetCode):
        header = {"family": "coset", "n": code.n, "mbits": code.mbits}
        body = code.h
    else:
        header = {
            "family": "pseudolinear",
            "n": code.n,
            "mbits": code.mbits,
            "wbits": code.wbits,
            "k": code.k,
            "b": code.field.b,
            "primitive_poly": code.field.primitive_poly,
            "seed": code.seed,
        }
        body = code.g
    return json.dumps(header, sort_keys=True) + "\n" + format_matrix(body)


def parse_code(text: str) -> Code:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise MatrixFormatError("empty code file")
    try:
        header = json.loads(lines[0])
        family = header["family"]
        n = int(header["n"])
        mbits = int(header["mbits"])
    except (ValueError, KeyError, TypeError) as e:
        raise MatrixFormatError(f"bad code header: {e}")
    m, used = parse_matrix(lines[1:])
    if used != len(lines) - 1:
        raise MatrixFormatError("trailing content after code matrix")
    if m.cols != n:
        raise MatrixFormatError(f"matrix has {m.cols} columns, header says n={n}")
    try:
        if family == "linear":
            wbits = int(header.get("wbits", 0))
            if m.rows != mbits + wbits:
                raise MatrixFormatError(
                    f"generator has {m.rows} rows, expected {mbits + wbits}"
                )
            return LinearCode.from_stacked(m, mbits)
        if family == "coset":
            return CosetCode(n, m)
        if family == "pseudolinear":
            field = Field(int(header["b"]), int(header["primitive_poly"]))
            wbits, k = int(header["wbits"]), int(header["k"])
            return PseudolinearCode(n, mbits, wbits, k, field, m, header.get("seed"))
    except KeyError as e:
        raise MatrixFormatError(f"code header lacks {e}")
    except AwtcError as e:
        if isinstance(e, MatrixFormatError):
            raise
        raise MatrixFormatError(f"inconsistent code file: {e}")
    raise MatrixFormatError(f"unknown code family {family!r}")


def load_code(path: str) -> Code:
    """Read a code file, or a bundled code named builtin:<name>."""
    if path.startswith(BUILTIN_PREFIX):
        name = path[len(BUILTIN_PREFIX) :]
        try:
            text = resources.files("awtc.data").joinpath(f"{name}.code").read_text()
        except FileNotFoundError:
            raise MatrixFormatError(f"no bundled code named {name!r}")
    else:
        with open(path) as fh:
            text = fh.read()
    logger.info(f"Loaded code from {path}")
    return parse_code(text)


def save_code(path: str, code: Code) -> None:
    write_text_atomic(path, format_code(code))


# ---------------------------------------------------------------------------
# Channel specs: bsc:<p> or file:<path> ("in out" header, then rows)
# ---------------------------------------------------------------------------


def load_channel(spec: str) -> Dmc:
    kind, _, arg = spec.partition(":")
    if kind == "bsc":
        try:
            p = float(arg)
        except ValueError as e:
            raise MatrixFormatError(f"bad BSC parameter in {spec!r}: {e}")
        return Dmc.bsc(p)
    if kind == "file":
        with open(arg) as fh:
            lines = [line for line in fh.read().splitlines() if line.strip()]
        try:
            rows, cols = (int(x) for x in lines[0].split())
            matrix = np.array([[float(x) for x in line.split()] for line in lines[1:]])
        except (ValueError, IndexError) as e:
            raise MatrixFormatError(f"bad channel file {arg}: {e}")
        if matrix.shape != (rows, cols):
            raise MatrixFormatError(
                f"channel file {arg}: shape {matrix.shape} != {(rows, cols)}"
            )
        return Dmc(matrix)
    raise MatrixFormatError(f"unknown channel spec {spec!r}")


# ---------------------------------------------------------------------------
# Atomic result files
# ---------------------------------------------------------------------------


def write_text_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".awtc-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
        logger.info(f"Wrote {path}")
    except Exception as e:
        logger.error(f"Error writing {path}: {e}")
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_cell(v) for v in value)
    if value is None:
        return ""
    return str(value)


def format_csv(rows: List[Dict[str, Any]]) -> str:
    """Single header row, '.' decimals via repr, columns in first-row order."""
    buf = io.StringIO()
    if not rows:
        return ""
    columns = list(rows[0].keys())
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def write_csv_atomic(path: str, rows: List[Dict[str, Any]]) -> None:
    write_text_atomic(path, format_csv(rows))


def write_json_atomic(path: str, payload: str) -> None:
    write_text_atomic(path, payload if payload.endswith("\n") else payload + "\n")
