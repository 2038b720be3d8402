"""Plain-text tensor files.

Format: optional comment lines starting with ``#``, one header line
``dims: I_1 I_2 ... I_D``, then ``prod(I_d)`` whitespace-separated numeric
tokens in row-major order (line breaks are not significant). The token
``nan`` (case-insensitive) marks a missing entry and is only accepted when
explicitly allowed. Values are written with 17 significant digits so a
write/read round trip is exact.
"""

import numpy as np

from manybody.errors import TensorFileError
from manybody.tensor import as_tensor


def write_tensor(path, values, comments=()):
    """Write a tensor (NaN entries allowed; they serialize as ``nan``)."""
    arr = as_tensor(values, allow_nan=True)
    last = arr.shape[-1]
    rows = arr.reshape(-1, last)
    with open(path, "w", encoding="utf-8") as fh:
        for comment in comments:
            fh.write(f"# {comment}\n")
        fh.write("dims: " + " ".join(str(d) for d in arr.shape) + "\n")
        for row in rows:
            fh.write(" ".join(format(v, ".17g") for v in row) + "\n")


def read_tensor(path, allow_nan=False):
    """Read a tensor file; see the module docstring for the format."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.readlines()

    body = [ln for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not body:
        raise TensorFileError(f"{path}: no header line")
    header = body[0].strip()
    if not header.startswith("dims:"):
        raise TensorFileError(f"{path}: first line must be 'dims: I_1 ... I_D'")
    try:
        dims = tuple(int(tok) for tok in header[len("dims:"):].split())
    except ValueError:
        raise TensorFileError(f"{path}: malformed dims header {header!r}")
    if not dims or any(d < 1 for d in dims):
        raise TensorFileError(f"{path}: dims must be positive integers")

    tokens = " ".join(body[1:]).split()
    expected = int(np.prod(dims))
    if len(tokens) != expected:
        raise TensorFileError(
            f"{path}: expected {expected} values for dims {dims}, found {len(tokens)}"
        )
    try:
        flat = np.array([float(tok) for tok in tokens], dtype=np.float64)
    except ValueError as exc:
        raise TensorFileError(f"{path}: {exc}")

    nan_mask = np.isnan(flat)
    if nan_mask.any() and not allow_nan:
        raise TensorFileError(f"{path}: nan entries are not allowed here")
    seen = flat[~nan_mask]
    if not np.isfinite(seen).all():
        raise TensorFileError(f"{path}: values must be finite")
    if seen.size and seen.min() < 0:
        raise TensorFileError(f"{path}: values must be non-negative")
    return flat.reshape(dims)
