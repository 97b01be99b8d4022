"""Reading and writing feature files, label files and dataset directories.

Two feature-file formats are supported and auto-detected:

* CSV: one sample per row, d numeric columns, comma separated.  A header
  row is detected (and skipped) when its first row contains any token that
  does not parse as a number.
* Binary: magic bytes ``MSA1``, then N and d as little-endian uint32, then
  N * d little-endian float64 values in row-major order.

A label file holds one integer per line, aligned with the feature rows.

A dataset directory holds one feature file and one label file per domain,
named ``<domain>_<kind>.<ext>`` and ``<domain>_<kind>.labels`` where kind
names the feature type (for example ``surf`` or ``decaf``).
"""

from __future__ import annotations

import struct
import warnings
from pathlib import Path

import numpy as np

from .exceptions import DataFileError

MAGIC = b"MSA1"


def _detect_header(first_line: str) -> bool:
    for token in first_line.split(","):
        try:
            float(token.strip())
        except ValueError:
            return True
    return False


def _load_csv(path: Path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        if not first.strip():
            raise DataFileError("file is empty", path=path)
        skip = 1 if _detect_header(first) else 0
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            data = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
        if data.size == 0:
            raise DataFileError("no data rows found", path=path)
    except ValueError:
        # Re-parse by hand to point at the offending line.
        width = None
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if lineno == 1 and skip:
                    continue
                if not line.strip():
                    continue
                tokens = line.split(",")
                for token in tokens:
                    try:
                        float(token.strip())
                    except ValueError:
                        raise DataFileError(
                            f"not a number: {token.strip()!r}",
                            path=path,
                            line=lineno,
                        ) from None
                if width is None:
                    width = len(tokens)
                elif len(tokens) != width:
                    raise DataFileError(
                        f"row has {len(tokens)} columns, expected {width}",
                        path=path,
                        line=lineno,
                    )
        raise DataFileError("file could not be parsed as CSV", path=path)
    if not np.all(np.isfinite(data)):
        raise DataFileError("file contains non-finite values", path=path)
    return data


def _load_binary(path: Path) -> np.ndarray:
    raw = path.read_bytes()
    header = struct.calcsize("<4sII")
    if len(raw) < header:
        raise DataFileError("truncated header", path=path)
    magic, n, d = struct.unpack_from("<4sII", raw)
    if magic != MAGIC:
        raise DataFileError(f"bad magic bytes {magic!r}", path=path)
    expected = header + n * d * 8
    if len(raw) != expected:
        raise DataFileError(
            f"expected {expected} bytes for {n} x {d} float64 samples, "
            f"got {len(raw)}",
            path=path,
        )
    data = np.frombuffer(raw, dtype="<f8", count=n * d, offset=header)
    data = data.reshape(n, d).astype(np.float64)
    if not np.all(np.isfinite(data)):
        raise DataFileError("file contains non-finite values", path=path)
    return data


def load_features(path) -> np.ndarray:
    """Load an (N, d) feature array from a CSV or binary feature file."""
    path = Path(path)
    if not path.is_file():
        raise DataFileError("no such file", path=path)
    with open(path, "rb") as fh:
        head = fh.read(len(MAGIC))
    if head == MAGIC:
        return _load_binary(path)
    return _load_csv(path)


def save_features_csv(path, data, header=None) -> None:
    """Write an (N, d) array as a CSV feature file, optionally with a header."""
    arr = np.asarray(data, dtype=np.float64)
    kwargs = {}
    if header is not None:
        kwargs = {"header": ",".join(str(h) for h in header), "comments": ""}
    np.savetxt(Path(path), arr, delimiter=",", **kwargs)


def save_features_binary(path, data) -> None:
    """Write an (N, d) array in the binary feature format."""
    arr = np.ascontiguousarray(data, dtype="<f8")
    n, d = arr.shape
    with open(Path(path), "wb") as fh:
        fh.write(struct.pack("<4sII", MAGIC, n, d))
        fh.write(arr.tobytes())


def load_labels(path) -> np.ndarray:
    """Load a length-N integer label vector, one label per line."""
    path = Path(path)
    if not path.is_file():
        raise DataFileError("no such file", path=path)
    labels = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                labels.append(int(text))
            except ValueError:
                raise DataFileError(
                    f"not an integer label: {text!r}", path=path, line=lineno
                ) from None
    if not labels:
        raise DataFileError("no labels found", path=path)
    return np.array(labels, dtype=np.int64)


def save_labels(path, labels) -> None:
    """Write integer labels one per line."""
    with open(Path(path), "w", encoding="utf-8") as fh:
        for label in np.asarray(labels, dtype=np.int64):
            fh.write(f"{int(label)}\n")


def discover_domains(directory, kind: str) -> dict[str, tuple[Path, Path]]:
    """Find the domains of a dataset directory for one feature kind.

    Args:
        directory: dataset directory.
        kind: feature kind named in the files, e.g. ``surf``.

    Returns:
        Mapping of domain name to (feature file, label file), sorted by name.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise DataFileError("no such directory", path=directory)
    suffix = f"_{kind}"
    domains: dict[str, tuple[Path, Path]] = {}
    for path in sorted(directory.iterdir()):
        if not path.is_file() or path.suffix == ".labels":
            continue
        if not path.stem.endswith(suffix):
            continue
        domain = path.stem[: -len(suffix)]
        labels = directory / f"{path.stem}.labels"
        if not labels.is_file():
            raise DataFileError(
                f"domain {domain!r} has features but no label file "
                f"{labels.name}",
                path=directory,
            )
        if domain in domains:
            raise DataFileError(
                f"domain {domain!r} has more than one feature file",
                path=directory,
            )
        domains[domain] = (path, labels)
    if not domains:
        raise DataFileError(
            f"no feature files matching '*_{kind}.*' found", path=directory
        )
    return domains
