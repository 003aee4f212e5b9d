"""Instance and trace files.

An instance is a JSON manifest plus two Matrix Market files::

    {
      "n": 4, "m": 2,
      "A": "A.mtx", "Q": "Q.mtx",        # paths relative to the manifest
      "b": [...], "c": [...],
      "start": {"x": [...], "y": [...], "s": [...]},   # optional
      "mu0": 1.0                                        # optional
    }

``Q`` is written with symmetric storage. Floats are written with 17
significant digits so a save/load round trip is exact.
"""

import csv
import json
import math
from pathlib import Path

import numpy as np
import scipy.io as sio
import scipy.sparse as sp

from .errors import DimensionMismatch, MissingFile, ParseError, ValidationError, ValidationFailed
from .ipm import CSV_FIELDS
from .qp_model import Iterate, QpProblem, validate


def _read_mtx(path):
    if not path.exists():
        raise MissingFile(f"matrix file not found: {path}")
    try:
        M = sio.mmread(str(path))
    except (ValueError, OSError, IndexError) as exc:
        line = None
        msg = str(exc)
        if msg.startswith("Line "):
            try:
                line = int(msg.split(":", 1)[0][5:])
            except ValueError:
                pass
        raise ParseError(f"{path}: {msg}", path=str(path), line=line) from exc
    return M


def _vector(manifest, key, path):
    try:
        return np.array(manifest[key], dtype=float)
    except KeyError:
        raise ParseError(f"{path}: manifest has no {key!r} entry", path=str(path)) from None
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: {key!r} is not a numeric array: {exc}", path=str(path)) from exc


def load_instance(manifest_path):
    """Read and validate an instance.

    Returns
    -------
    problem : QpProblem
    start : Iterate or None
    """
    path = Path(manifest_path)
    if not path.exists():
        raise MissingFile(f"manifest not found: {path}")
    try:
        manifest = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", path=str(path), line=exc.lineno) from exc

    base = path.parent
    A = _read_mtx(base / manifest.get("A", "A.mtx"))
    Q = _read_mtx(base / manifest.get("Q", "Q.mtx"))
    b = _vector(manifest, "b", path)
    c = _vector(manifest, "c", path)

    try:
        n, m = int(manifest.get("n", c.size)), int(manifest.get("m", b.size))
        if A.shape != (m, n):
            raise DimensionMismatch(f"manifest says {m}x{n} but A is {A.shape[0]}x{A.shape[1]}")
        if b.size != m or c.size != n:
            raise DimensionMismatch(f"b has length {b.size} and c has length {c.size}, expected {m} and {n}")
        problem = QpProblem(A, Q, b, c)
        validate(problem)
    except ValidationError as exc:
        raise ValidationFailed(exc) from exc

    start = None
    if "start" in manifest:
        st = manifest["start"]
        try:
            start = Iterate(st["x"], st["y"], st["s"])
        except (KeyError, ValueError) as exc:
            raise ParseError(f"{path}: invalid start point: {exc}", path=str(path)) from exc
        if start.n != n or start.y.size != m:
            raise ValidationFailed(DimensionMismatch("start point dimensions do not match the problem"))
    return problem, start


def _floats(v):
    return [float(t) for t in np.asarray(v).ravel()]


def save_instance(problem, directory, start=None, name="instance"):
    """Write ``<name>.json``, ``<name>_A.mtx`` and ``<name>_Q.mtx`` to ``directory``.

    Returns the manifest path.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    a_name, q_name = f"{name}_A.mtx", f"{name}_Q.mtx"
    A = problem.A if sp.issparse(problem.A) else np.asarray(problem.A)
    sio.mmwrite(str(directory / a_name), A, precision=17)
    sio.mmwrite(str(directory / q_name), sp.coo_matrix(problem.Q), symmetry="symmetric", precision=17)
    manifest = {
        "n": problem.n,
        "m": problem.m,
        "A": a_name,
        "Q": q_name,
        "b": _floats(problem.b),
        "c": _floats(problem.c),
    }
    if start is not None:
        manifest["start"] = {"x": _floats(start.x), "y": _floats(start.y), "s": _floats(start.s)}
        manifest["mu0"] = start.mu
    out = directory / f"{name}.json"
    # json writes floats with repr, which round-trips exactly
    out.write_text(json.dumps(manifest, indent=1))
    return out


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    return repr(v) if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")


def save_trace(result, path):
    """One CSV row per iteration, floats as shortest round-trip decimals."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for rec in result.trace:
            w.writerow([_fmt(getattr(rec, f)) for f in CSV_FIELDS])


def save_rows(rows, header, path):
    """Generic CSV report writer used by the ``certify`` and ``scale`` commands."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if isinstance(v, (int, float, np.number)) else v for v in row])
