"""JSON and CSV plumbing for the command line front end.

Complex numbers travel as ``[re, im]`` pairs.  Reports are written with
17 significant digits and a fixed key order so that identical inputs
give byte-identical files.
"""
import json
import math
import os
import tempfile

import numpy as np

from .problems import (AipProblem, BoundaryData, NpData, SarasonData, build_boundary,
                       build_np, build_sarason, sarason_from_np)


class ConfigError(ValueError):
    """Malformed configuration or problem file."""


# -- parsing -----------------------------------------------------------------

def parse_complex(v):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
            isinstance(a, (int, float)) and not isinstance(a, bool) for a in v):
        return complex(v[0], v[1])
    raise ConfigError(f"expected a number or an [re, im] pair, got {v!r}")


def parse_cvector(v):
    if not isinstance(v, list):
        raise ConfigError(f"expected a list, got {v!r}")
    return np.array([parse_complex(a) for a in v], dtype=complex)


def parse_cmatrix(v):
    """A list of rows, each a list of numbers or ``[re, im]`` pairs."""
    if not isinstance(v, list) or not all(isinstance(r, list) for r in v):
        raise ConfigError(f"expected a list of rows, got {v!r}")
    rows = [[parse_complex(a) for a in r] for r in v]
    if len({len(r) for r in rows}) > 1:
        raise ConfigError("matrix rows have different lengths")
    return np.array(rows, dtype=complex).reshape(len(rows), len(rows[0]) if rows else 0)


def _infer_type(d):
    if "type" in d:
        return d["type"]
    if "nodes" in d:
        return "np"
    if "t0" in d:
        return "boundary"
    if "zeros" in d:
        return "sarason"
    if "T1" in d:
        return "raw"
    raise ConfigError("cannot infer the problem type")


_PROBLEM_KEYS = {
    "np": {"nodes", "values"},
    "boundary": {"t0", "w0", "D"},
    "sarason": {"zeros", "Wstar", "values"},
    "raw": {"D", "T1", "T2", "M1", "M2", "special_case"},
}


def parse_problem(d):
    """Build an :class:`AipProblem` from its JSON description.

    Builder exceptions (``NotPsd``, ``NotContractive``, ...) propagate.
    """
    if not isinstance(d, dict):
        raise ConfigError("problem must be a JSON object")
    kind = _infer_type(d)
    if kind not in _PROBLEM_KEYS:
        raise ConfigError(f"unknown problem type {kind!r}")
    extra = set(d) - _PROBLEM_KEYS[kind] - {"type"}
    if extra:
        raise ConfigError(f"unknown keys for {kind} problem: {sorted(extra)}")
    try:
        if kind == "np":
            return build_np(NpData(parse_cvector(d["nodes"]), parse_cvector(d["values"])))
        if kind == "boundary":
            D = d["D"]
            if not isinstance(D, (int, float)) or isinstance(D, bool):
                raise ConfigError("D must be a real number")
            return build_boundary(BoundaryData(parse_complex(d["t0"]), parse_complex(d["w0"]), D))
        if kind == "sarason":
            zeros = parse_cvector(d["zeros"])
            if ("Wstar" in d) == ("values" in d):
                raise ConfigError("sarason problem needs exactly one of Wstar or values")
            if "values" in d:
                data = sarason_from_np(NpData(zeros, parse_cvector(d["values"])))
            else:
                data = SarasonData(zeros, parse_cmatrix(d["Wstar"]))
            return build_sarason(data)
        mats = {k: parse_cmatrix(d[k]) for k in ("D", "T1", "T2", "M1", "M2")}
        return AipProblem(**mats, special_case=bool(d.get("special_case", False)), kind="raw")
    except KeyError as exc:
        raise ConfigError(f"missing key {exc.args[0]!r} in {kind} problem") from None


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None


# -- serialization -----------------------------------------------------------

def _num(x):
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return _g17(x)


def _g17(x):
    if x == 0:
        return "0.0"
    s = format(x, ".17g")
    return s if any(c in s for c in ".e") else s + ".0"


def to_plain(obj):
    """Replace numpy arrays/scalars and complex numbers by JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps(obj, indent=0):
    """Deterministic JSON with 17 significant digits for floats."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj)
    return json.dumps(obj)


def atomic_write(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def grid_csv(z, blocks, names, lead=None):
    """CSV text: optional leading integer column, ``re_z, im_z``, then re/im of each entry.

    ``blocks`` is a list of stacked matrices (m, r, c) named by ``names``.
    """
    header = ([lead[0]] if lead else []) + ["re_z", "im_z"]
    for name, b in zip(names, blocks):
        for i in range(b.shape[1]):
            for j in range(b.shape[2]):
                header += [f"re_{name}_{i}_{j}", f"im_{name}_{i}_{j}"]
    lines = [",".join(header)]
    for m, zm in enumerate(z):
        row = ([str(lead[1][m])] if lead else []) + [_csv(zm.real), _csv(zm.imag)]
        for b in blocks:
            for v in b[m].ravel():
                row += [_csv(v.real), _csv(v.imag)]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _csv(x):
    return _g17(float(x))
