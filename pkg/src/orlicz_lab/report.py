"""Deterministic report emission and artifact I/O.

All JSON reports are canonical: keys sorted, fixed separators, floats
serialized by ``repr`` (shortest round-trip form), no timestamps.  Every
report embeds the configuration it was produced from, its SHA-256 hash, and
the tolerance set in force, so identical configuration and seed give
byte-identical files.

CSV field format: a two-line grid header (``dim,n,extent`` and its values)
followed by a column header and one row per cell,
``index,x[,y],value[,value_y]``.  Rearrangement profiles use the
(s, fstar, fstarstar) layout of their owning module.

Figures are rendered with matplotlib's SVG backend, pinned to a fixed hash
salt and stripped of date metadata so repeated runs emit identical bytes.
"""

import csv
import hashlib
import io
import json
import os

import matplotlib

matplotlib.use("svg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

import numpy as np  # noqa: E402

from .errors import ParseError  # noqa: E402
from .fields import SampledField  # noqa: E402

#: fixed salt: matplotlib derives clip-path ids from it, keeping SVG output
#: byte-stable across processes
SVG_HASH_SALT = "orlicz-lab"


# ---------------------------------------------------------------------------
# canonical JSON


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if v != v:
            return "nan"
        if v in (float("inf"), float("-inf")):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    return repr(obj)


def canonical_json(payload):
    """Stable text form: sorted keys, two-space indent, round-trip floats."""
    return json.dumps(_jsonable(payload), sort_keys=True, indent=2,
                      allow_nan=False) + "\n"


def config_hash(config):
    """SHA-256 of the canonical form of the run configuration."""
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def assemble_report(command, config, tolerances, body):
    """Wrap a report body with its provenance envelope."""
    return {
        "command": command,
        "config": _jsonable(config),
        "config_hash": config_hash(config),
        "tolerances": _jsonable(tolerances),
        "body": _jsonable(body),
    }


def write_json(path, payload):
    text = canonical_json(payload)
    with open(path, "w") as fh:
        fh.write(text)
    return path


def parse_json_file(path):
    """Load a JSON document, converting decode failures to ParseError with
    the offending line and column."""
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc


# ---------------------------------------------------------------------------
# sampled-field CSV


def write_field_csv(path, field):
    """Grid header, column header, then one row per cell."""
    vals = np.atleast_2d(np.asarray(field.values, dtype=float).reshape(
        field.ncells, -1))
    ncomp = vals.shape[1]
    coords = np.stack(field.centers(), axis=1)
    cols = ["index"] + ["x", "y"][: field.dim]
    cols += ["value"] if ncomp == 1 else ["value", "value_y"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dim", "n", "extent"])
        writer.writerow([field.dim, field.n, repr(float(field.extent))])
        writer.writerow(cols)
        for i in range(field.ncells):
            row = [i] + [repr(float(c)) for c in coords[i]]
            row += [repr(float(v)) for v in vals[i]]
            writer.writerow(row)
    return path


def read_field_csv(path):
    """Inverse of :func:`write_field_csv`; raises ParseError with line numbers."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    if len(rows) < 3:
        raise ParseError(f"{path}: line 1: expected grid header, column "
                         "header, and at least one cell row")
    if [c.strip() for c in rows[0]] != ["dim", "n", "extent"]:
        raise ParseError(f"{path}: line 1: expected header 'dim,n,extent', "
                         f"got {','.join(rows[0])!r}")
    try:
        dim, n, extent = int(rows[1][0]), int(rows[1][1]), float(rows[1][2])
    except (IndexError, ValueError) as exc:
        raise ParseError(f"{path}: line 2: bad grid values ({exc})") from exc
    if dim not in (1, 2):
        raise ParseError(f"{path}: line 2: dim must be 1 or 2, got {dim}")
    ncells = n ** dim
    header = [c.strip() for c in rows[2]]
    ncomp = sum(1 for c in header if c.startswith("value"))
    if ncomp not in (1, 2) or header[: 1 + dim] != ["index"] + ["x", "y"][:dim]:
        raise ParseError(f"{path}: line 3: unexpected column header "
                         f"{','.join(header)!r}")
    body = rows[3:]
    if len(body) != ncells:
        raise ParseError(f"{path}: line 4: expected {ncells} cell rows, "
                         f"found {len(body)}")
    values = np.zeros((ncells, ncomp))
    seen = np.zeros(ncells, dtype=bool)
    for lineno, row in enumerate(body, start=4):
        try:
            idx = int(row[0])
            vals = [float(v) for v in row[1 + dim: 1 + dim + ncomp]]
        except (IndexError, ValueError) as exc:
            raise ParseError(f"{path}: line {lineno}: bad cell row ({exc})") from exc
        if not 0 <= idx < ncells or seen[idx]:
            raise ParseError(f"{path}: line {lineno}: cell index {idx} "
                             "out of range or repeated")
        if len(vals) != ncomp:
            raise ParseError(f"{path}: line {lineno}: expected {ncomp} "
                             "value column(s)")
        seen[idx] = True
        values[idx] = vals
    return SampledField(dim, n, extent, values[:, 0] if ncomp == 1 else values)


def write_table_csv(path, header, rows):
    """Small utility for report tables: floats in round-trip form."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating))
                             else v for v in row])
    return path


# ---------------------------------------------------------------------------
# figures


def line_chart(path, curves, title="", xlabel="", ylabel="",
               logx=False, logy=False):
    """Render labelled (x, y) curves to a deterministic SVG file.

    ``curves`` is a sequence of (label, xs, ys[, style]) tuples; style is a
    matplotlib format string such as ``"o-"``.
    """
    plt.rcParams["svg.hashsalt"] = SVG_HASH_SALT
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    try:
        for curve in curves:
            label, xs, ys = curve[0], np.asarray(curve[1]), np.asarray(curve[2])
            style = curve[3] if len(curve) > 3 else "-"
            ax.plot(xs, ys, style, label=label, linewidth=1.4, markersize=3.5)
        if logx:
            ax.set_xscale("log")
        if logy:
            ax.set_yscale("log")
        ax.set_title(title)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.grid(True, which="both", alpha=0.25)
        if any(c[0] for c in curves):
            ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return path


# ---------------------------------------------------------------------------
# output directory resolution


def resolve_out_dir(cli_value=None, env=os.environ):
    """CLI flag wins; otherwise ORLICZ_LAB_OUT; otherwise ./orlicz-lab-out."""
    out = cli_value or env.get("ORLICZ_LAB_OUT") or "orlicz-lab-out"
    os.makedirs(out, exist_ok=True)
    return out
