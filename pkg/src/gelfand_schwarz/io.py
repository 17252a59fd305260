"""Pair spec files, coefficient dumps, atomic writes and run manifests."""

import csv
import hashlib
import io
import json
import os
import tempfile
from pathlib import Path

from .catalog import BUILTIN_NAMES, builtin_pair
from .exceptions import ValidationError
from .groups import validate_group
from .invariants import validate_pair
from .polynomial import Polynomial

SPEC_VERSION = 1
DEFAULTS = {"max_degree": 20, "quad_radius": 1.5, "quad_nodes": 64, "tol": 1e-6}
_SPEC_KEYS = {"version", "name", "group", "generators", "defaults"}


def parse_pair_spec(raw):
    """Strict parse of a pair spec object; returns ``(pair, defaults)``."""
    if not isinstance(raw, dict):
        raise ValidationError("pair spec must be a JSON object")
    unknown = set(raw) - _SPEC_KEYS
    if unknown:
        raise ValidationError(f"unknown keys in pair spec: {sorted(unknown)}")
    if raw.get("version") != SPEC_VERSION:
        raise ValidationError(f"pair spec needs \"version\": {SPEC_VERSION}")
    for key in ("group", "generators"):
        if key not in raw:
            raise ValidationError(f"pair spec is missing {key!r}")
    if not isinstance(raw["generators"], list):
        raise ValidationError("'generators' must be a list of polynomial specs")
    group = validate_group(raw["group"])
    gens = [Polynomial.from_json_dict(g) for g in raw["generators"]]
    defaults = dict(DEFAULTS)
    extra = raw.get("defaults", {})
    if not isinstance(extra, dict) or set(extra) - set(DEFAULTS):
        raise ValidationError(f"'defaults' may only contain {sorted(DEFAULTS)}")
    defaults.update(extra)
    name = raw.get("name", "")
    if not isinstance(name, str):
        raise ValidationError("'name' must be a string")
    return validate_pair(group, gens, name=name), defaults


def load_pair(spec):
    """A built-in name or a path to a JSON spec file."""
    if spec in BUILTIN_NAMES:
        return builtin_pair(spec), dict(DEFAULTS)
    path = Path(spec)
    if not path.is_file():
        raise ValidationError(f"{spec!r} is neither a built-in pair ({', '.join(BUILTIN_NAMES)}) nor a file")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{spec}: invalid JSON ({exc})") from exc
    return parse_pair_spec(raw)


def pair_spec_dict(pair, defaults=None):
    d = {"version": SPEC_VERSION, "name": pair.name, **pair.to_json_dict()}
    if defaults:
        d["defaults"] = dict(defaults)
    return d


def coefficient_rows(table):
    """Rows ``(kind, m, index, polynomial-spec JSON)``; b rows first, then a rows, graded-lex."""
    rows = []
    for kind, entries in (("b", table.b_table), ("a", table.a_table)):
        for key, q in entries.items():
            rows.append({"kind": kind, "m": _deg(table, kind, key), "index": list(key), "q": q.to_json_dict(), "text": str(q)})
    return rows


def _deg(table, kind, key):
    if kind == "b":
        return sum(key)
    return sum(j * d for j, d in zip(key, table.pair.degrees))


def rows_to_csv(rows, columns):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r[c]) for c in columns])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(v, separators=(",", ":"))
    if isinstance(v, float):
        return repr(v)
    return v


def dumps_json(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def atomic_write(path, text):
    """Write via a temp file in the same directory and rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def sha256_file(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_dir, command, inputs, params, files, wall_clock, version):
    """``manifest.json`` listing every artifact with its content hash."""
    out_dir = Path(out_dir)
    manifest = {
        "command": command,
        "inputs": inputs,
        "parameters": params,
        "version": version,
        "wall_clock_s": round(wall_clock, 6),
        "outputs": {Path(f).name: sha256_file(f) for f in files},
    }
    return atomic_write(out_dir / "manifest.json", dumps_json(manifest))
