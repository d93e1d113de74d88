"""Deterministic JSON persistence for tables, series, and run reports.

Artifacts are emitted through a canonical serializer: dictionary keys keep
insertion order, floats are rendered at 17 significant digits (enough to
round-trip a double exactly), and non-finite values are rejected.  Identical
in-memory payloads therefore produce byte-identical files, which is what
makes cached reports comparable across runs.

Every file is wrapped as ``{"checksum": <sha256 of body>, "body": ...}`` and
written atomically (temporary file + ``os.replace``), so a reader never sees
a torn or silently corrupted document.

Integers wider than 1024 bits are stored as ``{"hex": ...}`` rather than
decimal strings: hexadecimal conversion is linear in the operand size and is
exempt from the CPython limit on int/str conversion that a 75000-digit
decimal literal would trip.
"""

from __future__ import annotations

import hashlib
import io as _io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Sequence

from .series import BigExponent, RadiusSpec, SparseSeries, as_exponent
from .tables import BlockTable, ExponentTable

__all__ = [
    "SCHEMA_VERSION",
    "CacheError",
    "CacheMissError",
    "ChecksumError",
    "SchemaError",
    "format_float",
    "dump_canonical",
    "encode_big_int",
    "decode_big_int",
    "encode_exponent",
    "decode_exponent",
    "encode_radius",
    "decode_radius",
    "encode_series",
    "decode_series",
    "encode_exponent_table",
    "decode_exponent_table",
    "encode_block_table",
    "decode_block_table",
    "write_payload",
    "read_payload",
    "atomic_write_text",
    "atomic_write_bytes",
    "write_csv",
    "exponent_table_id",
    "block_table_id",
    "table_id",
    "cache_table",
    "load_table",
]

SCHEMA_VERSION = 1

#: Widest integer serialized as a plain decimal string; beyond this the
#: ``{"hex": ...}`` form is used.
_DECIMAL_BIT_LIMIT = 1024


class CacheError(Exception):
    """Base class for persistence failures."""


class CacheMissError(CacheError):
    """Requested artifact is not present in the cache directory."""


class ChecksumError(CacheError):
    """Stored body does not match its recorded sha256 digest."""


class SchemaError(CacheError):
    """Document has an unexpected schema version or kind."""


# ---------------------------------------------------------------------------
# canonical emitter


def format_float(x: float) -> str:
    """Fixed 17-significant-digit rendering; rejects NaN and infinities."""
    if not math.isfinite(x):
        raise ValueError(f"non-finite float {x!r} cannot be serialized")
    return "%.17g" % x


def dump_canonical(obj: Any) -> str:
    """Serialize ``obj`` to canonical JSON text.

    Dicts keep insertion order, floats go through :func:`format_float`, and
    integers wider than the decimal limit are rejected so callers route them
    through :func:`encode_big_int` first.
    """
    parts: list[str] = []
    _emit(obj, parts)
    return "".join(parts)


def _emit(obj: Any, parts: list[str]) -> None:
    if obj is None:
        parts.append("null")
    elif obj is True:
        parts.append("true")
    elif obj is False:
        parts.append("false")
    elif isinstance(obj, int):
        if obj.bit_length() > _DECIMAL_BIT_LIMIT:
            raise ValueError(
                "integer too wide for a decimal token; encode it with "
                "encode_big_int before dumping"
            )
        parts.append(str(obj))
    elif isinstance(obj, float):
        parts.append(format_float(obj))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, dict):
        parts.append("{")
        first = True
        for key, value in obj.items():
            if not isinstance(key, str):
                raise ValueError(f"JSON object keys must be str, got {key!r}")
            if not first:
                parts.append(",")
            first = False
            parts.append(json.dumps(key))
            parts.append(":")
            _emit(value, parts)
        parts.append("}")
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for pos, value in enumerate(obj):
            if pos:
                parts.append(",")
            _emit(value, parts)
        parts.append("]")
    else:
        raise ValueError(f"cannot serialize object of type {type(obj).__name__}")


# ---------------------------------------------------------------------------
# scalar codecs


def encode_big_int(v: int) -> str | dict:
    """Nonnegative integer as a decimal string, or ``{"hex": ...}`` if wide."""
    if v < 0:
        raise ValueError("only nonnegative integers are stored")
    if v.bit_length() > _DECIMAL_BIT_LIMIT:
        return {"hex": "%x" % v}
    return str(v)


def decode_big_int(obj) -> int:
    if isinstance(obj, bool):
        raise SchemaError(f"expected integer encoding, got {obj!r}")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str):
        return int(obj, 10)
    if isinstance(obj, dict) and set(obj) == {"hex"}:
        return int(obj["hex"], 16)
    raise SchemaError(f"expected integer encoding, got {obj!r}")


def encode_exponent(e) -> str | dict:
    """``{"pow3": m}`` for tagged power-of-three exponents, else an integer."""
    e = as_exponent(e)
    if e.is_pow3:
        return {"pow3": e.pow3_tag}
    return encode_big_int(e.value())


def decode_exponent(obj) -> BigExponent:
    if isinstance(obj, dict) and set(obj) == {"pow3"}:
        return BigExponent(pow3=int(obj["pow3"]))
    return BigExponent(value=decode_big_int(obj))


def encode_radius(radius: RadiusSpec) -> dict:
    if radius.kind == "sqrt_complement":
        return {"kind": "sqrt_complement", "n": radius.n}
    if radius.kind == "one_minus_pow3":
        return {"kind": "one_minus_pow3", "k": radius.k}
    return {"kind": "plain", "r": float(radius.r)}


def decode_radius(obj: dict) -> RadiusSpec:
    kind = obj.get("kind")
    if kind == "sqrt_complement":
        return RadiusSpec.sqrt_complement(int(obj["n"]))
    if kind == "one_minus_pow3":
        return RadiusSpec.one_minus_pow3(int(obj["k"]))
    if kind == "plain":
        return RadiusSpec.plain(float(obj["r"]))
    raise SchemaError(f"unknown radius kind {kind!r}")


def _encode_complex(c: complex) -> list:
    return [float(c.real), float(c.imag)]


def _decode_complex(obj) -> complex:
    return complex(float(obj[0]), float(obj[1]))


# ---------------------------------------------------------------------------
# payload builders


def encode_series(f: SparseSeries) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "series",
        "constant": _encode_complex(f.constant),
        "membership_hint": f.membership_hint,
        "terms": [
            {"coeff": _encode_complex(c), "exponent": encode_exponent(e)}
            for c, e in f.terms()
        ],
    }


def decode_series(payload: dict) -> SparseSeries:
    _expect_kind(payload, "series")
    terms = payload["terms"]
    return SparseSeries(
        _decode_complex(payload["constant"]),
        [_decode_complex(t["coeff"]) for t in terms],
        [decode_exponent(t["exponent"]) for t in terms],
        membership_hint=payload["membership_hint"],
    )


def encode_exponent_table(table: ExponentTable) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "exponent_table",
        "seed_start": table.seed_start,
        "max_columns": table.max_columns,
        "rows": [[encode_big_int(s) for s in row] for row in table.rows],
        "build_log": [dict(entry) for entry in table.build_log],
    }


def decode_exponent_table(payload: dict) -> ExponentTable:
    _expect_kind(payload, "exponent_table")
    return ExponentTable(
        rows=tuple(tuple(decode_big_int(s) for s in row) for row in payload["rows"]),
        max_columns=payload["max_columns"],
        seed_start=payload["seed_start"],
        build_log=tuple(payload["build_log"]),
    )


def _encode_measure_report(report: dict) -> dict:
    out = dict(report)
    if "s" in out:
        out["s"] = encode_big_int(out["s"])
    return out


def _decode_measure_report(obj: dict) -> dict:
    out = dict(obj)
    if "s" in out:
        out["s"] = decode_big_int(out["s"])
    for field in ("measure", "sigma", "target"):
        if field in out and out[field] is not None:
            out[field] = float(out[field])
    return out


def encode_block_table(table: BlockTable) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "block_table",
        "j_max": table.j_max,
        "profile_name": table.profile_name,
        "c_hat": table.c_hat,
        "mc_samples": table.mc_samples,
        "rng_seed": table.rng_seed,
        "entries": [
            {"i": i, "j": j, "s": encode_big_int(s)}
            for (i, j), s in table.entries.items()
        ],
        "measure_reports": [
            _encode_measure_report(rep) for rep in table.measure_reports.values()
        ],
        "build_log": [dict(entry) for entry in table.build_log],
    }


def decode_block_table(payload: dict) -> BlockTable:
    _expect_kind(payload, "block_table")
    entries = {
        (e["i"], e["j"]): decode_big_int(e["s"]) for e in payload["entries"]
    }
    reports = {}
    for obj in payload["measure_reports"]:
        rep = _decode_measure_report(obj)
        reports[(rep["i"], rep["j"])] = rep
    return BlockTable(
        j_max=payload["j_max"],
        profile_name=payload["profile_name"],
        c_hat=float(payload["c_hat"]),
        entries=entries,
        measure_reports=reports,
        mc_samples=payload["mc_samples"],
        rng_seed=payload["rng_seed"],
        build_log=tuple(payload["build_log"]),
    )


def _expect_kind(payload: dict, kind: str) -> None:
    got = payload.get("kind")
    if got != kind:
        raise SchemaError(f"expected document kind {kind!r}, got {got!r}")


# ---------------------------------------------------------------------------
# checksummed documents and atomic writes

_PREFIX = '{"checksum":"'
_MID = '","body":'


def write_payload(path, payload: dict) -> str:
    """Write ``payload`` wrapped with its sha256 digest; returns the digest."""
    body = dump_canonical(payload)
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    atomic_write_text(path, f"{_PREFIX}{digest}{_MID}{body}}}")
    return digest


def read_payload(path, expect_kind: str | None = None) -> dict:
    """Load a checksummed document, validating digest and schema first.

    Raises :class:`CacheMissError` if the file does not exist,
    :class:`ChecksumError` on a malformed wrapper or digest mismatch, and
    :class:`SchemaError` on a version or kind mismatch.  Nothing is returned
    unless every check passes.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise CacheMissError(f"no cached document at {path}") from None
    head = len(_PREFIX)
    if (
        not text.startswith(_PREFIX)
        or text[head + 64 : head + 64 + len(_MID)] != _MID
        or not text.endswith("}")
    ):
        raise ChecksumError(f"malformed document wrapper in {path}")
    digest = text[head : head + 64]
    body_text = text[head + 64 + len(_MID) : -1]
    actual = hashlib.sha256(body_text.encode("utf-8")).hexdigest()
    if actual != digest:
        raise ChecksumError(
            f"checksum mismatch in {path}: recorded {digest[:12]}..., "
            f"recomputed {actual[:12]}..."
        )
    payload = json.loads(body_text)
    if payload.get("schema") != SCHEMA_VERSION:
        raise SchemaError(
            f"schema version {payload.get('schema')!r} in {path}; "
            f"this build reads version {SCHEMA_VERSION}"
        )
    if expect_kind is not None:
        _expect_kind(payload, expect_kind)
    return payload


def atomic_write_text(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def atomic_write_bytes(path, data: bytes) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_csv(path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    """Write a CSV table with canonical float formatting, atomically."""
    import csv

    buffer = _io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([_csv_cell(cell) for cell in row])
    atomic_write_text(path, buffer.getvalue())


def _csv_cell(cell) -> str:
    if isinstance(cell, bool):
        return "true" if cell else "false"
    if isinstance(cell, float):
        return format_float(cell)
    if isinstance(cell, int):
        return str(cell)
    if cell is None:
        return ""
    return str(cell)


# ---------------------------------------------------------------------------
# table cache


def exponent_table_id(n_max: int, seed_start: int = 2, max_columns: int | None = None) -> str:
    cols = "all" if max_columns is None else str(max_columns)
    return f"exptable-n{n_max}-seed{seed_start}-cols{cols}"


def block_table_id(
    j_max: int,
    profile_name: str,
    c_hat: float,
    mc_samples: int,
    rng_seed: int,
) -> str:
    return (
        f"blocktable-j{j_max}-{profile_name}-c{c_hat:.6g}"
        f"-m{mc_samples}-r{rng_seed}"
    )


def table_id(table) -> str:
    """Cache key for a table; distinct parameters, profiles, and seeds never
    share a key."""
    if isinstance(table, ExponentTable):
        return exponent_table_id(table.n_max, table.seed_start, table.max_columns)
    if isinstance(table, BlockTable):
        return block_table_id(
            table.j_max,
            table.profile_name,
            table.c_hat,
            table.mc_samples,
            table.rng_seed,
        )
    raise TypeError(f"not a cacheable table: {type(table).__name__}")


def cache_table(table, cache_dir) -> Path:
    """Serialize ``table`` into ``cache_dir`` and return the file path."""
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"{table_id(table)}.json"
    if isinstance(table, ExponentTable):
        write_payload(path, encode_exponent_table(table))
    else:
        write_payload(path, encode_block_table(table))
    return path


def load_table(cache_dir, table_key: str):
    """Load a cached table by key, returning the reconstructed table object."""
    path = Path(cache_dir) / f"{table_key}.json"
    payload = read_payload(path)
    kind = payload.get("kind")
    if kind == "exponent_table":
        return decode_exponent_table(payload)
    if kind == "block_table":
        return decode_block_table(payload)
    raise SchemaError(f"document at {path} is not a table (kind={kind!r})")
