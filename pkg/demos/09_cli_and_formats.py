"""The command-line pipeline and its on-disk formats, end to end.

Every experiment is also reachable as a `blochlab` subcommand that reads a
configuration, caches tables under content-addressed keys, and writes a
checksummed JSON report plus CSV artifacts.  The serialization layer is
deliberately strict: canonical float formatting so reruns are byte
identical, big integers switching to hex past 1024 bits, and checksums
that turn silent corruption into loud errors.  This demo drives the same
handlers in process.
"""

import tempfile
from pathlib import Path

from blochlab.cli import run
from blochlab.io import (
    ChecksumError,
    dump_canonical,
    encode_big_int,
    read_payload,
    table_id,
    write_payload,
)
from blochlab.tables import build_exponent_table


def main() -> None:
    work = Path(tempfile.mkdtemp(prefix="blochlab-demo-"))
    cache = work / "cache"
    out = work / "out"

    print("canonical JSON keeps reruns byte-identical:")
    print("  ", dump_canonical({"c": 2.31, "grid": [0.1, 1 / 3], "ok": True}))
    print("  big exponent, decimal vs hex past 1024 bits:")
    print("    2^100  ->", str(encode_big_int(1 << 100))[:40])
    print("    2^1024 ->", str(encode_big_int(1 << 1024))[:46], "...")

    payload = run("build-seq", {
        "table": "triangle", "depth": 8, "cache_dir": str(cache),
        "out": str(out),
    })
    res = payload["results"]
    print()
    print(f"build-seq: cached table {res['table_key']!r} "
          f"({res['entries']} entries, deepest ~2^{res['deepest_entry_bits']})")

    payload = run("verify-seq", {
        "table": "triangle", "depth": 8, "cache_dir": str(cache),
        "out": str(out), "no_build": True,
    })
    res = payload["results"]
    print(f"verify-seq: passed = {payload['passed']}, "
          f"{res['checked_pairs']} pairs re-checked from cache, "
          f"u-limit error {res['u_limit']['final_error']:.2e}")

    payload = run("lemma35", {"s_list": [10, 50, 200], "out": str(out)})
    rows = ", ".join(f"{row['ratio']:.4f}" for row in payload["results"]["rows"])
    print(f"lemma35: energy ratios {rows} -> passed = {payload['passed']}")

    payload = run("report", {"out": str(out)})
    print(f"report: {len(payload['results']['runs'])} runs aggregated, "
          f"overall passed = {payload['passed']}")
    print("  artifacts:", ", ".join(sorted(p.name for p in out.iterdir())))

    # Tamper with a cached table body and watch the checksum object.
    table = build_exponent_table(8)
    key = table_id(table)
    path = cache / f"{key}.json"
    text = path.read_text()
    path.write_text(text.replace("35786816", "35786817"))
    print()
    print("flipping one digit inside the cached table file:")
    try:
        read_payload(path)
    except ChecksumError as exc:
        print("  ChecksumError:", str(exc)[:72], "...")

    # write_payload recomputes the checksum, read_payload verifies it.
    write_payload(path, {"schema": 1, "kind": "demo", "note": "fresh payload"})
    print("  rewritten payload reads back:", read_payload(path)["note"])


if __name__ == "__main__":
    main()
