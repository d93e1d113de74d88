"""Canonical serialization, cached tables, and the command-line pipeline."""

from __future__ import annotations

import hashlib
import json
import math

import pytest

from blochlab import cli, io
from blochlab.series import BigExponent, RadiusSpec, SparseSeries
from blochlab.tables import ConstantProfile, build_block_table, build_exponent_table


class TestCanonicalJson:
    def test_float_format(self):
        assert io.format_float(0.1) == "0.10000000000000001"
        assert io.format_float(1.0) == "1"
        with pytest.raises(ValueError):
            io.format_float(math.inf)
        with pytest.raises(ValueError):
            io.format_float(math.nan)

    def test_insertion_order_and_scalars(self):
        text = io.dump_canonical({"b": 1, "a": [True, 1.5, None, "x"]})
        assert text == '{"b":1,"a":[true,1.5,null,"x"]}'
        assert json.loads(text) == {"b": 1, "a": [True, 1.5, None, "x"]}

    def test_rejects_non_string_keys(self):
        with pytest.raises(ValueError, match="keys must be str"):
            io.dump_canonical({1: 2})

    def test_rejects_oversized_integers(self):
        with pytest.raises(ValueError, match="encode_big_int"):
            io.dump_canonical({"x": 1 << 1025})


class TestBigIntCodec:
    def test_threshold(self):
        small = (1 << 1024) - 1  # exactly 1024 bits: still a decimal token
        assert isinstance(io.encode_big_int(small), str)
        wide = 1 << 1024  # 1025 bits: switches to hex
        enc = io.encode_big_int(wide)
        assert set(enc) == {"hex"}

    @pytest.mark.parametrize("v", [0, 5, 10**40, (1 << 1024) - 1, 1 << 1024, 3**3000])
    def test_round_trip(self, v):
        assert io.decode_big_int(io.encode_big_int(v)) == v

    def test_decode_forms(self):
        assert io.decode_big_int("12") == 12
        assert io.decode_big_int({"hex": "10"}) == 16


class TestStructureCodecs:
    def test_exponent_round_trip(self):
        plain = BigExponent(value=123)
        tower = BigExponent(pow3=500)
        for e in (plain, tower):
            back = io.decode_exponent(io.encode_exponent(e))
            assert back.is_pow3 == e.is_pow3
            assert back.value() == e.value()

    def test_radius_round_trip(self):
        radii = [
            RadiusSpec.sqrt_complement(10**6),
            RadiusSpec.one_minus_pow3(872),
            RadiusSpec.plain(0.875),
        ]
        for r in radii:
            assert io.decode_radius(io.encode_radius(r)) == r
        with pytest.raises(io.SchemaError):
            io.decode_radius({"kind": "mystery"})

    def test_series_round_trip(self):
        f = SparseSeries(
            1 + 2j,
            [0.5, 1 - 1j],
            [BigExponent(value=7), BigExponent(pow3=300)],
            membership_hint="little_bloch",
        )
        back = io.decode_series(io.encode_series(f))
        assert back.constant == f.constant
        assert back.membership_hint == "little_bloch"
        assert [(c, e.value()) for c, e in back.terms()] == [
            (c, e.value()) for c, e in f.terms()
        ]

    def test_exponent_table_round_trip(self):
        t = build_exponent_table(4)
        enc = io.encode_exponent_table(t)
        assert io.decode_exponent_table(enc) == t
        cols = build_exponent_table(5, max_columns=1)
        assert io.decode_exponent_table(io.encode_exponent_table(cols)) == cols

    def test_block_table_round_trip(self):
        t = build_block_table(2, ConstantProfile.relaxed(), 2.31)
        back = io.decode_block_table(io.encode_block_table(t))
        assert back == t


class TestPayloadFiles:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "x.json"
        payload = {"schema": 1, "kind": "run_report", "v": [1, 2.5, "s"]}
        io.write_payload(path, payload)
        assert io.read_payload(path) == payload
        assert io.read_payload(path, expect_kind="run_report") == payload

    def test_missing_file(self, tmp_path):
        with pytest.raises(io.CacheMissError):
            io.read_payload(tmp_path / "absent.json")

    def test_tampered_body(self, tmp_path):
        path = tmp_path / "x.json"
        io.write_payload(path, {"schema": 1, "kind": "run_report", "v": 2})
        raw = path.read_bytes()
        (tmp_path / "bad.json").write_bytes(raw.replace(b'"v":2', b'"v":3'))
        with pytest.raises(io.ChecksumError):
            io.read_payload(tmp_path / "bad.json")

    def test_wrong_schema_version(self, tmp_path):
        body = io.dump_canonical({"schema": 9, "kind": "run_report"})
        digest = hashlib.sha256(body.encode()).hexdigest()
        (tmp_path / "v9.json").write_text(
            '{"checksum":"%s","body":%s}' % (digest, body)
        )
        with pytest.raises(io.SchemaError):
            io.read_payload(tmp_path / "v9.json")

    def test_wrong_kind(self, tmp_path):
        path = tmp_path / "x.json"
        io.write_payload(path, {"schema": 1, "kind": "run_report"})
        with pytest.raises(io.SchemaError):
            io.read_payload(path, expect_kind="exponent_table")

    def test_atomic_writes_leave_no_droppings(self, tmp_path):
        target = tmp_path / "data.txt"
        io.atomic_write_text(target, "first")
        io.atomic_write_text(target, "second")
        assert target.read_text() == "second"
        assert [p.name for p in tmp_path.iterdir()] == ["data.txt"]

    def test_csv_cells_are_canonical(self, tmp_path):
        path = tmp_path / "t.csv"
        io.write_csv(path, ["a", "b"], [[1, 0.1], [True, "x"]])
        assert path.read_text() == "a,b\n1,0.10000000000000001\ntrue,x\n"


class TestTableCache:
    def test_identifiers(self):
        assert io.exponent_table_id(12) == "exptable-n12-seed2-colsall"
        assert io.exponent_table_id(5, max_columns=1) == "exptable-n5-seed2-cols1"
        assert (
            io.block_table_id(4, "relaxed", 2.31, 1 << 17, 0)
            == "blocktable-j4-relaxed-c2.31-m131072-r0"
        )

    def test_cache_round_trip(self, tmp_path):
        t = build_exponent_table(4)
        path = io.cache_table(t, tmp_path)
        assert path.exists()
        assert io.table_id(t) in path.name
        assert io.load_table(tmp_path, io.table_id(t)) == t

    def test_block_cache_round_trip(self, tmp_path):
        t = build_block_table(1, ConstantProfile.literal(), 2.31)
        io.cache_table(t, tmp_path)
        assert io.load_table(tmp_path, io.table_id(t)) == t

    def test_cache_miss(self, tmp_path):
        with pytest.raises(io.CacheMissError):
            io.load_table(tmp_path, "exptable-n9-seed2-colsall")


@pytest.fixture(scope="module")
def cli_dirs(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    return root / "cache", root / "out"


class TestCommandLine:
    def test_build_then_verify_cached(self, cli_dirs):
        cache, out = cli_dirs
        argv = ["--cache-dir", str(cache), "--out", str(out)]
        assert cli.main(["build-seq", "--table", "triangle", "--depth", "6", *argv]) == 0
        code = cli.main(
            ["verify-seq", "--table", "triangle", "--depth", "6", "--no-build", *argv]
        )
        assert code == 0
        payload = io.read_payload(out / "verify-seq-report.json")
        assert payload["passed"] is True
        assert payload["results"]["u_limit"]["passed"] is True
        assert payload["results"]["u_limit"]["final_error"] < 1e-5
        assert (out / "useries.csv").exists()

    def test_verify_without_cache_is_a_usage_error(self, tmp_path):
        code = cli.main(
            [
                "verify-seq", "--table", "triangle", "--depth", "9", "--no-build",
                "--cache-dir", str(tmp_path / "empty"), "--out", str(tmp_path / "o"),
            ]
        )
        assert code == 2

    def test_informational_failure_still_exits_zero(self, cli_dirs):
        cache, out = cli_dirs
        code = cli.main(
            [
                "sz-test", "--s-list", "1", "--samples", "4096",
                "--cache-dir", str(cache), "--out", str(out),
            ]
        )
        assert code == 0
        payload = io.read_payload(out / "sz-test-report.json")
        assert payload["informational"] is True
        assert payload["passed"] is False  # a two-term block is far from the limit
        assert (out / "sz_distance.csv").exists()

    def test_reports_are_byte_identical(self, cli_dirs, tmp_path):
        cache, _ = cli_dirs
        outs = [tmp_path / "a", tmp_path / "b"]
        for out in outs:
            cli.run(
                "sz-test",
                {"cache_dir": str(cache), "out": str(out), "s_list": [5], "samples": 1 << 12},
            )
        a = (outs[0] / "sz-test-report.json").read_bytes()
        b = (outs[1] / "sz-test-report.json").read_bytes()
        assert a == b
        assert (outs[0] / "sz_distance.csv").read_bytes() == (
            outs[1] / "sz_distance.csv"
        ).read_bytes()

    def test_separation_vacuous_base_point(self, cli_dirs):
        cache, out = cli_dirs
        payload = cli.run(
            "separation",
            {
                "cache_dir": str(cache),
                "out": str(out),
                "family": "table",
                "depth": 6,
                "count": 2,
                "rows": [6],
                "polynomials": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0]]],
                "samples": 1 << 10,
            },
        )
        assert payload["passed"] is True
        assert payload["results"]["vacuous_trials"] == 1
        assert payload["results"]["rows"][0]["ratio"] is None
        assert payload["results"]["min_ratio"] is None

    def test_unreachable_threshold_fails(self, cli_dirs, tmp_path):
        # Separate output directory: the aggregation test expects the shared
        # one to stay green, and this run is built to fail.
        cache, _ = cli_dirs
        code = cli.main(
            [
                "separation", "--family", "table", "--depth", "6", "--count", "2",
                "--rows", "6", "--trials", "1", "--threshold", "1e9",
                "--samples", "1024", "--cache-dir", str(cache), "--out", str(tmp_path),
            ]
        )
        assert code == 1
        payload = io.read_payload(tmp_path / "separation-report.json")
        assert payload["passed"] is False

    def test_unknown_config_key(self, cli_dirs, tmp_path):
        cache, out = cli_dirs
        with pytest.raises(cli.UsageError, match="bogus"):
            cli.run("lemma35", {"cache_dir": str(cache), "out": str(out), "bogus": 1})
        config = tmp_path / "bad.json"
        config.write_text('{"bogus": 1}')
        code = cli.main(
            ["lemma35", "--config", str(config), "--cache-dir", str(cache), "--out", str(out)]
        )
        assert code == 2
        with pytest.raises(cli.UsageError):
            cli.run("no-such-command", {})

    def test_energy_window_run(self, cli_dirs):
        cache, out = cli_dirs
        payload = cli.run(
            "lemma35", {"cache_dir": str(cache), "out": str(out), "s_list": [10, 50]}
        )
        assert payload["passed"] is True
        for row in payload["results"]["rows"]:
            assert 0.128 <= row["ratio"] <= 1.05

    def test_tail_constant_run(self, cli_dirs):
        cache, out = cli_dirs
        payload = cli.run(
            "estimate-c",
            {
                "cache_dir": str(cache),
                "out": str(out),
                "s_list": [50, 60],
                "tail_s": 50,
                "samples": 1 << 12,
            },
        )
        assert payload["passed"] is True
        results = payload["results"]
        assert results["in_window"] and results["stable"]
        assert all(row["passed"] for row in results["tail_checks"])

    def test_growth_run(self, cli_dirs):
        cache, out = cli_dirs
        payload = cli.run(
            "makarov-test",
            {
                "cache_dir": str(cache),
                "out": str(out),
                "families": "table",
                "depth": 6,
                "i_set": [1],
                "corpus_count": 3,
                "radii_count": 8,
                "samples": 1 << 10,
            },
        )
        assert payload["passed"] is True
        assert payload["results"]["growth"]["rows"][0]["violations"] == 0
        assert payload["results"]["exponential"]["passed"] is True

    def test_bootstrap_run_from_cache(self, cli_dirs, relaxed_block):
        cache, out = cli_dirs
        io.cache_table(relaxed_block, cache)
        payload = cli.run(
            "bootstrap",
            {"cache_dir": str(cache), "out": str(out), "no_build": True},
        )
        assert payload["passed"] is True

    def test_report_aggregation(self, cli_dirs):
        cache, out = cli_dirs
        payload = cli.run("report", {"cache_dir": str(cache), "out": str(out)})
        assert payload["passed"] is True  # informational failures do not count
        runs = payload["results"]["runs"]
        assert any(r["command"] == "sz-test" for r in runs)
        assert all(r["command"] != "report" for r in runs)
        assert (out / "summary.csv").exists()
