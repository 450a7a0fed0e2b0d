#!/usr/bin/env python3
"""End-to-end checks of the flexcolor command line tool."""

import json
import pathlib
import subprocess
import sys
import tempfile
import unittest

import jsonschema

CLI = sys.argv.pop(1)
SOURCE = pathlib.Path(sys.argv.pop(1))
SCHEMA = json.loads((SOURCE / "schema" / "report.schema.json").read_text())


def run(*args):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True, check=False)
    return proc.returncode, proc.stdout, proc.stderr


def run_json(*args):
    code, out, err = run(*args)
    payload = out if out.strip() else err
    body = json.loads(payload)
    jsonschema.validate(body, SCHEMA)
    return code, body


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = pathlib.Path(cls.tmp.name)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def write(self, name, text):
        path = self.dir / name
        path.write_text(text)
        return str(path)

    def certificate(self, graph, library, name):
        out = str(self.dir / name)
        code, body = run_json("resolve", "--graph", graph, "--library", library, "--out", out)
        self.assertEqual(code, 0, body)
        return out

    def test_rc4_strong_fails(self):
        code, body = run_json("check-config", "--builtin", "c4-4555", "--mode", "strong")
        self.assertEqual(code, 0)
        self.assertFalse(body["strong"])
        self.assertFalse(body["reducible"])

    def test_rc4_weak_fix_set(self):
        code, body = run_json("check-config", "--builtin", "c4-4555", "--mode", "weak", "--expect", "reducible")
        self.assertEqual(code, 0)
        self.assertTrue(body["weak"])
        self.assertEqual(body["fix_set"], [2, 3, 4])

    def test_expect_mismatch_exits_1(self):
        code, body = run_json("check-config", "--builtin", "c4-4555", "--mode", "strong", "--expect", "reducible")
        self.assertEqual(code, 1)
        self.assertFalse(body["expect_met"])

    def test_low_degree_vertex_k5(self):
        code, body = run_json("check-config", "--builtin", "single-vertex-k5", "--k", "5", "--mode", "strong")
        self.assertEqual(code, 0)
        self.assertTrue(body["strong"])

    def test_config_file_matches_builtin(self):
        path = str(SOURCE / "corpus" / "configs" / "c4-4555.flexconfig")
        _, from_file = run_json("check-config", "--config", path, "--k", "5", "--family", "c4", "--mode", "weak")
        self.assertEqual(from_file["fix_set"], [2, 3, 4])
        self.assertTrue(from_file["weak"])

    def test_parse_error_exits_2(self):
        bad = self.write("bad.flexconfig", "flexconfig v1\ncore 1 deg=banana\n")
        code, body = run_json("check-config", "--config", bad, "--k", "5", "--family", "none")
        self.assertEqual(code, 2)
        self.assertEqual(body["error"], "parse")

    def test_unknown_flag_exits_2(self):
        code, _, _ = run("check-config", "--no-such-flag")
        self.assertEqual(code, 2)

    def test_infeasible_configuration_exits_3(self):
        cfg = self.write("infeasible.flexconfig", "flexconfig v1\nname tight\ncore 0 deg=6\n")
        code, body = run_json("check-config", "--config", cfg, "--k", "4", "--family", "none")
        self.assertEqual(code, 3)
        self.assertEqual(body["error"], "infeasible-configuration")

    def test_resolve_truncated_cube(self):
        code, body = run_json("resolve", "--graph", "builtin:truncated-cube", "--library", "builtin:thm4")
        self.assertEqual(code, 0)
        self.assertTrue(body["validation"]["valid"])

    def test_resolve_icosidodecahedron(self):
        code, body = run_json("resolve", "--graph", "builtin:icosidodecahedron", "--library", "builtin:thm2")
        self.assertEqual(code, 0)
        self.assertTrue(body["validation"]["valid"])

    def test_icosahedron_family_violation_exits_4(self):
        code, body = run_json("resolve", "--graph", "builtin:icosahedron", "--library", "builtin:thm2")
        self.assertEqual(code, 4)
        self.assertEqual(body["error"], "family-violation")

    def test_corrupt_certificate_exits_5(self):
        good = pathlib.Path(self.certificate("builtin:c5", "low-degree-k4", "c5.flexres")).read_text()
        mutated = self.write("c5-bad.flexres", good.replace("Q 0 ", "Q 0 1 ", 1))
        self.assertNotEqual(good, pathlib.Path(mutated).read_text())
        code, body = run_json("sample", "--graph", "builtin:c5", "--lists", "uniform:4", "--resolution", mutated)
        self.assertEqual(code, 5)
        self.assertEqual(body["error"], "corrupt-certificate")

    def test_missing_step_is_corrupt(self):
        good = pathlib.Path(self.certificate("builtin:c5", "low-degree-k4", "c5b.flexres")).read_text()
        lines = [l for l in good.splitlines() if not l.startswith("step rc1 map 0:2 ")]
        mutated = self.write("c5-short.flexres", "\n".join(lines) + "\n")
        code, _ = run_json("exact", "--graph", "builtin:c5", "--lists", "uniform:4", "--resolution", mutated)
        self.assertEqual(code, 5)

    def test_disconnected_discharge_exits_6(self):
        graph = self.write("two.flexgraph", "flexgraph v1\nv 0: 1\nv 1: 0\nv 2: 3\nv 3: 2\n")
        code, body = run_json("discharge", "--graph", graph, "--spec", "builtin:thm2")
        self.assertEqual(code, 6)
        self.assertEqual(body["error"], "disconnected")

    def test_oracle_size_guard_exits_7(self):
        code, body = run_json("oracle", "--graph", "builtin:icosidodecahedron", "--lists", "uniform:4")
        self.assertEqual(code, 7)
        self.assertEqual(body["error"], "size-guard")

    def test_budget_exceeded_exits_8(self):
        cert = self.certificate("builtin:c5", "low-degree-k4", "c5c.flexres")
        code, body = run_json("exact", "--graph", "builtin:c5", "--lists", "uniform:4", "--resolution", cert,
                              "--budget", "3")
        self.assertEqual(code, 8)
        self.assertEqual(body["error"], "budget-exceeded")

    def test_exact_single_vertex(self):
        graph = self.write("one.flexgraph", "flexgraph v1\nv 0:\n")
        cert = self.certificate(graph, "low-degree-k3", "one.flexres")
        code, body = run_json("exact", "--graph", graph, "--lists", "uniform:3", "--resolution", cert)
        self.assertEqual(code, 0)
        self.assertEqual(body["marginals"], {"0": {"1": "1/3", "2": "1/3", "3": "1/3"}})
        self.assertEqual(body["total"], "1/1")
        self.assertTrue(body["bounds"]["ok"])

    def test_marginals_rows_sum_to_one(self):
        cert = self.certificate("builtin:c5", "low-degree-k4", "c5d.flexres")
        code, body = run_json("marginals", "--graph", "builtin:c5", "--lists", "uniform:4", "--resolution", cert,
                              "--samples", "500", "--seed", "11")
        self.assertEqual(code, 0)
        self.assertTrue(body["rows_sum_to_one"])
        for row in body["marginals"].values():
            total = sum(int(q.split("/")[0]) / int(q.split("/")[1]) for q in row.values())
            self.assertAlmostEqual(total, 1.0)

    def test_sample_is_deterministic(self):
        cert = self.certificate("builtin:truncated-cube", "builtin:thm4", "tc.flexres")
        args = ("sample", "--graph", "builtin:truncated-cube", "--lists", "uniform:4", "--resolution", cert,
                "--samples", "20", "--seed", "42")
        first, second = run(*args), run(*args)
        self.assertEqual(first[0], 0)
        self.assertEqual(first[1], second[1])
        body = json.loads(first[1])
        jsonschema.validate(body, SCHEMA)
        self.assertTrue(body["all_proper"])
        other = run(*args[:-1], "43")
        self.assertNotEqual(first[1], other[1])

    def test_discharge_c5(self):
        code, body = run_json("discharge", "--graph", "builtin:c5", "--spec", "builtin:thm2")
        self.assertEqual(code, 0)
        self.assertEqual(body["initial_total"], "-8/1")
        self.assertEqual(body["final_total"], "-8/1")
        self.assertEqual(body["audit"], ["v0", "v1", "v2", "v3", "v4"])

    def test_discharge_dodecahedron(self):
        code, body = run_json("discharge", "--graph", "builtin:dodecahedron", "--spec", "builtin:thm3")
        self.assertEqual(code, 0)
        self.assertEqual(body["initial_total"], "-4/1")
        self.assertTrue(body["euler_ok"])
        self.assertTrue(body["conserved"])
        self.assertEqual(body["phases"][0]["phase"], "initial")
        self.assertEqual(body["phases"][-1]["phase"], "final")

    def test_discharge_spec_file(self):
        spec = str(SOURCE / "corpus" / "specs" / "thm4.flexcharge")
        _, from_file = run_json("discharge", "--graph", "builtin:truncated-cube", "--spec", spec)
        _, builtin = run_json("discharge", "--graph", "builtin:truncated-cube", "--spec", "builtin:thm4")
        self.assertEqual(from_file["phases"], builtin["phases"])

    def test_oracle_examples(self):
        tri = self.write("tri.flexgraph", "flexgraph v1\nv 0: 1 2\nv 1: 2 0\nv 2: 0 1\n")
        lists = self.write("tri.flexlists", "flexlists v1\nL 0: 1 2 3\nL 1: 1 2 3\nL 2: 1 2 3\nR 0 1\nR 1 1\nR 2 1\n")
        code, body = run_json("oracle", "--graph", tri, "--lists", lists)
        self.assertEqual(code, 0)
        self.assertEqual(body["score"], "1/3")
        self.assertEqual(body["kind"], "widespread")

        one = self.write("v.flexgraph", "flexgraph v1\nv 0:\n")
        lists = self.write("v.flexlists", "flexlists v1\nL 0: 1 2\nR 0 2\n")
        code, body = run_json("oracle", "--graph", one, "--lists", lists)
        self.assertEqual((code, body["score"], body["best"]), (0, "1/1", {"0": 2}))

        edge = self.write("e.flexgraph", "flexgraph v1\nv 0: 1\nv 1: 0\n")
        lists = self.write("e.flexlists", "flexlists v1\nL 0: 1 2\nL 1: 1 2\nW 0 1 1/1\nW 1 1 1/1\n")
        code, body = run_json("oracle", "--graph", edge, "--lists", lists)
        self.assertEqual((code, body["kind"], body["score"]), (0, "weighted", "1/2"))

    def test_info_and_corpus_listing(self):
        code, body = run_json("info", "--graph", "builtin:dodecahedron")
        self.assertEqual((code, body["degeneracy"], body["plane_embedding"]), (0, 3, True))
        code, body = run_json("corpus", "list")
        self.assertEqual(code, 0)
        shipped = json.loads((SOURCE / "corpus" / "index.json").read_text())
        self.assertEqual(body, shipped)

    def test_corpus_export_matches_shipped(self):
        target = self.dir / "export"
        code, body = run_json("corpus", "export", "--dir", str(target))
        self.assertEqual(code, 0)
        shipped = SOURCE / "corpus"
        names = sorted(p.relative_to(shipped) for p in shipped.rglob("*") if p.is_file())
        self.assertEqual(names, sorted(p.relative_to(target) for p in target.rglob("*") if p.is_file()))
        for name in names:
            self.assertEqual((shipped / name).read_bytes(), (target / name).read_bytes(), str(name))

    def test_text_format(self):
        code, out, _ = run("--format", "text", "info", "--graph", "builtin:c5")
        self.assertEqual(code, 0)
        self.assertIn("degeneracy: 2\n", out)


if __name__ == "__main__":
    unittest.main(verbosity=2)
