"""End-to-end checks of the herglotz command line tool.

usage: cli_test.py HERGLOTZ EXPORT_BUNDLES SOURCE_DIR
"""

import csv
import filecmp
import json
import math
import pathlib
import re
import subprocess
import sys
import tempfile
import unittest

import jsonschema

HERGLOTZ = EXPORT = SOURCE = None


def run(*args, cwd=None):
    return subprocess.run([str(HERGLOTZ), *map(str, args)], capture_output=True, text=True, cwd=cwd)


class Cli(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = pathlib.Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def config(self, doc, name="config.json"):
        path = self.tmp / name
        path.write_text(json.dumps(doc))
        return path

    def bundle_config(self, name):
        return json.loads((SOURCE / "problems" / name / "config.json").read_text())

    def test_paper_example(self):
        r = run("paper-example", "--n", 2000, "--out", self.tmp / "out")
        self.assertEqual(r.returncode, 0, r.stdout + r.stderr)
        self.assertIn("z(2)=4.670774", r.stdout)
        self.assertRegex(r.stdout, r"Q1 on \[a,b-tau\]: mean=1 drift=\S+ tol=\S+ PASS")
        self.assertRegex(r.stdout, r"Q2 on \[b-tau,b\]: mean=0\.632120558\d* drift=")
        report = json.loads((self.tmp / "out" / "paper_example.json").read_text())
        self.assertEqual(report["n"], 2000)
        self.assertLess(abs(report["z_b"] - (math.e**2 - math.e)), 1e-8)
        for name in ("zpath.csv", "trajectory.csv", "conservation.csv"):
            self.assertTrue((self.tmp / "out" / name).exists(), name)

    def test_syntax_error(self):
        doc = self.bundle_config("paper-s4")
        doc["lagrangian"] = "dxtau^2 +"
        r = run("integrate", self.config(doc), "--out", self.tmp / "out")
        self.assertEqual(r.returncode, 2)
        self.assertIn("lagrangian", r.stderr)
        self.assertIn("offset 9", r.stderr)

    def test_configuration_errors(self):
        self.assertEqual(run("frobnicate", "--bundle", "paper-s4").returncode, 2)
        self.assertEqual(run("integrate").returncode, 2)
        self.assertEqual(run("integrate", self.tmp / "missing.json").returncode, 2)
        self.assertEqual(run("integrate", "--bundle", "no-such-bundle").returncode, 2)
        (self.tmp / "broken.json").write_text("{")
        self.assertEqual(run("integrate", self.tmp / "broken.json").returncode, 2)
        doc = self.bundle_config("paper-s4")
        doc["n"] = 2001
        self.assertEqual(run("integrate", self.config(doc)).returncode, 2)
        doc = self.bundle_config("delay-z-free")
        r = run("invariance", self.config(doc), "--out", self.tmp / "out")
        self.assertEqual(r.returncode, 2)
        self.assertIn("group", r.stderr)

    def test_numerical_failure(self):
        doc = self.bundle_config("classical-line")
        doc["lagrangian"] = "log(x - 5)"
        r = run("integrate", self.config(doc), "--out", self.tmp / "out")
        self.assertEqual(r.returncode, 3, r.stderr)

    def test_check_el_nonextremal(self):
        cfg = SOURCE / "problems" / "paper-s4-nonextremal" / "config.json"
        r = run("check-el", cfg, "--out", self.tmp / "out")
        self.assertEqual(r.returncode, 1, r.stdout + r.stderr)
        m = re.search(r"EL-1 on \[a,b-tau\]: sup_norm=(\S+) at t=(\S+)", r.stdout)
        self.assertIsNotNone(m, r.stdout)
        self.assertAlmostEqual(float(m.group(1)), 0.7358, places=4)
        self.assertEqual(float(m.group(2)), 0.0)
        report = json.loads((self.tmp / "out" / "el.json").read_text())
        self.assertEqual(report["reports"][0]["verdict"], "fail")
        self.assertEqual(report["reports"][1]["verdict"], "pass")

    def test_every_command_on_the_reference_bundle(self):
        expected = {
            "integrate": ["trajectory.csv", "zpath.csv", "integrate.json"],
            "check-el": ["el1.csv", "el2.csv", "el.json"],
            "check-dbr": ["dbr1.csv", "dbr2.csv", "dbr.json"],
            "check-hyp": ["hyp_extremal.csv", "hyp_noether.csv", "hyp.json"],
            "invariance": ["invariance.csv", "invariance.json"],
            "noether": ["conservation.csv", "noether.json"],
        }
        for command, files in expected.items():
            out = self.tmp / command
            r = run(command, "--bundle", "paper-s4", "--out", out, "--tol", "1e-4")
            self.assertEqual(r.returncode, 0, command + "\n" + r.stdout + r.stderr)
            for name in files:
                self.assertTrue((out / name).exists(), f"{command}: {name}")

    def test_n_override(self):
        for command in ("integrate", "check-el", "check-dbr", "check-hyp", "invariance", "noether"):
            out = self.tmp / command
            r = run(command, "--bundle", "paper-s4", "--n", 40, "--out", out, "--tol", "1")
            self.assertEqual(r.returncode, 0, command + "\n" + r.stdout + r.stderr)
        with open(self.tmp / "integrate" / "zpath.csv") as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 41)
        self.assertEqual(float(rows[1]["t"]), 0.05)
        with open(self.tmp / "check-el" / "el1.csv") as f:
            self.assertEqual(len(list(csv.DictReader(f))), 21)
        r = run("solve", "--bundle", "classical-line", "--n", 20, "--out", self.tmp / "solve")
        self.assertEqual(r.returncode, 0, r.stdout + r.stderr)
        with open(self.tmp / "solve" / "solution.csv") as f:
            self.assertEqual(len(list(csv.DictReader(f))), 21)

    def test_tol_override(self):
        out = self.tmp / "loose"
        r = run("check-el", "--bundle", "paper-s4-nonextremal", "--tol", "1", "--out", out)
        self.assertEqual(r.returncode, 0, r.stdout)
        report = json.loads((out / "el.json").read_text())
        self.assertEqual(report["reports"][0]["tolerance"], 1.0)
        r = run("noether", "--bundle", "paper-s4", "--tol", "1e-30", "--out", self.tmp / "tight")
        self.assertEqual(r.returncode, 1, r.stdout)
        r = run("paper-example", "--n", 200, "--tol", "1e-30", "--out", self.tmp / "pe")
        self.assertEqual(r.returncode, 1, r.stdout)

    def test_solve(self):
        out = self.tmp / "solve"
        r = run("solve", "--bundle", "classical-line", "--out", out)
        self.assertEqual(r.returncode, 0, r.stdout + r.stderr)
        report = json.loads((out / "solve.json").read_text())
        self.assertTrue(report["converged"])
        self.assertLess(abs(report["z_b"] - 1.0), 1e-4)
        with open(out / "solution.csv") as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(list(rows[0].keys()), ["t", "x", "dx", "ddx"])
        self.assertLess(max(abs(float(row["x"]) - float(row["t"])) for row in rows), 1e-3)

        doc = self.bundle_config("classical-line")
        doc["solver"] = {"max_iters": 1, "seed_guess": "zero"}
        r = run("solve", self.config(doc), "--out", self.tmp / "short")
        self.assertEqual(r.returncode, 1, r.stdout + r.stderr)
        self.assertFalse(json.loads((self.tmp / "short" / "solve.json").read_text())["converged"])

    def test_samples_backend(self):
        doc = self.bundle_config("classical-line")
        doc["n"] = 10
        lines = ["t,x"] + [f"{k / 10!r},{k / 10!r}" for k in range(11)]
        (self.tmp / "line.csv").write_text("\n".join(lines) + "\n")
        doc["trajectory"] = {"backend": "samples", "samples": "line.csv"}
        r = run("check-el", self.config(doc), "--out", self.tmp / "out", cwd="/")
        self.assertEqual(r.returncode, 0, r.stdout + r.stderr)

    def test_determinism(self):
        for k in (1, 2):
            for command in ("noether", "check-el", "check-hyp"):
                r = run(command, "--bundle", "paper-s4", "--n", 200, "--out", self.tmp / f"run{k}")
                self.assertIn(r.returncode, (0, 1))
            run("solve", "--bundle", "paper-s4", "--n", 20, "--out", self.tmp / f"run{k}")
        a, b = self.tmp / "run1", self.tmp / "run2"
        names = sorted(p.name for p in a.iterdir())
        self.assertEqual(names, sorted(p.name for p in b.iterdir()))
        self.assertFalse(any(n.endswith(".tmp") for n in names))
        match, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
        self.assertEqual(mismatch + errors, [])

    def test_csv_format(self):
        out = self.tmp / "out"
        run("integrate", "--bundle", "paper-s4", "--n", 20, "--out", out)
        raw = (out / "zpath.csv").read_bytes()
        self.assertNotIn(b"\r", raw)
        for line in raw.decode().splitlines()[1:]:
            for field in line.split(","):
                self.assertEqual(float(field), float(repr(float(field))))
        self.assertIn("\n1,1.71827", raw.decode())

    def test_schema(self):
        schema = json.loads((SOURCE / "schema" / "problem.schema.json").read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        validator = jsonschema.Draft202012Validator(schema)
        configs = sorted((SOURCE / "problems").glob("*/config.json"))
        self.assertGreaterEqual(len(configs), 5)
        for path in configs:
            validator.validate(json.loads(path.read_text()))
        bad = self.bundle_config("paper-s4")
        bad["extra"] = 1
        self.assertFalse(validator.is_valid(bad))
        # The tool rejects what the schema rejects.
        self.assertEqual(run("integrate", self.config(bad)).returncode, 2)

    def test_problems_match_bundles(self):
        out = self.tmp / "exported"
        subprocess.run([str(EXPORT), str(out)], check=True, capture_output=True)
        shipped = SOURCE / "problems"
        names = sorted(p.name for p in out.iterdir())
        self.assertEqual(names, sorted(p.name for p in shipped.iterdir() if p.is_dir()))
        for name in names:
            for f in ("config.json", "expected.json"):
                self.assertTrue(filecmp.cmp(out / name / f, shipped / name / f, shallow=False), f"{name}/{f}")


if __name__ == "__main__":
    HERGLOTZ, EXPORT, SOURCE = (pathlib.Path(p).resolve() for p in sys.argv[1:4])
    unittest.main(argv=sys.argv[:1], verbosity=2)
