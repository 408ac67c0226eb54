# SPDX-License-Identifier: MIT
"""End-to-end checks of the sasakilab executable against the report schema."""
import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

CLI = sys.argv.pop(1)
SCHEMA_PATH = sys.argv.pop(1)

with open(SCHEMA_PATH, encoding="utf-8") as fh:
    SCHEMA = json.load(fh)
VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True, timeout=600)


class ReportSchema(unittest.TestCase):
    def check_report(self, proc, command):
        report = json.loads(proc.stdout)
        VALIDATOR.validate(report)
        self.assertEqual(report["command"], command)
        self.assertEqual(report["summary"]["exit_code"], proc.returncode)
        return report

    def test_verify_sphere3(self):
        proc = run("verify", "--fixture", "sphere3", "--samples", "20")
        self.assertEqual(proc.returncode, 0, proc.stderr)
        report = self.check_report(proc, "verify")
        ids = [i["id"] for i in report["identities"]]
        self.assertEqual(len(ids), len(set(ids)))
        self.assertEqual(len(ids), 21)
        self.assertTrue(all(i["verdict"] == "pass" for i in report["identities"]))
        self.assertEqual(list(report)[-1], "timings")

    def test_verify_heisenberg3_fails(self):
        proc = run("verify", "--fixture", "heisenberg3", "--samples", "20")
        self.assertEqual(proc.returncode, 1)
        report = self.check_report(proc, "verify")
        positivity = next(i for i in report["identities"] if i["id"] == "ineq.positivity")
        self.assertEqual(positivity["verdict"], "fail")
        self.assertTrue(any("positivity theorem" in n for n in positivity["notes"]))

    def test_classify_reports(self):
        for fixture, code, verdict in [("sphere5", 0, "SasakiEinstein"),
                                       ("heisenberg3", 1, "ViolatesPositivity"),
                                       ("sphere3.dhom(2)", 0, "Indeterminate")]:
            with self.subTest(fixture=fixture):
                proc = run("classify", "--fixture", fixture, "--samples", "12")
                self.assertEqual(proc.returncode, code, proc.stderr)
                report = self.check_report(proc, "classify")
                self.assertEqual(report["classification"]["verdict"], verdict)
                self.assertIn(report["classification"]["summary"], proc.stderr)

    def test_identity_subset_and_out_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "r.json")
            proc = run("verify", "--fixture", "sphere3", "--samples", "10",
                       "--identities", "soliton.n1.v,ineq.cauchyschwarz", "--out", out)
            self.assertEqual(proc.returncode, 0, proc.stderr)
            with open(out, encoding="utf-8") as fh:
                report = json.load(fh)
            VALIDATOR.validate(report)
            self.assertEqual([i["id"] for i in report["identities"]],
                             ["soliton.n1.v", "ineq.cauchyschwarz"])

    def test_deterministic_output(self):
        a = json.loads(run("verify", "--fixture", "sphere5", "--samples", "10", "--seed", "3").stdout)
        b = json.loads(run("verify", "--fixture", "sphere5", "--samples", "10", "--seed", "3").stdout)
        a.pop("timings")
        b.pop("timings")
        self.assertEqual(json.dumps(a), json.dumps(b))

    def test_markdown(self):
        proc = run("verify", "--fixture", "sphere3", "--samples", "10", "--format", "md")
        self.assertEqual(proc.returncode, 0)
        self.assertTrue(proc.stdout.startswith("# sasakilab verify: sphere3"))
        self.assertIn("Eq. (n1)(v)", proc.stdout)


class ExitCodes(unittest.TestCase):
    def test_input_errors_exit_2(self):
        with tempfile.TemporaryDirectory() as tmp:
            bad = os.path.join(tmp, "bad.manifold")
            with open(bad, "w", encoding="utf-8") as fh:
                fh.write("[manifold]\nname=bad\nn=1\ncoords=x,y\n")
            cases = [
                ("verify", "--manifold", bad),
                ("verify", "--manifold", os.path.join(tmp, "missing.manifold")),
                ("verify", "--fixture", "torus3"),
                ("classify", "--fixture", "sphere3", "--samples", "3"),
                ("verify",),
                ("list", "manifolds"),
                ("export-fixture", "sphere3.dhom(0)"),
            ]
            for args in cases:
                with self.subTest(args=args):
                    proc = run(*args)
                    self.assertEqual(proc.returncode, 2, proc.stdout + proc.stderr)
                    self.assertEqual(proc.stdout, "")

    def test_list(self):
        proc = run("list", "identities")
        self.assertEqual(proc.returncode, 0)
        lines = proc.stdout.splitlines()
        self.assertIn("soliton.n1.v → Eq. (n1)(v)", lines)
        self.assertEqual(len(lines), 21)
        proc = run("list", "fixtures")
        self.assertEqual(proc.returncode, 0)
        self.assertEqual([l.split()[0] for l in proc.stdout.splitlines()],
                         ["sphere3", "sphere5", "sphere3.dhom(a)", "heisenberg3", "heisenberg5"])

    def test_export_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "s.manifold")
            self.assertEqual(run("export-fixture", "sphere3.dhom(2)", "--out", path).returncode, 0)
            proc = run("classify", "--manifold", path, "--samples", "10")
            self.assertEqual(proc.returncode, 0, proc.stderr)
            self.assertEqual(json.loads(proc.stdout)["manifold"]["name"], "sphere3.dhom(2)")


if __name__ == "__main__":
    unittest.main(verbosity=2)
