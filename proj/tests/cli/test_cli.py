"""End-to-end checks of the sinrsched command line: exit codes and the
gen -> solve -> verify round trip."""

import csv
import json
import os
import subprocess
import sys
import tempfile
import unittest

CLI = os.environ.get("SINRSCHED_CLI", "sinrsched")


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


class CliTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.dir, name)

    def gen(self, *extra, name="inst.json", n=8):
        out = self.path(name)
        res = run("gen", "--n", str(n), "--seed", "5", "--out", out, *extra)
        self.assertEqual(res.returncode, 0, res.stderr)
        return out

    def test_round_trip_for_every_algorithm(self):
        inst = self.gen("--pmax", "0.5", "--power", "0.5")
        for alg in ("unlimited", "fixed", "limited"):
            sol = self.path(alg + ".json")
            res = run("solve", "--instance", inst, "--algorithm", alg, "--out", sol)
            self.assertEqual(res.returncode, 0, res.stderr)
            res = run("verify", "--instance", inst, "--solution", sol)
            self.assertEqual(res.returncode, 0, res.stderr)
            self.assertEqual(res.stdout.strip(), "ok")

    def test_gen_is_byte_identical(self):
        a = self.gen(name="a.json")
        b = self.gen(name="b.json")
        with open(a, "rb") as fa, open(b, "rb") as fb:
            self.assertEqual(fa.read(), fb.read())

    def test_halved_power_is_reported(self):
        inst = self.path("pair.json")
        with open(inst, "w") as f:
            json.dump(
                {
                    "alpha": 2.0,
                    "noise": 0.1,
                    "p_max": "inf",
                    "metric": {"type": "euclidean", "dim": 1,
                               "points": [[0], [1], [1000], [1001]]},
                    "links": [{"id": 0, "s": 0, "r": 1, "beta": 2},
                              {"id": 1, "s": 2, "r": 3, "beta": 2}],
                },
                f,
            )
        sol = self.path("sol.json")
        self.assertEqual(run("solve", "--instance", inst, "--out", sol).returncode, 0)
        with open(sol) as f:
            doc = json.load(f)
        doc["powers"]["0"] /= 2
        with open(sol, "w") as f:
            json.dump(doc, f)
        res = run("verify", "--instance", inst, "--solution", sol)
        self.assertEqual(res.returncode, 1)
        self.assertIn("violated link 0", res.stderr)

    def test_input_errors_exit_2(self):
        self.assertEqual(run("gen", "--n", "3").returncode, 2)
        self.assertEqual(run("solve", "--instance", self.path("missing.json")).returncode, 2)
        bad = self.path("bad.json")
        with open(bad, "w") as f:
            f.write('{"links": []}')
        self.assertEqual(run("solve", "--instance", bad).returncode, 2)
        self.assertEqual(run("solve", "--bogus-flag").returncode, 2)
        self.assertEqual(run("experiment", "--name", "nope").returncode, 2)

    def test_schedule_and_verify(self):
        inst = self.gen("--utility", "step", "--demand-min", "0.5", "--demand-max", "2")
        sched = self.path("sched.json")
        res = run("schedule", "--instance", inst, "--out", sched)
        self.assertEqual(res.returncode, 0, res.stderr)
        with open(sched) as f:
            doc = json.load(f)
        self.assertTrue(doc["fulfilled"])
        res = run("verify", "--instance", inst, "--solution", sched)
        self.assertEqual(res.returncode, 0, res.stderr)

    def test_oracle_methods(self):
        inst = self.gen(n=5)
        for method in ("fixed_point", "spectral", "brute"):
            out = self.path(method + ".json")
            res = run("oracle", "--instance", inst, "--method", method, "--out", out)
            self.assertEqual(res.returncode, 0, res.stderr)
            with open(out) as f:
                json.load(f)

    def test_experiment_writes_json_and_csv(self):
        out = self.path("feas.json")
        res = run("experiment", "--name", "feasibility", "--trials", "10", "--seed", "1",
                  "--out", out)
        self.assertEqual(res.returncode, 0, res.stderr)
        with open(out) as f:
            doc = json.load(f)
        self.assertEqual(doc["experiment"], "feasibility")
        with open(self.path("feas.csv")) as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 10)
        self.assertEqual(
            list(rows[0].keys()),
            ["trial", "instance_digest", "algorithm", "n", "alg", "opt", "ratio",
             "feasible", "runtime_ms", "note"],
        )


if __name__ == "__main__":
    unittest.main(argv=sys.argv[:1], verbosity=1)
