"""End-to-end checks of the command-line tool: every subcommand, exit codes,
output formats and determinism. Usage: cli_test.py <cli binary> <specs dir>."""

import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

CLI = sys.argv[1] if len(sys.argv) > 1 else "build/unmask_cli"
SPECS = sys.argv[2] if len(sys.argv) > 2 else "specs"


def run(*args):
    proc = subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def ok(*args):
    code, out, err = run(*args)
    if code != 0:
        raise AssertionError(f"{args} exited {code}: {err}")
    return out


def spec(name):
    return os.path.join(SPECS, name)


class CliTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def write(self, name, text):
        with open(self.path(name), "w") as f:
            f.write(text)
        return self.path(name)

    # ---- curve / summary ------------------------------------------------

    def test_rs_curve_csv(self):
        out = ok("curve", "--dist", spec("rs_q7_n5_k2.json"), "--format", "csv")
        lines = out.strip().splitlines()
        self.assertEqual(lines[0], "j,Z_bits,H_bits")
        z = [float(line.split(",")[1]) for line in lines[1:]]
        expected = [0, 0] + [math.log2(7)] * 3
        for got, want in zip(z, expected):
            self.assertAlmostEqual(got, want, places=6)
        self.assertAlmostEqual(z[2], 2.807355, places=6)

    def test_curve_json_and_out_flag(self):
        target = self.path("curve.json")
        out = ok("curve", "--dist", spec("mixture_q2_n4.json"), "--out", target)
        self.assertEqual(out, "")
        with open(target) as f:
            doc = json.load(f)
        self.assertEqual(doc["n"], 4)
        self.assertEqual(len(doc["Z_bits"]), 4)

    def test_monte_carlo_curve(self):
        out = ok("curve", "--dist", spec("mixture_q2_n4.json"), "--method", "mc",
                 "--samples", "200", "--seed", "3", "--format", "csv")
        self.assertEqual(out.splitlines()[0], "j,Z_bits,H_bits,Z_stderr")

    def test_summary(self):
        doc = json.loads(ok("summary", "--dist", spec("rs_q7_n5_k2.json")))
        self.assertAlmostEqual(doc["tc_bits"], 3 * math.log2(7), places=9)
        self.assertAlmostEqual(doc["dtc_bits"], 2 * math.log2(7), places=9)
        self.assertAlmostEqual(doc["tc_bits"] + doc["dtc_bits"], 5 * doc["z_n_bits"], places=8)

    # ---- plan -----------------------------------------------------------

    def test_plan_optimal_from_curve_csv(self):
        curve = self.write("rs.csv", ok("curve", "--dist", spec("rs_q7_n5_k2.json"),
                                        "--format", "csv"))
        doc = json.loads(ok("plan", "--curve", curve, "--k", "2"))
        self.assertEqual(doc["schedule"]["steps"], [2, 3])
        self.assertAlmostEqual(doc["predicted_kl_bits"], 0.0, places=12)
        csv = ok("plan", "--curve", curve, "--k", "2", "--format", "csv")
        self.assertTrue(csv.startswith("round,step,node"))

    def test_plan_tc_closed_form(self):
        doc = json.loads(ok("plan", "--tc-hat", "1", "--eps", "1", "--n", "8"))
        self.assertEqual(doc["schedule"]["steps"], [4, 2, 1, 1])
        doc = json.loads(ok("plan", "--dtc-hat", "1", "--eps", "1", "--n", "8"))
        self.assertEqual(doc["schedule"]["steps"], [1, 1, 2, 4])
        doc = json.loads(ok("plan", "--dtc-hat", "2", "--eps", "0.5", "--n", "18", "--austin"))
        self.assertEqual(sum(doc["schedule"]["steps"]), 18)

    def test_plan_usage_errors(self):
        self.assertEqual(run("plan", "--tc-hat", "1", "--dtc-hat", "1", "--eps", "1",
                             "--n", "8")[0], 2)
        self.assertEqual(run("plan", "--k", "2")[0], 2)  # optimal mode needs a curve
        self.assertEqual(run("plan", "--tc-hat", "1", "--eps", "0", "--n", "8")[0], 2)

    # ---- simulate / sample ----------------------------------------------

    def test_simulate(self):
        doc = json.loads(ok("simulate", "--dist", spec("correlated_pair.json"), "--steps", "2"))
        self.assertAlmostEqual(doc["expected_kl_bits"], 1.0, places=12)
        doc = json.loads(ok("simulate", "--dist", spec("rs_q7_n5_k2.json"),
                            "--steps", "1,1,1,1,1"))
        self.assertAlmostEqual(doc["expected_kl_bits"], 0.0, places=12)

    def test_simulate_accepts_plan_output(self):
        curve = self.write("rs.csv", ok("curve", "--dist", spec("rs_q7_n5_k2.json"),
                                        "--format", "csv"))
        plan = self.write("plan.json", ok("plan", "--curve", curve, "--k", "2"))
        doc = json.loads(ok("simulate", "--dist", spec("rs_q7_n5_k2.json"), "--schedule", plan))
        self.assertAlmostEqual(doc["expected_kl_bits"], doc["formula_kl_bits"], places=8)

    def test_sample_in_support(self):
        out = ok("sample", "--dist", spec("parity_q2_n3.json"), "--steps", "1,1,1",
                 "--count", "50", "--seed", "11", "--format", "csv")
        rows = [list(map(int, line.split(","))) for line in out.strip().splitlines()]
        self.assertEqual(len(rows), 50)
        # Singles reproduce the law exactly: codewords (u0, u1, u0 + u1) + (0, 0, 1).
        for r in rows:
            self.assertEqual((r[0] + r[1] + 1) % 2, r[2])

    # ---- verify / sweep / hardcurve -------------------------------------

    def test_verify_passes_and_fails(self):
        code, out, _ = run("verify", "--dist", spec("asymmetric_q3_n3.json"))
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(out)["passed"])
        codes = {run("verify", "--dist", spec("asymmetric_q3_n3.json"), "--method", "mc",
                     "--samples", "1", "--seed", s)[0] for s in range(20)}
        self.assertIn(1, codes)
        self.assertTrue(codes <= {0, 1})

    def test_sweep(self):
        doc = json.loads(ok("sweep", "--dist", spec("uniform_q2_n6.json"), "--eps", "0.5"))
        self.assertEqual(doc["best"]["kind"], "one_shot")
        self.assertTrue(doc["guarantee_holds"])
        ok("sweep", "--dist", spec("mixture_q2_n4.json"), "--eps", "0.5", "--grid", "exponent",
           "--format", "csv")

    def test_hardcurve(self):
        out = ok("hardcurve", "--n-grid", "256,512", "--format", "csv")
        lines = out.strip().splitlines()
        self.assertEqual(lines[0], "n,eps,k,best_error,ratio")
        self.assertEqual(len(lines), 3)

    # ---- exit codes, determinism ----------------------------------------

    def test_usage_errors_exit_2(self):
        self.assertEqual(run()[0], 2)
        self.assertEqual(run("curve")[0], 2)
        self.assertEqual(run("curve", "--dist", spec("rs_q7_n5_k2.json"), "--format", "xml")[0], 2)
        self.assertEqual(run("bogus")[0], 2)
        self.assertEqual(run("hardcurve", "--n-grid", "")[0], 2)
        self.assertEqual(run("curve", "--dist", self.path("missing.json"))[0], 2)
        bad = self.write("bad.json", '{"kind":"explicit","q":2,"n":1,"pmf":[0.9,0.9]}')
        self.assertEqual(run("curve", "--dist", bad)[0], 2)
        self.assertEqual(run("simulate", "--dist", spec("rs_q7_n5_k2.json"), "--steps", "1,1")[0], 2)
        self.assertEqual(run("simulate", "--dist", spec("rs_q7_n5_k2.json"), "--steps", "2,3",
                             "--schedule", "x.json")[0], 2)

    def test_infeasible_exit_3(self):
        big = self.write("big.json", '{"kind":"uniform","q":2,"n":30}')
        code, _, err = run("curve", "--dist", big)
        self.assertEqual(code, 3)
        self.assertIn("InfeasibleEnumeration", err)

    def test_deterministic_output(self):
        args = ("sample", "--dist", spec("mixture_q2_n4.json"), "--steps", "2,2",
                "--count", "20", "--seed", "5")
        self.assertEqual(ok(*args), ok(*args))
        self.assertNotEqual(ok(*args), ok(*args[:-1], "6"))
        args = ("simulate", "--dist", spec("mixture_q2_n4.json"), "--steps", "2,2",
                "--method", "mc", "--trials", "30", "--seed", "9")
        self.assertEqual(ok(*args), ok(*args))

    def test_curve_json_round_trip(self):
        first = ok("curve", "--dist", spec("affine_q3_n4.json"))
        path = self.write("c.json", first)
        a = json.loads(ok("plan", "--curve", path, "--k", "2"))
        csv_path = self.write("c.csv", ok("curve", "--dist", spec("affine_q3_n4.json"),
                                          "--format", "csv"))
        b = json.loads(ok("plan", "--curve", csv_path, "--k", "2"))
        self.assertEqual(a, b)


if __name__ == "__main__":
    unittest.main(argv=[sys.argv[0], "-v"])
