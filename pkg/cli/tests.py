"""
Tests for the command-line harness: exit codes, data files and manifests
"""

from io import StringIO
from pathlib import Path
import json
import tempfile

from django.test import SimpleTestCase

from cli.output import load_manifest, manifest_path, verify_manifest
from cli.runner import run
from cli.suites import SuiteContext, chatterjee_slope, conditional_near_gaussian
from core.config import Config


class HarnessTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.stdout = StringIO()
        self.stderr = StringIO()

    def path(self, name: str) -> Path:
        return Path(self.tmp.name) / name

    def limitlab(self, *argv) -> int:
        return run([str(arg) for arg in argv], stdout=self.stdout, stderr=self.stderr)

    def csv_lines(self, name: str):
        return self.path(name).read_text(encoding="utf-8").splitlines()


class ExitCodeTests(HarnessTestCase):
    """Test the exit-code contract"""

    def test_no_arguments(self):
        """Test a bare invocation prints usage and exits 64"""
        self.assertEqual(self.limitlab(), 64)
        self.assertIn("subcommands", self.stderr.getvalue())

    def test_help(self):
        """Test help exits 0"""
        self.assertEqual(self.limitlab("help"), 0)
        self.assertIn("verify", self.stdout.getvalue())

    def test_unknown_subcommand(self):
        """Test an unknown subcommand exits 64"""
        self.assertEqual(self.limitlab("inversions"), 64)

    def test_unknown_flag(self):
        """Test a parse error exits 64"""
        self.assertEqual(self.limitlab("descents", "exact", "--bogus"), 64)

    def test_missing_required_size(self):
        """Test a missing --n exits 64"""
        self.assertEqual(self.limitlab("descents", "exact", "--out", self.path("d.csv")), 64)
        self.assertIn("--n", self.stderr.getvalue())

    def test_composite_modulus(self):
        """Test a composite modulus exits 2 without --allow-composite"""
        self.assertEqual(self.limitlab("aps", "moments", "--n", 9, "--out", self.path("m.csv")), 2)
        self.assertEqual(
            self.limitlab("aps", "moments", "--n", 9, "--allow-composite", "--out", self.path("m.csv")), 0
        )

    def test_resource_limit(self):
        """Test exhaustive enumeration above the limit exits 3"""
        code = self.limitlab("identities", "complement", "--n", 27, "--check", "--out", self.path("c.csv"))
        self.assertEqual(code, 3)
        self.assertFalse(self.path("c.csv").exists())

    def test_scan_needs_three_sizes(self):
        """Test a scan over two sizes exits 64"""
        code = self.limitlab(
            "scan", "--metric", "descents_llt_scaled", "--n-list", 10, 20, "--out", self.path("s.csv")
        )
        self.assertEqual(code, 64)


class DataFileTests(HarnessTestCase):
    """Test data file contents"""

    def test_eulerian_csv(self):
        """Test the exact descent pmf at n=3"""
        self.assertEqual(self.limitlab("descents", "exact", "--n", 3, "--out", self.path("d.csv")), 0)
        self.assertEqual(
            self.path("d.csv").read_bytes(),
            b"k,prob_num,prob_den,prob_float\n"
            b"0,1,6,0.16666666666666666\n"
            b"1,2,3,0.6666666666666666\n"
            b"2,1,6,0.16666666666666666\n",
        )

    def test_lemma_table(self):
        """Test the conditional descent table rows"""
        self.assertEqual(self.limitlab("descents", "lemma", "--out", self.path("l.csv")), 0)
        lines = self.csv_lines("l.csv")
        self.assertEqual(lines[0], "case,x_prev,x_next,prob_num,prob_den,prob_float")
        self.assertIn("two_sided,1,1,1,6,0.16666666666666666", lines)
        self.assertIn("two_sided,0,0,5,6,0.8333333333333334", lines)
        self.assertIn("one_sided,1,,1,3,0.3333333333333333", lines)

    def test_intersections(self):
        """Test formula and brute-force columns agree at n=7"""
        self.assertEqual(self.limitlab("identities", "intersections", "--n", 7, "--out", self.path("i.csv")), 0)
        self.assertEqual(
            self.csv_lines("i.csv"),
            ["i,formula,brute_force,holds", "0,42,42,true", "1,252,252,true", "2,126,126,true", "3,21,21,true"],
        )

    def test_complement_check(self):
        """Test the exhaustive complement column at n=7"""
        self.assertEqual(
            self.limitlab("identities", "complement", "--n", 7, "--check", "--out", self.path("c.csv")), 0
        )
        lines = self.csv_lines("c.csv")
        self.assertEqual(lines[0], "k,formula,observed,holds")
        self.assertEqual(len(lines), 9)
        self.assertTrue(all(line.endswith(",true") for line in lines[1:]))

    def test_json_report(self):
        """Test JSON output keeps exact rationals"""
        code = self.limitlab("aps", "moments", "--n", 5, "--format", "json", "--out", self.path("m.json"))
        self.assertEqual(code, 0)
        data = json.loads(self.path("m.json").read_text(encoding="utf-8"))
        self.assertEqual(data["mean"], {"num": "5", "den": "4"})
        self.assertEqual(data["variance"], {"num": "35", "den": "8"})

    def test_report_flattened_to_csv(self):
        """Test CSV output of a report uses field,value rows"""
        self.assertEqual(self.limitlab("aps", "moments", "--n", 5, "--out", self.path("m.csv")), 0)
        lines = self.csv_lines("m.csv")
        self.assertEqual(lines[0], "field,value")
        self.assertIn("mean,5/4", lines)

    def test_charfn_columns(self):
        """Test the characteristic function table columns"""
        code = self.limitlab("metrics", "charfn", "--n", 10, "--t-points", 5, "--out", self.path("cf.csv"))
        self.assertEqual(code, 0)
        lines = self.csv_lines("cf.csv")
        self.assertEqual(lines[0], "t,re_phi,im_phi,gauss,abs_diff")
        self.assertEqual(len(lines), 6)

    def test_scan_companion(self):
        """Test a scan writes its points and the fitted slope"""
        code = self.limitlab(
            "scan", "--metric", "descents_llt_scaled", "--n-list", 20, 40, 80, "--workers", 1,
            "--out", self.path("scan.csv"),
        )
        self.assertEqual(code, 0)
        lines = self.csv_lines("scan.csv")
        self.assertEqual(lines[0], "n,metric,noise_floor")
        self.assertEqual([line.split(",")[0] for line in lines[1:]], ["20", "40", "80"])
        report = json.loads(self.path("scan.json").read_text(encoding="utf-8"))
        self.assertLess(report["slope"], 0)
        self.assertTrue(verify_manifest(manifest_path(self.path("scan.json"))))


class ManifestTests(HarnessTestCase):
    """Test manifests and reproducibility"""

    def test_manifest_written(self):
        """Test the manifest records the command line and checksum"""
        self.limitlab("descents", "exact", "--n", 5, "--out", self.path("d.csv"))
        manifest_file = manifest_path(self.path("d.csv"))
        manifest = load_manifest(manifest_file)
        self.assertTrue(manifest.command_line.startswith("limitlab descents exact --n 5"))
        self.assertEqual(manifest.command, "descents")
        self.assertEqual(manifest.action, "exact")
        self.assertTrue(verify_manifest(manifest_file))

    def test_tampering_detected(self):
        """Test a modified data file fails verification"""
        self.limitlab("descents", "exact", "--n", 5, "--out", self.path("d.csv"))
        with open(self.path("d.csv"), "a", encoding="utf-8") as f:
            f.write("5,0,1,0.0\n")
        self.assertFalse(verify_manifest(manifest_path(self.path("d.csv"))))

    def test_sample_reproducible_across_workers(self):
        """Test identical seeds give identical bytes whatever the worker count"""
        common = ("aps", "sample", "--n", 11, "--samples", 30000, "--seed", 9)
        self.assertEqual(self.limitlab(*common, "--workers", 1, "--out", self.path("a.csv")), 0)
        self.assertEqual(self.limitlab(*common, "--workers", 2, "--out", self.path("b.csv")), 0)
        self.assertEqual(self.path("a.csv").read_bytes(), self.path("b.csv").read_bytes())
        first = load_manifest(manifest_path(self.path("a.csv")))
        second = load_manifest(manifest_path(self.path("b.csv")))
        self.assertEqual(first.config_hash, second.config_hash)
        self.assertEqual(first.seed, 9)
        self.assertEqual(first.stream_ids, [0])

    def test_histogram_records_run_hash(self):
        """Test the histogram provenance carries the manifest config hash"""
        code = self.limitlab(
            "aps", "sample", "--n", 7, "--samples", 2000, "--seed", 3, "--format", "json", "--out", self.path("h.json")
        )
        self.assertEqual(code, 0)
        data = json.loads(self.path("h.json").read_text(encoding="utf-8"))
        self.assertEqual(data["config_hash"], load_manifest(manifest_path(self.path("h.json"))).config_hash)

    def test_seed_changes_output(self):
        """Test a different seed changes the histogram"""
        common = ("descents", "sample", "--n", 12, "--samples", 5000, "--workers", 1)
        self.limitlab(*common, "--seed", 1, "--out", self.path("a.csv"))
        self.limitlab(*common, "--seed", 2, "--out", self.path("b.csv"))
        self.assertNotEqual(self.path("a.csv").read_bytes(), self.path("b.csv").read_bytes())
        self.assertNotEqual(
            load_manifest(manifest_path(self.path("a.csv"))).config_hash,
            load_manifest(manifest_path(self.path("b.csv"))).config_hash,
        )


class VerifyCommandTests(HarnessTestCase):
    """Test the oracle suite runner"""

    def test_identities_suite(self):
        """Test the identities suite passes and reports every check"""
        code = self.limitlab("verify", "--suite", "identities", "--out", self.path("v.csv"))
        self.assertEqual(code, 0, self.stderr.getvalue())
        lines = self.csv_lines("v.csv")
        self.assertEqual(lines[0], "suite,check,status,detail")
        self.assertEqual(len(lines), 4)
        self.assertTrue(all(line.split(",")[2] == "pass" for line in lines[1:]))


class SuiteCheckTests(SimpleTestCase):
    """Test individual oracle checks"""

    def test_conditional_check_uses_plain_kolmogorov(self):
        """Test the fixed-size near-Gaussian check asserts the plain distance and reports the corrected one"""
        passed, detail = conditional_near_gaussian(SuiteContext(seed=Config.SEED, workers=1))
        self.assertTrue(passed, detail)
        self.assertIn("largest Kolmogorov distance", detail)
        self.assertIn("continuity-corrected max", detail)

    def test_stein_slope_check(self):
        """Test the bound's slope check passes over primes 11..101"""
        passed, detail = chatterjee_slope(SuiteContext(seed=Config.SEED, workers=1))
        self.assertTrue(passed, detail)
