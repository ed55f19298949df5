#!/usr/bin/env python3
"""End-to-end checks of the bf executable: outputs, schema, config, exit codes."""

import csv
import io
import json
import math
import os
import subprocess
import sys
import tempfile

import jsonschema

BF = sys.argv[1]
SCHEMA = json.load(open(sys.argv[2]))
validator = jsonschema.Draft202012Validator(SCHEMA)

failures = []


def check(cond, what):
    print(("ok    " if cond else "FAIL  ") + what)
    if not cond:
        failures.append(what)


def run(*args, env=None):
    e = dict(os.environ)
    if env:
        e.update(env)
    return subprocess.run([BF, *args], capture_output=True, text=True, env=e)


def all_finite(node, allow_nan_strings=False):
    if isinstance(node, float):
        return math.isfinite(node)
    if isinstance(node, dict):
        return all(all_finite(v, allow_nan_strings) for v in node.values())
    if isinstance(node, list):
        return all(all_finite(v, allow_nan_strings) for v in node)
    return True


def json_out(*args):
    p = run(*args, "--format", "json")
    doc = json.loads(p.stdout)
    errors = list(validator.iter_errors(doc))
    check(not errors, f"schema: {' '.join(args)}" + (f" ({errors[0].message})" if errors else ""))
    return p, doc


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# closed forms, typed by hand
def c_kappa(k):
    return math.sqrt(1 + k)


def flat_quadruple(k, mu):
    # omega(xi)^2 = |xi| (1 + k xi^2); eigenvalue i(c xi -/+ omega)
    c = c_kappa(k)
    om = lambda xi: math.sqrt(abs(xi) * (1 + k * xi * xi))
    l1p = 1j * (c * (1 + mu) - om(1 + mu))
    l1m = 1j * (c * (-1 + mu) + om(-1 + mu))
    l0p = 1j * (c * mu - math.sqrt(mu * (1 + k * mu * mu)))
    l0m = 1j * (c * mu + math.sqrt(mu * (1 + k * mu * mu)))
    return [l1p, l1m, l0p, l0m]


# coeffs
p = run("coeffs", "--kappa-grid", "0,0.1547005,0.5")
check(p.returncode == 0, "coeffs exits 0")
rows = csv_rows(p.stdout)
check(len(rows) == 3, "coeffs has three rows")
r0 = rows[0]
check(all(float(r0[k]) == 1.0 for k in ("c_kappa", "e11", "e22", "e12", "e_wb", "breve_c"))
      and float(r0["kappa"]) == 0.0 and r0["region"] == "Unstable", "coeffs at kappa 0 is all ones, Unstable")
check(rows[1]["region"] == "Critical", "kappa 0.1547005 is Critical")
check(rows[2]["region"] == "Singular" and rows[2]["error"] == "SingularKappa", "kappa 1/2 reports SingularKappa")
check("\r" not in p.stdout and p.stdout.endswith("\n"), "csv uses bare newlines")
check(all("," not in rows[0][k] for k in rows[0]), "csv numbers use a decimal point")
_, doc = json_out("coeffs", "--kappa-grid", "0:1:11")
check(len(doc["result"]["rows"]) == 11, "coeffs json over a range grid")

# a comma locale must not change the bytes
p_de = run("coeffs", "--kappa-grid", "0.3,1.5", env={"LC_ALL": "de_DE.UTF-8", "LANG": "de_DE.UTF-8"})
p_c = run("coeffs", "--kappa-grid", "0.3,1.5", env={"LC_ALL": "C"})
check(p_de.stdout == p_c.stdout, "csv output is locale independent")

# figure8
p = run("figure8", "--kappa", "0.3")
check(p.returncode == 2, f"figure8 on a stable kappa exits 2 (got {p.returncode})")
p = run("figure8", "--kappa", "0", "--eps", "0.01", "--samples", "24")
check(p.returncode == 0, "figure8 kappa 0 exits 0")
rows = csv_rows(p.stdout)
max_re = max(abs(float(r["re_lambda1p"])) for r in rows)
check(abs(max_re / 5e-5 - 1) < 0.1, f"kappa 0 peak growth ~5e-5 (got {max_re:.3e})")
p, doc = json_out("figure8", "--kappa", "1.5", "--eps", "0.01", "--samples", "12")
rows = doc["result"]["rows"]
unstable = [r for r in rows if r["re_lambda1p"] > 1e-9]
check(unstable and all(r["im_lambda1p"] < 0 for r in unstable), "kappa 1.5 loops below the real axis")
check(all_finite(doc), "figure8 json is finite")

# spectrum at eps 0 against the flat closed forms
for kap, mu in ((0.3, 0.05), (0.8, 0.1), (0.0, 0.02)):
    p, doc = json_out("spectrum", "--kappa", str(kap), "--eps", "0", "--mu", str(mu), "--K", "16")
    check(p.returncode == 0, f"spectrum eps 0 kappa {kap} exits 0")
    res = doc["result"]
    q = res["quadruple"]
    got = [complex(q[k]["re"], q[k]["im"]) for k in ("lambda1_plus", "lambda1_minus", "lambda0_plus", "lambda0_minus")]
    want = flat_quadruple(kap, mu)
    miss = max(abs(a - b) for a, b in zip(got, want))
    check(miss < 1e-10, f"flat quadruple kappa {kap} mu {mu} (miss {miss:.2e})")
    check(res["hamiltonian_pairing"]["status"] == "pass", "pairing passes")
    check(res["max_residual"] <= 1e-9, f"residual {res['max_residual']:.2e} <= 1e-9")
    check(all_finite(doc), "spectrum json is finite")

# mu-bar and stokes-residual
p, doc = json_out("mu-bar", "--kappa", "0", "--eps", "0.01")
row = doc["result"]["rows"][0]
check(abs(row["rel_diff"]) < 0.05, f"mu-bar kappa 0 within 5% of the leading value ({row['rel_diff']:.3f})")
check(row["bracket_lo"] <= row["mu_bar_numeric"] <= row["bracket_hi"], "mu-bar bracket contains the root")
p = run("stokes-residual", "--kappa", "0.3", "--eps-grid", "0.02,0.01")
rows = sorted(csv_rows(p.stdout), key=lambda r: -float(r["eps"]))
ratio = float(rows[0]["res1"]) / float(rows[1]["res1"])
check(p.returncode == 0 and 6 < ratio < 10, f"stokes residual drops ~8x per halving ({ratio:.2f})")

# config precedence: flags > config > defaults
with tempfile.TemporaryDirectory() as tmp:
    cfg = os.path.join(tmp, "c.json")
    with open(cfg, "w") as f:
        json.dump({"kappa": 0.8, "eps": 0.02, "K": 24}, f)
    _, doc = json_out("mu-bar", "--config", cfg, "--eps", "0.01")
    c = doc["config"]
    check(c["kappa"] == 0.8, "config file sets kappa")
    check(c["eps"] == 0.01, "flag beats config file")
    check(c["K"] == 24, "config file sets K")
    check(c["gap_factor"] == 1.5, "default fills the rest")
    with open(cfg, "w") as f:
        json.dump({"kapa": 0.8}, f)
    p = run("mu-bar", "--config", cfg)
    check(p.returncode != 0, "unknown config key is rejected")

    # exit codes
    p = run("validate", "--out", os.path.join(tmp, "report.json"), "--format", "json")
    check(p.returncode == 0, f"validate exits 0 (got {p.returncode})")
    check("12/12 criteria passed" in p.stdout, "validate reports 12/12")
    report = json.load(open(os.path.join(tmp, "report.json")))
    check(not list(validator.iter_errors(report)), "validate report matches the schema")
    p = run("validate", "--mutate-e22")
    check(p.returncode == 1, f"mutated e22 fails validation with 1 (got {p.returncode})")

p = run("coeffs", "--out", "/nonexistent/dir/out.csv")
check(p.returncode == 3, f"unwritable --out exits 3 (got {p.returncode})")
p = run("coeffs", "--no-such-flag")
check(p.returncode == 2, f"unknown flag exits 2 (got {p.returncode})")
p = run("spectrum", "--eps", "0.2")
check(p.returncode == 2, f"eps out of range is an input error, exit 2 (got {p.returncode})")

# help shows defaults
p = run("spectrum", "--help")
check("1.5" in p.stdout and "32" in p.stdout, "help lists default values")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
