#!/usr/bin/env python3
"""End-to-end CLI checks: exit-code contract, report shape, determinism."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

CLI = sys.argv[1]
failures = []


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def check(name, cond, extra=""):
    status = "ok" if cond else "FAIL"
    print(f"  {name}: {status} {extra}")
    if not cond:
        failures.append(name)


def main():
    tmp = Path(tempfile.mkdtemp(prefix="sapt_cli_"))
    p3_edges = tmp / "p3_edges.csv"
    p3_edges.write_text("src,dst\na,b\nb,c\n")
    p3_obs = tmp / "p3_obs.csv"
    p3_obs.write_text("id,value\na,1\nb,2\nc,4\n")

    # lisa on the P3 fixture: moran, k=1, beta+mc
    out = tmp / "p3_report.json"
    r = run("lisa", "--edges", str(p3_edges), "--obs", str(p3_obs), "--stat", "moran",
            "--k", "1", "--method", "beta", "--method", "mc", "--seed", "1",
            "--perms", "200", "--out", str(out))
    check("lisa p3 exit 0", r.returncode == 0, r.stderr.strip())
    rep = json.loads(out.read_text())
    check("lisa p3 two testable vertices", len(rep["results"]) == 2)
    check("lisa p3 center excluded", rep["excluded"][0]["id"] == "b"
          and rep["excluded"][0]["reason"] == "degenerate-connectivity")
    ids = {v["id"] for v in rep["results"]}
    check("lisa p3 endpoints present", ids == {"a", "c"})
    for v in rep["results"]:
        check(f"lisa p3 {v['id']} has beta+mc p-values",
              "beta" in v["p"] and "mc" in v["p"])

    # missing observation id -> exit 2
    bad_obs = tmp / "bad_obs.csv"
    bad_obs.write_text("id,value\na,1\nb,2\n")
    r = run("lisa", "--edges", str(p3_edges), "--obs", str(bad_obs),
            "--method", "beta", "--out", str(tmp / "x.json"))
    check("lisa missing obs exit 2", r.returncode == 2, r.stderr.strip())

    # self-loop -> exit 2 with row number
    loop_edges = tmp / "loop.csv"
    loop_edges.write_text("src,dst\na,a\n")
    r = run("lisa", "--edges", str(loop_edges), "--obs", str(p3_obs),
            "--method", "beta", "--out", str(tmp / "x.json"))
    check("self-loop exit 2", r.returncode == 2 and "row 2" in r.stderr)

    # exhaustive with n = 34 -> exit 3
    ring_edges = tmp / "ring34.csv"
    rows = ["src,dst"] + [f"r{i},r{(i + 1) % 34}" for i in range(34)]
    ring_edges.write_text("\n".join(rows) + "\n")
    ring_obs = tmp / "ring34_obs.csv"
    ring_obs.write_text("id,value\n" + "\n".join(f"r{i},{(i * 7) % 13}" for i in range(34)) + "\n")
    r = run("lisa", "--edges", str(ring_edges), "--obs", str(ring_obs),
            "--method", "exhaustive", "--out", str(tmp / "x.json"))
    check("exhaustive n=34 exit 3", r.returncode == 3, r.stderr.strip())

    # constant data: every vertex excluded for moran -> exit 4
    const_obs = tmp / "const_obs.csv"
    const_obs.write_text("id,value\na,2\nb,2\nc,2\n")
    r = run("lisa", "--edges", str(p3_edges), "--obs", str(const_obs),
            "--method", "beta", "--out", str(tmp / "x.json"))
    check("constant-data lisa exit 4", r.returncode == 4, r.stderr.strip())

    # mc without seed -> exit 2
    r = run("lisa", "--edges", str(p3_edges), "--obs", str(p3_obs),
            "--method", "mc", "--out", str(tmp / "x.json"))
    check("mc without seed exit 2", r.returncode == 2)

    # gisa on constant data: p = 1 with zero-scale flag, exit 0
    gisa_out = tmp / "gisa_const.json"
    r = run("gisa", "--edges", str(ring_edges), "--obs",
            str(tmp / "ring_const.csv"), "--out", str(gisa_out))
    (tmp / "ring_const.csv").write_text("id,value\n" + "\n".join(f"r{i},5" for i in range(34)) + "\n")
    r = run("gisa", "--edges", str(ring_edges), "--obs", str(tmp / "ring_const.csv"),
            "--out", str(gisa_out))
    check("gisa constant exit 0", r.returncode == 0, r.stderr.strip())
    rep = json.loads(gisa_out.read_text())
    check("gisa constant p = 1", rep["p"]["analytic"] == 1.0)
    check("gisa constant zero-scale flag", "zero-scale" in rep["flags"])

    # gisa with empirical beta and mc
    gisa_out2 = tmp / "gisa_ring.json"
    r = run("gisa", "--edges", str(ring_edges), "--obs", str(ring_obs), "--method", "analytic",
            "--method", "mc", "--empirical-beta", "10", "--seed", "5", "--perms", "400",
            "--out", str(gisa_out2))
    check("gisa ring exit 0", r.returncode == 0, r.stderr.strip())
    rep = json.loads(gisa_out2.read_text())
    check("gisa ring has analytic+mc+empirical p",
          set(rep["p"].keys()) == {"analytic", "mc", "empirical_beta"})
    check("gisa ring empirical r = 10", rep["empirical_beta"]["r"] == 10)

    # simulate-null smoke with reps 1
    null_out = tmp / "null.json"
    r = run("simulate-null", "--n", "40", "--dist", "gaussian", "--stat", "moran",
            "--method", "beta", "--reps", "1", "--seed", "42", "--out", str(null_out),
            "--qq-csv", str(tmp / "qq.csv"))
    check("simulate-null smoke exit 0", r.returncode == 0, r.stderr.strip())
    rep = json.loads(null_out.read_text())
    check("simulate-null cell count", len(rep["cells"]) == 1)
    check("qq csv header", (tmp / "qq.csv").read_text().startswith(
        "stat,method,replicate,rank,expected,observed"))

    # power-study with a non-PD c: exit 2 naming the offending c
    star_edges = tmp / "star.csv"
    star_edges.write_text("src,dst\nc,l1\nc,l2\nc,l3\nc,l4\n")
    r = run("power-study", "--edges", str(star_edges), "--c-grid", "0,0.55", "--reps", "2",
            "--perms", "50", "--seed", "1", "--out", str(tmp / "x.json"))
    check("power-study non-PD exit 2", r.returncode == 2 and "0.55" in r.stderr, r.stderr.strip())

    # determinism across --threads on a small lisa run
    out1 = tmp / "det1.json"
    out4 = tmp / "det4.json"
    for out, threads in ((out1, "1"), (out4, "4")):
        r = run("lisa", "--edges", str(ring_edges), "--obs", str(ring_obs), "--stat", "geary",
                "--method", "beta", "--method", "mc", "--seed", "9", "--perms", "500",
                "--threads", threads, "--out", str(out))
        check(f"lisa det threads={threads} exit 0", r.returncode == 0, r.stderr.strip())
    check("lisa byte-identical across --threads", out1.read_bytes() == out4.read_bytes())

    # specfun-table (hidden audit subcommand)
    r = run("specfun-table", "--fn", "inc-beta", "--out", str(tmp / "sf.csv"))
    check("specfun-table exit 0", r.returncode == 0, r.stderr.strip())
    check("specfun-table header", (tmp / "sf.csv").read_text().startswith("x,a,b,value"))

    print(f"{len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
