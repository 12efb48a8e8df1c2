"""End-to-end checks of the otreg command line: repeated runs are byte
identical, exit codes follow 0 pass / 2 threshold fail / 3 solver fail, and
a failed solve never yields a passing report."""
import filecmp
import json
import pathlib
import subprocess
import sys
import tempfile

otreg, configs = sys.argv[1], pathlib.Path(sys.argv[2])
failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def run(*args):
    return subprocess.run([otreg, *map(str, args)], capture_output=True, text=True).returncode


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    base = json.loads((configs / "obliqueness-identity.json").read_text())
    base["solver"]["n_targets"] = 2000

    def write(name, doc):
        p = tmp / f"{name}.json"
        p.write_text(json.dumps(doc))
        return p

    good = write("good", base)
    for d in ("a", "b"):
        check(run("--threads", 2, "run", "--config", good, "--out-dir", tmp / "runs" / d / "good") == 0,
              f"run {d} exits 0")
    a, b = tmp / "runs/a/good", tmp / "runs/b/good"
    produced = sorted(p.name for p in a.iterdir() if p.name != "timing.json")
    match, mismatch, errors = filecmp.cmpfiles(a, b, produced, shallow=False)
    check(not mismatch and not errors, f"repeated runs byte identical ({len(match)} files)")
    check(run("--threads", 1, "run", "--config", good, "--out-dir", tmp / "serial") == 0, "serial run exits 0")
    same = all(filecmp.cmp(a / f, tmp / "serial" / f, shallow=False) for f in produced)
    check(same, "thread count does not change outputs")

    strict = dict(base, thresholds=[{"metric": "margin_min", "op": ">", "value": 2.0}])
    check(run("run", "--config", write("strict", strict), "--out-dir", tmp / "runs/a/strict") == 2,
          "threshold failure exits 2")
    broken = dict(base, solver=dict(base["solver"], max_iter=1, tol=1e-14))
    check(run("run", "--config", write("broken", broken), "--out-dir", tmp / "runs/a/broken") == 3,
          "solver failure exits 3")
    res = json.loads((tmp / "runs/a/broken/result.json").read_text())
    check(res["pass"] is False and res["status"] == "solver_fail", "failed solve is recorded as failing")
    check(run("solve", "--config", write("broken2", broken), "--out", tmp / "sol.json") == 3, "solve exits 3")
    check(not (tmp / "sol.json").exists(), "failed solve writes no solution")

    check(run("report", "--dir", tmp / "runs/a", "--out", tmp / "r1.json") == 3, "report exits 3 with a solver failure")
    check(json.loads((tmp / "r1.json").read_text())["pass"] is False, "report does not pass")
    run("report", "--dir", tmp / "runs/a", "--out", tmp / "r2.json")
    check(filecmp.cmp(tmp / "r1.json", tmp / "r2.json", shallow=False), "report byte identical")
    check(run("report", "--dir", tmp / "runs/b", "--out", tmp / "r3.json") == 0, "report of passing runs exits 0")

    check(run("solve", "--config", good, "--out", tmp / "good_sol.json") == 0, "solve exits 0")
    sol = json.loads((tmp / "good_sol.json").read_text())
    check(isinstance(sol, dict) and len(sol) > 0, "solution JSON written")
    check(run("--seed", 9, "run", "--config", good, "--out-dir", tmp / "seeded") == 0, "--seed accepted")
    echoed = json.loads((tmp / "seeded/result.json").read_text())["config"]["seed"]
    check(echoed == 9, "--seed overrides the config seed")

    bad = dict(base, solver={"n_targets": 10, "tolerance": 1e-8})
    check(run("run", "--config", write("bad", bad), "--out-dir", tmp / "bad") == 1, "invalid config exits 1")

sys.exit(1 if failures else 0)
