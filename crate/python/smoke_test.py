"""Smoke test for the ordpsr Python bindings.

Run after `pip install --no-build-isolation ./crates/py`:

    python3 python/smoke_test.py
"""

import json
import pathlib
import sys

import ordpsr

SCENARIOS = pathlib.Path(__file__).resolve().parent.parent / "crates" / "cli" / "scenarios"


def scenario(name):
    return (SCENARIOS / f"{name}.json").read_text()


def check(cond, what):
    if not cond:
        print(f"FAIL {what}")
        sys.exit(1)
    print(f"ok   {what}")


def main():
    check(isinstance(ordpsr.__version__, str), f"version {ordpsr.__version__}")

    r = ordpsr.run_report("pipeline", scenario("diag-ordinary"))
    check(r["schema"] == "ordpsr-report/1" and r["failures"] == [], "diag-ordinary pipeline")
    check(r["law"]["ordinary"]["is_ordinary"] is True, "diag-ordinary is ordinary")

    r = ordpsr.run_report("criterion", scenario("plane-tower-r2"))
    lam = r["tower"]["lenstra"]
    check(lam["criterion_met"] and lam["cotangent_length"] == lam["eta_length"] == 2, "plane tower criterion")

    text = ordpsr.render_text(ordpsr.run("validate", scenario("s3-irreducible")))
    check(text.startswith("schema: ordpsr-report/1\n"), "text rendering")

    lenstra = json.loads(ordpsr.lenstra(5, 1, 8, '{"kind": "family", "r": 2}'))
    check(lenstra["verdict"]["criterion_met"], "lenstra family r=2")

    try:
        ordpsr.run("pipeline", scenario("s3-irreducible"), budget=10)
        check(False, "budget overflow raises")
    except ordpsr.BudgetExceeded:
        check(True, "budget overflow raises BudgetExceeded")

    try:
        ordpsr.run("pipeline", "{not json")
        check(False, "bad input raises")
    except ordpsr.InputError as e:
        check(isinstance(e, ordpsr.OrdpsrError), "bad input raises InputError")

    a = ordpsr.corpus(seed=3, count=1)
    b = ordpsr.corpus(seed=3, count=1)
    check(a == b and len(a[1]) == 7, "corpus is deterministic")
    check(ordpsr.corpus(seed=4, count=1)[0] != a[0], "corpus checksum depends on seed")

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
