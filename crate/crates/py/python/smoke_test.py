"""Builds the extension, imports it, and checks a few known values.

Usage: python3 crates/py/python/smoke_test.py
"""

import importlib
import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parents[3]


def build():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "gtm-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "libgtm_py.so"
    out = Path(tempfile.mkdtemp(prefix="gtm-smoke-"))
    shutil.copy(lib, out / "gtm.so")
    sys.path.insert(0, str(out))
    return importlib.import_module("gtm")


def main():
    gtm = build()
    tm = gtm.KappaSpec.thue_morse()
    assert tm.morphic_prefix(3) == [0, 1, 1, 0, 1, 0, 0, 1]
    assert tm.prefix(1 << 10) == tm.morphic_prefix(10)
    assert tm.window(1, 2, 5) == [1, 0, 0, 1, 0]
    assert tm.classify()["status"] == "NonPeriodic"

    lo, hi = tm.eval_series(0, 1, 2, 12)
    assert isinstance(lo, Fraction) and hi - lo < Fraction(1, 10**12)
    assert lo <= Fraction(412454033640, 10**12) + Fraction(1, 10**12) and hi >= Fraction(412454033640, 10**12)

    w = tm.stammer(0, 1)
    assert w["verified"] and w["bounds_hold"] and w["exponent"] > 1

    kernel = tm.kernel()
    assert kernel["transitions"] == [[0, 1], [1, 0]]

    mod3 = gtm.KappaSpec(3, 2, [[1, 2]], 0, 2)
    assert mod3.classify() == {"status": "Periodic", "offset": 0, "period": 3, "multiplier": 1}
    assert mod3.closed_form(0, 1, 3) == Fraction(5, 26)
    try:
        mod3.stammer(0, 1)
    except gtm.SpecError:
        pass
    else:
        raise AssertionError("periodic spec must be refused")

    pq, num, den = tm.continued_fraction(0, 1, 30)
    assert pq[0] == 0 and len(num) == 31
    for n in range(1, 31):
        assert num[n] * den[n - 1] - num[n - 1] * den[n] == (-1) ** (n - 1)

    x, product, lead, gap = gtm.gap_multiple(3, 2, 2)
    assert product == 3 * x and gtm.expand(product, 2)[0] == (1, lead) and gap > 2
    assert gtm.brute_force_period([0, 1] * 8, 2, 4) == (0, 2)
    assert abs(gtm.irrationality_estimate([0] + [1] * 400) - 2) < 0.01

    spec = gtm.KappaSpec.from_toml(tm.to_toml())
    assert spec == tm
    print("python smoke test passed")


if __name__ == "__main__":
    main()
