"""Smoke test for the pynonholo extension.

Builds the extension with cargo if no compiled library is found, loads it
from a scratch directory and exercises every binding.

    python3 python/smoke_test.py
"""

import importlib
import math
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def find_library():
    override = os.environ.get("PYNONHOLO_LIB")
    if override:
        return Path(override)
    for profile in ("release", "debug"):
        for name in ("libpynonholo.so", "libpynonholo.dylib", "pynonholo.dll"):
            candidate = ROOT / "target" / profile / name
            if candidate.exists():
                return candidate
    subprocess.run(
        ["cargo", "build", "-p", "nonholo-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    return ROOT / "target" / "debug" / "libpynonholo.so"


def load():
    scratch = Path(tempfile.mkdtemp())
    suffix = ".pyd" if sys.platform == "win32" else ".so"
    shutil.copy(find_library(), scratch / ("pynonholo" + suffix))
    sys.path.insert(0, str(scratch))
    return importlib.import_module("pynonholo")


def main():
    nh = load()

    assert "fig16" in nh.figures()

    trace = nh.simulate(figure="fig13", dt=1e-3)
    assert len(trace["t"]) == len(trace["e_C"]) == 30001
    assert trace["e_C"][0] == -10.0
    summary = trace["summary"]
    assert summary["zero_crossings"] == 0, summary
    assert abs(trace["e_C"][-1]) < 0.05
    assert all(math.isnan(v) for v in trace["F_R"])

    text = nh.dump_config("fig14")
    circle = nh.simulate(config=text, duration=30.0)
    assert abs(circle["a_lat"][-1] - 2.0) < 0.02

    verdict = nh.stability(-0.5, 0.02)
    roots = sorted(re for re, _ in verdict["eigenvalues"])
    assert verdict["stable"] and verdict["agree"]
    assert abs(roots[0] + 3.438391) < 1e-6 and abs(roots[1] + 0.452659) < 1e-6
    assert not nh.stability(0.1, 0.02)["stable"]
    a = nh.kinematic_matrix(-0.5, 0.02)
    assert a[0] == [0.0, 20.0]

    value, slope = nh.wrapper(0.0, 3, 0.7)
    assert value == 0.0 and slope == 1.0
    assert nh.wrapper(5.0, None, 0.7) == (0.7, 0.0)
    assert abs(nh.wrapper(1.0, 2, math.pi / 2)[0] - math.atan(1.0)) < 1e-15

    path = nh.periodic_path(corners=3, period=250.0)
    assert abs(path["psi"][-1] - 2 * math.pi) < 1e-9
    assert math.hypot(path["x"][-1], path["y"][-1]) < 1e-6

    try:
        nh.simulate(config="[controller]\nk9 = 1\n")
    except ValueError as e:
        assert "controller.k9" in str(e)
    else:
        raise AssertionError("unknown key accepted")

    guard = (
        '[controller]\nmode = "none"\n'
        "[sim]\nduration = 1.0\nopen_loop = { gamma_offset = 1.5707963267 }\n"
    )
    try:
        nh.simulate(config=guard)
    except nh.GuardTripped as e:
        assert "guard tripped" in str(e)
    else:
        raise AssertionError("guard did not trip")

    print("pynonholo smoke test passed")


if __name__ == "__main__":
    main()
