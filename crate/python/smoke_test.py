#!/usr/bin/env python3
"""Smoke test for the cddspectral Python extension.

Builds nothing itself: run `cargo build -p cdd-spectral-py` (or --release)
first, then `python3 python/smoke_test.py [--release]`.
"""

import argparse
import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def load_module(profile: str):
    lib = REPO / "target" / profile / "libcddspectral.so"
    if not lib.exists():
        sys.exit(f"{lib} not found; run `cargo build -p cdd-spectral-py` first")
    tmp = Path(tempfile.mkdtemp(prefix="cddspectral-"))
    shutil.copy(lib, tmp / "cddspectral.so")
    sys.path.insert(0, str(tmp))
    import cddspectral

    return cddspectral


def approx(a, b, rel=1e-6):
    assert math.isfinite(a) and math.isfinite(b), (a, b)
    assert abs(a - b) <= rel * max(abs(a), abs(b), 1e-300), (a, b)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--release", action="store_true")
    args = parser.parse_args()
    m = load_module("release" if args.release else "debug")
    checks = 0

    # distorted-means kernel
    approx(m.sigma(0.3, 0.0, 2.0, 1.0), 0.3)
    approx(m.sigma(0.5, -1.0, 1.0, 2.0), math.sinh(1) / math.sinh(2))
    assert m.sigma(0.5, 10.0, 1.0, 1.0) == math.inf
    approx(m.tau(0.25, 0.0, 2.0, 5.0), 0.25)
    approx(m.distorted_mean_m(0.5, 0.0, 1.0, 2.0, 1.0, 3.0), 2.0)
    approx(m.distorted_mean_m(0.5, 1.0, math.inf, 1.0, 1.0, 1.0), math.exp(1 / 8))
    approx(m.distorted_mean_mtilde(0.5, 0.0, 2.0, 1.0, 4.0, 16.0), 9.0)
    approx(m.classical_mean(-math.inf, 0.3, 5.0, 2.0), 2.0)
    checks += 8

    # model densities
    approx(m.model_density_value(2.0, 3.0, 0.7, 0.0), 1.0)
    approx(m.model_density_value(1.0, math.inf, 0.0, 2.0), math.exp(-2))
    a, b = m.model_support(2.0, 3.0, 0.0)
    approx(b - a, math.pi)
    form = m.canonical_form(1.0, math.inf, 2.0)
    assert form["case"] == "d1"
    approx(form["shift"], -2.0)
    approx(form["scale"], math.exp(2.0))
    g = m.sample_density(0.0, 2.0, 0.0, 0.0, 1.0, 5)
    assert all(abs(v - 1) < 1e-14 for v in g["values"])
    checks += 6

    # CD checker flags the convex exponential against K = 1
    n = 401
    dx = 4.0 / (n - 1)
    vals = [math.exp((-2 + dx * i) ** 2 / 2) for i in range(n)]
    rep = m.cd_differential_check(-2.0, dx, vals, 1.0, math.inf, 1e-6)
    assert not rep["passed"]
    approx(rep["max_violation"], 2.0, rel=1e-5)
    checks += 2

    # p-trigonometry
    approx(m.pi_p(2.0), math.pi, rel=1e-12)
    trig = m.PTrig(3.0)
    approx(trig.sin_p(trig.pi_p() / 2), 1.0, rel=1e-9)
    s, c = abs(trig.sin_p(0.7)), abs(trig.cos_p(0.7))
    approx(s**3 + c**3, 1.0, rel=1e-8)
    checks += 3

    # eigensolvers
    res = m.sl_first_eigenvalue(0.0, 2.0, 0.0, -math.pi / 2, math.pi / 2, 1e-9)
    approx(res["lambda"], 1.0, rel=1e-8)
    ex = m.sl_eigenvalue_exhaustion(2.0, 3.0, 0.0, -math.pi / 2, math.pi / 2, 1e-5)
    approx(ex["value"], 3.0, rel=1e-4)
    pl = m.plap_first_eigenvalue(0.0, 2.0, 0.0, -1.0, 1.0, 3.0, 1e-9)
    approx(pl["lambda"], 2.0 * (m.pi_p(3.0) / 2.0) ** 3, rel=1e-7)
    checks += 3

    # bound dispatch
    r = m.poincare_bound(0.0, 5.0, 2.0)
    approx(r["value"], math.pi**2 / 4)
    assert r["case"] == "1c"
    r = m.poincare_bound(2.0, 3.0, math.inf)
    approx(r["value"], 3.0)
    r = m.log_sobolev_bound(-1.0, math.inf, 2.0)
    approx(r["value"], m.ls_upsilon0(1.0, 2.0))
    assert r["exactness"] == "up_to_constants"
    r = m.p_poincare_bound(0.0, 4.0, m.pi_p(3.0), 3.0)
    approx(r["value"], 2.0, rel=1e-6)
    try:
        m.poincare_bound(-1.0, -2.0, 6.0)
        raise AssertionError("proviso violation not raised")
    except ValueError as e:
        assert "l_delta" in str(e)
    checks += 5

    # estimators
    n = 4001
    dx = 1.0 / (n - 1)
    est = m.muckenhoupt_estimate(0.0, dx, [1.0] * n)
    assert est["lower"] <= math.pi**2 <= est["upper"]
    approx(est["b_plus"], 1 / 16, rel=1e-5)
    approx(m.cheeger_constant(0.0, dx, [1.0] * n), 2.0, rel=1e-5)
    n = 40001
    dx = 16.0 / (n - 1)
    gauss = [math.exp(-((-8 + dx * i) ** 2) / 2) for i in range(n)]
    est = m.bobkov_gotze_estimate(-8.0, dx, gauss)
    assert est["lower"] <= 1.0 <= est["upper"]
    checks += 4

    print(f"smoke test passed: {checks} checks")


if __name__ == "__main__":
    main()
