"""The fifteen acceptance criteria, each with its time limit.

Every test records one line (criterion, verdict, elapsed seconds, detail);
the lines are printed together at the end of the run by conftest.py.
"""

import time

from ospmin.cli import SuiteConfig, laguerre_identity_rows, laguerre_numeric_rows, suite_harmonics
from ospmin.fourier import verify_adjoint, verify_ker_delta
from ospmin.liealg import (verify_homomorphism, verify_isomorphism, verify_jacobi, verify_jordan_identity,
                           verify_tangential)
from ospmin.minrep import gk_dimension, phi_iso, verify_w_action
from ospmin.operators import verify_sl2
from ospmin.orbitfunc import (gram_nondegeneracy, verify_integral_properties, verify_knu,
                              verify_radial_moment_oracle, verify_skew_symmetry)
from ospmin.superpoly import ModelParams

TRIPLES = [ModelParams(4, 4, 1), ModelParams(6, 4, 1), ModelParams(3, 5, 0)]
RESULTS = {}


def _summary(rows):
    fails = [r for r in rows if r["status"] == "FAIL"]
    passes = sum(r["status"] == "PASS" for r in rows)
    skips = sum(r["status"] == "SKIPPED" for r in rows)
    return fails, f"{passes} pass, {len(fails)} fail, {skips} skipped"


def _record(number, title, rows, elapsed, limit=None):
    fails, detail = _summary(rows)
    ok = not fails and any(r["status"] == "PASS" for r in rows)
    if limit is not None and elapsed >= limit:
        ok = False
        detail += f"; over the {limit:g} s limit"
    RESULTS[number] = (title, ok, elapsed, detail)
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'} ({elapsed:.1f} s) {title}: {detail}"
    print(line)
    assert ok, (line, fails[:3])


def _timed(fn):
    t0 = time.perf_counter()
    rows = fn()
    return rows, time.perf_counter() - t0


def test_01_sl2_triple():
    rows, dt = _timed(lambda: [r for P in TRIPLES for r in verify_sl2(P.space)])
    _record(1, "sl(2) relations and osp invariance", rows, dt, 5)


def test_02_jordan_tkk():
    rows, dt = _timed(lambda: [r for P in TRIPLES for f in (verify_jordan_identity, verify_jacobi,
                                                           verify_isomorphism) for r in f(P)])
    _record(2, "Jordan identity, super-Jacobi, isomorphism brackets", rows, dt, 30)


def test_03_homomorphism():
    rows, slowest = [], 0.0
    for P in TRIPLES:
        part, dt = _timed(lambda: [r for lam in (2 - P.M, 0, 1) for r in verify_homomorphism(P, lam)])
        rows += part
        slowest = max(slowest, dt)
    _record(3, "representation homomorphism at lambda in {2-M, 0, 1} (slowest triple timed)", rows, slowest, 60)


def test_04_tangentiality():
    def run():
        out = []
        for P in TRIPLES:
            lc = 2 - P.M
            for lam in (lc, lc - 1, lc + 1):
                out += verify_tangential(P, lam)
        return out
    rows, dt = _timed(run)
    _record(4, "tangential iff lambda = 2 - M", rows, dt)


def test_05_harmonics():
    cfg = SuiteConfig(max_degree=6)

    def run():
        rows = []
        for P in TRIPLES:
            rows += [r for r in suite_harmonics(P, cfg) if r["name"] != "fischer" or r["indices"]["k"] <= 4]
        return rows
    rows, dt = _timed(run)
    _record(5, "harmonic dimensions (k <= 6) and Fischer decomposition (k <= 4)", rows, dt)


def test_06_laguerre_identities():
    rows, dt = _timed(lambda: [r for P in TRIPLES for r in laguerre_identity_rows(P)])
    _record(6, "Laguerre differential relations and L_e recursion", rows, dt)


def test_07_laguerre_numeric():
    rows, dt = _timed(lambda: [r for P in TRIPLES for r in laguerre_numeric_rows(P, 1e-8)])
    _record(7, "Laguerre values against the generating function (1e-8)", rows, dt, 5)


def test_08_w_action():
    P = TRIPLES[0]
    rows, dt = _timed(lambda: verify_w_action(P, 2))
    _record(8, "W-module Bessel and L_e actions, j <= 2, at (4,4,1)", rows, dt, 600)


def test_09_structure_w():
    def run():
        rows = []
        for P in TRIPLES:
            for j in range(3):
                rep = phi_iso(P, j)
                if rep["status"] == "SKIPPED":
                    rows.append({"name": "phi", "status": "SKIPPED", "reason": rep["reason"]})
                else:
                    rows += rep["checks"]
        return rows
    rows, dt = _timed(run)
    _record(9, "dim W_j identity and intertwiner relations", rows, dt)


def test_10_gk_dimension():
    def run():
        rows = []
        for P in TRIPLES:
            rep = gk_dimension(P)
            rows.append({"name": "gk", "status": "PASS" if rep["degree"] == P.p + P.q - 3 else "FAIL"})
        return rows
    rows, dt = _timed(run)
    _record(10, "GK dimension p+q-3", rows, dt, 5)


def test_11_knu_integral():
    rows, dt = _timed(lambda: [r for P in TRIPLES + [ModelParams(6, 6, 2), ModelParams(5, 7, 3)] for r in verify_knu(P)])
    assert any(r["name"] == "sigma-factor" and r["indices"]["n"] == 3 for r in rows)
    _record(11, "integral of Ktilde_{nu/2}^2 and the Sigma factor", rows, dt)


def test_12_integral_properties():
    rows, dt = _timed(lambda: [r for P in TRIPLES for r in verify_integral_properties(P, samples=10, seed=0)])
    _record(12, "properties of the orbit integral on 10 samples per triple", rows, dt)


def test_13_skew_symmetry():
    P = TRIPLES[0]

    def run():
        rep = verify_skew_symmetry(P, 1)
        gram = gram_nondegeneracy(P, 0)
        return rep["rows"] + [{"name": "gram", "status": gram["status"]}]
    rows, dt = _timed(run)
    _record(13, "skew-symmetry on W_{<=1} and nondegenerate Gram on W_0 at (4,4,1)", rows, dt, 900)


def test_14_fourier():
    def run():
        rows = []
        for P in TRIPLES:
            for lam in (2 - P.M, 0, 1):
                rows += verify_ker_delta(P, lam, 3)
                rows += verify_adjoint(P, lam)
        return rows
    rows, dt = _timed(run)
    _record(14, "Laplacian commutators, ker Delta criterion, adjoint identities", rows, dt, 60)


def test_15_radial_moment_quadrature():
    rows, dt = _timed(lambda: verify_radial_moment_oracle(20, seed=0, tol=1e-8))
    assert len(rows) == 20
    _record(15, "closed-form radial moments against quadrature (1e-8)", rows, dt)
