"""Command-line verification harness.

Usage: verify --suite all --p 4 --q 4 --n 1 --max-degree 5 --max-j 2 --json

Each (suite, triple) pair is an independent job; jobs run in a process pool
and the report is assembled in a fixed order, so output does not depend on
--jobs.  Exit status: 0 if nothing failed, 1 on any FAIL, 2 on bad usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .superpoly import ModelParams

SUITES = ("algebra", "representation", "harmonics", "laguerre", "wmodule", "functional", "fourier", "gkdim")
DEFAULT_TRIPLES = ((4, 4, 1), (6, 4, 1), (3, 5, 0))


@dataclass
class SuiteConfig:
    triples: List[Tuple[int, int, int]] = field(default_factory=lambda: list(DEFAULT_TRIPLES))
    max_degree: int = 5
    max_j: int = 2
    suites: Tuple[str, ...] = SUITES
    json: bool = False
    jobs: int = 1
    seed: int = 0

    def validate(self):
        for p, q, n in self.triples:
            if p < 2 or q < 2:
                raise ValueError(f"p >= 2 and q >= 2 required, got (p,q,n) = ({p},{q},{n})")
            if n < 0:
                raise ValueError(f"n >= 0 required, got {n}")
        if self.max_degree < 0 or self.max_j < 0:
            raise ValueError("caps must be nonnegative")


def _row(name, indices, status, lhs="", rhs="", reference="", **extra) -> dict:
    out = {"name": name, "indices": dict(indices), "status": status, "lhs": str(lhs), "rhs": str(rhs),
           "reference": reference}
    out.update(extra)
    return out


def _skipped(name, reason, reference="") -> dict:
    return _row(name, {}, "SKIPPED", reference=reference, reason=reason)


# ------------------------------------------------------------------ suites

def suite_algebra(P: ModelParams, cfg: SuiteConfig) -> List[dict]:
    from .liealg import verify_isomorphism, verify_jacobi, verify_jordan_identity
    from .operators import verify_sl2
    return verify_sl2(P.space) + verify_jordan_identity(P) + verify_jacobi(P) + verify_isomorphism(P)


def suite_representation(P: ModelParams, cfg: SuiteConfig) -> List[dict]:
    from .liealg import verify_homomorphism, verify_pi_c_well_defined, verify_tangential
    lc = 2 - P.M
    rows = []
    for lam in (lc, 0, 1):
        rows += verify_homomorphism(P, lam)
    for lam in (lc, lc - 1, lc + 1):
        rows += verify_tangential(P, lam)
    rows += verify_pi_c_well_defined(P, min(cfg.max_degree, 2))
    return rows


def suite_harmonics(P: ModelParams, cfg: SuiteConfig) -> List[dict]:
    from .harmonics import dim_formula, fischer_check, harmonic_basis, model_blocks, osp_preserves_harmonics
    ref = "spherical harmonics on a superspace block"
    rows = []
    for block in model_blocks(P):
        for k in range(max(cfg.max_degree, 6) + 1):
            got = len(harmonic_basis(block, k))
            want = dim_formula(block.m, block.n_odd, k)
            rows.append(_row("harmonic-dimension", {"block": block.name, "k": k},
                             "PASS" if got == want else "FAIL", got, want, ref))
        for k in range(min(cfg.max_degree, 4) + 1):
            rep = fischer_check(block, k)
            if rep["status"] == "SKIPPED":
                rows.append(_row("fischer", {"block": block.name, "k": k}, "SKIPPED", reference=ref,
                                 reason=rep["reason"]))
            else:
                rows.append(_row("fischer", {"block": block.name, "k": k}, rep["status"], rep["rank"],
                                 rep["dim_pk"], ref))
        for k in range(min(cfg.max_degree, 3) + 1):
            ok = osp_preserves_harmonics(block, k)
            rows.append(_row("osp-preserves-harmonics", {"block": block.name, "k": k},
                             "PASS" if ok else "FAIL", ok, True, ref))
    return rows


def laguerre_identity_rows(P: ModelParams) -> List[dict]:
    """Differential relations and the L_e recursion for j <= 6 at (mu+2k, nu+2l), k, l <= 2."""
    from .radial import laguerre_identities
    rows = []
    for k in range(3):
        for l in range(3):
            m, v = P.mu + 2 * k, P.nu + 2 * l
            for j in range(7):
                for name, (lhs, rhs) in laguerre_identities(m, v, j).items():
                    ok = lhs == rhs
                    rows.append(_row(name, {"mu": m, "nu": v, "j": j}, "PASS" if ok else "FAIL",
                                     "" if ok else lhs, "" if ok else rhs, LAGUERRE_REF))
    return rows


def laguerre_numeric_rows(P: ModelParams, tol: float = 1e-8) -> List[dict]:
    """Exact Laguerre functions in double precision against the generating-function coefficients."""
    from .radial import laguerre, laguerre_numeric_oracle
    rows = []
    xs = (0.5, 1.0, 2.0)
    for j in range(4):
        lam = laguerre(P.mu, P.nu, j, strict=False)
        exact = [float(lam.evaluate(x)) for x in xs]
        # at an exact zero of the function the relative error is measured
        # against its size over the sample points
        scale = max(abs(v) for v in exact)
        for x, e in zip(xs, exact):
            oracle = laguerre_numeric_oracle(P.mu, P.nu, j, x)
            err = abs(e - oracle) / max(abs(e), abs(oracle), 1e-300) if e else abs(oracle) / scale
            rows.append(_row("laguerre-numeric", {"j": j, "x": x}, "PASS" if err <= tol else "FAIL",
                             repr(e), repr(oracle), LAGUERRE_REF, note=f"relative error {err:.1e}"))
    return rows


LAGUERRE_REF = "generalized Laguerre functions"


def suite_laguerre(P: ModelParams, cfg: SuiteConfig) -> List[dict]:
    return laguerre_identity_rows(P) + laguerre_numeric_rows(P)


def suite_wmodule(P: ModelParams, cfg: SuiteConfig) -> List[dict]:
    from .minrep import phi_iso, verify_w_action
    rows = verify_w_action(P, cfg.max_j)
    for j in range(cfg.max_j + 1):
        rep = phi_iso(P, j)
        if rep["status"] == "SKIPPED":
            rows.append(_row("phi-intertwiner", {"j": j}, "SKIPPED", reference="intertwiner", reason=rep["reason"]))
        else:
            rows += rep["checks"]
    return rows


def suite_functional(P: ModelParams, cfg: SuiteConfig) -> List[dict]:
    from .orbitfunc import (gram_nondegeneracy, verify_integral_properties, verify_knu,
                            verify_radial_moment_oracle, verify_skew_symmetry)
    from .scalars import render
    ref = "orbit functional"
    rows = verify_knu(P) + verify_integral_properties(P, samples=10, seed=cfg.seed)
    rows += verify_radial_moment_oracle(20, seed=cfg.seed)
    gram = gram_nondegeneracy(P, 0)
    if gram["status"] == "SKIPPED":
        rows.append(_row("gram-determinant", {"j": 0}, "SKIPPED", reference=ref, reason=gram["reason"]))
    else:
        rows.append(_row("gram-determinant", {"j": 0, "size": gram["size"]}, gram["status"],
                         render(gram["determinant"]), "nonzero", ref))
    skew = verify_skew_symmetry(P, min(cfg.max_j, 1))
    if skew["status"] == "SKIPPED":
        rows.append(_row("skew-symmetry", {}, "SKIPPED", reference=ref, reason=skew["reason"]))
    else:
        rows += skew["rows"]
    for r in rows:
        if r["name"] in ("gram-determinant", "skew-symmetry") and r["status"] != "SKIPPED":
            r["note"] = CONJUGATION_NOTE
    return rows


CONJUGATION_NOTE = "conjugation acts on coefficients only; odd variables are fixed"


def suite_fourier(P: ModelParams, cfg: SuiteConfig) -> List[dict]:
    from .fourier import (verify_adjoint, verify_fourier_table, verify_ker_delta, verify_pi_hat_homomorphism,
                          verify_symbol_relations)
    rows = verify_symbol_relations(P)
    lc = 2 - P.M
    for lam in (lc, 0, 1):
        rows += verify_fourier_table(P, lam)
        rows += verify_ker_delta(P, lam, min(cfg.max_degree, 3))
        rows += verify_adjoint(P, lam)
        rows += verify_pi_hat_homomorphism(P, lam)
    return rows


def suite_gkdim(P: ModelParams, cfg: SuiteConfig) -> List[dict]:
    from .minrep import gk_dimension
    rep = gk_dimension(P)
    note = "l-range truncated (p+q odd)" if rep["truncated"] else ""
    row = _row("gk-dimension", {}, "PASS" if rep["degree"] == rep["expected"] else "FAIL", rep["degree"],
               rep["expected"], "Gelfand-Kirillov dimension")
    if note:
        row["note"] = note
    return [row]


SUITE_FUNCS: Dict[str, Callable[[ModelParams, SuiteConfig], List[dict]]] = {
    "algebra": suite_algebra,
    "representation": suite_representation,
    "harmonics": suite_harmonics,
    "laguerre": suite_laguerre,
    "wmodule": suite_wmodule,
    "functional": suite_functional,
    "fourier": suite_fourier,
    "gkdim": suite_gkdim,
}


def run_one(suite: str, triple: Tuple[int, int, int], cfg: SuiteConfig) -> dict:
    P = ModelParams(*triple)
    try:
        checks = SUITE_FUNCS[suite](P, cfg)
    except Exception as e:  # a crash is reported, not swallowed
        checks = [_row("suite-error", {}, "FAIL", type(e).__name__, str(e), "",
                       traceback=traceback.format_exc(limit=3))]
    for c in checks:
        if c["status"] == "SKIPPED" and not c.get("reason") and not c.get("note"):
            c["reason"] = "unspecified hypothesis"
    return {"suite": suite, "triple": {"p": triple[0], "q": triple[1], "n": triple[2]}, "checks": checks}


def run(cfg: SuiteConfig) -> Tuple[int, List[dict]]:
    cfg.validate()
    jobs = [(s, t) for t in cfg.triples for s in cfg.suites]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            futs = [ex.submit(run_one, s, t, cfg) for s, t in jobs]
            reports = [f.result() for f in futs]
    else:
        reports = [run_one(s, t, cfg) for s, t in jobs]
    failed = any(c["status"] == "FAIL" for r in reports for c in r["checks"])
    return (1 if failed else 0), reports


# ------------------------------------------------------------------ output

def format_text(reports: Sequence[dict]) -> str:
    lines = []
    for r in reports:
        t = r["triple"]
        counts = {"PASS": 0, "FAIL": 0, "SKIPPED": 0}
        for c in r["checks"]:
            counts[c["status"]] = counts.get(c["status"], 0) + 1
        status = "FAIL" if counts["FAIL"] else ("PASS" if counts["PASS"] else "SKIPPED")
        lines.append(f"{status:7s} {r['suite']:15s} (p,q,n)=({t['p']},{t['q']},{t['n']})  "
                     f"pass={counts['PASS']} fail={counts['FAIL']} skipped={counts['SKIPPED']}")
        for c in r["checks"]:
            if c["status"] == "FAIL":
                lines.append(f"    FAIL    {c['name']} {json.dumps(c['indices'], sort_keys=True)}: "
                             f"{c['lhs'][:200]} != {c['rhs'][:200]}")
            elif c["status"] == "SKIPPED":
                lines.append(f"    SKIPPED {c['name']} {json.dumps(c['indices'], sort_keys=True)}: "
                             f"{c.get('reason') or c.get('note')}")
    return "\n".join(lines)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verify", description="Exact checks for the minimal representation of osp(p,q|2n).")
    ap.add_argument("--suite", action="append", choices=("all",) + SUITES,
                    help="suite to run (repeatable, default all)")
    ap.add_argument("--p", type=int, action="append", help="p of a triple (repeatable)")
    ap.add_argument("--q", type=int, action="append", help="q of a triple (repeatable)")
    ap.add_argument("--n", type=int, action="append", help="n of a triple (repeatable)")
    ap.add_argument("--max-degree", type=int, default=5)
    ap.add_argument("--max-j", type=int, default=2)
    ap.add_argument("--json", action="store_true", help="emit the machine-readable report")
    ap.add_argument("--jobs", type=int, default=None, help="worker processes (default $OSPMIN_JOBS or 1)")
    ap.add_argument("--seed", type=int, default=0)
    return ap


def parse_config(argv: Optional[Sequence[str]] = None) -> SuiteConfig:
    ap = _parser()
    a = ap.parse_args(argv)
    given = [x is not None for x in (a.p, a.q, a.n)]
    if any(given) and not all(given):
        ap.error("--p, --q and --n must be given together")
    if all(given):
        if not len(a.p) == len(a.q) == len(a.n):
            ap.error("--p, --q and --n must be repeated the same number of times")
        triples = list(zip(a.p, a.q, a.n))
    else:
        triples = list(DEFAULT_TRIPLES)
    suites = SUITES if not a.suite or "all" in a.suite else tuple(s for s in SUITES if s in a.suite)
    jobs = a.jobs
    if jobs is None:
        env = os.environ.get("OSPMIN_JOBS")
        try:
            jobs = int(env) if env else 1
        except ValueError:
            ap.error(f"OSPMIN_JOBS must be an integer, got {env!r}")
    cfg = SuiteConfig(triples=triples, max_degree=a.max_degree, max_j=a.max_j, suites=suites,
                      json=a.json, jobs=max(1, jobs), seed=a.seed)
    try:
        cfg.validate()
    except ValueError as e:
        ap.error(str(e))
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 2
    code, reports = run(cfg)
    if cfg.json:
        out = reports[0] if len(reports) == 1 else reports
        sys.stdout.write(json.dumps(out, indent=1, sort_keys=True) + "\n")
    else:
        sys.stdout.write(format_text(reports) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
