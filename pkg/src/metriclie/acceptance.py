"""Acceptance suite: each criterion returns a :class:`CriterionResult`.

Criteria are deterministic (fixed seeds) and compare computed quantities
against closed-form values at the stated tolerances.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import catalog
from .catalog import FamilyParams, canonicalize
from .classifier import classify
from .core import MetricLieAlgebra, from_matrix_basis, killing_form, structure_report
from .curvature import curvature_property_suite, riemann, sectional, signature_signs
from .feasibility import FEASIBLE, CERTIFIED_INFEASIBLE, find_cyclic_metric, semisimple_cyclic_metrics
from .homogeneous import (
    cyclic_defect,
    is_cyclic,
    is_traceless,
    structure_to_torsion,
    tensor_inner,
    tensor_norm,
    torsion_to_structure,
    tv_decompose,
)
from .samples import random_basis_change, random_cyclic, random_family, random_metric_lie_algebra, random_semidirect


@dataclass(frozen=True)
class CriterionResult:
    key: str
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.key}: {self.title} ({self.detail}; {self.seconds:.2f}s)"


def _rel(a, b) -> float:
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    return float(np.max(np.abs(a - b), initial=0.0) / max(1.0, float(np.max(np.abs(b), initial=0.0))))


def _timed(key, title, fn) -> CriterionResult:
    t0 = time.perf_counter()
    passed, detail = fn()
    return CriterionResult(key, title, bool(passed), detail, time.perf_counter() - t0)


def gn_curvature(draws: int = 100, seed: int = 1) -> CriterionResult:
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(draws):
            al = rng.uniform(-3, 3, 4)
            e = catalog.make_Gn(al)
            d = riemann(e.algebra)
            ref = e.reference
            worst = max(worst, _rel(d.ricci, ref.ricci), _rel(d.ricci_eigenvalues, ref.principal_ricci),
                        _rel(d.scalar, ref.scalar), _rel(d.ricci[4, 4], -np.sum(al ** 2)))
        return worst <= 1e-9, f"{draws} draws, worst relative error {worst:.2e}"

    t0 = time.perf_counter()
    passed, detail = run()
    dt = time.perf_counter() - t0
    return CriterionResult("gn_curvature", "G^n Ricci eigen-data and scalar curvature, n = 5",
                           passed and dt < 1.0, f"{detail}, runtime {dt:.2f}s (limit 1s)", dt)


def hnp1_curvature(draws: int = 100, seed: int = 2) -> CriterionResult:
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(draws):
            q = int(rng.integers(2, 4))
            rho = rng.uniform(-2, 2, q)
            lam = rng.uniform(-2, 2, q - 1)
            e = catalog.make_Hnp1(rho, lam)
            d = riemann(e.algebra)
            ref = e.reference
            n = e.algebra.dim
            K = max(_rel(sectional(e.algebra, np.eye(n)[i], np.eye(n)[j], d), v)
                    for (i, j), v in ref.basic_sectional.items())
            worst = max(worst, _rel(d.R, ref.curvature), K, _rel(d.ricci, ref.ricci), _rel(d.scalar, ref.scalar))
        return worst <= 1e-9, f"{draws} draws, worst relative error {worst:.2e}"

    return _timed("hnp1_curvature", "H^{n+1} curvature components, sectional, Ricci and scalar", run)


def sl2_ricci(draws: int = 50, seed: int = 3) -> CriterionResult:
    def run():
        rng = np.random.default_rng(seed)
        worst_c = worst_r = 0.0
        signs_ok = True
        for _ in range(draws):
            l1, l2 = rng.uniform(0.1, 4, 2)
            e = catalog.make_sl2_cyclic(l1, l2)
            worst_c = max(worst_c, cyclic_defect(e.algebra))
            d = riemann(e.algebra)
            triple = np.array([-2 * l2 * (l1 + l2), -2 * l1 * (l1 + l2), 2 * l1 * l2])
            worst_r = max(worst_r, _rel(d.ricci, np.diag(triple)), _rel(d.ricci_eigenvalues, np.sort(triple)))
            signs_ok &= signature_signs(np.diag(d.ricci)) == "(-,-,+)"
        ok = worst_c <= 1e-10 and worst_r <= 1e-9 and signs_ok
        return ok, f"cyclic defect {worst_c:.1e}, Ricci error {worst_r:.1e}, signature (-,-,+): {signs_ok}"

    return _timed("sl2_ricci", "cyclic sl(2,R) principal Ricci curvatures", run)


def su2_algebra() -> np.ndarray:
    s = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]])]
    return from_matrix_basis([0.5j * x for x in s]).structure_constants


def biinvariant(seed: int = 4) -> CriterionResult:
    def run():
        worst_tv = worst_ric = 0.0
        min_kappa = np.inf
        for c in (catalog.so3_constants(), su2_algebra()):
            B = killing_form(c).matrix
            m = MetricLieAlgebra.build(c, -B)
            hs = tv_decompose(m)
            worst_tv = max(worst_tv, hs.norms[0], hs.norms[1])
            d = riemann(m)
            worst_ric = max(worst_ric, float(np.max(np.abs(d.ricci + 0.25 * B))))
            min_kappa = min(min_kappa, float(np.min(d.kappa)))
        ok = worst_tv <= 1e-10 and worst_ric <= 1e-10 and min_kappa >= -1e-10
        return ok, f"|S1|,|S2| <= {worst_tv:.1e}, |Ric + B/4| = {worst_ric:.1e}, min basic kappa {min_kappa:.3g}"

    return _timed("biinvariant", "so(3) and su(2) with metric -B", run)


def obstructions() -> CriterionResult:
    def run():
        msgs = []
        ok = True
        heis = catalog.make_heisenberg().algebra.c
        for name, c, want in (("heisenberg", heis, "certified"), ("so(3)", catalog.so3_constants(), "infeasible"),
                              ("su(2)", su2_algebra(), "infeasible"),
                              ("sl(2,R)", catalog.sl2_matrix_algebra().structure_constants, "feasible")):
            t0 = time.perf_counter()
            res = find_cyclic_metric(c)
            extra = ""
            if want == "certified":
                good = res.status == CERTIFIED_INFEASIBLE
            elif want == "infeasible":
                ss = semisimple_cyclic_metrics(c)
                good = res.status != FEASIBLE and not ss.feasible
                extra = f", semisimple route feasible={ss.feasible}"
            else:
                d = cyclic_defect(MetricLieAlgebra.build(c, res.solution)) if res.feasible else np.inf
                good = res.status == FEASIBLE and d <= 1e-8
                extra = f", witness defect {d:.1e}"
            dt = time.perf_counter() - t0
            good = good and dt <= 5.0
            ok &= good
            msgs.append(f"{name}: {res.status}{extra} in {dt:.2f}s")
        return ok, "; ".join(msgs)

    return _timed("obstructions", "cyclic-metric existence on Heisenberg, so(3), su(2), sl(2,R)", run)


def curvature_properties(draws: int = 200, seed: int = 6) -> CriterionResult:
    def run():
        rng = np.random.default_rng(seed)
        violations = []
        kinds = {"abelian": 0, "cyclic": 0}
        for t in range(draws):
            n = int(rng.integers(3, 6))
            if t % 20 == 0:
                m = MetricLieAlgebra.build(np.zeros((n, n, n)), np.eye(n))
                m = random_basis_change(m, rng)
                kinds["abelian"] += 1
            else:
                m = random_cyclic(n, rng)
                kinds["cyclic"] += 1
            for cl in curvature_property_suite(m, seed=t):
                if not cl.passed:
                    violations.append(f"draw {t}: {cl.clause} ({cl.detail})")
        detail = f"{draws} draws ({kinds['cyclic']} cyclic, {kinds['abelian']} abelian), {len(violations)} violations"
        if violations:
            detail += "; first: " + violations[0]
        return not violations, detail

    return _timed("curvature_properties", "flatness, scalar and sectional sign properties of cyclic metrics", run)


def _tv_inputs(count: int, seed: int) -> list:
    rng = np.random.default_rng(seed)
    out = []
    for t in range(count):
        n = int(rng.integers(2, 7))
        if t % 5 == 0 and 3 <= n <= 5:
            out.append(random_cyclic(n, rng))
        else:
            out.append(random_metric_lie_algebra(n, rng))
    return out


def tv_decomposition(count: int = 500, seed: int = 7) -> CriterionResult:
    def run():
        worst_rec = worst_orth = 0.0
        cyc_mismatch = tr_mismatch = cyclic_count = bad = 0
        for m in _tv_inputs(count, seed):
            hs = tv_decompose(m)
            S1, S2, S3 = hs.components
            nS = hs.norm_S
            rec = float(np.max(np.abs(hs.S - S1 - S2 - S3)))
            orth = max(abs(tensor_inner(m, A, B)) for A, B in ((S1, S2), (S1, S3), (S2, S3)))
            bad += rec > 1e-9 * nS or orth > 1e-9 * nS ** 2
            if nS > 0:
                worst_rec = max(worst_rec, rec / nS)
                worst_orth = max(worst_orth, orth / nS ** 2)
            ok, _ = is_cyclic(m)
            cyclic_count += ok
            cyc_mismatch += ok != (tensor_norm(m, S3) <= m.tol())
            tr_mismatch += is_traceless(m) != structure_report(m).unimodular
        passed = bad == 0 and cyc_mismatch == 0 and tr_mismatch == 0
        return passed, (f"{count} inputs ({cyclic_count} cyclic): reconstruction {worst_rec:.1e}, "
                        f"orthogonality {worst_orth:.1e}, cyclic mismatches {cyc_mismatch}, "
                        f"traceless mismatches {tr_mismatch}")

    return _timed("tv_decomposition", "structure tensor splits into orthogonal vectorial, cyclic and skew parts", run)


def torsion_round_trip(count: int = 500, seed: int = 7) -> CriterionResult:
    def run():
        worst = 0.0
        for m in _tv_inputs(count, seed):
            S = tv_decompose(m).S
            back = torsion_to_structure(structure_to_torsion(S))
            worst = max(worst, _rel(back, S))
        return worst <= 1e-10, f"{count} inputs, worst relative error {worst:.1e}"

    return _timed("torsion_round_trip", "structure tensor to torsion and back", run)


def _params_close(a: FamilyParams, b: FamilyParams, tol: float) -> bool:
    if a.tag != b.tag or len(a.factors) != len(b.factors):
        return False
    va, vb = a.vector(), b.vector()
    return va.shape == vb.shape and bool(np.all(np.abs(va - vb) <= tol * np.maximum(1.0, np.abs(vb))))


def classifier_round_trip(per_dim: int = 200, seed: int = 9) -> CriterionResult:
    def run():
        rng = np.random.default_rng(seed)
        fails = []
        worst = 0.0
        for n in (3, 4, 5):
            for t in range(per_dim):
                fp = random_family(n, rng)
                m = random_basis_change(catalog.make(fp).algebra, rng, orthogonal=True)
                want = canonicalize(fp)
                try:
                    r = classify(m, seed=t)
                except Exception as exc:  # noqa: BLE001 - any failure counts against the criterion
                    fails.append(f"{fp.describe()}: {exc}")
                    continue
                worst = max(worst, r.residual)
                if not _params_close(r.family, want, 1e-8) or r.residual > 1e-8:
                    fails.append(f"{fp.describe()} -> {r.family.describe()} (want {want.describe()})")
        special = [
            (catalog.make_Gn([1.3, -0.4, 0.0]), ("Gn", "Abelian")),
            (catalog.make_Hnp1([1.0, 0.5, 0.0], [0.8, -0.8]), ("Hnp1", "Abelian")),
        ]
        for e, tags in special:
            r = classify(random_basis_change(e.algebra, rng, orthogonal=True))
            got = tuple(f.tag for f in r.factors)
            if not (r.decomposable and got == tags):
                fails.append(f"{e.family.describe()}: factors {got}, decomposable {r.decomposable}")
        detail = f"{3 * per_dim} draws, worst residual {worst:.1e}, {len(fails)} failures"
        if fails:
            detail += "; first: " + fails[0]
        return not fails, detail

    t0 = time.perf_counter()
    passed, detail = run()
    dt = time.perf_counter() - t0
    return CriterionResult("classifier_round_trip", "classification of randomized catalog draws in dims 3-5",
                           passed and dt < 30.0, f"{detail}, runtime {dt:.1f}s (limit 30s)", dt)


def semidirect_criterion(draws: int = 100, seed: int = 10) -> CriterionResult:
    def run():
        rng = np.random.default_rng(seed)
        bad_sym = bad_skew = 0
        min_skew = np.inf
        for _ in range(draws):
            _, m = random_semidirect(rng, selfadjoint=True)
            bad_sym += not is_cyclic(m)[0]
        for _ in range(draws):
            _, m = random_semidirect(rng, selfadjoint=False)
            d = cyclic_defect(m)
            min_skew = min(min_skew, d)
            bad_skew += d <= 1e-6
        return bad_sym == 0 and bad_skew == 0, (
            f"selfadjoint actions non-cyclic: {bad_sym}/{draws}; non-selfadjoint with defect <= 1e-6: "
            f"{bad_skew}/{draws} (smallest defect {min_skew:.3g})")

    return _timed("semidirect_criterion", "orthogonal semidirect sums are cyclic iff the action is selfadjoint", run)


CRITERIA = (
    gn_curvature,
    hnp1_curvature,
    sl2_ricci,
    biinvariant,
    obstructions,
    curvature_properties,
    tv_decomposition,
    torsion_round_trip,
    classifier_round_trip,
    semidirect_criterion,
)


def run_all() -> list:
    return [crit() for crit in CRITERIA]
