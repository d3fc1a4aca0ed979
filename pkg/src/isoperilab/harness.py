"""Verification campaigns over parameter grids, with deterministic reports.

Each campaign runs a grid of independent cells (one per parameter
combination), each cell seeded by (campaign seed, cell index), so reports
are byte-identical across reruns and across worker counts.  Wall time and
worker count are recorded on the report object but excluded from the
canonical serialization for exactly that reason.

Campaigns:
    verify_theorem1  -- facet-count extremal bodies + tangent-body minimality
                        spot checks on random normal fans
    verify_theorem2  -- vertex-count extremal bodies + surface-minimizing
                        position + nuclear-norm bound
    verify_spectral  -- eigenvalue and volume certificates for random
                        origin-symmetric bodies (some routed through
                        central symmetrization of a random translate)
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .constructions import (
    central_symmetrize,
    extremal_facet_polytope,
    extremal_vertex_polytope,
    measured_forms,
)
from .errors import SpecError
from .polytope import (
    HPolytope,
    analyze,
    ball_iq_lower_bound,
    facet_enumeration,
)
from .positions import petty_minimize, schatten_bound_check
from .spectral import spectral_certificate

LINDELOF_TOL = 1e-9
FORMS_MATCH_TOL = 1e-9
PETTY_MATCH_TOL = 1e-6

_SPEC_TOKEN = re.compile(r"^[0-9n+\-*^() ]+$")


def eval_count_spec(expr: str, n: int) -> int:
    """Evaluate a small count expression like "2n", "n+1", "2^n" at n."""
    expr = expr.strip()
    if not _SPEC_TOKEN.match(expr):
        raise SpecError(f"bad count expression {expr!r}")
    py = expr.replace("^", "**").replace("n", "(n)")
    # implicit multiplication: "2(n)" -> "2*(n)"
    py = re.sub(r"(\d)\(", r"\1*(", py)
    try:
        value = eval(py, {"__builtins__": {}}, {"n": int(n)})
    except Exception as e:
        raise SpecError(f"bad count expression {expr!r}: {e}") from e
    if not isinstance(value, int):
        raise SpecError(f"count expression {expr!r} is not integral")
    return value


def spec_values(specs, n: int) -> list[int]:
    """Sorted, deduplicated values of the count expressions at n."""
    return sorted({eval_count_spec(s, n) for s in specs})


@dataclass(frozen=True)
class CampaignCell:
    index: int
    params: dict
    metrics: dict
    passed: bool

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "params": self.params,
            "metrics": self.metrics,
            "passed": self.passed,
        }


@dataclass
class CampaignReport:
    campaign: str
    seed: int
    settings: dict
    cells: list
    wall_time: float = 0.0
    workers: int = 1

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.cells)


def canonical_report_dict(report: CampaignReport) -> dict:
    """Serializable payload; excludes wall time and worker count so that
    reruns are byte-identical regardless of scheduling."""
    return {
        "campaign": report.campaign,
        "seed": report.seed,
        "settings": report.settings,
        "cells": [c.to_dict() for c in report.cells],
        "all_passed": report.all_passed,
    }


def canonical_json(report: CampaignReport) -> str:
    return json.dumps(
        canonical_report_dict(report), sort_keys=True, separators=(",", ":")
    )


def report_to_csv(report: CampaignReport) -> str:
    """One row per cell: index, passed, then sorted params and metrics."""
    param_keys = sorted({k for c in report.cells for k in c.params})
    metric_keys = sorted({k for c in report.cells for k in c.metrics})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["index", "passed"]
        + [f"param_{k}" for k in param_keys]
        + [f"metric_{k}" for k in metric_keys]
    )
    for c in report.cells:
        row = [c.index, c.passed]
        row += [_csv_value(c.params.get(k)) for k in param_keys]
        row += [_csv_value(c.metrics.get(k)) for k in metric_keys]
        writer.writerow(row)
    return buf.getvalue()


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def save_report(report: CampaignReport, path: str, fmt: str = "json") -> None:
    if fmt == "json":
        payload = canonical_json(report)
    elif fmt == "csv":
        payload = report_to_csv(report)
    else:
        raise SpecError(f"unknown report format {fmt!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload)


def _run_indexed(fn, count: int, workers: int) -> list:
    """Evaluate fn(0..count-1), collecting results in index order."""
    if workers <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        futures = [ex.submit(fn, i) for i in range(count)]
        return [f.result() for f in futures]


# ---------------------------------------------------------------------------
# facet-count campaign


def lindelof_trial(n: int, pairs: int, gen) -> float:
    """iq margin of a random-offset body over the all-tangent body with the
    same facet normals; nonnegative when tangency is minimal."""
    U = gen.standard_normal((pairs, n))
    U = U / np.linalg.norm(U, axis=1)[:, None]
    N = np.vstack([U, -U])  # antipodal pairs keep every draw bounded
    base = HPolytope(N, np.ones(2 * pairs), check=False)
    offs = gen.uniform(0.5, 2.0, 2 * pairs)
    loose = HPolytope(N, offs, check=False)
    return analyze(loose).iq - analyze(base).iq


def verify_theorem1(
    n_values=(2, 3, 4, 5),
    phi_specs=("n+1", "2n", "3n", "4n", "2^n"),
    trials: int = 10,
    seed: int = 0,
    workers: int = 1,
) -> CampaignReport:
    """Facet-count grid: build the extremal body for each (n, facet count),
    validate its exact combinatorics and unit volume, and spot-check the
    tangent-body lower bound on random normal fans."""
    grid = [(n, phi) for n in n_values for phi in spec_values(phi_specs, n)]

    def run_cell(idx: int) -> CampaignCell:
        n, phi = grid[idx]
        c = extremal_facet_polytope(n, phi)
        f = c.forms
        margin = math.inf
        violations = 0
        # enough pairs to span the space, capped so enumeration stays fast
        pairs = min(max((phi + 1) // 2, n + 1), n + 4)
        for t in range(trials):
            gen = rng.substream(seed, rng.DOMAIN_CAMPAIGN, idx, t)
            m = lindelof_trial(n, pairs, gen)
            margin = min(margin, m)
            if m < -LINDELOF_TOL:
                violations += 1
        band = f.iq * math.sqrt(1.0 + math.log(phi / n)) / n
        rate_est = c.extras.get("rate_estimate")
        rate_ref = c.extras.get("rate_reference")
        rate_ok = True
        if rate_est is not None:
            rate_ok = rate_est <= rate_ref + 1e-9
        passed = (
            f.facet_count == phi
            and abs(f.volume - 1.0) <= 1e-9
            and f.iq >= ball_iq_lower_bound(n) - 1e-9
            and violations == 0
            and rate_ok
        )
        return CampaignCell(
            index=idx,
            params={"n": n, "phi": phi, "branch": c.extras.get("branch")},
            metrics={
                "iq": f.iq,
                "volume": f.volume,
                "band": band,
                "rate_estimate": rate_est,
                "rate_reference": rate_ref,
                "lindelof_trials": trials,
                "lindelof_margin": margin,
                "lindelof_violations": violations,
            },
            passed=bool(passed),
        )

    t0 = time.perf_counter()
    cells = _run_indexed(run_cell, len(grid), workers)
    report = CampaignReport(
        campaign="theorem1",
        seed=seed,
        settings={
            "n_values": list(n_values),
            "phi_specs": list(phi_specs),
            "trials": trials,
        },
        cells=cells,
        workers=workers,
    )
    report.wall_time = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# vertex-count campaign


def verify_theorem2(
    n_values=(2, 3, 4, 5),
    beta_specs=("2n", "4n", "2^n"),
    seed: int = 0,
    workers: int = 1,
) -> CampaignReport:
    """Vertex-count grid: build the extremal body for each (n, vertex
    count), cross-check closed forms against measured geometry, then verify
    the surface-minimizing position and the nuclear-norm bound."""
    grid = [(n, beta) for n in n_values for beta in spec_values(beta_specs, n)]

    def run_cell(idx: int) -> CampaignCell:
        n, beta = grid[idx]
        c = extremal_vertex_polytope(n, beta)
        f = c.forms
        measured = measured_forms(c)
        forms_match = (
            abs(measured.volume - f.volume) <= FORMS_MATCH_TOL * f.volume
            and abs(measured.iq - f.iq) <= FORMS_MATCH_TOL * f.iq
            and measured.vertex_count == f.vertex_count
        )
        pr = petty_minimize(c.rep(), seed=rng.derive_seed(seed, rng.DOMAIN_CAMPAIGN, idx))
        sch = schatten_bound_check(pr, n)
        minimal_match = True
        if f.minimal_iq is not None:
            minimal_match = abs(pr.iq_after - f.minimal_iq) <= PETTY_MATCH_TOL
        band_target = math.sqrt(n * math.log(beta / n))
        reference_iq = f.minimal_iq if f.minimal_iq is not None else pr.iq_after
        passed = (
            f.vertex_count == beta
            and beta % 2 == 0
            and forms_match
            and pr.certified
            and sch.passed
            and minimal_match
        )
        return CampaignCell(
            index=idx,
            params={"n": n, "beta": beta, "branch": c.extras.get("branch")},
            metrics={
                "iq": f.iq,
                "minimal_iq": f.minimal_iq,
                "iq_after": pr.iq_after,
                "residual": pr.residual,
                "petty_iterations": pr.iterations,
                "schatten1": sch.schatten1,
                "schatten_bound": sch.bound,
                "band_target": band_target,
                "band_ratio": reference_iq / band_target if band_target > 0 else None,
                "forms_match": forms_match,
            },
            passed=bool(passed),
        )

    t0 = time.perf_counter()
    cells = _run_indexed(run_cell, len(grid), workers)
    report = CampaignReport(
        campaign="theorem2",
        seed=seed,
        settings={"n_values": list(n_values), "beta_specs": list(beta_specs)},
        cells=cells,
        workers=workers,
    )
    report.wall_time = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# spectral campaign


def _random_symmetric_body(n: int, m: int, gen) -> HPolytope:
    U = gen.standard_normal((m, n))
    U = U / np.linalg.norm(U, axis=1)[:, None]
    return HPolytope(np.vstack([U, -U]), np.ones(2 * m), check=False)


def _resymmetrized(body: HPolytope, gen, seed: int) -> HPolytope:
    """Translate the body, centrally symmetrize, and rebuild an H-rep; for
    an origin-symmetric input the output is the same body up to roundoff,
    which makes this a pipeline-integration check."""
    x = gen.standard_normal(body.dim)
    x = 0.3 * x / np.linalg.norm(x)
    shifted = HPolytope(body.normals, body.offsets + body.normals @ x, check=False)
    sym = central_symmetrize(shifted, seed=seed)
    facets = facet_enumeration(sym.body)
    return HPolytope(
        np.array([f.normal for f in facets]),
        np.array([f.offset for f in facets]),
        check=False,
    )


def verify_spectral(
    n_values=(2, 3),
    m_max: int = 8,
    trials: int = 50,
    samples: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
) -> CampaignReport:
    """Certificate grid over (dimension, normal-pair count): every trial
    must satisfy both certified inequalities; every fifth trial is routed
    through central symmetrization of a random translate first."""
    grid = [(n, m) for n in n_values for m in range(n, m_max + 1)]

    def run_cell(idx: int) -> CampaignCell:
        n, m = grid[idx]
        failures = 0
        symmetrized = 0
        max_lam = 0.0
        max_lam_ratio = 0.0
        max_vol_lhs = 0.0
        vol_rhs = 2.0 * math.sqrt(m / n)
        for t in range(trials):
            gen = rng.substream(seed, rng.DOMAIN_CAMPAIGN, idx, t)
            body = _random_symmetric_body(n, m, gen)
            if t % 5 == 4:
                body = _resymmetrized(
                    body, gen, seed=rng.derive_seed(seed, rng.DOMAIN_CAMPAIGN, idx, t)
                )
                symmetrized += 1
            cert = spectral_certificate(
                body,
                samples=samples,
                seed=rng.derive_seed(seed, rng.DOMAIN_CAMPAIGN, idx, t),
            )
            if not cert.passed:
                failures += 1
            max_lam = max(max_lam, cert.lambda_bound + cert.halfwidth)
            max_lam_ratio = max(
                max_lam_ratio, (cert.lambda_bound + cert.halfwidth) / cert.five_m
            )
            max_vol_lhs = max(max_vol_lhs, cert.vol_bound_lhs)
        return CampaignCell(
            index=idx,
            params={"n": n, "m": m},
            metrics={
                "trials": trials,
                "symmetrized_trials": symmetrized,
                "failures": failures,
                "five_m": 5.0 * m,
                "max_lambda_plus_hw": max_lam,
                "max_lambda_ratio": max_lam_ratio,
                "max_vol_lhs": max_vol_lhs,
                "vol_rhs": vol_rhs,
            },
            passed=bool(failures == 0),
        )

    t0 = time.perf_counter()
    cells = _run_indexed(run_cell, len(grid), workers)
    report = CampaignReport(
        campaign="spectral",
        seed=seed,
        settings={
            "n_values": list(n_values),
            "m_max": m_max,
            "trials": trials,
            "samples": samples,
        },
        cells=cells,
        workers=workers,
    )
    report.wall_time = time.perf_counter() - t0
    return report
