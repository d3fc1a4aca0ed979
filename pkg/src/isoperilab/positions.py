"""Linear positions of a polytope: surface-minimizing (Petty) position and
the Brascamp-Lieb normal form of an origin-symmetric body.

The surface area of a volume-preserving image AK is computed from the area
measure of K alone, so the optimization never re-enumerates geometry:

    surface(AK) = sum_i w_i * |A^-T u_i| * |det A|.

petty_minimize drives det-1 maps to the position where the image's area
measure is isotropic (covariance proportional to the identity), which is
the stationarity condition for minimal surface area.  bl_transform puts an
origin-symmetric body into the normal form where its standardized normals
resolve the identity, enabling sharp volume bounds.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import numkit, rng
from .errors import (
    DegeneracyError,
    IsoperilabError,
    SingularMatrixError,
    SpecError,
)
from .polytope import AreaMeasure, HPolytope, analyze, mc_volume

PETTY_TOL = 1e-8
PETTY_MAX_ITER = 500
PETTY_RESTARTS = 20
PETTY_MIN_DAMPING = 1e-7
BL_PAIR_TOL = 1e-9
BL_PARTITION_TOL = 1e-9
BL_TRACE_TOL = 1e-10
BL_WEIGHT_WARN = 1e-12
EXACT_VOLUME_MAX_DIM = 6


@dataclass(frozen=True)
class PositionResult:
    A: np.ndarray
    iq_before: float
    iq_after: float
    residual: float
    iterations: int
    restarts_used: int
    certified: bool


@dataclass(frozen=True)
class SchattenCheck:
    schatten1: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class BLDecomposition:
    """Normal form of an origin-symmetric polytope.

    B is the positive-definite map carrying the input to `body`, whose unit
    normals u (rows) and weights c satisfy sum_i c_i u_i u_i^T = I with
    sum_i c_i = n; `body` has halfspaces <u_i, x> <= 1/sqrt(c_i) in +- pairs.
    """

    B: np.ndarray
    c: np.ndarray
    u: np.ndarray
    residual: float
    body: HPolytope


@dataclass(frozen=True)
class BLVolumeCheck:
    vol_root: float
    vol_root_upper: float
    product_bound: float
    global_bound: float
    samples: int
    method: str
    passed: bool


def _image_surface_and_cov(U: np.ndarray, w: np.ndarray, A: np.ndarray):
    """Surface area of AK and covariance of its area measure, det A = 1."""
    try:
        W = np.linalg.solve(A.T, U.T).T
    except np.linalg.LinAlgError as e:
        raise SingularMatrixError(f"map is singular: {e}") from e
    norms = np.linalg.norm(W, axis=1)
    surf = float(w @ norms)
    C = (W * (w / norms)[:, None]).T @ W
    return surf, numkit.symmetrize(C)


def surface_area_of_image(am: AreaMeasure, A: np.ndarray) -> float:
    """Surface area of AK from the area measure of K, for invertible A."""
    A = np.asarray(A, dtype=float)
    try:
        W = np.linalg.solve(A.T, am.normals.T).T
    except np.linalg.LinAlgError as e:
        raise SingularMatrixError(f"map is singular: {e}") from e
    return float(
        am.weights @ np.linalg.norm(W, axis=1) * abs(numkit.det(A))
    )


def isotropy_residual(am: AreaMeasure) -> float:
    """max-norm distance of n*Cov/trace from the identity (0 = isotropic)."""
    U, w = am.normals, am.weights
    C = (U * w[:, None]).T @ U
    n = U.shape[1]
    return float(np.abs(C * (n / np.trace(C)) - np.eye(n)).max())


def _cov_residual(C: np.ndarray) -> float:
    n = C.shape[0]
    return float(np.abs(C * (n / np.trace(C)) - np.eye(n)).max())


def petty_minimize(
    P,
    tol: float = PETTY_TOL,
    max_iter: int = PETTY_MAX_ITER,
    restarts: int = PETTY_RESTARTS,
    seed: int = 0,
) -> PositionResult:
    """Volume-preserving map minimizing the surface area of the image.

    Damped fixed-point iteration: at each step the current image's area
    measure covariance C is normalized to M = n C / trace(C) and the map is
    updated by the det-1 normalization of M^(theta/2), probing theta = 1,
    1/2, 1/4, ... and keeping the trial with the lowest exactly evaluated
    surface area (full steps can oscillate across a valley; the probe
    breaks such cycles).  On stagnation the iteration restarts from a small
    random perturbation of the best map found (seeded; up to `restarts`
    times).  The best iterate is always retained and includes the identity,
    so iq never increases.

    The result is certified when the final image's isotropy residual is at
    most tol, the stationarity condition for the minimal position.
    """
    g = analyze(P)
    n = g.dim
    am = g.area_measure
    U, w = am.normals, am.weights
    vol_pow = g.volume ** ((n - 1) / n)
    iq_before = g.iq

    A = np.eye(n)
    surf_identity, C = _image_surface_and_cov(U, w, A)
    surf = surf_identity
    resid = _cov_residual(C)
    best_A, best_surf, best_resid = A, surf, resid
    iterations = 0
    restarts_used = 0

    # A candidate beats a reference on a clear surface decrease, or (near
    # the optimum, where the decrease per step falls below fp resolution)
    # on a surface-neutral move with a smaller isotropy residual.
    def _better(s_new, r_new, s_ref, r_ref, resid_factor=1.0):
        if s_new < s_ref * (1.0 - 1e-14):
            return True
        return s_new <= s_ref * (1.0 + 1e-12) and r_new < resid_factor * r_ref

    while iterations < max_iter and resid > tol:
        M = numkit.symmetrize(C * (n / np.trace(C)))
        # probe step sizes 1, 1/2, 1/4, ... while halving keeps improving;
        # a full step can jump across the valley (a 2-cycle with
        # microscopic descent), and the probe is what breaks that cycle
        theta = 1.0
        trial = None
        while theta > PETTY_MIN_DAMPING:
            step = numkit.psd_power(M, theta / 2.0)
            A_try = numkit.normalize_det_one(step @ A)
            surf_try, C_try = _image_surface_and_cov(U, w, A_try)
            iterations += 1
            resid_try = _cov_residual(C_try)
            cand = (A_try, surf_try, C_try, resid_try)
            if trial is None or _better(surf_try, resid_try, trial[1], trial[3]):
                trial = cand
            else:
                break
            theta /= 2.0
        stepped = trial is not None and _better(
            trial[1], trial[3], surf, resid, resid_factor=0.9
        )
        if stepped:
            A, surf, C, resid = trial
            if _better(surf, resid, best_surf, best_resid):
                best_A, best_surf, best_resid = A, surf, resid
            continue
        if restarts_used >= restarts:
            break
        restarts_used += 1
        gen = rng.substream(seed, rng.DOMAIN_PERTURB, restarts_used)
        for _ in range(50):
            Q = np.eye(n) + 0.05 * gen.standard_normal((n, n))
            cand = Q @ best_A
            if numkit.det(cand) > 1e-12:
                A = numkit.normalize_det_one(cand)
                break
        else:  # pragma: no cover - perturbations of det-1 maps stay regular
            break
        surf, C = _image_surface_and_cov(U, w, A)
        resid = _cov_residual(C)

    if _better(surf, resid, best_surf, best_resid):
        best_A, best_surf, best_resid = A, surf, resid
    if best_surf > surf_identity:
        # the identity is always admissible, so the image never gets worse
        best_A = np.eye(n)
        best_surf, C_best = _image_surface_and_cov(U, w, best_A)
    else:
        _, C_best = _image_surface_and_cov(U, w, best_A)
    residual = _cov_residual(C_best)
    return PositionResult(
        A=best_A,
        iq_before=iq_before,
        iq_after=best_surf / vol_pow,
        residual=residual,
        iterations=iterations,
        restarts_used=restarts_used,
        certified=bool(residual <= tol),
    )


def schatten_bound_check(result: PositionResult, n: int) -> SchattenCheck:
    """Nuclear-norm bound on the optimal map: since the image's surface
    area is within each singular direction's stretch of the original,
    ||A||_S1 <= n * iq_before / iq_after for the det-1 minimizer."""
    s1 = numkit.schatten1(result.A)
    bound = n * result.iq_before / result.iq_after + 1e-8
    return SchattenCheck(schatten1=s1, bound=bound, passed=bool(s1 <= bound))


def _match_antipodal_pairs(N: np.ndarray, t: np.ndarray):
    m2 = N.shape[0]
    if m2 % 2:
        raise SpecError("odd number of halfspaces; body cannot be symmetric")
    used = np.zeros(m2, dtype=bool)
    reps = []
    for i in range(m2):
        if used[i]:
            continue
        d = np.linalg.norm(N + N[i], axis=1)
        d[used] = np.inf
        d[i] = np.inf
        j = int(np.argmin(d))
        if d[j] > BL_PAIR_TOL:
            raise SpecError(
                f"halfspace {i} (normal {N[i]}) has no antipodal partner"
            )
        if abs(t[j] - t[i]) > BL_PAIR_TOL * max(1.0, abs(t[i])):
            raise SpecError(
                f"halfspaces {i},{j} are antipodal but offsets differ: "
                f"{t[i]} vs {t[j]}"
            )
        used[i] = used[j] = True
        reps.append(i)
    return reps


def bl_transform(hp: HPolytope) -> BLDecomposition:
    """Brascamp-Lieb normal form of an origin-symmetric H-polytope.

    Halfspaces are matched into antipodal pairs (u, tau), (-u, tau); the
    standardized normals y_i = u_i / tau_i are whitened by G^(-1/2) with
    G = sum_i (y_i y_i^T + (-y_i)(-y_i)^T) / 2 ... i.e. G = Y Y^T over one
    representative per pair.  The output body B K has unit normals u_i and
    offsets 1/sqrt(c_i) with sum_i c_i u_i u_i^T = I exactly.
    """
    n = hp.dim
    reps = _match_antipodal_pairs(hp.normals, hp.offsets)
    Y = (hp.normals[reps] / hp.offsets[reps][:, None]).T  # n x m
    m = Y.shape[1]
    G = numkit.symmetrize(Y @ Y.T)
    eigvals, _ = numkit.jacobi_eigh(G)
    if eigvals[-1] <= 1e-12 * eigvals[0]:
        raise DegeneracyError("standardized normals do not span the space")
    B = numkit.psd_power(G, 0.5)
    Cmat = numkit.psd_power(G, -0.5) @ Y
    # a single whitening pass inherits spectral error of order
    # eps * cond(G); polish until the resolution holds to roundoff
    for _ in range(3):
        R = numkit.symmetrize(Cmat @ Cmat.T)
        if float(np.abs(R - np.eye(n)).max()) <= 1e-14:
            break
        Cmat = numkit.psd_power(R, -0.5) @ Cmat
        B = numkit.psd_power(R, 0.5) @ B
    c = (Cmat**2).sum(axis=0)
    if np.any(c < BL_WEIGHT_WARN):
        warnings.warn(
            "near-zero weight in normal form; a halfspace is almost redundant",
            stacklevel=2,
        )
    resolution = Cmat @ Cmat.T
    residual = float(np.abs(resolution - np.eye(n)).max())
    if residual > BL_PARTITION_TOL:
        raise IsoperilabError(
            f"identity resolution failed: residual {residual}"
        )
    if abs(c.sum() - n) > BL_TRACE_TOL:
        raise IsoperilabError(f"weights sum to {c.sum()}, expected {n}")
    U = (Cmat / np.sqrt(c)[None, :]).T  # m x n unit rows
    body = HPolytope(
        np.vstack([U, -U]),
        np.concatenate([1.0 / np.sqrt(c), 1.0 / np.sqrt(c)]),
    )
    return BLDecomposition(B=B, c=c, u=U, residual=residual, body=body)


def bl_volume_bound_check(
    decomp: BLDecomposition,
    samples: int = 200_000,
    seed: int = 0,
) -> BLVolumeCheck:
    """Check vol(BK)^(1/n) <= prod (2/sqrt(c_i))^(c_i/n) <= 2 sqrt(m/n).

    Volumes are exact up to dimension EXACT_VOLUME_MAX_DIM; above that a
    Monte Carlo estimate is used and the left side is taken at the top of
    its 4-sigma interval, so a pass is conservative.
    """
    body = decomp.body
    n = body.dim
    m = decomp.c.shape[0]
    log_prod = float(
        np.sum(decomp.c / n * (math.log(2.0) - 0.5 * np.log(decomp.c)))
    )
    product_bound = math.exp(log_prod)
    global_bound = 2.0 * math.sqrt(m / n)
    if n <= EXACT_VOLUME_MAX_DIM:
        vol = analyze(body).volume
        vol_hi = vol
        method = "exact"
        used = 0
    else:
        est = mc_volume(body, samples=samples, seed=seed)
        vol = est.mean
        vol_hi = est.mean + 4.0 * est.stderr
        method = "mc"
        used = est.samples
    vol_root = vol ** (1.0 / n)
    vol_root_upper = vol_hi ** (1.0 / n)
    passed = (
        vol_root_upper <= product_bound + 1e-12
        and product_bound <= global_bound + 1e-12
    )
    return BLVolumeCheck(
        vol_root=vol_root,
        vol_root_upper=vol_root_upper,
        product_bound=product_bound,
        global_bound=global_bound,
        samples=used,
        method=method,
        passed=bool(passed),
    )
