"""Exact geometry of convex polytopes in low dimension.

Representations:
    HPolytope  -- intersection of halfspaces {x : <u_i, x> <= t_i}, unit
                  normals, origin strictly interior (t_i > 0), bounded.
    VPolytope  -- convex hull of its extreme points, full-dimensional.

Derived data:
    vertex_enumeration(H)   -- extreme points of an H-polytope
    facet_enumeration(V)    -- facet planes + measures of a V-polytope
    analyze(P)              -- Geometry bundle: facets, volume, surface area,
                               isoperimetric quotient, volume centroid
    area_measure(P)         -- atomic surface-area measure (normal, weight)
    covariance(am)          -- second moment matrix of an area measure
    mc_volume(H, ...)       -- deterministic chunked Monte Carlo volume

Everything here is deterministic: enumeration results are sorted, Monte
Carlo streams are keyed by (seed, chunk index), and no routine depends on
scheduling.  Exact measures use cone decompositions over facet fans; facet
measures recurse through lower-dimensional faces with fast paths for
simplices and polygons.  Size caps keep brute-force subset scans honest:
vertex enumeration allows dim <= 8 with <= 64 halfspaces, facet enumeration
dim <= 6 with <= 256 vertices, and either raises DimensionError rather than
start an infeasible scan.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from . import numkit, rng
from .errors import (
    DimensionError,
    SamplingError,
    SingularMatrixError,
    StructuralError,
    TangencyError,
)

# Representation tolerances.
UNIT_NORMAL_TOL = 1e-12
VERTEX_DEDUP_TOL = 1e-8
FEASIBILITY_TOL = 1e-9
INCIDENCE_TOL = 1e-9
NORMAL_MERGE_TOL = 1e-10
CONTAINS_TOL = 1e-12
RANK_TOL = 1e-9
SINGULAR_SYSTEM_TOL = 1e-12
# Side tests in face search must scale with the point set: must sit far
# above subset-normal roundoff yet below the smallest face separation.
SUPPORT_BAND_REL = 1e-7

# Brute-force enumeration caps.
MAX_VENUM_DIM = 8
MAX_VENUM_HALFSPACES = 64
MAX_FENUM_DIM = 6
MAX_FENUM_VERTICES = 256
MAX_SUBSETS = 5_000_000
_COMBO_CHUNK = 32768

MC_MIN_ACCEPTANCE = 1e-6


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _affine_rank(points: np.ndarray, tol: float = RANK_TOL) -> int:
    centered = points - points.mean(axis=0)
    if centered.size == 0:
        return 0
    s = np.linalg.svd(centered, compute_uv=False)
    return int(np.sum(s > tol))


def _check_bounded(normals: np.ndarray) -> None:
    """Reject halfspace normal sets that admit a recession direction.

    The body {x : Nx <= t} with t > 0 is unbounded iff some d != 0 has
    N d <= 0.  Given full rank, any such d has sum_i <u_i, d> < 0, so the
    feasibility program below is exact, not heuristic.
    """
    m, n = normals.shape
    s = np.linalg.svd(normals, compute_uv=False)
    if int(np.sum(s > RANK_TOL)) < n:
        raise StructuralError("halfspace normals do not span the space (unbounded)")
    res = linprog(
        c=np.zeros(n),
        A_ub=normals,
        b_ub=np.zeros(m),
        A_eq=normals.sum(axis=0, keepdims=True),
        b_eq=np.array([-1.0]),
        bounds=[(None, None)] * n,
        method="highs",
    )
    if res.status == 2:
        return  # infeasible: no recession direction, body is bounded
    if res.status in (0, 3):
        raise StructuralError(
            "halfspace normals lie in a closed hemisphere (unbounded body)"
        )
    raise StructuralError(f"boundedness check failed: LP status {res.status}")


class HPolytope:
    """Bounded intersection of halfspaces with the origin strictly interior.

    Normals are stored unit length; offsets are the (positive) distances
    from the origin to each facet plane.
    """

    __slots__ = ("normals", "offsets")

    def __init__(self, normals, offsets, check: bool = True):
        N = np.array(normals, dtype=float)
        t = np.array(offsets, dtype=float)
        if N.ndim != 2 or t.ndim != 1 or N.shape[0] != t.shape[0]:
            raise StructuralError(
                f"inconsistent H-rep shapes {N.shape} / {t.shape}"
            )
        if check:
            if not (np.all(np.isfinite(N)) and np.all(np.isfinite(t))):
                raise StructuralError("H-rep has non-finite entries")
            norms = np.linalg.norm(N, axis=1)
            if np.any(norms < UNIT_NORMAL_TOL):
                raise StructuralError("zero normal vector in H-rep")
            N = N / norms[:, None]
            t = t / norms
            if np.any(t <= 0.0):
                raise StructuralError(
                    "origin is not strictly interior (offset <= 0); translate first"
                )
            _check_bounded(N)
        self.normals = _freeze(N)
        self.offsets = _freeze(t)

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @property
    def n_halfspaces(self) -> int:
        return self.normals.shape[0]

    def __repr__(self) -> str:
        return f"HPolytope(dim={self.dim}, halfspaces={self.n_halfspaces})"


class VPolytope:
    """Convex hull of extreme points, full-dimensional by construction.

    The constructor removes duplicate points (within VERTEX_DEDUP_TOL) and
    checks full affine rank.  Extremality of each listed point is *assumed*
    here and verified by facet_enumeration, which raises StructuralError if
    any listed point fails to sit on at least dim facets.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices, check: bool = True):
        V = np.array(vertices, dtype=float)
        if V.ndim != 2:
            raise StructuralError(f"vertex array must be 2-d, got shape {V.shape}")
        if check:
            if not np.all(np.isfinite(V)):
                raise StructuralError("vertex array has non-finite entries")
            V = _dedup_points(V, VERTEX_DEDUP_TOL)
            n = V.shape[1]
            if V.shape[0] < n + 1:
                raise StructuralError(
                    f"need at least dim+1 distinct vertices, got {V.shape[0]}"
                )
            if _affine_rank(V) < n:
                raise StructuralError("vertex set is not full-dimensional")
            V = V[np.lexsort(V.T[::-1])]
        self.vertices = _freeze(V)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    def __repr__(self) -> str:
        return f"VPolytope(dim={self.dim}, vertices={self.n_vertices})"


@dataclass(frozen=True)
class FacetData:
    """One facet: outward unit normal, plane offset, (dim-1)-measure and the
    indices of incident vertices."""

    normal: np.ndarray
    offset: float
    measure: float
    vertex_ids: tuple[int, ...]


class AreaMeasure:
    """Atomic surface-area measure: one atom per facet normal.

    Atoms whose normals coincide within NORMAL_MERGE_TOL are merged at
    construction, so stored normals are pairwise distinct.
    """

    __slots__ = ("normals", "weights")

    def __init__(self, normals, weights):
        N = np.array(normals, dtype=float)
        w = np.array(weights, dtype=float)
        if N.ndim != 2 or w.shape != (N.shape[0],):
            raise StructuralError("area measure arrays have inconsistent shapes")
        if np.any(w <= 0.0):
            raise StructuralError("area measure weights must be positive")
        norms = np.linalg.norm(N, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise StructuralError("area measure normals must be unit vectors")
        N = N / norms[:, None]
        keep_n: list[np.ndarray] = []
        keep_w: list[float] = []
        for i in range(N.shape[0]):
            merged = False
            for j, u in enumerate(keep_n):
                if np.linalg.norm(u - N[i]) <= NORMAL_MERGE_TOL:
                    keep_w[j] += w[i]
                    merged = True
                    break
            if not merged:
                keep_n.append(N[i])
                keep_w.append(float(w[i]))
        self.normals = _freeze(np.array(keep_n))
        self.weights = _freeze(np.array(keep_w))

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True)
class VolumeEstimate:
    """Monte Carlo volume with a delta-method standard error."""

    mean: float
    stderr: float
    samples: int
    seed: int


@dataclass(frozen=True)
class Geometry:
    """Exact derived geometry of one polytope."""

    vertices: np.ndarray
    facets: tuple[FacetData, ...]
    volume: float
    surface_area: float
    iq: float
    centroid: np.ndarray

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def area_measure(self) -> AreaMeasure:
        return AreaMeasure(
            np.array([f.normal for f in self.facets]),
            np.array([f.measure for f in self.facets]),
        )


# ---------------------------------------------------------------------------
# enumeration


def _dedup_points(points: np.ndarray, tol: float) -> np.ndarray:
    kept: list[np.ndarray] = []
    for p in points:
        if kept:
            d = np.linalg.norm(np.asarray(kept) - p, axis=1)
            if d.min() <= tol:
                continue
        kept.append(p)
    return np.array(kept)


def _combo_chunks(count: int, take: int):
    it = itertools.combinations(range(count), take)
    while True:
        block = list(itertools.islice(it, _COMBO_CHUNK))
        if not block:
            return
        yield np.array(block, dtype=np.intp)


def _subset_budget(count: int, take: int, what: str) -> None:
    if math.comb(count, take) > MAX_SUBSETS:
        raise DimensionError(
            f"{what}: C({count},{take}) subsets exceed cap {MAX_SUBSETS}"
        )


def _vertex_candidates(hp: HPolytope) -> tuple[np.ndarray, np.ndarray]:
    """All vertices of an H-polytope plus the vertex/halfspace incidence.

    Brute force over n-subsets of halfspace planes with batched solves.
    Returns (vertices sorted lexicographically, incidence bool array of
    shape (n_halfspaces, n_vertices)).
    """
    N, t = hp.normals, hp.offsets
    m, n = N.shape
    if n > MAX_VENUM_DIM:
        raise DimensionError(f"vertex enumeration capped at dim {MAX_VENUM_DIM}")
    if m > MAX_VENUM_HALFSPACES:
        raise DimensionError(
            f"vertex enumeration capped at {MAX_VENUM_HALFSPACES} halfspaces"
        )
    _subset_budget(m, n, "vertex enumeration")
    # solve roundoff grows with the body size, so side tests must too
    tscale = max(1.0, float(np.abs(t).max()))

    found: list[np.ndarray] = []
    for idx in _combo_chunks(m, n):
        A = N[idx]
        dets = np.linalg.det(A)
        ok = np.abs(dets) > SINGULAR_SYSTEM_TOL
        if not ok.any():
            continue
        X = np.linalg.solve(A[ok], t[idx][ok][:, :, None])[:, :, 0]
        feas = np.all(N @ X.T <= t[:, None] + FEASIBILITY_TOL * tscale, axis=0)
        if feas.any():
            found.append(X[feas])
    if not found:
        raise StructuralError("no vertices found (empty or degenerate body)")
    V = _dedup_points(np.vstack(found), VERTEX_DEDUP_TOL)
    if V.shape[0] < n + 1 or _affine_rank(V) < n:
        raise StructuralError("body is not full-dimensional")
    V = V[np.lexsort(V.T[::-1])]
    incidence = np.abs(N @ V.T - t[:, None]) <= INCIDENCE_TOL * tscale
    return V, incidence


def vertex_enumeration(hp: HPolytope) -> VPolytope:
    """Extreme points of an H-polytope, sorted lexicographically."""
    V, _ = _vertex_candidates(hp)
    return VPolytope(V, check=False)


def _refit_support_plane(points: np.ndarray, ids, band: float):
    """Best-fit plane through points[ids], or None if it is not a face.

    Total least squares over the whole candidate contact set, so the
    accepted plane does not depend on which spanning subset proposed it.
    """
    d = points.shape[1]
    if len(ids) < d:
        return None
    F = points[ids]
    base = F.mean(axis=0)
    _, s, vh = np.linalg.svd(F - base)
    if s[d - 2] <= band:
        return None  # contact set is not (d-1)-dimensional
    u = vh[-1]
    off = float(u @ base)
    dots = points @ u - off
    if dots.max() > band:
        if dots.min() < -band:
            return None  # plane cuts through the set
        u, off, dots = -u, -off, -dots
    on_plane = np.nonzero(np.abs(dots) <= band)[0]
    return u, float(off), on_plane


def _supporting_hyperplanes(points: np.ndarray):
    """Face planes of conv(points) in its own (full) dimension.

    Yields (unit outward normal, offset, incident index array) for every
    supporting hyperplane spanned by d affinely independent points; each
    candidate is refit on its full contact set and planes are
    deduplicated by those sets.
    """
    k, d = points.shape
    _subset_budget(k, d, "face search")
    center = points.mean(axis=0)
    scale = max(float(np.abs(points - center).max()), 1e-300)
    band = max(SUPPORT_BAND_REL * scale, INCIDENCE_TOL)
    tried: set[frozenset] = set()
    seen: dict[frozenset, tuple[np.ndarray, float, np.ndarray]] = {}
    for idx in _combo_chunks(k, d):
        P = points[idx]
        E = P[:, 1:, :] - P[:, :1, :]
        # Nullspace of the edge matrix gives the plane normal; batched SVD.
        _, s, vh = np.linalg.svd(E)
        spanning = s[:, -1] > RANK_TOL * scale
        if not spanning.any():
            continue
        U = vh[spanning][:, -1, :]
        base = P[spanning][:, 0, :]
        offs = np.einsum("ij,ij->i", U, base)
        dots = points @ U.T - offs[None, :]
        upper = dots.max(axis=0) <= band
        lower = dots.min(axis=0) >= -band
        for col in np.nonzero(upper | lower)[0]:
            raw = frozenset(np.nonzero(np.abs(dots[:, col]) <= band)[0].tolist())
            if raw in tried:
                continue
            tried.add(raw)
            plane = _refit_support_plane(points, sorted(raw), band)
            if plane is None:
                continue
            u, off, on_plane = plane
            key = frozenset(on_plane.tolist())
            if key not in seen:
                seen[key] = (u, off, on_plane)
    return [seen[key] for key in sorted(seen, key=sorted)]


def _polygon_measure_centroid(points: np.ndarray) -> tuple[float, np.ndarray]:
    """Area and centroid of a convex polygon given by its extreme points."""
    c = points.mean(axis=0)
    rel = points - c
    order = np.argsort(np.arctan2(rel[:, 1], rel[:, 0]))
    P = points[order]
    Q = np.roll(P, -1, axis=0)
    cross = P[:, 0] * Q[:, 1] - Q[:, 0] * P[:, 1]
    area = 0.5 * cross.sum()
    if area <= 0.0:
        raise StructuralError("degenerate polygon in face recursion")
    centroid = ((P + Q) * cross[:, None]).sum(axis=0) / (6.0 * area)
    return float(area), centroid


def _simplex_measure_centroid(points: np.ndarray) -> tuple[float, np.ndarray]:
    d = points.shape[1]
    vol = abs(float(np.linalg.det(points[1:] - points[0]))) / math.factorial(d)
    return vol, points.mean(axis=0)


def _measure_and_centroid(points: np.ndarray) -> tuple[float, np.ndarray]:
    """d-volume and centroid of a full-dimensional polytope in R^d."""
    k, d = points.shape
    if d == 0:
        return 1.0, np.zeros(0)
    if d == 1:
        lo, hi = float(points.min()), float(points.max())
        return hi - lo, np.array([(lo + hi) / 2.0])
    if k == d + 1:
        return _simplex_measure_centroid(points)
    if d == 2:
        return _polygon_measure_centroid(points)
    faces = _supporting_hyperplanes(points)
    apex = points.mean(axis=0)
    return _cone_accumulate(points, apex, faces, d)


def _face_measure_centroid(face_points: np.ndarray) -> tuple[float, np.ndarray]:
    """Measure and centroid of a (d-1)-face given in ambient d coordinates."""
    kf, d = face_points.shape
    if kf == d:
        # simplex face: measure via the Gram determinant of edge vectors
        E = face_points[1:] - face_points[0]
        gram = E @ E.T
        g = float(np.linalg.det(gram))
        measure = math.sqrt(max(g, 0.0)) / math.factorial(d - 1)
        return measure, face_points.mean(axis=0)
    base = face_points.mean(axis=0)
    centered = face_points - base
    _, s, vh = np.linalg.svd(centered)
    W = vh[: d - 1]
    coords = centered @ W.T
    measure, local_centroid = _measure_and_centroid(coords)
    return measure, base + local_centroid @ W


def _cone_accumulate(points, apex, faces, d) -> tuple[float, np.ndarray]:
    """Sum cone volumes from an interior apex over the listed faces."""
    vol = 0.0
    moment = np.zeros(d)
    for u, off, ids in faces:
        F = points[ids]
        if _affine_rank(F) < d - 1:
            continue  # plane touches a lower-dimensional face only
        h = float(off - u @ apex)
        if h <= RANK_TOL:
            continue
        m_f, g_f = _face_measure_centroid(F)
        if m_f <= 0.0:
            continue
        cone_vol = h * m_f / d
        cone_centroid = apex + (d / (d + 1.0)) * (g_f - apex)
        vol += cone_vol
        moment += cone_vol * cone_centroid
    if vol <= 0.0:
        raise StructuralError("zero volume in cone accumulation")
    return vol, moment / vol


def _facets_with_measures(points: np.ndarray, planes) -> list[FacetData]:
    out = []
    n = points.shape[1]
    for u, off, ids in planes:
        F = points[ids]
        if len(ids) < n or _affine_rank(F) < n - 1:
            continue
        measure, _ = _face_measure_centroid(F)
        if measure <= 0.0:
            continue
        out.append(
            FacetData(
                normal=_freeze(np.array(u, dtype=float)),
                offset=float(off),
                measure=float(measure),
                vertex_ids=tuple(int(i) for i in ids),
            )
        )
    return out


def facet_enumeration(vp: VPolytope) -> list[FacetData]:
    """All facets of a V-polytope, with (dim-1)-measures.

    Also validates extremality: every listed vertex must lie on at least
    dim facets whose normals span the space.
    """
    V = vp.vertices
    k, n = V.shape
    if n > MAX_FENUM_DIM:
        raise DimensionError(f"facet enumeration capped at dim {MAX_FENUM_DIM}")
    if k > MAX_FENUM_VERTICES:
        raise DimensionError(
            f"facet enumeration capped at {MAX_FENUM_VERTICES} vertices"
        )
    if n == 1:
        lo, hi = float(V.min()), float(V.max())
        ids_lo = int(np.argmin(V[:, 0]))
        ids_hi = int(np.argmax(V[:, 0]))
        return [
            FacetData(_freeze(np.array([-1.0])), -lo, 1.0, (ids_lo,)),
            FacetData(_freeze(np.array([1.0])), hi, 1.0, (ids_hi,)),
        ]
    planes = _supporting_hyperplanes(V)
    facets = _facets_with_measures(V, planes)
    seen = np.zeros(k, dtype=int)
    span_ok = np.zeros(k, dtype=bool)
    for f in facets:
        for i in f.vertex_ids:
            seen[i] += 1
    for i in range(k):
        active = np.array([f.normal for f in facets if i in f.vertex_ids])
        span_ok[i] = active.size > 0 and np.linalg.matrix_rank(active, tol=1e-9) == n
    bad = np.nonzero((seen < n) | ~span_ok)[0]
    if bad.size:
        raise StructuralError(
            f"listed points {bad.tolist()} are not extreme points of the hull"
        )
    return facets


def _geometry(points: np.ndarray, facets: list[FacetData]) -> Geometry:
    n = points.shape[1]
    apex = points.mean(axis=0)
    vol, centroid = _cone_accumulate(
        points, apex, [(f.normal, f.offset, np.array(f.vertex_ids)) for f in facets], n
    )
    surface = float(sum(f.measure for f in facets))
    iq_val = surface / vol ** ((n - 1) / n)
    return Geometry(
        vertices=_freeze(points.copy()),
        facets=tuple(facets),
        volume=float(vol),
        surface_area=surface,
        iq=float(iq_val),
        centroid=_freeze(centroid),
    )


def analyze(P) -> Geometry:
    """Compute the full Geometry bundle for an H- or V-polytope."""
    if isinstance(P, HPolytope):
        V, incidence = _vertex_candidates(P)
        planes = []
        for i in range(P.n_halfspaces):
            ids = np.nonzero(incidence[i])[0]
            if ids.size:
                planes.append((P.normals[i], float(P.offsets[i]), ids))
        facets = _facets_with_measures(V, planes)
        if not facets:
            raise StructuralError("no facets derived from H-rep")
        return _geometry(V, facets)
    if isinstance(P, VPolytope):
        return _geometry(P.vertices, facet_enumeration(P))
    raise TypeError(f"expected HPolytope or VPolytope, got {type(P)!r}")


# ---------------------------------------------------------------------------
# scalar quantities


def volume(P) -> float:
    """Exact volume (cone decomposition over facets)."""
    return analyze(P).volume


def surface_area(P) -> float:
    """Exact surface area: sum of facet (dim-1)-measures."""
    return analyze(P).surface_area


def iq(P) -> float:
    """Isoperimetric quotient surface_area / volume**((n-1)/n)."""
    return analyze(P).iq


def centroid(P) -> np.ndarray:
    """Volume centroid."""
    return analyze(P).centroid


def area_measure(P) -> AreaMeasure:
    """Surface-area measure: one atom (outward normal, facet measure) per facet."""
    return analyze(P).area_measure


def covariance(am: AreaMeasure) -> np.ndarray:
    """Second-moment matrix sum_i w_i u_i u_i^T of an area measure.

    Its trace equals the total mass because the normals are unit vectors.
    """
    C = (am.normals.T * am.weights) @ am.normals
    return (C + C.T) / 2.0


def inradius_origin(hp: HPolytope) -> float:
    """Radius of the largest origin-centered ball inside the body."""
    return float(hp.offsets.min())


def iq_circumscribed(hp: HPolytope, tol: float = 1e-9) -> float:
    """Isoperimetric quotient via (n/h) * vol**(1/n) for tangent bodies.

    Requires every facet plane to touch the inscribed ball: all offsets
    equal within tol.  When only an enclosing ball of radius h is known the
    same formula is an upper bound; this routine enforces tangency and
    raises TangencyError listing the offending facets otherwise.
    """
    h = inradius_origin(hp)
    bad = np.nonzero(hp.offsets > h + tol)[0]
    if bad.size:
        raise TangencyError(
            f"facets {bad.tolist()} do not touch the inscribed ball "
            f"(offsets {hp.offsets[bad].tolist()} vs inradius {h})"
        )
    n = hp.dim
    return (n / h) * volume(hp) ** (1.0 / n)


def contains(hp: HPolytope, x, tol: float = CONTAINS_TOL) -> np.ndarray | bool:
    """Membership test; x may be one point or an (N, dim) batch."""
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    inside = np.all(X @ hp.normals.T <= hp.offsets[None, :] + tol, axis=1)
    return bool(inside[0]) if single else inside


def gauge(hp: HPolytope, x) -> np.ndarray | float:
    """Minkowski gauge ||x||_K = max_i <u_i, x> / t_i (1.0 on the boundary)."""
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    vals = np.max((X @ hp.normals.T) / hp.offsets[None, :], axis=1)
    return float(vals[0]) if single else vals


# ---------------------------------------------------------------------------
# maps and translations


def apply_map(P, M):
    """Image of a polytope under an invertible linear map (same rep kind)."""
    A = np.asarray(M, dtype=float)
    if isinstance(P, VPolytope):
        return VPolytope(P.vertices @ A.T, check=False)
    if isinstance(P, HPolytope):
        try:
            W = np.linalg.solve(A.T, P.normals.T).T
        except np.linalg.LinAlgError as exc:
            raise SingularMatrixError("polytope image under a singular map") from exc
        norms = np.linalg.norm(W, axis=1)
        if np.any(norms < UNIT_NORMAL_TOL) or not np.all(np.isfinite(W)):
            raise SingularMatrixError("polytope image under a singular map")
        return HPolytope(W / norms[:, None], P.offsets / norms, check=False)
    raise TypeError(f"expected HPolytope or VPolytope, got {type(P)!r}")


def translate(P, z):
    """Translate a polytope by z.  H-reps must keep the origin interior."""
    z = np.asarray(z, dtype=float)
    if isinstance(P, VPolytope):
        return VPolytope(P.vertices + z[None, :], check=False)
    if isinstance(P, HPolytope):
        t = P.offsets + P.normals @ z
        if np.any(t <= 0.0):
            raise StructuralError(
                "translation moves the origin outside the body; "
                "recenter before building the H-rep"
            )
        return HPolytope(P.normals, t, check=False)
    raise TypeError(f"expected HPolytope or VPolytope, got {type(P)!r}")


def chebyshev_center(normals, offsets) -> tuple[np.ndarray, float]:
    """Center and radius of a largest inscribed ball of {x : Nx <= t}."""
    N = np.asarray(normals, dtype=float)
    t = np.asarray(offsets, dtype=float)
    norms = np.linalg.norm(N, axis=1)
    N = N / norms[:, None]
    t = t / norms
    m, n = N.shape
    res = linprog(
        c=np.concatenate([np.zeros(n), [-1.0]]),
        A_ub=np.hstack([N, np.ones((m, 1))]),
        b_ub=t,
        bounds=[(None, None)] * n + [(0.0, None)],
        method="highs",
    )
    if res.status != 0:
        raise StructuralError(f"no inscribed ball found (LP status {res.status})")
    return res.x[:n], float(res.x[n])


def hpolytope_from_inequalities(normals, offsets) -> tuple[HPolytope, np.ndarray]:
    """Build an HPolytope from raw inequalities, recentering if needed.

    Returns (body, shift) where the body equals {x : Nx <= t} - shift and
    shift is the Chebyshev center used to bring the origin strictly inside.
    """
    N = np.asarray(normals, dtype=float)
    t = np.asarray(offsets, dtype=float)
    z, r = chebyshev_center(N, t)
    if r <= 0.0:
        raise StructuralError("inequalities have empty or flat interior")
    norms = np.linalg.norm(N, axis=1)
    return HPolytope(N, t - (N @ z), check=True), z


# ---------------------------------------------------------------------------
# Monte Carlo volume


def bounding_box(P) -> tuple[np.ndarray, np.ndarray]:
    """Tight axis-aligned box, from vertices (enumerating if needed)."""
    V = vertex_enumeration(P).vertices if isinstance(P, HPolytope) else P.vertices
    return V.min(axis=0), V.max(axis=0)


def mc_volume(
    hp: HPolytope,
    samples: int = 1_000_000,
    seed: int = 0,
    chunk: int = rng.MC_CHUNK,
) -> VolumeEstimate:
    """Rejection-sampled volume inside the tight bounding box.

    Deterministic for a fixed seed: chunk j draws from the stream keyed
    (seed, DOMAIN_VOLUME, j) and chunks are reduced in index order, so the
    estimate is reproducible and independent of any parallel scheduling.
    """
    lo, hi = bounding_box(hp)
    box_vol = float(np.prod(hi - lo))
    accepted = 0
    total = 0
    for j, size in enumerate(rng.chunk_sizes(samples, chunk)):
        g = rng.substream(seed, rng.DOMAIN_VOLUME, j)
        X = g.uniform(lo, hi, size=(size, hp.dim))
        accepted += int(np.count_nonzero(contains(hp, X)))
        total += size
    p = accepted / total
    if p < MC_MIN_ACCEPTANCE:
        raise SamplingError(
            f"acceptance ratio {p:.2e} below {MC_MIN_ACCEPTANCE}; "
            "bounding box is unusable"
        )
    stderr = box_vol * math.sqrt(p * (1.0 - p) / total)
    return VolumeEstimate(mean=box_vol * p, stderr=stderr, samples=total, seed=seed)


# ---------------------------------------------------------------------------
# measure pushforward


def pushforward_area_measure(am: AreaMeasure, M) -> AreaMeasure:
    """Surface-area measure of the image body TK from that of K.

    Facet normals map by the inverse transpose (renormalized) and facet
    measures pick up |det T| * ||T^{-T} u||, so the total mass equals the
    surface area of TK for any invertible T (the determinant factor drops
    out only for volume-preserving maps).
    """
    A = np.asarray(M, dtype=float)
    d = abs(numkit.det(A))
    if d <= 0.0 or not np.isfinite(d):
        raise SingularMatrixError("pushforward under a singular map")
    W = np.linalg.solve(A.T, am.normals.T).T
    norms = np.linalg.norm(W, axis=1)
    return AreaMeasure(W / norms[:, None], am.weights * norms * d)


# ---------------------------------------------------------------------------
# reference values and serialization


def ball_iq_lower_bound(n: int) -> float:
    """Isoperimetric quotient of the unit ball: the classical lower bound
    for all convex bodies in R^n."""
    return n * math.sqrt(math.pi) * math.exp(-math.lgamma(n / 2.0 + 1.0) / n)


def simplex_volume(vertices) -> float:
    """|det| / n! volume of a simplex given by its n+1 vertices."""
    V = np.asarray(vertices, dtype=float)
    n = V.shape[1]
    if V.shape[0] != n + 1:
        raise StructuralError("simplex needs exactly dim+1 vertices")
    return abs(float(np.linalg.det(V[1:] - V[0]))) / math.factorial(n)


def polytope_to_json_dict(
    hp: HPolytope | None = None, vp: VPolytope | None = None
) -> dict:
    if hp is None and vp is None:
        raise ValueError("need at least one representation")
    dim = hp.dim if hp is not None else vp.dim
    out: dict = {"dim": dim}
    if hp is not None:
        out["hrep"] = [
            {"normal": list(map(float, u)), "offset": float(t)}
            for u, t in zip(hp.normals, hp.offsets)
        ]
    if vp is not None:
        out["vrep"] = [list(map(float, v)) for v in vp.vertices]
    return out


def polytope_from_json_dict(obj: dict) -> tuple[HPolytope | None, VPolytope | None]:
    dim = int(obj["dim"])
    hp = vp = None
    if "hrep" in obj and obj["hrep"] is not None:
        rows = obj["hrep"]
        N = np.array([r["normal"] for r in rows], dtype=float)
        t = np.array([r["offset"] for r in rows], dtype=float)
        if N.shape[1] != dim:
            raise StructuralError("hrep dimension mismatch")
        hp = HPolytope(N, t)
    if "vrep" in obj and obj["vrep"] is not None:
        V = np.array(obj["vrep"], dtype=float)
        if V.shape[1] != dim:
            raise StructuralError("vrep dimension mismatch")
        vp = VPolytope(V)
    if hp is None and vp is None:
        raise StructuralError("polytope JSON has neither hrep nor vrep")
    return hp, vp


def save_polytope(path, hp: HPolytope | None = None, vp: VPolytope | None = None):
    with open(path, "w") as fh:
        json.dump(polytope_to_json_dict(hp, vp), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_polytope(path) -> tuple[HPolytope | None, VPolytope | None]:
    with open(path) as fh:
        return polytope_from_json_dict(json.load(fh))
