"""Polytope families with closed-form data, padding, and symmetrization.

Primitive families:
    simplex_regular(n)        -- regular simplex, side 1, centered
    cross_polytope(n, scale)  -- conv(+-scale e_i)
    cube(n, scale)            -- [-scale, scale]^n

Composites:
    cartesian_product(...)    -- orthogonal product of factors
    l1_sum(...)               -- free sum conv(union of embedded summands)
    lindelof_body(normals)    -- all offsets 1, every facet tangent to B^n

Count-exact constructions:
    pad_facets / pad_vertices -- raise facet/vertex counts one cut or one
                                 point at a time, validating each step
    extremal_facet_polytope   -- near-minimal iq at a prescribed facet count
    extremal_vertex_polytope  -- near-minimal iq at a prescribed vertex count

And central_symmetrize(K): the largest-overlap symmetrization K'' with
vol(K'')^(1/n) at least half of vol(K)^(1/n).

Closed forms attached by constructors are exact arithmetic consequences of
the family definitions; geometric cross-checks live in the test suite so
the two routes stay independent.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .errors import (
    DimensionError,
    GeometryError,
    IsoperilabError,
    SpecError,
    StructuralError,
    TangencyError,
)
from .polytope import (
    AreaMeasure,
    FacetData,
    HPolytope,
    VPolytope,
    _vertex_candidates,
    analyze,
    covariance,
    facet_enumeration,
)

MAX_ENUM_REP = 4096  # largest explicit halfspace/vertex list a composite builds
PAD_DELTA_FRACTION = 1e-3  # default cut depth relative to body diameter
PAD_MAX_RETRIES = 20
SYMMETRY_TOL = 1e-9
TANGENCY_TOL = 1e-9
HYPOTHESIS_TOL = 1e-9
ISOTROPY_TOL = 1e-8


@dataclass(frozen=True)
class ClosedForms:
    """Exact scalar data for a constructed body.

    minimal_iq is the infimum of iq over volume-preserving linear images;
    it is set only when the construction certifies it (symmetry or verified
    hypotheses), otherwise None.
    """

    dim: int
    volume: float
    surface_area: float
    iq: float
    facet_count: int
    vertex_count: int
    inradius: float
    minimal_iq: float | None = None

    def __post_init__(self):
        n = self.dim
        derived = self.surface_area / self.volume ** ((n - 1) / n)
        if not math.isclose(self.iq, derived, rel_tol=1e-12, abs_tol=0.0):
            raise IsoperilabError(
                f"inconsistent closed forms: iq {self.iq} vs derived {derived}"
            )


@dataclass(frozen=True)
class Construction:
    """A constructed body: representations plus closed forms and notes."""

    name: str
    params: dict
    hp: HPolytope | None
    vp: VPolytope | None
    forms: ClosedForms | None
    extras: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        if self.hp is not None:
            return self.hp.dim
        return self.vp.dim

    def rep(self):
        """Preferred representation for geometric work."""
        return self.hp if self.hp is not None else self.vp


@dataclass(frozen=True)
class PaddingResult:
    body: HPolytope | VPolytope
    iq_before: float
    iq_after: float
    iq_drift: float
    added: int
    delta_used: float


@dataclass(frozen=True)
class SymmetrizationResult:
    """Output of central_symmetrize.

    body is exactly origin-symmetric; body + shift is contained in the
    input, where shift = x/2 for the maximizing translation x.
    """

    x: np.ndarray
    shift: np.ndarray
    body: VPolytope
    vol_input: float
    vol_body: float
    root_ratio: float
    line_searches: int
    evaluations: int
    method: str


def _inv_nth_factorial_root(n: int) -> float:
    """(n!)**(-1/n) in log space."""
    return math.exp(-math.lgamma(n + 1.0) / n)


def measured_forms(c: Construction | HPolytope | VPolytope) -> ClosedForms:
    """Closed forms recomputed from exact geometry (the independent route)."""
    P = c.rep() if isinstance(c, Construction) else c
    g = analyze(P)
    offsets = np.array([f.offset for f in g.facets])
    if np.any(offsets <= 0.0):
        raise StructuralError("origin is not interior; cannot report an inradius")
    return ClosedForms(
        dim=g.dim,
        volume=g.volume,
        surface_area=g.surface_area,
        iq=g.iq,
        facet_count=len(g.facets),
        vertex_count=g.vertices.shape[0],
        inradius=float(offsets.min()),
        minimal_iq=None,
    )


# ---------------------------------------------------------------------------
# primitive families


def simplex_regular(n: int) -> Construction:
    """Regular n-simplex with side length 1, centroid at the origin."""
    if n < 1:
        raise SpecError("simplex needs n >= 1")
    # Orthonormal basis of the sum-zero hyperplane of R^(n+1); vertices are
    # the projected standard basis, scaled so edges have length 1.
    P = np.eye(n + 1) - np.full((n + 1, n + 1), 1.0 / (n + 1))
    _, s, vh = np.linalg.svd(P)
    W = vh[:n]
    V = (P @ W.T) / math.sqrt(2.0)
    inradius = 1.0 / math.sqrt(2.0 * n * (n + 1))
    norms = np.linalg.norm(V, axis=1)
    normals = -V / norms[:, None]
    hp = HPolytope(normals, np.full(n + 1, inradius), check=False)
    vol = math.sqrt(n + 1.0) / (math.factorial(n) * 2.0 ** (n / 2.0))
    iq = (
        n**1.5
        * (n + 1.0) ** (0.5 + 1.0 / (2.0 * n))
        * _inv_nth_factorial_root(n)
    )
    forms = ClosedForms(
        dim=n,
        volume=vol,
        surface_area=iq * vol ** ((n - 1) / n),
        iq=iq,
        facet_count=n + 1,
        vertex_count=n + 1,
        inradius=inradius,
        # The symmetry group acts irreducibly, so the area measure is
        # isotropic and the body is already in minimal position.
        minimal_iq=iq,
    )
    return Construction("simplex", {"n": n}, hp, VPolytope(V, check=False), forms)


def cross_polytope(n: int, scale: float = 1.0) -> Construction:
    """conv(+-scale e_i): 2n vertices, 2^n facets tangent to its inball."""
    if n < 1:
        raise SpecError("cross polytope needs n >= 1")
    if n > 20:
        raise DimensionError("cross polytope H-rep capped at n = 20")
    if scale <= 0.0:
        raise SpecError("scale must be positive")
    V = scale * np.vstack([np.eye(n), -np.eye(n)])
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    hp = HPolytope(
        signs / math.sqrt(n), np.full(2**n, scale / math.sqrt(n)), check=False
    )
    iq = 2.0 * n**1.5 * _inv_nth_factorial_root(n)
    vol = (2.0 * scale) ** n / math.factorial(n)
    forms = ClosedForms(
        dim=n,
        volume=vol,
        surface_area=iq * vol ** ((n - 1) / n),
        iq=iq,
        facet_count=2**n,
        vertex_count=2 * n,
        inradius=scale / math.sqrt(n),
        minimal_iq=iq,  # isotropic by coordinate symmetry
    )
    return Construction(
        "cross", {"n": n, "scale": scale}, hp, VPolytope(V, check=False), forms
    )


def cube(n: int, scale: float = 1.0) -> Construction:
    """[-scale, scale]^n."""
    if n < 1:
        raise SpecError("cube needs n >= 1")
    if n > 20:
        raise DimensionError("cube V-rep capped at n = 20")
    if scale <= 0.0:
        raise SpecError("scale must be positive")
    V = scale * np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    hp = HPolytope(
        np.vstack([np.eye(n), -np.eye(n)]), np.full(2 * n, scale), check=False
    )
    vol = (2.0 * scale) ** n
    forms = ClosedForms(
        dim=n,
        volume=vol,
        surface_area=2.0 * n * vol ** ((n - 1) / n),
        iq=2.0 * n,
        facet_count=2 * n,
        vertex_count=2**n,
        inradius=scale,
        minimal_iq=2.0 * n,  # isotropic by coordinate symmetry
    )
    return Construction(
        "cube", {"n": n, "scale": scale}, hp, VPolytope(V, check=False), forms
    )


def scale_body(c: Construction, s: float) -> Construction:
    """Dilate a construction by s > 0, rescaling its closed forms exactly."""
    if s <= 0.0 or not math.isfinite(s):
        raise SpecError("scale must be positive and finite")
    n = c.dim
    hp = HPolytope(c.hp.normals, c.hp.offsets * s, check=False) if c.hp else None
    vp = VPolytope(c.vp.vertices * s, check=False) if c.vp else None
    forms = None
    if c.forms is not None:
        f = c.forms
        forms = ClosedForms(
            dim=n,
            volume=f.volume * s**n,
            surface_area=f.surface_area * s ** (n - 1),
            iq=f.iq,
            facet_count=f.facet_count,
            vertex_count=f.vertex_count,
            inradius=f.inradius * s,
            minimal_iq=f.minimal_iq,
        )
    extras = dict(c.extras)
    extras["rescaled_by"] = extras.get("rescaled_by", 1.0) * s
    return Construction(c.name, c.params, hp, vp, forms, extras)


def normalized_to_unit_volume(c: Construction) -> Construction:
    if c.forms is None:
        raise SpecError("cannot normalize a construction without closed forms")
    return scale_body(c, c.forms.volume ** (-1.0 / c.dim))


# ---------------------------------------------------------------------------
# composites


def _block_embed(blocks: list[np.ndarray]) -> np.ndarray:
    """Embed per-block row vectors into the direct-sum coordinates."""
    dims = [b.shape[1] for b in blocks]
    total = sum(dims)
    out = []
    pos = 0
    for b, d in zip(blocks, dims):
        rows = np.zeros((b.shape[0], total))
        rows[:, pos : pos + d] = b
        out.append(rows)
        pos += d
    return np.vstack(out)


def cartesian_product(
    factors: list[Construction], normalize_to_unit_volume: bool = False
) -> Construction:
    """Orthogonal product of the factors.

    Product closed forms: volumes multiply, the surface area is the sum of
    each factor's surface area times the other volumes, facet counts add,
    vertex counts multiply, and the inradius is the smallest factor inradius.
    """
    if not factors:
        raise SpecError("product needs at least one factor")
    if normalize_to_unit_volume:
        factors = [normalized_to_unit_volume(f) for f in factors]
    if any(f.forms is None for f in factors):
        raise SpecError("product factors need closed forms")
    if any(f.hp is None for f in factors):
        raise SpecError("product factors need H-reps")

    dims = [f.dim for f in factors]
    n = sum(dims)
    hp = HPolytope(
        _block_embed([f.hp.normals for f in factors]),
        np.concatenate([f.hp.offsets for f in factors]),
        check=False,
    )
    vp = None
    v_count = math.prod(f.forms.vertex_count for f in factors)
    if v_count <= MAX_ENUM_REP and all(f.vp is not None for f in factors):
        pieces = [f.vp.vertices for f in factors]
        combos = itertools.product(*[range(p.shape[0]) for p in pieces])
        V = np.array(
            [np.concatenate([p[i] for p, i in zip(pieces, idx)]) for idx in combos]
        )
        vp = VPolytope(V, check=False)

    vols = [f.forms.volume for f in factors]
    vol = math.prod(vols)
    surf = sum(
        f.forms.surface_area * vol / f.forms.volume for f in factors
    )
    iq = surf / vol ** ((n - 1) / n)

    # The product is in minimal position iff each factor is and the
    # per-block covariance scalars agree (surface_i * prod of other volumes,
    # divided by the block dimension).
    minimal = None
    if all(
        f.forms.minimal_iq is not None
        and math.isclose(f.forms.minimal_iq, f.forms.iq, rel_tol=1e-12)
        for f in factors
    ):
        scalars = [
            (f.forms.surface_area * vol / f.forms.volume) / f.dim for f in factors
        ]
        if max(scalars) - min(scalars) <= 1e-9 * max(scalars):
            minimal = iq
    forms = ClosedForms(
        dim=n,
        volume=vol,
        surface_area=surf,
        iq=iq,
        facet_count=sum(f.forms.facet_count for f in factors),
        vertex_count=v_count,
        inradius=min(f.forms.inradius for f in factors),
        minimal_iq=minimal,
    )
    return Construction(
        "product",
        {"dims": dims, "normalized": bool(normalize_to_unit_volume)},
        hp,
        vp,
        forms,
        {"factor_names": [f.name for f in factors]},
    )


def _summand_facets(c: Construction) -> list[FacetData]:
    if c.vp is not None:
        return facet_enumeration(c.vp)
    g = analyze(c.hp)
    return list(g.facets)


def _isotropy_residual_facets(facets: list[FacetData], n: int) -> float:
    am = AreaMeasure(
        np.array([f.normal for f in facets]),
        np.array([f.measure for f in facets]),
    )
    C = covariance(am)
    return float(np.abs(C * n / np.trace(C) - np.eye(n)).max())


def l1_sum(summands: list[Construction]) -> Construction:
    """Free sum conv(union of the summands embedded in orthogonal blocks).

    Every summand must have all facets tangent to its own inscribed ball
    centered at the origin (equal facet offsets); the sum then satisfies the
    same tangency and its volume and surface area have exact factorial
    forms.  minimal_iq is attached only when every summand is verified to be
    origin-symmetric with congruent facets, isotropic area measure, and
    inradius 1/sqrt(dim).
    """
    if not summands:
        raise SpecError("free sum needs at least one summand")
    if any(s.vp is None for s in summands):
        raise SpecError("free sum needs vertex representations")
    if any(s.forms is None for s in summands):
        raise SpecError("free sum needs closed forms")

    dims = [s.dim for s in summands]
    B = sum(dims)
    facet_lists = [_summand_facets(s) for s in summands]
    radii = []
    for s, facets in zip(summands, facet_lists):
        offs = np.array([f.offset for f in facets])
        if np.any(offs <= 0.0):
            raise TangencyError(f"summand {s.name}: inball is not centered at origin")
        if offs.max() - offs.min() > TANGENCY_TOL:
            loose = np.nonzero(offs > offs.min() + TANGENCY_TOL)[0]
            raise TangencyError(
                f"summand {s.name}: facets {loose.tolist()} miss the inscribed ball"
            )
        radii.append(float(offs.min()))

    vp = VPolytope(_block_embed([s.vp.vertices for s in summands]), check=False)

    # H-rep: one halfspace per choice of facet from each block.
    hp = None
    facet_count = math.prod(len(fl) for fl in facet_lists)
    if facet_count <= MAX_ENUM_REP:
        scaled = [
            np.array([f.normal / f.offset for f in fl]) for fl in facet_lists
        ]
        rows = np.array(
            [
                np.concatenate(choice)
                for choice in itertools.product(*scaled)
            ]
        )
        norms = np.linalg.norm(rows, axis=1)
        hp = HPolytope(rows / norms[:, None], 1.0 / norms, check=False)

    log_prod = sum(
        math.lgamma(d + 1.0) + math.log(s.forms.volume)
        for d, s in zip(dims, summands)
    )
    vol = math.exp(log_prod - math.lgamma(B + 1.0))
    inv_h2 = sum(1.0 / h**2 for h in radii)
    surf = math.sqrt(inv_h2) * math.exp(log_prod - math.lgamma(B))
    iq = surf / vol ** ((B - 1) / B)

    hypotheses = []
    for s, facets, h, d in zip(summands, facet_lists, radii, dims):
        Vs = s.vp.vertices
        sym = all(
            np.linalg.norm(Vs + v, axis=1).min() <= SYMMETRY_TOL for v in Vs
        )
        measures = np.array([f.measure for f in facets])
        congruent = (measures.max() - measures.min()) <= 1e-9 * measures.max()
        isotropic = _isotropy_residual_facets(facets, d) <= ISOTROPY_TOL
        radius_ok = abs(h - 1.0 / math.sqrt(d)) <= HYPOTHESIS_TOL
        hypotheses.append(sym and congruent and isotropic and radius_ok)
    minimal = None
    if all(hypotheses):
        log_min = (
            sum(-1.5 * d * math.log(d) + math.lgamma(d + 1.0) for d in dims)
            - math.lgamma(B + 1.0)
        ) / B
        log_min += 1.5 * math.log(B)
        log_min += sum(
            d * math.log(s.forms.iq) for d, s in zip(dims, summands)
        ) / B
        minimal = math.exp(log_min)

    forms = ClosedForms(
        dim=B,
        volume=vol,
        surface_area=surf,
        iq=iq,
        facet_count=facet_count,
        vertex_count=sum(s.forms.vertex_count for s in summands),
        inradius=1.0 / math.sqrt(inv_h2),
        minimal_iq=minimal,
    )
    return Construction(
        "l1sum",
        {"dims": dims},
        hp,
        vp,
        forms,
        {
            "summand_names": [s.name for s in summands],
            "summand_inradii": radii,
            "hypotheses_verified": bool(all(hypotheses)),
        },
    )


def lindelof_body(normals) -> Construction:
    """Intersection of halfspaces {<u_i, x> <= 1}: every facet plane is
    tangent to the unit ball, so this body minimizes iq among all bodies
    whose facet normals come from the given set."""
    N = np.asarray(normals, dtype=float)
    hp = HPolytope(N, np.ones(N.shape[0]))  # validates spanning + boundedness
    forms = None
    try:
        forms = measured_forms(hp)
    except DimensionError:
        pass  # above enumeration caps; representation still valid
    return Construction("lindelof", {"count": N.shape[0]}, hp, None, forms)


# ---------------------------------------------------------------------------
# padding


def _is_symmetric_v(V: np.ndarray, tol: float = SYMMETRY_TOL) -> bool:
    return all(np.linalg.norm(V + v, axis=1).min() <= tol for v in V)


def _body_diameter(V: np.ndarray) -> float:
    lo, hi = V.min(axis=0), V.max(axis=0)
    return float(np.linalg.norm(hi - lo))


def _facet_count_h(hp: HPolytope) -> tuple[int, np.ndarray, np.ndarray]:
    """True facet count of an H-polytope plus vertices and incidence."""
    V, inc = _vertex_candidates(hp)
    n = hp.dim
    count = 0
    for i in range(hp.n_halfspaces):
        ids = np.nonzero(inc[i])[0]
        if ids.size >= n and np.linalg.matrix_rank(V[ids] - V[ids][0], tol=1e-9) == n - 1:
            count += 1
    return count, V, inc

def _single_cut(hp: HPolytope, V: np.ndarray, inc: np.ndarray, vertex_id: int, delta: float):
    """Halfspace slicing exactly one vertex off, or None if delta is too big."""
    v = V[vertex_id]
    active = np.nonzero(inc[:, vertex_id])[0]
    if active.size == 0:
        return None
    w = hp.normals[active].sum(axis=0)
    norm = np.linalg.norm(w)
    if norm <= 1e-12:
        return None
    w = w / norm
    support = V @ w
    alpha = float(support[vertex_id])
    cut = alpha - delta
    if cut <= 0.0:
        return None
    others = np.delete(support, vertex_id)
    # the slab must separate v strictly from every other vertex
    if others.max() >= cut - 1e-12:
        return None
    return w, cut


def pad_facets(
    body: Construction | HPolytope,
    target: int,
    delta: float | None = None,
    symmetric: bool | None = None,
) -> PaddingResult:
    """Raise the facet count to exactly `target` by slicing off vertex
    neighborhoods, one shallow cut (or symmetric pair of cuts) at a time.

    Each cut is validated: it must remove exactly one vertex and add exactly
    one facet.  With delta=None the cut depth starts at 1e-3 of the diameter
    and is halved on failure (up to PAD_MAX_RETRIES); an explicit delta that
    fails validation raises GeometryError instead.
    """
    hp = body.hp if isinstance(body, Construction) else body
    if hp is None:
        raise SpecError("facet padding needs an H-rep")
    count, V, inc = _facet_count_h(hp)
    if count != hp.n_halfspaces:
        raise StructuralError("input H-rep has redundant halfspaces")
    initial = count
    if target < count:
        raise SpecError(f"target {target} below current facet count {count}")
    iq_before = analyze(hp).iq
    if target == count:
        return PaddingResult(hp, iq_before, iq_before, 0.0, 0, 0.0)

    sym_input = _is_symmetric_v(V)
    if symmetric is True:
        if not sym_input:
            raise SpecError("symmetric padding requested for an asymmetric body")
        if (target - count) % 2:
            raise SpecError("symmetric padding needs an even facet increment")
    use_pairs = sym_input and (target - count) % 2 == 0 if symmetric is None else symmetric

    delta_used = 0.0
    while count < target:
        order = np.lexsort(np.vstack([V.T[::-1], -np.linalg.norm(V, axis=1)]))
        vertex_id = int(order[0])  # farthest vertex, lexicographic tie-break
        step = 2 if use_pairs and target - count >= 2 else 1
        if delta is not None:
            d0 = delta
        else:
            # depth must respect the local vertex scale: once fresh corners
            # run out, cuts land on vertices spawned by earlier cuts, and a
            # diameter-based depth would destroy the whole cluster
            gap = np.linalg.norm(np.delete(V, vertex_id, axis=0) - V[vertex_id], axis=1).min()
            d0 = min(PAD_DELTA_FRACTION * _body_diameter(V), 0.25 * float(gap))
        attempts = 1 if delta is not None else PAD_MAX_RETRIES
        placed = None
        d = d0
        for _ in range(attempts):
            cut = _single_cut(hp, V, inc, vertex_id, d)
            cuts = [cut] if cut is not None else None
            if cuts is not None and step == 2:
                mirror_id = int(np.argmin(np.linalg.norm(V + V[vertex_id], axis=1)))
                mirror = _single_cut(hp, V, inc, mirror_id, d)
                cuts = [cut, mirror] if mirror is not None else None
            if cuts is not None:
                rows = np.vstack([hp.normals] + [c[0][None, :] for c in cuts])
                offs = np.concatenate([hp.offsets, [c[1] for c in cuts]])
                new_hp = HPolytope(rows, offs, check=False)
                try:
                    new_count, new_V, new_inc = _facet_count_h(new_hp)
                except StructuralError:
                    new_count = -1
                if new_count == count + step:
                    placed = (new_hp, new_count, new_V, new_inc, d)
                    break
            d /= 2.0
        if placed is None:
            raise GeometryError(
                f"cut of depth {d0} near vertex {V[vertex_id]} failed validation"
            )
        hp, count, V, inc, delta_used = placed

    iq_after = analyze(hp).iq
    return PaddingResult(
        hp, iq_before, iq_after, abs(iq_after - iq_before), target - initial, delta_used
    )


def pad_vertices(
    body: Construction | VPolytope,
    target: int,
    delta: float | None = None,
    symmetric: bool | None = None,
) -> PaddingResult:
    """Raise the vertex count to exactly `target` by adding points just
    outside a facet (in +- pairs when symmetry is to be preserved).

    Each placement is validated: the hull must gain exactly the new points
    and keep every existing vertex extreme; failed placements retry with a
    halved offset, and an explicit delta that fails raises GeometryError.
    """
    vp = body.vp if isinstance(body, Construction) else body
    if vp is None:
        raise SpecError("vertex padding needs a V-rep")
    V = vp.vertices.copy()
    count = V.shape[0]
    if target < count:
        raise SpecError(f"target {target} below current vertex count {count}")
    iq_before = analyze(vp).iq
    if target == count:
        return PaddingResult(vp, iq_before, iq_before, 0.0, 0, 0.0)

    sym_input = _is_symmetric_v(V)
    if symmetric is True:
        if not sym_input:
            raise SpecError("symmetric padding requested for an asymmetric body")
        if (target - count) % 2:
            raise SpecError("symmetric padding needs an even vertex increment")
    use_pairs = sym_input and (target - count) % 2 == 0 if symmetric is None else symmetric

    delta_used = 0.0
    spot = 0
    while count < target:
        facets = facet_enumeration(VPolytope(V, check=False))
        facets = sorted(facets, key=lambda f: (-f.measure, tuple(f.normal)))
        f = facets[spot % len(facets)]
        centroid = V[list(f.vertex_ids)].mean(axis=0)
        # deterministic tangential nudge keeps added points in general position
        tangent = np.zeros(V.shape[1])
        if V.shape[1] > 1:
            edge = V[f.vertex_ids[1]] - V[f.vertex_ids[0]]
            tangent = edge / np.linalg.norm(edge)
        step = 2 if use_pairs and target - count >= 2 else 1
        d0 = delta if delta is not None else PAD_DELTA_FRACTION * _body_diameter(V)
        attempts = 1 if delta is not None else PAD_MAX_RETRIES
        placed = None
        d = d0
        for _ in range(attempts):
            p = centroid + d * f.normal + 0.37 * d * tangent
            new_points = [p, -p] if step == 2 else [p]
            cand = np.vstack([V] + [q[None, :] for q in new_points])
            try:
                trial = VPolytope(cand, check=False)
                facet_enumeration(trial)  # raises if any point went interior
                ok = True
            except (StructuralError, DimensionError):
                ok = False
            if ok and cand.shape[0] == count + step:
                placed = (cand, d)
                break
            d /= 2.0
        if placed is None:
            raise GeometryError(
                f"vertex placement above facet with normal {f.normal} failed"
            )
        V, delta_used = placed
        count = V.shape[0]
        spot += 1

    out = VPolytope(V, check=True)
    iq_after = analyze(out).iq
    return PaddingResult(
        out, iq_before, iq_after, abs(iq_after - iq_before), target - vp.n_vertices, delta_used
    )


# ---------------------------------------------------------------------------
# extremal constructions


def _facet_branch_arithmetic(n: int, phi: int):
    """Pick (m, a, r, b): a blocks of the 2^m-facet piece, a final block of
    dimension r padded to b facets.  Returns None if no split works."""
    m_max = 0
    for m in range(2, n):
        if phi / n > 2**m / m:
            m_max = m
    for m in range(m_max, 1, -1):
        a = (n - 1) // m
        r = n - a * m
        for a_c, r_c in ((a, r), (a - 1, r + m)):
            if a_c < 1 or r_c < 1:
                continue
            b = phi - a_c * 2**m
            if b < 2**r_c:
                continue
            if r_c == 1 and b != 2:
                continue  # a 1-dimensional block cannot carry extra facets
            return m, a_c, r_c, b
    return None


def extremal_facet_polytope(n: int, n_facets: int) -> Construction:
    """Unit-volume body with exactly `n_facets` facets and nearly minimal
    isoperimetric quotient for that facet budget.

    Branches: a padded simplex for small budgets, a padded cross polytope
    once the budget reaches 2^n, and otherwise a product of unit-volume
    cross polytopes of an optimized intermediate dimension m with one
    lower-dimensional padded block absorbing the remainder.
    """
    phi = int(n_facets)
    if n < 2:
        raise SpecError("need dimension n >= 2")
    if phi < n + 1:
        raise SpecError(f"a polytope in dimension {n} needs at least {n + 1} facets")

    extras: dict = {"n": n, "n_facets": phi}

    def _finish(hp: HPolytope, branch: str) -> Construction:
        forms0 = measured_forms(hp)
        s = forms0.volume ** (-1.0 / n)
        hp_unit = HPolytope(hp.normals, hp.offsets * s, check=False)
        forms = measured_forms(hp_unit)
        extras["branch"] = branch
        extras["band_upper_reference"] = forms.iq * math.sqrt(
            1.0 + math.log(phi / n)
        ) / n
        return Construction("extremal_facet", {"n": n, "n_facets": phi}, hp_unit, None, forms, extras)

    if phi >= 2**n:
        padded = pad_facets(cross_polytope(n), phi)
        return _finish(padded.body, "cross")
    if phi <= 3 * n:
        padded = pad_facets(simplex_regular(n), phi)
        return _finish(padded.body, "simplex")

    split = _facet_branch_arithmetic(n, phi)
    if split is None:
        padded = pad_facets(simplex_regular(n), phi)
        return _finish(padded.body, "simplex-fallback")
    m, a, r, b = split
    extras.update({"m": m, "a": a, "r": r, "b": b})
    extras["rate_reference"] = 2.0 * n / math.sqrt(m)
    extras["rate_estimate"] = a * math.sqrt(m) + math.sqrt(r)

    block = normalized_to_unit_volume(cross_polytope(m))
    tail = cross_polytope(r)
    if b > 2**r:
        padded_tail = pad_facets(tail, b)
        tail_forms = measured_forms(padded_tail.body)
        tail = Construction("padded_cross", {"n": r, "n_facets": b}, padded_tail.body, None, tail_forms)
    tail = normalized_to_unit_volume(tail)
    product = cartesian_product([block] * a + [tail])
    assert product.forms.facet_count == phi
    extras["branch"] = "product"
    extras["band_upper_reference"] = product.forms.iq * math.sqrt(
        1.0 + math.log(phi / n)
    ) / n
    return Construction(
        "extremal_facet", {"n": n, "n_facets": phi}, product.hp, product.vp, product.forms, extras
    )


def _vertex_branch_arithmetic(n: int, beta: int):
    m_max = 0
    for m in range(2, n):
        if 2**m / m <= beta / n:
            m_max = m
    for m in range(m_max, 1, -1):
        a1 = (n - 1) // m  # number of full blocks
        r = n - a1 * m
        if a1 < 1 or not (1 <= r <= m):
            continue
        count = a1 * 2**m + 2**r
        if count <= beta:
            return m, a1, r, count
    return None


def extremal_vertex_polytope(n: int, n_vertices: int) -> Construction:
    """Origin-symmetric body with exactly `n_vertices` vertices and nearly
    minimal iq over linear images for that vertex budget.

    Built as a free sum of scaled cubes (side 2/sqrt(dim), so each block is
    tangent to the ball of radius 1/sqrt(dim)), padded with symmetric vertex
    pairs up to the exact count.  When no padding is needed the closed-form
    minimal iq is attached; padding perturbs the hypotheses, so the unpadded
    value is then reported separately in extras.
    """
    beta = int(n_vertices)
    if n < 2:
        raise SpecError("need dimension n >= 2")
    if beta % 2:
        raise SpecError("vertex budget must be even (origin-symmetric body)")
    if beta < 2 * n:
        raise SpecError(f"an origin-symmetric body in dimension {n} needs >= {2 * n} vertices")

    extras: dict = {
        "n": n,
        "n_vertices": beta,
        "band_target": math.sqrt(n * math.log(beta / n)) if beta > n else 0.0,
    }

    if beta >= 2**n:
        base = cube(n)
        if beta == 2**n:
            extras["branch"] = "cube"
            return Construction(
                "extremal_vertex", {"n": n, "n_vertices": beta}, base.hp, base.vp, base.forms, extras
            )
        padded = pad_vertices(base, beta, symmetric=True)
        forms = measured_forms(padded.body)
        extras["branch"] = "padded-cube"
        extras["minimal_iq_unpadded"] = base.forms.minimal_iq
        return Construction(
            "extremal_vertex", {"n": n, "n_vertices": beta}, None, padded.body, forms, extras
        )

    split = _vertex_branch_arithmetic(n, beta)
    if split is None:
        raise SpecError(
            f"no block split for n={n}, vertex budget {beta}; budget too small"
        )
    m, a1, r, count = split
    extras.update({"m": m, "a": a1 + 1, "r": r, "base_vertex_count": count})
    summands = [cube(m, 1.0 / math.sqrt(m))] * a1 + [cube(r, 1.0 / math.sqrt(r))]
    base = l1_sum(summands)
    assert base.forms.vertex_count == count
    extras["minimal_iq_unpadded"] = base.forms.minimal_iq

    if count == beta:
        extras["branch"] = "sum"
        return Construction(
            "extremal_vertex", {"n": n, "n_vertices": beta}, base.hp, base.vp, base.forms, extras
        )
    padded = pad_vertices(base, beta, symmetric=True)
    forms = measured_forms(padded.body)
    extras["branch"] = "padded-sum"
    return Construction(
        "extremal_vertex", {"n": n, "n_vertices": beta}, None, padded.body, forms, extras
    )


# ---------------------------------------------------------------------------
# central symmetrization


def central_symmetrize(
    P,
    seed: int = 0,
    max_line_searches: int = 50,
    samples: int = 200_000,
) -> SymmetrizationResult:
    """Symmetrize K about the best translation: maximize vol(K cap (x - K)).

    The search starts at x = 2 * centroid(K), which already guarantees
    vol(K'')^(1/n) >= vol(K)^(1/n) / 2, and improves it by coordinate-wise
    golden-section line searches (accepting only strict improvements).  The
    returned body (-x/2 + K) cap (x/2 - K) is exactly origin-symmetric.

    Dimensions <= 4 use exact intersection volumes; above that the overlap
    is estimated on a fixed Monte Carlo sample of K (common random numbers,
    deterministic for a given seed).
    """
    g = analyze(P if not isinstance(P, Construction) else P.rep())
    n = g.dim
    N = np.array([f.normal for f in g.facets])
    t = np.array([f.offset for f in g.facets])
    vol = g.volume
    diam = _body_diameter(g.vertices)
    evaluations = 0
    exact = n <= 4

    if not exact:
        lo, hi = g.vertices.min(axis=0), g.vertices.max(axis=0)
        gen = rng.substream(seed, rng.DOMAIN_SYMMETRIZE)
        pool: list[np.ndarray] = []
        need = samples
        for _ in range(200):
            if need <= 0:
                break
            X = gen.uniform(lo, hi, size=(min(4 * need, 500_000), n))
            inside = np.all(X @ N.T <= t[None, :] + 1e-12, axis=1)
            take = X[inside][:need]
            pool.append(take)
            need -= take.shape[0]
        if need > 0:
            raise IsoperilabError("rejection sampling from the body kept missing")
        Y = np.vstack(pool)

    def objective(x: np.ndarray) -> float:
        nonlocal evaluations
        evaluations += 1
        offs = t - (N @ x) / 2.0
        if offs.min() <= 1e-12:
            return 0.0
        if exact:
            hp = HPolytope(
                np.vstack([N, -N]), np.concatenate([offs, offs]), check=False
            )
            try:
                return analyze(hp).volume
            except StructuralError:
                return 0.0
        hits = np.all((x[None, :] - Y) @ N.T <= t[None, :] + 1e-12, axis=1)
        return vol * float(np.count_nonzero(hits)) / Y.shape[0]

    x = 2.0 * np.asarray(g.centroid, dtype=float)
    best = objective(x)
    if best <= 0.0:
        raise IsoperilabError("overlap at the centroid seed is empty (bug)")

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    searches = 0
    improved_in_cycle = 0.0
    for ls in range(max_line_searches):
        coord = ls % n
        if coord == 0 and ls > 0:
            if improved_in_cycle <= 1e-9 * best:
                break
            improved_in_cycle = 0.0
        a = x[coord] - 0.25 * diam
        b = x[coord] + 0.25 * diam

        def f1d(z: float) -> float:
            xc = x.copy()
            xc[coord] = z
            return objective(xc)

        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc, fd = f1d(c), f1d(d)
        for _ in range(14):
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = f1d(c)
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = f1d(d)
        z = c if fc >= fd else d
        fz = max(fc, fd)
        searches += 1
        if fz > best * (1.0 + 1e-12):
            improved_in_cycle += fz - best
            x[coord] = z
            best = fz

    root_ratio = (best / vol) ** (1.0 / n)
    if root_ratio < 0.5 - 1e-9:
        # fall back to the guaranteed seed and re-verify
        x = 2.0 * np.asarray(g.centroid, dtype=float)
        best = objective(x)
        root_ratio = (best / vol) ** (1.0 / n)
        slack = 0.0 if exact else 4.0 * math.sqrt(0.25 / samples)
        if root_ratio < 0.5 - 1e-9 - slack:
            raise IsoperilabError(
                f"symmetrization guarantee violated at the centroid seed "
                f"(ratio {root_ratio}); this is a bug"
            )

    offs = t - (N @ x) / 2.0
    hp = HPolytope(np.vstack([N, -N]), np.concatenate([offs, offs]), check=False)
    V, _ = _vertex_candidates(hp)
    # enforce exact closure under negation by averaging mirror pairs
    used = np.zeros(V.shape[0], dtype=bool)
    sym_pts = []
    for i in range(V.shape[0]):
        if used[i]:
            continue
        j = int(np.argmin(np.linalg.norm(V + V[i], axis=1)))
        used[i] = used[j] = True
        w = (V[i] - V[j]) / 2.0
        sym_pts.extend([w, -w])
    body = VPolytope(np.array(sym_pts))
    vol_body = analyze(body).volume

    return SymmetrizationResult(
        x=x,
        shift=x / 2.0,
        body=body,
        vol_input=vol,
        vol_body=vol_body,
        root_ratio=(vol_body / vol) ** (1.0 / n),
        line_searches=searches,
        evaluations=evaluations,
        method="exact" if exact else "mc",
    )


# ---------------------------------------------------------------------------
# recipes


def build_recipe(obj: dict) -> Construction:
    """Construct a body from a recipe dict {"family": ..., "params": {...}}."""
    if not isinstance(obj, dict) or "family" not in obj:
        raise SpecError("recipe must be a dict with a 'family' key")
    family = obj["family"]
    params = obj.get("params", {})
    if family == "simplex":
        return simplex_regular(int(params["n"]))
    if family == "cross":
        return cross_polytope(int(params["n"]), float(params.get("scale", 1.0)))
    if family == "cube":
        return cube(int(params["n"]), float(params.get("scale", 1.0)))
    if family == "product":
        factors = [build_recipe(f) for f in params["factors"]]
        return cartesian_product(
            factors, bool(params.get("normalize_to_unit_volume", False))
        )
    if family == "l1sum":
        return l1_sum([build_recipe(s) for s in params["summands"]])
    if family == "lindelof":
        return lindelof_body(np.array(params["normals"], dtype=float))
    if family == "extremal_facet":
        return extremal_facet_polytope(int(params["n"]), int(params["n_facets"]))
    if family == "extremal_vertex":
        return extremal_vertex_polytope(int(params["n"]), int(params["n_vertices"]))
    raise SpecError(f"unknown recipe family {family!r}")
