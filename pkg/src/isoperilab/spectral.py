"""Upper bounds on the first Dirichlet eigenvalue of a polytope.

For an origin-symmetric polytope in normal form (unit normals u_i, offsets
1/sqrt(c_i), sum_i c_i u_i u_i^T = I) the product test function

    phi(x) = prod_i (1 - c_i <u_i, x>^2)

vanishes on the boundary, so the Rayleigh quotient

    lambda <= integral ||grad phi||^2 / integral phi^2

is a certified upper bound; it is at most 5m for m normal pairs.

Quadrature: in dimensions 1 and 2 the quotient is integrated exactly, with
rational arithmetic (exact closed forms, zero halfwidth) when the number of
factors is small and a Gauss rule of sufficient degree (still exact for
these polynomial integrands, up to roundoff) otherwise.  In dimension 3+
the quotient is a Monte Carlo ratio estimate with a 4-sigma delta-method
halfwidth, chunked and seeded for worker-independent determinism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng
from .errors import (
    InternalError,
    SamplingError,
    SpecError,
)
from .polytope import HPolytope, vertex_enumeration
from .positions import BLDecomposition, bl_transform, bl_volume_bound_check

EXACT_QUADRATURE_MAX_TERMS = 4
UNIT_TOL = 1e-9


@dataclass(frozen=True)
class TestFunction:
    """phi(x) = prod_i (1 - c_i <u_i, x>^2) with c_i > 0 and unit u_i."""

    c: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        u = np.atleast_2d(np.asarray(self.u, dtype=float))
        if c.ndim != 1 or u.shape[0] != c.shape[0]:
            raise SpecError("need one coefficient per direction")
        if np.any(c <= 0.0) or not np.all(np.isfinite(c)):
            raise SpecError("coefficients must be positive and finite")
        norms = np.linalg.norm(u, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_TOL):
            raise SpecError("directions must be unit vectors")
        object.__setattr__(self, "c", c.copy())
        object.__setattr__(self, "u", u.copy())
        self.c.setflags(write=False)
        self.u.setflags(write=False)

    @property
    def m(self) -> int:
        return self.c.shape[0]

    @property
    def dim(self) -> int:
        return self.u.shape[1]


def test_function_from_bl(decomp: BLDecomposition) -> TestFunction:
    return TestFunction(decomp.c, decomp.u)


def phi_eval(tf: TestFunction, X: np.ndarray) -> np.ndarray:
    """phi at each row of X."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    dots = X @ tf.u.T
    return np.prod(1.0 - tf.c[None, :] * dots**2, axis=1)


def phi_grad(tf: TestFunction, X: np.ndarray) -> np.ndarray:
    """grad phi at each row of X, via leave-one-out prefix/suffix products."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    dots = X @ tf.u.T  # N x m
    factors = 1.0 - tf.c[None, :] * dots**2
    N, m = factors.shape
    prefix = np.ones((N, m))
    suffix = np.ones((N, m))
    if m > 1:
        prefix[:, 1:] = np.cumprod(factors[:, :-1], axis=1)
        suffix[:, :-1] = np.cumprod(factors[:, :0:-1], axis=1)[:, ::-1]
    loo = prefix * suffix
    return (-2.0 * tf.c[None, :] * dots * loo) @ tf.u


@dataclass(frozen=True)
class SpectralBound:
    value: float
    halfwidth: float
    samples: int
    seed: int
    method: str


@dataclass(frozen=True)
class ScalingLawEntry:
    scale: float
    value: float
    rescaled: float
    exact_match: bool


@dataclass(frozen=True)
class ScalingLawReport:
    base_value: float
    entries: tuple
    passed: bool


@dataclass(frozen=True)
class SpectralCertificate:
    """Certified eigenvalue and volume bounds for one normal-form body."""

    lambda_bound: float
    halfwidth: float
    five_m: float
    vol_bound_lhs: float
    vol_bound_rhs: float
    samples: int
    seed: int
    method: str
    m: int
    dim: int

    @property
    def passed(self) -> bool:
        return bool(
            self.lambda_bound + self.halfwidth <= self.five_m + 1e-12
            and self.vol_bound_lhs <= self.vol_bound_rhs + 1e-12
        )

    def to_json_dict(self) -> dict:
        return {
            "lambda_bound": self.lambda_bound,
            "halfwidth": self.halfwidth,
            "five_m": self.five_m,
            "vol_bound_lhs": self.vol_bound_lhs,
            "vol_bound_rhs": self.vol_bound_rhs,
            "samples": self.samples,
            "seed": self.seed,
        }


def box_lambda_reference(halfwidths) -> float:
    """First Dirichlet eigenvalue of the box prod [-h_i, h_i]."""
    h = np.asarray(halfwidths, dtype=float)
    if np.any(h <= 0.0):
        raise SpecError("box halfwidths must be positive")
    return float(np.sum((np.pi / (2.0 * h)) ** 2))


# ---------------------------------------------------------------------------
# exact rational quadrature (dimensions 1 and 2)


def _poly1_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, va in enumerate(a):
        if va:
            for j, vb in enumerate(b):
                out[i + j] += va * vb
    return out


def _poly1_dx(a: list) -> list:
    return [k * v for k, v in enumerate(a)][1:] or [Fraction(0)]

def _poly1_integrate(a: list, lo: Fraction, hi: Fraction) -> Fraction:
    total = Fraction(0)
    for k, v in enumerate(a):
        if v:
            total += v * (hi ** (k + 1) - lo ** (k + 1)) / (k + 1)
    return total


def _rational_rayleigh_1d(lo, hi, c, u) -> Fraction:
    phi = [Fraction(1)]
    for ck, uk in zip(c, u):
        phi = _poly1_mul(phi, [Fraction(1), Fraction(0), -ck * uk * uk])
    dphi = _poly1_dx(phi)
    num = _poly1_integrate(_poly1_mul(dphi, dphi), lo, hi)
    den = _poly1_integrate(_poly1_mul(phi, phi), lo, hi)
    if den == 0:
        raise InternalError("zero denominator in exact quadrature")
    return num / den


def _poly2_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i1, j1), v1 in a.items():
        for (i2, j2), v2 in b.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, Fraction(0)) + v1 * v2
    return out


def _poly2_dx(a: dict) -> dict:
    return {(i - 1, j): i * v for (i, j), v in a.items() if i > 0}


def _poly2_dy(a: dict) -> dict:
    return {(i, j - 1): j * v for (i, j), v in a.items() if j > 0}


def _poly2_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + v
    return out


def _triangle_monomials(p, q, degree: int) -> dict:
    """integral over the triangle (0, p, q) of x^i y^j for i + j <= degree.

    With x = s*p + t*q on the standard simplex, expand binomially; the
    simplex moments are integral s^a t^b = a! b! / (a + b + 2)!.
    """
    px, py = p
    qx, qy = q
    det = abs(px * qy - py * qx)
    # powers and binomials up to `degree`
    ppx = [Fraction(1)]
    pqx = [Fraction(1)]
    ppy = [Fraction(1)]
    pqy = [Fraction(1)]
    for _ in range(degree):
        ppx.append(ppx[-1] * px)
        pqx.append(pqx[-1] * qx)
        ppy.append(ppy[-1] * py)
        pqy.append(pqy[-1] * qy)
    binom = [[math.comb(i, a) for a in range(i + 1)] for i in range(degree + 1)]
    fact = [math.factorial(k) for k in range(2 * degree + 3)]
    table: dict = {}
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            total = Fraction(0)
            denom = fact[i + j + 2]
            for a in range(i + 1):
                xa = binom[i][a] * ppx[a] * pqx[i - a]
                for b in range(j + 1):
                    yb = binom[j][b] * ppy[b] * pqy[j - b]
                    total += xa * yb * Fraction(fact[a + b] * fact[i - a + j - b], denom)
            table[(i, j)] = det * total
    return table


def _fan_order(vertices: np.ndarray) -> list:
    angles = np.arctan2(vertices[:, 1], vertices[:, 0])
    return list(np.argsort(angles, kind="stable"))


def _rational_rayleigh_2d(verts, order, c, u) -> Fraction:
    phi = {(0, 0): Fraction(1)}
    for ck, (ux, uy) in zip(c, u):
        factor = {
            (0, 0): Fraction(1),
            (2, 0): -ck * ux * ux,
            (1, 1): -2 * ck * ux * uy,
            (0, 2): -ck * uy * uy,
        }
        phi = _poly2_mul(phi, factor)
    gx, gy = _poly2_dx(phi), _poly2_dy(phi)
    num_poly = _poly2_add(_poly2_mul(gx, gx), _poly2_mul(gy, gy))
    den_poly = _poly2_mul(phi, phi)
    degree = max(i + j for i, j in den_poly)
    num = Fraction(0)
    den = Fraction(0)
    k = len(order)
    for idx in range(k):
        p = verts[order[idx]]
        q = verts[order[(idx + 1) % k]]
        table = _triangle_monomials(p, q, degree)
        num += sum((v * table[key] for key, v in num_poly.items()), Fraction(0))
        den += sum((v * table[key] for key, v in den_poly.items()), Fraction(0))
    if den == 0:
        raise InternalError("zero denominator in exact quadrature")
    return num / den


def _exact_rayleigh(body: HPolytope, tf: TestFunction, scale: Fraction) -> Fraction:
    """Exact Rayleigh quotient of scale*body with coefficients c/scale^2.

    All arithmetic is rational, so the scaling law
    bound(s K) * s^2 == bound(K) holds bit-for-bit.
    """
    n = body.dim
    c = [Fraction(x) / (scale * scale) for x in tf.c]
    vp = vertex_enumeration(body)
    if n == 1:
        xs = sorted(Fraction(float(v)) * scale for v in vp.vertices[:, 0])
        u = [Fraction(float(x)) for x in tf.u[:, 0]]
        return _rational_rayleigh_1d(xs[0], xs[-1], c, u)
    verts = [
        (Fraction(float(x)) * scale, Fraction(float(y)) * scale)
        for x, y in vp.vertices
    ]
    order = _fan_order(vp.vertices)  # angles are scale-invariant
    u = [(Fraction(float(a)), Fraction(float(b))) for a, b in tf.u]
    return _rational_rayleigh_2d(verts, order, c, u)


# ---------------------------------------------------------------------------
# float quadrature (dimensions 1 and 2, many factors)


def _gauss_rayleigh(body: HPolytope, tf: TestFunction) -> float:
    """Gauss quadrature of the Rayleigh quotient, exact for the polynomial
    integrands up to roundoff (degree 4m needs 2m + 2 points per axis)."""
    n = body.dim
    g = 2 * tf.m + 2
    nodes, weights = np.polynomial.legendre.leggauss(g)
    vp = vertex_enumeration(body)
    if n == 1:
        lo, hi = float(vp.vertices.min()), float(vp.vertices.max())
        X = (0.5 * (nodes + 1.0) * (hi - lo) + lo)[:, None]
        W = 0.5 * (hi - lo) * weights
        f = phi_eval(tf, X)
        grad = phi_grad(tf, X)
        num = float(W @ (grad[:, 0] ** 2))
        den = float(W @ (f**2))
        return num / den
    # collapsed-square rule on each fan triangle (0, p, q)
    xi = 0.5 * (nodes + 1.0)
    wx = 0.5 * weights
    S = np.repeat(xi, g)
    T = np.tile(xi, g) * (1.0 - np.repeat(xi, g))
    WW = np.repeat(wx * (1.0 - xi), g) * np.tile(wx, g)
    order = _fan_order(vp.vertices)
    k = len(order)
    num = 0.0
    den = 0.0
    for idx in range(k):
        p = vp.vertices[order[idx]]
        q = vp.vertices[order[(idx + 1) % k]]
        det = abs(p[0] * q[1] - p[1] * q[0])
        X = S[:, None] * p[None, :] + T[:, None] * q[None, :]
        f = phi_eval(tf, X)
        grad = phi_grad(tf, X)
        num += det * float(WW @ (grad**2).sum(axis=1))
        den += det * float(WW @ (f**2))
    return num / den


# ---------------------------------------------------------------------------
# Monte Carlo (dimension 3+)


def _mc_rayleigh(body: HPolytope, tf: TestFunction, samples: int, seed: int):
    vp = vertex_enumeration(body)
    lo = vp.vertices.min(axis=0)
    hi = vp.vertices.max(axis=0)
    N, t = body.normals, body.offsets
    sum_f = sum_g = sum_ff = sum_gg = sum_fg = 0.0
    accepted = 0
    for j, size in enumerate(rng.chunk_sizes(samples, rng.MC_CHUNK)):
        gen = rng.substream(seed, rng.DOMAIN_SPECTRAL, j)
        X = gen.uniform(lo, hi, size=(size, body.dim))
        inside = np.all(X @ N.T <= t[None, :] + 1e-12, axis=1)
        f = np.where(inside, phi_eval(tf, X) ** 2, 0.0)
        g = np.where(inside, (phi_grad(tf, X) ** 2).sum(axis=1), 0.0)
        accepted += int(np.count_nonzero(inside))
        sum_f += float(f.sum())
        sum_g += float(g.sum())
        sum_ff += float((f * f).sum())
        sum_gg += float((g * g).sum())
        sum_fg += float((f * g).sum())
    if sum_f <= 0.0:
        raise SamplingError(
            f"no sample of {samples} landed in the body; enlarge the budget"
        )
    n_s = float(samples)
    ratio = sum_g / sum_f
    mean_f = sum_f / n_s
    var_f = (sum_ff - sum_f * sum_f / n_s) / (n_s - 1.0)
    var_g = (sum_gg - sum_g * sum_g / n_s) / (n_s - 1.0)
    cov_fg = (sum_fg - sum_f * sum_g / n_s) / (n_s - 1.0)
    var_ratio = (var_g - 2.0 * ratio * cov_fg + ratio * ratio * var_f) / (
        n_s * mean_f * mean_f
    )
    scale = ratio * ratio + 1.0
    if var_ratio < 0.0:
        if var_ratio < -1e-12 * scale:
            raise InternalError(f"negative ratio variance {var_ratio}")
        var_ratio = 0.0
    return ratio, 4.0 * math.sqrt(var_ratio), accepted


def rayleigh_bound(
    body: HPolytope,
    tf: TestFunction,
    samples: int = 1_000_000,
    seed: int = 0,
) -> SpectralBound:
    """Upper bound integral ||grad phi||^2 / integral phi^2 over the body.

    Dimensions 1-2 are integrated exactly (rational arithmetic for up to
    EXACT_QUADRATURE_MAX_TERMS factors, an exact-degree Gauss rule beyond);
    both have zero halfwidth.  Higher dimensions use the chunked Monte
    Carlo ratio estimator with a 4-sigma halfwidth.
    """
    if tf.dim != body.dim:
        raise SpecError(
            f"test function dimension {tf.dim} != body dimension {body.dim}"
        )
    n = body.dim
    if n <= 2:
        if tf.m <= EXACT_QUADRATURE_MAX_TERMS:
            value = _exact_rayleigh(body, tf, Fraction(1))
            return SpectralBound(
                value=float(value), halfwidth=0.0, samples=0, seed=seed,
                method="quadrature-exact",
            )
        return SpectralBound(
            value=_gauss_rayleigh(body, tf), halfwidth=0.0, samples=0,
            seed=seed, method="quadrature-gauss",
        )
    ratio, halfwidth, _ = _mc_rayleigh(body, tf, samples, seed)
    return SpectralBound(
        value=ratio, halfwidth=halfwidth, samples=samples, seed=seed,
        method="mc",
    )


def scaling_law_check(
    body: HPolytope,
    tf: TestFunction,
    scales=(Fraction(1, 2), Fraction(2), Fraction(3)),
) -> ScalingLawReport:
    """Verify bound(s K) * s^2 == bound(K) exactly for each scale.

    Both sides are computed independently in rational arithmetic (the
    scaled body gets coefficients c/s^2 and vertices s*v), so the check is
    for bit-for-bit equality, not a tolerance.
    """
    if body.dim > 2 or tf.m > EXACT_QUADRATURE_MAX_TERMS:
        raise SpecError("scaling law check requires the exact quadrature path")
    base = _exact_rayleigh(body, tf, Fraction(1))
    entries = []
    all_ok = True
    for s in scales:
        s = Fraction(s)
        if s <= 0:
            raise SpecError("scales must be positive")
        val = _exact_rayleigh(body, tf, s)
        ok = val * s * s == base
        all_ok = all_ok and ok
        entries.append(
            ScalingLawEntry(
                scale=float(s),
                value=float(val),
                rescaled=float(val * s * s),
                exact_match=bool(ok),
            )
        )
    return ScalingLawReport(
        base_value=float(base), entries=tuple(entries), passed=bool(all_ok)
    )


def spectral_certificate(
    hp: HPolytope,
    samples: int = 1_000_000,
    seed: int = 0,
) -> SpectralCertificate:
    """Full pipeline: normal form, volume bound, and eigenvalue bound.

    The body is put in normal form, the product test function is built from
    its weights, and both certified inequalities are evaluated:
    lambda(BK) <= Rayleigh <= 5m and vol(BK)^(1/n) <= 2 sqrt(m/n).
    """
    decomp = bl_transform(hp)
    tf = test_function_from_bl(decomp)
    bound = rayleigh_bound(decomp.body, tf, samples=samples, seed=seed)
    volchk = bl_volume_bound_check(decomp, samples=samples, seed=seed)
    return SpectralCertificate(
        lambda_bound=bound.value,
        halfwidth=bound.halfwidth,
        five_m=5.0 * tf.m,
        vol_bound_lhs=volchk.vol_root_upper,
        vol_bound_rhs=volchk.global_bound,
        samples=bound.samples,
        seed=seed,
        method=bound.method,
        m=tf.m,
        dim=hp.dim,
    )
