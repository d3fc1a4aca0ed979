import json
import math
from fractions import Fraction

import numpy as np
import pytest

from isoperilab import constructions as cs
from isoperilab import polytope as pt
from isoperilab import positions as ps
from isoperilab import spectral as sp
from isoperilab.errors import SpecError


def segment_body():
    return pt.HPolytope(np.array([[1.0], [-1.0]]), np.ones(2))


def segment_tf():
    return sp.TestFunction(np.array([1.0]), np.array([[1.0]]))


def square_tf():
    return sp.TestFunction(np.ones(2), np.eye(2))


def test_test_function_validation():
    with pytest.raises(SpecError):
        sp.TestFunction(np.array([0.0]), np.array([[1.0]]))
    with pytest.raises(SpecError):
        sp.TestFunction(np.array([1.0]), np.array([[2.0]]))
    with pytest.raises(SpecError):
        sp.TestFunction(np.array([1.0, 1.0]), np.array([[1.0]]))


def test_phi_values_and_gradient():
    tf = square_tf()
    X = np.array([[0.0, 0.0], [0.5, 0.5], [1.0, 0.0]])
    vals = sp.phi_eval(tf, X)
    assert vals[0] == 1.0
    assert vals[1] == pytest.approx(0.5625, rel=1e-12)
    assert vals[2] == 0.0  # vanishes on the boundary
    # gradient against central differences
    gen = np.random.default_rng(0)
    U = gen.standard_normal((3, 3))
    U /= np.linalg.norm(U, axis=1)[:, None]
    tf3 = sp.TestFunction(np.array([0.9, 0.7, 0.4]), U)
    P = 0.3 * gen.standard_normal((4, 3))
    G = sp.phi_grad(tf3, P)
    h = 1e-6
    for k, x in enumerate(P):
        for j in range(3):
            e = np.zeros(3)
            e[j] = h
            fd = (sp.phi_eval(tf3, x + e)[0] - sp.phi_eval(tf3, x - e)[0]) / (2 * h)
            assert G[k, j] == pytest.approx(fd, abs=1e-6)


def test_segment_anchor_exact():
    b = sp.rayleigh_bound(segment_body(), segment_tf())
    assert b.method == "quadrature-exact"
    assert b.value == 2.5  # (8/3) / (16/15), exact in rational arithmetic
    assert b.halfwidth == 0.0
    assert b.value >= math.pi**2 / 4.0
    assert b.value <= 5.0


def test_square_anchor_exact():
    body = cs.cube(2).hp
    b = sp.rayleigh_bound(body, square_tf())
    assert b.method == "quadrature-exact"
    assert b.value == 5.0
    assert b.value >= math.pi**2 / 2.0
    assert b.value <= 10.0


def test_box_lambda_reference():
    assert sp.box_lambda_reference([1.0]) == pytest.approx(math.pi**2 / 4, rel=1e-12)
    assert sp.box_lambda_reference([1.0, 1.0]) == pytest.approx(
        math.pi**2 / 2, rel=1e-12
    )
    with pytest.raises(SpecError):
        sp.box_lambda_reference([1.0, -1.0])


def test_scaling_law_exact():
    rep = sp.scaling_law_check(cs.cube(2).hp, square_tf())
    assert rep.passed
    assert rep.base_value == 5.0
    for e in rep.entries:
        assert e.exact_match
        assert e.rescaled == 5.0
    vals = {e.scale: e.value for e in rep.entries}
    assert vals[0.5] == 20.0 and vals[2.0] == 1.25
    with pytest.raises(SpecError):
        sp.scaling_law_check(cs.cube(3).hp, sp.TestFunction(np.ones(3), np.eye(3)))


def test_gauss_path_agrees_with_exact():
    # a 2-d body with m = 4 runs both engines: exact rational quadrature
    # and the Gauss rule must agree to machine precision
    gen = np.random.default_rng(5)
    U = gen.standard_normal((4, 2))
    U /= np.linalg.norm(U, axis=1)[:, None]
    hp = pt.HPolytope(np.vstack([U, -U]), np.ones(8), check=False)
    d = ps.bl_transform(hp)
    tf = sp.test_function_from_bl(d)
    assert tf.m == 4
    exact = sp.rayleigh_bound(d.body, tf)
    assert exact.method == "quadrature-exact"
    gauss = sp._gauss_rayleigh(d.body, tf)
    assert gauss == pytest.approx(exact.value, rel=1e-12)


def test_gauss_path_used_beyond_rational_cap():
    gen = np.random.default_rng(8)
    U = gen.standard_normal((5, 2))
    U /= np.linalg.norm(U, axis=1)[:, None]
    hp = pt.HPolytope(np.vstack([U, -U]), np.ones(10), check=False)
    d = ps.bl_transform(hp)
    tf = sp.test_function_from_bl(d)
    assert tf.m == 5
    b = sp.rayleigh_bound(d.body, tf)
    assert b.method == "quadrature-gauss"
    assert 0.0 < b.value <= 5.0 * tf.m + 1e-12


def test_mc_path_cube3_matches_separable_value():
    # for the unit cube with axis test directions the Rayleigh quotient
    # separates: 3 * (value of the 1-d segment) = 7.5
    body = cs.cube(3).hp
    tf = sp.TestFunction(np.ones(3), np.eye(3))
    b = sp.rayleigh_bound(body, tf, samples=200_000, seed=4)
    assert b.method == "mc"
    assert abs(b.value - 7.5) <= b.halfwidth
    b2 = sp.rayleigh_bound(body, tf, samples=200_000, seed=4)
    assert b == b2  # deterministic
    b3 = sp.rayleigh_bound(body, tf, samples=200_000, seed=5)
    assert b3.value != b.value  # seed actually matters


def test_certificate_cross3():
    cert = sp.spectral_certificate(cs.cross_polytope(3).hp, samples=60_000, seed=2)
    assert cert.passed
    assert cert.m == 4 and cert.dim == 3
    d = cert.to_json_dict()
    assert sorted(d) == [
        "five_m",
        "halfwidth",
        "lambda_bound",
        "samples",
        "seed",
        "vol_bound_lhs",
        "vol_bound_rhs",
    ]
    json.dumps(d)  # serializable as-is


def test_certificate_square_exact_path():
    cert = sp.spectral_certificate(cs.cube(2).hp, seed=0)
    assert cert.passed
    assert cert.method == "quadrature-exact"
    assert cert.lambda_bound == 5.0
    assert cert.halfwidth == 0.0
    assert cert.vol_bound_lhs == pytest.approx(2.0, rel=1e-12)
    assert cert.vol_bound_rhs == pytest.approx(2.0, rel=1e-12)


def test_exact_rayleigh_scaling_is_rational():
    val = sp._exact_rayleigh(segment_body(), segment_tf(), Fraction(1))
    assert isinstance(val, Fraction)
    assert val == Fraction(5, 2)
    assert sp._exact_rayleigh(segment_body(), segment_tf(), Fraction(3)) == Fraction(
        5, 18
    )
