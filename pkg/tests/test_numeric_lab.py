from fractions import Fraction
from math import pi

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.spatial import cKDTree

from mixed_brieskorn.classifier import apply_phi, topological_normal_form
from mixed_brieskorn.mixed_core import ExponentData, build_family
from mixed_brieskorn.numeric_lab import (
    ExponentFit,
    PointCloud,
    check_normal_embedding,
    contact_order,
    default_t_grid,
    estimate_beta,
    estimate_link_components,
    estimate_tangent_cone,
    fit_exponent,
    inner_distance,
    knn_graph,
    sample_surface,
    snap_rational,
    verify_conjugation,
    verify_multiplicity_numeric,
)
from mixed_brieskorn.surface_geometry import (
    PLANE_Z1_ZERO,
    RAY_UNION,
    WHOLE_SURFACE,
    ArcSpec,
    admissible_rays,
    link_components,
    to_complex,
    witness_arcs,
)

F = Fraction


def E(a, b):
    return ExponentData(a, b)


# --- sampling ------------------------------------------------------------------------

def test_sample_on_surface():
    c = sample_surface(E((2, 3), (0, 0)), 1000, seed=3)
    z = to_complex(c.points)
    assert len(c) == 1000
    assert np.max(np.abs(z[:, 0] ** 2 + z[:, 1] ** 3)) <= 1e-10
    assert np.all((c.radii >= 1e-3 * (1 - 1e-12)) & (c.radii <= 1 + 1e-12))


def test_sample_t3_phases_on_rays():
    c = sample_surface(E((0, 3), (1, 1)), 500, seed=1)
    z2 = to_complex(c.points)[:, 1]
    rays = admissible_rays(3)
    d = np.abs(np.angle(np.exp(1j * (np.angle(z2)[:, None] - rays[None, :])))).min(axis=1)
    assert d.max() <= 1e-12


def test_sample_deterministic_and_csv_round_trip(tmp_path):
    e = E((1, 2), (1, 1))
    c1, c2 = sample_surface(e, 200, seed=5), sample_surface(e, 200, seed=5)
    assert np.array_equal(c1.points, c2.points)
    assert not np.array_equal(c1.points, sample_surface(e, 200, seed=6).points)
    path = tmp_path / "cloud.csv"
    c1.to_csv(path)
    assert path.read_text().splitlines()[0] == "x1,y1,x2,y2,radius"
    back = PointCloud.from_csv(path)
    assert np.array_equal(back.points, c1.points) and np.array_equal(back.radii, c1.radii)


def test_sample_rejects_bad_range():
    with pytest.raises(ValueError):
        sample_surface(E((2, 3), (0, 0)), 10, (1.0, 0.5))
    with pytest.raises(ValueError):
        sample_surface(E((2, 3), (0, 0)), 10, (0.0, 1.0))


# --- fits and contact orders -------------------------------------------------------------

def test_snap():
    assert snap_rational(1.4999) == F(3, 2)
    assert snap_rational(0.7272727) == F(8, 11)
    assert snap_rational(np.pi / 3) is None
    assert snap_rational(float("inf")) is None


def test_fit_json_round_trip():
    f = fit_exponent(default_t_grid(), default_t_grid() ** 2.5)
    assert f.rational_snap == F(5, 2) and f.r_squared == pytest.approx(1)
    assert ExponentFit.from_json(f.to_json()) == f


def unit(i):
    v = np.zeros(4)
    v[i] = 1
    return v


def test_contact_order_examples():
    g1 = ArcSpec([(unit(0), 1)])
    g2 = ArcSpec([(unit(2), 1)])
    assert contact_order(g1, g2).rational_snap == 1
    a1, a2 = witness_arcs(E((2, 3), (0, 0)))
    assert contact_order(a1, a2).rational_snap == F(3, 2)
    g3 = ArcSpec(list(g1.terms) + [(unit(3), 5)])
    assert contact_order(g1, g3).rational_snap == 5
    assert contact_order(g1, g1).infinite


arcs = st.lists(st.tuples(st.lists(st.floats(-2, 2), min_size=4, max_size=4),
                          st.fractions(min_value=F(1, 12), max_value=6, max_denominator=12)),
                min_size=1, max_size=4)


@settings(max_examples=200, deadline=None)
@given(arcs, arcs)
def test_contact_order_symmetric(t1, t2):
    g1, g2 = ArcSpec(t1), ArcSpec(t2)
    f12, f21 = contact_order(g1, g2), contact_order(g2, g1)
    if f12.infinite:
        assert f21.infinite
    else:
        assert f12.slope == pytest.approx(f21.slope, abs=1e-12)
        assert f12.rational_snap == f21.rational_snap


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 12), st.integers(1, 72), st.integers(0, 2**32 - 1))
def test_contact_order_snaps_exactly(q, p, seed):
    order = F(p, q)
    if order > 6:
        return
    rng = np.random.default_rng(seed)
    # shared terms cancel; the difference is exactly v t^order
    base = [(rng.normal(size=4), F(int(k), 12)) for k in rng.integers(1, 73, 3)]
    g1 = ArcSpec(base)
    g2 = ArcSpec(base + [(rng.normal(size=4), order)])
    assert contact_order(g1, g2).rational_snap == order


# --- tangent cones -------------------------------------------------------------------------

@pytest.mark.parametrize("a,b,kind,clusters", [
    ((2, 3), (0, 0), PLANE_Z1_ZERO, None),
    ((0, 2), (1, 1), RAY_UNION, 2),
    ((2, 2), (1, 1), WHOLE_SURFACE, None),
])
def test_cone_examples(a, b, kind, clusters):
    est = estimate_tangent_cone(E(a, b))
    assert est.kind == kind and est.matched
    assert est.hausdorff <= 1e-2
    assert est.algebraic_residual <= 1e-6
    if clusters is not None:
        assert est.clusters == clusters and est.dimension == 1


def test_cone_estimate_deterministic():
    a = estimate_tangent_cone(E((0, 3), (1, 1)), seed=4)
    b = estimate_tangent_cone(E((0, 3), (1, 1)), seed=4)
    assert np.array_equal(a.directions, b.directions)


def test_cone_scales_must_decrease():
    with pytest.raises(ValueError):
        estimate_tangent_cone(E((2, 3), (0, 0)), scales=[0.1, 0.2])


# --- beta and link components -----------------------------------------------------------------

@pytest.mark.parametrize("a,b,beta", [((0, 1), (1, 1), F(3, 2)), ((0, 2), (1, 2), F(3)),
                                      ((2, 2), (0, 0), F(1))])
def test_beta_examples(a, b, beta):
    fit = estimate_beta(E(a, b))
    assert abs(fit.slope - beta) <= 0.05 * beta
    assert fit.rational_snap == beta


@pytest.mark.parametrize("a,b", [((2, 3), (0, 0)), ((2, 2), (1, 1)), ((2, 4), (0, 1)),
                                 ((0, 3), (1, 1)), ((0, 2), (3, 1))])
def test_link_components_numeric(a, b):
    e = E(a, b)
    assert estimate_link_components(e) == link_components(e)


# --- inner distances ------------------------------------------------------------------------------

def cone_cloud(n=20000, seed=0):
    """Metric cone x1^2 + y1^2 = x2^2 in R^4, log-uniform radii."""
    rng = np.random.default_rng(seed)
    s = np.exp(rng.uniform(np.log(1e-3), 0, n))
    ph = rng.uniform(0, 2 * pi, n)
    return PointCloud.from_points(np.stack([s * np.cos(ph), s * np.sin(ph), s, 0 * s], 1) / np.sqrt(2))


def nearest(g, p):
    return cKDTree(g.points).query(np.atleast_2d(p))[1]


def test_metric_cone_opposite_rays():
    g = knn_graph(cone_cloud())
    r = 0.5
    c = r / np.sqrt(2)
    i, j = nearest(g, [[c, 0, c, 0], [-c, 0, c, 0]])
    # unrolled sector angle 2 pi sin(pi/4): geodesic 2 r sin(pi sin(pi/4) / 2)
    exact = 2 * r * np.sin(pi * np.sin(pi / 4) / 2)
    assert inner_distance(g, i, j) == pytest.approx(exact, rel=0.05)


def test_straight_ray_is_euclidean():
    cloud = cone_cloud()
    n = len(cloud)
    ray = np.array([[0.2, 0, 0.2, 0], [0.6, 0, 0.6, 0]]) / np.sqrt(2)
    # k = 12 zig-zags about 2.5% here; 1% needs a denser neighbourhood
    g = knn_graph(PointCloud.from_points(np.vstack([cloud.points, ray])), k=24)
    assert inner_distance(g, n, n + 1) == pytest.approx(0.4, rel=0.01)


def test_t3_components_meet_at_origin():
    e = E((0, 2), (1, 1))
    cloud = sample_surface(e, 6000, (1e-2, 1.0), seed=2)
    z2 = to_complex(cloud.points)[:, 1]
    upper = np.flatnonzero(z2.imag > 0)
    lower = np.flatnonzero(z2.imag < 0)
    i = upper[np.argmin(np.abs(cloud.radii[upper] - 0.5))]
    j = lower[np.argmin(np.abs(cloud.radii[lower] - 0.7))]
    without = knn_graph(cloud, include_origin=False)
    assert np.isinf(inner_distance(without, i, j))
    with_origin = knn_graph(cloud)
    d = inner_distance(with_origin, i, j)
    # each sheet is swept by meridians s -> (s^2 e^{i phi}, s e^{i theta})
    s_i, s_j = np.abs(to_complex(cloud.points[[i, j]])[:, 1])
    meridian = lambda s: quad(lambda u: np.hypot(1, 2 * u), 0, s)[0]
    assert d >= cloud.radii[i] + cloud.radii[j]
    assert d == pytest.approx(meridian(s_i) + meridian(s_j), rel=0.05)


def test_inner_dominates_outer():
    cloud = sample_surface(E((2, 3), (0, 0)), 3000, seed=4)
    g = knn_graph(cloud)
    d = inner_distance(g, 0, np.arange(len(cloud)))
    euclid = np.linalg.norm(g.points[: len(cloud)] - g.points[0], axis=1)
    finite = np.isfinite(d)
    assert np.all(d[finite] >= euclid[finite] * (1 - 1e-12))


# --- normal embedding ------------------------------------------------------------------------------

def test_ne_t1():
    r = check_normal_embedding(E((2, 3), (0, 0)))
    assert r.exponent == pytest.approx(0.5, rel=0.1)
    assert not r.normally_embedded and r.expected_exponent == F(1, 2)


def test_ne_t2():
    r = check_normal_embedding(E((2, 2), (1, 1)))
    assert abs(r.exponent) <= 0.05 and r.normally_embedded


def test_ne_single_horn_ratio_is_bounded():
    # the probe points sit on one circle of the horn: inner/outer <= pi/2
    r = check_normal_embedding(E((0, 1), (1, 1)))
    assert np.all(np.exp(r.log_ratio) <= pi / 2 * 1.01)
    assert abs(r.exponent) <= 0.05


def test_ne_t4_separated_sheets_diverge():
    # sheets at outer distance ~ t^gamma, joined only through the origin
    r = check_normal_embedding(E((0, 2), (3, 1)))
    assert r.exponent == pytest.approx(0.5, rel=0.1)
    assert not r.normally_embedded


def test_ne_mesh_needs_even_angles():
    with pytest.raises(ValueError):
        check_normal_embedding(E((2, 3), (0, 0)), n_ang=127)


# --- residuals -----------------------------------------------------------------------------------------

@pytest.mark.parametrize("a,b", [((2, 3), (1, 0)), ((0, 2, 3), (4, 1, 2)), ((1, 1), (3, 4))])
def test_conjugation_residual(a, b):
    assert verify_conjugation(E(a, b), samples=10_000, seed=0) <= 1e-9


def test_conjugation_exact_for_b_zero():
    assert verify_conjugation(E((2, 3, 4), (0, 0, 0))) == 0


def test_conjugation_zero_on_axes():
    e = E((2, 3), (1, 2))
    z = np.array([[0.7 - 0.2j, 0], [0, -1.1 + 0.4j]])
    f = build_family(e).evaluate(z)
    g = topological_normal_form(e).as_polynomial().evaluate(apply_phi(e, z))
    assert np.max(np.abs(g - f) / (1 + np.abs(f))) <= 1e-15


@pytest.mark.parametrize("a,b,m", [((2, 3), (0, 0), 2), ((1, 2), (3, 0), 2), ((1, 1), (1, 2), 3)])
def test_multiplicity_numeric(a, b, m):
    est = verify_multiplicity_numeric(E(a, b), detail=True)
    assert est.value == m and est.stable
    assert verify_multiplicity_numeric(E(a, b), seed=9) == m


def test_ne_t1_single_sheet_is_a_graph():
    # a_1 = 1: z1 is a function of z2 with |z1| = |z2|^(4/3), a C^1 graph
    e = E((1, 2), (1, 1))
    c = sample_surface(e, 2000, seed=0)
    z = to_complex(c.points)
    assert np.allclose(np.abs(z[:, 0]), np.abs(z[:, 1]) ** (4 / 3), rtol=1e-9)
    r = check_normal_embedding(e)
    assert abs(r.exponent) <= 0.05 and r.normally_embedded
