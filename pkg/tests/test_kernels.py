import csv
import math

import numpy as np
import pytest
from scipy import integrate

from skop.kernels import (
    CompactInterval,
    PolynomialDecay,
    UnivariateKernel,
    check_partition_of_unity,
    export_curve,
    jackson_norm_const,
    make_central_bspline,
    make_fejer,
    make_jackson,
    make_kernel,
    make_product,
    make_product_kernel,
    moment_m_beta,
    moment_tail_bound,
    registry_specs,
    sinc,
    truncation_radius,
)
from skop.sampling import ExplicitNodes, SamplingScheme, uniform_scheme


# ---------------------------------------------------------------------- sinc

def test_sinc_values():
    assert sinc(0.0) == 1.0
    assert abs(sinc(1.0)) < 1e-15
    assert abs(sinc(0.5) - 2.0 / np.pi) < 1e-15


def test_sinc_even_and_vectorized(rng):
    xs = rng.uniform(-20, 20, 300)
    assert np.max(np.abs(sinc(xs) - sinc(-xs))) == 0.0
    assert sinc(xs).shape == xs.shape


def test_sinc_series_branch_continuous():
    # series region is |pi x| < 1e-4; values must agree with the direct
    # formula across the switch to full double precision
    for x in (2.9e-5, 3.1e-5, 1e-6, 3.18e-5):
        direct = math.sin(math.pi * x) / (math.pi * x)
        assert abs(sinc(x) - direct) <= 2.3e-16  # within one ulp of 1.0


# --------------------------------------------------------------------- fejer

def test_fejer_point_values():
    f = make_fejer()
    assert f.evaluate(0.0) == 0.5
    assert abs(f.evaluate(2.0)) < 1e-30  # sinc(1) is 0 up to rounding
    assert f.l1_norm == 1.0


def test_fejer_integral_one():
    f = make_fejer()
    body, _ = integrate.quad(f.evaluate, -40.0, 40.0, limit=400)
    total = body + f.tail_integral(40.0) * 2.0
    assert abs(total - 1.0) < 1e-6


def test_fejer_decay_envelope(rng):
    f = make_fejer()
    xs = rng.uniform(1.0, 500.0, 1000)
    dec = f.support
    assert isinstance(dec, PolynomialDecay)
    assert np.all(np.abs(f.evaluate(xs)) <= dec.constant * xs ** -dec.exponent)


def test_fejer_tail_integral_matches_quadrature():
    f = make_fejer()
    for a, b in [(3.7, 50.0), (10.0, 120.0)]:
        piece, _ = integrate.quad(f.evaluate, a, b, limit=300)
        assert abs((f.tail_integral(a) - f.tail_integral(b)) - piece) < 1e-12


# ------------------------------------------------------------------ bsplines

def test_bspline_rejects_bad_order():
    for k in (0, -1, 2.5, 21):
        with pytest.raises(ValueError):
            make_central_bspline(k)


def test_bspline_m2_is_unit_hat(rng):
    m2 = make_central_bspline(2)
    assert m2.evaluate(0.0) == 1.0
    xs = rng.uniform(-1.5, 1.5, 500)
    hat = np.clip(1.0 - np.abs(xs), 0.0, None)
    assert np.max(np.abs(m2.evaluate(xs) - hat)) < 1e-14


def test_bspline_m3_closed_form(rng):
    m3 = make_central_bspline(3)
    assert m3.evaluate(0.0) == 0.75
    xs = rng.uniform(-2.0, 2.0, 800)
    ax = np.abs(xs)
    exact = np.where(ax <= 0.5, 0.75 - ax**2,
                     np.where(ax < 1.5, 0.5 * (1.5 - ax) ** 2, 0.0))
    assert np.max(np.abs(m3.evaluate(xs) - exact)) < 1e-14


def test_bspline_support_and_positivity(rng):
    for k in (1, 2, 3, 5):
        mk = make_central_bspline(k)
        sup = mk.support
        assert isinstance(sup, CompactInterval)
        assert (sup.lo, sup.hi) == (-k / 2.0, k / 2.0)
        outside = rng.uniform(k / 2.0, k, 100)
        assert np.all(mk.evaluate(outside) == 0.0)
        assert np.all(mk.evaluate(-outside) == 0.0)
        inside = rng.uniform(-k / 2.0, k / 2.0, 300)
        assert np.all(mk.evaluate(inside) >= 0.0)


def test_bspline_integral_one():
    for k in (1, 2, 3, 4):
        mk = make_central_bspline(k)
        val, _ = integrate.quad(mk.evaluate, -k / 2.0, k / 2.0, limit=200)
        assert abs(val - 1.0) < 1e-12


def test_bspline_convolution_recursion():
    # M_{k+1} = M_k * M_1 on a fine grid; independent of the closed form
    h = 1e-3
    xs = np.arange(-3.0, 3.0 + h / 2, h)
    m1 = make_central_bspline(1)
    m3 = make_central_bspline(3)
    m4 = make_central_bspline(4)
    conv = np.convolve(m3.evaluate(xs), m1.evaluate(xs), mode="same") * h
    assert np.max(np.abs(conv - m4.evaluate(xs))) < 5e-4


# ------------------------------------------------------------------- jackson

def test_jackson_norm_const_k1_analytic():
    # integral sinc^2 = 1, so c_1 = 1 / (2 pi alpha)
    assert abs(jackson_norm_const(1, 1.0) * 2.0 * np.pi - 1.0) < 1e-12
    assert abs(jackson_norm_const(1, 1.5) * 3.0 * np.pi - 1.0) < 1e-10


def test_jackson_norm_const_validation():
    with pytest.raises(ValueError):
        jackson_norm_const(0)
    with pytest.raises(ValueError):
        jackson_norm_const(2, alpha=0.5)
    with pytest.raises(ValueError):
        jackson_norm_const(2, tol=0.0)
    assert jackson_norm_const(2) > 0.0
    assert jackson_norm_const(5) > 0.0


def test_jackson_norm_const_budget_failure():
    with pytest.raises(RuntimeError):
        jackson_norm_const(2, tol=1e-280)


def test_jackson_kernel_shape(rng):
    for k, alpha in [(1, 1.0), (12, 1.0), (3, 2.0)]:
        jk = make_jackson(k, alpha)
        c = jackson_norm_const(k, alpha)
        assert jk.evaluate(0.0) == c
        xs = rng.uniform(-80, 80, 400)
        assert np.max(np.abs(jk.evaluate(xs) - jk.evaluate(-xs))) == 0.0
        assert np.all(jk.evaluate(xs) >= 0.0)
        dec = jk.support
        assert dec.exponent == 2.0 * k
        big = rng.uniform(1.0, 300.0, 200)
        assert np.all(jk.evaluate(big) <= dec.constant * big ** -dec.exponent)


def test_jackson_integral_one():
    j2 = make_jackson(2)
    body, _ = integrate.quad(j2.evaluate, -200.0, 200.0, limit=800)
    # envelope tail bound beyond the quadrature window
    dec = j2.support
    tail = 2.0 * dec.constant * 200.0 ** (1.0 - dec.exponent) / (dec.exponent - 1.0)
    assert abs(body - 1.0) < 1e-6 + tail

    j1 = make_jackson(1)
    body, _ = integrate.quad(j1.evaluate, 0.0, 500.0, limit=2000)
    total = 2.0 * (body + j1.tail_integral(500.0))
    assert abs(total - 1.0) < 1e-8


# ------------------------------------------------------------------- parsing

def test_make_kernel_specs():
    assert make_kernel("fejer").name == "fejer"
    assert make_kernel("bspline:3").name == "bspline:3"
    assert make_kernel("jackson:2").name == "jackson:2:1"
    assert make_kernel("jackson:12:1").name == "jackson:12:1"


@pytest.mark.parametrize("bad", [
    "", "foo", "fejer:2", "bspline", "bspline:0", "bspline:x",
    "jackson", "jackson:0", "jackson:2:0.5", "jackson:2:1:9",
])
def test_make_kernel_rejects(bad):
    with pytest.raises(ValueError):
        make_kernel(bad)


def test_registry_constructs():
    for spec in registry_specs():
        k = make_kernel(spec)
        assert np.isfinite(k.evaluate(0.3))


# ------------------------------------------------------------------- product

def test_product_evaluation(rng):
    f = make_fejer()
    pf = make_product([f, f])
    assert pf.evaluate((0.0, 0.0)) == 0.25
    m3 = make_central_bspline(3)
    pm = make_product([m3, m3])
    assert pm.evaluate((2.0, 0.0)) == 0.0
    single = make_product([m3])
    xs = rng.uniform(-2, 2, 50)
    assert np.max(np.abs(single.evaluate(xs[:, None]) - m3.evaluate(xs))) == 0.0
    mixed = make_product([f, m3])
    pts = rng.uniform(-2, 2, (40, 2))
    expect = np.asarray(f.evaluate(pts[:, 0])) * np.asarray(m3.evaluate(pts[:, 1]))
    assert np.max(np.abs(mixed.evaluate(pts) - expect)) < 1e-15


def test_product_validation():
    with pytest.raises(ValueError):
        make_product([])
    pf = make_product_kernel("fejer", 2)
    with pytest.raises(ValueError):
        pf.evaluate(np.zeros((5, 3)))
    with pytest.raises(ValueError):
        make_product_kernel("fejer", 0)


def test_kernel_symmetry_registry(rng):
    xs = rng.uniform(-40, 40, 500)
    for spec in registry_specs():
        k = make_kernel(spec)
        assert np.max(np.abs(k.evaluate(xs) - k.evaluate(-xs))) < 1e-14


# ----------------------------------------------------------------- partition

def test_partition_bivariate_m3():
    kernel = make_product_kernel("bspline:3", 2)
    dev = check_partition_of_unity(kernel, uniform_scheme(2), 100)
    assert dev <= 1e-10


def test_partition_fejer_and_jackson():
    for spec in ("fejer", "jackson:12:1"):
        kernel = make_product_kernel(spec, 1)
        assert check_partition_of_unity(kernel, uniform_scheme(1), 100) <= 1e-6


def test_partition_detects_unnormalized_kernel():
    m2 = make_central_bspline(2)
    halved = UnivariateKernel(
        name="half-hat",
        evaluate=lambda x: 0.5 * np.asarray(m2.evaluate(x)),
        support=m2.support)
    dev = check_partition_of_unity(make_product([halved]), uniform_scheme(1), 50)
    assert abs(dev - 0.5) < 1e-12


def test_partition_explicit_integer_nodes():
    nodes = ExplicitNodes(np.arange(-40.0, 41.0))
    scheme = SamplingScheme(nodes=(nodes,))
    kernel = make_product_kernel("bspline:3", 1)
    assert check_partition_of_unity(kernel, scheme, 50) <= 1e-10


def test_partition_dimension_mismatch():
    kernel = make_product_kernel("bspline:3", 2)
    with pytest.raises(ValueError):
        check_partition_of_unity(kernel, uniform_scheme(1), 10)


# ------------------------------------------------------------------- moments

def test_moment_m2_beta0_exact():
    assert abs(moment_m_beta(make_central_bspline(2), 0.0) - 1.0) < 1e-12


def test_moment_m3_beta1_brute_force():
    m3 = make_central_bspline(3)
    val = moment_m_beta(m3, 1.0, probe_count=10_000)
    us = np.arange(10_000) / 10_000.0
    ks = np.arange(-4, 5, dtype=np.float64)
    block = us[:, None] - ks[None, :]
    brute = np.max(np.sum(np.abs(m3.evaluate(block)) * np.abs(block), axis=1))
    assert abs(val - brute) < 1e-6


def test_moment_registry_finite():
    assert np.isfinite(moment_m_beta(make_fejer(), 0.5))
    assert np.isfinite(moment_m_beta(make_jackson(12), 1.0))
    for spec in registry_specs():
        assert np.isfinite(moment_m_beta(make_kernel(spec), 0.0))


def test_moment_rejects_divergent_order():
    # quadratic decay cannot carry a first-order moment: the lattice sum
    # is bounded below by a harmonic series
    with pytest.raises(ValueError):
        moment_m_beta(make_fejer(), 1.0)
    with pytest.raises(ValueError):
        moment_m_beta(make_jackson(1), 1.0)
    with pytest.raises(ValueError):
        moment_m_beta(make_fejer(), -0.5)


def test_moment_tail_bound_dominates_true_tail():
    # partition of unity makes the true Fejer tail computable exactly:
    # tail(u) = 1 - sum_{|u-k| <= R} F(u-k)
    f = make_fejer()
    radius = 100.0
    for u in (0.0, 0.3, 0.77):
        ks = np.arange(math.ceil(u - radius), math.floor(u + radius) + 1)
        partial = float(np.sum(f.evaluate(u - ks)))
        true_tail = 1.0 - partial
        assert 0.0 < true_tail <= moment_tail_bound(f, 0.0, radius)
    assert moment_tail_bound(make_central_bspline(3), 1.0, 2.0) == 0.0


# ---------------------------------------------------------------- truncation

def test_truncation_radius_compact():
    m3 = make_central_bspline(3)
    assert truncation_radius(m3, 1e-12) == 1.5
    assert truncation_radius(make_central_bspline(1), 1e-3) == 0.5


def test_truncation_radius_decay():
    f = make_fejer()
    r = truncation_radius(f, 1e-3)
    assert np.isfinite(r)
    # true lattice tail at the returned radius is below eps (via the
    # exact partition argument, independent of the envelope bound)
    ks = np.arange(math.ceil(0.4 - r), math.floor(0.4 + r) + 1)
    assert 1.0 - float(np.sum(f.evaluate(0.4 - ks))) < 1e-3
    assert truncation_radius(make_jackson(12), 1e-6) < truncation_radius(f, 1e-6)
    with pytest.raises(ValueError):
        truncation_radius(f, 0.0)


# -------------------------------------------------------------------- export

def test_export_curve(tmp_path):
    path = tmp_path / "curve.csv"
    export_curve(make_fejer(), path, -4.0, 4.0, samples=41)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x", "value"]
    assert len(rows) == 42
    assert abs(float(rows[21][0])) < 1e-12 and float(rows[21][1]) == 0.5


def test_export_curve_validation(tmp_path):
    with pytest.raises(ValueError):
        export_curve(make_fejer(), tmp_path / "c.csv", 1.0, -1.0)
    with pytest.raises(ValueError):
        export_curve(make_fejer(), tmp_path / "c.csv", 0.0, 1.0, samples=1)
