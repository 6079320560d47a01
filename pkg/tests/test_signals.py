import numpy as np
import pytest
from scipy import integrate

from skop.sampling import ExplicitNodes, SamplingScheme
from skop.signals import raised_cosine, signal_cell_means, unit_step


def test_raised_cosine_values():
    sig = raised_cosine()
    assert sig(0.0) == pytest.approx(1.0)
    assert sig(1.0) == pytest.approx(0.0, abs=1e-15)
    assert sig(-0.5) == pytest.approx(0.5)
    assert sig(1.5) == 0.0 and sig(-2.0) == 0.0


def test_raised_cosine_antiderivative_matches_quadrature():
    sig = raised_cosine()
    for a, b in ((-1.0, 1.0), (-0.3, 0.7), (0.1, 0.2), (-2.0, 3.0)):
        ref, _ = integrate.quad(sig, max(a, -1.0), min(b, 1.0))
        assert sig.integral(a, b) == pytest.approx(ref, abs=1e-12)


def test_unit_step():
    sig = unit_step()
    assert sig(0.5) == 1.0 and sig(-0.1) == 0.0 and sig(1.1) == 0.0
    assert sig.integral(-1.0, 2.0) == pytest.approx(1.0)
    assert sig.integral(0.25, 0.5) == pytest.approx(0.25)


def test_step_cell_means_are_indicator_averages():
    means = signal_cell_means(unit_step(), 4.0)
    # cells [k/4,(k+1)/4] for k = 0..3 lie fully inside the support
    assert np.allclose(means.values, 1.0)
    assert means.index_lo == (0,)


def test_raised_cosine_means_match_quadrature():
    sig = raised_cosine()
    w = 5.0
    means = signal_cell_means(sig, w)
    k0 = means.index_lo[0]
    for j, val in enumerate(means.values):
        k = k0 + j
        ref, _ = integrate.quad(sig, k / w, (k + 1) / w, epsabs=1e-13)
        assert val == pytest.approx(w * ref, abs=1e-12)


def test_cell_means_conserve_mass():
    sig = raised_cosine()
    for w in (3.0, 7.5, 16.0):
        means = signal_cell_means(sig, w)
        total = float(np.sum(means.values * means.spacings[0] / w))
        assert total == pytest.approx(sig.integral(-1.0, 1.0), abs=1e-12)


def test_explicit_node_branch():
    sig = unit_step()
    nodes = ExplicitNodes(np.array([-1.0, 0.0, 2.0, 3.0]))
    scheme = SamplingScheme((nodes,))
    means = signal_cell_means(sig, 2.0, scheme)
    # cell [0,1] in signal units covers [0, 1]: full mass over length 1 in
    # node units means the average is integral/(node spacing/w) = 1/(2/2)
    idx = means.index_lo[0]
    ks = np.arange(idx, idx + means.values.shape[0])
    sel = {int(k): float(v) for k, v in zip(ks, means.values)}
    assert sel[1] == pytest.approx(1.0 / (2.0 / 2.0))


def test_signal_cell_means_validation():
    with pytest.raises(ValueError):
        signal_cell_means(unit_step(), 0.0)
    scheme2 = SamplingScheme((ExplicitNodes(np.array([0.0, 1.0])),) * 2)
    with pytest.raises(ValueError):
        signal_cell_means(unit_step(), 2.0, scheme2)
