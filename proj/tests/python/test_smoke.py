import math

import numpy as np
import pytest

import biphoton as bp

BASE = bp.Config()


def test_config_and_derived_constants():
    d = bp.derive(BASE)
    assert d.eta == pytest.approx(0.0353, rel=0.01)
    assert d.tau0 == pytest.approx(62.53e-15, rel=1e-3)
    assert bp.parse_config("tau = 2 ps\n") == BASE.with_tau(2e-12)
    assert bp.parse_quantity("870nm", "length") == pytest.approx(870e-9)
    with pytest.raises(bp.ValidationError):
        bp.Config(B=0.0)
    with pytest.raises(bp.ValidationError):
        bp.parse_config("nonsense = 1\n")


def test_jsa_broadcasts_and_is_exchange_symmetric():
    nu = np.linspace(-3e14, 3e14, 41)
    a = bp.jsa(nu[:, None], nu[None, :], BASE)
    assert a.shape == (41, 41)
    assert a.dtype == np.complex128
    np.testing.assert_array_equal(np.abs(a), np.abs(a.T))


def test_coincidence_and_pump_spectra():
    c = bp.coincidence_spectrum(0.0, cfg=BASE, axis=bp.Axis.wavelength)
    assert c.fwhm.width == pytest.approx(0.658e-9, rel=0.02)
    assert c.x.shape == c.y.shape
    assert c.y.max() == pytest.approx(1.0)
    assert c.meta["x_unit"] == "m"
    p = bp.pump_spectrum(0.0, cfg=BASE, axis=bp.Axis.wavelength)
    assert p.fwhm.width / c.fwhm.width == pytest.approx(28.57, rel=0.03)


def test_r_and_k_closed_forms():
    r = bp.r_parameter(BASE)
    assert r.R_interp == pytest.approx(math.hypot(r.R_short, r.R_long))
    m = bp.r_min(BASE)
    assert m.eta == pytest.approx(2 ** (-1 / 3), rel=0.02)
    assert bp.kr_ratio(1e-6) == pytest.approx(1.04)
    rep = bp.entanglement_report(BASE, K_numeric=300.0)
    assert rep.K_numeric == 300.0


def test_schmidt_number_long_pulse():
    cfg = BASE.with_tau(bp.tau_for_eta(BASE, 5.0))
    s = bp.schmidt_svd(cfg, bp.SchmidtGrid(refine=False))
    i = bp.schmidt_integral4d(cfg, s.final_grid)
    assert s.K == pytest.approx(i.K, rel=0.01)
    assert s.K == pytest.approx(44 * 5, rel=0.15)
    assert s.coefficients.sum() == pytest.approx(1.0)


def test_python_kernel_separable():
    g = bp.SchmidtGrid(half_width=5.0, step=0.1, dense=True, refine=False)
    s = bp.schmidt_svd(BASE, g, lambda x, y: complex(math.exp(-x * x - 2 * y * y)))
    assert s.K == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(bp.ZeroKernel):
        bp.schmidt_svd(BASE, g, lambda x, y: 0j)


def test_temporal_amplitude_and_signals():
    t = np.linspace(-0.5e-12, 3.2e-12, 30)
    v = np.abs(bp.psi(t[:, None], t[None, :], BASE))
    np.testing.assert_array_equal(v, v.T)
    c = bp.coincidence_signal(0.0, BASE)
    assert c.fwhm.width == pytest.approx(486.3e-15, rel=0.05)
    assert bp.single_duration_analytic(BASE) == pytest.approx(2.837e-12, rel=0.01)
    assert bp.classify_region(BASE, 1e-12) == bp.Region.II


def test_long_pulse_quantities():
    cfg = BASE.with_tau(2e-12)
    f = bp.long_pulse_factor(np.array([0.0, 1.0]) * bp.derive(cfg).tau0, cfg)
    assert f[0] == 1.0
    assert abs(f[1]) < 1.0
    r = bp.rt_parameter(cfg)
    assert r.R_t / r.R_long == pytest.approx(0.75, rel=0.03)
    with pytest.raises(bp.ShortPulseRegime):
        bp.rt_parameter(BASE)
    with pytest.raises(bp.RegimeError):
        bp.rt_parameter(BASE)


def test_special_functions():
    z = np.array([1 + 1j, -2.5 + 4j])
    np.testing.assert_allclose(bp.erf_complex(-z), -bp.erf_complex(z), rtol=1e-12)
    assert bp.sinc(0.0) == 1.0
