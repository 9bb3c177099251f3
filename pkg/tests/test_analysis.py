import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from diamond_wiretap.analysis import (error_prob_mc, estimate_rate, fit_dof_slope,
                                      gaussian_entropy, mi_mixture, mixture_entropy,
                                      pam_ser_closed_form, parse_scheme,
                                      scheme3_leakage_bound)
from diamond_wiretap.oracle import discrete_mutual_information
from diamond_wiretap.signal import PamConstellation, Scheme, SchemeParams, scheme_params

PTS3 = np.array([-1.0, 0.0, 1.0])


def _quad_entropy(points, sigma):
    """Independent oracle: adaptive quadrature of -f log2 f for a uniform PAM mixture."""
    points = np.asarray(points, float)
    pdf = lambda y: np.mean(stats.norm.pdf(y, points, sigma))
    def integrand(y):
        v = pdf(y)
        return -v * np.log2(v) if v > 0 else 0.0
    lo, hi = points.min() - 12 * sigma, points.max() + 12 * sigma
    edges = np.linspace(lo, hi, 4 * points.size + 1)
    return sum(integrate.quad(integrand, a, b, limit=200, epsabs=1e-10)[0]
               for a, b in zip(edges[:-1], edges[1:]))


def test_zero_coefficients_give_zero():
    assert mi_mixture([0.0, 0.0], PTS3, 1.0) == 0.0
    assert mi_mixture([1.0], [[2.0]], 1.0) == 0.0


def test_single_symbol_large_spacing():
    assert mi_mixture([1.0], PTS3 * 50, 1.0) == pytest.approx(math.log2(3), abs=1e-6)


def test_gaussian_entropy():
    assert mixture_entropy([0.0], PTS3, 2.0) == pytest.approx(gaussian_entropy(2.0))
    assert gaussian_entropy(1.0) == pytest.approx(0.5 * math.log2(2 * math.pi * math.e))
    with pytest.raises(ValueError):
        mixture_entropy([1.0], PTS3, 0.0)


def test_scheme3_eavesdropper_structure_converges_to_discrete_value():
    exact = discrete_mutual_information([1, 1, 1], [PTS3] * 3, [True, True, False])
    errs = [abs(mi_mixture([1, 1, 1], PTS3, nv, inputs=[True, True, False]) - exact)
            for nv in (1e-1, 1e-2, 1e-4, 1e-6)]
    assert errs[-1] < 1e-6
    assert all(a + 1e-9 >= b for a, b in zip(errs, errs[1:]))
    assert errs[0] > 1e-2 > errs[2]


@pytest.mark.parametrize("Q,a,sigma", [(3, 1.0, 1.0), (10, 0.3, 0.5), (63, 0.5604, 1.0)])
def test_entropy_matches_adaptive_quadrature(Q, a, sigma):
    pts = PamConstellation(a, Q).points
    ref = _quad_entropy(pts, sigma)
    for method in ("fft", "hermite"):
        assert mixture_entropy([1.0], pts, sigma ** 2, method=method) == pytest.approx(ref, abs=1e-5)


def test_fft_and_hermite_agree_on_random_instances():
    rng = np.random.default_rng(3)
    for _ in range(30):
        n = rng.integers(1, 4)
        c = rng.uniform(-2, 2, n)
        alph = [np.arange(k) - k // 2 for k in rng.integers(2, 6, n)]
        nv = 10 ** rng.uniform(-3, 0.5)
        e_fft = mixture_entropy(c, alph, nv, method="fft")
        e_gh = mixture_entropy(c, alph, nv, method="hermite")
        assert e_fft == pytest.approx(e_gh, abs=1e-4)


def test_fft_budget_exhaustion_falls_back():
    c = [1.0, 1e3]
    with pytest.raises(ValueError):
        mixture_entropy(c, PTS3, 1e-8, method="fft", max_nodes=1 << 12)
    auto = mixture_entropy(c, PTS3, 1e-8, method="auto", max_nodes=1 << 12)
    assert auto == pytest.approx(math.log2(9) + gaussian_entropy(1e-8), abs=1e-6)


coeff = st.floats(-3, 3, allow_nan=False).filter(lambda x: abs(x) > 1e-3)


@settings(max_examples=40, deadline=None)
@given(st.lists(coeff, min_size=1, max_size=3), st.floats(1e-2, 10), st.data())
def test_mi_bounded_by_source_entropy(c, nv, data):
    sizes = data.draw(st.lists(st.integers(2, 5), min_size=len(c), max_size=len(c)))
    mask = data.draw(st.lists(st.booleans(), min_size=len(c), max_size=len(c)))
    alph = [np.arange(k, dtype=float) for k in sizes]
    mi = mi_mixture(c, alph, nv, inputs=mask)
    h_src = sum(math.log2(k) for k, m in zip(sizes, mask) if m)
    assert 0 <= mi <= h_src + 1e-6


@settings(max_examples=25, deadline=None)
@given(st.lists(coeff, min_size=1, max_size=3), st.floats(1e-2, 3))
def test_mi_nonincreasing_in_noise(c, nv):
    alph = [PTS3] * len(c)
    lo = mi_mixture(c, alph, nv)
    hi = mi_mixture(c, alph, 2 * nv)
    assert hi <= lo + 1e-6


def test_parse_scheme():
    assert parse_scheme("SAB(0,2)") == (Scheme.SAB, (0, 2))
    assert parse_scheme("s4*") == (Scheme.S4STAR, ())
    assert parse_scheme(" CoJ( 1 , 2 ) ") == (Scheme.COJ, (1, 2))
    with pytest.raises(ValueError):
        parse_scheme("S9")


def test_scheme5_destination_is_fade_independent():
    rec = estimate_rate("S5", 1e4, 0.1, n_fades=20, seed=1)
    assert np.var(rec.per_fade_dest) < 1e-6
    # y1 = v1 + N: a 127-point PAM of spacing 0.56 in unit noise, by quadrature
    pts = PamConstellation(rec.a, rec.Q).points
    ref = _quad_entropy(pts, 1.0) - gaussian_entropy(1.0)
    assert rec.I_dest == pytest.approx(ref, abs=1e-4)
    assert rec.Q == 63


def test_scheme2_leaks_nothing():
    rec = estimate_rate("S2", 1e4, 0.1, n_fades=20, seed=2)
    assert np.all(rec.per_fade_eve == 0.0)
    assert rec.rate_lb == pytest.approx(rec.I_dest)


def test_estimate_rate_is_deterministic():
    a = estimate_rate("S3", 1e4, 0.1, n_fades=5, seed=9)
    b = estimate_rate("S3", 1e4, 0.1, n_fades=5, seed=9)
    assert a.row() == b.row()
    fixed = estimate_rate("S3", 1e4, 0.1, n_fades=4, seed=9, fixed_fading=True)
    assert np.ptp(fixed.per_fade_dest) == 0


def test_scheme3_leakage_bound_per_fade():
    for P in (1e3, 1e5):
        rec = estimate_rate("S3", P, 0.1, n_fades=20, seed=3)
        assert np.all(rec.per_fade_eve <= scheme3_leakage_bound(rec.Q) + 0.01)
    assert scheme3_leakage_bound(1) == pytest.approx(math.log2(7 / 3))


def test_multi_relay_rates_run():
    for label in ("SAB(0,2)", "CoJ(1,2)", "BCJ(1)"):
        rec = estimate_rate(label, 1e4, 0.1, n_fades=3, seed=0, M=3)
        assert rec.I_dest >= rec.rate_lb >= 0
    rec = estimate_rate("CoJ(0,1)", 1e4, 0.1, n_fades=3, seed=0, M=3)
    s5 = estimate_rate("S5", 1e4, 0.1, n_fades=3, seed=0, M=2)
    assert rec.I_dest == pytest.approx(s5.I_dest, abs=1e-9)


def test_ser_zero_without_noise():
    assert error_prob_mc("S3", 1e4, 0.1, 2000, seed=0, noise_var=1e-18) == 0.0
    assert error_prob_mc("S1", 1e3, 0.1, 2000, seed=0, noise_var=1e-18) == 0.0


def test_ser_matches_pam_closed_form():
    params = scheme_params("S5", 1e4, 0.4)
    ref = pam_ser_closed_form(params.a, params.Q)
    n = 50_000
    ser = error_prob_mc("S5", 1e4, 0.4, n, seed=4)
    assert abs(ser - ref) <= 4 * math.sqrt(ref * (1 - ref) / n)


def test_ser_deterministic_and_validated():
    assert error_prob_mc("S5", 1e4, 0.1, 5000, seed=1) == error_prob_mc("S5", 1e4, 0.1, 5000, seed=1)
    with pytest.raises(ValueError):
        error_prob_mc("S5", 1e4, 0.1, 0, seed=1)


def test_fit_dof_slope_examples():
    P = np.logspace(2, 8, 7)
    assert fit_dof_slope(zip(P, 0.5 * np.log2(P))) == pytest.approx(1, abs=1e-12)
    assert fit_dof_slope(zip(P, np.full(7, 3.2))) == pytest.approx(0, abs=1e-12)
    noise = np.random.default_rng(0).normal(0, 0.01, 7)
    assert fit_dof_slope(zip(P, 0.45 * np.log2(P) + noise)) == pytest.approx(0.9, abs=0.02)
    with pytest.raises(ValueError):
        fit_dof_slope([(1e2, 1), (1e3, 2)])
    with pytest.raises(ValueError):
        fit_dof_slope([(1e2, 1), (2e2, 2), (5e2, 3)])
