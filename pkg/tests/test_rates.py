import numpy as np
import pytest

from micdof.channel import AntennaConfig, ChannelRealization, CognitionScenario, sample_channel
from micdof.rates import (
    RateSweep,
    UndecodableSchemeError,
    achievable_rates,
    bound_term_slopes,
    cooperation_bound_term,
    cooperation_dof_gap_check,
    default_rho_grid,
    estimate_dof_slope,
    fit_loglinear_slope,
    simulate_point,
)
from micdof.regions import dof_formula
from micdof.zf import ZfScheme, build_scheme


def scenario(*bits):
    return CognitionScenario.from_bits(bits)


# -------------------------------------------------------------------- rates


def test_zero_power_means_zero_rate():
    config = AntennaConfig(2, 2, 2, 2)
    ch = sample_channel(config, seed=3)
    scheme = build_scheme(config, scenario(0, 1, 0, 1), 1, 1, ch, seed=0)
    assert achievable_rates(scheme, ch, 0.0) == (0.0, 0.0)


def test_single_stream_rate_is_scalar_shannon():
    config = AntennaConfig(1, 1, 1, 1)
    ch = sample_channel(config, seed=4)
    scheme = build_scheme(config, scenario(0, 0, 0, 0), 1, 0, ch, seed=0)
    # effective scalar gain: the one transmit vector through both channels,
    # then projection away from the (empty) interference at rx1
    v = scheme.w1_vectors[0]
    gain = float((ch.h31 @ v).item() ** 2)
    for rho in (1.0, 10.0, 1e4):
        r1, r2 = achievable_rates(scheme, ch, rho)
        assert r2 == 0.0
        assert r1 == pytest.approx(np.log2(1.0 + gain * rho), rel=1e-12)


def test_rates_refuse_undecodable_scheme():
    config = AntennaConfig(2, 2, 2, 2)
    ch = sample_channel(config, seed=6)
    good = build_scheme(config, scenario(1, 1, 0, 0), 2, 2, ch, seed=0)
    rng = np.random.default_rng(1)
    dirty = tuple(
        v + 1e-2 * rng.standard_normal(v.shape) for v in good.w1_vectors
    )
    corrupted = ZfScheme(
        config=good.config, scenario=good.scenario,
        d1=good.d1, d2=good.d2, r1=good.r1, r2=good.r2,
        w1_vectors=dirty, w2_vectors=good.w2_vectors,
    )
    with pytest.raises(UndecodableSchemeError):
        achievable_rates(corrupted, ch, 100.0)


def test_sum_rate_near_high_snr_prediction():
    # At rho = 1e6 a representative channel sits within 10% of the
    # slope-2 prediction; the bounded per-channel offset explains the gap.
    config = AntennaConfig(2, 2, 2, 2)
    ch = sample_channel(config, seed=0)
    scheme = build_scheme(config, scenario(0, 1, 0, 1), 1, 1, ch, seed=0)
    r1, r2 = achievable_rates(scheme, ch, 1e6)
    assert r1 + r2 == pytest.approx(2 * np.log2(1e6), rel=0.10)


def test_rates_monotone_in_power():
    config = AntennaConfig(2, 3, 3, 2)
    ch = sample_channel(config, seed=8)
    scheme = build_scheme(config, scenario(0, 1, 0, 0), 2, 1, ch, seed=0)
    sweep = estimate_dof_slope(scheme, ch, default_rho_grid(1e4, 1e10, 7))
    sums = sweep.sum_rates
    assert all(b >= a for a, b in zip(sums, sums[1:]))


# -------------------------------------------------------------- regression


def test_regression_recovers_exact_line():
    grid = np.array(default_rho_grid(1e4, 1e10, 7))
    rates = 3.0 * np.log2(grid) + 1.25
    slope, intercept = fit_loglinear_slope(grid, rates)
    assert slope == pytest.approx(3.0, rel=1e-12)
    assert intercept == pytest.approx(1.25, rel=1e-9)


def test_rate_sweep_validates_grid():
    with pytest.raises(ValueError, match="3 points"):
        RateSweep(rho_grid=(1.0, 2.0), r1_rates=(0, 0), r2_rates=(0, 0),
                  slope=0.0, intercept=0.0)
    with pytest.raises(ValueError, match="increasing"):
        RateSweep(rho_grid=(1.0, 1.0, 2.0), r1_rates=(0, 0, 0),
                  r2_rates=(0, 0, 0), slope=0.0, intercept=0.0)
    with pytest.raises(ValueError, match="nondecreasing"):
        RateSweep(rho_grid=(1.0, 2.0, 4.0), r1_rates=(1.0, 0.5, 2.0),
                  r2_rates=(0.0, 0.0, 0.0), slope=0.0, intercept=0.0)


def test_estimate_grid_bounds():
    config = AntennaConfig(1, 1, 1, 1)
    ch = sample_channel(config, seed=4)
    scheme = build_scheme(config, scenario(0, 0, 0, 0), 1, 0, ch, seed=0)
    with pytest.raises(ValueError, match="within"):
        estimate_dof_slope(scheme, ch, [1.0, 10.0, 100.0])


@pytest.mark.parametrize("counts,bits,point,target", [
    ((2, 2, 2, 2), (0, 0, 0, 0), (1, 1), 2.0),
    ((2, 2, 2, 2), (1, 1, 0, 0), (2, 2), 4.0),
])
def test_monte_carlo_slope_hits_dof(counts, bits, point, target):
    config = AntennaConfig(*counts)
    sweep = simulate_point(config, scenario(*bits), *point, trials=10, seed=0,
                           rho_grid=default_rho_grid(1e4, 1e9, 7))
    assert sweep.slope == pytest.approx(target, rel=0.03)


def test_slope_never_beats_converse():
    config = AntennaConfig(2, 3, 3, 2)
    sc = scenario(0, 1, 0, 0)
    sweep = simulate_point(config, sc, 2, 1, trials=5, seed=1)
    assert sweep.slope <= dof_formula(config, sc) + 0.1


# -------------------------------------------------------- cooperation bound


def test_bound_term_zero_direct_row():
    # A silent direct antenna contributes nothing at any power.
    h11 = np.array([[0.0, 0.0], [1.0, 2.0]])
    h41 = np.array([[1.0, 1.0], [1.0, -1.0]])
    ident = np.eye(2)
    links = {(i, j): ident for i in range(1, 5) for j in range(1, 5)}
    links[(1, 1)] = h11
    links[(4, 1)] = h41
    ch = ChannelRealization(h31=ident, h32=ident, h41=h41, h42=ident,
                            seed=0, extended_links=links)
    for rho in (1.0, 1e6, 1e10):
        probe = cooperation_bound_term(ch, rho)
        assert probe.per_antenna_terms[0] == 0.0
        assert probe.per_antenna_terms[1] > 0.0


def test_bound_term_equal_rows_saturate_at_one_bit():
    row = np.array([[3.0, 4.0]])
    stack = np.vstack([row, row])
    ident = np.eye(2)
    links = {(i, j): ident for i in range(1, 5) for j in range(1, 5)}
    links[(1, 1)] = stack
    links[(4, 1)] = stack
    ch = ChannelRealization(h31=ident, h32=ident, h41=stack, h42=ident,
                            seed=0, extended_links=links)
    probe = cooperation_bound_term(ch, 1e10)
    assert probe.per_antenna_terms[0] == pytest.approx(1.0, abs=1e-3)


def test_bound_term_slopes_vanish():
    ch = sample_channel(AntennaConfig(2, 2, 2, 2), seed=0, extended=True)
    assert max(bound_term_slopes(ch, (1e6, 1e8, 1e10))) < 0.01


def test_bound_term_decreases_with_quieting_gain():
    # A louder channel toward node 4 can only shrink the term.
    def term_for(quieting_row):
        ident = np.eye(1)
        links = {(i, j): ident for i in range(1, 5) for j in range(1, 5)}
        links[(1, 1)] = np.array([[2.0]])
        h41 = np.array([quieting_row])
        links[(4, 1)] = h41
        ch = ChannelRealization(h31=ident, h32=ident, h41=h41, h42=ident,
                                seed=0, extended_links=links)
        return cooperation_bound_term(ch, 1e4).per_antenna_terms[0]

    terms = [term_for([g]) for g in (0.5, 1.0, 2.0, 4.0)]
    assert all(b < a for a, b in zip(terms, terms[1:]))


def test_bound_term_requires_extended_links():
    ch = sample_channel(AntennaConfig(2, 2, 2, 2), seed=0)
    with pytest.raises(ValueError, match="extended"):
        cooperation_bound_term(ch, 1e6)


def test_gap_check_report():
    report = cooperation_dof_gap_check(AntennaConfig(2, 2, 2, 2), trials=10, seed=0)
    assert report.passed
    assert report.max_term_slope < 0.01
    assert report.dof == 2 and report.upper_bounds == (2, 2)


def test_gap_check_single_stream_channel():
    report = cooperation_dof_gap_check(AntennaConfig(1, 3, 3, 1), trials=10, seed=0)
    assert report.dof == 1
    assert max(report.upper_bounds[0], 0) == 1
    assert report.dof <= report.upper_bounds[0]


def test_gap_check_rejects_wide_transmitter():
    with pytest.raises(ValueError, match="n2 >= m1"):
        cooperation_dof_gap_check(AntennaConfig(3, 1, 1, 2), trials=1)
