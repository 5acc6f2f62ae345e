import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from micdof.channel import (
    AntennaConfig,
    CognitionScenario,
    is_full_rank,
    sample_channel,
    swap_users,
    validate_config,
)

counts = st.integers(min_value=1, max_value=6)
configs = st.builds(AntennaConfig, m1=counts, m2=counts, n1=counts, n2=counts)
scenarios = st.builds(
    CognitionScenario,
    t1=st.booleans(), t2=st.booleans(), r1=st.booleans(), r2=st.booleans(),
)


def test_validate_config_accepts_valid():
    assert validate_config(2, 2, 2, 2) == AntennaConfig(2, 2, 2, 2)
    assert validate_config(1, 5, 5, 1) == AntennaConfig(1, 5, 5, 1)


@pytest.mark.parametrize("bad,field", [
    ((0, 2, 2, 2), "m1"),
    ((2, 0, 2, 2), "m2"),
    ((2, 2, -1, 2), "n1"),
    ((2, 2, 2, 0), "n2"),
])
def test_validate_config_names_offending_field(bad, field):
    with pytest.raises(ValueError, match=field):
        validate_config(*bad)


def test_sixteen_distinct_scenarios_roundtrip():
    all_s = CognitionScenario.all_scenarios()
    assert len(set(all_s)) == 16
    for s in all_s:
        assert CognitionScenario.from_bits(s.bits) == s
        assert len(s.bits) == 4


def test_scenario_rejects_bad_bits():
    with pytest.raises(ValueError):
        CognitionScenario.from_bits([0, 1, 2, 0])
    with pytest.raises(ValueError):
        CognitionScenario.from_bits([0, 1, 0])


def test_sampling_is_deterministic():
    config = AntennaConfig(2, 2, 2, 2)
    a = sample_channel(config, seed=7)
    b = sample_channel(config, seed=7)
    for name in ("h31", "h32", "h41", "h42"):
        assert np.array_equal(getattr(a, name), getattr(b, name))
    assert not np.array_equal(a.h31, sample_channel(config, seed=8).h31)


def test_sampled_shapes_match_config():
    ch = sample_channel(AntennaConfig(1, 3, 3, 1), seed=0)
    assert ch.h41.shape == (1, 1)
    assert ch.h32.shape == (3, 3)
    assert ch.h31.shape == (3, 1)
    assert ch.h42.shape == (1, 3)


def test_monte_carlo_full_rank():
    config = AntennaConfig(3, 3, 3, 3)
    for seed in range(1000):
        ch = sample_channel(config, seed=seed)
        for m in (ch.h31, ch.h32, ch.h41, ch.h42):
            s = np.linalg.svd(m, compute_uv=False)
            assert s[-1] > 1e-9 * s[0]


def test_extended_links_cover_all_sixteen_pairs():
    config = AntennaConfig(2, 3, 1, 2)
    ch = sample_channel(config, seed=5, extended=True)
    assert ch.extended_links is not None
    assert set(ch.extended_links) == {(i, j) for i in range(1, 5) for j in range(1, 5)}
    ant = {1: 2, 2: 3, 3: 1, 4: 2}
    for (i, j), m in ch.extended_links.items():
        assert m.shape == (ant[i], ant[j])
    # the base links alias the extended set
    assert np.array_equal(ch.h31, ch.extended_links[(3, 1)])
    assert np.array_equal(ch.h42, ch.extended_links[(4, 2)])


def test_extended_sampling_deterministic():
    config = AntennaConfig(2, 2, 2, 2)
    a = sample_channel(config, seed=11, extended=True)
    b = sample_channel(config, seed=11, extended=True)
    for pair in a.extended_links:
        assert np.array_equal(a.extended_links[pair], b.extended_links[pair])


def test_realizations_are_read_only():
    ch = sample_channel(AntennaConfig(2, 2, 2, 2), seed=1)
    with pytest.raises(ValueError):
        ch.h31[0, 0] = 0.0


def test_is_full_rank_detects_degeneracy():
    assert is_full_rank(np.eye(3))
    assert not is_full_rank(np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_degenerate_generator_raises_after_retries(monkeypatch):
    import micdof.channel as channel_module

    monkeypatch.setattr(channel_module, "is_full_rank", lambda m, rtol=0: False)
    with pytest.raises(channel_module.DegenerateChannelError, match="degenerate"):
        sample_channel(AntennaConfig(2, 2, 2, 2), seed=0)


def test_swap_users_example():
    config, scenario = swap_users(
        AntennaConfig(1, 3, 3, 1), CognitionScenario.from_bits([0, 1, 0, 0])
    )
    assert config == AntennaConfig(3, 1, 1, 3)
    assert scenario.bits == (1, 0, 0, 0)


def test_swap_users_symmetric_fixed_point():
    config = AntennaConfig(2, 2, 2, 2)
    scenario = CognitionScenario()
    assert swap_users(config, scenario) == (config, scenario)


@settings(max_examples=100)
@given(configs, scenarios)
def test_swap_users_is_involution(config, scenario):
    assert swap_users(*swap_users(config, scenario)) == (config, scenario)
