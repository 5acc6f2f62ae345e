"""Zero-forcing beamforming schemes realizing achievable DOF points.

For a target point (d1, d2), message W1 is sent from transmitter 1 (joined by
transmitter 2 when that one is cognitive, as a stacked vector), and up to
r1 = (m1 + t2*m2 - n2)^+ of its streams are placed in the null space of the
cross channel to receiver 2 so they cause no interference there; remaining
streams are isotropic on the unit sphere of the active transmit space.  W2 is
built symmetrically against receiver 1.  A cognitive receiver subtracts every
stream of the message it knows, so no nulling is aimed at it.  Decodability
is verified by subspace rank diagnostics on concrete channels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .channel import (
    RANK_RTOL,
    AntennaConfig,
    ChannelRealization,
    CognitionScenario,
    sample_channel,
)
from .regions import inner_points


class AchievabilityError(ValueError):
    """Raised for DOF points outside the achievable integer set."""


def _pos(x: int) -> int:
    return x if x > 0 else 0


def matrix_rank(matrix: np.ndarray, scale: float | None = None) -> int:
    """Rank by singular values above RANK_RTOL times a reference scale.

    ``scale`` anchors the threshold to the magnitude of the surrounding
    problem (e.g. the channel norm) so that an all-leakage matrix of entries
    ~1e-16 counts as rank zero rather than full rank.
    """
    if matrix.size == 0:
        return 0
    singular = np.linalg.svd(matrix, compute_uv=False)
    reference = float(singular[0]) if scale is None else float(scale)
    if reference <= 0.0:
        return 0
    return int(np.sum(singular > RANK_RTOL * reference))


def null_space(matrix: np.ndarray, rtol: float = RANK_RTOL) -> list[np.ndarray]:
    """Orthonormal basis of the kernel, as a list of vectors.

    Basis size equals columns minus rank; every vector v satisfies
    ||matrix @ v|| <= rtol * ||matrix|| * ||v||.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.shape[1] < 1:
        raise ValueError("matrix must have at least one column")
    _, singular, vt = np.linalg.svd(matrix, full_matrices=True)
    if singular.size == 0 or singular[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(singular > rtol * singular[0]))
    return [vt[i] for i in range(rank, matrix.shape[1])]


@dataclass(frozen=True)
class ZfScheme:
    """Transmit vectors and stream counts realizing one DOF point.

    ``w1_vectors`` live in W1's active transmit space (length m1 + t2*m2,
    transmitter 1 stacked over transmitter 2 when the latter is cognitive);
    ``w2_vectors`` live in W2's (length t1*m1 + m2).  ``r1``/``r2`` are the
    nullable stream counts against the opposite receiver.
    """

    config: AntennaConfig
    scenario: CognitionScenario
    d1: int
    d2: int
    r1: int
    r2: int
    w1_vectors: tuple[np.ndarray, ...]
    w2_vectors: tuple[np.ndarray, ...]

    @property
    def w1_nulled(self) -> int:
        """How many W1 vectors were drawn from the cross-channel kernel."""
        return 0 if self.scenario.r2 else min(self.d1, self.r1)

    @property
    def w2_nulled(self) -> int:
        return 0 if self.scenario.r1 else min(self.d2, self.r2)

    def w1_embedded(self) -> np.ndarray:
        """W1 vectors as columns in the full (m1+m2)-dim transmit space."""
        m1, m2 = self.config.m1, self.config.m2
        out = np.zeros((m1 + m2, self.d1))
        for k, v in enumerate(self.w1_vectors):
            out[:m1, k] = v[:m1]
            if self.scenario.t2:
                out[m1:, k] = v[m1:]
        return out

    def w2_embedded(self) -> np.ndarray:
        m1, m2 = self.config.m1, self.config.m2
        out = np.zeros((m1 + m2, self.d2))
        for k, v in enumerate(self.w2_vectors):
            if self.scenario.t1:
                out[:m1, k] = v[:m1]
            out[m1:, k] = v[-m2:]
        return out


@dataclass(frozen=True)
class SchemeDiagnostics:
    """Subspace dimension counts at both receivers, plus decodability flags.

    A message is decodable when its signal subspace has full dimension d_i,
    meets the residual interference only at the origin, and both fit inside
    the receiver's antenna count.  Cognitive receivers subtract the known
    message, so their residual interference is zero by construction.
    """

    signal_dim_rx1: int
    interference_dim_rx1: int
    intersection_dim_rx1: int
    signal_dim_rx2: int
    interference_dim_rx2: int
    intersection_dim_rx2: int
    decodable_w1: bool
    decodable_w2: bool

    @property
    def all_decodable(self) -> bool:
        return self.decodable_w1 and self.decodable_w2


def _cross_channel_w1(channel: ChannelRealization, t2: bool) -> np.ndarray:
    """Channel from W1's active transmit space to receiver 2."""
    return np.hstack([channel.h41, channel.h42]) if t2 else channel.h41


def _cross_channel_w2(channel: ChannelRealization, t1: bool) -> np.ndarray:
    return np.hstack([channel.h31, channel.h32]) if t1 else channel.h32


def _isotropic(rng: np.random.Generator, dim: int) -> np.ndarray:
    vec = rng.standard_normal(dim)
    norm = np.linalg.norm(vec)
    while norm == 0.0:  # probability zero, but keep the loop total
        vec = rng.standard_normal(dim)
        norm = np.linalg.norm(vec)
    return vec / norm


def _message_vectors(
    rng: np.random.Generator,
    streams: int,
    active_dim: int,
    cross: np.ndarray,
    opposite_cognitive: bool,
) -> list[np.ndarray]:
    vectors: list[np.ndarray] = []
    if streams == 0:
        return vectors
    if not opposite_cognitive:
        vectors.extend(null_space(cross)[:streams])
    while len(vectors) < streams:
        vectors.append(_isotropic(rng, active_dim))
    return vectors


def build_scheme(
    config: AntennaConfig,
    scenario: CognitionScenario,
    d1: int,
    d2: int,
    channel: ChannelRealization,
    seed: int,
) -> ZfScheme:
    """Construct the zero-forcing scheme for an achievable point.

    Deterministic given all arguments.  Rejects points outside the
    achievable integer set and channels that do not match the configuration.
    """
    if not channel.matches(config):
        raise ValueError(
            f"channel realization has shapes for {channel.config}, expected {config}"
        )
    if (d1, d2) not in inner_points(config, scenario):
        raise AchievabilityError(
            f"point ({d1},{d2}) is not in the achievable integer set for "
            f"config {config}, scenario {scenario}"
        )
    m1, m2 = config.m1, config.m2
    r1 = _pos(m1 + (m2 if scenario.t2 else 0) - config.n2)
    r2 = _pos((m1 if scenario.t1 else 0) + m2 - config.n1)
    rng = np.random.default_rng([seed & (2**64 - 1), d1, d2])
    w1 = _message_vectors(
        rng,
        streams=d1,
        active_dim=m1 + (m2 if scenario.t2 else 0),
        cross=_cross_channel_w1(channel, scenario.t2),
        opposite_cognitive=scenario.r2,
    )
    w2 = _message_vectors(
        rng,
        streams=d2,
        active_dim=(m1 if scenario.t1 else 0) + m2,
        cross=_cross_channel_w2(channel, scenario.t1),
        opposite_cognitive=scenario.r1,
    )
    return ZfScheme(
        config=config,
        scenario=scenario,
        d1=d1,
        d2=d2,
        r1=r1,
        r2=r2,
        w1_vectors=tuple(w1),
        w2_vectors=tuple(w2),
    )


def _receiver_diagnostics(
    full_channel: np.ndarray,
    signal_cols: np.ndarray,
    interference_cols: np.ndarray | None,
    antennas: int,
    streams: int,
) -> tuple[int, int, int, bool]:
    scale = float(np.linalg.norm(full_channel, 2))
    received_signal = full_channel @ signal_cols
    signal_dim = matrix_rank(received_signal, scale=scale)
    if interference_cols is None or interference_cols.shape[1] == 0:
        interference_dim = 0
        intersection_dim = 0
    else:
        received_intf = full_channel @ interference_cols
        interference_dim = matrix_rank(received_intf, scale=scale)
        union_dim = matrix_rank(
            np.hstack([received_signal, received_intf]), scale=scale
        )
        intersection_dim = max(signal_dim + interference_dim - union_dim, 0)
    decodable = (
        signal_dim == streams
        and intersection_dim == 0
        and signal_dim + interference_dim <= antennas
    )
    return signal_dim, interference_dim, intersection_dim, decodable


def verify_scheme(scheme: ZfScheme, channel: ChannelRealization) -> SchemeDiagnostics:
    """Rank diagnostics of a scheme on a concrete channel.

    At each receiver: rank of the received intended-signal subspace, rank of
    the residual interference (zero for a cognitive receiver, which subtracts
    the known message), and the dimension of their intersection via
    dim(S) + dim(I) - dim(S+I).
    """
    if not channel.matches(scheme.config):
        raise ValueError("channel does not match the scheme's configuration")
    rx1 = np.hstack([channel.h31, channel.h32])
    rx2 = np.hstack([channel.h41, channel.h42])
    w1_cols = scheme.w1_embedded()
    w2_cols = scheme.w2_embedded()
    s1, i1, x1, dec1 = _receiver_diagnostics(
        rx1,
        signal_cols=w1_cols,
        interference_cols=None if scheme.scenario.r1 else w2_cols,
        antennas=scheme.config.n1,
        streams=scheme.d1,
    )
    s2, i2, x2, dec2 = _receiver_diagnostics(
        rx2,
        signal_cols=w2_cols,
        interference_cols=None if scheme.scenario.r2 else w1_cols,
        antennas=scheme.config.n2,
        streams=scheme.d2,
    )
    return SchemeDiagnostics(
        signal_dim_rx1=s1,
        interference_dim_rx1=i1,
        intersection_dim_rx1=x1,
        signal_dim_rx2=s2,
        interference_dim_rx2=i2,
        intersection_dim_rx2=x2,
        decodable_w1=dec1,
        decodable_w2=dec2,
    )


def null_residual(scheme: ZfScheme, channel: ChannelRealization) -> float:
    """Worst relative leakage of the nulled streams at the opposite receiver."""
    worst = 0.0
    cross1 = _cross_channel_w1(channel, scheme.scenario.t2)
    norm1 = np.linalg.norm(cross1, 2)
    for v in scheme.w1_vectors[: scheme.w1_nulled]:
        worst = max(worst, float(np.linalg.norm(cross1 @ v)) / norm1)
    cross2 = _cross_channel_w2(channel, scheme.scenario.t1)
    norm2 = np.linalg.norm(cross2, 2)
    for v in scheme.w2_vectors[: scheme.w2_nulled]:
        worst = max(worst, float(np.linalg.norm(cross2 @ v)) / norm2)
    return worst


def transmit_rank(scheme: ZfScheme) -> int:
    """Rank of all d1 + d2 transmit vectors embedded in R^(m1+m2)."""
    stacked = np.hstack([scheme.w1_embedded(), scheme.w2_embedded()])
    return matrix_rank(stacked, scale=1.0)


@dataclass(frozen=True)
class SweepCell:
    """Pass/fail tally for one (config, scenario, point) cell of the sweep."""

    config: AntennaConfig
    scenario: CognitionScenario
    point: tuple[int, int]
    trials: int
    passes: int
    worst_null_residual: float

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_json_dict(),
            "scenario": list(self.scenario.bits),
            "point": list(self.point),
            "trials": self.trials,
            "passes": self.passes,
            "worst_null_residual": self.worst_null_residual,
        }


@dataclass(frozen=True)
class SweepReport:
    """Aggregated achievability sweep results."""

    cells: tuple[SweepCell, ...]

    @property
    def total_trials(self) -> int:
        return sum(c.trials for c in self.cells)

    @property
    def total_passes(self) -> int:
        return sum(c.passes for c in self.cells)

    @property
    def all_passed(self) -> bool:
        return self.total_passes == self.total_trials

    @property
    def worst_null_residual(self) -> float:
        return max((c.worst_null_residual for c in self.cells), default=0.0)

    def failures(self) -> list[SweepCell]:
        return [c for c in self.cells if c.passes != c.trials]

    def to_json_list(self) -> list[dict]:
        return [c.to_json_dict() for c in self.cells]


def _cell_passes(
    config: AntennaConfig,
    scenario: CognitionScenario,
    point: tuple[int, int],
    channels: list[ChannelRealization],
    seed: int,
) -> SweepCell:
    d1, d2 = point
    passes = 0
    worst = 0.0
    for trial, ch in enumerate(channels):
        scheme = build_scheme(config, scenario, d1, d2, ch, seed=seed + trial)
        diag = verify_scheme(scheme, ch)
        residual = null_residual(scheme, ch)
        worst = max(worst, residual)
        ok = (
            diag.all_decodable
            and residual <= RANK_RTOL
            and transmit_rank(scheme) == d1 + d2
        )
        passes += int(ok)
    return SweepCell(
        config=config,
        scenario=scenario,
        point=point,
        trials=len(channels),
        passes=passes,
        worst_null_residual=worst,
    )


def achievability_sweep(max_antennas: int, trials: int, seed: int = 0) -> SweepReport:
    """Build and verify schemes for every achievable point of every channel.

    Covers all antenna configurations with counts in 1..max_antennas, all 16
    cognition scenarios, every point of the achievable integer set, and
    ``trials`` random channels per point.  Failures are recorded in the
    report, not raised.
    """
    if max_antennas < 1:
        raise ValueError("max_antennas must be >= 1")
    if trials < 0:
        raise ValueError("trials must be >= 0")
    cells: list[SweepCell] = []
    if trials == 0:
        return SweepReport(cells=())
    scenarios = CognitionScenario.all_scenarios()
    for counts in itertools.product(range(1, max_antennas + 1), repeat=4):
        config = AntennaConfig(*counts)
        for s_index, scenario in enumerate(scenarios):
            cell_seed = _derived_seed(seed, counts, s_index)
            channels = [
                sample_channel(config, seed=cell_seed + trial)
                for trial in range(trials)
            ]
            for point in sorted(inner_points(config, scenario).points):
                cells.append(
                    _cell_passes(config, scenario, point, channels, seed=cell_seed)
                )
    return SweepReport(cells=tuple(cells))


def _derived_seed(seed: int, counts: tuple[int, int, int, int], s_index: int) -> int:
    mixed = seed & (2**32 - 1)
    for part in (*counts, s_index):
        mixed = (mixed * 1_000_003 + part + 1) % (2**63 - 1)
    return mixed
