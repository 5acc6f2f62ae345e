"""Antenna configurations, cognition scenarios, and random channel realizations.

The two-user interference channel has four nodes: node 1 and node 2 are the
transmitters (``m1``/``m2`` antennas), node 3 and node 4 the receivers
(``n1``/``n2`` antennas).  ``h{ji}`` is the link matrix from node ``i`` to
node ``j``; the cooperation variant additionally carries the full 4x4 set of
directed links (every node is full duplex, self-links included).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

# A matrix counts as full rank when its smallest singular value exceeds this
# fraction of its largest one.  Scale-invariant and far above double noise.
RANK_RTOL = 1e-9

_RESAMPLE_ATTEMPTS = 8


class DegenerateChannelError(RuntimeError):
    """Raised when repeated sampling cannot produce full-rank matrices."""


@dataclass(frozen=True)
class AntennaConfig:
    """Antenna counts (m1, m2, n1, n2); every count must be at least 1."""

    m1: int
    m2: int
    n1: int
    n2: int

    def __post_init__(self) -> None:
        for name in ("m1", "m2", "n1", "n2"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValueError(f"antenna count {name} must be an integer, got {value!r}")
            if value < 1:
                raise ValueError(f"antenna count {name} must be >= 1, got {value}")

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.m1, self.m2, self.n1, self.n2)

    def node_antennas(self, node: int) -> int:
        """Antennas at node 1..4 (transmitters first, then receivers)."""
        if node not in (1, 2, 3, 4):
            raise ValueError(f"node must be in 1..4, got {node}")
        return self.counts[node - 1]

    def to_json_dict(self) -> dict[str, int]:
        return {"m1": self.m1, "m2": self.m2, "n1": self.n1, "n2": self.n2}

    @classmethod
    def from_json_dict(cls, data: dict) -> "AntennaConfig":
        return validate_config(data["m1"], data["m2"], data["n1"], data["n2"])

    def __str__(self) -> str:
        return f"({self.m1},{self.m2},{self.n1},{self.n2})"


@dataclass(frozen=True)
class CognitionScenario:
    """Which nodes are cognitive: transmitters t1/t2, receivers r1/r2.

    A cognitive node knows the other user's message a priori.  The canonical
    serialization is the indicator 4-tuple [t1, t2, r1, r2].
    """

    t1: bool = False
    t2: bool = False
    r1: bool = False
    r2: bool = False

    @property
    def bits(self) -> tuple[int, int, int, int]:
        return (int(self.t1), int(self.t2), int(self.r1), int(self.r2))

    @classmethod
    def from_bits(cls, bits) -> "CognitionScenario":
        values = list(bits)
        if len(values) != 4 or any(b not in (0, 1, True, False) for b in values):
            raise ValueError(f"scenario must be four 0/1 indicators, got {bits!r}")
        return cls(*(bool(b) for b in values))

    @classmethod
    def all_scenarios(cls) -> list["CognitionScenario"]:
        """All 16 scenarios, in lexicographic order of [t1, t2, r1, r2]."""
        return [cls(*combo) for combo in itertools.product((False, True), repeat=4)]

    def __str__(self) -> str:
        return "[%d,%d,%d,%d]" % self.bits


@dataclass(frozen=True)
class ChannelRealization:
    """One sampled set of real channel matrices for a given configuration.

    ``h31``..``h42`` are the four interference-channel links.  When the
    realization was sampled with ``extended=True``, ``extended_links`` maps
    every ordered node pair (i, j) to the matrix of the link from node j to
    node i, sixteen in total; otherwise it is None.
    """

    h31: np.ndarray
    h32: np.ndarray
    h41: np.ndarray
    h42: np.ndarray
    seed: int
    extended_links: dict[tuple[int, int], np.ndarray] | None = field(default=None)

    @property
    def config(self) -> AntennaConfig:
        return AntennaConfig(
            m1=self.h31.shape[1],
            m2=self.h32.shape[1],
            n1=self.h31.shape[0],
            n2=self.h41.shape[0],
        )

    def matches(self, config: AntennaConfig) -> bool:
        m1, m2, n1, n2 = config.counts
        return (
            self.h31.shape == (n1, m1)
            and self.h32.shape == (n1, m2)
            and self.h41.shape == (n2, m1)
            and self.h42.shape == (n2, m2)
        )


def validate_config(m1, m2, n1, n2) -> AntennaConfig:
    """Build an AntennaConfig, rejecting any count below 1."""
    return AntennaConfig(m1=m1, m2=m2, n1=n1, n2=n2)


def swap_users(
    config: AntennaConfig, scenario: CognitionScenario
) -> tuple[AntennaConfig, CognitionScenario]:
    """Relabel user 1 as user 2 and vice versa.  Involution."""
    swapped_config = AntennaConfig(m1=config.m2, m2=config.m1, n1=config.n2, n2=config.n1)
    swapped_scenario = CognitionScenario(
        t1=scenario.t2, t2=scenario.t1, r1=scenario.r2, r2=scenario.r1
    )
    return swapped_config, swapped_scenario


def is_full_rank(matrix: np.ndarray, rtol: float = RANK_RTOL) -> bool:
    """True when the smallest singular value exceeds rtol times the largest."""
    if matrix.size == 0:
        return False
    singular = np.linalg.svd(matrix, compute_uv=False)
    return bool(singular[0] > 0.0 and singular[-1] > rtol * singular[0])


def _freeze(matrix: np.ndarray) -> np.ndarray:
    matrix.setflags(write=False)
    return matrix


def sample_channel(
    config: AntennaConfig, seed: int, extended: bool = False
) -> ChannelRealization:
    """Sample i.i.d. standard-normal channel matrices, deterministic in seed.

    Entries are real, zero mean, unit variance.  Continuous sampling makes
    every matrix full rank almost surely; a rank failure at tolerance is
    retried with a derived seed up to 8 times before giving up.
    """
    entropy = seed & (2**64 - 1)
    for attempt in range(_RESAMPLE_ATTEMPTS):
        rng = np.random.default_rng([entropy, attempt])
        if extended:
            links = {
                (i, j): rng.standard_normal(
                    (config.node_antennas(i), config.node_antennas(j))
                )
                for i in (1, 2, 3, 4)
                for j in (1, 2, 3, 4)
            }
            matrices = {
                "h31": links[(3, 1)],
                "h32": links[(3, 2)],
                "h41": links[(4, 1)],
                "h42": links[(4, 2)],
            }
            to_check = list(links.values())
        else:
            links = None
            matrices = {
                "h31": rng.standard_normal((config.n1, config.m1)),
                "h32": rng.standard_normal((config.n1, config.m2)),
                "h41": rng.standard_normal((config.n2, config.m1)),
                "h42": rng.standard_normal((config.n2, config.m2)),
            }
            to_check = list(matrices.values())
        if all(is_full_rank(m) for m in to_check):
            if links is not None:
                links = {pair: _freeze(m) for pair, m in links.items()}
                matrices = {
                    "h31": links[(3, 1)],
                    "h32": links[(3, 2)],
                    "h41": links[(4, 1)],
                    "h42": links[(4, 2)],
                }
            else:
                matrices = {name: _freeze(m) for name, m in matrices.items()}
            return ChannelRealization(seed=seed, extended_links=links, **matrices)
    raise DegenerateChannelError(
        f"could not sample full-rank channels for {config} after "
        f"{_RESAMPLE_ATTEMPTS} attempts; the generator looks degenerate"
    )
