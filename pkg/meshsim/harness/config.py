"""
Scenario and batch configuration.

A config file is a JSON document:

    {
      "defaults": {"items_per_producer": 100, "radio": {"scan_window_us": 30000}},
      "scenarios": [{"name": "mesh-line", "stack": "btmesh", "topology": "line"}],
      "seeds": [1, 2, 3]
    }

Every scenario is the defaults deep-merged with its own keys. A document
without "scenarios" is a single scenario.
"""

import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from dotenv import load_dotenv

from ..bticn import DEFAULT_AWAKE_WINDOW_US, DEFAULT_LONG_LIVED_LIFETIME_US, DEFAULT_SLEEP_CYCLE_US
from ..btmesh import DEFAULT_SCAN_WINDOW_US, DEFAULT_TTL, MeshParams
from ..errors import ConfigError
from ..file_ops import read_json
from ..ndn import NdnParams
from ..sim_core import MS, SECOND, CsmaParams
from ..utilities import deep_merge

STACKS = ('btmesh', 'ndn', 'bticn')
TOPOLOGIES = ('full-mesh', 'line')
PATTERNS = ('many-to-one', 'one-to-many')

LINE_TTL = 10
PAPER_SUITE = 'paper-suite'

# publish interval and jitter per traffic pattern
PATTERN_TIMING = {
    'many-to-one': (5 * SECOND, 2500 * MS),
    'one-to-many': (1 * SECOND, 500 * MS),
}


@dataclass
class RadioConfig:
    scan_window_us: Optional[int] = DEFAULT_SCAN_WINDOW_US
    propagation_delay_us: int = 0
    loss_mesh_adv: float = 0.0
    loss_dot154: float = 0.0
    interference: List[List[int]] = field(default_factory=list)
    slot_us: int = 320
    min_be: int = 3
    max_be: int = 5
    max_csma_backoffs: int = 4
    max_retries: int = 4
    ack_timeout_us: int = 864


@dataclass
class MeshConfig:
    initial_ttl: Optional[int] = None
    adv_events: int = 5
    adv_interval_us: int = 20 * MS
    adv_jitter_us: int = 10 * MS
    cache_capacity: int = 64
    friend_queue_capacity: int = 16
    relay: bool = True


@dataclass
class NdnConfig:
    retry_interval_us: int = 1 * SECOND
    max_retries: int = 4
    interest_lifetime_us: int = 10 * SECOND
    cs_capacity: int = 30
    relay_retransmit: bool = False
    producer_delay_us: int = 0
    broadcast_face: bool = False
    # one-to-many requests: farther consumers ask earlier, then a uniform spread
    request_lead_per_hop_us: int = 100 * MS
    request_jitter_us: int = 130 * MS


@dataclass
class BtIcnConfig:
    sleep_cycle_us: int = DEFAULT_SLEEP_CYCLE_US
    awake_window_us: int = DEFAULT_AWAKE_WINDOW_US
    long_lived_lifetime_us: int = DEFAULT_LONG_LIVED_LIFETIME_US
    repeat_after_us: Optional[int] = None
    max_attempts: int = 3
    friendships: List[List[int]] = field(default_factory=list)


_SECTIONS = {
    'radio': RadioConfig,
    'mesh': MeshConfig,
    'ndn': NdnConfig,
    'bticn': BtIcnConfig,
}


def _section(cls, data: Any, where: str):
    if isinstance(data, cls):
        return data
    if not isinstance(data, dict):
        raise ConfigError(f"'{where}' must be an object")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown key(s) in '{where}': {', '.join(unknown)}")
    return cls(**data)


@dataclass
class ScenarioConfig:
    """
    One simulation run: stack, topology, traffic pattern and every protocol knob.

    Publish interval and jitter default per pattern (5 s +- 2.5 s many-to-one,
    1 s +- 0.5 s one-to-many); line topologies default to initial TTL 10.
    """

    name: str = ''
    stack: str = 'btmesh'
    topology: str = 'full-mesh'
    nodes: int = 10
    pattern: str = 'many-to-one'
    items_per_producer: int = 100
    publish_interval_us: Optional[int] = None
    publish_jitter_us: Optional[int] = None
    seed: int = 1
    duration_limit_us: Optional[int] = None
    radio: RadioConfig = field(default_factory=RadioConfig)
    mesh: MeshConfig = field(default_factory=MeshConfig)
    ndn: NdnConfig = field(default_factory=NdnConfig)
    bticn: BtIcnConfig = field(default_factory=BtIcnConfig)

    def __post_init__(self):
        for key, cls in _SECTIONS.items():
            setattr(self, key, _section(cls, getattr(self, key), key))
        self.validate()

        interval, jitter = PATTERN_TIMING[self.pattern]
        if self.publish_interval_us is None:
            self.publish_interval_us = interval
        if self.publish_jitter_us is None:
            self.publish_jitter_us = min(jitter, self.publish_interval_us // 2)
        if self.mesh.initial_ttl is None:
            self.mesh.initial_ttl = LINE_TTL if self.topology == 'line' else DEFAULT_TTL
        if not self.name:
            self.name = f"{self.stack}-{self.topology}-{self.pattern}"
        self._validate_timing()

    def validate(self) -> None:
        if self.stack not in STACKS:
            raise ConfigError(f"unknown stack '{self.stack}' (expected one of {', '.join(STACKS)})")
        if self.topology not in TOPOLOGIES:
            raise ConfigError(
                f"unknown topology '{self.topology}' (expected one of {', '.join(TOPOLOGIES)})")
        if self.pattern not in PATTERNS:
            raise ConfigError(
                f"unknown pattern '{self.pattern}' (expected one of {', '.join(PATTERNS)})")
        if not isinstance(self.nodes, int) or self.nodes < 2:
            raise ConfigError("a scenario needs at least 2 nodes")
        if self.items_per_producer < 1:
            raise ConfigError("items_per_producer must be at least 1")
        if self.seed < 0:
            raise ConfigError("seed must not be negative")
        if not 0.0 <= self.radio.loss_mesh_adv <= 1.0 or not 0.0 <= self.radio.loss_dot154 <= 1.0:
            raise ConfigError("loss probabilities must lie in [0, 1]")
        if self.mesh.initial_ttl is not None and not 0 <= self.mesh.initial_ttl <= 127:
            raise ConfigError("initial_ttl must lie in 0..127")
        if self.bticn.awake_window_us >= self.bticn.sleep_cycle_us:
            raise ConfigError("awake window must be shorter than the sleep cycle")
        if self.bticn.long_lived_lifetime_us <= self.bticn.sleep_cycle_us:
            raise ConfigError("long-lived Interest lifetime must exceed the sleep cycle")
        for pair in list(self.radio.interference) + list(self.bticn.friendships):
            if len(pair) != 2 or not all(0 <= int(v) < self.nodes for v in pair):
                raise ConfigError(f"node pair {pair} invalid for {self.nodes} nodes")

    def _validate_timing(self) -> None:
        if self.publish_interval_us <= 0:
            raise ConfigError("publish_interval_us must be positive")
        if not 0 <= self.publish_jitter_us <= self.publish_interval_us // 2:
            raise ConfigError("publish_jitter_us must lie in [0, interval / 2]")
        if self.duration_limit_us is not None and self.duration_limit_us <= 0:
            raise ConfigError("duration_limit_us must be positive")
        if self.ndn.request_jitter_us < 0 or self.ndn.request_lead_per_hop_us < 0:
            raise ConfigError("request_jitter_us and request_lead_per_hop_us must be non-negative")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ScenarioConfig':
        """
        Build a validated config from plain data.

        Raises:
            ConfigError: Unknown keys, wrong types or invalid values
        """
        if not isinstance(data, dict):
            raise ConfigError("scenario must be an object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown scenario key(s): {', '.join(unknown)}")
        try:
            return cls(**data)
        except TypeError as e:
            raise ConfigError(f"invalid scenario: {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def with_seed(self, seed: int) -> 'ScenarioConfig':
        return replace(self, seed=seed)

    def csma_params(self) -> CsmaParams:
        radio = self.radio
        return CsmaParams(slot_us=radio.slot_us, min_be=radio.min_be, max_be=radio.max_be,
                          max_csma_backoffs=radio.max_csma_backoffs,
                          max_retries=radio.max_retries, ack_timeout_us=radio.ack_timeout_us)

    def mesh_params(self) -> MeshParams:
        mesh = self.mesh
        return MeshParams(initial_ttl=mesh.initial_ttl, adv_events=mesh.adv_events,
                          adv_interval_us=mesh.adv_interval_us, adv_jitter_us=mesh.adv_jitter_us,
                          cache_capacity=mesh.cache_capacity,
                          friend_queue_capacity=mesh.friend_queue_capacity, relay=mesh.relay)

    def ndn_params(self) -> NdnParams:
        ndn = self.ndn
        return NdnParams(retry_interval_us=ndn.retry_interval_us, max_retries=ndn.max_retries,
                         interest_lifetime_us=ndn.interest_lifetime_us,
                         cs_capacity=ndn.cs_capacity, relay_retransmit=ndn.relay_retransmit,
                         producer_delay_us=ndn.producer_delay_us,
                         broadcast_face=ndn.broadcast_face)


@dataclass
class BatchConfig:
    scenarios: List[ScenarioConfig]
    seeds: List[int]

    def __post_init__(self):
        if not self.scenarios:
            raise ConfigError("batch has no scenarios")
        if not self.seeds:
            raise ConfigError("batch has no seeds")
        names = [s.name for s in self.scenarios]
        if len(set(names)) != len(names):
            raise ConfigError("scenario names must be unique within a batch")

    def jobs(self) -> List[ScenarioConfig]:
        return [scenario.with_seed(seed) for scenario in self.scenarios for seed in self.seeds]


def batch_from_dict(document: Dict[str, Any], seeds: Optional[Sequence[int]] = None) -> BatchConfig:
    """Resolve a config document into scenarios and seeds; explicit seeds win."""
    if 'scenarios' not in document:
        document = {'scenarios': [document]}
    unknown = sorted(set(document) - {'defaults', 'scenarios', 'seeds'})
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {', '.join(unknown)}")

    defaults = document.get('defaults', {})
    raw_scenarios = document['scenarios']
    if not isinstance(defaults, dict) or not isinstance(raw_scenarios, list):
        raise ConfigError("'defaults' must be an object and 'scenarios' a list")

    scenarios = [ScenarioConfig.from_dict(deep_merge(defaults, raw)) for raw in raw_scenarios]
    if seeds is None:
        seeds = document.get('seeds') or sorted({s.seed for s in scenarios})
    if not all(isinstance(s, int) and s >= 0 for s in seeds):
        raise ConfigError("seeds must be non-negative integers")
    return BatchConfig(scenarios, list(seeds))


def load_batch_config(path: Union[str, Path], seeds: Optional[Sequence[int]] = None) -> BatchConfig:
    """
    Read and resolve a JSON config file.

    Raises:
        FileOpsError: Missing or malformed file
        ConfigError: Invalid contents
    """
    return batch_from_dict(read_json(path), seeds)


def paper_suite(items_per_producer: int = 100, seeds: Sequence[int] = (1,)) -> BatchConfig:
    """The 8 comparison runs: 2 stacks x 2 topologies x 2 patterns, 10 nodes."""
    scenarios = [
        ScenarioConfig(stack=stack, topology=topology, pattern=pattern,
                       items_per_producer=items_per_producer)
        for stack in ('btmesh', 'ndn')
        for topology in TOPOLOGIES
        for pattern in PATTERNS
    ]
    return BatchConfig(scenarios, list(seeds))


def preset(name: str, seeds: Sequence[int] = (1,)) -> BatchConfig:
    if name != PAPER_SUITE:
        raise ConfigError(f"unknown preset '{name}'")
    return paper_suite(seeds=seeds)


@dataclass
class Settings:
    """Process-level settings from the environment (.env supported)."""

    output_dir: Path = Path('results')
    log_level: str = 'INFO'
    workers: int = 1


def load_settings(env_file: Optional[Union[str, Path]] = None) -> Settings:
    """
    Read MESHSIM_OUTPUT_DIR, MESHSIM_LOG_LEVEL and MESHSIM_WORKERS.

    Raises:
        ConfigError: MESHSIM_WORKERS is not a positive integer
    """
    load_dotenv(env_file)
    try:
        workers = int(os.getenv('MESHSIM_WORKERS', '1'))
    except ValueError as e:
        raise ConfigError("MESHSIM_WORKERS must be an integer") from e
    if workers < 1:
        raise ConfigError("MESHSIM_WORKERS must be at least 1")
    return Settings(
        output_dir=Path(os.getenv('MESHSIM_OUTPUT_DIR', 'results')),
        log_level=os.getenv('MESHSIM_LOG_LEVEL', 'INFO').upper(),
        workers=workers,
    )


def friendship_pairs(cfg: ScenarioConfig) -> List[Tuple[int, int]]:
    """
    (friend, lpn) pairs of a bticn scenario.

    Defaults: full mesh -> node 0 befriends every other node; line -> the far
    end is an LPN befriended by its neighbour.
    """
    if cfg.bticn.friendships:
        return [(int(a), int(b)) for a, b in cfg.bticn.friendships]
    if cfg.topology == 'full-mesh':
        return [(0, v) for v in range(1, cfg.nodes)]
    return [(cfg.nodes - 2, cfg.nodes - 1)]
