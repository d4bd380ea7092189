"""
Tests for the harness package: configuration, topologies, metrics, runs,
batches, reports and acceptance checks.
"""

import json
from pathlib import Path

import pandas as pd
import pytest

from meshsim.errors import ConfigError, MetricsError
from meshsim.file_ops import read_csv, read_json
from meshsim.harness import (
    ArrivalRecord,
    BatchConfig,
    RunData,
    ScenarioConfig,
    TrafficRecord,
    aggregate_summary,
    batch_from_dict,
    build_topology,
    check_conservation,
    compute_cdf,
    evaluate_acceptance,
    friendship_pairs,
    hop_distances,
    load_batch_config,
    load_runs,
    load_settings,
    next_hops_toward,
    paper_suite,
    preset,
    provision_ndn_routes,
    publish_schedule,
    report,
    run_batch,
    run_directory,
    run_many_to_one,
    run_one_to_many,
    run_scenario,
    success_rate,
    summary_row,
    write_run,
)
from meshsim.harness.acceptance import (
    check_comparative_load,
    check_delivery,
    check_line_cache_effect,
    check_mesh_cdf_shape,
    check_retry_tail,
)
from meshsim.harness.metrics import ARRIVAL_COLUMNS, TRAFFIC_COLUMNS, records_from_frame
from meshsim.harness.topology import interference_topology
from meshsim.ndn import bench_name, bench_prefix
from meshsim.sim_core import MS, SECOND, TopologyMatrix
from tests.conftest import make_ndn

CONFIG_DIR = Path(__file__).resolve().parent.parent / 'configs'


@pytest.mark.unit
class TestScenarioConfig:
    """Tests for scenario defaults and validation."""

    def test_pattern_defaults(self):
        cfg = ScenarioConfig()

        assert cfg.name == 'btmesh-full-mesh-many-to-one'
        assert cfg.publish_interval_us == 5 * SECOND
        assert cfg.publish_jitter_us == 2500 * MS
        assert cfg.mesh.initial_ttl == 7

    def test_one_to_many_line_defaults(self):
        cfg = ScenarioConfig(topology='line', pattern='one-to-many')

        assert cfg.publish_interval_us == 1 * SECOND
        assert cfg.publish_jitter_us == 500 * MS
        assert cfg.mesh.initial_ttl == 10
        assert cfg.ndn.request_lead_per_hop_us == 100 * MS
        assert cfg.ndn.request_jitter_us == 130 * MS

    def test_jitter_capped_by_interval(self):
        cfg = ScenarioConfig(publish_interval_us=100 * MS)

        assert cfg.publish_jitter_us == 50 * MS

    @pytest.mark.parametrize("overrides", [
        {"stack": "zigbee"},
        {"topology": "ring"},
        {"pattern": "all-to-all"},
        {"nodes": 1},
        {"items_per_producer": 0},
        {"radio": {"loss_mesh_adv": 1.5}},
        {"radio": {"interference": [[0, 12]]}},
        {"bticn": {"awake_window_us": 10 * SECOND}},
        {"bticn": {"long_lived_lifetime_us": 5 * SECOND}},
        {"publish_interval_us": 1 * SECOND, "publish_jitter_us": 600 * MS},
        {"ndn": {"request_jitter_us": -1}},
        {"ndn": {"request_lead_per_hop_us": -5}},
        {"radio": {"colour": "blue"}},
        {"radio": 5},
        {"colour": "blue"},
    ])
    def test_invalid_configs(self, overrides):
        with pytest.raises(ConfigError):
            ScenarioConfig.from_dict(overrides)

    def test_dict_round_trip(self):
        cfg = ScenarioConfig.from_dict({"stack": "ndn", "topology": "line", "nodes": 5,
                                        "radio": {"loss_dot154": 0.1}})

        assert ScenarioConfig.from_dict(cfg.to_dict()) == cfg

    def test_with_seed_keeps_other_fields(self):
        cfg = ScenarioConfig(stack='ndn', seed=1)
        other = cfg.with_seed(9)

        assert other.seed == 9
        assert other.stack == 'ndn'
        assert cfg.seed == 1

    def test_protocol_params(self):
        cfg = ScenarioConfig.from_dict({"radio": {"max_retries": 2},
                                        "ndn": {"cs_capacity": 5},
                                        "mesh": {"adv_events": 3}})

        assert cfg.csma_params().max_retries == 2
        assert cfg.ndn_params().cs_capacity == 5
        assert cfg.mesh_params().adv_events == 3
        assert cfg.mesh_params().initial_ttl == 7

    def test_friendship_pairs(self):
        assert friendship_pairs(ScenarioConfig(stack='bticn', nodes=4)) == [(0, 1), (0, 2), (0, 3)]
        assert friendship_pairs(ScenarioConfig(stack='bticn', topology='line', nodes=4)) == [(2, 3)]
        explicit = ScenarioConfig.from_dict({"stack": "bticn", "nodes": 4,
                                             "bticn": {"friendships": [[1, 2]]}})
        assert friendship_pairs(explicit) == [(1, 2)]


@pytest.mark.unit
class TestBatchConfig:
    """Tests for batch documents and presets."""

    def test_defaults_merged_into_scenarios(self):
        document = {
            "defaults": {"nodes": 4, "radio": {"loss_mesh_adv": 0.1}},
            "scenarios": [
                {"name": "a", "radio": {"scan_window_us": 20000}},
                {"name": "b", "nodes": 6},
            ],
            "seeds": [3, 4],
        }

        batch = batch_from_dict(document)

        a, b = batch.scenarios
        assert (a.nodes, a.radio.loss_mesh_adv, a.radio.scan_window_us) == (4, 0.1, 20000)
        assert b.nodes == 6
        assert batch.seeds == [3, 4]
        assert [(j.name, j.seed) for j in batch.jobs()] == [("a", 3), ("a", 4), ("b", 3), ("b", 4)]

    def test_explicit_seeds_win(self):
        batch = batch_from_dict({"scenarios": [{"name": "a"}], "seeds": [1, 2]}, seeds=[7])

        assert batch.seeds == [7]

    def test_single_scenario_document(self):
        batch = batch_from_dict({"name": "solo", "stack": "ndn", "seed": 11})

        assert [s.name for s in batch.scenarios] == ["solo"]
        assert batch.seeds == [11]

    @pytest.mark.parametrize("document", [
        {"scenarios": [{"name": "a"}, {"name": "a"}]},
        {"scenarios": []},
        {"scenarios": [{"name": "a"}], "extra": 1},
        {"scenarios": [{"name": "a"}], "seeds": [-1]},
        {"scenarios": {"name": "a"}},
    ])
    def test_invalid_documents(self, document):
        with pytest.raises(ConfigError):
            batch_from_dict(document)

    def test_shipped_configs_load(self):
        suite = load_batch_config(CONFIG_DIR / 'paper_suite.json')
        line = load_batch_config(CONFIG_DIR / 'mesh_line.json')
        bticn = load_batch_config(CONFIG_DIR / 'bticn.json')

        assert len(suite.scenarios) == 8
        assert suite.seeds == [1, 2, 3]
        assert line.scenarios[0].mesh.initial_ttl == 12
        assert {s.stack for s in bticn.scenarios} == {'bticn'}

    def test_paper_suite_grid(self):
        suite = paper_suite(seeds=(1, 2))

        assert len(suite.scenarios) == 8
        assert len({s.name for s in suite.scenarios}) == 8
        assert {s.stack for s in suite.scenarios} == {'btmesh', 'ndn'}
        assert len(suite.jobs()) == 16
        assert all(s.nodes == 10 for s in suite.scenarios)

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            preset('everything')
        assert isinstance(preset('paper-suite'), BatchConfig)


@pytest.mark.unit
class TestSettings:
    """Tests for environment settings."""

    def test_from_environment(self, monkeypatch, temp_dir):
        monkeypatch.setenv('MESHSIM_OUTPUT_DIR', str(temp_dir))
        monkeypatch.setenv('MESHSIM_LOG_LEVEL', 'debug')
        monkeypatch.setenv('MESHSIM_WORKERS', '3')

        settings = load_settings(temp_dir / 'missing.env')

        assert settings.output_dir == temp_dir
        assert settings.log_level == 'DEBUG'
        assert settings.workers == 3

    def test_from_env_file(self, monkeypatch, temp_dir):
        for key in ('MESHSIM_OUTPUT_DIR', 'MESHSIM_LOG_LEVEL', 'MESHSIM_WORKERS'):
            monkeypatch.setenv(key, 'placeholder')
            monkeypatch.delenv(key)
        env_file = temp_dir / '.env'
        env_file.write_text("MESHSIM_WORKERS=4\nMESHSIM_OUTPUT_DIR=out\n")

        settings = load_settings(env_file)

        assert settings.workers == 4
        assert settings.output_dir == Path('out')
        assert settings.log_level == 'INFO'

    @pytest.mark.parametrize("value", ['many', '0'])
    def test_invalid_workers(self, monkeypatch, temp_dir, value):
        monkeypatch.setenv('MESHSIM_WORKERS', value)

        with pytest.raises(ConfigError):
            load_settings(temp_dir / 'missing.env')


@pytest.mark.unit
class TestTopology:
    """Tests for scenario topologies and route provisioning."""

    def test_build(self):
        assert len(build_topology('line', 10)) == 9
        assert len(build_topology('full-mesh', 10)) == 45
        with pytest.raises(ConfigError):
            build_topology('ring', 4)
        with pytest.raises(ConfigError):
            build_topology('line', 1)

    def test_next_hops(self):
        assert next_hops_toward(TopologyMatrix.line(4), 0) == {1: 0, 2: 1, 3: 2}
        assert next_hops_toward(TopologyMatrix.full_mesh(4), 2) == {0: 2, 1: 2, 3: 2}
        assert next_hops_toward(TopologyMatrix(3, [(0, 1)]), 0) == {1: 0}

    def test_hop_distances(self):
        assert hop_distances(TopologyMatrix.line(4), 0) == {0: 0, 1: 1, 2: 2, 3: 3}
        assert hop_distances(TopologyMatrix.full_mesh(4), 2) == {2: 0, 0: 1, 1: 1, 3: 1}
        assert hop_distances(TopologyMatrix(3, [(0, 1)]), 0) == {0: 0, 1: 1}

    def test_interference_topology(self):
        assert interference_topology(4, []) is None
        assert interference_topology(4, [[0, 2]]).pairs() == [(0, 2)]

    def test_provision_routes_along_line(self):
        _, _, ndn = make_ndn(TopologyMatrix.line(4))

        assert provision_ndn_routes(ndn, [0]) == 3
        assert ndn.node(3).fib.lookup(bench_name(0, 1)).faces == [ndn.node(3).face_to(2)]

    def test_provision_routes_via_gateway(self):
        _, _, ndn = make_ndn(TopologyMatrix.line(4))

        assert provision_ndn_routes(ndn, [3], via={3: 2}) == 3
        assert ndn.node(0).fib.lookup(bench_prefix(3)).faces == [ndn.node(0).face_to(1)]
        assert ndn.node(2).fib.lookup(bench_prefix(3)).faces == [ndn.node(2).face_to(3)]
        assert len(ndn.node(3).fib) == 0


def _record(latency_us=None, seq=1, consumer=0, start=1000):
    arrival = None if latency_us is None else start + latency_us
    return ArrivalRecord(producer=1, seq=seq, consumer=consumer, t_start_us=start,
                         t_arrival_us=arrival)


@pytest.mark.unit
class TestMetrics:
    """Tests for arrival records and statistics."""

    def test_record_fields(self):
        delivered = _record(2500)
        missing = _record()

        assert delivered.delivered and delivered.latency_us == 2500
        assert not missing.delivered and missing.latency_us is None
        assert missing.as_row()['t_arrival_us'] == ''
        assert list(delivered.as_row()) == ARRIVAL_COLUMNS

    def test_traffic_record(self):
        record = TrafficRecord(node=3, tx_original=5, tx_retransmission=2, rx=9)

        assert record.tx_total == 7
        assert list(record.as_row()) == TRAFFIC_COLUMNS

    def test_cdf(self):
        records = [_record(1000, seq=1), _record(2000, seq=2), _record(3000, seq=3), _record(seq=4)]

        cdf = compute_cdf(records)

        assert [lat for lat, _ in cdf] == [1000, 2000, 3000]
        assert [frac for _, frac in cdf] == pytest.approx([1 / 3, 2 / 3, 1.0])

    def test_cdf_needs_deliveries(self):
        with pytest.raises(MetricsError):
            compute_cdf([_record()])

    def test_success_rate(self):
        assert success_rate([_record(1), _record(1), _record()]) == pytest.approx(2 / 3)
        with pytest.raises(MetricsError):
            success_rate([])

    def test_summary_row(self):
        records = [_record(lat * MS, seq=lat) for lat in range(1, 101)]
        traffic = [TrafficRecord(0, 10, 5, 3), TrafficRecord(1, 1, 0, 8)]

        row = summary_row('s', 2, records, traffic)

        assert row == {'scenario': 's', 'seed': 2, 'success_rate': 1.0, 'p50_us': 50 * MS,
                       'p80_us': 80 * MS, 'p99_us': 99 * MS, 'total_tx': 16}

    def test_summary_row_without_deliveries(self):
        row = summary_row('s', 1, [_record(), _record(seq=2)], [])

        assert row['success_rate'] == 0.0
        assert (row['p50_us'], row['p80_us'], row['p99_us']) == ('', '', '')

    def test_aggregate_summary(self):
        rows = [
            {'scenario': 'a', 'seed': 1, 'success_rate': 1.0, 'p50_us': 10, 'p80_us': 20,
             'p99_us': 30, 'total_tx': 100},
            {'scenario': 'a', 'seed': 2, 'success_rate': 0.5, 'p50_us': 30, 'p80_us': 40,
             'p99_us': 50, 'total_tx': 300},
            {'scenario': 'b', 'seed': 1, 'success_rate': 0.0, 'p50_us': '', 'p80_us': '',
             'p99_us': '', 'total_tx': 7},
        ]

        aggregated = aggregate_summary(rows)

        assert [(r['scenario'], r['seed']) for r in aggregated] == [
            ('a', 'mean'), ('a', 'min'), ('a', 'max'), ('b', 'mean'), ('b', 'min'), ('b', 'max')]
        mean_a = aggregated[0]
        assert mean_a['success_rate'] == 0.75
        assert mean_a['total_tx'] == 200.0
        assert aggregated[3]['p50_us'] == ''
        assert aggregate_summary([]) == []

    def test_records_from_frame(self):
        frame = pd.DataFrame([_record(500).as_row(), _record(seq=2).as_row()])
        frame['t_arrival_us'] = pd.to_numeric(frame['t_arrival_us'], errors='coerce')

        records = records_from_frame(frame)

        assert records[0].latency_us == 500
        assert records[1].t_arrival_us is None
        with pytest.raises(MetricsError):
            records_from_frame(frame.drop(columns=['consumer']))


@pytest.mark.unit
class TestPublishSchedule:
    """Tests for publish instants."""

    def test_deterministic_and_bounded(self):
        cfg = ScenarioConfig(pattern='one-to-many', items_per_producer=50, seed=4)

        times = publish_schedule(cfg, 0)

        assert times == publish_schedule(cfg, 0)
        assert times != publish_schedule(cfg.with_seed(5), 0)
        for k, t in enumerate(times):
            centre = (k + 1) * SECOND
            assert centre - 500 * MS <= t <= centre + 500 * MS
        assert times == sorted(times)

    def test_without_jitter(self):
        cfg = ScenarioConfig(items_per_producer=3, publish_jitter_us=0)

        assert publish_schedule(cfg, 1) == [5 * SECOND, 10 * SECOND, 15 * SECOND]


def _small(**overrides):
    document = {"nodes": 3, "items_per_producer": 3, "seed": 5}
    document.update(overrides)
    return ScenarioConfig.from_dict(document)


@pytest.mark.integration
class TestScenarioRuns:
    """Small end-to-end runs of every stack."""

    @pytest.mark.parametrize("stack,topology,pattern", [
        ("btmesh", "full-mesh", "one-to-many"),
        ("btmesh", "line", "many-to-one"),
        ("ndn", "full-mesh", "many-to-one"),
        ("ndn", "line", "one-to-many"),
    ])
    def test_loss_free_runs_deliver_everything(self, stack, topology, pattern):
        result = run_scenario(_small(stack=stack, topology=topology, pattern=pattern))

        assert len(result.arrivals) == 6
        assert result.delivered == 6
        assert not result.partial
        assert check_conservation(result) == []
        assert all(r.latency_us > 0 for r in result.arrivals)

    def test_arrival_keys(self):
        result = run_scenario(_small(stack='ndn', pattern='one-to-many', nodes=4))

        keys = [(r.producer, r.seq, r.consumer) for r in result.arrivals]
        assert keys == [(0, seq, c) for seq in (1, 2, 3) for c in (1, 2, 3)]

    def test_bticn_sleepy_producers(self):
        cfg = _small(stack='bticn', pattern='many-to-one', items_per_producer=2)

        result = run_many_to_one(cfg)

        assert result.delivered == len(result.arrivals) == 4
        assert check_conservation(result) == []

    def test_bticn_sleepy_consumer(self):
        cfg = _small(stack='bticn', topology='line', pattern='one-to-many', items_per_producer=2)

        result = run_one_to_many(cfg)

        assert result.delivered == len(result.arrivals) == 4

    def test_mesh_line_cache_hits_for_ndn(self):
        result = run_scenario(_small(stack='ndn', topology='line', pattern='one-to-many', nodes=5))
        latencies = sorted(r.latency_us for r in result.arrivals if r.delivered)

        assert len(latencies) == 12
        assert latencies[0] < 20 * MS

    def test_far_consumers_request_first(self):
        result = run_scenario(_small(stack='ndn', topology='line', pattern='one-to-many', nodes=4))
        starts = {(r.seq, r.consumer): r.t_start_us for r in result.arrivals}

        assert result.delivered == 9
        for seq in (1, 2, 3):
            assert starts[(seq, 3)] < starts[(seq, 1)]

    def test_wrong_pattern_rejected(self):
        with pytest.raises(ConfigError):
            run_many_to_one(_small(pattern='one-to-many'))
        with pytest.raises(ConfigError):
            run_one_to_many(_small(pattern='many-to-one'))

    def test_duration_limit_marks_partial(self):
        cfg = _small(stack='ndn', pattern='many-to-one', duration_limit_us=1 * SECOND)

        result = run_scenario(cfg)

        assert result.partial
        assert result.delivered == 0
        assert result.end_time_us <= 1 * SECOND

    def test_same_seed_same_run(self):
        cfg = _small(stack='btmesh', pattern='one-to-many')

        first, second = run_scenario(cfg), run_scenario(cfg)
        third = run_scenario(cfg.with_seed(6))

        assert first.digest == second.digest
        assert first.arrivals == second.arrivals
        assert first.traffic == second.traffic
        assert first.digest != third.digest

    def test_identical_output_bytes(self, temp_dir):
        cfg = _small(stack='ndn', topology='line', pattern='one-to-many')

        first = write_run(run_scenario(cfg), temp_dir / 'a')
        second = write_run(run_scenario(cfg), temp_dir / 'b')

        for filename in ('arrivals.csv', 'traffic.csv', 'cdf.csv', 'manifest.json'):
            assert (first / filename).read_bytes() == (second / filename).read_bytes()


@pytest.mark.integration
class TestBatchAndReport:
    """Tests for run directories, batches and reports."""

    def test_write_run_layout(self, temp_dir):
        cfg = _small(name='tiny/mesh', stack='btmesh', pattern='one-to-many')
        result = run_scenario(cfg)

        directory = write_run(result, run_directory(temp_dir, cfg))

        assert directory == temp_dir / 'tiny_mesh' / 'seed-5'
        manifest = read_json(directory / 'manifest.json')
        assert manifest['scenario'] == 'tiny/mesh'
        assert manifest['trace_digest'] == result.digest
        assert manifest['items'] == 6
        assert manifest['config']['nodes'] == 3
        arrivals = read_csv(directory / 'arrivals.csv')
        assert list(arrivals.columns) == ARRIVAL_COLUMNS
        assert len(arrivals) == 6
        assert list(read_csv(directory / 'traffic.csv')['node']) == [0, 1, 2]

    def test_empty_cdf_when_nothing_delivered(self, temp_dir):
        cfg = _small(stack='ndn', pattern='many-to-one', duration_limit_us=1 * SECOND)

        directory = write_run(run_scenario(cfg), temp_dir / 'run')

        assert (directory / 'cdf.csv').read_text() == "latency_us,cumulative_fraction\n"

    def test_batch_then_report(self, temp_dir):
        batch = batch_from_dict({
            "defaults": {"nodes": 3, "items_per_producer": 2, "pattern": "one-to-many"},
            "scenarios": [{"name": "mesh", "stack": "btmesh"}, {"name": "ndn", "stack": "ndn"}],
            "seeds": [1, 2],
        })

        outcome = run_batch(batch, temp_dir)

        assert outcome.ok
        assert len(outcome.rows) == 4
        summary = read_csv(temp_dir / 'summary.csv')
        assert list(summary['seed'].astype(str)) == [
            "1", "2", "1", "2", "mean", "min", "max", "mean", "min", "max"]

        reported = report(temp_dir, check=True)

        assert sorted(reported.rows, key=lambda r: (r['scenario'], r['seed'])) == sorted(
            outcome.rows, key=lambda r: (r['scenario'], r['seed']))
        verdicts = {v.criterion: v for v in reported.verdicts}
        assert verdicts[5].passed is True
        assert verdicts[6].passed is True
        assert verdicts[2].passed is None
        assert verdicts[4].passed is None
        document = json.loads((temp_dir / 'acceptance.json').read_text())
        assert [c['criterion'] for c in document['criteria']] == [2, 3, 4, 5, 6]
        assert reported.accepted is True

    def test_failed_run_reported(self, temp_dir, monkeypatch):
        def explode(job):
            raise RuntimeError("boom")

        monkeypatch.setattr('meshsim.harness.batch.execute_job', explode)
        outcome = run_batch(batch_from_dict({"name": "x", "nodes": 3}), temp_dir)

        assert not outcome.ok
        assert outcome.failures == ["x seed 1: RuntimeError: boom"]

    def test_report_without_runs(self, temp_dir):
        with pytest.raises(MetricsError):
            load_runs(temp_dir)


def _run_data(stack, topology, pattern, latencies_us, seed=1, traffic=None, missing=0):
    records = [ArrivalRecord(1, i + 1, 0, 0, lat) for i, lat in enumerate(latencies_us)]
    records += [ArrivalRecord(1, len(records) + i + 1, 0, 0, None) for i in range(missing)]
    arrivals = pd.DataFrame([r.as_row() for r in records], columns=ARRIVAL_COLUMNS)
    traffic = traffic or {0: 10, 1: 10}
    traffic_frame = pd.DataFrame(
        [TrafficRecord(node, tx, 0, 0).as_row() for node, tx in traffic.items()],
        columns=TRAFFIC_COLUMNS)
    manifest = {'scenario': f"{stack}-{topology}-{pattern}", 'seed': seed, 'stack': stack,
                'topology': topology, 'pattern': pattern}
    return RunData(Path('.'), manifest, arrivals, traffic_frame)


@pytest.mark.unit
class TestAcceptance:
    """Acceptance checks on synthetic runs."""

    def test_not_applicable_without_runs(self):
        verdicts = evaluate_acceptance([])

        assert [v.passed for v in verdicts] == [None] * 5

    def test_mesh_cdf_shape(self):
        good = [5 * MS] * 80 + [(20 + 5 * i) * MS for i in range(20)]
        slow = [5 * MS] * 80 + [(100 + 5 * i) * MS for i in range(20)]

        assert check_mesh_cdf_shape(
            [_run_data('btmesh', 'full-mesh', 'many-to-one', good)]).passed is True
        assert check_mesh_cdf_shape(
            [_run_data('btmesh', 'full-mesh', 'many-to-one', slow)]).passed is False

    def test_line_cache_effect(self):
        mostly_cached = [500] * 80 + [40 * MS] * 20
        rarely_cached = [500] * 50 + [40 * MS] * 50

        assert check_line_cache_effect(
            [_run_data('ndn', 'line', 'one-to-many', mostly_cached)]).passed is True
        assert check_line_cache_effect(
            [_run_data('ndn', 'line', 'one-to-many', rarely_cached)]).passed is False

    def test_retry_tail(self):
        aligned = [5 * MS] * 95 + [1010 * MS] * 4 + [2100 * MS]
        misaligned = [5 * MS] * 95 + [1010 * MS] * 4 + [1600 * MS]

        assert check_retry_tail(
            [_run_data('ndn', 'full-mesh', 'one-to-many', aligned)]).passed is True
        assert check_retry_tail(
            [_run_data('ndn', 'full-mesh', 'one-to-many', misaligned)]).passed is False

    def test_share_checks_skip_small_runs(self):
        tiny = [5 * MS, 30 * MS, 40 * MS]

        verdict = check_retry_tail([_run_data('ndn', 'full-mesh', 'one-to-many', tiny)])

        assert verdict.passed is None
        assert 'too few' in verdict.detail
        assert check_line_cache_effect(
            [_run_data('ndn', 'line', 'one-to-many', tiny)]).passed is None
        assert check_mesh_cdf_shape(
            [_run_data('btmesh', 'full-mesh', 'many-to-one', tiny)]).passed is None

    def test_small_runs_ignored_next_to_large_ones(self):
        tiny = _run_data('ndn', 'full-mesh', 'one-to-many', [900 * MS] * 3, seed=2)
        aligned = _run_data('ndn', 'full-mesh', 'one-to-many',
                            [5 * MS] * 95 + [1010 * MS] * 5)

        verdict = check_retry_tail([aligned, tiny])

        assert verdict.passed is True
        assert 'seed 2' in verdict.detail

    def test_delivery(self):
        complete = _run_data('ndn', 'line', 'one-to-many', [1, 2, 3])
        lossy = _run_data('ndn', 'line', 'one-to-many', [1, 2], seed=2, missing=1)

        assert check_delivery([complete]).passed is True
        verdict = check_delivery([complete, lossy])
        assert verdict.passed is False
        assert 'seed 2' in verdict.detail

    def test_comparative_load(self):
        mesh = _run_data('btmesh', 'full-mesh', 'one-to-many', [1], traffic={0: 300, 1: 300})
        ndn = _run_data('ndn', 'full-mesh', 'one-to-many', [1], traffic={0: 40, 1: 20})
        heavy_ndn = _run_data('ndn', 'full-mesh', 'one-to-many', [1], traffic={0: 900, 1: 20})

        assert check_comparative_load([mesh, ndn]).passed is True
        assert check_comparative_load([mesh, heavy_ndn]).passed is False

    def test_line_producer_lighter_than_relay(self):
        balanced = _run_data('ndn', 'line', 'one-to-many', [1], traffic={0: 10, 1: 30, 2: 20})
        producer_heavy = _run_data('ndn', 'line', 'one-to-many', [1],
                                   traffic={0: 50, 1: 30, 2: 20})

        assert check_comparative_load([balanced]).passed is True
        assert check_comparative_load([producer_heavy]).passed is False


@pytest.fixture(scope='module')
def grid_runs(tmp_path_factory):
    """The eight-run comparison grid at full size, seed 1, read back from disk."""
    out_dir = tmp_path_factory.mktemp('grid')
    outcome = run_batch(paper_suite(seeds=(1,)), out_dir)
    assert outcome.ok, outcome.failures
    return {(r.stack, r.topology, r.pattern): r for r in load_runs(out_dir)}


@pytest.mark.integration
@pytest.mark.slow
class TestComparisonGrid:
    """Acceptance checks on real full-size runs."""

    def test_mesh_frame_arithmetic(self, grid_runs):
        run = grid_runs[('btmesh', 'full-mesh', 'one-to-many')]
        tx = {t.node: t.tx_total for t in run.traffic_records()}
        heard_all = {c for c in range(1, 10)
                     if sum(1 for r in run.records() if r.consumer == c and r.delivered) == 100}

        assert tx[0] == 1500
        assert heard_all
        assert all(tx[c] == 1500 for c in heard_all)

    def test_mesh_cdf_shape(self, grid_runs):
        verdict = check_mesh_cdf_shape([grid_runs[('btmesh', 'full-mesh', 'many-to-one')]])

        assert verdict.passed is True, verdict.detail

    def test_line_cache_effect(self, grid_runs):
        verdict = check_line_cache_effect([grid_runs[('ndn', 'line', 'one-to-many')]])

        assert verdict.passed is True, verdict.detail

    def test_retry_tail(self, grid_runs):
        verdict = check_retry_tail([grid_runs[('ndn', 'full-mesh', 'one-to-many')]])

        assert verdict.passed is True, verdict.detail

    def test_complete_delivery(self, grid_runs):
        verdict = check_delivery(list(grid_runs.values()))

        assert len(grid_runs) == 8
        assert verdict.passed is True, verdict.detail

    def test_comparative_load(self, grid_runs):
        verdict = check_comparative_load(list(grid_runs.values()))

        assert verdict.passed is True, verdict.detail
