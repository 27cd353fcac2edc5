import numpy as np

from hetsched.pipeline import (
    Composition,
    PipelineDescriptor,
    StageDescriptor,
    concurrent_cycles,
    pipeline_cycles,
    sequential_cycles,
)
from hetsched.simulator import simulate_pipeline
from helpers import random_pipeline


def stage(n, ii, lat, label="s"):
    return StageDescriptor(label, n, ii, lat)


class TestSimulateConcurrent:
    def test_two_stage_chain_matches_model_both_ways(self):
        p = PipelineDescriptor((stage(512, 1, 3, "a"), stage(256, 2, 9, "b")), Composition.CONCURRENT, 1e8)
        trace = simulate_pipeline(p)
        assert trace.total_cycles == 1036
        assert concurrent_cycles(p).cycles == trace.total_cycles

    def test_single_iteration_stage(self):
        p = PipelineDescriptor((stage(1, 7, 2),), Composition.CONCURRENT, 1e8)
        assert simulate_pipeline(p).total_cycles == 9

    def test_empty(self):
        p = PipelineDescriptor((), Composition.CONCURRENT, 1e8)
        trace = simulate_pipeline(p)
        assert trace.total_cycles == 0
        assert trace.stages == ()

    def test_starts_paced_by_bottleneck_beat(self):
        p = PipelineDescriptor((stage(4, 1, 3, "a"), stage(4, 2, 9, "b")), Composition.CONCURRENT, 1e8)
        trace = simulate_pipeline(p)
        a, b = trace.stages
        assert a.operative_interval == b.operative_interval == 2
        assert a.starts.tolist() == [0, 2, 4, 6]
        assert b.starts.tolist() == [3, 5, 7, 9]  # arrives after a's latency

    def test_dataflow_causality(self):
        rng = np.random.default_rng(41)
        for _ in range(100):
            p = random_pipeline(rng, max_iterations=200, composition=Composition.CONCURRENT)
            trace = simulate_pipeline(p)
            for up, down in zip(trace.stages, trace.stages[1:]):
                shared = min(up.starts.size, down.starts.size)
                finishes = up.starts[:shared] + up.iteration_latency
                assert np.all(down.starts[:shared] >= finishes)


class TestSimulateSequential:
    def test_steps_run_back_to_back(self):
        p = PipelineDescriptor((stage(64, 1, 10, "x"), stage(4096, 1, 20, "mv")), Composition.SEQUENTIAL, 1e8)
        trace = simulate_pipeline(p)
        assert trace.total_cycles == 4190
        x, mv = trace.stages
        assert x.starts[0] == 0
        assert mv.starts[0] == 74  # 64 issue slots + 10 fill
        assert mv.starts[-1] == 74 + 4095

    def test_own_ii_spacing(self):
        p = PipelineDescriptor((stage(5, 3, 1, "a"), stage(4, 2, 0, "b")), Composition.SEQUENTIAL, 1e8)
        trace = simulate_pipeline(p)
        a, b = trace.stages
        assert np.all(np.diff(a.starts) == 3)
        assert np.all(np.diff(b.starts) == 2)
        assert b.starts[0] == 5 * 3 + 1


class TestModelEquivalence:
    def test_random_pipelines_match_exactly(self):
        rng = np.random.default_rng(42)
        for _ in range(300):
            p = random_pipeline(rng, max_iterations=2000)
            assert simulate_pipeline(p).total_cycles == pipeline_cycles(p).cycles

    def test_zero_iteration_stages(self):
        p = PipelineDescriptor((stage(0, 3, 5, "a"), stage(0, 1, 2, "b")), Composition.CONCURRENT, 1e8)
        assert simulate_pipeline(p).total_cycles == concurrent_cycles(p).cycles == 7
        q = PipelineDescriptor(p.stages, Composition.SEQUENTIAL, 1e8)
        assert simulate_pipeline(q).total_cycles == sequential_cycles(q).cycles == 7


class TestTraceExport:
    def test_records_and_csv(self, tmp_path):
        p = PipelineDescriptor((stage(3, 2, 4, "read"), stage(2, 1, 1, "sum")), Composition.SEQUENTIAL, 1e8)
        trace = simulate_pipeline(p)
        rows = list(trace.records())
        assert rows[0] == ("read", 0, 0, 4)
        assert rows[-1] == ("sum", 1, 11, 12)
        path = tmp_path / "trace.csv"
        trace.write_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "stage,iteration,start_cycle,finish_cycle"
        assert lines[1] == "read,0,0,4"
        assert len(lines) == 1 + 3 + 2

    def test_finish_is_start_plus_latency(self):
        rng = np.random.default_rng(43)
        p = random_pipeline(rng, max_iterations=50)
        for st in simulate_pipeline(p).stages:
            for i, start, finish in st.records():
                assert finish - start == st.iteration_latency

    def test_spacing_is_operative_interval(self):
        rng = np.random.default_rng(44)
        for _ in range(50):
            p = random_pipeline(rng, max_iterations=200)
            for st in simulate_pipeline(p).stages:
                if st.starts.size > 1:
                    assert np.all(np.diff(st.starts) == st.operative_interval)
