"""Scenario generator tests: determinism, label soundness, error paths."""

from __future__ import annotations

from collections import Counter

import pytest

from cellclean.filtering import FilterConfig
from cellclean.geo import GeoPoint, coverage_fraction, great_circle_distance, iou
from cellclean.model import dump_coverage_plan, dump_events, dump_gps
from cellclean.synth import (
    LABEL_CLEAN,
    LABEL_HOP,
    LABEL_PINGPONG,
    GenerationError,
    ScenarioConfig,
    dump_labels,
    generate,
    straight_east_path,
)

START = GeoPoint(57.0, 10.0)


def noisy_config(seed: int = 7, length_m: float = 60_000.0) -> ScenarioConfig:
    return ScenarioConfig(
        seed=seed,
        waypoints=straight_east_path(START, length_m),
        pingpong_rate=0.10,
        hop_rate=0.05,
        hop_min_distance_m=20_000.0,
    )


class TestDeterminism:
    def test_equal_seeds_give_byte_identical_scenarios(self):
        a, b = generate(noisy_config()), generate(noisy_config())
        assert dump_coverage_plan(a.plan) == dump_coverage_plan(b.plan)
        assert dump_events(a.events) == dump_events(b.events)
        assert dump_gps(a.gps) == dump_gps(b.gps)
        assert dump_labels(a) == dump_labels(b)

    def test_label_counts_are_reproducible(self):
        counts = [Counter(generate(noisy_config()).labels) for _ in range(2)]
        assert counts[0] == counts[1]
        assert counts[0][LABEL_PINGPONG] > 0 and counts[0][LABEL_HOP] > 0

    def test_different_seeds_differ(self):
        a = generate(noisy_config(seed=1))
        b = generate(noisy_config(seed=2))
        assert dump_events(a.events) != dump_events(b.events) or a.labels != b.labels


class TestZeroNoise:
    def test_all_events_clean_and_covered(self):
        scenario = generate(ScenarioConfig(seed=4, waypoints=straight_east_path(START, 30_000.0)))
        assert set(scenario.labels) == {LABEL_CLEAN}
        for event, position in zip(scenario.events, scenario.positions):
            coverage = scenario.plan.get(event.cell_id).coverage
            assert great_circle_distance(coverage.center, position) <= coverage.radius

    def test_every_position_has_two_covering_cells(self):
        scenario = generate(ScenarioConfig(seed=4, waypoints=straight_east_path(START, 30_000.0)))
        for position in scenario.positions:
            covering = sum(
                1
                for c in scenario.plan
                if great_circle_distance(c.coverage.center, position) <= c.coverage.radius
            )
            assert covering >= 2


class TestLabelSoundness:
    def test_pingpong_events_form_fast_aba_triples(self):
        scenario = generate(noisy_config(seed=11, length_m=300_000.0))
        thresholds = FilterConfig()
        events = scenario.events.events
        found = 0
        for i, label in enumerate(scenario.labels):
            if label != LABEL_PINGPONG:
                continue
            found += 1
            before, bounce, after = events[i - 1], events[i], events[i + 1]
            assert before.cell_id == after.cell_id != bounce.cell_id
            assert (bounce.timestamp - before.timestamp).total_seconds() < 600.0
            assert (after.timestamp - bounce.timestamp).total_seconds() < 600.0
            a = scenario.plan.get(before.cell_id).coverage
            b = scenario.plan.get(bounce.cell_id).coverage
            assert 0.0 < iou(a, b) < thresholds.similarity_threshold
            assert coverage_fraction(a, b) <= thresholds.covered_threshold
            assert coverage_fraction(b, a) <= thresholds.covered_threshold
        assert found > 0

    def test_hop_cells_are_far_from_the_agent(self):
        scenario = generate(noisy_config(seed=11, length_m=300_000.0))
        found = 0
        for event, label, position in zip(scenario.events, scenario.labels, scenario.positions):
            if label != LABEL_HOP:
                continue
            found += 1
            coverage = scenario.plan.get(event.cell_id).coverage
            assert great_circle_distance(coverage.center, position) >= 20_000.0
        assert found > 0

    def test_hops_imply_implausible_speed_from_their_predecessor(self):
        # Hand arithmetic on the generated gaps: a hop centroid sits 20 km
        # from the agent while the previous event's cell is local, so the
        # implied centroid speed always clears 25 m/s (90 km/h).
        scenario = generate(noisy_config(seed=11, length_m=300_000.0))
        events = scenario.events.events
        for i, label in enumerate(scenario.labels):
            if label != LABEL_HOP:
                continue
            gap = (events[i].timestamp - events[i - 1].timestamp).total_seconds()
            assert 0.0 < gap <= 600.0
            d = great_circle_distance(
                scenario.plan.get(events[i - 1].cell_id).coverage.center,
                scenario.plan.get(events[i].cell_id).coverage.center,
            )
            assert d / gap > 25.0

    def test_first_event_is_always_clean(self):
        for seed in range(5):
            scenario = generate(noisy_config(seed=seed))
            assert scenario.labels[0] == LABEL_CLEAN


class TestGenerationErrors:
    def test_sparse_plan_raises_naming_the_position(self):
        cfg = ScenarioConfig(
            seed=1,
            waypoints=straight_east_path(START, 30_000.0),
            cell_spacing_m=10_000.0,
            cell_radius_range=(1000.0, 1200.0),
        )
        with pytest.raises(GenerationError, match=r"no cell covers the path at t=0 s \(57\.0"):
            generate(cfg)

    def test_short_path_cannot_satisfy_hop_distance(self):
        cfg = ScenarioConfig(
            seed=3,
            waypoints=straight_east_path(START, 10_000.0),
            hop_rate=0.9,
            hop_min_distance_m=20_000.0,
        )
        with pytest.raises(GenerationError, match="no plan cell at least 20000 m"):
            generate(cfg)

    def test_config_validation(self):
        with pytest.raises(ValueError, match="waypoints"):
            ScenarioConfig(seed=0, waypoints=(START,))
        with pytest.raises(ValueError, match="sum below 1"):
            ScenarioConfig(
                seed=0,
                waypoints=straight_east_path(START, 1000.0),
                pingpong_rate=0.6,
                hop_rate=0.5,
            )
        with pytest.raises(ValueError, match="cell_radius_range"):
            ScenarioConfig(
                seed=0,
                waypoints=straight_east_path(START, 1000.0),
                cell_radius_range=(500.0, 100.0),
            )


class TestPathShapes:
    def test_multi_waypoint_path_generates(self):
        waypoints = (GeoPoint(57.0, 10.0), GeoPoint(57.1, 10.2), GeoPoint(57.0, 10.4))
        scenario = generate(ScenarioConfig(seed=2, waypoints=waypoints))
        assert len(scenario.events) > 0
        assert len(scenario.plan) > len(scenario.events) // 2

    def test_straight_east_path_has_requested_length(self):
        a, b = straight_east_path(START, 50_000.0)
        assert great_circle_distance(a, b) == pytest.approx(50_000.0, rel=1e-3)
