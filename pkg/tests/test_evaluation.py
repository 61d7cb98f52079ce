"""Association, ground-truth membership, and precision/recall tests."""

from __future__ import annotations

import pytest

from cellclean.evaluation import (
    GroundTruthConfig,
    associate,
    build_ground_truth,
    distance_profile,
    evaluate,
)
from cellclean.model import GpsFix

from .helpers import at, cell, equator_point, ev, plan_of, traj


def fix(seconds: float, x_m: float = 0.0) -> GpsFix:
    return GpsFix(at(seconds), equator_point(x_m))


class TestAssociate:
    def test_nearest_fix_wins(self):
        out = associate(traj(ev(100, "A")), (fix(90), fix(130)), GroundTruthConfig())
        assert out[0].fix == fix(90)

    def test_fix_beyond_gap_is_dropped(self):
        out = associate(traj(ev(100, "A")), (fix(1000),), GroundTruthConfig())
        assert out[0].fix is None and out[0].in_truth is False

    def test_equidistant_tie_prefers_earlier_fix(self):
        out = associate(traj(ev(100, "A")), (fix(90), fix(110)), GroundTruthConfig())
        assert out[0].fix == fix(90)

    def test_empty_gps_means_every_association_is_fixless(self):
        out = associate(traj(ev(0, "A"), ev(60, "B")), (), GroundTruthConfig())
        assert all(a.fix is None for a in out)

    def test_gap_boundary_is_inclusive(self):
        out = associate(traj(ev(300, "A")), (fix(0),), GroundTruthConfig())
        assert out[0].fix == fix(0)


class TestGroundTruth:
    PLAN = plan_of(cell("A", 0.0, 1000.0))

    def membership(self, fix_x: float, factor: float) -> bool:
        cfg = GroundTruthConfig(radius_factor=factor)
        associations = associate(traj(ev(0, "A")), (fix(0, fix_x),), cfg)
        truth = build_ground_truth(associations, self.PLAN, cfg)
        return truth.associations[0].in_truth

    def test_fix_at_centroid_is_in_truth_for_both_factors(self):
        assert self.membership(0.0, 1.0)
        assert self.membership(0.0, 1.2)

    def test_distance_1_1_r_is_only_in_the_relaxed_truth(self):
        assert not self.membership(1100.0, 1.0)
        assert self.membership(1100.0, 1.2)

    def test_distance_1_3_r_is_out_of_both(self):
        assert not self.membership(1300.0, 1.0)
        assert not self.membership(1300.0, 1.2)

    def test_cell_missing_from_plan_is_never_in_truth(self):
        cfg = GroundTruthConfig()
        associations = associate(traj(ev(0, "Z")), (fix(0),), cfg)
        truth = build_ground_truth(associations, self.PLAN, cfg)
        assert truth.associations[0].in_truth is False
        assert truth.truth_cells == frozenset()

    def test_strict_truth_is_a_subset_of_relaxed_truth(self):
        plan = plan_of(cell("A", 0.0, 1000.0), cell("B", 5000.0, 1000.0))
        events = traj(ev(0, "A"), ev(60, "B"))
        fixes = (fix(0, 0.0), fix(60, 3900.0))  # B's fix sits at 1.1 r
        strict = build_ground_truth(
            associate(events, fixes, GroundTruthConfig(1.0)), plan, GroundTruthConfig(1.0)
        )
        relaxed = build_ground_truth(
            associate(events, fixes, GroundTruthConfig(1.2)), plan, GroundTruthConfig(1.2)
        )
        assert strict.truth_cells == frozenset({"A"})
        assert relaxed.truth_cells == frozenset({"A", "B"})
        assert strict.truth_cells <= relaxed.truth_cells

    def test_config_validation(self):
        with pytest.raises(ValueError):
            GroundTruthConfig(radius_factor=0.5)
        with pytest.raises(ValueError):
            GroundTruthConfig(max_association_gap_s=0.0)


def sets_with(truth: int, filtered: int, matching: int):
    shared = {f"M{i}" for i in range(matching)}
    truth_cells = frozenset(shared | {f"T{i}" for i in range(truth - matching)})
    filter_cells = frozenset(shared | {f"F{i}" for i in range(filtered - matching)})
    return truth_cells, filter_cells


class TestEvaluate:
    def test_set_identities(self):
        truth_cells, filter_cells = sets_with(5, 4, 3)
        report = evaluate(truth_cells, filter_cells)
        assert report.matching_cells == truth_cells & filter_cells
        assert report.not_in_truth_cells == filter_cells - truth_cells
        assert report.not_in_filter_cells == truth_cells - filter_cells
        assert report.not_in_truth_cells | report.not_in_filter_cells == (
            truth_cells ^ filter_cells
        )
        assert report.precision == 3 / 4
        assert report.recall == 3 / 5

    def test_empty_filter_set_flags_undefined_precision(self):
        report = evaluate(frozenset({"A"}), frozenset())
        assert report.precision == 0.0 and not report.precision_defined
        assert report.recall == 0.0 and report.recall_defined

    def test_empty_truth_set_flags_undefined_recall(self):
        report = evaluate(frozenset(), frozenset({"A"}))
        assert report.recall == 0.0 and not report.recall_defined
        assert report.precision == 0.0 and report.precision_defined

    @pytest.mark.parametrize(
        "truth,filtered,matching,precision,recall",
        [
            (115, 131, 95, 0.725, 0.826),
            (128, 131, 106, 0.809, 0.828),
            (54, 54, 41, 0.759, 0.759),
            (58, 54, 43, 0.796, 0.741),
        ],
    )
    def test_reference_cardinalities_reproduce(self, truth, filtered, matching, precision, recall):
        truth_cells, filter_cells = sets_with(truth, filtered, matching)
        report = evaluate(truth_cells, filter_cells)
        assert report.precision == pytest.approx(precision, abs=5e-4)
        assert report.recall == pytest.approx(recall, abs=5e-4)


class TestDistanceProfile:
    PLAN = plan_of(cell("A", 0.0, 1000.0))

    def test_fix_at_centroid_yields_zero_distance_and_radius(self):
        associations = associate(traj(ev(0, "A")), (fix(0, 0.0),), GroundTruthConfig())
        points = distance_profile(associations, self.PLAN)
        assert len(points) == 1
        assert points[0].centroid_distance == pytest.approx(0.0, abs=1e-6)
        assert points[0].radius == 1000.0

    def test_cell_without_coverage_info_has_no_distance_or_radius(self):
        associations = associate(traj(ev(0, "Z")), (fix(0, 500.0),), GroundTruthConfig())
        points = distance_profile(associations, self.PLAN)
        assert len(points) == 1
        assert points[0].centroid_distance is None and points[0].radius is None

    def test_fixless_events_are_excluded(self):
        associations = associate(traj(ev(0, "A")), (), GroundTruthConfig())
        assert distance_profile(associations, self.PLAN) == ()
