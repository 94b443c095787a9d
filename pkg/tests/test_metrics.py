"""Episode counters and aggregate metrics, checked against naive recomputation."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import line_edges, line_positions, make_human, make_scenario
from humnav.experts import OptimalExpert, run_policy
from humnav.metrics import EpisodeCounters, MetricsError, aggregate, episode_counters
from humnav.sim import Episode, EpisodeSpec


def brute_force_aggregate(counters, success_radius=3.0):
    """Independent naive recomputation of every aggregate metric."""
    L = len(counters)
    affected = [ec for ec in counters if ec.affected]
    beta = len(affected) / L
    tcr = 0.0
    tcr_raw = 0.0
    ne = 0.0
    sr = 0
    sr_raw = 0
    sr_goal = 0
    cr_num = 0.0
    cr_raw_num = 0.0
    for ec in counters:
        cc = ec.c - ec.a_crit
        tcr += cc / L
        tcr_raw += ec.c / L
        ne += ec.d / L
        if cc == 0 and ec.d <= success_radius:
            sr += 1
        if ec.c == 0 and ec.d <= success_radius:
            sr_raw += 1
        if ec.d <= success_radius:
            sr_goal += 1
        cr_num += min(cc, 1)
        cr_raw_num += min(ec.c, 1)
    out = {
        "TCR": tcr, "TCR_raw": tcr_raw, "NE": ne,
        "SR": sr / L, "SR_raw": sr_raw / L, "SR_goal": sr_goal / L,
        "beta": beta,
    }
    if beta > 0:
        out["CR"] = cr_num / (beta * L)
        out["CR_raw"] = cr_raw_num / (beta * L)
    else:
        out["CR"] = out["CR_raw"] = None
    return out


counters_strategy = st.lists(
    st.tuples(st.integers(0, 5), st.integers(0, 5), st.floats(0, 40), st.booleans()).map(
        lambda t: EpisodeCounters(c=max(t[0], t[1]), a_crit=min(t[0], t[1]), d=t[2],
                                  affected=t[3] or max(t[0], t[1]) - min(t[0], t[1]) > 0)
    ),
    min_size=1, max_size=30,
)


class TestEpisodeCounters:
    def test_invariants_enforced(self):
        with pytest.raises(MetricsError):
            EpisodeCounters(c=1, a_crit=2, d=0.0, affected=True)
        with pytest.raises(MetricsError):
            EpisodeCounters(c=0, a_crit=0, d=-1.0, affected=False)

    def test_clean_run_to_goal(self):
        s = make_scenario(line_positions(3), line_edges(3), sid="clean")
        spec = EpisodeSpec(id="e", instruction="", start_node="n0", start_heading=90,
                           start_elevation=0, goal="n2", reference_path=("n0", "n1", "n2"))
        ep = Episode(s, spec)
        log = run_policy(ep, OptimalExpert())
        ec = episode_counters(log, spec, s)
        assert ec.c == 0
        assert ec.a_crit == 0
        assert ec.d == 0.0
        assert not ec.affected

    def test_collision_at_critical_occupied_node_attributed(self):
        # Stationary human parked on the middle node of a chain: every hop on
        # a chain is critical, so the collision there counts as a_crit.
        s = make_scenario(line_positions(3), line_edges(3),
                          [make_human("h0", "n1", [(4.0, 0.0, 0.0)])], sid="crit")
        spec = EpisodeSpec(id="e", instruction="", start_node="n0", start_heading=90,
                           start_elevation=0, goal="n2", reference_path=("n0", "n1", "n2"))
        ep = Episode(s, spec)
        log = run_policy(ep, OptimalExpert())
        ec = episode_counters(log, spec, s)
        assert ec.c == 1
        assert ec.a_crit == 1
        assert ec.affected

    def test_collision_far_from_path_not_attributed(self):
        # Human paces far north; the agent detours up to meet it, but the
        # collision happens nowhere near the reference path's critical nodes.
        pos = dict(line_positions(3))
        pos["far"] = (0.0, 30.0, 0.0)
        edges = line_edges(3) + [("n0", "far")]
        s = make_scenario(pos, edges, [make_human("h0", "far", [(0.0, 30.0, 0.0)])],
                          sid="offpath")
        spec = EpisodeSpec(id="e", instruction="", start_node="n0", start_heading=0,
                           start_elevation=0, goal="far", reference_path=("n0", "far"))
        ep = Episode(s, spec, mode="panoramic")
        ep.reset()
        ep.step("forward", "far")
        ep.step("stop")
        ec = episode_counters(ep.log, EpisodeSpec(
            id="e2", instruction="", start_node="n0", start_heading=0,
            start_elevation=0, goal="n2", reference_path=("n0", "n1", "n2")), s)
        assert ec.c == 1
        assert ec.a_crit == 0

    def test_incomplete_log_rejected(self):
        s = make_scenario(line_positions(3), line_edges(3), sid="open")
        spec = EpisodeSpec(id="e", instruction="", start_node="n0", start_heading=90,
                           start_elevation=0, goal="n2", reference_path=("n0", "n1", "n2"))
        ep = Episode(s, spec)
        ep.reset()
        ep.step("left")
        with pytest.raises(MetricsError):
            episode_counters(ep.log, spec, s)


class TestAggregate:
    def test_worked_example(self):
        counters = [
            EpisodeCounters(c=2, a_crit=1, d=1.0, affected=True),
            EpisodeCounters(c=0, a_crit=0, d=0.5, affected=False),
        ]
        rep = aggregate(counters)
        assert rep.TCR == pytest.approx(0.5)
        assert rep.beta == pytest.approx(0.5)
        assert rep.CR == pytest.approx(1.0)
        assert rep.NE == pytest.approx(0.75)
        assert rep.SR == pytest.approx(0.5)
        assert rep.L == 2

    def test_all_clean(self):
        counters = [EpisodeCounters(c=0, a_crit=0, d=1.0, affected=False)] * 3
        rep = aggregate(counters)
        assert rep.TCR == 0.0
        assert rep.SR == 1.0
        assert rep.SR == rep.SR_raw
        assert rep.CR is None

    def test_empty_rejected(self):
        with pytest.raises(MetricsError):
            aggregate([])

    def test_beta_zero_with_collisions_rejected(self):
        with pytest.raises(MetricsError):
            aggregate([EpisodeCounters(c=1, a_crit=0, d=0.0, affected=False)])

    @given(counters_strategy)
    @settings(max_examples=200, deadline=None)
    def test_correction_is_monotone(self, counters):
        rep = aggregate(counters)
        assert rep.TCR <= rep.TCR_raw + 1e-12
        assert rep.SR >= rep.SR_raw - 1e-12
        if rep.CR is not None:
            assert rep.CR <= rep.CR_raw + 1e-12

    @given(counters_strategy)
    @settings(max_examples=200, deadline=None)
    def test_matches_brute_force(self, counters):
        rep = aggregate(counters)
        expect = brute_force_aggregate(counters)
        for key, val in expect.items():
            got = getattr(rep, key)
            if val is None:
                assert got is None
            else:
                assert got == pytest.approx(val, abs=1e-12)

    @given(counters_strategy)
    @settings(max_examples=100, deadline=None)
    def test_ranges(self, counters):
        rep = aggregate(counters)
        assert rep.TCR >= 0.0
        assert rep.NE >= 0.0
        assert rep.NE == rep.NE_raw
        for v in (rep.SR, rep.SR_raw, rep.SR_goal):
            assert 0.0 <= v <= 1.0
        if rep.CR is not None:
            assert 0.0 <= rep.CR <= 1.0 / rep.beta + 1e-12

    def test_beta_one_equals_instance_fraction(self):
        counters = [
            EpisodeCounters(c=2, a_crit=0, d=0.0, affected=True),
            EpisodeCounters(c=0, a_crit=0, d=0.0, affected=True),
            EpisodeCounters(c=3, a_crit=3, d=0.0, affected=True),
        ]
        rep = aggregate(counters)
        assert rep.beta == 1.0
        assert rep.CR == pytest.approx(1 / 3)
