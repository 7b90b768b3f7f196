import pytest

from platoon_coord import (
    LeaderType,
    NoFeasibleScheduleError,
    RouteParams,
    ScenarioConfig,
    evaluate_platoon,
    generate,
    leader_feasible,
    prepare_fleet,
    solve_dp_ls,
    solve_dp_nls,
)
from platoon_coord.dp import run_dp
from conftest import FOLLOW_NEED, REF_ECON, REF_ROUTE, et, ft, prepare
from checks import assert_solution_valid

APPROX = dict(abs=1e-9)


class TestLeaderFeasible:
    def test_topped_up_electric_can_lead(self):
        cmin = (FOLLOW_NEED - 30.0) / 1.07
        prepared = prepare([et(1, 100.0 - cmin, soc=30.0), ft(2, 120.0)])
        p = evaluate_platoon(prepared, LeaderType.FUEL, REF_ROUTE, REF_ECON)
        # 20 minutes of top-up lift the ET to 78.304, above the 67.2 bound.
        assert p.ledger[0].departure_soc == pytest.approx(78.304, **APPROX)
        assert leader_feasible(p, LeaderType.ELECTRIC)
        assert leader_feasible(p, LeaderType.FUEL)

    def test_low_soc_electric_cannot_lead(self):
        prepared = prepare([ft(1, 10.0), et(2, 12.0, soc=60.0)])
        p = evaluate_platoon(prepared, LeaderType.FUEL, REF_ROUTE, REF_ECON)
        assert not leader_feasible(p, LeaderType.ELECTRIC)

    def test_no_electric_member(self):
        prepared = prepare([ft(1, 0.0), ft(2, 1.0)])
        p = evaluate_platoon(prepared, LeaderType.FUEL, REF_ROUTE, REF_ECON)
        assert not leader_feasible(p, LeaderType.ELECTRIC)
        assert leader_feasible(p, LeaderType.FUEL)


class TestSolveDpLs:
    def test_three_truck_fleet(self):
        prepared = prepare([ft(1, 0.0), ft(2, 10.0), et(3, 12.0, soc=60.0)])
        state = run_dp(prepared, REF_ROUTE, REF_ECON, mode=0)
        assert state.values[:4] == pytest.approx([0.0, 0.0, 10.0, 18.4], **APPROX)
        sol = solve_dp_ls(prepared, REF_ROUTE, REF_ECON)
        assert len(sol.platoons) == 1
        p = sol.platoons[0]
        assert p.leader_type is LeaderType.FUEL  # the ET misses the 67.2 bound
        assert p.departure_time == 12.0
        assert sol.utility == pytest.approx(18.4, **APPROX)
        assert_solution_valid(sol, prepared, REF_ROUTE)

    def test_electric_leader_wins_when_safe(self):
        prepared = prepare([ft(1, 0.0), et(2, 0.0, soc=70.0)])
        sol = solve_dp_ls(prepared, REF_ROUTE, REF_ECON)
        assert len(sol.platoons) == 1
        assert sol.platoons[0].leader_type is LeaderType.ELECTRIC
        assert sol.utility == pytest.approx(14.0, **APPROX)

    def test_single_truck(self):
        prepared = prepare([ft(1, 5.0)])
        sol = solve_dp_ls(prepared, REF_ROUTE, REF_ECON)
        assert len(sol.platoons) == 1
        assert sol.utility == 0.0

    def test_singleton_option_lower_bounds_values(self):
        cfg = ScenarioConfig(n_trucks=14, et_share=0.5, seed=11,
                             arrival_lo=1, arrival_hi=60, horizon=300.0)
        inst = generate(cfg)
        prepared = prepare_fleet(inst)
        state = run_dp(prepared, inst.route, inst.econ, mode=0)
        for i, member in enumerate(prepared, start=1):
            solo = evaluate_platoon([member],
                                    LeaderType.ELECTRIC if member.is_electric else LeaderType.FUEL,
                                    inst.route, inst.econ)
            assert state.values[i] >= state.values[i - 1] + solo.utility - 1e-9

    def test_work_bound_and_value_consistency(self):
        cfg = ScenarioConfig(n_trucks=40, et_share=0.3, seed=5,
                             arrival_lo=1, arrival_hi=120, horizon=400.0)
        inst = generate(cfg)
        prepared = prepare_fleet(inst)
        sol = solve_dp_ls(prepared, inst.route, inst.econ)
        assert sol.diagnostics.dp_updates <= 2 * len(prepared) * inst.route.max_platoon_size
        assert abs(sol.diagnostics.dp_value - sol.utility) <= 1e-9
        assert_solution_valid(sol, prepared, inst.route)

    def test_empty_fleet(self):
        sol = solve_dp_ls([], REF_ROUTE, REF_ECON)
        assert sol.platoons == []
        assert sol.utility == 0.0

    def test_unservable_fleet_raises(self):
        # One weak ET whose alone-safe departure misses the horizon: it can
        # neither leave alone nor find a platoon.
        route = RouteParams(distance=200.0, horizon=130.0, max_platoon_size=8)
        prepared = prepare([et(1, 100.0, soc=30.0)], route=route)
        with pytest.raises(NoFeasibleScheduleError):
            solve_dp_ls(prepared, route, REF_ECON)


class TestSolveDpNls:
    def test_forced_leader_matches_selection(self):
        prepared = prepare([ft(1, 0.0), ft(2, 3.0), ft(3, 20.0), ft(4, 26.0)])
        ls = solve_dp_ls(prepared, REF_ROUTE, REF_ECON)
        for seed in range(5):
            nls = solve_dp_nls(prepared, REF_ROUTE, REF_ECON, seed)
            assert nls.utility == pytest.approx(ls.utility, **APPROX)
            assert [p.ranks for p in nls.platoons] == [p.ranks for p in ls.platoons]

    def test_drawn_leader_hits_both_branches(self):
        prepared = prepare([ft(1, 0.0), et(2, 0.0, soc=70.0)])
        seen = set()
        for seed in range(32):
            sol = solve_dp_nls(prepared, REF_ROUTE, REF_ECON, seed)
            seen.add(round(sol.utility, 6))
        assert seen == {10.0, 14.0}

    def test_deterministic_given_seed(self):
        cfg = ScenarioConfig(n_trucks=30, et_share=0.4, seed=9,
                             arrival_lo=1, arrival_hi=90, horizon=300.0)
        inst = generate(cfg)
        prepared = prepare_fleet(inst)
        a = solve_dp_nls(prepared, inst.route, inst.econ, 123)
        b = solve_dp_nls(prepared, inst.route, inst.econ, 123)
        assert a.utility == b.utility
        assert [p.ranks for p in a.platoons] == [p.ranks for p in b.platoons]
        assert [p.leader_type for p in a.platoons] == [p.leader_type for p in b.platoons]

    def test_never_beats_selection(self):
        for seed in range(10):
            cfg = ScenarioConfig(n_trucks=25, et_share=0.5, seed=seed,
                                 arrival_lo=1, arrival_hi=90, horizon=300.0)
            inst = generate(cfg)
            prepared = prepare_fleet(inst)
            ls = solve_dp_ls(prepared, inst.route, inst.econ)
            nls = solve_dp_nls(prepared, inst.route, inst.econ, seed)
            assert ls.utility >= nls.utility - 1e-9
            assert_solution_valid(nls, prepared, inst.route)
