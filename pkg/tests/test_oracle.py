import pytest

from platoon_coord import (
    ContractViolation,
    ProblemInstance,
    RouteParams,
    ScenarioConfig,
    generate,
    oracle_consecutive,
    oracle_full,
    prepare_fleet,
    solve_dp_ls,
)
from conftest import REF_ECON, REF_ROUTE, et, ft, prepare

APPROX = dict(abs=1e-9)


class TestOracleConsecutive:
    def test_matches_solver_on_reference_fleet(self):
        prepared = prepare([ft(1, 0.0), ft(2, 10.0), et(3, 12.0, soc=60.0)])
        exact = oracle_consecutive(prepared, REF_ROUTE, REF_ECON)
        assert exact.utility == pytest.approx(18.4, **APPROX)
        assert [p.ranks for p in exact.platoons] == [(0, 1, 2)]
        fast = solve_dp_ls(prepared, REF_ROUTE, REF_ECON)
        assert exact.utility == pytest.approx(fast.utility, **APPROX)

    def test_single_truck(self):
        prepared = prepare([ft(1, 3.0)])
        exact = oracle_consecutive(prepared, REF_ROUTE, REF_ECON)
        assert exact.utility == 0.0
        assert len(exact.platoons) == 1

    def test_fuel_pair_break_even(self):
        # Pairing two fuel trucks pays off iff the follower saving beats the
        # waiting cost of the gap; at gap = 14 / 0.4 = 35 both choices tie at 0.
        for gap, sign in ((34.0, 1), (35.0, 0), (36.0, -1)):
            prepared = prepare([ft(1, 0.0), ft(2, gap)])
            exact = oracle_consecutive(prepared, REF_ROUTE, REF_ECON)
            paired = 14.0 - 0.4 * gap
            if sign > 0:
                assert exact.utility == pytest.approx(paired, **APPROX)
            else:
                assert exact.utility == pytest.approx(max(paired, 0.0), **APPROX)
        prepared = prepare([ft(1, 0.0), ft(2, 35.0)])
        exact = oracle_consecutive(prepared, REF_ROUTE, REF_ECON)
        assert exact.utility == pytest.approx(0.0, **APPROX)
        # Tie between pairing and going solo: both solvers prefer the
        # smaller platoon first and must agree.
        fast = solve_dp_ls(prepared, REF_ROUTE, REF_ECON)
        assert [p.ranks for p in exact.platoons] == [(0,), (1,)]
        assert [p.ranks for p in fast.platoons] == [(0,), (1,)]

    def test_size_refusal(self):
        prepared = prepare([ft(i, float(i)) for i in range(1, 22)])
        with pytest.raises(ContractViolation):
            oracle_consecutive(prepared, REF_ROUTE, REF_ECON)


class TestOracleFull:
    def test_single_truck_departs_when_ready(self):
        inst = ProblemInstance(trucks=(ft(1, 7.0),),
                               route=RouteParams(distance=200.0, horizon=40.0,
                                                 max_platoon_size=4),
                               econ=REF_ECON)
        sol = oracle_full(inst, 2.0)
        assert sol.utility == 0.0
        assert sol.platoons[0].departure_time == 7.0

    def test_upper_bounds_solver_on_mixed_fleets(self):
        for seed in range(12):
            cfg = ScenarioConfig(n_trucks=2 + seed % 4, et_share=0.5, seed=seed,
                                 arrival_lo=1, arrival_hi=30, horizon=40.0,
                                 max_platoon_size=4)
            inst = generate(cfg)
            prepared = prepare_fleet(inst)
            fast = solve_dp_ls(prepared, inst.route, inst.econ)
            full = oracle_full(inst, 2.0)
            assert fast.utility <= full.utility + 1e-9

    def test_matches_solver_on_fuel_only_fleets(self):
        for seed in range(12):
            cfg = ScenarioConfig(n_trucks=2 + seed % 4, et_share=0.0, seed=seed,
                                 arrival_lo=1, arrival_hi=30, horizon=40.0,
                                 max_platoon_size=4)
            inst = generate(cfg)
            prepared = prepare_fleet(inst)
            fast = solve_dp_ls(prepared, inst.route, inst.econ)
            full = oracle_full(inst, 2.0)
            assert fast.utility == pytest.approx(full.utility, **APPROX)

    def test_can_beat_adjacency_when_interleaved(self):
        # An arrival pattern where grouping non-adjacent trucks would win is
        # the reason the full search exists; it must never fall below the
        # consecutive optimum.
        inst = ProblemInstance(
            trucks=(ft(1, 1.0), et(2, 2.0, soc=20.0), ft(3, 3.0)),
            route=RouteParams(distance=200.0, horizon=40.0, max_platoon_size=2),
            econ=REF_ECON,
        )
        prepared = prepare_fleet(inst)
        fast = solve_dp_ls(prepared, inst.route, inst.econ)
        full = oracle_full(inst, 1.0)
        assert full.utility >= fast.utility - 1e-9

    def test_size_refusals(self):
        inst = ProblemInstance(trucks=tuple(ft(i, float(i)) for i in range(1, 7)),
                               route=RouteParams(distance=200.0, horizon=40.0,
                                                 max_platoon_size=4),
                               econ=REF_ECON)
        with pytest.raises(ContractViolation):
            oracle_full(inst, 2.0)
        small = ProblemInstance(trucks=(ft(1, 1.0),),
                                route=RouteParams(distance=200.0, horizon=1440.0,
                                                  max_platoon_size=4),
                                econ=REF_ECON)
        with pytest.raises(ContractViolation):
            oracle_full(small, 1.0)  # 1440 grid points is beyond the cap
