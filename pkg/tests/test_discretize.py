import pytest

from platoon_coord import (
    ContractViolation,
    HorizonExceededError,
    InfeasibleTruckError,
    RouteParams,
    min_charge_time,
    soc_after_trip,
)
from conftest import FOLLOW_NEED, REF_ROUTE, et, ft, prepare

APPROX = dict(abs=1e-9)


class TestMinChargeTime:
    def test_low_soc_needs_charging(self):
        assert min_charge_time(et(1, 0.0, soc=30.0), REF_ROUTE) == pytest.approx(
            (FOLLOW_NEED - 30.0) / 1.07, **APPROX)

    def test_high_soc_needs_none(self):
        assert min_charge_time(et(1, 0.0, soc=60.0), REF_ROUTE) == 0.0

    def test_boundary_soc_needs_none(self):
        assert min_charge_time(et(1, 0.0, soc=56.904), REF_ROUTE) == 0.0

    def test_fuel_truck_rejected(self):
        with pytest.raises(ContractViolation):
            min_charge_time(ft(1, 0.0), REF_ROUTE)

    def test_undersized_battery_is_infeasible(self):
        truck = et(1, 0.0, soc=30.0, max_soc=40.0)
        with pytest.raises(InfeasibleTruckError):
            min_charge_time(truck, REF_ROUTE)


class TestPrepareFleet:
    def test_charging_reorders_behind_later_arrival(self):
        prepared = prepare([ft(1, 10.0), et(2, 0.0, soc=30.0)])
        assert [p.id for p in prepared] == [1, 2]
        assert prepared[0].earliest_departure == 10.0
        assert prepared[1].earliest_departure == pytest.approx(
            (FOLLOW_NEED - 30.0) / 1.07, **APPROX)
        assert [p.rank for p in prepared] == [0, 1]

    def test_fuel_trucks_keep_arrival_order(self):
        prepared = prepare([ft(1, 5.0), ft(2, 3.0)])
        assert [p.earliest_departure for p in prepared] == [3.0, 5.0]

    def test_full_battery_departs_on_arrival(self):
        (p,) = prepare([et(1, 7.0, soc=100.0)])
        assert p.earliest_departure == 7.0
        assert p.min_charge_time == 0.0
        assert p.min_departure_soc == 100.0

    def test_ties_break_by_id(self):
        prepared = prepare([ft(7, 4.0), ft(3, 4.0)])
        assert [p.id for p in prepared] == [3, 7]

    def test_deterministic_and_idempotent(self):
        trucks = [ft(1, 5.0), et(2, 1.0, soc=40.0), ft(3, 5.0)]
        assert prepare(trucks) == prepare(trucks)

    def test_fuel_arrival_never_changes(self):
        prepared = prepare([ft(1, 5.0), ft(2, 900.0)])
        for p in prepared:
            assert p.earliest_departure == p.arrival_time
            assert p.min_charge_time == 0.0

    def test_horizon_exceeded_by_arrival(self):
        route = RouteParams(distance=200.0, horizon=100.0, max_platoon_size=8)
        with pytest.raises(HorizonExceededError):
            prepare([ft(1, 101.0)], route=route)

    def test_horizon_exceeded_by_mandatory_charge(self):
        route = RouteParams(distance=200.0, horizon=100.0, max_platoon_size=8)
        with pytest.raises(HorizonExceededError) as err:
            prepare([et(4, 90.0, soc=30.0)], route=route)
        assert "truck 4" in str(err.value)

    def test_ranks_and_order_invariants(self):
        trucks = [et(i, (i * 37) % 50, soc=10.0 + (i * 13) % 90) for i in range(1, 15)]
        prepared = prepare(trucks)
        assert [p.rank for p in prepared] == list(range(len(trucks)))
        departures = [p.earliest_departure for p in prepared]
        assert departures == sorted(departures)

    def test_mandatory_charge_makes_following_safe(self):
        # Departing at the earliest instant with the mandatory charge must
        # leave every ET at or above its safety floor after a follower trip.
        trucks = [et(i, (i * 11) % 40, soc=10.0 + (i * 17) % 90) for i in range(1, 30)]
        for p in prepare(trucks):
            arrival_soc = soc_after_trip(p.min_departure_soc, p.spec.discharge_rate,
                                         REF_ROUTE.distance, REF_ROUTE.follower_coeff)
            assert arrival_soc >= p.spec.safe_soc - 1e-9
