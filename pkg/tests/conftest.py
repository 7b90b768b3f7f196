import pytest

from platoon_coord import (
    EconomicParams,
    ProblemInstance,
    RouteParams,
    TruckKind,
    TruckSpec,
    prepare_fleet,
)

# Reference parameter set used across the suite: 200 km leg, 24 h horizon,
# platoons capped at 8, follower discharge factor 0.82, wait 0.4 and charge
# 0.2 euro per minute, follower profits 10 (ET) and 14 (FT) euro.
REF_ROUTE = RouteParams(distance=200.0, horizon=1440.0, max_platoon_size=8,
                        follower_coeff=0.82)
REF_ECON = EconomicParams(wait_cost=0.4, charge_cost=0.2,
                          et_follower_profit=10.0, ft_follower_profit=14.0)

ET_RATE = 1.07       # percent per minute
ET_VRATE = 0.286     # percent per km
ET_SAFE = 10.0
ET_MAX = 100.0

# Departure SoC an ET needs to follow safely / to lead or drive alone.
FOLLOW_NEED = ET_SAFE + 0.82 * ET_VRATE * 200.0   # 56.904
LEAD_NEED = ET_SAFE + ET_VRATE * 200.0            # 67.2


def ft(truck_id, arrival):
    return TruckSpec(id=truck_id, kind=TruckKind.FUEL, arrival_time=arrival)


def et(truck_id, arrival, soc, rate=ET_RATE, vrate=ET_VRATE, safe=ET_SAFE,
       max_soc=ET_MAX):
    return TruckSpec(id=truck_id, kind=TruckKind.ELECTRIC, arrival_time=arrival,
                     initial_soc=soc, charge_rate=rate, discharge_rate=vrate,
                     safe_soc=safe, max_soc=max_soc)


def prepare(trucks, route=REF_ROUTE, econ=REF_ECON, seed=0):
    instance = ProblemInstance(trucks=tuple(trucks), route=route, econ=econ, seed=seed)
    return prepare_fleet(instance)


@pytest.fixture
def route():
    return REF_ROUTE


@pytest.fixture
def econ():
    return REF_ECON
