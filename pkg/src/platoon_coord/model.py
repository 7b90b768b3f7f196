"""Core domain types and the charge/discharge/time arithmetic for hub platooning.

A mixed fleet of fuel trucks (FTs) and electric trucks (ETs) gathers at a hub
and may leave in platoons toward a common destination. Followers burn less
energy than leaders or trucks driving alone; ETs may have to charge before
they can reach the destination with a safe battery margin. This module holds
the immutable problem data plus the elementary physics shared by every solver
in the package: departure-time composition, linear charging, role-dependent
discharging, and the battery window a departing ET must respect.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

# Discharge multiplier for a truck leading a platoon or driving alone.
LEAD_COEFF = 1.0
# Default discharge multiplier for platoon followers.
DEFAULT_FOLLOWER_COEFF = 0.82

# Absolute tolerances used for feasibility comparisons throughout the package.
SOC_TOL = 1e-9    # battery percent points
TIME_TOL = 1e-9   # minutes
MONEY_TOL = 1e-9  # euros


class ContractViolation(ValueError):
    """An operation was invoked outside its documented precondition."""


class InfeasibleTruckError(ValueError):
    """The truck cannot complete the trip safely even when fully charged."""

    def __init__(self, truck_id: int, message: str):
        super().__init__(f"truck {truck_id}: {message}")
        self.truck_id = truck_id


class HorizonExceededError(ValueError):
    """A truck's earliest safe departure lies beyond the planning horizon."""

    def __init__(self, truck_id: int, departure: float, horizon: float):
        super().__init__(
            f"truck {truck_id}: earliest departure {departure:.6g} min exceeds "
            f"planning horizon {horizon:.6g} min"
        )
        self.truck_id = truck_id


class NoFeasibleScheduleError(RuntimeError):
    """No schedule in the candidate space satisfies every safety bound."""


class TruckKind(Enum):
    FUEL = "FT"
    ELECTRIC = "ET"


@dataclass(frozen=True)
class TruckSpec:
    """Immutable inputs of one truck.

    Battery fields are required for ELECTRIC trucks and must be left as None
    for FUEL trucks. SoC quantities are percentages of battery capacity,
    times are minutes, distances kilometres.
    """

    id: int
    kind: TruckKind
    arrival_time: float
    initial_soc: Optional[float] = None     # percent at hub arrival
    charge_rate: Optional[float] = None     # percent gained per minute at the hub
    discharge_rate: Optional[float] = None  # percent spent per km when driving alone
    safe_soc: Optional[float] = None        # minimum percent allowed en route
    max_soc: Optional[float] = None         # battery capacity in percent

    def __post_init__(self):
        if self.arrival_time < 0:
            raise ContractViolation(f"truck {self.id}: arrival_time must be >= 0")
        battery = (
            self.initial_soc,
            self.charge_rate,
            self.discharge_rate,
            self.safe_soc,
            self.max_soc,
        )
        if self.kind is TruckKind.FUEL:
            if any(v is not None for v in battery):
                raise ContractViolation(
                    f"truck {self.id}: fuel trucks carry no battery fields"
                )
            return
        if any(v is None for v in battery):
            raise ContractViolation(
                f"truck {self.id}: electric trucks need all battery fields"
            )
        if self.charge_rate <= 0:
            raise ContractViolation(f"truck {self.id}: charge_rate must be > 0")
        if self.discharge_rate < 0:
            raise ContractViolation(f"truck {self.id}: discharge_rate must be >= 0")
        if not 0 <= self.safe_soc < 100:
            raise ContractViolation(f"truck {self.id}: safe_soc must be in [0, 100)")
        if not self.safe_soc < self.max_soc <= 100:
            raise ContractViolation(
                f"truck {self.id}: max_soc must be in (safe_soc, 100]"
            )
        if not 0 <= self.initial_soc <= self.max_soc:
            raise ContractViolation(
                f"truck {self.id}: initial_soc must be in [0, max_soc]"
            )

    @property
    def is_electric(self) -> bool:
        return self.kind is TruckKind.ELECTRIC


@dataclass(frozen=True)
class RouteParams:
    """Shared route and formation limits: one hub-to-hub segment."""

    distance: float                               # km between the two hubs
    horizon: float                                # planning horizon in minutes
    max_platoon_size: int                         # safety cap on platoon length
    follower_coeff: float = DEFAULT_FOLLOWER_COEFF

    def __post_init__(self):
        if self.distance <= 0:
            raise ContractViolation("distance must be > 0")
        if self.horizon <= 0:
            raise ContractViolation("horizon must be > 0")
        if int(self.max_platoon_size) != self.max_platoon_size or self.max_platoon_size < 1:
            raise ContractViolation("max_platoon_size must be an integer >= 1")
        if not 0 < self.follower_coeff <= 1:
            raise ContractViolation("follower_coeff must be in (0, 1]")


@dataclass(frozen=True)
class EconomicParams:
    """Per-minute costs and per-trip follower savings in euros.

    Charging a minute must not cost more than waiting a minute; the fixed
    charge-before-wait policy used by every solver relies on that ordering.
    """

    wait_cost: float           # euros per minute of idle waiting
    charge_cost: float         # euros per minute spent charging
    et_follower_profit: float  # euros earned by an ET following for the trip
    ft_follower_profit: float  # euros earned by an FT following for the trip

    def __post_init__(self):
        for name in ("wait_cost", "charge_cost", "et_follower_profit", "ft_follower_profit"):
            if getattr(self, name) < 0:
                raise ContractViolation(f"{name} must be >= 0")
        if self.charge_cost > self.wait_cost:
            raise ContractViolation("charge_cost must not exceed wait_cost")


@dataclass(frozen=True)
class ProblemInstance:
    """One solvable unit: a fleet plus route, prices, and a base seed.

    The seed feeds only the randomized solvers (leader draws); deterministic
    solvers ignore it.
    """

    trucks: tuple
    route: RouteParams
    econ: EconomicParams
    seed: int = 0

    def __post_init__(self):
        trucks = tuple(self.trucks)
        object.__setattr__(self, "trucks", trucks)
        if not trucks:
            raise ContractViolation("instance needs at least one truck")
        ids = [t.id for t in trucks]
        if len(set(ids)) != len(ids):
            raise ContractViolation("truck ids must be unique")
        if self.seed < 0:
            raise ContractViolation("seed must be >= 0")


def departure_time(truck, charge: float, wait: float) -> float:
    """Departure instant of a truck that charges and then waits at the hub.

    Fuel trucks never charge, so any nonzero charge time on one is rejected.
    """
    if charge < 0 or wait < 0:
        raise ContractViolation("charge and wait times must be >= 0")
    if truck.kind is TruckKind.FUEL:
        if charge != 0:
            raise ContractViolation(f"truck {truck.id}: fuel trucks cannot charge")
        return truck.arrival_time + wait
    return truck.arrival_time + charge + wait


def soc_after_charge(soc0: float, rate: float, charge: float) -> float:
    """Battery percent after charging linearly for `charge` minutes.

    This is the raw linear model; callers are responsible for capping the
    result at the truck's capacity.
    """
    if charge < 0:
        raise ContractViolation("charge time must be >= 0")
    return soc0 + rate * charge


def soc_after_trip(soc_dep: float, rate: float, distance: float, role_coeff: float) -> float:
    """Battery percent on arrival given the departure SoC and driving role.

    Negative results are legal outputs; safety margins are checked elsewhere.
    """
    return soc_dep - role_coeff * rate * distance


def departure_soc_bounds(truck: TruckSpec, route: RouteParams, role_coeff: float):
    """(lowest, highest) departure SoC admissible for the given driving role.

    The lower bound may exceed the upper one, which signals that the role is
    infeasible for this truck on this route no matter how long it charges.
    """
    if not truck.is_electric:
        raise ContractViolation(f"truck {truck.id}: fuel trucks have no SoC bounds")
    lo = truck.safe_soc + role_coeff * truck.discharge_rate * route.distance
    return lo, truck.max_soc
