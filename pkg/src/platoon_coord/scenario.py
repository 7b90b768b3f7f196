"""Seeded scenario generation and JSON persistence for instances and solutions.

Generation uses numpy's counter-based Philox generator so a (config, seed)
pair reproduces bit-identically across platforms; the generator name is
recorded in the instance file. Files are schema-versioned JSON written with
sorted keys, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .model import (
    EconomicParams,
    ProblemInstance,
    RouteParams,
    TruckKind,
    TruckSpec,
)
from .solution import Solution

SCHEMA_VERSION = 1
RNG_NAME = "numpy-philox4x64"
_RESAMPLE_BUDGET = 1000


class GenerationError(RuntimeError):
    """Scenario generation could not satisfy its constraints."""


class InstanceFormatError(ValueError):
    """An instance or solution file is malformed or has an unknown schema."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Knobs of the random fleet generator.

    Defaults describe the reference scenario used throughout the test suite:
    1000 trucks, 30% electric, arrivals uniform over a 24 h horizon, one
    200 km hub-to-hub leg. Speed is carried as metadata only; no computed
    quantity depends on it.
    """

    n_trucks: int = 1000
    et_share: float = 0.3
    arrival_lo: int = 1
    arrival_hi: int = 1440
    horizon: float = 1440.0
    distance: float = 200.0
    max_platoon_size: int = 8
    follower_coeff: float = 0.82
    wait_cost: float = 0.4
    charge_cost: float = 0.2
    et_follower_profit: float = 10.0
    ft_follower_profit: float = 14.0
    charge_rate: float = 1.07
    discharge_rate: float = 0.286
    safe_soc: float = 10.0
    max_soc: float = 100.0
    soc_lo: Optional[float] = None   # default: safe_soc
    soc_hi: Optional[float] = None   # default: max_soc
    interval: float = 30.0           # fixed-interval baseline slot length
    speed_kmh: float = 80.0          # metadata only
    seed: int = 0

    def route(self) -> RouteParams:
        return RouteParams(
            distance=self.distance,
            horizon=self.horizon,
            max_platoon_size=self.max_platoon_size,
            follower_coeff=self.follower_coeff,
        )

    def econ(self) -> EconomicParams:
        return EconomicParams(
            wait_cost=self.wait_cost,
            charge_cost=self.charge_cost,
            et_follower_profit=self.et_follower_profit,
            ft_follower_profit=self.ft_follower_profit,
        )


def generate(config: ScenarioConfig) -> ProblemInstance:
    """Draw a fleet deterministically from (config, config.seed).

    Exactly round(n_trucks * et_share) trucks are electric, at positions
    drawn once up front. A truck whose mandatory charge would push it past
    the horizon is redrawn, with a bounded retry budget.
    """
    if not 0 <= config.et_share <= 1:
        raise GenerationError("et_share must be in [0, 1]")
    if config.arrival_lo > config.arrival_hi or config.arrival_lo < 0:
        raise GenerationError("arrival range must satisfy 0 <= lo <= hi")
    if config.n_trucks < 1:
        raise GenerationError("n_trucks must be >= 1")
    follower_need = config.safe_soc + config.follower_coeff * config.discharge_rate * config.distance
    if follower_need > config.max_soc:
        raise GenerationError(
            "electric trucks could never follow safely: "
            f"required departure SoC {follower_need:.6g}% exceeds capacity "
            f"{config.max_soc:.6g}%"
        )
    soc_lo = config.safe_soc if config.soc_lo is None else config.soc_lo
    soc_hi = config.max_soc if config.soc_hi is None else config.soc_hi
    if not config.safe_soc <= soc_lo <= soc_hi <= config.max_soc:
        raise GenerationError("SoC range must lie within [safe_soc, max_soc]")

    rng = np.random.Generator(np.random.Philox(config.seed))
    n_et = int(round(config.n_trucks * config.et_share))
    et_positions = set(rng.permutation(config.n_trucks)[:n_et].tolist())

    trucks = []
    for pos in range(config.n_trucks):
        electric = pos in et_positions
        for attempt in range(_RESAMPLE_BUDGET):
            arrival = float(rng.integers(config.arrival_lo, config.arrival_hi + 1))
            if electric:
                soc = float(rng.uniform(soc_lo, soc_hi))
                charge = max(0.0, (follower_need - soc) / config.charge_rate)
            else:
                soc = None
                charge = 0.0
            if arrival + charge <= config.horizon:
                break
        else:
            raise GenerationError(
                f"could not draw truck {pos + 1} with earliest departure inside "
                f"the horizon after {_RESAMPLE_BUDGET} attempts"
            )
        if electric:
            trucks.append(TruckSpec(
                id=pos + 1,
                kind=TruckKind.ELECTRIC,
                arrival_time=arrival,
                initial_soc=soc,
                charge_rate=config.charge_rate,
                discharge_rate=config.discharge_rate,
                safe_soc=config.safe_soc,
                max_soc=config.max_soc,
            ))
        else:
            trucks.append(TruckSpec(id=pos + 1, kind=TruckKind.FUEL, arrival_time=arrival))

    return ProblemInstance(
        trucks=tuple(trucks),
        route=config.route(),
        econ=config.econ(),
        seed=config.seed,
    )


def _truck_to_json(t: TruckSpec) -> dict:
    row = {"id": t.id, "kind": t.kind.value, "arrival": t.arrival_time}
    if t.is_electric:
        row.update(soc0=t.initial_soc, rate=t.charge_rate, vrate=t.discharge_rate,
                   safe=t.safe_soc, max=t.max_soc)
    return row


def _require(obj: dict, key: str, ctx: str):
    if key not in obj:
        raise InstanceFormatError(f"{ctx}: missing field '{key}'")
    return obj[key]


def save_instance(instance: ProblemInstance, path: str,
                  config: Optional[ScenarioConfig] = None) -> None:
    doc = {
        "version": SCHEMA_VERSION,
        "rng": RNG_NAME,
        "config": asdict(config) if config is not None else None,
        "seed": instance.seed,
        "route": {
            "d": instance.route.distance,
            "T": instance.route.horizon,
            "nbar": instance.route.max_platoon_size,
            "beta_f": instance.route.follower_coeff,
        },
        "econ": {
            "ew": instance.econ.wait_cost,
            "ec": instance.econ.charge_cost,
            "xiE": instance.econ.et_follower_profit,
            "xiF": instance.econ.ft_follower_profit,
        },
        "trucks": [_truck_to_json(t) for t in instance.trucks],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_instance(path: str) -> ProblemInstance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"{path}: not valid JSON (line {exc.lineno}, column {exc.colno}: {exc.msg})"
        ) from exc
    if not isinstance(doc, dict):
        raise InstanceFormatError(f"{path}: top level must be an object")
    version = _require(doc, "version", path)
    if version != SCHEMA_VERSION:
        raise InstanceFormatError(
            f"{path}: unsupported schema version {version!r} (expected {SCHEMA_VERSION})"
        )
    route_doc = _require(doc, "route", path)
    econ_doc = _require(doc, "econ", path)
    trucks_doc = _require(doc, "trucks", path)
    if not isinstance(trucks_doc, list) or not trucks_doc:
        raise InstanceFormatError(f"{path}: 'trucks' must be a non-empty list")

    route = RouteParams(
        distance=_require(route_doc, "d", f"{path}: route"),
        horizon=_require(route_doc, "T", f"{path}: route"),
        max_platoon_size=_require(route_doc, "nbar", f"{path}: route"),
        follower_coeff=_require(route_doc, "beta_f", f"{path}: route"),
    )
    econ = EconomicParams(
        wait_cost=_require(econ_doc, "ew", f"{path}: econ"),
        charge_cost=_require(econ_doc, "ec", f"{path}: econ"),
        et_follower_profit=_require(econ_doc, "xiE", f"{path}: econ"),
        ft_follower_profit=_require(econ_doc, "xiF", f"{path}: econ"),
    )
    trucks = []
    for k, row in enumerate(trucks_doc):
        ctx = f"{path}: trucks[{k}]"
        kind_tag = _require(row, "kind", ctx)
        try:
            kind = TruckKind(kind_tag)
        except ValueError:
            raise InstanceFormatError(f"{ctx}: unknown kind {kind_tag!r}") from None
        if kind is TruckKind.ELECTRIC:
            trucks.append(TruckSpec(
                id=_require(row, "id", ctx),
                kind=kind,
                arrival_time=_require(row, "arrival", ctx),
                initial_soc=_require(row, "soc0", ctx),
                charge_rate=_require(row, "rate", ctx),
                discharge_rate=_require(row, "vrate", ctx),
                safe_soc=_require(row, "safe", ctx),
                max_soc=_require(row, "max", ctx),
            ))
        else:
            trucks.append(TruckSpec(
                id=_require(row, "id", ctx),
                kind=kind,
                arrival_time=_require(row, "arrival", ctx),
            ))
    return ProblemInstance(
        trucks=tuple(trucks),
        route=route,
        econ=econ,
        seed=_require(doc, "seed", path),
    )


def solution_to_json(solution: Solution, include_timing: bool = False) -> dict:
    """Schema dict of a solution. Wall-clock timing is volatile, so it is
    written as null unless explicitly requested."""
    diag = solution.diagnostics
    return {
        "version": SCHEMA_VERSION,
        "method": solution.method,
        "totals": {"R": solution.profit, "L": solution.loss, "J": solution.utility},
        "platoons": [
            {
                "members": [row.truck_id for row in p.ledger],
                "leader_id": p.leader_id,
                "leader_type": p.leader_type.value,
                "depart": p.departure_time,
                "ledger": [
                    {
                        "id": row.truck_id,
                        "role": row.role.value,
                        "charge": row.charge_time,
                        "wait": row.wait_time,
                        **(
                            {"soc_dep": row.departure_soc, "soc_arr": row.arrival_soc}
                            if row.departure_soc is not None else {}
                        ),
                    }
                    for row in p.ledger
                ],
            }
            for p in solution.platoons
        ],
        "diagnostics": {
            "platoon_sizes": {str(k): v for k, v in diag.platoon_sizes.items()},
            "et_led": diag.et_led,
            "ft_led": diag.ft_led,
            "dp_updates": diag.dp_updates,
            "dp_value": diag.dp_value,
            "solve_ms": diag.solve_ms if include_timing else None,
            "horizon_violation": diag.horizon_violation,
            "backend": diag.backend,
        },
    }


def save_solution(solution: Solution, path: str, include_timing: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(solution_to_json(solution, include_timing), fh, indent=2, sort_keys=True)
        fh.write("\n")
