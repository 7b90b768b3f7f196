"""Non-optimizing reference methods: spontaneous and fixed-interval platooning.

Spontaneous platooning never waits: trucks leave the moment they are ready,
and only those sharing the exact same earliest departure end up together.
Fixed-interval platooning cuts the horizon into uniform slots; everything
ready within a slot leaves together at the slot's end. Both respect the same
platoon-size cap and leader-safety rules as the optimizing solvers, and both
draw leader kinds from the same seeded stream keyed by block position.
"""

from __future__ import annotations

import math
import time
from typing import List, Sequence

from .discretize import PreparedTruck
from .dp import leader_feasible
from .kernels import leader_draw_bit
from .model import ContractViolation, EconomicParams, RouteParams, TIME_TOL
from .solution import Diagnostics, Solution
from .utility import (
    LeaderType,
    PlatoonAssignment,
    evaluate_platoon,
    leader_type_for_kind,
)

SPONTANEOUS = "SPONTANEOUS"
FIXED_INTERVAL = "FIXED-INTERVAL"


def _schedule_block(block: Sequence[PreparedTruck], depart_at: float,
                    route: RouteParams, econ: EconomicParams,
                    seed: int) -> List[PlatoonAssignment]:
    """Schedule one block departing together; fall back to solos when no
    member could safely lead it."""
    if len(block) == 1:
        kind_leader = leader_type_for_kind(block[0].kind)
        return [evaluate_platoon(block, kind_leader, route, econ, depart_at=depart_at)]

    probe_type = (LeaderType.FUEL if any(not m.is_electric for m in block)
                  else LeaderType.ELECTRIC)
    probe = evaluate_platoon(block, probe_type, route, econ, depart_at=depart_at)
    ok_e = leader_feasible(probe, LeaderType.ELECTRIC)
    ok_f = leader_feasible(probe, LeaderType.FUEL)
    if not (ok_e or ok_f):
        # All-electric block with no lead-capable member: split rather than
        # send out an unsafe formation.
        return [
            p
            for m in block
            for p in _schedule_block([m], depart_at, route, econ, seed)
        ]
    if ok_e and ok_f:
        i = block[-1].rank + 1
        chosen = LeaderType.ELECTRIC if leader_draw_bit(seed, i, len(block)) else LeaderType.FUEL
    else:
        chosen = LeaderType.ELECTRIC if ok_e else LeaderType.FUEL
    if chosen is probe.leader_type:
        return [probe]
    return [evaluate_platoon(block, chosen, route, econ, depart_at=depart_at)]


def _chunked(group: Sequence[PreparedTruck], cap: int):
    for start in range(0, len(group), cap):
        yield group[start:start + cap]


def _finish(method: str, platoons: List[PlatoonAssignment], route: RouteParams,
            start: float) -> Solution:
    diag = Diagnostics(
        solve_ms=(time.perf_counter() - start) * 1e3,
        horizon_violation=any(
            p.departure_time > route.horizon + TIME_TOL for p in platoons
        ),
    )
    return Solution.from_platoons(method, platoons, diag)


def solve_spontaneous(prepared: Sequence[PreparedTruck], route: RouteParams,
                      econ: EconomicParams, seed: int) -> Solution:
    """Depart at the earliest departure; platoon only on exact ties."""
    start = time.perf_counter()
    platoons: List[PlatoonAssignment] = []
    i = 0
    while i < len(prepared):
        j = i
        while (j + 1 < len(prepared)
               and prepared[j + 1].earliest_departure == prepared[i].earliest_departure):
            j += 1
        group = prepared[i:j + 1]
        for block in _chunked(group, route.max_platoon_size):
            platoons.extend(
                _schedule_block(block, group[0].earliest_departure, route, econ, seed)
            )
        i = j + 1
    return _finish(SPONTANEOUS, platoons, route, start)


def _slot_end(ready: float, interval: float) -> float:
    # A truck ready exactly on a slot edge departs immediately: slots are
    # half-open (lo, hi].
    return interval * math.ceil(ready / interval)


def solve_fixed_interval(prepared: Sequence[PreparedTruck], route: RouteParams,
                         econ: EconomicParams, interval: float,
                         seed: int) -> Solution:
    """Group trucks by uniform time slots; each group departs at its slot end.

    A nonempty slot ending past the horizon is still scheduled, but the
    solution is flagged in its diagnostics.
    """
    if interval <= 0:
        raise ContractViolation("interval must be > 0")
    start = time.perf_counter()
    platoons: List[PlatoonAssignment] = []
    i = 0
    while i < len(prepared):
        end = _slot_end(prepared[i].earliest_departure, interval)
        j = i
        while (j + 1 < len(prepared)
               and _slot_end(prepared[j + 1].earliest_departure, interval) == end):
            j += 1
        group = prepared[i:j + 1]
        for block in _chunked(group, route.max_platoon_size):
            platoons.extend(_schedule_block(block, end, route, econ, seed))
        i = j + 1
    return _finish(FIXED_INTERVAL, platoons, route, start)
