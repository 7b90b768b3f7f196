"""Exhaustive reference solvers, small fleets only.

`oracle_consecutive` enumerates every composition of the ordered fleet into
consecutive blocks plus every safe leader kind per block: the exact search
space of the value recursion, explored without it. `oracle_full` goes further
for tiny fleets, enumerating arbitrary (not necessarily consecutive) groups
and a grid of common departure times, which bounds what any scheduler of this
family could achieve.
"""

from __future__ import annotations

import time
from typing import List, Optional, Sequence

from .discretize import PreparedTruck, prepare_fleet
from .dp import leader_feasible
from .model import (
    ContractViolation,
    EconomicParams,
    ProblemInstance,
    RouteParams,
    TIME_TOL,
)
from .solution import Diagnostics, Solution
from .utility import (
    LeaderType,
    PlatoonAssignment,
    alone_departure,
    evaluate_platoon,
    leader_type_for_kind,
)

ORACLE = "ORACLE"

CONSECUTIVE_MAX_TRUCKS = 20
FULL_MAX_TRUCKS = 5
FULL_MAX_GRID = 40


def _best_block(members: Sequence[PreparedTruck], route, econ) -> Optional[PlatoonAssignment]:
    """Best safe assignment of one block departing when its last member is
    ready, or None when no leader kind is safe. Electric leaders win ties."""
    if len(members) == 1:
        m = members[0]
        cand = evaluate_platoon(members, leader_type_for_kind(m.kind), route, econ)
        if m.is_electric and not leader_feasible(cand, LeaderType.ELECTRIC):
            return None
        if cand.departure_time > route.horizon + TIME_TOL:
            return None
        return cand
    best = None
    for leader in (LeaderType.ELECTRIC, LeaderType.FUEL):
        if not any(leader_type_for_kind(m.kind) is leader for m in members):
            continue
        cand = evaluate_platoon(members, leader, route, econ)
        if not leader_feasible(cand, leader):
            continue
        if best is None or cand.utility > best.utility:
            best = cand
    return best


def oracle_consecutive(prepared: Sequence[PreparedTruck], route: RouteParams,
                       econ: EconomicParams) -> Solution:
    """Exhaustive optimum over consecutive blocks and leader kinds."""
    n = len(prepared)
    if n > CONSECUTIVE_MAX_TRUCKS:
        raise ContractViolation(
            f"refusing exhaustive search beyond {CONSECUTIVE_MAX_TRUCKS} trucks"
        )
    start = time.perf_counter()
    nbar = route.max_platoon_size

    # Block table indexed [last][size]; None marks an unsafe block.
    blocks = [[None] * (min(i, nbar) + 1) for i in range(n + 1)]
    for i in range(1, n + 1):
        for size in range(1, min(i, nbar) + 1):
            blocks[i][size] = _best_block(prepared[i - size:i], route, econ)

    best_total = -float("inf")
    best_split: Optional[List[int]] = None
    split: List[int] = []

    def explore(i: int, total: float) -> None:
        nonlocal best_total, best_split
        if i == 0:
            if total > best_total:
                best_total = total
                best_split = list(split)
            return
        for size in range(1, min(i, nbar) + 1):
            block = blocks[i][size]
            if block is None:
                continue
            split.append(size)
            explore(i - size, total + block.utility)
            split.pop()

    explore(n, 0.0)
    if n and best_split is None:
        raise ContractViolation("no safe schedule exists for this fleet")

    platoons = []
    i = n
    for size in best_split or []:
        platoons.append(blocks[i][size])
        i -= size
    platoons.reverse()
    diag = Diagnostics(solve_ms=(time.perf_counter() - start) * 1e3,
                       dp_value=best_total if n else 0.0)
    return Solution.from_platoons(ORACLE, platoons, diag)


def _partitions(items: Sequence[PreparedTruck], cap: int):
    """All set partitions with group sizes <= cap, in canonical order."""
    parts: List[List[PreparedTruck]] = []

    def rec(idx: int):
        if idx == len(items):
            yield [list(p) for p in parts]
            return
        for p in parts:
            if len(p) < cap:
                p.append(items[idx])
                yield from rec(idx + 1)
                p.pop()
        parts.append([items[idx]])
        yield from rec(idx + 1)
        parts.pop()

    yield from rec(0)


def oracle_full(instance: ProblemInstance, time_grid_step: float) -> Solution:
    """Exhaustive optimum over arbitrary groups and gridded departure times.

    The grid holds every multiple of `time_grid_step` inside the horizon plus
    every earliest departure and every safe solo departure, so every candidate
    the other solvers can produce is representable.
    """
    route, econ = instance.route, instance.econ
    n = len(instance.trucks)
    if n > FULL_MAX_TRUCKS:
        raise ContractViolation(
            f"refusing exhaustive search beyond {FULL_MAX_TRUCKS} trucks"
        )
    if time_grid_step <= 0 or route.horizon / time_grid_step > FULL_MAX_GRID:
        raise ContractViolation(
            f"grid must have at most {FULL_MAX_GRID} steps over the horizon"
        )
    start = time.perf_counter()
    prepared = prepare_fleet(instance)

    grid = {m.earliest_departure for m in prepared}
    grid.update(alone_departure(m, route) for m in prepared if m.is_electric)
    k = 0
    while k * time_grid_step <= route.horizon + TIME_TOL:
        grid.add(k * time_grid_step)
        k += 1
    grid = sorted(t for t in grid if t <= route.horizon + TIME_TOL)

    def best_group(group: Sequence[PreparedTruck]) -> Optional[PlatoonAssignment]:
        ready = max(m.earliest_departure for m in group)
        kinds = {leader_type_for_kind(m.kind) for m in group}
        best = None
        for t in grid:
            if t < ready - TIME_TOL:
                continue
            for leader in (LeaderType.ELECTRIC, LeaderType.FUEL):
                if len(group) > 1 and leader not in kinds:
                    continue
                if len(group) == 1 and leader is not leader_type_for_kind(group[0].kind):
                    continue
                cand = evaluate_platoon(group, leader, route, econ, depart_at=t)
                if cand.departure_time > route.horizon + TIME_TOL:
                    continue
                if not leader_feasible(cand, leader):
                    continue
                if best is None or cand.utility > best.utility:
                    best = cand
        return best

    best_total = -float("inf")
    best_platoons: Optional[List[PlatoonAssignment]] = None
    for partition in _partitions(prepared, route.max_platoon_size):
        assignments = []
        total = 0.0
        for group in partition:
            choice = best_group(group)
            if choice is None:
                assignments = None
                break
            assignments.append(choice)
            total += choice.utility
        if assignments is not None and total > best_total:
            best_total = total
            best_platoons = assignments

    if best_platoons is None:
        raise ContractViolation("no safe schedule exists for this fleet")
    diag = Diagnostics(solve_ms=(time.perf_counter() - start) * 1e3,
                       dp_value=best_total)
    return Solution.from_platoons(ORACLE, best_platoons, diag)
