"""Value-recursion solvers over consecutive platoons, with backtracking.

The fleet is scanned in earliest-departure order. For a prefix of i trucks,
the best schedule either ends with a platoon of size n (the last n trucks,
departing when the i-th is ready) on top of the best schedule of the first
i - n trucks, or with that truck alone. Candidates whose electric leader
cannot reach the lead-role SoC bound are skipped. Two variants exist: one
keeps the better leader kind per candidate, the other draws it at random.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .discretize import PreparedTruck
from .kernels import fleet_arrays, leader_draw_bits, run_dp_kernel
from .model import (
    ContractViolation,
    EconomicParams,
    NoFeasibleScheduleError,
    RouteParams,
)
from .solution import Diagnostics, Solution
from .utility import LeaderType, PlatoonAssignment, evaluate_platoon

DP_LS = "DP-LS"
DP_NLS = "DP-NLS"

_LEADER_BY_CODE = {0: LeaderType.ELECTRIC, 1: LeaderType.FUEL}


@dataclass
class DpState:
    """Value table and the winning candidate per prefix length."""

    values: np.ndarray        # shape (N + 1,), values[0] == 0
    choice_sizes: np.ndarray  # winning platoon size per prefix, 0 when none
    choice_leaders: np.ndarray  # 0 electric, 1 fuel, -1 when none
    updates: int              # candidate evaluations performed
    backend: str


def leader_feasible(platoon: PlatoonAssignment, leader: LeaderType) -> bool:
    """Whether some member of an evaluated platoon can take the lead role.

    A fuel leader only needs a fuel member. An electric leader needs a member
    whose departure SoC covers the alone-rate trip plus the safety margin.
    """
    if leader is LeaderType.FUEL:
        return any(row.departure_soc is None for row in platoon.ledger)
    return any(row.departure_soc is not None and row.can_lead for row in platoon.ledger)


def _check_prepared(prepared: Sequence[PreparedTruck]) -> None:
    for k, m in enumerate(prepared):
        if m.rank != k:
            raise ContractViolation("prepared fleet must be rank-ordered")
        if k and m.earliest_departure < prepared[k - 1].earliest_departure:
            raise ContractViolation("prepared fleet must be sorted by earliest departure")


def run_dp(prepared: Sequence[PreparedTruck], route: RouteParams,
           econ: EconomicParams, mode: int, seed: int = 0) -> DpState:
    """Fill the value table for the given fleet. mode 0 = best leader, 1 = drawn."""
    _check_prepared(prepared)
    arr = fleet_arrays(prepared, route)
    if mode == 1:
        bits = leader_draw_bits(seed, arr.size, route.max_platoon_size)
    else:
        bits = np.zeros((1, 1), np.uint8)
    values, choice_n, choice_m, updates, backend = run_dp_kernel(
        arr, econ, route.max_platoon_size, route.horizon, mode, bits)
    return DpState(values, choice_n, choice_m, updates, backend)


def _backtrack(state: DpState, prepared: Sequence[PreparedTruck],
               route: RouteParams, econ: EconomicParams) -> List[PlatoonAssignment]:
    platoons: List[PlatoonAssignment] = []
    i = len(prepared)
    while i > 0:
        size = int(state.choice_sizes[i])
        if size <= 0:
            raise NoFeasibleScheduleError(
                f"no safe schedule covers the first {i} trucks"
            )
        leader = _LEADER_BY_CODE[int(state.choice_leaders[i])]
        platoons.append(evaluate_platoon(prepared[i - size:i], leader, route, econ))
        i -= size
    platoons.reverse()
    return platoons


def _solve(prepared, route, econ, mode, seed, method) -> Solution:
    start = time.perf_counter()
    state = run_dp(prepared, route, econ, mode, seed)
    n = len(prepared)
    if n and not np.isfinite(state.values[n]):
        raise NoFeasibleScheduleError(
            "no combination of platoons and leaders is safe for this fleet"
        )
    platoons = _backtrack(state, prepared, route, econ)
    elapsed_ms = (time.perf_counter() - start) * 1e3
    diag = Diagnostics(
        dp_updates=state.updates,
        dp_value=float(state.values[n]) if n else 0.0,
        solve_ms=elapsed_ms,
        backend=state.backend,
    )
    return Solution.from_platoons(method, platoons, diag)


def solve_dp_ls(prepared: Sequence[PreparedTruck], route: RouteParams,
                econ: EconomicParams) -> Solution:
    """Best schedule over consecutive platoons with leader-kind selection."""
    return _solve(prepared, route, econ, mode=0, seed=0, method=DP_LS)


def solve_dp_nls(prepared: Sequence[PreparedTruck], route: RouteParams,
                 econ: EconomicParams, seed: int) -> Solution:
    """Same recursion, but the leader kind of each candidate is drawn at random
    among the feasible kinds; deterministic for a fixed seed."""
    return _solve(prepared, route, econ, mode=1, seed=seed, method=DP_NLS)
