"""Solution container shared by every solver: platoons, totals, diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .utility import LeaderType, PlatoonAssignment, aggregate


@dataclass
class Diagnostics:
    platoon_sizes: Dict[int, int] = field(default_factory=dict)
    et_led: int = 0
    ft_led: int = 0
    dp_updates: Optional[int] = None   # value-function candidate evaluations
    dp_value: Optional[float] = None   # optimal value reported by the recursion
    solve_ms: Optional[float] = None
    horizon_violation: bool = False
    backend: Optional[str] = None


@dataclass
class Solution:
    """A complete schedule: partition of the fleet into platoons plus totals."""

    method: str
    platoons: List[PlatoonAssignment]
    profit: float
    loss: float
    utility: float
    diagnostics: Diagnostics

    @classmethod
    def from_platoons(cls, method: str, platoons: Sequence[PlatoonAssignment],
                      diagnostics: Optional[Diagnostics] = None) -> "Solution":
        """Assemble a solution, ordering platoons by departure time.

        Ordering key is (departure, first rank) so output order is stable even
        when a postponed solo leaves after the block that follows it in rank.
        """
        ordered = sorted(platoons, key=lambda p: (p.departure_time, p.ranks[0]))
        profit, loss, utility = aggregate(ordered)
        diag = diagnostics if diagnostics is not None else Diagnostics()
        sizes: Dict[int, int] = {}
        et_led = ft_led = 0
        for p in ordered:
            sizes[p.size] = sizes.get(p.size, 0) + 1
            if p.leader_type is LeaderType.ELECTRIC:
                et_led += 1
            else:
                ft_led += 1
        diag.platoon_sizes = dict(sorted(sizes.items()))
        diag.et_led = et_led
        diag.ft_led = ft_led
        return cls(
            method=method,
            platoons=list(ordered),
            profit=profit,
            loss=loss,
            utility=utility,
            diagnostics=diag,
        )
