"""Round outcome accumulation, supercheck reconstruction and detection events.

Raw per-check outcomes are combined into group (supercheck) products; a
detection event is a change in a group's product between two consecutive
measurements of that group. Undamaged checks are measured every round,
damaged groups every other round, and the perfect initial and final rounds
bracket the history so matching is always feasible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .effective import EffectiveCode, SupercheckGroup
from .geometry import PLAQUETTE, STAR, Coord


class SchedulingError(RuntimeError):
    """A group member was missing from the raw outcomes of its round."""


@dataclass(frozen=True, eq=False)
class SyndromeHistory:
    """Outcomes of one trial: perfect reference, noisy rounds, perfect cap."""

    reference: dict[Coord, int]                 # perfect round 0
    rounds: list[tuple[int, dict[Coord, int]]]  # noisy rounds 1..R
    final: dict[Coord, int]                     # perfect round R + 1

    @property
    def n_rounds(self) -> int:
        return len(self.rounds)


@dataclass(frozen=True, eq=False)
class DefectSet:
    """Spacetime detection events for the decoded check type."""

    kind: str
    defects: tuple[tuple[int, int], ...]        # (group index, time index)
    meas_times: dict[int, tuple[int, ...]]      # group index -> times measured
    spacing: dict[int, int]                     # 1 undamaged, 2 supercheck
    n_rounds: int


def supercheck_value(raw: dict[Coord, int], group: SupercheckGroup) -> int:
    """Product of the group members' outcomes in one measurement round."""
    value = 1
    for site in group.members:
        try:
            value *= raw[site]
        except KeyError:
            raise SchedulingError(
                f"member {site} of {group.kind} group {group.index} "
                "missing from round outcomes") from None
    return value


def measured_rounds(group: SupercheckGroup, n_rounds: int) -> list[int]:
    """Noisy rounds in which the group's members are measured."""
    if not group.damaged:
        return list(range(1, n_rounds + 1))
    # star gauges on even rounds, plaquette gauges on odd rounds
    start = 2 if group.kind == STAR else 1
    return list(range(start, n_rounds + 1, 2))


def detection_events(history: SyndromeHistory, effcode: EffectiveCode,
                     kind: str = PLAQUETTE) -> DefectSet:
    """Spacetime defects of one check type (plaquettes decode X errors)."""
    n_rounds = history.n_rounds
    by_round = dict(history.rounds)
    defects: list[tuple[int, int]] = []
    meas_times: dict[int, tuple[int, ...]] = {}
    spacing: dict[int, int] = {}
    for g in effcode.groups(kind):
        if not g.members:
            continue
        times = [0] + measured_rounds(g, n_rounds) + [n_rounds + 1]
        meas_times[g.index] = tuple(times)
        spacing[g.index] = 2 if g.damaged else 1
        prev = supercheck_value(history.reference, g)
        for t in times[1:]:
            raw = history.final if t == n_rounds + 1 else by_round[t]
            val = supercheck_value(raw, g)
            if val != prev:
                defects.append((g.index, t))
            prev = val
    return DefectSet(kind=kind, defects=tuple(sorted(defects)),
                     meas_times=meas_times, spacing=spacing, n_rounds=n_rounds)


def format_history(history: SyndromeHistory) -> str:
    """Debug dump: one line per round, sites in sorted order."""
    lines = []
    seq = [(0, history.reference)] + list(history.rounds) + \
          [(history.n_rounds + 1, history.final)]
    for k, outcomes in seq:
        vals = " ".join(f"({r},{c})={v:+d}" for (r, c), v in sorted(outcomes.items()))
        lines.append(f"round {k} {vals}")
    return "\n".join(lines) + "\n"
