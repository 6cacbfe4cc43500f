"""Planar surface code geometry: lattice, check operators, links, logicals.

The code lives on a (2L-1) x (2L-1) grid of sites indexed by (row, col):

* data qubits sit on sites with r + c even,
* star (X-type) checks sit on sites with r odd and c even,
* plaquette (Z-type) checks sit on sites with r even and c odd.

With this convention the logical Z operator runs down column 0 (it
terminates on the top and bottom edges) and the logical X operator runs
along row 0 (terminating on the left and right edges).
"""

from __future__ import annotations

from dataclasses import dataclass, field

Coord = tuple[int, int]

STAR = "star"
PLAQUETTE = "plaquette"

# CNOT order within a round: north, west, east, south ("z" shape).
DIRECTIONS = ("n", "w", "e", "s")
_OFFSETS = {"n": (-1, 0), "w": (0, -1), "e": (0, 1), "s": (1, 0)}


def is_data_site(site: Coord) -> bool:
    r, c = site
    return (r + c) % 2 == 0


def is_star_site(site: Coord) -> bool:
    r, c = site
    return r % 2 == 1 and c % 2 == 0


def is_plaquette_site(site: Coord) -> bool:
    r, c = site
    return r % 2 == 0 and c % 2 == 1


def site_kind(site: Coord) -> str | None:
    if is_star_site(site):
        return STAR
    if is_plaquette_site(site):
        return PLAQUETTE
    return None


def step(site: Coord, direction: str) -> Coord:
    dr, dc = _OFFSETS[direction]
    return (site[0] + dr, site[1] + dc)


@dataclass(frozen=True)
class Link:
    """A controllable two-qubit interaction between a check and one data qubit."""

    check_site: Coord
    direction: str
    data_site: Coord


@dataclass(frozen=True)
class CheckOperator:
    """A stabilizer generator: a star (X-type) or plaquette (Z-type)."""

    site: Coord
    kind: str
    support: tuple[tuple[str, Coord], ...]

    @property
    def support_sites(self) -> tuple[Coord, ...]:
        return tuple(q for _, q in self.support)

    @property
    def weight(self) -> int:
        return len(self.support)


@dataclass(frozen=True, eq=False)
class CodeLayout:
    """Static geometry of a distance-L planar code.

    Immutable after construction; safe to share across concurrent trials.
    ``qubit_index`` assigns a dense simulator index to every data-qubit and
    check site (data qubits first, each block in sorted site order).
    """

    distance: int
    data_qubits: frozenset[Coord]
    checks: tuple[CheckOperator, ...]
    links: tuple[Link, ...]
    logical_z: tuple[Coord, ...]
    logical_x: tuple[Coord, ...]
    check_at: dict[Coord, CheckOperator] = field(repr=False)
    qubit_index: dict[Coord, int] = field(repr=False)

    @property
    def grid_size(self) -> int:
        return 2 * self.distance - 1

    @property
    def n_qubits(self) -> int:
        return len(self.qubit_index)

    def in_grid(self, site: Coord) -> bool:
        n = self.grid_size
        return 0 <= site[0] < n and 0 <= site[1] < n

    def stars(self) -> list[CheckOperator]:
        return [ch for ch in self.checks if ch.kind == STAR]

    def plaquettes(self) -> list[CheckOperator]:
        return [ch for ch in self.checks if ch.kind == PLAQUETTE]

    def adjacent_check_sites(self, q: Coord, kind: str) -> list[Coord]:
        """Sites of the 0-2 in-grid checks of ``kind`` whose support contains q.

        Star neighbours of a data qubit lie along one axis and plaquette
        neighbours along the other, fixed by the row parity of q.
        """
        r, c = q
        if kind == STAR:
            cands = [(r - 1, c), (r + 1, c)] if r % 2 == 0 else [(r, c - 1), (r, c + 1)]
        else:
            cands = [(r, c - 1), (r, c + 1)] if r % 2 == 0 else [(r - 1, c), (r + 1, c)]
        return [s for s in sorted(cands) if self.in_grid(s)]


def build_layout(L: int) -> CodeLayout:
    """Construct the distance-L planar code layout. Deterministic in L."""
    if not isinstance(L, int) or L < 2:
        raise ValueError(f"code distance must be an integer >= 2, got {L!r}")
    n = 2 * L - 1

    data = frozenset(
        (r, c) for r in range(n) for c in range(n) if (r + c) % 2 == 0
    )

    checks: list[CheckOperator] = []
    links: list[Link] = []
    check_at: dict[Coord, CheckOperator] = {}
    for r in range(n):
        for c in range(n):
            kind = site_kind((r, c))
            if kind is None:
                continue
            support = []
            for d in DIRECTIONS:
                q = step((r, c), d)
                if 0 <= q[0] < n and 0 <= q[1] < n:
                    support.append((d, q))
                    links.append(Link((r, c), d, q))
            ch = CheckOperator((r, c), kind, tuple(support))
            checks.append(ch)
            check_at[(r, c)] = ch

    logical_z = tuple((r, 0) for r in range(0, n, 2))
    logical_x = tuple((0, c) for c in range(0, n, 2))

    index: dict[Coord, int] = {}
    for q in sorted(data):
        index[q] = len(index)
    for ch in sorted(checks, key=lambda ch: ch.site):
        index[ch.site] = len(index)

    return CodeLayout(
        distance=L,
        data_qubits=data,
        checks=tuple(checks),
        links=tuple(links),
        logical_z=logical_z,
        logical_x=logical_x,
        check_at=check_at,
        qubit_index=index,
    )


def adjacent_checks(layout: CodeLayout, q: Coord, kind: str) -> list[CheckOperator]:
    """Checks of the given kind whose support contains data qubit q, by site order."""
    if q not in layout.data_qubits:
        raise ValueError(f"{q} is not a data-qubit site")
    if kind not in (STAR, PLAQUETTE):
        raise ValueError(f"unknown check kind {kind!r}")
    return [layout.check_at[s] for s in layout.adjacent_check_sites(q, kind)]
