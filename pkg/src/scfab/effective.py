"""Fabrication errors and the effective code they leave behind.

Faulty links and faulty syndrome qubits are mapped to disabled data
qubits; damaged checks of each type are merged into supercheck groups by
union-find over shared disabled qubits; checks stranded at a lattice edge
are disabled outright (boundary redefinition, iterated to a fixpoint); the
surviving group structure yields effective logical operators, effective
distances and the percolation status of the instance.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels as _k
from .geometry import (
    PLAQUETTE,
    STAR,
    CodeLayout,
    Coord,
    Link,
    build_layout,
)

_STAR_SIDES = ("top", "bottom")
_PLAQ_SIDES = ("left", "right")


# ---------------------------------------------------------------------------
# Flat array view of a layout (cached per distance; kernels work on these)
# ---------------------------------------------------------------------------


class LayoutArrays:
    def __init__(self, layout: CodeLayout):
        self.layout = layout
        n = layout.grid_size
        self.gridmax = n - 1

        self.data_sites = sorted(layout.data_qubits)
        self.data_idx = {q: i for i, q in enumerate(self.data_sites)}
        self.star_sites = sorted(ch.site for ch in layout.checks if ch.kind == STAR)
        self.plaq_sites = sorted(ch.site for ch in layout.checks if ch.kind == PLAQUETTE)
        self.star_idx = {s: i for i, s in enumerate(self.star_sites)}
        self.plaq_idx = {s: i for i, s in enumerate(self.plaq_sites)}
        self.check_sites = sorted(layout.check_at)  # faulty-qubit draw order

        nd = len(self.data_sites)
        self.data_row = np.array([q[0] for q in self.data_sites], np.int16)
        self.data_col = np.array([q[1] for q in self.data_sites], np.int16)
        self.star_row = np.array([s[0] for s in self.star_sites], np.int32)
        self.plaq_col = np.array([s[1] for s in self.plaq_sites], np.int32)

        self.star_adj = np.full((nd, 2), -1, np.int32)
        self.plaq_adj = np.full((nd, 2), -1, np.int32)
        for i, q in enumerate(self.data_sites):
            for s, site in enumerate(self._slot_sites(q, STAR)):
                if layout.in_grid(site):
                    self.star_adj[i, s] = self.star_idx[site]
            for s, site in enumerate(self._slot_sites(q, PLAQUETTE)):
                if layout.in_grid(site):
                    self.plaq_adj[i, s] = self.plaq_idx[site]

        self.star_sup = np.full((len(self.star_sites), 4), -1, np.int32)
        self.plaq_sup = np.full((len(self.plaq_sites), 4), -1, np.int32)
        for ch in layout.checks:
            sup, idx = ((self.star_sup, self.star_idx[ch.site]) if ch.kind == STAR
                        else (self.plaq_sup, self.plaq_idx[ch.site]))
            for j, q in enumerate(ch.support_sites):
                sup[idx, j] = self.data_idx[q]

        self.link_data = np.array([self.data_idx[lk.data_site] for lk in layout.links],
                                  np.int32)
        self.chk_is_star = np.array(
            [layout.check_at[s].kind == STAR for s in self.check_sites], bool)
        self.chk_tidx = np.array(
            [self.star_idx[s] if layout.check_at[s].kind == STAR else self.plaq_idx[s]
             for s in self.check_sites], np.int32)

    @staticmethod
    def _slot_sites(q: Coord, kind: str) -> list[Coord]:
        r, c = q
        if kind == STAR:
            cands = [(r - 1, c), (r + 1, c)] if r % 2 == 0 else [(r, c - 1), (r, c + 1)]
        else:
            cands = [(r, c - 1), (r, c + 1)] if r % 2 == 0 else [(r - 1, c), (r + 1, c)]
        return sorted(cands)


@lru_cache(maxsize=None)
def _arrays_for_distance(L: int) -> LayoutArrays:
    return LayoutArrays(build_layout(L))


def layout_arrays(layout: CodeLayout) -> LayoutArrays:
    return _arrays_for_distance(layout.distance)


# ---------------------------------------------------------------------------
# Fabrication specification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FabricationSpec:
    """The permanent fabrication faults of one manufactured lattice."""

    faulty_qubits: frozenset[Coord]
    faulty_links: frozenset[Link]
    p_qubit: float = 0.0
    p_link: float = 0.0


def _check_rate(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {p}")


def sample_fabrication(layout: CodeLayout, p_qubit: float, p_link: float,
                       rng) -> FabricationSpec:
    """Draw independent qubit (data + syndrome) and link fabrication errors."""
    _check_rate("p_qubit", p_qubit)
    _check_rate("p_link", p_link)
    arr = layout_arrays(layout)
    fq, fl = _draw_faults(arr, p_qubit, p_link, rng)
    qubits = {arr.data_sites[i] for i in np.flatnonzero(fq[: len(arr.data_sites)])}
    qubits |= {arr.check_sites[i]
               for i in np.flatnonzero(fq[len(arr.data_sites):])}
    links = {layout.links[i] for i in np.flatnonzero(fl)}
    return FabricationSpec(frozenset(qubits), frozenset(links), p_qubit, p_link)


def _draw_faults(arr: LayoutArrays, p_qubit: float, p_link: float, rng):
    nq = len(arr.data_sites) + len(arr.check_sites)
    fq = rng.random(nq) < p_qubit if p_qubit > 0 else np.zeros(nq, bool)
    nl = arr.link_data.shape[0]
    fl = rng.random(nl) < p_link if p_link > 0 else np.zeros(nl, bool)
    return fq, fl


def map_to_disabled(layout: CodeLayout, spec: FabricationSpec) -> frozenset[Coord]:
    """Reduce all fabrication faults to a set of disabled data qubits.

    Faulty data qubits are disabled; a faulty link disables the data qubit
    it connects; a faulty syndrome qubit disables every data qubit in its
    check's support. Idempotent and monotone in the fault sets.
    """
    arr = layout_arrays(layout)
    bitmap = _disabled_bitmap(arr, spec)
    return frozenset(arr.data_sites[i] for i in np.flatnonzero(bitmap))


def _disabled_bitmap(arr: LayoutArrays, spec: FabricationSpec) -> np.ndarray:
    layout = arr.layout
    bitmap = np.zeros(len(arr.data_sites), np.uint8)
    for q in spec.faulty_qubits:
        if q in arr.data_idx:
            bitmap[arr.data_idx[q]] = 1
        elif q in layout.check_at:
            for site in layout.check_at[q].support_sites:
                bitmap[arr.data_idx[site]] = 1
        else:
            raise ValueError(f"faulty qubit {q} is not a site of this layout")
    for lk in spec.faulty_links:
        if lk.data_site not in arr.data_idx or lk.check_site not in layout.check_at:
            raise ValueError(f"faulty link {lk} does not belong to this layout")
        bitmap[arr.data_idx[lk.data_site]] = 1
    return bitmap


def _bitmap_from_faults(arr: LayoutArrays, fq: np.ndarray, fl: np.ndarray) -> np.ndarray:
    """Array fast path of map_to_disabled for the classical experiment sweeps."""
    nd = len(arr.data_sites)
    bitmap = fq[:nd].astype(np.uint8).copy()
    bitmap[arr.link_data[fl]] = 1
    for k in np.flatnonzero(fq[nd:]):
        sup = arr.star_sup[arr.chk_tidx[k]] if arr.chk_is_star[k] else \
            arr.plaq_sup[arr.chk_tidx[k]]
        bitmap[sup[sup >= 0]] = 1
    return bitmap


# ---------------------------------------------------------------------------
# Effective code
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SupercheckGroup:
    kind: str
    index: int
    members: tuple[Coord, ...]          # checks with a surviving circuit
    member_support: dict[Coord, tuple[Coord, ...]]
    # Support of the product operator: qubits covered by an odd number of
    # members (a surviving qubit shared by two members cancels out).
    support: frozenset[Coord]
    damaged: bool

    @property
    def weight(self) -> int:
        return len(self.support)


@dataclass(frozen=True, eq=False)
class EffectiveCode:
    """Derived code of one fabricated lattice after fault mapping."""

    layout: CodeLayout
    disabled_data: frozenset[Coord]
    star_groups: tuple[SupercheckGroup, ...]
    plaq_groups: tuple[SupercheckGroup, ...]
    group_of: dict[Coord, int]          # check site -> group index (its kind)
    disabled_checks: dict[Coord, str]   # boundary-redefined checks -> side
    effective_logical_z: tuple[Coord, ...] | None
    effective_logical_x: tuple[Coord, ...] | None
    bare_logical_z: tuple[Coord, ...] | None
    bare_logical_x: tuple[Coord, ...] | None
    percolated: bool

    def groups(self, kind: str) -> tuple[SupercheckGroup, ...]:
        return self.star_groups if kind == STAR else self.plaq_groups

    @property
    def effective_distance_z(self) -> int | None:
        path = self.effective_logical_z
        return None if path is None else len(path)

    @property
    def effective_distance_x(self) -> int | None:
        path = self.effective_logical_x
        return None if path is None else len(path)

    @property
    def effective_distance(self) -> int | None:
        """min(L'_Z, L'_X); None when percolated."""
        dz, dx = self.effective_distance_z, self.effective_distance_x
        if dz is None or dx is None:
            return None
        return min(dz, dx)

    @property
    def max_supercheck_weight(self) -> int:
        weights = [g.weight for g in self.star_groups + self.plaq_groups]
        return max(weights, default=0)


def _classify(arr: LayoutArrays, bitmap: np.ndarray):
    return _k.classify_checks(
        bitmap, arr.star_adj, arr.plaq_adj, arr.star_sup, arr.plaq_sup,
        arr.data_row, arr.data_col, arr.star_row, arr.plaq_col, arr.gridmax)


def build_effective_code(layout: CodeLayout, disabled) -> EffectiveCode:
    """Group damaged checks, redefine boundaries and find logical operators."""
    disabled = frozenset(disabled)
    if not disabled <= layout.data_qubits:
        raise ValueError("disabled set contains non-data sites")
    arr = layout_arrays(layout)
    bitmap = np.zeros(len(arr.data_sites), np.uint8)
    for q in disabled:
        bitmap[arr.data_idx[q]] = 1

    s_root, s_dis, s_side, p_root, p_dis, p_side = _classify(arr, bitmap)

    group_of: dict[Coord, int] = {}
    disabled_checks: dict[Coord, str] = {}
    star_groups = _build_groups(arr, STAR, bitmap, s_root, s_dis, s_side,
                                group_of, disabled_checks)
    plaq_groups = _build_groups(arr, PLAQUETTE, bitmap, p_root, p_dis, p_side,
                                group_of, disabled_checks)

    # Spanning logical operators are sought on the original lattice graph
    # (check sites as vertices, functioning qubits as edges, true edges as
    # terminals); failing to find one for either type is a percolated
    # instance. The group graph then gives the shortest harmful string.
    bare_z = _bare_path(arr, bitmap, STAR)
    bare_x = _bare_path(arr, bitmap, PLAQUETTE)
    eff_z = _group_path(arr, bitmap, STAR, s_root, s_dis, s_side, group_of) \
        if bare_z is not None else None
    eff_x = _group_path(arr, bitmap, PLAQUETTE, p_root, p_dis, p_side, group_of) \
        if bare_x is not None else None
    percolated = eff_z is None or eff_x is None

    return EffectiveCode(
        layout=layout,
        disabled_data=disabled,
        star_groups=star_groups,
        plaq_groups=plaq_groups,
        group_of=group_of,
        disabled_checks=disabled_checks,
        effective_logical_z=eff_z,
        effective_logical_x=eff_x,
        bare_logical_z=bare_z,
        bare_logical_x=bare_x,
        percolated=percolated,
    )


def _build_groups(arr, kind, bitmap, root, dis, side, group_of, disabled_checks):
    sites = arr.star_sites if kind == STAR else arr.plaq_sites
    sup = arr.star_sup if kind == STAR else arr.plaq_sup
    sides = _STAR_SIDES if kind == STAR else _PLAQ_SIDES
    by_root: dict[int, list[int]] = {}
    for c in range(len(sites)):
        if dis[c]:
            disabled_checks[sites[c]] = sides[side[c]]
        else:
            by_root.setdefault(int(root[c]), []).append(c)

    groups: list[SupercheckGroup] = []
    for rt in sorted(by_root):
        idx = len(groups)
        members = []
        member_support = {}
        multiplicity: dict[Coord, int] = {}
        damaged = False
        for c in by_root[rt]:
            surv = tuple(arr.data_sites[q] for q in sup[c] if q >= 0 and not bitmap[q])
            if len(surv) != np.count_nonzero(sup[c] >= 0):
                damaged = True
            if surv:
                members.append(sites[c])
                member_support[sites[c]] = surv
                for q in surv:
                    multiplicity[q] = multiplicity.get(q, 0) + 1
            group_of[sites[c]] = idx
        if len(by_root[rt]) > 1:
            damaged = True
        joint = frozenset(q for q, cnt in multiplicity.items() if cnt % 2)
        groups.append(SupercheckGroup(
            kind=kind, index=idx, members=tuple(sorted(members)),
            member_support=member_support, support=joint,
            damaged=damaged))
    return tuple(groups)


def _endpoints(arr, kind, q_idx, root_or_none, dis, side):
    """Graph endpoints of data qubit q: group/check ids or boundary tags.

    With ``dis`` None the original lattice graph is used (every check site
    is a vertex, only true edges terminate); otherwise boundary-disabled
    groups are absorbed into their boundary tag.
    """
    adj = arr.star_adj if kind == STAR else arr.plaq_adj
    coord = arr.data_row if kind == STAR else arr.data_col
    sides = _STAR_SIDES if kind == STAR else _PLAQ_SIDES
    out = []
    for s in range(2):
        c = adj[q_idx, s]
        if c < 0:
            out.append(sides[0] if coord[q_idx] == 0 else sides[1])
        elif dis is not None and dis[c]:
            out.append(sides[side[c]])
        else:
            out.append(int(root_or_none[c]) if root_or_none is not None else int(c))
    return out


def _shortest_boundary_path(adjacency, start, goal):
    """BFS over (node -> [(node, qubit)]); returns the qubit labels on a path."""
    prev: dict = {start: None}
    dq = deque([start])
    while dq:
        node = dq.popleft()
        if node == goal:
            path = []
            while prev[node] is not None:
                node, q = prev[node]
                path.append(q)
            return tuple(reversed(path))
        for other, q in adjacency.get(node, ()):
            if other not in prev:
                prev[other] = (node, q)
                dq.append(other)
    return None


def _path_graph(arr, bitmap, kind, root_or_none, dis, side):
    sides = _STAR_SIDES if kind == STAR else _PLAQ_SIDES
    adjacency: dict = {}
    for q_idx in range(len(arr.data_sites)):
        if bitmap[q_idx]:
            continue
        e1, e2 = _endpoints(arr, kind, q_idx, root_or_none, dis, side)
        if e1 == e2:
            continue
        q = arr.data_sites[q_idx]
        adjacency.setdefault(e1, []).append((e2, q))
        adjacency.setdefault(e2, []).append((e1, q))
    return adjacency, sides


def _group_path(arr, bitmap, kind, root, dis, side, group_of):
    adjacency, sides = _path_graph(arr, bitmap, kind, root, dis, side)
    return _shortest_boundary_path(adjacency, sides[0], sides[1])


def _bare_path(arr, bitmap, kind):
    adjacency, sides = _path_graph(arr, bitmap, kind, None, None, None)
    return _shortest_boundary_path(adjacency, sides[0], sides[1])


def effective_distance(effcode: EffectiveCode, layout: CodeLayout,
                       kind: str) -> tuple[tuple[Coord, ...], int] | None:
    """Shortest surviving logical operator of the given type, or None.

    kind "Z" walks the star-group graph top to bottom; kind "X" walks the
    plaquette-group graph left to right. The path weight counts functioning
    data qubits.
    """
    k = kind.upper()
    if k == "Z":
        path = effcode.effective_logical_z
    elif k == "X":
        path = effcode.effective_logical_x
    else:
        raise ValueError(f"kind must be 'Z' or 'X', got {kind!r}")
    if path is None:
        return None
    return path, len(path)


def analytic_percolation_estimate(p: float, kind: str) -> tuple[float, float]:
    """Bulk data-qubit disablement probability and the 50% rate p*.

    A bulk data qubit has 4 links, so link faults disable it with
    probability 1-(1-p)^4; it is lost to qubit faults when it or any of
    the 4 adjacent syndrome qubits is faulty: 1-(1-p)^5.
    """
    _check_rate("p", p)
    if kind == "link":
        exponent = 4
    elif kind == "qubit":
        exponent = 5
    else:
        raise ValueError(f"kind must be 'link' or 'qubit', got {kind!r}")
    prob = 1.0 - (1.0 - p) ** exponent
    p_star = 1.0 - 0.5 ** (1.0 / exponent)
    return prob, p_star


def percolation_status(layout: CodeLayout, bitmap: np.ndarray) -> bool:
    """Fast percolation check: True when no spanning logical operator exists.

    Connectivity is tested edge-to-edge on the original lattice graph
    (check sites as vertices, functioning data qubits as bonds), matching
    the bulk analytic estimate's 50% disablement criterion.
    """
    arr = layout_arrays(layout)
    ident_s = np.arange(len(arr.star_sites), dtype=np.int32)
    ident_p = np.arange(len(arr.plaq_sites), dtype=np.int32)
    no_dis_s = np.zeros(len(arr.star_sites), np.uint8)
    no_dis_p = np.zeros(len(arr.plaq_sites), np.uint8)
    no_side_s = np.full(len(arr.star_sites), -1, np.int8)
    no_side_p = np.full(len(arr.plaq_sites), -1, np.int8)
    for adj, root, dis, side, coord in (
        (arr.star_adj, ident_s, no_dis_s, no_side_s, arr.data_row),
        (arr.plaq_adj, ident_p, no_dis_p, no_side_p, arr.data_col),
    ):
        if not _k.spanning_path_exists(bitmap, adj, root, dis, side,
                                       coord.astype(np.int16), arr.gridmax):
            return True
    return False


# ---------------------------------------------------------------------------
# Fabrication pattern files
# ---------------------------------------------------------------------------


def parse_fabrication_file(text: str, layout: CodeLayout) -> FabricationSpec:
    """Parse the fabrication pattern format: ``Q r c`` / ``L r c d`` records."""
    qubits: set[Coord] = set()
    links: set[Link] = set()
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "Q" and len(parts) == 3:
                site = (int(parts[1]), int(parts[2]))
                if not layout.in_grid(site) or (
                        site not in layout.data_qubits and site not in layout.check_at):
                    raise ValueError
                qubits.add(site)
            elif parts[0] == "L" and len(parts) == 4:
                site = (int(parts[1]), int(parts[2]))
                d = parts[3]
                ch = layout.check_at.get(site)
                if ch is None:
                    raise ValueError
                data = dict(ch.support).get(d)
                if data is None:
                    raise ValueError
                links.add(Link(site, d, data))
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise ValueError(f"bad fabrication record on line {ln}: {raw!r}") from None
    return FabricationSpec(frozenset(qubits), frozenset(links))


def format_fabrication_spec(spec: FabricationSpec) -> str:
    lines = ["# fabrication pattern: Q r c | L r c d"]
    for q in sorted(spec.faulty_qubits):
        lines.append(f"Q {q[0]} {q[1]}")
    for lk in sorted(spec.faulty_links, key=lambda l: (l.check_site, l.direction)):
        lines.append(f"L {lk.check_site[0]} {lk.check_site[1]} {lk.direction}")
    return "\n".join(lines) + "\n"
