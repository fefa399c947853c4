"""Connectivity of ball complements: bounded-component depth and end counts.

Working inside a truncated ball B(R), the components of B(R) \\ B(r) split
into those that reach the boundary sphere S(R) and those that do not. A
component that misses S(R) has no edges leaving B(R) at all, so it is a
genuine bounded component of the full complement; boundary-touching
components are the finite stand-in for unbounded ones. The depth value
computed here is the maximum distance over the bounded part, with the
convention that it equals r when no bounded component exists.

Certification: for a one ended group the bounded components left after
deleting B(r) lie within B(4r). Exploring to R >= 4r + 2 therefore captures
every bounded component strictly inside the truncation, which makes the
computed value exact rather than heuristic. The certified flag on results
records that both the radius condition and the one-endedness evidence held.

The vertex ids of a ball table are sorted by distance, which this module
exploits throughout: a union-find that always keeps the largest id as root
makes "component touches S(R)" a root range check and "deepest vertex" the
root itself.
"""

from __future__ import annotations

import json
from array import array
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InvalidParameter, TruncationTooSmall
from .explore import BallTable, explore
from .groups import GroupOracle, generator_words

#: Extra layers beyond the 4r bound: one so that a bounded component confined
#: in B(4r) cannot meet the boundary sphere, one more as slack for the annulus.
CERTIFIED_MARGIN = 2

CLASS_ZERO = "zero"
CLASS_ONE = "one"
CLASS_TWO = "two"
CLASS_INFINITE = "infinite"
CLASS_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Component:
    ids: tuple
    boundary_touching: bool

    @property
    def size(self) -> int:
        return len(self.ids)


@dataclass
class ComponentDecomposition:
    """Connected components of B(R) \\ B(r) inside one ball table."""

    r: int
    truncation: int
    components: tuple

    @property
    def touching_count(self) -> int:
        return sum(1 for c in self.components if c.boundary_touching)

    @property
    def bounded_components(self) -> list:
        return [c for c in self.components if not c.boundary_touching]

    @property
    def unbounded_candidates(self) -> list:
        return [c for c in self.components if c.boundary_touching]

    def bounded_ids(self) -> list:
        out = []
        for c in self.components:
            if not c.boundary_touching:
                out.extend(c.ids)
        return out

    def component_keys(self, table: BallTable) -> list:
        return [
            {"boundary_touching": c.boundary_touching,
             "vertices": [table.key_of(i) for i in c.ids]}
            for c in self.components
        ]


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def complement_components(table: BallTable, r: int,
                          truncation: Optional[int] = None) -> ComponentDecomposition:
    """Decompose B(truncation) \\ B(r) into connected components.

    Components are ordered by smallest member id and flagged as boundary
    touching when they contain a vertex at distance exactly ``truncation``.
    """
    if truncation is None:
        truncation = table.reached
    if truncation > table.reached:
        raise TruncationTooSmall(
            f"truncation {truncation} beyond explored radius {table.reached}")
    if r < 0 or r >= truncation:
        raise InvalidParameter(f"need 0 <= r < truncation, got r={r}, truncation={truncation}")

    lo = table.ball_size(r)
    hi = table.ball_size(truncation)
    touch_lo = table.ball_size(truncation - 1)

    parent = array("i", range(hi))
    indptr = table._adj_indptr
    adj = table._adj
    for u in range(lo, hi):
        for v in adj[indptr[u]:indptr[u + 1]]:
            if lo <= v < u:  # each edge once, from its larger endpoint
                ru = _find(parent, u)
                rv = _find(parent, v)
                if ru != rv:
                    if ru < rv:
                        ru, rv = rv, ru
                    parent[rv] = ru

    members: dict = {}
    for u in range(lo, hi):
        members.setdefault(_find(parent, u), []).append(u)
    comps = [
        Component(tuple(ids), root >= touch_lo)
        for root, ids in sorted(members.items(), key=lambda kv: kv[1][0])
    ]
    return ComponentDecomposition(r, truncation, tuple(comps))


def _complement_sweep(table: BallTable, snapshots: Sequence[int], truncation: int) -> dict:
    """One outside-in union-find pass; per snapshot radius r returns
    (component count, touching count, deepest bounded vertex id or None).

    Equivalent to running complement_components at every snapshot, but each
    edge is processed once for the whole sweep.
    """
    if truncation > table.reached:
        raise TruncationTooSmall(
            f"truncation {truncation} beyond explored radius {table.reached}")
    snaps = sorted(set(snapshots), reverse=True)
    if not snaps or snaps[0] >= truncation or snaps[-1] < 0:
        raise InvalidParameter(f"snapshots {snapshots} outside 0..{truncation - 1}")

    hi = table.ball_size(truncation)
    touch_lo = table.ball_size(truncation - 1)
    parent = array("i", range(hi))
    indptr = table._adj_indptr
    adj = table._adj

    results = {}
    components = 0
    touching = 0
    active_lo = hi
    for r in snaps:
        new_lo = table.ball_size(r)
        # activate ids top-down so every neighbor v > u is already active
        for u in range(active_lo - 1, new_lo - 1, -1):
            components += 1
            if u >= touch_lo:
                touching += 1
            ru = u
            for v in adj[indptr[u]:indptr[u + 1]]:
                if u < v < hi:
                    ru = _find(parent, ru)
                    rv = _find(parent, v)
                    if ru == rv:
                        continue
                    if ru < rv:
                        ru, rv = rv, ru
                    parent[rv] = ru
                    components -= 1
                    if rv >= touch_lo:  # both merged roots touched the boundary
                        touching -= 1
        active_lo = new_lo
        bounded_max = None
        for i in range(touch_lo - 1, active_lo - 1, -1):
            if parent[i] == i:
                bounded_max = i
                break
        results[r] = (components, touching, bounded_max)
    return results


@dataclass
class EndDepthResult:
    """Depth of the bounded complement components at one radius."""

    r: int
    value: int
    certified: bool
    truncation: int
    bounded_count: int
    ends_classification: Optional[str]
    not_one_ended_warning: bool
    nodes_explored: int

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "value": self.value,
            "certified": self.certified,
            "truncation": self.truncation,
            "bounded_components": self.bounded_count,
            "ends_classification": self.ends_classification,
            "not_one_ended_warning": self.not_one_ended_warning,
        }


def default_truncation(r: int) -> int:
    return 4 * r + CERTIFIED_MARGIN


def end_depth(oracle: GroupOracle, r: int, truncation: Optional[int] = None,
              one_ended: Optional[bool] = None, budget: Optional[int] = None,
              table: Optional[BallTable] = None) -> EndDepthResult:
    """Depth of the bounded components of the complement of B(r).

    With the default truncation 4r + 2 the value is certified exact provided
    the group is one ended; one-endedness is taken from ``one_ended`` when the
    caller asserts it, otherwise from an internal ends estimate on the same
    table. Groups whose estimate is not "one" get the value computed anyway,
    flagged with a warning, since the notion is only meaningful one ended.
    """
    if not isinstance(r, int) or r < 1:
        raise InvalidParameter(f"r must be a positive integer, got {r!r}")
    if truncation is None:
        truncation = default_truncation(r)
    if truncation <= r:
        raise InvalidParameter(f"truncation {truncation} must exceed r={r}")
    if table is None or (table.reached < truncation and not table.complete_group):
        table = explore(oracle, truncation, budget)

    if table.complete_group:
        # a finite group has no unbounded component: the whole complement of
        # B(r) is bounded, and the depth is the group's diameter
        truncation = table.reached
        if truncation <= r:
            value, bounded_count = r, 0
        else:
            components, _, _ = _complement_sweep(table, [r], truncation)[r]
            value, bounded_count = table.reached, components
        return EndDepthResult(r, value, False, truncation, bounded_count,
                              CLASS_ZERO, True, table.size)

    components, touching, bounded_max = _complement_sweep(table, [r], truncation)[r]
    value = r if bounded_max is None else table.dist[bounded_max]
    bounded_count = components - touching

    classification = None
    if one_ended is None:
        est = end_count_estimate(oracle, r, schedule=(truncation - 1, truncation),
                                 budget=budget, table=table)
        classification = est.classification
        one_ended_evidence = classification == CLASS_ONE
    else:
        one_ended_evidence = bool(one_ended)

    certified = truncation >= default_truncation(r) and one_ended_evidence
    warning = not one_ended_evidence
    return EndDepthResult(r, value, certified, truncation, bounded_count,
                          classification, warning, table.size)


@dataclass
class EndDepthProfile:
    """Depth values for every radius 1..r_max, with certification flags."""

    group: str
    generators: list
    entries: list                    # of EndDepthResult
    classification: str
    truncation_max: int
    nodes_explored: int

    def values(self) -> list:
        return [e.value for e in self.entries]

    def certified_entries(self) -> list:
        return [e for e in self.entries if e.certified]

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "generators": self.generators,
            "classification": self.classification,
            "truncation_max": self.truncation_max,
            "entries": [e.to_dict() for e in self.entries],
        }


def end_depth_profile(oracle: GroupOracle, r_max: int, budget: Optional[int] = None,
                      one_ended: Optional[bool] = None,
                      table: Optional[BallTable] = None,
                      truncation: Optional[int] = None) -> EndDepthProfile:
    """Profile r -> depth for r = 1..r_max over a single exploration.

    With the default truncation 4*r_max + 2, every bounded component of any
    complement in range lies strictly inside the explored ball, so per-radius
    values agree with individually truncated runs. A caller-supplied smaller
    truncation leaves the affected radii uncertified.
    """
    if not isinstance(r_max, int) or r_max < 1:
        raise InvalidParameter(f"r_max must be a positive integer, got {r_max!r}")
    if truncation is None:
        truncation = default_truncation(r_max)
    if truncation <= r_max:
        raise InvalidParameter(f"truncation {truncation} must exceed r_max={r_max}")
    if table is None or (table.reached < truncation and not table.complete_group):
        table = explore(oracle, truncation, budget)
    if table.complete_group:
        truncation = min(truncation, table.reached)
        if truncation <= r_max:
            raise InvalidParameter(
                f"the whole group lies within radius {table.reached}; "
                f"no complement to analyze at r_max={r_max}")

    radii = list(range(1, r_max + 1))
    sweep = _complement_sweep(table, radii, truncation)

    if table.complete_group:
        # every complement component of a finite group is bounded
        entries = [EndDepthResult(r, table.reached, False, truncation,
                                  sweep[r][0], CLASS_ZERO, True, table.size)
                   for r in radii]
        return EndDepthProfile(oracle.label(), generator_words(oracle), entries,
                               CLASS_ZERO, truncation, table.size)

    if one_ended is None:
        est = end_count_estimate(oracle, r_max, schedule=(truncation - 1, truncation),
                                 budget=budget, table=table)
        classification = est.classification
        one_ended_evidence = classification == CLASS_ONE
    else:
        classification = None
        one_ended_evidence = bool(one_ended)

    entries = []
    for r in radii:
        components, touching, bounded_max = sweep[r]
        value = r if bounded_max is None else table.dist[bounded_max]
        if value < r:
            raise AssertionError(f"depth {value} below r={r}: exploration is inconsistent")
        certified = one_ended_evidence and truncation >= default_truncation(r)
        entries.append(EndDepthResult(
            r, value, certified, truncation,
            components - touching, classification,
            not one_ended_evidence, table.size))

    return EndDepthProfile(oracle.label(), generator_words(oracle), entries,
                           classification, truncation, table.size)


@dataclass
class EndsEstimate:
    """Boundary-touching component counts and the end count they support.

    The classification snaps to the only possible values 0, 1, 2 or infinity;
    counts that have not stabilized across the last two truncations leave it
    inconclusive. This is finite evidence, not a proof.
    """

    group: str
    r_max: int
    schedule: tuple
    counts: dict                      # truncation -> [e(1), ..., e(r_max)]
    stable: list
    classification: str
    stabilized: Optional[int]
    complete_group: bool
    nodes_explored: int

    def final_counts(self) -> list:
        return self.counts[self.schedule[-1]]

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "r_max": self.r_max,
            "schedule": list(self.schedule),
            "counts": {str(t): c for t, c in self.counts.items()},
            "stable": self.stable,
            "classification": self.classification,
            "stabilized": self.stabilized,
            "complete_group": self.complete_group,
        }


def default_schedule(r_max: int) -> tuple:
    return (2 * r_max + 1, 2 * r_max + 3)


def end_count_estimate(oracle: GroupOracle, r_max: int,
                       schedule: Optional[Sequence[int]] = None,
                       budget: Optional[int] = None,
                       table: Optional[BallTable] = None) -> EndsEstimate:
    """Estimate the number of ends from component counts at growing truncations.

    e(r) is the number of boundary-touching components among the vertices at
    distance at least r (the open ball of radius r deleted), required to
    agree across the last two truncations of the schedule. A finite group
    (exhausted table) classifies as zero; eventually constant counts of 1 or
    2 classify as one or two; counts that keep growing past 2 classify as
    infinite. Everything else is inconclusive.
    """
    if not isinstance(r_max, int) or r_max < 1:
        raise InvalidParameter(f"r_max must be a positive integer, got {r_max!r}")
    if schedule is None:
        schedule = default_schedule(r_max)
    schedule = tuple(schedule)
    if len(schedule) < 2 or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise InvalidParameter(f"schedule must be strictly increasing with >= 2 entries: {schedule}")
    if schedule[0] <= r_max:
        raise InvalidParameter(f"schedule must start beyond r_max={r_max}: {schedule}")

    if table is None or (table.reached < schedule[-1] and not table.complete_group):
        table = explore(oracle, schedule[-1], budget)

    radii = list(range(1, r_max + 1))
    counts = {}
    for trunc in schedule:
        if table.complete_group and trunc > table.reached:
            counts[trunc] = None  # complement empty beyond the whole group
            continue
        # deleting the open ball: components of {v : d(v) >= r}
        sweep = _complement_sweep(table, [r - 1 for r in radii], trunc)
        counts[trunc] = [sweep[r - 1][1] for r in radii]

    if table.complete_group:
        return EndsEstimate(oracle.label(), r_max, schedule, counts, [],
                            CLASS_ZERO, 0, True, table.size)

    last, prev = counts[schedule[-1]], counts[schedule[-2]]
    stable = [a == b for a, b in zip(prev, last)]
    classification = CLASS_INCONCLUSIVE
    stabilized = None

    tail_from = max(1, (r_max + 1) // 2)
    tail = range(tail_from - 1, r_max)
    tail_stable = all(stable[i] for i in tail)
    if tail_stable:
        tail_values = {last[i] for i in tail}
        if tail_values == {1}:
            classification, stabilized = CLASS_ONE, 1
        elif tail_values == {2}:
            classification, stabilized = CLASS_TWO, 2
    if classification == CLASS_INCONCLUSIVE:
        nondecreasing = all(x <= y for x, y in zip(last, last[1:]))
        if all(stable) and nondecreasing and last[-1] >= 3:
            classification = CLASS_INFINITE
    return EndsEstimate(oracle.label(), r_max, schedule, counts, stable,
                        classification, stabilized, False, table.size)


@dataclass(frozen=True)
class WitnessItem:
    """One separating configuration: a small set K, a reach radius, and two
    vertex sets that should fall in different components around K."""

    K: tuple
    r: int
    A: tuple
    B: tuple


@dataclass
class ObssWitness:
    """Finite family of separating configurations with growing reach.

    Vertex sets are given by canonical key strings inside one ball table.
    """

    n: int
    items: list
    truncation: Optional[int] = None

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "items": [
                {"K": list(it.K), "r": it.r, "A": list(it.A), "B": list(it.B)}
                for it in self.items
            ],
        }
        if self.truncation is not None:
            d["truncation"] = self.truncation
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ObssWitness":
        try:
            items = [
                WitnessItem(tuple(it["K"]), int(it["r"]), tuple(it["A"]), tuple(it["B"]))
                for it in d["items"]
            ]
            return cls(int(d["n"]), items, d.get("truncation"))
        except (KeyError, TypeError) as exc:
            raise InvalidParameter(f"malformed witness: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "ObssWitness":
        return cls.from_dict(json.loads(text))


@dataclass
class WitnessItemReport:
    index: int
    r: int
    diam_K: int
    diam_K_ok: bool
    sets_nonempty: bool
    sets_disjoint: bool
    A_single_component: bool
    B_single_component: bool
    distinct_components: bool
    diam_A: Optional[int]
    diam_B: Optional[int]

    @property
    def passed(self) -> bool:
        return (self.diam_K_ok and self.sets_nonempty and self.sets_disjoint
                and self.A_single_component and self.B_single_component
                and self.distinct_components)

    def to_dict(self) -> dict:
        return {
            "index": self.index, "r": self.r,
            "diam_K": self.diam_K, "diam_K_ok": self.diam_K_ok,
            "sets_nonempty": self.sets_nonempty, "sets_disjoint": self.sets_disjoint,
            "A_single_component": self.A_single_component,
            "B_single_component": self.B_single_component,
            "distinct_components": self.distinct_components,
            "diam_A": self.diam_A, "diam_B": self.diam_B,
            "passed": self.passed,
        }


@dataclass
class WitnessReport:
    items: list
    r_strictly_increasing: bool
    diam_A_strictly_increasing: bool
    diam_B_strictly_increasing: bool
    note: str

    @property
    def passed(self) -> bool:
        return (all(it.passed for it in self.items)
                and self.r_strictly_increasing
                and self.diam_A_strictly_increasing
                and self.diam_B_strictly_increasing)

    def to_dict(self) -> dict:
        return {
            "items": [it.to_dict() for it in self.items],
            "r_strictly_increasing": self.r_strictly_increasing,
            "diam_A_strictly_increasing": self.diam_A_strictly_increasing,
            "diam_B_strictly_increasing": self.diam_B_strictly_increasing,
            "passed": self.passed,
            "note": self.note,
        }


_WITNESS_NOTE = (
    "Monotone growth over a finite witness list is evidence for more than one "
    "end, not a proof. The criterion is specific to Cayley graphs: a continuous "
    "half-line satisfies every finite condition here yet has a single end."
)


def check_obss_witness(table: BallTable, witness: ObssWitness) -> WitnessReport:
    """Check every separating condition of a witness against a ball table.

    Set diameters use the word metric restricted to the truncation, so they
    are exact whenever the set's diameter is at most the truncation radius
    minus the set's largest distance from the identity.
    """
    if not witness.items:
        raise InvalidParameter("witness has no items")
    if not isinstance(witness.n, int) or witness.n < 1:
        raise InvalidParameter(f"witness bound n must be a positive integer, got {witness.n!r}")

    item_reports = []
    diams_A, diams_B = [], []
    for idx, it in enumerate(witness.items):
        K = _resolve(table, it.K, f"items[{idx}].K")
        A = _resolve(table, it.A, f"items[{idx}].A")
        B = _resolve(table, it.B, f"items[{idx}].B")
        if it.r < 1:
            raise InvalidParameter(f"items[{idx}].r must be >= 1")
        max_dist = max(table.dist[v] for v in K)
        if max_dist + it.r > table.reached:
            raise TruncationTooSmall(
                f"items[{idx}]: need radius {max_dist + it.r}, table has {table.reached}")

        diam_K = table.set_diameter(K)
        # neighborhood with strict inequality: d(v, K) < r
        hood = set(table.bfs_from(K, max_depth=it.r - 1))
        region = hood.difference(K)
        comp_of = _component_map(table, region)

        nonempty = bool(A) and bool(B)
        disjoint = not (set(A) & set(B))
        a_comps = {comp_of.get(v) for v in A}
        b_comps = {comp_of.get(v) for v in B}
        a_single = len(a_comps) == 1 and None not in a_comps
        b_single = len(b_comps) == 1 and None not in b_comps
        distinct = a_single and b_single and a_comps != b_comps

        diam_A = table.set_diameter(A) if A else None
        diam_B = table.set_diameter(B) if B else None
        diams_A.append(diam_A)
        diams_B.append(diam_B)
        item_reports.append(WitnessItemReport(
            idx, it.r, diam_K, diam_K < witness.n, nonempty, disjoint,
            a_single, b_single, distinct, diam_A, diam_B))

    rs = [it.r for it in witness.items]
    r_inc = all(a < b for a, b in zip(rs, rs[1:]))
    a_inc = all(x is not None for x in diams_A) and all(
        a < b for a, b in zip(diams_A, diams_A[1:]))
    b_inc = all(x is not None for x in diams_B) and all(
        a < b for a, b in zip(diams_B, diams_B[1:]))
    return WitnessReport(item_reports, r_inc, a_inc, b_inc, _WITNESS_NOTE)


def _resolve(table: BallTable, keys: Sequence[str], where: str) -> list:
    ids = []
    for key in keys:
        vid = table.id_of_key(key)
        if vid is None:
            raise InvalidParameter(f"{where}: vertex {key!r} not in the explored ball")
        ids.append(vid)
    return ids


def _component_map(table: BallTable, region: set) -> dict:
    """Map each vertex of the region to a component representative."""
    comp_of = {}
    for start in sorted(region):
        if start in comp_of:
            continue
        for v in table.bfs_from([start], allowed=region):
            comp_of[v] = start
    return comp_of
