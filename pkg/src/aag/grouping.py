"""Agglomerative attribute grouping: greedy search for correlated subspaces.

The search starts from single-attribute subspaces and repeatedly unifies
the closest pair under the normalized multi-attribute measure. Each
agglomeration level snapshots its subspaces into the result set T, so no
attribute is ever lost: a rejected merge leaves its parts recorded at the
previous level.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .measures import normalized_measure, total_correlation
from .table import DiscreteTable

Attrs = tuple[int, ...]


def jaccard(a, b) -> float:
    """|a n b| / |a u b| for two attribute index collections."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        raise ValueError("jaccard of two empty sets is undefined")
    return len(sa & sb) / len(union)


@dataclass(frozen=True)
class Subspace:
    attrs: Attrs
    level: int


@dataclass(frozen=True)
class MergeEvent:
    """One decision of the search loop, for tracing and reporting.

    kind is one of: "seed" (the level's globally closest pair), "merge"
    (two current-level subspaces unified), "grow" (a current-level
    subspace absorbed into a next-level one). A "-pruned" suffix marks a
    union rejected by the total-correlation rule. ``alt`` and
    ``alt_measure`` hold the losing side of the grow-vs-merge comparison.
    """

    level: int
    kind: str
    left: Attrs
    right: Attrs
    result: Attrs | None
    measure: float
    alt: Attrs | None = None
    alt_measure: float | None = None


@dataclass
class SubspaceSet:
    """The search output T plus per-level snapshots and the event trace."""

    subspaces: list[Subspace]
    levels: list[list[Attrs]]
    events: list[MergeEvent] = field(default_factory=list)

    def attr_sets(self) -> list[Attrs]:
        return [s.attrs for s in self.subspaces]

    def to_json_dict(self) -> dict:
        return {
            "levels": [[list(attrs) for attrs in level] for level in self.levels],
            "subspaces": [{"attrs": list(s.attrs), "level": s.level} for s in self.subspaces],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SubspaceSet":
        return cls(
            subspaces=[Subspace(tuple(d["attrs"]), int(d["level"])) for d in doc["subspaces"]],
            levels=[[tuple(attrs) for attrs in level] for level in doc["levels"]],
        )

    @classmethod
    def from_json(cls, text: str) -> "SubspaceSet":
        return cls.from_json_dict(json.loads(text))


class PairCache:
    """Memo of normalized-measure values between attribute sets.

    Lookup is symmetric in the pair. The table is immutable, so entries
    are never invalidated.
    """

    def __init__(self):
        self._entries: dict[tuple[Attrs, Attrs], float] = {}

    def measure(self, table: DiscreteTable, a: Attrs, b: Attrs, cap: int) -> float:
        key = (a, b) if a <= b else (b, a)
        value = self._entries.get(key)
        if value is None:
            value = normalized_measure(table, a, b, cap=cap)
            self._entries[key] = value
        return value

    def __len__(self) -> int:
        return len(self._entries)


def should_unify(table: DiscreteTable, a, b, t: int) -> bool:
    """Decide whether unifying two subspaces preserves enough quality.

    The first two levels always unify. Later levels accept a union when
    its total correlation is at least the Jaccard-weighted sum of the
    parts' total correlations; disjoint parts with two or more attributes
    each always satisfy that and skip the evaluation, while a part nested
    inside the other can never satisfy it.
    """
    sa, sb = set(a), set(b)
    if t <= 2:
        return True
    if not (sa & sb) and len(sa) >= 2 and len(sb) >= 2:
        return True
    if sa <= sb or sb <= sa:
        return False
    union = tuple(sorted(sa | sb))
    v_a = len(sa) / len(union)
    v_b = len(sb) / len(union)
    tc_union = total_correlation(table, union)
    tc_a = total_correlation(table, tuple(sorted(sa)))
    tc_b = total_correlation(table, tuple(sorted(sb)))
    return tc_union >= v_a * tc_a + v_b * tc_b


def _pair_key(a: Attrs, b: Attrs) -> tuple[Attrs, Attrs]:
    return (a, b) if a <= b else (b, a)


def _union(a: Attrs, b: Attrs) -> Attrs:
    return tuple(sorted(set(a) | set(b)))


def run_aag(
    table: DiscreteTable,
    cap: int = 3,
    include_singletons: bool = False,
    use_cache: bool = True,
) -> SubspaceSet:
    """Run the agglomerative grouping on a discrete table.

    Per level t: the globally closest pair of level-t subspaces seeds
    level t+1; the remaining level-t subspaces are then consumed one at a
    time, each either absorbed into the closest level-(t+1) subspace or
    unified with its closest partner from the frozen level-t snapshot,
    whichever pairing measures closer. Every union passes the pruning
    rule in ``should_unify``. The loop stops when a level has fewer than
    two subspaces, or when a level prunes away every candidate union.

    Ties in every argmin break on the lexicographic order of the pair's
    sorted attribute tuples, so runs are deterministic. With
    ``use_cache`` off, every measure is recomputed from scratch; the
    output must not change.
    """
    if table.n_attrs < 2:
        raise ValueError("grouping needs at least two attributes")
    cache = PairCache() if use_cache else None

    def measure(a: Attrs, b: Attrs) -> float:
        if cache is not None:
            return cache.measure(table, a, b, cap)
        return normalized_measure(table, a, b, cap=cap)

    current: list[Attrs] = [(i,) for i in range(table.n_attrs)]
    t = 1
    levels: list[list[Attrs]] = []
    recorded: list[Subspace] = []
    seen: set[Attrs] = set()
    events: list[MergeEvent] = []

    def record_level(members: list[Attrs], level: int) -> None:
        levels.append(list(members))
        for attrs in members:
            if attrs not in seen:
                seen.add(attrs)
                recorded.append(Subspace(attrs, level))

    while True:
        record_level(current, t)
        if len(current) < 2:
            break
        frozen = list(current)
        nxt: list[Attrs] = []
        merged_any = False

        # seed the next level with the globally closest pair
        best = min(
            ((measure(a, b), _pair_key(a, b)) for i, a in enumerate(current) for b in current[i + 1:]),
            key=lambda item: (item[0], item[1]),
        )
        d_seed, (a, b) = best
        current.remove(a)
        current.remove(b)
        u = _union(a, b)
        if should_unify(table, a, b, t):
            if u not in nxt:
                nxt.append(u)
            merged_any = True
            events.append(MergeEvent(t, "seed", a, b, u, d_seed))
        else:
            events.append(MergeEvent(t, "seed-pruned", a, b, None, d_seed))

        # consume the rest of the level
        while current and nxt:
            d_grow, (a_i, a_j) = min(
                ((measure(x, y), (x, y)) for x in current for y in nxt),
                key=lambda item: (item[0], _pair_key(*item[1])),
            )
            d_pair, a_k = min(
                ((measure(x, a_i), x) for x in frozen if x != a_i),
                key=lambda item: (item[0], item[1]),
            )
            if d_grow >= d_pair:
                # unify a_i with its frozen-snapshot partner
                current.remove(a_i)
                if a_k in current:
                    current.remove(a_k)
                u = _union(a_i, a_k)
                if should_unify(table, a_i, a_k, t):
                    if u not in nxt:
                        nxt.append(u)
                    merged_any = True
                    events.append(MergeEvent(t, "merge", a_i, a_k, u, d_pair, a_j, d_grow))
                else:
                    events.append(MergeEvent(t, "merge-pruned", a_i, a_k, None, d_pair, a_j, d_grow))
            else:
                # absorb a_i into the next-level subspace a_j
                current.remove(a_i)
                u = _union(a_i, a_j)
                if should_unify(table, a_i, a_j, t):
                    if u != a_j:
                        idx = nxt.index(a_j)
                        if u in nxt:
                            nxt.pop(idx)  # grown form already present elsewhere
                        else:
                            nxt[idx] = u
                    merged_any = True
                    events.append(MergeEvent(t, "grow", a_i, a_j, u, d_grow, a_k, d_pair))
                else:
                    events.append(MergeEvent(t, "grow-pruned", a_i, a_j, None, d_grow, a_k, d_pair))

        if current:
            # pruning emptied the next level before the loop could run
            if merged_any:
                nxt.extend(x for x in current if x not in nxt)
            else:
                break
        current = nxt
        t += 1

    kept = [s for s in recorded if include_singletons or len(s.attrs) > 1]
    return SubspaceSet(subspaces=kept, levels=levels, events=events)
