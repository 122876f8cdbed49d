"""Partition-based information measures over a discrete table.

All quantities are in bits (base-2 logarithms). The joint partition of an
attribute set is the common refinement of the per-attribute partitions;
its empirical block frequencies induce the probabilities behind every
measure here.

Measure cheat sheet, for attribute sets a, b and their union u:

  entropy            H(u)      = -sum_B (|B|/N) log2(|B|/N)
  conditional        H(a|b)    = H(a u b) - H(b)
  pair distance      d(a,b)    = H(a|b) + H(b|a)            (a metric)
  interaction info   ii(x,y,z) = I(x;y) - I(x;y|z)          (signed)
  multi-attribute    m({..})   = sum_i H(A_i | rest) + ii
  total correlation  tc(u)     = sum_i H(A_i) - H(u)
  normalized         nm(a,b)   = m(a u b) / H(a u b)

For unions larger than ``cap`` the multi-attribute and normalized measures
fall back to the best cap-sized subset, which keeps the joint partitions
coarse enough to estimate from N rows.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .table import DiscreteTable, Partition, validate_attrs


def _joint_inverse(table: DiscreteTable, attrs: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Block ids (sorted-key order) and block sizes of the joint partition."""
    cur = table.column(attrs[0])
    for a in attrs[1:]:
        cur = cur * table.arities[a] + table.column(a)
        # re-densify so ids stay < n_rows and products cannot overflow
        _, cur = np.unique(cur, return_inverse=True)
    _, inverse, counts = np.unique(cur, return_inverse=True, return_counts=True)
    return inverse, counts


def induce_partition(table: DiscreteTable, attrs) -> Partition:
    """Joint partition of the rows: two rows share a block iff they agree
    on every attribute in ``attrs``. Block ids follow first-occurrence
    row order, so the result is byte-reproducible."""
    attrs = validate_attrs(table, attrs)
    inverse, counts = _joint_inverse(table, attrs)
    first_row = np.full(counts.size, table.n_rows, dtype=np.int64)
    np.minimum.at(first_row, inverse, np.arange(table.n_rows))
    order = np.argsort(first_row, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return Partition(block_of=rank[inverse], block_sizes=counts[order], n_rows=table.n_rows)


def entropy(partition: Partition) -> float:
    """Shannon entropy of a partition, in bits. 0 log 0 counts as 0."""
    return _entropy_from_counts(partition.block_sizes, partition.n_rows)


def _entropy_from_counts(counts: np.ndarray, n: int) -> float:
    # log2(n) - sum(c*log2(c))/n is exact (0.0) for the single-block case
    c = counts[counts > 0].astype(np.float64)
    return float(np.log2(n) - np.dot(c, np.log2(c)) / n)


def joint_entropy(table: DiscreteTable, attrs) -> float:
    """Entropy of the joint partition over ``attrs``, memoized per table."""
    attrs = validate_attrs(table, attrs)
    memo = table._entropy_memo
    h = memo.get(attrs)
    if h is None:
        _, counts = _joint_inverse(table, attrs)
        h = _entropy_from_counts(counts, table.n_rows)
        memo[attrs] = h
    return h


def conditional_entropy(table: DiscreteTable, target, given) -> float:
    """H(target | given) = H(target u given) - H(given)."""
    target = validate_attrs(table, target)
    given = validate_attrs(table, given)
    union = tuple(sorted(set(target) | set(given)))
    return joint_entropy(table, union) - joint_entropy(table, given)


def mutual_information(table: DiscreteTable, a, b) -> float:
    """I(a;b) = H(a) + H(b) - H(a u b)."""
    a = validate_attrs(table, a)
    b = validate_attrs(table, b)
    union = tuple(sorted(set(a) | set(b)))
    return joint_entropy(table, a) + joint_entropy(table, b) - joint_entropy(table, union)


def rokhlin_distance(table: DiscreteTable, a, b) -> float:
    """H(a|b) + H(b|a). Symmetric; zero iff the joint partitions coincide."""
    a = validate_attrs(table, a)
    b = validate_attrs(table, b)
    union = tuple(sorted(set(a) | set(b)))
    d = 2.0 * joint_entropy(table, union) - joint_entropy(table, a) - joint_entropy(table, b)
    return max(0.0, d)


def interaction_information(table: DiscreteTable, attrs) -> float:
    """Shared higher-order information of two or three attributes. Zero by
    definition for a pair. For a triple this is I(x;y) - I(x;y|z), which is
    symmetric in the three attributes and may be negative.

    Arities above three are rejected: the joint partitions they need are
    too refined to estimate, and no caller requires them.
    """
    attrs = validate_attrs(table, attrs)
    if len(attrs) == 2:
        return 0.0
    if len(attrs) != 3:
        raise ValueError(f"interaction information supports 2 or 3 attributes, got {len(attrs)}")
    x, y, z = attrs
    h = lambda *s: joint_entropy(table, s)  # noqa: E731
    return (
        h(x) + h(y) + h(z)
        - h(x, y) - h(x, z) - h(y, z)
        + h(x, y, z)
    )


def _exact_multi_attribute(table: DiscreteTable, attrs: tuple[int, ...]) -> float:
    if len(attrs) == 2:
        return rokhlin_distance(table, (attrs[0],), (attrs[1],))
    total = 0.0
    for i in attrs:
        rest = tuple(a for a in attrs if a != i)
        total += joint_entropy(table, attrs) - joint_entropy(table, rest)
    return total + interaction_information(table, attrs)


def multi_attribute_measure(table: DiscreteTable, attrs, cap: int = 3) -> float:
    """Information distance within a set of attributes; small values mark
    highly correlated sets.

    Exact for sets of at most ``cap`` attributes (a pair reduces to the
    Rokhlin distance). Larger sets are scored by the minimum exact value
    over all cap-sized subsets. Subsets whose joint entropy is zero carry
    no information and the all-constant degenerate case scores 0.
    """
    attrs = validate_attrs(table, attrs)
    if len(attrs) < 2:
        raise ValueError("multi-attribute measure needs at least two attributes")
    if cap not in (2, 3):
        raise ValueError("cap must be 2 or 3")
    if len(attrs) <= cap:
        return _exact_multi_attribute(table, attrs)
    return min(_exact_multi_attribute(table, s) for s in combinations(attrs, cap))


def _subset_score(table: DiscreteTable, attrs: tuple[int, ...]) -> float | None:
    """m(attrs)/H(attrs), memoized; None when the set carries no information."""
    memo = table._subset_score_memo
    if attrs in memo:
        return memo[attrs]
    h = joint_entropy(table, attrs)
    score = None if h == 0.0 else _exact_multi_attribute(table, attrs) / h
    memo[attrs] = score
    return score


def normalized_measure(table: DiscreteTable, a, b, cap: int = 3) -> float:
    """Multi-attribute measure of a u b divided by the joint entropy of
    a u b, which makes subspaces of different sizes comparable.

    When the union exceeds ``cap`` attributes, the value is the minimum of
    m(S)/H(S) over cap-sized subsets S that touch both sides; a subset
    drawn from one side alone says nothing about the pair. Degenerate
    subsets with H(S) = 0 are skipped, and the result is 0 when every
    candidate is degenerate.
    """
    a = validate_attrs(table, a)
    b = validate_attrs(table, b)
    union = tuple(sorted(set(a) | set(b)))
    if len(union) < 2:
        raise ValueError("the union of the two attribute sets needs at least two attributes")
    if cap not in (2, 3):
        raise ValueError("cap must be 2 or 3")
    if len(union) <= cap:
        score = _subset_score(table, union)
        return 0.0 if score is None else score
    set_a, set_b = set(a), set(b)
    best = None
    for s in combinations(union, cap):
        ss = set(s)
        if not (ss & set_a) or not (ss & set_b):
            continue
        value = _subset_score(table, s)
        if value is not None and (best is None or value < best):
            best = value
    return 0.0 if best is None else best


def total_correlation(table: DiscreteTable, attrs) -> float:
    """sum_i H(A_i) - H(joint). Non-negative; 0 for a single attribute."""
    attrs = validate_attrs(table, attrs)
    tc = sum(joint_entropy(table, (a,)) for a in attrs) - joint_entropy(table, attrs)
    return max(0.0, tc)


def symmetric_uncertainty(table: DiscreteTable, a: int, b: int) -> float:
    """2 I(a;b) / (H(a) + H(b)), in [0, 1]. Two constant attributes give 0."""
    a_t = validate_attrs(table, (a,))
    b_t = validate_attrs(table, (b,))
    ha = joint_entropy(table, a_t)
    hb = joint_entropy(table, b_t)
    if ha + hb == 0.0:
        return 0.0
    return 2.0 * mutual_information(table, a_t, b_t) / (ha + hb)
