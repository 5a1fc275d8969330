"""Adaptive-ordering Doob martingales on {0,1}^n.

The revelation order is chosen node by node: always the minimum
unrevealed index that is either deterministic under the current
conditioning or has influence sum at most 1.  For measures with negative
regression this yields martingale increments confined to an interval of
width 2 (width 1 for monotone f).  A fixed-ordering comparator builds
the same tree with a prescribed permutation and no width guarantee.

All node quantities (probabilities, conditional expectations, interval
ends) are exact rationals.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .bitops import bits_from_mask, cap
from .errors import (
    IntervalViolation,
    LemmaViolated,
    NoEligibleIndex,
    TooLarge,
    ZeroProbabilityEvent,
)
from .measure import Assignment, ExplicitMeasure, TestFunction, format_rational

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class PickResult:
    """Outcome of the index-selection rule at one conditioning event."""

    index: int
    deterministic: bool
    influence_sum: Optional[Fraction]

    def __post_init__(self):
        if not self.deterministic and self.influence_sum is None:
            raise ValueError("non-deterministic pick must carry its influence sum")


def _conditional_atoms(m: ExplicitMeasure, revealed: Assignment):
    """Integer-weighted atoms matching the assignment, and their total."""
    _, w = m.scaled_weights()
    atoms = [(k, v) for k, v in sorted(w.items()) if revealed.matches(k)]
    total = sum(v for _, v in atoms)
    if total == 0:
        raise ZeroProbabilityEvent("conditioning event has probability 0")
    return atoms, total


def _influence_terms(atoms, bit: int, others_mask: int):
    """(w1, w0, S1, S0): one-weights of the candidate and the weighted
    one-counts of the other unrevealed variables on each branch."""
    w1 = s1 = s0 = 0
    total = 0
    for mask, weight in atoms:
        total += weight
        ones = (mask & others_mask).bit_count() * weight
        if mask & bit:
            w1 += weight
            s1 += ones
        else:
            s0 += ones
    return w1, total - w1, s1, s0


def _pick_from_atoms(atoms, n: int, revealed_mask: int) -> PickResult:
    unrevealed = [i for i in range(1, n + 1) if not revealed_mask >> (i - 1) & 1]
    if not unrevealed:
        raise NoEligibleIndex("every variable is already revealed")
    full_unrevealed = 0
    for i in unrevealed:
        full_unrevealed |= 1 << (i - 1)
    for i in unrevealed:
        bit = 1 << (i - 1)
        w1, w0, s1, s0 = _influence_terms(atoms, bit, full_unrevealed & ~bit)
        if w1 == 0 or w0 == 0:
            return PickResult(i, True, None)
        influence = Fraction(s0, w0) - Fraction(s1, w1)
        if influence <= 1:
            return PickResult(i, False, influence)
    raise NoEligibleIndex(
        "no unrevealed index is deterministic or has influence sum <= 1"
    )


def pick_index(m: ExplicitMeasure, revealed: Assignment) -> PickResult:
    """The minimum unrevealed index that is deterministic given the
    assignment or whose influence sum
    sum_l (E[X_l | ., Xi=0] - E[X_l | ., Xi=1]) is at most 1."""
    atoms, _ = _conditional_atoms(m, revealed)
    return _pick_from_atoms(atoms, m.n, revealed.index_mask)


@dataclass(frozen=True)
class PickLemmaEntry:
    index: int
    pi: Fraction
    variance: Fraction
    covariance_sum: Fraction
    quantity: Fraction
    deterministic: bool
    influence_sum: Optional[Fraction]


@dataclass
class PickLemmaReport:
    revealed: Assignment
    entries: list[PickLemmaEntry]
    satisfied: list[int]
    chosen: PickResult

    def to_json(self) -> dict:
        return {
            "revealed": self.revealed.to_json(),
            "entries": [
                {
                    "index": e.index,
                    "pi": format_rational(e.pi),
                    "variance": format_rational(e.variance),
                    "covariance_sum": format_rational(e.covariance_sum),
                    "quantity": format_rational(e.quantity),
                    "deterministic": e.deterministic,
                    "influence_sum": None
                    if e.influence_sum is None
                    else format_rational(e.influence_sum),
                }
                for e in self.entries
            ],
            "satisfied": self.satisfied,
            "chosen_index": self.chosen.index,
        }


def verify_pick_lemma(m: ExplicitMeasure, revealed: Assignment) -> PickLemmaReport:
    """Recompute, for every unrevealed i, the nonnegativity witness
    Var[Xi | .] + sum_j Cov[Xi, Xj | .] and check it against the
    influence-sum form pi*(1-pi)*(1 - influence).

    At least one index must have a nonnegative witness (the variance of
    the conditional sum is nonnegative); LemmaViolated means the
    implementation or the input measure is broken.
    """
    atoms, total = _conditional_atoms(m, revealed)
    n = m.n
    revealed_mask = revealed.index_mask
    unrevealed = [i for i in range(1, n + 1) if not revealed_mask >> (i - 1) & 1]
    if not unrevealed:
        raise NoEligibleIndex("every variable is already revealed")
    full_unrevealed = 0
    for i in unrevealed:
        full_unrevealed |= 1 << (i - 1)

    entries = []
    satisfied = []
    w1_of = {}
    for i in unrevealed:
        bit = 1 << (i - 1)
        w1_of[i] = sum(weight for mask, weight in atoms if mask & bit)
    for i in unrevealed:
        bit = 1 << (i - 1)
        others = full_unrevealed & ~bit
        w1, w0, s1, s0 = _influence_terms(atoms, bit, others)
        pi = Fraction(w1, total)
        variance = pi * (1 - pi)
        others_ones = sum(w1_of[j] for j in unrevealed if j != i)
        cov_sum = Fraction(s1, total) - pi * Fraction(others_ones, total)
        quantity = variance + cov_sum
        if w1 == 0 or w0 == 0:
            if quantity != 0:
                raise LemmaViolated(
                    f"deterministic index {i} has nonzero witness {quantity}"
                )
            entries.append(PickLemmaEntry(i, pi, variance, cov_sum, quantity, True, None))
            satisfied.append(i)
            continue
        influence = Fraction(s0, w0) - Fraction(s1, w1)
        if quantity != variance * (1 - influence):
            raise LemmaViolated(
                f"index {i}: witness {quantity} != pi(1-pi)(1-influence) "
                f"{variance * (1 - influence)}"
            )
        entries.append(
            PickLemmaEntry(i, pi, variance, cov_sum, quantity, False, influence)
        )
        if quantity >= 0:
            satisfied.append(i)
    if not satisfied:
        raise LemmaViolated(
            f"no unrevealed index has a nonnegative witness at {revealed.to_json()}"
        )
    chosen = _pick_from_atoms(atoms, n, revealed_mask)
    return PickLemmaReport(revealed, entries, satisfied, chosen)


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------


@dataclass
class SkeletonNode:
    """Structure of one conditioning event; independent of any f."""

    assignment: Assignment
    probability: Fraction
    pick: Optional[int]
    pick_deterministic: bool
    pick_influence: Optional[Fraction]
    p0: Optional[Fraction]
    p1: Optional[Fraction]
    child0: Optional["SkeletonNode"]
    child1: Optional["SkeletonNode"]
    leaf_mask: Optional[int]


@dataclass
class Skeleton:
    measure: ExplicitMeasure
    order: Optional[tuple[int, ...]]
    root: SkeletonNode


def build_skeleton(m: ExplicitMeasure, order=None) -> Skeleton:
    """The decision-tree structure for a measure: picks, branch
    probabilities, reachable assignments.  order=None selects adaptively;
    otherwise order must be a permutation of 1..n."""
    n = m.n
    if n > cap("tree"):
        raise TooLarge(f"n={n} exceeds the tree cap {cap('tree')}")
    if order is not None:
        order = tuple(order)
        if sorted(order) != list(range(1, n + 1)):
            raise ValueError("order must be a permutation of 1..n")
    _, weights = m.scaled_weights()

    def grow(assignment, atoms, total, probability, depth) -> SkeletonNode:
        if depth == n:
            return SkeletonNode(
                assignment, probability, None, False, None,
                None, None, None, None, assignment.value_mask,
            )
        if order is None:
            pick = _pick_from_atoms(atoms, n, assignment.index_mask)
            index, deterministic, influence = (
                pick.index, pick.deterministic, pick.influence_sum,
            )
        else:
            index = order[depth]
            bit = 1 << (index - 1)
            w1 = sum(weight for mask, weight in atoms if mask & bit)
            deterministic = w1 == 0 or w1 == total
            influence = None
        bit = 1 << (index - 1)
        ones = [(mask, weight) for mask, weight in atoms if mask & bit]
        zeros = [(mask, weight) for mask, weight in atoms if not mask & bit]
        w1 = sum(weight for _, weight in ones)
        w0 = total - w1
        p1 = Fraction(w1, total)
        p0 = 1 - p1
        child1 = child0 = None
        if w1:
            child1 = grow(
                assignment.extended(index, 1), ones, w1,
                probability * p1, depth + 1,
            )
        if w0:
            child0 = grow(
                assignment.extended(index, 0), zeros, w0,
                probability * p0, depth + 1,
            )
        return SkeletonNode(
            assignment, probability, index, deterministic, influence,
            p0, p1, child0, child1, None,
        )

    atoms = sorted(weights.items())
    total = sum(w for _, w in atoms)
    root = grow(Assignment.empty(), atoms, total, ONE, 0)
    return Skeleton(m, order, root)


@dataclass
class TreeNode:
    """One conditioning event with its martingale value and increment
    interval.  alpha/beta are (0, 0) at leaves and forced branches."""

    assignment: Assignment
    probability: Fraction
    pick: Optional[int]
    pick_deterministic: bool
    pick_influence: Optional[Fraction]
    p0: Optional[Fraction]
    p1: Optional[Fraction]
    y: Fraction
    alpha: Fraction
    beta: Fraction
    child0: Optional["TreeNode"]
    child1: Optional["TreeNode"]
    leaf_mask: Optional[int]

    @property
    def is_leaf(self) -> bool:
        return self.pick is None

    @property
    def depth(self) -> int:
        return len(self.assignment.indices)

    @property
    def gap(self) -> Fraction:
        return self.beta - self.alpha


@dataclass
class MartingaleTree:
    measure: ExplicitMeasure
    f: TestFunction
    kind: str  # "adaptive" | "fixed"
    order: Optional[tuple[int, ...]]
    root: TreeNode

    @property
    def n(self) -> int:
        return self.measure.n

    def nodes(self) -> Iterator[TreeNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if node.child1 is not None:
                stack.append(node.child1)
            if node.child0 is not None:
                stack.append(node.child0)

    def internal_nodes(self) -> Iterator[TreeNode]:
        return (node for node in self.nodes() if not node.is_leaf)

    def leaves(self) -> Iterator[TreeNode]:
        return (node for node in self.nodes() if node.is_leaf)

    # -- serialization ----------------------------------------------------

    def _node_json(self, node: TreeNode) -> dict:
        if node.is_leaf:
            return {
                "x": bits_from_mask(node.leaf_mask, self.n),
                "y": format_rational(node.y),
            }
        doc = {
            "pick": node.pick,
            "p0": format_rational(node.p0),
            "p1": format_rational(node.p1),
            "y": format_rational(node.y),
            "alpha": format_rational(node.alpha),
            "beta": format_rational(node.beta),
            "children": {},
        }
        if node.child0 is not None:
            doc["children"]["0"] = self._node_json(node.child0)
        if node.child1 is not None:
            doc["children"]["1"] = self._node_json(node.child1)
        return doc

    def to_json(self) -> dict:
        doc = {
            "n": self.n,
            "kind": self.kind,
            "f": self.f.name,
            "root": self._node_json(self.root),
        }
        if self.order is not None:
            doc["order"] = list(self.order)
        return doc

    def save_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")

    def _pattern(self, node: TreeNode) -> str:
        chars = ["*"] * self.n
        for i, v in zip(node.assignment.indices, node.assignment.values):
            chars[i - 1] = str(v)
        return "".join(chars)

    def to_csv(self) -> str:
        """One row per node, root first, children in 0-then-1 order."""
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            ["depth", "pattern", "probability", "pick",
             "p0", "p1", "y", "alpha", "beta", "node"]
        )

        def emit(node: TreeNode):
            if node.is_leaf:
                kind = "leaf"
            elif node.child0 is None or node.child1 is None:
                kind = "forced"
            else:
                kind = "branch"
            writer.writerow([
                node.depth,
                self._pattern(node),
                format_rational(node.probability),
                "" if node.pick is None else node.pick,
                "" if node.p0 is None else format_rational(node.p0),
                "" if node.p1 is None else format_rational(node.p1),
                format_rational(node.y),
                format_rational(node.alpha),
                format_rational(node.beta),
                kind,
            ])
            if node.child0 is not None:
                emit(node.child0)
            if node.child1 is not None:
                emit(node.child1)

        emit(self.root)
        return out.getvalue()

    def save_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_csv())


def _annotate(
    skeleton: Skeleton, f: TestFunction, kind: str, gap_limit: Optional[Fraction]
) -> MartingaleTree:
    def value(node: SkeletonNode) -> TreeNode:
        if node.leaf_mask is not None:
            return TreeNode(
                node.assignment, node.probability, None, False, None,
                None, None, f.values[node.leaf_mask], ZERO, ZERO,
                None, None, node.leaf_mask,
            )
        child0 = value(node.child0) if node.child0 is not None else None
        child1 = value(node.child1) if node.child1 is not None else None
        if child0 is not None and child1 is not None:
            y = node.p0 * child0.y + node.p1 * child1.y
            alpha = min(child0.y, child1.y) - y
            beta = max(child0.y, child1.y) - y
        else:
            y = child0.y if child0 is not None else child1.y
            alpha = beta = ZERO
        tree_node = TreeNode(
            node.assignment, node.probability, node.pick,
            node.pick_deterministic, node.pick_influence,
            node.p0, node.p1, y, alpha, beta, child0, child1, None,
        )
        if gap_limit is not None and beta - alpha > gap_limit:
            raise IntervalViolation(
                f"martingale increment interval has width {beta - alpha} "
                f"> {gap_limit} at node {node.assignment.to_json()}",
                node=tree_node,
            )
        return tree_node

    return MartingaleTree(skeleton.measure, f, kind, skeleton.order, value(skeleton.root))


def build_adaptive_tree(
    m: ExplicitMeasure, f: TestFunction, skeleton: Optional[Skeleton] = None
) -> MartingaleTree:
    """The full adaptive-ordering martingale tree for (m, f).

    Assumes the caller has established negative regression for m; if the
    assumption fails, the increment interval at some node exceeds the
    guaranteed width and IntervalViolation carries that node as a
    certificate.  Pass a prebuilt skeleton to amortize the pick
    computations across many functions.
    """
    if skeleton is None:
        skeleton = build_skeleton(m)
    elif skeleton.order is not None or skeleton.measure is not m:
        raise ValueError("skeleton was built for a different configuration")
    limit = ONE if f.declared_monotone else Fraction(2)
    return _annotate(skeleton, f, "adaptive", limit)


def fixed_order_tree(
    m: ExplicitMeasure,
    f: TestFunction,
    order=None,
    skeleton: Optional[Skeleton] = None,
) -> MartingaleTree:
    """Martingale tree with a prescribed revelation order (default the
    identity).  No increment-interval guarantee: intervals are reported
    as found."""
    if order is None:
        order = tuple(range(1, m.n + 1))
    order = tuple(order)
    if skeleton is None:
        skeleton = build_skeleton(m, order)
    elif skeleton.order != order or skeleton.measure is not m:
        raise ValueError("skeleton was built for a different configuration")
    return _annotate(skeleton, f, "fixed", None)


def max_step(tree: MartingaleTree, mode: Optional[str] = None) -> Fraction:
    """Worst-case step size over all nodes.

    mode "gap": the increment-interval width beta - alpha (default for
    adaptive trees).  mode "deviation": the largest child deviation
    max(|y0 - y|, |y1 - y|) (default for fixed trees)."""
    if mode is None:
        mode = "gap" if tree.kind == "adaptive" else "deviation"
    if mode not in ("gap", "deviation"):
        raise ValueError(f"unknown mode {mode!r}")
    worst = ZERO
    for node in tree.internal_nodes():
        if mode == "gap":
            worst = max(worst, node.gap)
        else:
            for child in (node.child0, node.child1):
                if child is not None:
                    worst = max(worst, abs(child.y - node.y))
    return worst


def root_step(tree: MartingaleTree) -> Fraction:
    """Largest first-step deviation |Y1 - Y0| over the root's branches."""
    node = tree.root
    worst = ZERO
    for child in (node.child0, node.child1):
        if child is not None:
            worst = max(worst, abs(child.y - node.y))
    return worst


__all__ = [
    "PickResult",
    "PickLemmaEntry",
    "PickLemmaReport",
    "pick_index",
    "verify_pick_lemma",
    "Skeleton",
    "SkeletonNode",
    "build_skeleton",
    "TreeNode",
    "MartingaleTree",
    "build_adaptive_tree",
    "fixed_order_tree",
    "max_step",
    "root_step",
]
