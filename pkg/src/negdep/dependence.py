"""Decision procedures for negative-dependence notions, with certificates.

Every checker is exact: probabilities are handled as integer weights over
a common denominator D, so each verdict is a theorem about the input
measure, not a numerical observation.  A Fails verdict always carries a
certificate that can be re-verified from the raw measure alone:

  * pairwise:     a pair (i, j) with Cov[Xi, Xj] > 0;
  * cylinder:     a set S and the violated product inequality, both sides;
  * association:  up-sets A over I and B over J with Cov[1_A, 1_B] > 0;
  * regression:   (J, a, b) and a down-closed set where dominance fails;
  * covering:     (I, a, a') and a Hall-type infeasibility cut.

The strong Rayleigh property only gets a falsifier: a grid search for a
point with negative Rayleigh difference.  It can refute, never certify.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np

from .bitops import SubsetExtractor, bits_from_mask, cap, indices_of, subsets_lex
from .coupling import transport, up_closure
from .errors import DimensionMismatch, TooLarge
from .measure import ExplicitMeasure, format_rational
from .upsets import (
    ENUMERABLE_DIM,
    max_weight_upset,
    nontrivial_upsets,
    upset_matrix,
    upset_members,
)

ZERO = Fraction(0)

# product DP and int64 covariance accumulation both stay exact below this
_NUMPY_DENOM_LIMIT = 1 << 20


class Notion(str, Enum):
    PAIRWISE_NC = "PairwiseNC"
    CYLINDER = "CylinderDep"
    NEG_ASSOCIATION = "NegAssociation"
    NEG_REGRESSION = "NegRegression"
    CNA = "CondNegAssociation"
    STOCHASTIC_COVERING = "StochasticCovering"
    RAYLEIGH = "RayleighFalsifier"


class Verdict(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    VIOLATION_FOUND = "ViolationFound"
    NO_VIOLATION_FOUND = "NoViolationFound"


@dataclass
class NotionReport:
    notion: Notion
    verdict: Verdict
    certificate: Optional[dict]
    work_stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        """True when nothing negative-dependence-violating was found."""
        return self.verdict in (Verdict.HOLDS, Verdict.NO_VIOLATION_FOUND)

    def to_json(self) -> dict:
        return {
            "notion": self.notion.value,
            "verdict": self.verdict.value,
            "certificate": self.certificate,
            "work": self.work_stats,
        }


# ---------------------------------------------------------------------------
# Pairwise negative correlation
# ---------------------------------------------------------------------------


def covariance(m: ExplicitMeasure, i: int, j: int) -> Fraction:
    """Exact Cov[Xi, Xj]."""
    d, w = m.scaled_weights()
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    wi = wj = wij = 0
    for key, weight in w.items():
        if key & bi:
            wi += weight
            if key & bj:
                wij += weight
        if key & bj:
            wj += weight
    return Fraction(d * wij - wi * wj, d * d)


def check_pairwise_nc(m: ExplicitMeasure) -> NotionReport:
    """Holds iff Cov[Xi, Xj] <= 0 for every pair i < j."""
    if m.n < 2:
        raise DimensionMismatch("pairwise correlation needs at least two variables")
    d, w = m.scaled_weights()
    singles = [0] * (m.n + 1)
    for key, weight in w.items():
        for i in range(1, m.n + 1):
            if key >> (i - 1) & 1:
                singles[i] += weight
    worst = None
    pairs = 0
    for i in range(1, m.n):
        for j in range(i + 1, m.n + 1):
            pairs += 1
            bij = (1 << (i - 1)) | (1 << (j - 1))
            wij = sum(weight for key, weight in w.items() if key & bij == bij)
            num = d * wij - singles[i] * singles[j]
            if worst is None or num > worst[0]:
                worst = (num, i, j)
    cov = Fraction(worst[0], d * d)
    work = {
        "pairs_checked": pairs,
        "worst_pair": [worst[1], worst[2]],
        "worst_covariance": format_rational(cov),
    }
    if cov > 0:
        cert = {"i": worst[1], "j": worst[2], "covariance": format_rational(cov)}
        return NotionReport(Notion.PAIRWISE_NC, Verdict.FAILS, cert, work)
    return NotionReport(Notion.PAIRWISE_NC, Verdict.HOLDS, None, work)


# ---------------------------------------------------------------------------
# Negative cylinder dependence
# ---------------------------------------------------------------------------


def check_cylinder(m: ExplicitMeasure) -> NotionReport:
    """Holds iff for every S with |S| >= 2, both
    P[Xi = 1 for i in S] <= prod P[Xi = 1] and the same with zeros."""
    n = m.n
    if n > cap("cylinder"):
        raise TooLarge(f"n={n} exceeds the cylinder cap {cap('cylinder')}")
    d, w = m.scaled_weights()
    size = 1 << n
    ones = [0] * size   # weight of {x : x >= S} after the transform
    zeros = [0] * size  # weight of {x : x & S == 0}
    for key, weight in w.items():
        ones[key] += weight
        zeros[key] += weight
    # superset-sum and subset-sum zeta transforms
    for pos in range(n):
        bit = 1 << pos
        for s in range(size):
            if s & bit:
                ones[s ^ bit] += ones[s]
            else:
                zeros[s | bit] += zeros[s]
    # zeros[s] currently sums over subsets of s; re-index by the cylinder S
    singles1 = [ones[1 << pos] for pos in range(n)]
    singles0 = [d - s1 for s1 in singles1]
    # prod1[s] = prod of singles1 over members of s, by lowest-bit DP
    prod1 = [1] * size
    prod0 = [1] * size
    for s in range(1, size):
        low = s & -s
        rest = s ^ low
        pos = low.bit_length() - 1
        prod1[s] = prod1[rest] * singles1[pos]
        prod0[s] = prod0[rest] * singles0[pos]
    dpow = [1] * (n + 1)
    for k in range(1, n + 1):
        dpow[k] = dpow[k - 1] * d

    best = None  # (index tuple, side, lhs weight, prod, k)
    checked = 0
    full = size - 1
    for s in range(1, size):
        k = s.bit_count()
        if k < 2:
            continue
        checked += 2
        scale = dpow[k - 1]
        lhs1 = ones[s] * scale
        if lhs1 > prod1[s]:
            key = indices_of(s)
            if best is None or key < best[0]:
                best = (key, "ones", ones[s], prod1[s], k)
        lhs0 = zeros[full ^ s] * scale
        if lhs0 > prod0[s]:
            key = indices_of(s)
            if best is None or (key, 1) < (best[0], 0 if best[1] == "ones" else 1):
                best = (key, "zeros", zeros[full ^ s], prod0[s], k)
    work = {"sets_checked": checked}
    if best is None:
        return NotionReport(Notion.CYLINDER, Verdict.HOLDS, None, work)
    key, side, lhs_w, prod, k = best
    cert = {
        "S": list(key),
        "side": side,
        "lhs": format_rational(Fraction(lhs_w, d)),
        "rhs": format_rational(Fraction(prod, dpow[k])),
    }
    return NotionReport(Notion.CYLINDER, Verdict.FAILS, cert, work)


# ---------------------------------------------------------------------------
# Negative association
# ---------------------------------------------------------------------------


def _packed_bits(mask: int, width: int) -> str:
    return bits_from_mask(mask, width)


def upset_indicator_cov(
    m: ExplicitMeasure, I, A_masks, J, B_masks
) -> Fraction:
    """Exact Cov[1_A(X_I), 1_B(X_J)] for up-sets given as packed masks
    (bit t of a packed mask is the t-th smallest index of the block)."""
    I = sorted(I)
    J = sorted(J)
    exI = SubsetExtractor(sum(1 << (i - 1) for i in I), m.n)
    exJ = SubsetExtractor(sum(1 << (j - 1) for j in J), m.n)
    A = set(A_masks)
    B = set(B_masks)
    pa = pb = pab = ZERO
    for key, p in m.items():
        ina = exI.extract(key) in A
        inb = exJ.extract(key) in B
        if ina:
            pa += p
            if inb:
                pab += p
        if inb:
            pb += p
    return pab - pa * pb


def _na_violation(m: ExplicitMeasure):
    """First bipartition with positively correlated up-set indicators.

    Returns (certificate | None, work).  The scan fixes the smaller side,
    enumerates its nontrivial up-sets A in a deterministic order, and for
    each A maximizes the covariance over up-sets B of the other side,
    either by an exact int64 matrix product (dimension <= 5) or by a
    max-weight-closure min-cut (always exact, any dimension).
    """
    n = m.n
    d, w = m.scaled_weights()
    full = (1 << n) - 1
    work = {"bipartitions": 0, "upsets_tested": 0, "closures": 0}
    use_numpy = d <= _NUMPY_DENOM_LIMIT
    for imask in range(1, full):
        if not imask & 1:
            continue  # covariance is symmetric; anchor variable 1 on the I side
        jmask = full ^ imask
        di, dj = imask.bit_count(), jmask.bit_count()
        if di <= dj:
            small_mask, large_mask, ds, dl = imask, jmask, di, dj
        else:
            small_mask, large_mask, ds, dl = jmask, imask, dj, di
        if ds > ENUMERABLE_DIM:
            raise TooLarge(
                f"association check needs one side of dimension <= {ENUMERABLE_DIM}"
            )
        work["bipartitions"] += 1
        exs = SubsetExtractor(small_mask, n)
        exl = SubsetExtractor(large_mask, n)
        if use_numpy:
            joint = np.zeros((1 << ds, 1 << dl), dtype=np.int64)
            for key, weight in w.items():
                joint[exs.extract(key), exl.extract(key)] += weight
            ws = joint.sum(axis=1)
            wl = joint.sum(axis=0)
            u_small = upset_matrix(ds)
            joint_a = u_small @ joint          # weight of {X_s in A, X_l = b}
            wa = u_small @ ws
            weights = d * joint_a - wa[:, None] * wl[None, :]
            work["upsets_tested"] += len(u_small)
            if (
                dl <= ENUMERABLE_DIM
                and len(u_small) * len(nontrivial_upsets(dl)) <= 1 << 22
            ):
                covs = weights @ upset_matrix(dl).T
                hits = np.argwhere(covs > 0)
                if hits.size:
                    row = int(hits[0, 0])
                    col = int(np.argmax(covs[row]))
                    a_mask = nontrivial_upsets(ds)[row]
                    b_mask = nontrivial_upsets(dl)[col]
                    value = Fraction(int(covs[row, col]), d * d)
                    return (
                        _na_certificate(
                            n, small_mask, large_mask, a_mask, b_mask, value
                        ),
                        work,
                    )
                continue
            rows = [list(map(int, row)) for row in weights]
        else:
            joint_d: dict[tuple[int, int], int] = {}
            ws_d = [0] * (1 << ds)
            wl_d = [0] * (1 << dl)
            for key, weight in w.items():
                a, b = exs.extract(key), exl.extract(key)
                joint_d[(a, b)] = joint_d.get((a, b), 0) + weight
                ws_d[a] += weight
                wl_d[b] += weight
            rows = []
            for a_mask in nontrivial_upsets(ds):
                members = upset_members(a_mask, ds)
                wa = sum(ws_d[a] for a in members)
                vec = [-wa * wl_d[b] for b in range(1 << dl)]
                for (a, b), weight in joint_d.items():
                    if a_mask >> a & 1:
                        vec[b] += d * weight
                rows.append(vec)
            work["upsets_tested"] += len(rows)
        for row_idx, vec in enumerate(rows):
            work["closures"] += 1
            best, chosen = max_weight_upset(vec, dl)
            if best > 0:
                a_mask = nontrivial_upsets(ds)[row_idx]
                b_mask = 0
                for p in chosen:
                    b_mask |= 1 << p
                value = Fraction(best, d * d)
                return (
                    _na_certificate(n, small_mask, large_mask, a_mask, b_mask, value),
                    work,
                )
    return None, work


def _na_certificate(n, small_mask, large_mask, a_upset, b_upset, value) -> dict:
    ds, dl = small_mask.bit_count(), large_mask.bit_count()
    return {
        "I": list(indices_of(small_mask)),
        "J": list(indices_of(large_mask)),
        "A": [_packed_bits(p, ds) for p in upset_members(a_upset, ds)],
        "B": [_packed_bits(p, dl) for p in upset_members(b_upset, dl)],
        "covariance": format_rational(value),
    }


def check_neg_association(m: ExplicitMeasure) -> NotionReport:
    """Holds iff Cov[1_A(X_I), 1_B(X_J)] <= 0 for every bipartition
    I + J = [n] and all up-sets A, B; up-sets stand in for all pairs of
    non-decreasing functions."""
    if m.n > cap("neg_association"):
        raise TooLarge(f"n={m.n} exceeds the association cap")
    if m.n < 2:
        return NotionReport(
            Notion.NEG_ASSOCIATION, Verdict.HOLDS, None, {"bipartitions": 0}
        )
    cert, work = _na_violation(m)
    if cert is None:
        return NotionReport(Notion.NEG_ASSOCIATION, Verdict.HOLDS, None, work)
    return NotionReport(Notion.NEG_ASSOCIATION, Verdict.FAILS, cert, work)


# ---------------------------------------------------------------------------
# Conditional negative association
# ---------------------------------------------------------------------------


def check_cna(m: ExplicitMeasure) -> NotionReport:
    """Holds iff the measure and all of its positive-probability partial
    conditionals are negatively associated."""
    from .measure import Assignment

    if m.n > cap("cna"):
        raise TooLarge(f"n={m.n} exceeds the conditional-association cap")
    work = {"conditionings_checked": 0, "bipartitions": 0}
    ks: list[tuple[int, ...]] = [()]
    if m.n >= 2:
        ks += [
            indices_of(s) for s in subsets_lex(m.n) if s.bit_count() <= m.n - 2
        ]
    for k_indices in ks:
        klen = len(k_indices)
        for pattern in range(1 << klen):
            values = tuple(pattern >> t & 1 for t in range(klen))
            asg = Assignment(k_indices, values)
            if klen:
                if m.prob_of_assignment(asg) == 0:
                    continue
                sub = m.condition(asg)
            else:
                sub = m
            work["conditionings_checked"] += 1
            if sub.n < 2:
                continue
            cert, inner = _na_violation(sub)
            work["bipartitions"] += inner["bipartitions"]
            if cert is not None:
                keep = [i for i in range(1, m.n + 1) if i not in k_indices]
                cert = {
                    "K": list(k_indices),
                    "values": "".join(str(v) for v in values),
                    "I": [keep[i - 1] for i in cert["I"]],
                    "J": [keep[j - 1] for j in cert["J"]],
                    "A": cert["A"],
                    "B": cert["B"],
                    "covariance": cert["covariance"],
                }
                return NotionReport(Notion.CNA, Verdict.FAILS, cert, work)
    return NotionReport(Notion.CNA, Verdict.HOLDS, None, work)


# ---------------------------------------------------------------------------
# Negative regression and stochastic covering
# ---------------------------------------------------------------------------


def _buckets_for(m: ExplicitMeasure, cond_mask: int):
    """Split the integer-weighted atoms by their assignment on cond_mask.

    Returns (buckets, totals): buckets[a] maps packed free-coordinate
    patterns to weights, totals[a] is the event weight of assignment a.
    """
    n = m.n
    _, w = m.scaled_weights()
    free_mask = ((1 << n) - 1) ^ cond_mask
    exc = SubsetExtractor(cond_mask, n)
    exf = SubsetExtractor(free_mask, n)
    buckets: dict[int, dict[int, int]] = {}
    totals: dict[int, int] = {}
    for key, weight in w.items():
        a = exc.extract(key)
        rest = exf.extract(key)
        bucket = buckets.setdefault(a, {})
        bucket[rest] = bucket.get(rest, 0) + weight
        totals[a] = totals.get(a, 0) + weight
    return buckets, totals


def _proportional(wa: dict[int, int], ta: int, wb: dict[int, int], tb: int) -> bool:
    """True when the two weighted supports describe the same law."""
    if len(wa) != len(wb):
        return False
    for key, weight in wa.items():
        other = wb.get(key)
        if other is None or weight * tb != other * ta:
            return False
    return True


def _dominance_witness(
    lower: dict[int, int], lt: int, upper: dict[int, int], ut: int, dim: int
):
    """None if upper dominates lower; else (down_set, lower_mass, upper_mass)."""
    res = transport(
        sorted(lower.items()), lt, sorted(upper.items()), ut, covering=False
    )
    if res.feasible:
        return None
    closed = up_closure(res.left_cut, dim)
    down = tuple(x for x in range(1 << dim) if x not in closed)
    lm = sum((Fraction(v, lt) for k, v in lower.items() if k in closed), ZERO)
    um = sum((Fraction(v, ut) for k, v in upper.items() if k in closed), ZERO)
    return down, 1 - lm, 1 - um


def check_neg_regression(m: ExplicitMeasure) -> NotionReport:
    """Holds iff for every proper nonempty J and every pair a <= b of
    positive-probability assignments on J, the conditional law given a
    stochastically dominates the one given b.

    Only covering pairs (one raised coordinate) are flow-checked;
    dominance composes along chains of positive assignments.  Pairs whose
    chain is broken by a zero-probability intermediate are checked
    directly.
    """
    n = m.n
    if n > cap("neg_regression"):
        raise TooLarge(f"n={n} exceeds the regression cap")
    work = {
        "conditioning_sets": 0,
        "pairs_checked": 0,
        "flows_run": 0,
        "equal_laws_skipped": 0,
        "chained_pairs_skipped": 0,
    }
    if n < 2:
        return NotionReport(Notion.NEG_REGRESSION, Verdict.HOLDS, None, work)

    def examine(j_indices, a, b, buckets, totals, dim):
        """Flow-check one pair; returns a certificate dict or None."""
        work["pairs_checked"] += 1
        lower, lt = buckets[b], totals[b]
        upper, ut = buckets[a], totals[a]
        if _proportional(lower, lt, upper, ut):
            work["equal_laws_skipped"] += 1
            return None
        work["flows_run"] += 1
        witness = _dominance_witness(lower, lt, upper, ut, dim)
        if witness is None:
            return None
        down, lm, um = witness
        jl = len(j_indices)
        free = [i for i in range(1, n + 1) if i not in j_indices]
        return {
            "J": list(j_indices),
            "a": _packed_bits(a, jl),
            "b": _packed_bits(b, jl),
            "free_indices": free,
            "down_set": sorted(_packed_bits(x, dim) for x in down),
            "lower_mass": format_rational(lm),
            "upper_mass": format_rational(um),
        }

    for cond_mask in subsets_lex(n):
        jl = cond_mask.bit_count()
        if jl == n:
            continue
        j_indices = indices_of(cond_mask)
        work["conditioning_sets"] += 1
        buckets, totals = _buckets_for(m, cond_mask)
        dim = n - jl
        present = sorted(buckets)
        present_set = set(present)
        # covering pairs first, in (a, then b) order
        for a in present:
            for pos in range(jl):
                b = a | (1 << pos)
                if b != a and b in present_set:
                    cert = examine(j_indices, a, b, buckets, totals, dim)
                    if cert is not None:
                        return NotionReport(
                            Notion.NEG_REGRESSION, Verdict.FAILS, cert, work
                        )
        if len(present) == 1 << jl:
            continue  # all assignments positive: chains cover every pair
        # distant pairs whose chain of positive intermediates is broken
        reach_memo: dict[int, set[int]] = {}
        for a in present:
            for b in present:
                if b <= a or a & ~b or (a ^ b).bit_count() < 2:
                    continue
                reached = reach_memo.get(a)
                if reached is None:
                    reached = {a}
                    frontier = [a]
                    while frontier:
                        cur = frontier.pop()
                        for pos in range(jl):
                            nxt = cur | (1 << pos)
                            if nxt != cur and nxt in present_set and nxt not in reached:
                                reached.add(nxt)
                                frontier.append(nxt)
                    reach_memo[a] = reached
                if b in reached:
                    work["chained_pairs_skipped"] += 1
                    continue
                cert = examine(j_indices, a, b, buckets, totals, dim)
                if cert is not None:
                    return NotionReport(
                        Notion.NEG_REGRESSION, Verdict.FAILS, cert, work
                    )
    return NotionReport(Notion.NEG_REGRESSION, Verdict.HOLDS, None, work)


def check_stochastic_covering(m: ExplicitMeasure) -> NotionReport:
    """Holds iff for every I and covering pair a >= a' of positive
    assignments on I, the conditionals admit a coupling moving at most
    one coordinate: x ~ law given a, y ~ law given a', x <= y,
    |y - x| <= 1."""
    n = m.n
    if n > cap("stochastic_covering"):
        raise TooLarge(f"n={n} exceeds the covering cap")
    work = {"conditioning_sets": 0, "pairs_checked": 0, "flows_run": 0}
    if n < 2:
        return NotionReport(
            Notion.STOCHASTIC_COVERING, Verdict.HOLDS, None, work
        )
    for cond_mask in subsets_lex(n):
        il = cond_mask.bit_count()
        if il == n:
            continue
        i_indices = indices_of(cond_mask)
        work["conditioning_sets"] += 1
        buckets, totals = _buckets_for(m, cond_mask)
        dim = n - il
        present = sorted(buckets)
        present_set = set(present)
        for a_low in present:
            for pos in range(il):
                a_high = a_low | (1 << pos)
                if a_high == a_low or a_high not in present_set:
                    continue
                work["pairs_checked"] += 1
                lower, lt = buckets[a_high], totals[a_high]
                upper, ut = buckets[a_low], totals[a_low]
                if _proportional(lower, lt, upper, ut):
                    continue  # identity coupling
                work["flows_run"] += 1
                res = transport(
                    sorted(lower.items()), lt, sorted(upper.items()), ut,
                    covering=True,
                )
                if res.feasible:
                    continue
                block = set(res.left_cut)
                hood = sorted(
                    y for y in upper
                    if any(not x & ~y and (x ^ y).bit_count() <= 1 for x in block)
                )
                lm = sum((Fraction(v, lt) for k, v in lower.items() if k in block), ZERO)
                um = sum((Fraction(v, ut) for k, v in upper.items() if k in hood), ZERO)
                free = [i for i in range(1, n + 1) if i not in i_indices]
                cert = {
                    "I": list(i_indices),
                    "a": _packed_bits(a_high, il),
                    "a_prime": _packed_bits(a_low, il),
                    "free_indices": free,
                    "block": sorted(_packed_bits(x, dim) for x in block),
                    "neighborhood": sorted(
                        _packed_bits(y, dim) for y in hood
                    ),
                    "lower_mass": format_rational(lm),
                    "upper_mass": format_rational(um),
                }
                return NotionReport(
                    Notion.STOCHASTIC_COVERING, Verdict.FAILS, cert, work
                )
    return NotionReport(Notion.STOCHASTIC_COVERING, Verdict.HOLDS, None, work)


# ---------------------------------------------------------------------------
# Rayleigh falsifier
# ---------------------------------------------------------------------------


@dataclass
class GeneratingPolynomial:
    """The multi-affine generating polynomial F(z) = E[prod z_j^{X_j}]."""

    n: int
    coefficients: dict[int, Fraction]

    @classmethod
    def of(cls, m: ExplicitMeasure) -> "GeneratingPolynomial":
        return cls(m.n, dict(m.items()))

    def evaluate(self, z) -> Fraction:
        total = ZERO
        for key, p in self.coefficients.items():
            term = p
            k = key
            pos = 0
            while k:
                if k & 1:
                    term *= z[pos]
                k >>= 1
                pos += 1
            total += term
        return total

    def rayleigh_difference(self, i: int, j: int, z) -> Fraction:
        """dF/dzi * dF/dzj - F * d2F/dzi dzj at z, for multi-affine F.

        Equals G10*G01 - G00*G11 where Gab collects the atoms with
        (x_i, x_j) = (a, b), each evaluated on the other coordinates; the
        z_i and z_j values drop out.
        """
        bi, bj = 1 << (i - 1), 1 << (j - 1)
        g = [ZERO, ZERO, ZERO, ZERO]
        for key, p in self.coefficients.items():
            term = p
            k = key & ~(bi | bj)
            pos = 0
            while k:
                if k & 1:
                    zl = z[pos]
                    if zl == 0:
                        term = ZERO
                        break
                    term *= zl
                k >>= 1
                pos += 1
            else:
                g[(1 if key & bi else 0) | (2 if key & bj else 0)] += term
        return g[1] * g[2] - g[0] * g[3]


def default_rayleigh_grid(n: int, seed: int = 0) -> list[tuple]:
    """The documented default: the integer grid {-2..2}^n for n <= 5,
    otherwise 1000 seeded pseudo-random rational points."""
    if n <= 5:
        return list(itertools.product((-2, -1, 0, 1, 2), repeat=n))
    rng = random.Random(seed)
    return [
        tuple(Fraction(rng.randint(-8, 8), rng.randint(1, 4)) for _ in range(n))
        for _ in range(1000)
    ]


def rayleigh_falsify(m: ExplicitMeasure, grid=None) -> NotionReport:
    """Search the grid for a negative Rayleigh difference.

    ViolationFound carries (i, j, z, delta); NoViolationFound only means
    the grid was clean, never that the measure is strong Rayleigh.
    """
    poly = GeneratingPolynomial.of(m)
    if grid is None:
        grid = default_rayleigh_grid(m.n)
    evaluations = 0
    for z in grid:
        if len(z) != m.n:
            raise DimensionMismatch("grid point has wrong length")
        zf = [Fraction(c) for c in z]
        for i in range(1, m.n):
            for j in range(i + 1, m.n + 1):
                evaluations += 1
                delta = poly.rayleigh_difference(i, j, zf)
                if delta < 0:
                    cert = {
                        "i": i,
                        "j": j,
                        "z": [format_rational(c) for c in zf],
                        "delta": format_rational(delta),
                    }
                    return NotionReport(
                        Notion.RAYLEIGH,
                        Verdict.VIOLATION_FOUND,
                        cert,
                        {"points": len(grid), "evaluations": evaluations},
                    )
    return NotionReport(
        Notion.RAYLEIGH,
        Verdict.NO_VIOLATION_FOUND,
        None,
        {"points": len(grid), "evaluations": evaluations},
    )


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


CHECKERS = {
    Notion.PAIRWISE_NC: check_pairwise_nc,
    Notion.CYLINDER: check_cylinder,
    Notion.NEG_ASSOCIATION: check_neg_association,
    Notion.NEG_REGRESSION: check_neg_regression,
    Notion.CNA: check_cna,
    Notion.STOCHASTIC_COVERING: check_stochastic_covering,
    Notion.RAYLEIGH: rayleigh_falsify,
}

# (antecedent, consequent): whenever the first Holds, the second must
NOTION_IMPLICATIONS = [
    (Notion.STOCHASTIC_COVERING, Notion.NEG_REGRESSION),
    (Notion.NEG_REGRESSION, Notion.CYLINDER),
    (Notion.NEG_ASSOCIATION, Notion.CYLINDER),
    (Notion.CYLINDER, Notion.PAIRWISE_NC),
    (Notion.CNA, Notion.NEG_ASSOCIATION),
    (Notion.CNA, Notion.NEG_REGRESSION),
]


__all__ = [
    "Notion",
    "Verdict",
    "NotionReport",
    "GeneratingPolynomial",
    "covariance",
    "upset_indicator_cov",
    "check_pairwise_nc",
    "check_cylinder",
    "check_neg_association",
    "check_cna",
    "check_neg_regression",
    "check_stochastic_covering",
    "default_rayleigh_grid",
    "rayleigh_falsify",
    "CHECKERS",
    "NOTION_IMPLICATIONS",
]
