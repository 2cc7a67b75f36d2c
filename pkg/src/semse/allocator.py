"""Channel assignment and per-link symbol-rate optimization.

The network objective is the summed semantic spectral efficiency over all
served users, in units of the source's suts-per-word ratio. It decouples
into (a) a per-(user, channel) scan for the symbols-per-word count k that
maximizes similarity/k under the similarity and SE floors, and (b) a
maximum-weight bipartite matching of users to channels over those per-pair
optima, solved with the Hungarian algorithm. Pairs that cannot meet the
floors carry weight 0; the matching may then leave such users unserved,
which is reported as an SE contribution of exactly 0.

Conventional bit-pipe baselines go through the same matching with weights
equal to their transformed semantic SE (bit SE divided by bits per word).
All weights and totals here are normalized, i.e. expressed per unit of
``SourceStats.info_per_word``; the reporting layer applies that scale.

``brute_force_allocation`` enumerates every injective user-to-channel map
jointly with every per-user k and exists purely as a test oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .link_adaptation import CqiTable, SystemKind, shannon_se, table_se
from .metrics import TransformFactor
from .similarity import SimilaritySurface

# largest joint k-combination tensor the oracle materializes at once;
# beyond this it iterates the first user's k and holds K**(n-1) floats
_JOINT_BLOCK_LIMIT = 1 << 22


@dataclass(frozen=True)
class Constraints:
    """Feasibility floors for a served link."""

    k_max: int = 20
    similarity_threshold: float = 0.9
    sse_threshold: float = 0.025  # normalized, suts/s/Hz per unit info_per_word

    def __post_init__(self) -> None:
        if self.k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {self.k_max}")
        if not 0.0 <= self.similarity_threshold <= 1.0:
            raise ValueError(
                f"similarity_threshold must be in [0, 1], got {self.similarity_threshold}"
            )
        if self.sse_threshold < 0:
            raise ValueError(f"sse_threshold must be >= 0, got {self.sse_threshold}")


@dataclass(frozen=True)
class PairPlan:
    """Best plan for one (user, channel) pair.

    ``weight`` is the normalized SE similarity/k, or 0 if no k satisfies
    the floors (then ``k`` is None and ``feasible`` False).
    """

    user: int
    channel: int
    k: int | None
    similarity: float
    weight: float
    feasible: bool


@dataclass(frozen=True)
class Assignment:
    """A partial user-to-channel matching and its objective value.

    ``pairs`` holds (user, channel) tuples sorted by user, each user and
    each channel appearing at most once. ``total_weight`` is the plain
    left-to-right sum of the matched weights in that order.
    """

    pairs: tuple
    total_weight: float
    per_user: tuple = field(default_factory=tuple)


def best_pair_plan(
    surface: SimilaritySurface, snr_db: float, cons: Constraints,
    user: int = -1, channel: int = -1,
) -> PairPlan:
    """Scan k = 1..k_max for the feasible k maximizing similarity/k.

    Ties break toward smaller k (same SE, less latency). Reference scalar
    implementation; ``build_pair_plans`` is the vectorized equivalent.
    """
    _require_k_coverage(surface, cons.k_max)
    best_k, best_xi, best_w = None, 0.0, 0.0
    for k in range(1, cons.k_max + 1):
        xi = surface.query(k, snr_db)
        w = xi / k
        if xi >= cons.similarity_threshold and w >= cons.sse_threshold and w > best_w:
            best_k, best_xi, best_w = k, xi, w
    if best_k is None:
        return PairPlan(user, channel, None, 0.0, 0.0, False)
    return PairPlan(user, channel, best_k, best_xi, best_w, True)


def _require_k_coverage(surface: SimilaritySurface, k_max: int) -> None:
    if not surface.covers_k_range(k_max):
        raise ValueError(f"surface does not tabulate every k in 1..{k_max}")


def build_pair_plans(
    snr_db: np.ndarray, surface: SimilaritySurface, cons: Constraints
) -> list[list[PairPlan]]:
    """Per-pair optimal plans for a whole link matrix, shape (users, channels)."""
    _require_k_coverage(surface, cons.k_max)
    snr = np.atleast_2d(np.asarray(snr_db, dtype=float))
    ks = np.arange(1, cons.k_max + 1)
    rows = [surface.row_index(int(k)) for k in ks]
    xi = surface.query_all_k(snr)[rows]  # (k_max, N, M)
    w = xi / ks[:, None, None]
    ok = (xi >= cons.similarity_threshold) & (w >= cons.sse_threshold)
    w_ok = np.where(ok, w, 0.0)
    best = np.argmax(w_ok, axis=0)  # first max -> smallest k on ties
    n, m = snr.shape
    plans: list[list[PairPlan]] = []
    for i in range(n):
        row = []
        for j in range(m):
            b = best[i, j]
            if ok[b, i, j]:
                row.append(
                    PairPlan(i, j, int(ks[b]), float(xi[b, i, j]),
                             float(w_ok[b, i, j]), True)
                )
            else:
                row.append(PairPlan(i, j, None, 0.0, 0.0, False))
        plans.append(row)
    return plans


def weight_matrix(plans: list[list[PairPlan]]) -> np.ndarray:
    return np.array([[p.weight for p in row] for row in plans])


def _min_cost_square(cost: np.ndarray) -> list[int]:
    """Hungarian algorithm with potentials on a square cost matrix.

    Returns ``row_of_col`` where row_of_col[j] is the row matched to
    column j. O(n^3).
    """
    n = cost.shape[0]
    INF = float("inf")
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)  # p[j] = row matched to column j (1-based, 0 = free)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = 0
            row = cost[i0 - 1]
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = row[j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    return [p[j + 1] - 1 for j in range(n)]


def hungarian_max(weights) -> Assignment:
    """Maximum-weight matching of a non-negative weight matrix.

    Rectangular input is padded square with zeros; matched pairs of zero
    weight are reported as unmatched. Only the optimal total is
    contractual; which optimal matching is returned is not.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or w.size == 0:
        raise ValueError("weights must be a non-empty 2-D matrix")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    n, m = w.shape
    size = max(n, m)
    padded = np.zeros((size, size))
    padded[:n, :m] = w
    cost = float(w.max()) - padded  # negate + shift so the min-cost core applies
    row_of_col = _min_cost_square(cost)
    pairs = sorted(
        (row_of_col[j], j)
        for j in range(m)
        if row_of_col[j] < n and w[row_of_col[j], j] > 0.0
    )
    total = 0.0
    for i, j in pairs:
        total += float(w[i, j])
    return Assignment(pairs=tuple(pairs), total_weight=total)


def allocate_semantic(
    snr_db: np.ndarray, surface: SimilaritySurface, cons: Constraints
) -> Assignment:
    """Jointly optimal service plan: per-pair k scan, then channel matching."""
    plans = build_pair_plans(snr_db, surface, cons)
    match = hungarian_max(weight_matrix(plans))
    per_user = tuple(plans[i][j] for i, j in match.pairs)
    return Assignment(match.pairs, match.total_weight, per_user)


def conventional_weights(
    snr_db: np.ndarray,
    snr_linear: np.ndarray,
    system: SystemKind,
    tables: dict,
    tf: TransformFactor,
    cons: Constraints,
) -> np.ndarray:
    """Normalized semantic-SE weights of a bit-pipe system, floors applied."""
    if system is SystemKind.IDEAL:
        se_bits = shannon_se(snr_linear)
    elif system in (SystemKind.FOUR_G, SystemKind.FIVE_G):
        se_bits = table_se(tables[system], snr_db)
    else:
        raise ValueError(f"no bit-domain baseline for {system}")
    w = np.asarray(se_bits, dtype=float) / tf.bits_per_word
    return np.where(w >= cons.sse_threshold, w, 0.0)


def allocate_conventional(
    snr_db: np.ndarray,
    snr_linear: np.ndarray,
    system: SystemKind,
    tables: dict[SystemKind, CqiTable],
    tf: TransformFactor,
    cons: Constraints,
) -> Assignment:
    """Best channel matching for an ideal/4G/5G system, in normalized S-SE."""
    w = conventional_weights(snr_db, snr_linear, system, tables, tf, cons)
    return hungarian_max(np.atleast_2d(w))


def brute_force_allocation(
    snr_db: np.ndarray, surface: SimilaritySurface, cons: Constraints
) -> Assignment:
    """Exhaustive joint optimum over assignments and per-user k. Test oracle.

    Enumerates every injective map between users and channels together with
    every k combination for the mapped users. Bounded to 6x6 links and
    k_max 20.
    """
    snr = np.atleast_2d(np.asarray(snr_db, dtype=float))
    n, m = snr.shape
    if n > 6 or m > 6 or cons.k_max > 20:
        raise ValueError(f"instance {n}x{m} with k_max {cons.k_max} exceeds oracle bound")
    _require_k_coverage(surface, cons.k_max)
    ks = np.arange(1, cons.k_max + 1)
    rows = [surface.row_index(int(k)) for k in ks]
    xi = surface.query_all_k(snr)[rows]  # (K, N, M)
    w = xi / ks[:, None, None]
    ok = (xi >= cons.similarity_threshold) & (w >= cons.sse_threshold)
    value = np.where(ok, w, 0.0)  # value[k-1, user, channel]

    if n <= m:
        maps = [list(zip(range(n), combo)) for combo in itertools.permutations(range(m), n)]
    else:
        maps = [list(zip(combo, range(m))) for combo in itertools.permutations(range(n), m)]

    best_total = -1.0
    best_pairs: list[tuple[int, int]] = []
    best_kvec: tuple[int, ...] = ()
    n_mapped = min(n, m)
    for pairs in maps:
        per_pair = [value[:, i, j] for i, j in pairs]
        if cons.k_max ** n_mapped <= _JOINT_BLOCK_LIMIT:
            totals = per_pair[0]
            for vals in per_pair[1:]:
                totals = (totals[:, None] + vals[None, :]).ravel()
            flat_idx = int(np.argmax(totals))
            total = float(totals[flat_idx])
            kvec = np.unravel_index(flat_idx, (cons.k_max,) * n_mapped)
        else:
            total = -1.0
            kvec = ()
            for k0 in range(cons.k_max):
                totals = np.asarray([per_pair[0][k0]])
                for vals in per_pair[1:]:
                    totals = (totals[:, None] + vals[None, :]).ravel()
                fi = int(np.argmax(totals))
                if float(totals[fi]) > total:
                    total = float(totals[fi])
                    kvec = (k0,) + np.unravel_index(fi, (cons.k_max,) * (n_mapped - 1))
        if total > best_total:
            best_total = total
            best_pairs = pairs
            best_kvec = tuple(int(x) for x in kvec)

    kept = []
    for (i, j), kz in zip(best_pairs, best_kvec):
        if value[kz, i, j] > 0.0:
            kept.append((i, j, int(ks[kz])))
    kept.sort()
    total = 0.0
    per_user = []
    pairs_out = []
    for i, j, k in kept:
        kz = k - 1
        total += float(value[kz, i, j])
        pairs_out.append((i, j))
        per_user.append(PairPlan(i, j, k, float(xi[kz, i, j]), float(value[kz, i, j]), True))
    return Assignment(tuple(pairs_out), total, tuple(per_user))
