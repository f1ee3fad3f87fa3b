"""k-modes clustering for categorical rows.

Modes are per-attribute plurality vectors; dissimilarity is the count of
mismatched fields. All randomness flows through ``random.Random(seed)``
(Mersenne Twister, stable across platforms), so every fit is reproducible.

Tie-breaking is fixed throughout: rows assign to the lowest-index mode of
minimal dissimilarity, and plurality ties resolve to the value with the
lowest index in the schema domain.
"""
from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .schema import FeatureSchema

HUANG = "HUANG"
RANDOM = "RANDOM"
INIT_METHODS = (HUANG, RANDOM)


class ClusterError(ValueError):
    """Raised on precondition violations (bad k, empty input, bad method)."""


@dataclass(frozen=True)
class ClusterModel:
    k: int
    modes: tuple[tuple[str, ...], ...]
    assignments: tuple[int, ...]
    cost: int
    seed: int
    init_method: str
    iterations: int
    cost_history: tuple[int, ...] = field(default=(), repr=False)

    def cluster_sizes(self) -> list[int]:
        counts = [0] * self.k
        for a in self.assignments:
            counts[a] += 1
        return counts

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "init": self.init_method,
            "seed": self.seed,
            "cost": self.cost,
            "iterations": self.iterations,
            "modes": [list(m) for m in self.modes],
            "assignments": list(self.assignments),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClusterModel":
        return cls(
            k=data["k"],
            modes=tuple(tuple(m) for m in data["modes"]),
            assignments=tuple(data["assignments"]),
            cost=data["cost"],
            seed=data["seed"],
            init_method=data["init"],
            iterations=data["iterations"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class ElbowEntry:
    k: int
    cost: int
    restarts: int
    seed: int


@dataclass(frozen=True)
class ElbowReport:
    entries: tuple[ElbowEntry, ...]

    def __post_init__(self) -> None:
        ks = [e.k for e in self.entries]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ClusterError("elbow entries must have strictly increasing k")
        if any(e.cost < 0 for e in self.entries):
            raise ClusterError("elbow costs must be non-negative")

    def to_dict(self) -> dict:
        return {
            "entries": [
                {"k": e.k, "cost": e.cost, "restarts": e.restarts, "seed": e.seed}
                for e in self.entries
            ]
        }


def hamming_dissimilarity(a, b) -> int:
    """Number of positions where the two vectors differ."""
    if len(a) != len(b):
        raise ClusterError(
            f"vectors have different widths ({len(a)} vs {len(b)})"
        )
    return sum(1 for x, y in zip(a, b) if x != y)


def _check_method(method: str) -> str:
    normalized = method.upper()
    if normalized not in INIT_METHODS:
        raise ClusterError(f"unknown init method {method!r}")
    return normalized


def _distinct_rows(rows) -> list[tuple[str, ...]]:
    """Distinct row vectors in order of first appearance."""
    seen = {}
    for row in rows:
        key = tuple(row)
        if key not in seen:
            seen[key] = None
    return list(seen)


def _nearest(X: np.ndarray, modes: np.ndarray) -> np.ndarray:
    # argmin picks the first (lowest-index) minimum
    dissim = (X[:, None, :] != modes[None, :, :]).sum(axis=2)
    return dissim.argmin(axis=1)


def _total_cost(X: np.ndarray, modes: np.ndarray, assign: np.ndarray) -> int:
    return int((X != modes[assign]).sum())


def _plurality_modes(X: np.ndarray, assign: np.ndarray, k: int,
                     domain_sizes, fallback: np.ndarray) -> np.ndarray:
    modes = fallback.copy()
    for c in range(k):
        members = X[assign == c]
        if len(members) == 0:
            continue
        for j, size in enumerate(domain_sizes):
            # bincount argmax returns the first maximum = lowest domain index
            modes[c, j] = np.bincount(members[:, j], minlength=size).argmax()
    return modes


def _repair_empty(X: np.ndarray, modes: np.ndarray, assign: np.ndarray, k: int) -> np.ndarray:
    """Move the worst-fitting row into each empty cluster.

    Donors are restricted to clusters that keep at least one member, so a
    repair never creates a new empty cluster.
    """
    assign = assign.copy()
    sizes = np.bincount(assign, minlength=k)
    for empty in np.flatnonzero(sizes == 0):
        dissim = (X != modes[assign]).sum(axis=1)
        movable = sizes[assign] >= 2
        candidates = np.flatnonzero(movable)
        worst = candidates[dissim[candidates].argmax()]
        sizes[assign[worst]] -= 1
        assign[worst] = empty
        sizes[empty] += 1
    return assign


def _plurality_vector(X: np.ndarray, domain_sizes) -> np.ndarray:
    """Per-attribute most frequent value; ties to the lowest domain index."""
    return np.array(
        [np.bincount(X[:, j], minlength=size).argmax() for j, size in enumerate(domain_sizes)],
        dtype=np.int16,
    )


# A chosen mode's own combination is taken out of play together with its
# presumed noise shell: adjacent combinations whose frequency is below this
# fraction of the mode's frequency. Adjacent combinations above it are kept
# alive as candidate cluster centers in their own right.
_SHELL_RATIO = 0.125


def init_modes(rows, k: int, method: str, seed: int,
               schema: FeatureSchema | None = None) -> list[tuple[str, ...]]:
    """Seeded initial modes.

    RANDOM samples k distinct rows uniformly without replacement.

    HUANG is frequency-based with an element of randomness: the first mode
    is the data row nearest to the per-attribute plurality vector; each
    further mode is drawn with probability proportional to the not-yet-
    covered combination frequency around it, then snapped to the most
    frequent uncovered combination nearby. Deterministic given the seed.
    """
    method = _check_method(method)
    rows = [tuple(r) for r in rows]
    if k < 1:
        raise ClusterError("k must be at least 1")
    distinct = _distinct_rows(rows)
    if k > len(distinct):
        raise ClusterError(f"k={k} exceeds the {len(distinct)} distinct rows")
    rng = random.Random(seed)

    if method == RANDOM:
        return rng.sample(distinct, k)

    schema = schema or FeatureSchema.from_rows(rows)
    X = schema.encode(rows)
    domain_sizes = [len(domain) for _, domain in schema.features]

    counts = Counter(rows)
    vecs = sorted(counts, key=schema.sort_key)
    V = schema.encode(vecs)
    mult = np.array([counts[v] for v in vecs], dtype=np.float64)
    n_vecs = len(vecs)

    # combination adjacency (hamming <= 1), chunked to bound memory
    adjacent = np.zeros((n_vecs, n_vecs), dtype=bool)
    for lo in range(0, n_vecs, 512):
        adjacent[lo:lo + 512] = (
            (V[lo:lo + 512, None, :] != V[None, :, :]).sum(axis=2) <= 1
        )

    taken = np.zeros(n_vecs, dtype=bool)
    uncovered = mult.copy()

    def claim(center: int) -> tuple[str, ...]:
        taken[center] = True
        shell = ((V != V[center]).sum(axis=1) <= 1) & (mult < _SHELL_RATIO * mult[center])
        uncovered[shell] = 0.0
        uncovered[center] = 0.0
        return vecs[center]

    # anchor mode: nearest actual row to the plurality vector, ties going
    # to the lowest row index
    anchor = _plurality_vector(X, domain_sizes)
    dist_to_anchor = (V != anchor).sum(axis=1)
    first_row_index = {}
    for idx, row in enumerate(rows):
        first_row_index.setdefault(row, idx)
    order = sorted(range(n_vecs), key=lambda i: (dist_to_anchor[i], first_row_index[vecs[i]]))
    chosen = [claim(order[0])]

    for _ in range(1, k):
        mass = adjacent @ uncovered
        weights = np.where(taken | (uncovered <= 0), 0.0, mass)
        total = weights.sum()
        if total <= 0:
            candidates = np.flatnonzero(~taken)
            center = int(candidates[rng.randrange(len(candidates))])
        else:
            pick = int(np.searchsorted(np.cumsum(weights), rng.random() * total, side="right"))
            near = ((V != V[pick]).sum(axis=1) <= 2) & ~taken
            best = int(np.where(near, uncovered, -1.0).argmax())
            # snap only when the draw looks like the denser neighbor's noise
            # shell; on flat ground the draw itself is the center, which
            # keeps restarts diverse
            center = best if uncovered[pick] < _SHELL_RATIO * uncovered[best] else pick
        chosen.append(claim(center))
    return chosen


def fit(rows, k: int, method: str = HUANG, seed: int = 0, max_iter: int = 100,
        schema: FeatureSchema | None = None) -> ClusterModel:
    """Alternate nearest-mode assignment and plurality mode updates until
    assignments are stable (or max_iter)."""
    method = _check_method(method)
    rows = [tuple(r) for r in rows]
    if not rows:
        raise ClusterError("cannot fit on an empty row set")
    if max_iter < 1:
        raise ClusterError("max_iter must be at least 1")
    schema = schema or FeatureSchema.from_rows(rows)
    initial = init_modes(rows, k, method, seed, schema=schema)

    X = schema.encode(rows)
    modes = schema.encode(initial)
    domain_sizes = [len(domain) for _, domain in schema.features]

    prev = None
    history: list[int] = []
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        assign = _nearest(X, modes)
        assign = _repair_empty(X, modes, assign, k)
        if prev is not None and np.array_equal(assign, prev):
            break
        prev = assign
        modes = _plurality_modes(X, assign, k, domain_sizes, modes)
        history.append(_total_cost(X, modes, assign))

    # Final projection guarantees the minimal-dissimilarity invariant even
    # when the loop was cut off mid-flight.
    assign = _nearest(X, modes)
    cost = _total_cost(X, modes, assign)
    history.append(cost)

    return ClusterModel(
        k=k,
        modes=tuple(schema.decode(m) for m in modes),
        assignments=tuple(int(a) for a in assign),
        cost=cost,
        seed=seed,
        init_method=method,
        iterations=iterations,
        cost_history=tuple(history),
    )


def fit_best(rows, k: int, method: str = HUANG, seed: int = 0, restarts: int = 1,
             max_iter: int = 100, schema: FeatureSchema | None = None) -> ClusterModel:
    """Minimum-cost model over `restarts` fits seeded seed+0..seed+restarts-1."""
    if restarts < 1:
        raise ClusterError("restarts must be at least 1")
    best = None
    for i in range(restarts):
        model = fit(rows, k, method, seed + i, max_iter=max_iter, schema=schema)
        if best is None or model.cost < best.cost:
            best = model
    return best


def sweep_k(rows, k_min: int, k_max: int, method: str = HUANG, seed: int = 0,
            restarts: int = 1, max_iter: int = 100,
            schema: FeatureSchema | None = None) -> ElbowReport:
    """Best cost per k in [k_min, k_max]; feeds the elbow plot."""
    if not 1 <= k_min <= k_max:
        raise ClusterError("need 1 <= k_min <= k_max")
    entries = []
    for k in range(k_min, k_max + 1):
        model = fit_best(rows, k, method, seed, restarts, max_iter=max_iter, schema=schema)
        entries.append(ElbowEntry(k=k, cost=model.cost, restarts=restarts, seed=seed))
    return ElbowReport(tuple(entries))
