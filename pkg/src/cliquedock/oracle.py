"""Exact classical references for the quantum pipeline.

Everything here is enumeration-grade: exhaustive max-weight-clique
search, full clique listings, exact diagonal ground states, and a
generator of synthetic instances whose top-two clique weights differ by
a prescribed gap.  These are the truth sources the variational results
are judged against, so they deliberately share no code path with the
Ising encoding.
"""

from __future__ import annotations

import io
import csv
from dataclasses import dataclass

import numpy as np

from .ligraph import BindingInteractionGraph, DEFAULT_POTENTIAL, synthetic_big
from .ising import IsingHamiltonian, energy_vector

EXACT_CAP = 24
ENUM_CAP = 20
_REL_TOL = 1e-12


@dataclass(frozen=True)
class CliqueSolution:
    vertices: tuple[int, ...]
    total_weight: float
    is_unique_max: bool = True
    runner_up_weight: float = 0.0


def _adjacency_masks(big: BindingInteractionGraph) -> list[int]:
    n = big.n_vertices
    masks = []
    for i in range(n):
        m = 0
        for j in range(n):
            if big.adjacency[i, j]:
                m |= 1 << j
        masks.append(m)
    return masks


def _mask_weight(mask: int, weights: np.ndarray) -> float:
    total = 0.0
    i = 0
    while mask:
        if mask & 1:
            total += weights[i]
        mask >>= 1
        i += 1
    return float(total)


def _mask_vertices(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _iter_clique_masks(masks: list[int], n: int):
    """Yield every non-empty clique, each exactly once, as a bitmask."""
    stack = [(1 << v, masks[v] & ~((1 << (v + 1)) - 1)) for v in range(n - 1, -1, -1)]
    while stack:
        clique, cand = stack.pop()
        yield clique
        c = cand
        while c:
            v = (c & -c).bit_length() - 1
            c &= c - 1
            higher = ~((1 << (v + 1)) - 1)
            stack.append((clique | (1 << v), cand & masks[v] & higher))


def _iter_maximal_clique_masks(masks: list[int], n: int):
    """Bron-Kerbosch with pivoting over bitmasks."""

    def bk(r: int, p: int, x: int):
        if p == 0 and x == 0:
            yield r
            return
        pivot_pool = p | x
        pivot = -1
        best = -1
        pp = pivot_pool
        while pp:
            u = (pp & -pp).bit_length() - 1
            pp &= pp - 1
            deg = bin(p & masks[u]).count("1")
            if deg > best:
                best, pivot = deg, u
        ext = p & ~masks[pivot]
        while ext:
            v = (ext & -ext).bit_length() - 1
            ext &= ext - 1
            vb = 1 << v
            yield from bk(r | vb, p & masks[v], x & masks[v])
            p &= ~vb
            x |= vb

    yield from bk(0, (1 << n) - 1, 0)


def _selection_weights(big: BindingInteractionGraph) -> np.ndarray:
    """Total selected weight for every bitstring, -inf where the
    selection contains a non-edge (so finite entries are the cliques,
    with the empty selection at weight 0)."""
    n = big.n_vertices
    z = np.arange(1 << n, dtype=np.int64)
    weight = np.zeros(1 << n)
    for i in range(n):
        weight += big.weights[i] * ((z >> i) & 1)
    feasible = np.ones(1 << n, dtype=bool)
    comp = ~big.adjacency
    ii, jj = np.nonzero(np.triu(comp, k=1))
    for i, j in zip(ii, jj):
        feasible &= ((z >> int(i)) & (z >> int(j)) & 1) == 0
    return np.where(feasible, weight, -np.inf)


def _exhaustive_best(big: BindingInteractionGraph):
    """Scan over all 2^N selections; returns
    (best_mask, best_weight, runner_up_weight, unique)."""
    weight = _selection_weights(big)
    best_w = float(np.max(weight))
    tol = _REL_TOL * max(1.0, abs(best_w))
    tied = np.nonzero(weight >= best_w - tol)[0]
    best_mask = int(np.min(tied))
    unique = tied.size == 1
    if unique:
        below = weight[weight < best_w - tol]
        runner_up = float(np.max(below)) if below.size else 0.0
    else:
        runner_up = best_w
    return best_mask, best_w, runner_up, unique


def _branch_and_bound_best(big: BindingInteractionGraph):
    """Top-2 tracking branch and bound: a branch is pruned only when its
    optimistic weight sum cannot beat the current second-best, so both
    the maximum and the runner-up weight are exact."""
    masks = _adjacency_masks(big)
    w = big.weights
    order = sorted(range(big.n_vertices), key=lambda v: -w[v])
    state = {"w1": 0.0, "m1": 0, "w2": -np.inf, "tied": False}

    def consider(mask: int, weight: float):
        tol = _REL_TOL * max(1.0, abs(weight), abs(state["w1"]))
        if weight > state["w1"] + tol:
            state["w2"] = state["w1"]
            state["w1"], state["m1"], state["tied"] = weight, mask, False
        elif abs(weight - state["w1"]) <= tol:
            if mask != state["m1"]:
                state["tied"] = True
                state["w2"] = state["w1"]
                state["m1"] = min(state["m1"], mask)
        elif weight > state["w2"]:
            state["w2"] = weight

    def expand(clique: int, weight: float, cand: list[int]):
        if clique:
            consider(clique, weight)
        slack = weight + sum(w[v] for v in cand)
        for idx, v in enumerate(cand):
            if slack <= state["w2"]:
                return
            nxt = [u for u in cand[idx + 1:] if masks[v] >> u & 1]
            expand(clique | (1 << v), weight + w[v], nxt)
            slack -= w[v]

    expand(0, 0.0, order)
    runner = state["w2"] if np.isfinite(state["w2"]) else 0.0
    return state["m1"], state["w1"], runner, not state["tied"]


def max_weight_clique(big: BindingInteractionGraph) -> CliqueSolution:
    """Exact maximum-vertex-weight clique.

    Exhaustive scan up to 20 vertices, branch and bound with weight-sum
    pruning up to 24.  Ties are reported (is_unique_max False) and the
    smallest bitstring is returned as the representative.
    """
    n = big.n_vertices
    if n > EXACT_CAP:
        raise ValueError(
            f"{n} vertices exceeds the exact cap {EXACT_CAP}; "
            "a heuristic solver is out of scope here"
        )
    if n <= ENUM_CAP:
        mask, w, runner, unique = _exhaustive_best(big)
    else:
        mask, w, runner, unique = _branch_and_bound_best(big)
    return CliqueSolution(_mask_vertices(mask), w, unique, runner)


def optimal_bitstrings(big: BindingInteractionGraph) -> frozenset[int]:
    """All maximum-weight cliques as bitstring integers (the full
    degenerate target set, not just the representative)."""
    n = big.n_vertices
    if n > ENUM_CAP:
        raise ValueError(f"{n} vertices exceeds the enumeration cap {ENUM_CAP}")
    weight = _selection_weights(big)
    best = float(np.max(weight))
    tol = _REL_TOL * max(1.0, abs(best))
    return frozenset(int(s) for s in np.nonzero(weight >= best - tol)[0])


def enumerate_cliques(
    big: BindingInteractionGraph, min_size: int = 1, maximal_only: bool = False
) -> list[CliqueSolution]:
    """All cliques of at least min_size vertices, heaviest first.

    Nested (non-maximal) cliques are included unless maximal_only is
    set.  Ties are broken toward the smaller bitstring.
    """
    n = big.n_vertices
    if n > ENUM_CAP:
        raise ValueError(f"{n} vertices exceeds the enumeration cap {ENUM_CAP}")
    masks = _adjacency_masks(big)
    source = _iter_maximal_clique_masks(masks, n) if maximal_only else _iter_clique_masks(masks, n)
    found = [
        (mask, _mask_weight(mask, big.weights))
        for mask in source
        if bin(mask).count("1") >= min_size
    ]
    found.sort(key=lambda t: (-t[1], t[0]))
    out = []
    for rank, (mask, w) in enumerate(found):
        if rank == 0:
            tol = _REL_TOL * max(1.0, abs(w))
            unique = len(found) < 2 or found[1][1] < w - tol
            runner = found[1][1] if len(found) > 1 else 0.0
        else:
            unique, runner = False, 0.0
        out.append(CliqueSolution(_mask_vertices(mask), w, unique, runner))
    return out


def exact_ground_states(h: IsingHamiltonian, cap: int = ENUM_CAP) -> frozenset[int]:
    """All minimizing basis states of the diagonal Hamiltonian, with a
    1e-12 relative degeneracy tolerance."""
    if h.n_qubits > cap:
        raise ValueError(f"{h.n_qubits} qubits exceeds the ground-state cap {cap}")
    e = energy_vector(h, cap=cap)
    emin = float(np.min(e))
    tol = _REL_TOL * max(1.0, abs(emin))
    return frozenset(int(z) for z in np.nonzero(e <= emin + tol)[0])


def _factor_near_square(n: int) -> tuple[int, int]:
    best = (1, n)
    for a in range(2, int(np.sqrt(n)) + 1):
        if n % a == 0:
            best = (a, n // a)
    return best


def make_near_degenerate_instance(
    n: int,
    gap: float,
    rng: np.random.Generator,
    density: float = 0.8,
    max_tries: int = 200,
) -> BindingInteractionGraph:
    """Synthetic BIG whose two heaviest cliques differ by exactly `gap`.

    Random dense graphs are drawn with vertex weights sampled from the
    default potential's entries; one vertex weight outside the winning
    clique is then shifted so the best clique through it lands exactly
    `gap` below the optimum.  The result is re-verified by full clique
    enumeration before being returned.
    """
    if n < 8:
        raise ValueError("need at least 8 vertices")
    if gap <= 0:
        raise ValueError("gap must be positive")
    lig, prot = _factor_near_square(n)
    pool = np.unique(DEFAULT_POTENTIAL)

    for _ in range(max_tries):
        upper = rng.random((n, n)) < density
        adjacency = np.triu(upper, k=1)
        adjacency = adjacency | adjacency.T
        weights = rng.choice(pool, size=n)
        big = synthetic_big(adjacency, weights, lig, prot)

        cliques = enumerate_cliques(big, min_size=1)
        if not cliques or not cliques[0].is_unique_max:
            continue
        top = cliques[0]
        if len(top.vertices) < 3:
            continue
        target_second = top.total_weight - gap
        if target_second <= 0:
            continue
        if min(weights[v] for v in top.vertices) <= gap:
            continue

        top_set = set(top.vertices)
        best_with = {}
        best_without = 0.0
        for c in cliques:
            cset = set(c.vertices)
            if cset == top_set:
                continue
            outside = cset - top_set
            for v in outside:
                if v not in best_with or c.total_weight > best_with[v][0]:
                    best_with[v] = (c.total_weight, len(cset))
            if not outside and c.total_weight > best_without:
                best_without = c.total_weight

        for v in sorted(best_with):
            w_best_v, size_v = best_with[v]
            if size_v < 3:
                continue
            delta = target_second - w_best_v
            new_wv = weights[v] + delta
            if new_wv <= gap:
                continue
            adjusted = weights.copy()
            adjusted[v] = new_wv
            candidate = synthetic_big(adjacency, adjusted, lig, prot)
            ranked = enumerate_cliques(candidate, min_size=1)
            if not ranked[0].is_unique_max:
                continue
            if set(ranked[0].vertices) != top_set:
                continue
            observed = ranked[0].total_weight - ranked[1].total_weight
            if abs(observed - gap) <= 1e-9:
                return candidate
    raise RuntimeError(
        f"failed to construct a gap-{gap} instance on {n} vertices "
        f"after {max_tries} attempts"
    )


def cliques_to_csv(
    solutions: list[CliqueSolution], labels: list[str] | None = None
) -> str:
    """Rank / weight / member listing, mirroring the ranked-clique plots."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["rank", "weight", "members"])
    for rank, sol in enumerate(solutions, start=1):
        names = (
            " ".join(labels[v] for v in sol.vertices)
            if labels
            else " ".join(str(v) for v in sol.vertices)
        )
        writer.writerow([rank, f"{sol.total_weight:.10g}", names])
    return buf.getvalue()
