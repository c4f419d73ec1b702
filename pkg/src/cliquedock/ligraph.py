"""Distance graphs and the binding interaction graph (BIG).

The ligand and protein each get a labeled distance graph over their
pharmacophore points.  The BIG then has one vertex per (ligand point,
protein point) contact pair; an edge marks two contacts that can exist
in the same docking pose, decided by comparing intra-molecule distances
against type-dependent interaction thresholds.  Vertex weights come
from a knowledge-based pharmacophore potential.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .pharmio import PHARMACOPHORE_KINDS, PharmacophorePoint

# Knowledge-based pharmacophore potential, indexed (ligand kind, protein
# kind) in HD/HA/HP/AR order.  Symmetric.
DEFAULT_POTENTIAL = np.array(
    [
        [0.5244, 0.6686, 0.1453, 0.1091],
        [0.6686, 0.5478, 0.2317, 0.0770],
        [0.1453, 0.2317, 0.0504, 0.0795],
        [0.1091, 0.0770, 0.0795, 0.1943],
    ]
)

_HBOND_KINDS = frozenset({"HD", "HA"})
_KIND_INDEX = {k: i for i, k in enumerate(PHARMACOPHORE_KINDS)}


@dataclass(frozen=True)
class InteractionParams:
    """Flexibility constant tau and interaction distances (all in Angstroms).

    eps_hbond replaces eps_default for a contact pair whose ligand AND
    protein kinds are both hydrogen-bond donors/acceptors.
    """

    tau: float
    eps_default: float
    eps_hbond: float

    def __post_init__(self):
        for name in ("tau", "eps_default", "eps_hbond"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    def eps_for(self, ligand_kind: str, protein_kind: str) -> float:
        if ligand_kind in _HBOND_KINDS and protein_kind in _HBOND_KINDS:
            return self.eps_hbond
        return self.eps_default


# Parameter presets used by the shipped case-study profiles.
PROFILES = {
    "8skh": InteractionParams(tau=0.6, eps_default=4.0, eps_hbond=3.0),
    "3hac": InteractionParams(tau=0.1, eps_default=3.1, eps_hbond=2.5),
    "5f4l": InteractionParams(tau=0.1, eps_default=2.8, eps_hbond=2.5),
}


@dataclass(frozen=True)
class LabeledDistanceGraph:
    role: str
    points: tuple[PharmacophorePoint, ...]
    dist: np.ndarray  # symmetric (k, k) Euclidean distances, Angstroms

    @property
    def size(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class ContactVertex:
    ligand_index: int
    protein_index: int
    label: str


@dataclass(frozen=True)
class BindingInteractionGraph:
    vertices: tuple[ContactVertex, ...]
    adjacency: np.ndarray  # symmetric bool (N, N), zero diagonal
    weights: np.ndarray  # (N,)
    ligand_size: int
    protein_size: int

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        ii, jj = np.nonzero(np.triu(self.adjacency, k=1))
        return list(zip(ii.tolist(), jj.tolist()))

    def complement_edges(self) -> list[tuple[int, int]]:
        """Unordered vertex pairs (i < j) NOT joined by an edge."""
        comp = ~self.adjacency
        np.fill_diagonal(comp, False)
        ii, jj = np.nonzero(np.triu(comp, k=1))
        return list(zip(ii.tolist(), jj.tolist()))

    def labels(self) -> list[str]:
        return [v.label for v in self.vertices]


def build_ldg(points: list[PharmacophorePoint]) -> LabeledDistanceGraph:
    """Complete distance graph over one molecule's pharmacophore points."""
    if not points:
        raise ValueError("need at least one pharmacophore point")
    roles = {p.role for p in points}
    if len(roles) != 1:
        raise ValueError(f"points mix roles {sorted(roles)}; one molecule at a time")
    coords = np.array([p.position for p in points], dtype=np.float64)
    delta = coords[:, None, :] - coords[None, :, :]
    dist = np.sqrt(np.sum(delta * delta, axis=-1))
    dist.setflags(write=False)
    return LabeledDistanceGraph(role=roles.pop(), points=tuple(points), dist=dist)


def interaction_strength(
    params: InteractionParams,
    kinds_a: tuple[str, str],
    kinds_b: tuple[str, str],
    d1: float,
    d2: float,
) -> float:
    """Signed connectivity strength of a candidate BIG edge.

    kinds_a / kinds_b are the (ligand kind, protein kind) of the two
    contact vertices; d1 / d2 the ligand-side and protein-side
    distances.  Returns (tau + eps_a + eps_b) - |d1 - d2|; the caller
    keeps the edge iff the value is strictly positive.
    """
    eps_a = params.eps_for(*kinds_a)
    eps_b = params.eps_for(*kinds_b)
    return (params.tau + eps_a + eps_b) - abs(d1 - d2)


def vertex_weight(table: np.ndarray, ligand_kind: str, protein_kind: str) -> float:
    return float(table[_KIND_INDEX[ligand_kind], _KIND_INDEX[protein_kind]])


def build_big(
    ligand: LabeledDistanceGraph,
    protein: LabeledDistanceGraph,
    params: InteractionParams,
    table: np.ndarray = DEFAULT_POTENTIAL,
    allow_shared_points: bool = False,
) -> BindingInteractionGraph:
    """Assemble the binding interaction graph.

    Vertices are laid out ligand-major: vertex i*m + j pairs ligand
    point i with protein point j.  By default two contacts sharing a
    ligand or a protein point are never joined (one physical point
    cannot hold two pairings at once); allow_shared_points=True drops
    that restriction and applies the pure distance rule everywhere,
    with the within-molecule distance of a shared point being zero.
    """
    if ligand.role != "ligand" or protein.role != "protein":
        raise ValueError("build_big expects a ligand LDG and a protein LDG")
    n, m = ligand.size, protein.size
    big_n = n * m
    vertices = tuple(
        ContactVertex(i, j, f"{ligand.points[i].label}-{protein.points[j].label}")
        for i in range(n)
        for j in range(m)
    )
    kinds = [(ligand.points[v.ligand_index].kind, protein.points[v.protein_index].kind)
             for v in vertices]
    weights = np.array([vertex_weight(table, lk, pk) for lk, pk in kinds])
    weights.setflags(write=False)

    adjacency = np.zeros((big_n, big_n), dtype=bool)
    for u in range(big_n):
        iu, ju = vertices[u].ligand_index, vertices[u].protein_index
        for v in range(u + 1, big_n):
            iv, jv = vertices[v].ligand_index, vertices[v].protein_index
            if not allow_shared_points and (iu == iv or ju == jv):
                continue
            strength = interaction_strength(
                params, kinds[u], kinds[v],
                ligand.dist[iu, iv], protein.dist[ju, jv],
            )
            if strength > 0.0:
                adjacency[u, v] = adjacency[v, u] = True
    adjacency.setflags(write=False)
    return BindingInteractionGraph(vertices, adjacency, weights, n, m)


def synthetic_big(
    adjacency: np.ndarray,
    weights: np.ndarray,
    ligand_size: int,
    protein_size: int,
) -> BindingInteractionGraph:
    """BIG from an explicit adjacency matrix and weight vector.

    Used by generators of synthetic benchmark instances; the structural
    invariants (shape, symmetry, empty diagonal) are still enforced.
    """
    adjacency = np.array(adjacency, dtype=bool)
    weights = np.array(weights, dtype=np.float64)
    big_n = ligand_size * protein_size
    if adjacency.shape != (big_n, big_n):
        raise ValueError("adjacency must be N x N with N = ligand_size * protein_size")
    if weights.shape != (big_n,):
        raise ValueError("weights must have one entry per vertex")
    if np.any(np.diag(adjacency)):
        raise ValueError("self-loops are not allowed")
    if not np.array_equal(adjacency, adjacency.T):
        raise ValueError("adjacency must be symmetric")
    vertices = tuple(
        ContactVertex(i, j, f"l{i}-P{j}")
        for i in range(ligand_size)
        for j in range(protein_size)
    )
    adjacency.setflags(write=False)
    weights.setflags(write=False)
    return BindingInteractionGraph(vertices, adjacency, weights, ligand_size, protein_size)


def big_to_json(big: BindingInteractionGraph) -> str:
    return json.dumps(
        {
            "n": big.ligand_size,
            "m": big.protein_size,
            "labels": big.labels(),
            "weights": big.weights.tolist(),
            "edges": [[i, j] for i, j in big.edges()],
        },
        indent=2,
    )


def big_from_json(text: str) -> BindingInteractionGraph:
    doc = json.loads(text)
    n, m = int(doc["n"]), int(doc["m"])
    big_n = n * m
    adjacency = np.zeros((big_n, big_n), dtype=bool)
    for i, j in doc["edges"]:
        adjacency[i, j] = adjacency[j, i] = True
    big = synthetic_big(adjacency, np.asarray(doc["weights"]), n, m)
    labels = doc.get("labels")
    if labels:
        vertices = tuple(
            ContactVertex(v.ligand_index, v.protein_index, lab)
            for v, lab in zip(big.vertices, labels)
        )
        big = BindingInteractionGraph(
            vertices, big.adjacency, big.weights, n, m
        )
    return big


def adjacency_text(big: BindingInteractionGraph) -> str:
    """Plain-text 0/1 adjacency dump, one row per vertex, for visual diffs."""
    lines = []
    width = max(len(lab) for lab in big.labels())
    for v, row in zip(big.vertices, big.adjacency.astype(int)):
        lines.append(f"{v.label:>{width}}  " + " ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"
