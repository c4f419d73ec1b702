"""Diagonal Ising cost Hamiltonian for the max-weight-clique objective.

A selection of BIG vertices is a bitstring z (bit i set = vertex i
selected, qubit 0 least significant).  The classical objective

    objective(z) = sum_i w_i z_i - P * #(selected complement-edge pairs)

is maximized exactly by maximum-weight cliques whenever P exceeds every
vertex weight.  encode() produces the spin Hamiltonian whose
computational-basis energy is the negated objective (plus a constant),
so minimizing energy solves the clique problem.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .ligraph import BindingInteractionGraph

ENERGY_VECTOR_CAP = 20


@dataclass(frozen=True)
class IsingHamiltonian:
    n_qubits: int
    linear: np.ndarray  # h_i, shape (N,)
    couplings: tuple[tuple[int, int, float], ...]  # (i, j, J_ij), i < j, complement edges only
    constant: float
    penalty: float
    scale: float = 1.0  # divisor applied when normalized (1.0 = raw)
    source_big: BindingInteractionGraph | None = field(default=None, compare=False)

    def coupling_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.couplings:
            return (np.zeros(0, dtype=np.intp),) * 2 + (np.zeros(0),)
        ii, jj, vv = zip(*self.couplings)
        return np.asarray(ii, dtype=np.intp), np.asarray(jj, dtype=np.intp), np.asarray(vv)


def bits_of(z: int, n: int) -> np.ndarray:
    """Bit vector of z, entry i = bit i (qubit 0 least significant)."""
    return (z >> np.arange(n)) & 1


def bitstring_of(vertices, n: int) -> int:
    """Inverse of vertices_of: vertex index set -> bitstring integer."""
    z = 0
    for v in vertices:
        if not 0 <= v < n:
            raise ValueError(f"vertex index {v} out of range for {n} qubits")
        z |= 1 << v
    return z


def vertices_of(z: int, n: int) -> frozenset[int]:
    """Decode a bitstring into the selected vertex-index set."""
    return frozenset(i for i in range(n) if (z >> i) & 1)


def format_bitstring(z: int, n: int) -> str:
    """Display form, qubit n-1 leftmost down to qubit 0 rightmost."""
    return format(z, f"0{n}b")


def parse_bitstring(s: str) -> int:
    return int(s, 2)


def objective_of(big: BindingInteractionGraph, z: int, penalty: float) -> float:
    """Classical quadratic objective of a selection bitstring.

    Each selected vertex contributes its weight; each selected pair of
    non-adjacent vertices costs the penalty once.
    """
    n = big.n_vertices
    b = bits_of(z, n)
    value = float(np.dot(big.weights, b))
    for i, j in big.complement_edges():
        if b[i] and b[j]:
            value -= penalty
    return value


def encode(
    big: BindingInteractionGraph, penalty: float, normalize: bool = False
) -> IsingHamiltonian:
    """Map a BIG to its diagonal spin Hamiltonian.

    With s_i = (+1, -1) for (unselected, selected) and Ebar the
    complement edges:

        h_i = w_i/2 - (P/4) * deg_Ebar(i)
        J_ij = P/4 on each complement edge
        constant = -sum(w)/2 + (P/4) |Ebar|

    which gives E(z) = -objective(z) exactly.  normalize=True divides
    every coefficient (and the constant) by the largest |h| or |J|;
    this leaves the minimizer set unchanged but mirrors how large
    penalties crowd out the weight terms during optimization.  Leave it
    off when exact objective arithmetic matters.
    """
    if penalty <= 0:
        raise ValueError("penalty magnitude must be positive")
    n = big.n_vertices
    comp = big.complement_edges()
    w = big.weights
    degbar = np.zeros(n)
    for i, j in comp:
        degbar[i] += 1
        degbar[j] += 1
    linear = w / 2.0 - (penalty / 4.0) * degbar
    couplings = tuple((i, j, penalty / 4.0) for i, j in comp)
    constant = -float(np.sum(w)) / 2.0 + (penalty / 4.0) * len(comp)

    scale = 1.0
    if normalize:
        coeffs = np.abs(linear).tolist() + [abs(c[2]) for c in couplings]
        scale = max(coeffs) if coeffs else 1.0
        if scale > 0:
            linear = linear / scale
            couplings = tuple((i, j, v / scale) for i, j, v in couplings)
            constant = constant / scale
        else:
            scale = 1.0
    linear.setflags(write=False)
    return IsingHamiltonian(
        n_qubits=n,
        linear=linear,
        couplings=couplings,
        constant=constant,
        penalty=penalty,
        scale=scale,
        source_big=big,
    )


def energy_of(h: IsingHamiltonian, z: int, include_constant: bool = True) -> float:
    """Energy of one computational-basis state, O(N + |couplings|)."""
    b = bits_of(z, h.n_qubits)
    s = 1.0 - 2.0 * b
    e = float(np.dot(h.linear, s))
    for i, j, v in h.couplings:
        e += v * s[i] * s[j]
    if include_constant:
        e += h.constant
    return e


def energy_vector(
    h: IsingHamiltonian, cap: int = ENERGY_VECTOR_CAP, include_constant: bool = True
) -> np.ndarray:
    """Dense vector of E(z) over all 2^n basis states.

    Entry index z has bit i of z giving qubit i (qubit 0 least
    significant).  Refuses to materialize beyond `cap` qubits; evaluate
    energy_of per state instead at that scale.
    """
    n = h.n_qubits
    if n > cap:
        raise ValueError(
            f"energy_vector would materialize 2^{n} entries (cap {cap}); "
            "use streaming energy_of instead"
        )
    z = np.arange(1 << n, dtype=np.int64)
    signs = 1.0 - 2.0 * ((z[:, None] >> np.arange(n)) & 1)  # (2^n, n)
    e = signs @ h.linear
    for i, j, v in h.couplings:
        e += v * signs[:, i] * signs[:, j]
    if include_constant:
        e += h.constant
    return e


def hamiltonian_to_json(h: IsingHamiltonian) -> str:
    return json.dumps(
        {
            "n": h.n_qubits,
            "linear": h.linear.tolist(),
            "couplings": [[i, j, v] for i, j, v in h.couplings],
            "constant": h.constant,
            "penalty": h.penalty,
            "scale": h.scale,
        },
        indent=2,
    )


def hamiltonian_from_json(text: str) -> IsingHamiltonian:
    doc = json.loads(text)
    linear = np.asarray(doc["linear"], dtype=np.float64)
    linear.setflags(write=False)
    return IsingHamiltonian(
        n_qubits=int(doc["n"]),
        linear=linear,
        couplings=tuple((int(i), int(j), float(v)) for i, j, v in doc["couplings"]),
        constant=float(doc["constant"]),
        penalty=float(doc["penalty"]),
        scale=float(doc.get("scale", 1.0)),
    )
