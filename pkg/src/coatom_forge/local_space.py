"""Spaces of local Hamiltonians over tensor products of two-level units.

A hypergraph over units {1..N} selects which subsystems may interact;
each unit carries one of three unit algebras (qubit, classical bit, or
real 2x2).  This module builds the orthogonal factor-interaction basis
of the resulting space of local Hamiltonians, computes partial traces
and marginal maps, and provides orthogonal projection onto the space.

Unit 1 is the leftmost (most significant) tensor factor, so binary
configuration labels read naturally: position x1 x2 ... xN on the
diagonal increases from 00...0 at the top left.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .hermitian import hs_inner

__all__ = [
    "AlgebraKind",
    "Hypergraph",
    "LocalSpaceBasis",
    "hypergraph_closure",
    "factor_interaction_basis",
    "space_dimension",
    "partial_trace",
    "marginal_map",
    "project_onto_space",
    "complement_basis",
    "embed_on_units",
    "model_space",
    "MODEL_NAMES",
]

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_PAULI = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}


class AlgebraKind(enum.Enum):
    """Unit algebra of a single two-level system."""

    QUBIT = "qubit"      # hermitian basis I, X, Y, Z
    BIT = "bit"          # diagonal algebra, hermitian basis I, Z
    REAL_TWO = "realtwo"  # real 2x2 algebra, hermitian basis I, X, Z

    @property
    def symbols(self) -> tuple[str, ...]:
        """Hermitian basis symbols, identity first."""
        return {
            AlgebraKind.QUBIT: ("I", "X", "Y", "Z"),
            AlgebraKind.BIT: ("I", "Z"),
            AlgebraKind.REAL_TWO: ("I", "X", "Z"),
        }[self]

    @property
    def hermitian_dim(self) -> int:
        return len(self.symbols)


def _validate_subsets(n_units: int, subsets) -> frozenset[frozenset[int]]:
    out = set()
    for s in subsets:
        fs = frozenset(int(i) for i in s)
        if not fs <= set(range(1, n_units + 1)):
            raise ValueError(f"subset {sorted(fs)} is not within units 1..{n_units}")
        out.add(fs)
    return frozenset(out)


@dataclass(frozen=True)
class Hypergraph:
    """Family of interacting subsets of the units {1..N}."""

    n_units: int
    subsets: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "subsets", _validate_subsets(self.n_units, self.subsets))

    def is_closed(self) -> bool:
        """True when the family is downward closed (a hypergraph proper)."""
        for s in self.subsets:
            for k in range(len(s) + 1):
                for sub in itertools.combinations(s, k):
                    if frozenset(sub) not in self.subsets:
                        return False
        return True

    def closure(self) -> "Hypergraph":
        """Downward closure: adds all subsets of the members (idempotent)."""
        closed = set()
        for s in self.subsets | {frozenset()}:
            for k in range(len(s) + 1):
                closed.update(frozenset(c) for c in itertools.combinations(s, k))
        return Hypergraph(self.n_units, frozenset(closed))

    def generating_class(self) -> tuple[frozenset, ...]:
        """Maximal members (an antichain), sorted by size then lexicographically."""
        maximal = [
            s for s in self.subsets
            if not any(s < t for t in self.subsets)
        ]
        return tuple(sorted(maximal, key=lambda s: (len(s), sorted(s))))

    def members_sorted(self) -> tuple[frozenset, ...]:
        return tuple(sorted(self.subsets, key=lambda s: (len(s), sorted(s))))

    @staticmethod
    def cycle3() -> "Hypergraph":
        return Hypergraph(3, [{1, 2}, {2, 3}, {3, 1}]).closure()

    @staticmethod
    def path3() -> "Hypergraph":
        return Hypergraph(3, [{1, 2}, {2, 3}]).closure()

    @staticmethod
    def k_local(n_units: int, k: int) -> "Hypergraph":
        """All subsets of cardinality k, closed downward."""
        return Hypergraph(
            n_units, [set(c) for c in itertools.combinations(range(1, n_units + 1), k)]
        ).closure()


def hypergraph_closure(generating: Hypergraph) -> Hypergraph:
    return generating.closure()


def _word_matrix(label: str) -> np.ndarray:
    mat = _PAULI[label[0]]
    for ch in label[1:]:
        mat = np.kron(mat, _PAULI[ch])
    return mat


@dataclass(frozen=True)
class LocalSpaceBasis:
    """Ordered orthogonal basis of a space of local Hamiltonians.

    Element 0 is the identity word.  Elements are kept at raw tensor-word
    scale, so ``hs_inner(e, e) == 2**N`` for every element.
    """

    hypergraph: Hypergraph
    algebras: tuple
    labels: tuple
    supports: tuple          # per element, the frozenset of non-identity units
    elements: np.ndarray     # shape (n, d, d)
    d: int

    @property
    def n_units(self) -> int:
        return self.hypergraph.n_units

    @property
    def dim(self) -> int:
        return len(self.labels)

    def coordinates(self, a) -> np.ndarray:
        """Coefficients of the orthogonal projection onto the space.

        ``coordinates(a)[i] = <e_i, a> / 2**N``; for ``a`` inside the
        space these are the exact expansion coefficients.
        """
        a = np.asarray(a, dtype=complex)
        # <e, a> = sum_ij conj(e_ij) a_ij for hermitian words
        return np.real(np.einsum("kij,ij->k", self.elements.conj(), a)) / self.d

    def assemble(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        if coords.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} coordinates, got {coords.shape}")
        return np.einsum("k,kij->ij", coords, self.elements)


def space_dimension(g: Hypergraph, algebras) -> int:
    """Dimension of the local-Hamiltonian space: sum over members of
    the product of (unit hermitian dimension - 1) over the member."""
    algebras = tuple(algebras)
    if len(algebras) != g.n_units:
        raise ValueError("one algebra kind per unit is required")
    if not g.is_closed():
        raise ValueError("hypergraph is not downward closed; apply closure() first")
    total = 0
    for nu in g.subsets:
        prod = 1
        for i in nu:
            prod *= algebras[i - 1].hermitian_dim - 1
        total += prod
    return total


def factor_interaction_basis(g: Hypergraph, algebras) -> LocalSpaceBasis:
    """Orthogonal word basis of the local space, identity word first.

    For each member nu of the hypergraph (sorted by size then lex), all
    tensor words with non-identity letters exactly on nu are emitted,
    letters running in X < Y < Z order per unit.
    """
    algebras = tuple(AlgebraKind(a) for a in algebras)
    n = g.n_units
    if len(algebras) != n:
        raise ValueError("one algebra kind per unit is required")
    if not g.is_closed():
        raise ValueError("hypergraph is not downward closed; apply closure() first")
    labels = []
    supports = []
    for nu in g.members_sorted():
        units = sorted(nu)
        letter_choices = [algebras[i - 1].symbols[1:] for i in units]
        for letters in itertools.product(*letter_choices):
            word = ["I"] * n
            for unit, letter in zip(units, letters):
                word[unit - 1] = letter
            labels.append("".join(word))
            supports.append(frozenset(units))
    elements = np.stack([_word_matrix(lab) for lab in labels])
    return LocalSpaceBasis(
        hypergraph=g,
        algebras=algebras,
        labels=tuple(labels),
        supports=tuple(supports),
        elements=elements,
        d=2**n,
    )


def complement_basis(basis: LocalSpaceBasis) -> LocalSpaceBasis:
    """Word basis of the orthogonal complement of the space within the
    full hermitian space of the unit algebras."""
    n = basis.n_units
    full = Hypergraph(n, [set(range(1, n + 1))]).closure()
    all_words = factor_interaction_basis(full, basis.algebras)
    keep = [i for i, lab in enumerate(all_words.labels) if lab not in set(basis.labels)]
    return LocalSpaceBasis(
        hypergraph=full,
        algebras=basis.algebras,
        labels=tuple(all_words.labels[i] for i in keep),
        supports=tuple(all_words.supports[i] for i in keep),
        elements=all_words.elements[keep] if keep else np.zeros((0, basis.d, basis.d), dtype=complex),
        d=basis.d,
    )


def _check_units(n: int, keep) -> tuple[int, ...]:
    keep = tuple(sorted(int(i) for i in keep))
    if any(i < 1 or i > n for i in keep):
        raise ValueError(f"units {keep} are not within 1..{n}")
    if len(set(keep)) != len(keep):
        raise ValueError("duplicate units in subset")
    return keep


def partial_trace(a, keep) -> np.ndarray:
    """Trace out all units except ``keep`` (1-based unit indices).

    The output is ordered by ascending unit index within ``keep``; it is
    the adjoint of embedding a matrix on ``keep`` with identities on the
    remaining units.
    """
    a = np.asarray(a, dtype=complex)
    d = a.shape[0]
    n = int(round(np.log2(d)))
    if 2**n != d or a.shape != (d, d):
        raise ValueError(f"matrix dimension {a.shape} is not a power-of-two square")
    keep = _check_units(n, keep)
    tensor = a.reshape((2,) * (2 * n))
    row_idx = list(range(n))
    col_idx = [n + i if (i + 1) in keep else i for i in range(n)]
    out_idx = [i for i in range(n) if (i + 1) in keep] + [
        n + i for i in range(n) if (i + 1) in keep
    ]
    return np.einsum(tensor, row_idx + col_idx, out_idx).reshape(
        2 ** len(keep), 2 ** len(keep)
    )


def embed_on_units(b, units, n_units: int) -> np.ndarray:
    """Embed a matrix acting on ``units`` into the N-unit space with
    identities elsewhere (the map partial_trace is adjoint to)."""
    b = np.asarray(b, dtype=complex)
    units = _check_units(n_units, units)
    k = len(units)
    if b.shape != (2**k, 2**k):
        raise ValueError(f"matrix shape {b.shape} does not match {k} units")
    rest = [i for i in range(1, n_units + 1) if i not in units]
    full = np.kron(b, np.eye(2 ** len(rest), dtype=complex))
    # full currently orders units as (units..., rest...); permute to ascending
    order = list(units) + rest
    perm = [order.index(i + 1) for i in range(n_units)]
    tensor = full.reshape((2,) * (2 * n_units))
    tensor = tensor.transpose(perm + [n_units + p for p in perm])
    return tensor.reshape(2**n_units, 2**n_units)


def marginal_map(a, g: Hypergraph) -> list:
    """Marginals (partial traces) of ``a`` for each member of the
    generating class of ``g``, in sorted order."""
    return [(nu, partial_trace(a, nu)) for nu in g.generating_class()]


def project_onto_space(a, basis: LocalSpaceBasis) -> np.ndarray:
    """Orthogonal projection onto the local space spanned by ``basis``."""
    a = np.asarray(a, dtype=complex)
    if a.shape != (basis.d, basis.d):
        raise ValueError(f"dimension mismatch: {a.shape} vs {(basis.d, basis.d)}")
    return basis.assemble(basis.coordinates(a))


MODEL_NAMES = ("c3-qubit", "p3-qubit", "c3-bit", "p3-bit", "c3-realtwo")


@lru_cache(maxsize=None)
def model_space(name: str) -> LocalSpaceBasis:
    """Resolve a model descriptor like ``c3-qubit`` to its basis."""
    try:
        graph_name, alg_name = name.split("-", 1)
        graph = {"c3": Hypergraph.cycle3, "p3": Hypergraph.path3}[graph_name]()
        kind = {
            "qubit": AlgebraKind.QUBIT,
            "bit": AlgebraKind.BIT,
            "realtwo": AlgebraKind.REAL_TWO,
        }[alg_name]
    except (ValueError, KeyError):
        raise ValueError(
            f"unknown model {name!r}; expected one of {', '.join(MODEL_NAMES)}"
        ) from None
    return factor_interaction_basis(graph, (kind,) * 3)
