"""Exact machinery for commuting (diagonal) models of N binary units.

Support sets of configurations are bitmasks over {0,1}^N; all tests are
integer-exact.  The module covers the 0/1 marginal-indicator matrix M,
M-feasibility of support sets, cylinder-intersection decompositions of
frustration-free ground projectors, and the exhaustive three-bit coatom
enumerations (cycle, frustration-free cycle, and path interaction
patterns), whose complements are edges of the complete bipartite graph
on the two digit-sum parity classes.

Configuration labels follow the binary convention with digit 1 most
significant: the diagonal position increases from 00...0 at the top
left to 11...1 at the bottom right.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .local_space import Hypergraph

__all__ = [
    "SupportSet",
    "MMatrix",
    "FfDecomposition",
    "ClassicalModel",
    "m_matrix",
    "is_m_feasible",
    "ff_ground_projector_form",
    "enumerate_coatoms",
    "lattice_membership",
    "k44_edge",
    "digit_sum_parity",
    "pair_pauli_form",
]


def digit_sum_parity(x: int) -> int:
    return bin(x).count("1") % 2


def _truncate(x: int, nu, n_units: int) -> tuple:
    """Digits of configuration x on the (sorted) units of nu."""
    return tuple((x >> (n_units - i)) & 1 for i in sorted(nu))


@dataclass(frozen=True)
class SupportSet:
    """Subset F of the configuration space {0,1}^N as a bitmask:
    bit x is set iff configuration x lies in F."""

    n_units: int
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < (1 << (1 << self.n_units)):
            raise ValueError("mask out of range for the configuration space")

    @staticmethod
    def from_configs(n_units: int, configs) -> "SupportSet":
        mask = 0
        for x in configs:
            x = int(x)
            if not 0 <= x < (1 << n_units):
                raise ValueError(f"configuration {x} out of range")
            mask |= 1 << x
        return SupportSet(n_units, mask)

    @staticmethod
    def from_string(n_units: int, text: str) -> "SupportSet":
        """Parse either a 0/1 indicator string (left character is
        configuration 00...0) or a comma list of binary configurations."""
        text = text.strip()
        size = 1 << n_units
        if "," in text or len(text) == n_units:
            configs = [int(tok.strip(), 2) for tok in text.split(",") if tok.strip()]
            return SupportSet.from_configs(n_units, configs)
        if len(text) == size and set(text) <= {"0", "1"}:
            return SupportSet.from_configs(
                n_units, [x for x, ch in enumerate(text) if ch == "1"]
            )
        raise ValueError(
            f"support must be a {size}-character 0/1 string or a comma list of "
            f"{n_units}-digit binary configurations"
        )

    def configs(self) -> tuple:
        return tuple(x for x in range(1 << self.n_units) if self.mask >> x & 1)

    def complement(self) -> "SupportSet":
        full = (1 << (1 << self.n_units)) - 1
        return SupportSet(self.n_units, full ^ self.mask)

    @property
    def size(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def to_diag(self) -> np.ndarray:
        """The corresponding diagonal 0/1 projector matrix."""
        diag = np.array([float(self.mask >> x & 1) for x in range(1 << self.n_units)])
        return np.diag(diag).astype(complex)

    def indicator_string(self) -> str:
        return "".join("1" if x in self else "0" for x in range(1 << self.n_units))

    def label(self) -> str:
        return "{" + ",".join(format(x, f"0{self.n_units}b") for x in self.configs()) + "}"


@dataclass(frozen=True)
class MMatrix:
    """0/1 matrix of the marginal map on point masses: rows indexed by
    pairs (nu, y) with y a configuration of the units nu, columns by
    global configurations; entry 1 iff the truncation of the column's
    configuration to nu equals y."""

    n_units: int
    row_index: tuple     # tuple of (nu, y) pairs
    matrix: np.ndarray   # integer array, shape (len(row_index), 2**n_units)


def m_matrix(g: Hypergraph, n_units: int, full_rows: bool = False) -> MMatrix:
    """Marginal-indicator matrix over the generating class of g (the
    lower-order rows are redundant for support conditions; pass
    ``full_rows`` to emit every member of the hypergraph)."""
    members = g.members_sorted() if full_rows else g.generating_class()
    rows = []
    index = []
    for nu in members:
        nu_t = tuple(sorted(nu))
        for y in itertools.product((0, 1), repeat=len(nu_t)):
            index.append((nu_t, y))
            rows.append(
                [
                    1 if _truncate(x, nu_t, n_units) == y else 0
                    for x in range(1 << n_units)
                ]
            )
    return MMatrix(
        n_units=n_units,
        row_index=tuple(index),
        matrix=np.array(rows, dtype=int) if rows else np.zeros((0, 1 << n_units), dtype=int),
    )


def is_m_feasible(F: SupportSet, g: Hypergraph, full_rows: bool = False) -> bool:
    """True iff for every configuration x outside F some member nu has
    the truncation x_nu unmatched by every element of F."""
    n = F.n_units
    members = g.members_sorted() if full_rows else g.generating_class()
    inside = F.configs()
    for x in range(1 << n):
        if x in F:
            continue
        witnessed = False
        for nu in members:
            x_nu = _truncate(x, nu, n)
            if all(_truncate(y, nu, n) != x_nu for y in inside):
                witnessed = True
                break
        if not witnessed:
            return False
    return True


@dataclass(frozen=True)
class FfDecomposition:
    """Cylinder factors P_nu with intersection equal to the support set:
    the ground-projector form of a frustration-free Hamiltonian."""

    n_units: int
    factors: tuple  # tuple of (nu, frozenset of allowed nu-configurations)

    def proper_factors(self) -> tuple:
        """Factors that actually constrain (exclude something)."""
        return tuple(
            (nu, allowed)
            for nu, allowed in self.factors
            if len(allowed) < (1 << len(nu))
        )


def ff_ground_projector_form(F: SupportSet, g: Hypergraph):
    """Cylinder-intersection form of F, or None.

    Excludes, for every outside configuration x and every generating
    member nu on which x differs from all of F, the pattern x_nu; F has
    the form exactly when the resulting intersection reproduces it,
    which happens iff F is M-feasible.
    """
    n = F.n_units
    members = g.generating_class()
    inside = F.configs()
    excluded = {tuple(sorted(nu)): set() for nu in members}
    for x in range(1 << n):
        if x in F:
            continue
        for nu in members:
            nu_t = tuple(sorted(nu))
            x_nu = _truncate(x, nu_t, n)
            if all(_truncate(y, nu_t, n) != x_nu for y in inside):
                excluded[nu_t].add(x_nu)
    factors = tuple(
        (nu_t, frozenset(set(itertools.product((0, 1), repeat=len(nu_t))) - bad))
        for nu_t, bad in sorted(excluded.items(), key=lambda kv: (len(kv[0]), kv[0]))
    )
    mask = 0
    for z in range(1 << n):
        if all(_truncate(z, nu_t, n) in allowed for nu_t, allowed in factors):
            mask |= 1 << z
    if mask != F.mask:
        return None
    return FfDecomposition(n_units=n, factors=factors)


def k44_edge(x: int, y: int) -> bool:
    """Edge test of the complete bipartite graph on the parity classes:
    the digit sums of x and y differ modulo two."""
    if x == y:
        raise ValueError("an edge needs two distinct configurations")
    return digit_sum_parity(x) != digit_sum_parity(y)


class ClassicalModel(enum.Enum):
    """Which three-bit interaction pattern the edge criterion encodes."""

    C3 = "c3"        # two-local over the cycle: parity edge
    C3FF = "c3ff"    # frustration-free two-local: differ in exactly one digit
    P3 = "p3"        # two-local over the path: differ exactly in digit 1 or 3

    def edge(self, x: int, y: int) -> bool:
        if x == y:
            raise ValueError("an edge needs two distinct configurations")
        diff = x ^ y
        if self is ClassicalModel.C3:
            return k44_edge(x, y)
        if self is ClassicalModel.C3FF:
            return bin(diff).count("1") == 1
        return diff in (0b100, 0b001)


def _ordered_pairs() -> list:
    """All 28 two-element subsets in the table layout order: distance-one
    pairs grouped by differing digit (3, then 2, then 1), then the
    distance-three pairs, each group by ascending smaller element."""
    pairs = []
    for bit in (1, 2, 4):
        group = sorted({(min(x, x ^ bit), max(x, x ^ bit)) for x in range(8)})
        pairs.extend(group)
    pairs.extend(sorted({(min(x, 7 ^ x), max(x, 7 ^ x)) for x in range(8)}))
    dist2 = sorted(
        (min(x, y), max(x, y))
        for x, y in itertools.combinations(range(8), 2)
        if bin(x ^ y).count("1") == 2
    )
    pairs.extend(dist2)
    return pairs


def enumerate_coatoms(model: ClassicalModel) -> list:
    """Brute force over all 28 two-element subsets, keeping those whose
    pair passes the model's edge criterion; returns the complements
    (the rank-six coatoms) in table layout order."""
    model = ClassicalModel(model)
    out = []
    for x, y in _ordered_pairs():
        if model.edge(x, y):
            out.append(SupportSet.from_configs(3, [x, y]).complement())
    return out


def lattice_membership(F: SupportSet, model: ClassicalModel) -> bool:
    """True iff the complement of F is a union (possibly empty) of the
    model's allowed edges, i.e. every outside configuration pairs with
    another outside configuration along an allowed edge."""
    model = ClassicalModel(model)
    outside = F.complement().configs()
    return all(
        any(z != w and model.edge(z, w) for w in outside) for z in outside
    )


def pair_pauli_form(x: int, y: int) -> str:
    """Table-style factorized expression of the rank-two diagonal
    projector onto a pair of three-bit configurations."""
    diff = x ^ y
    weight = bin(diff).count("1")
    if weight == 1:
        parts = []
        for i in range(3):
            bit = 4 >> i
            if diff & bit:
                parts.append("I")
            else:
                parts.append("(I+Z)" if not (x >> (2 - i)) & 1 else "(I-Z)")
        return "1/4 " + "".join(parts)
    if weight == 3:
        words = ["IZZ", "ZIZ", "ZZI"]
        signs = []
        for w in words:
            pos = [i for i, ch in enumerate(w) if ch == "Z"]
            s = sum((x >> (2 - i)) & 1 for i in pos) % 2
            signs.append("-" if s else "+")
        return "1/4 (III {} IZZ {} ZIZ {} ZZI)".format(*signs)
    return "1/4 (sum of parity words)"  # distance-two pairs are not edges
