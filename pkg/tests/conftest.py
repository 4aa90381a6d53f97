import numpy as np
import pytest

from coatom_forge.hermitian import Projector
from coatom_forge.local_space import model_space
from coatom_forge import spectra

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


def word(label):
    """Dense matrix of a tensor word like 'IXZ' (unit 1 leftmost)."""
    out = PAULI[label[0]]
    for ch in label[1:]:
        out = np.kron(out, PAULI[ch])
    return out


def diag_projector(configs, n_units=3):
    """Diagonal projector onto a set of configuration labels."""
    d = 2**n_units
    sel = sorted(configs)
    diag = np.zeros(d)
    diag[sel] = 1.0
    return Projector(
        matrix=np.diag(diag).astype(complex),
        rank=len(sel),
        range_basis=np.eye(d, dtype=complex)[:, sel],
    )


def random_hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def random_state(rng, d):
    """Random density matrix (Wishart-normalized)."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


# the sixteen parity-graph edges in table layout order: first the twelve
# single-digit flips (digit 3, digit 2, digit 1), then the four full flips
TABLE_EDGES = [
    (0, 1), (2, 3), (4, 5), (6, 7),
    (0, 2), (1, 3), (4, 6), (5, 7),
    (0, 4), (1, 5), (2, 6), (3, 7),
    (0, 7), (1, 6), (2, 5), (3, 4),
]


@pytest.fixture(scope="session")
def qubit_basis():
    return model_space("c3-qubit")


@pytest.fixture(scope="session")
def bit_basis():
    return model_space("c3-bit")


@pytest.fixture(scope="session")
def qubit_spec(qubit_basis):
    return spectra.from_local_space(qubit_basis, "c3-qubit")


@pytest.fixture(scope="session")
def bit_spec(bit_basis):
    return spectra.from_local_space(bit_basis, "c3-bit")


@pytest.fixture(scope="session")
def cayley():
    return spectra.cayley_cubic()
