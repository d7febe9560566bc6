import numpy as np
import pytest

from geamkit import (
    build_geam,
    gell_mann_basis,
    partition_basis,
    qubit_mub_geam,
    qubit_sic_geam,
    qutrit_geam,
)

SQ2 = np.sqrt(2.0)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture(scope="session")
def qubit_geam():
    return qubit_mub_geam()


@pytest.fixture(scope="session")
def sic_geam():
    return qubit_sic_geam()


@pytest.fixture(scope="session")
def qutrit_geam_ref():
    return qutrit_geam()


@pytest.fixture(scope="session")
def reference_geams(qubit_geam, sic_geam, qutrit_geam_ref):
    return {"qubit": qubit_geam, "sic": sic_geam, "qutrit": qutrit_geam_ref}


@pytest.fixture(scope="session")
def non_conical_geam():
    """Valid GEAM whose frames carry different design constants."""
    partition = partition_basis(gell_mann_basis(2), (2, 2, 2))
    return build_geam(partition, (1 / 3, 1 / 3, 1 / 3), (1 / 9, 1 / 18, 1 / 12))
