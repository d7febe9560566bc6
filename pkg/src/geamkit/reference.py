"""Canonical example measurements used across the test suite and docs.

All three are conical 2-designs built from rank-1 frames at the parameter
cap, so their design constants are exact rationals:

* qubit complete-MUB POVM: (a, b, c, f) = (1/3, 1, 0, 1/2), S = 1/9;
* qubit tetrahedral (SIC-type) frame: (a, b, c) = (1/2, 1, 1/3), S = 1/6;
* qutrit complete-MUB POVM: (a, b, c, f) = (1/4, 1, 0, 1/3), S = 1/16.
"""

from __future__ import annotations

import math

import numpy as np

from .basis import OperatorBasis, gell_mann_basis, partition_basis
from .geam import Geam, build_geam


def qubit_mub_geam() -> Geam:
    """Complete-MUB qubit POVM, rescaled: three frames of two rank-1 elements.

    Partition order (z, x, y); uniform weights 1/3; design constant 1/9 (the
    parameter cap, attained).  Conical 2-design with kappa_+ = kappa_- = 1/9.
    """
    gm = gell_mann_basis(2)
    # (sigma_x, sigma_y, sigma_z)/sqrt(2) reordered so the z frame comes first.
    basis = OperatorBasis(2, (gm.elements[2], gm.elements[0], gm.elements[1]))
    partition = partition_basis(basis, (2, 2, 2))
    return build_geam(partition, (1 / 3, 1 / 3, 1 / 3), 1 / 9)


def qubit_sic_geam() -> Geam:
    """Single tetrahedral frame of four rank-1 elements (SIC-type), d = 2.

    One frame of size 4 over the full Pauli basis, weight 1, design constant
    1/6 (the cap).  Conical 2-design with kappa_+ = kappa_- = 1/6.
    """
    partition = partition_basis(gell_mann_basis(2), (4,))
    return build_geam(partition, (1.0,), 1 / 6)


def qutrit_mub_vectors() -> list[np.ndarray]:
    """Four mutually unbiased qutrit bases as 3x3 arrays of column vectors.

    Computational basis plus the three quadratic-phase Fourier bases
    v^(m)_k[j] = w^(m j^2 + j k) / sqrt(3), w = exp(2 pi i / 3); any two
    vectors from different bases overlap with |<u|v>|^2 = 1/3.
    """
    w = np.exp(2j * np.pi / 3)
    bases = [np.eye(3, dtype=complex)]
    for m in range(3):
        cols = np.empty((3, 3), dtype=complex)
        for k in range(3):
            for j in range(3):
                cols[j, k] = w ** ((m * j * j + j * k) % 3) / math.sqrt(3)
        bases.append(cols)
    return bases


def _qutrit_mub_basis() -> OperatorBasis:
    """Traceless orthonormal basis adapted to the qutrit MUBs.

    Inverts the frame construction at the cap S = 1/16: from each basis's
    rescaled projectors P_k = (1/4)|v_k><v_k| recover
    H_k = (P_k - (a/d) I) / tau, then G = H_M / (1 + sqrt(M)) and
    G_k = (G - H_k) / (sqrt(M)(1 + sqrt(M))).  Building over this basis at
    S = 1/16 reproduces the MUB projectors exactly.
    """
    d, m = 3, 3
    a = 1 / 4
    tau = math.sqrt((1 / 16) / (m * (math.sqrt(m) + 1.0) ** 2))
    eye = np.eye(d, dtype=complex)
    elements: list[np.ndarray] = []
    for cols in qutrit_mub_vectors():
        hs = [
            (a * np.outer(cols[:, k], cols[:, k].conj()) - (a / d) * eye) / tau
            for k in range(m)
        ]
        g = hs[-1] / (1.0 + math.sqrt(m))
        for h in hs[:-1]:
            elements.append((g - h) / (math.sqrt(m) * (1.0 + math.sqrt(m))))
    return OperatorBasis(d, tuple(elements))


def qutrit_geam() -> Geam:
    """Complete-MUB qutrit POVM, rescaled: four frames of three rank-1 elements.

    Uniform weights 1/4 over the four mutually unbiased bases; design
    constant 1/16 (the cap, attained).  Conical 2-design with
    kappa_+ = kappa_- = 1/16.
    """
    partition = partition_basis(_qutrit_mub_basis(), (3, 3, 3, 3))
    return build_geam(partition, (0.25, 0.25, 0.25, 0.25), 1 / 16)
