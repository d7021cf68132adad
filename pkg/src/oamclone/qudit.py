"""Symmetrization cloning generalized to d-dimensional internal states.

Default mode treats the internal levels as abstract labels: the beam
splitter then acts on the path degree of freedom only (no OAM sign flip on
reflection).  Passing explicit OAM labels with ``oam_flip=True`` restores
the physical reflection bookkeeping; the label set must then be closed
under m -> -m.

Closed forms: F = 1/2 + 1/(d+1) and p = (d+1)/(2d) for the both-port
success probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import elements, fock
from .fock import ConfigurationError, DensityOperator, ModeIndex, build_basis

MAX_ORACLE_DIM = 8
_POL = "L"


@dataclass
class QuditSpec:
    """Normalized amplitude vector of the d-level input state."""

    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.ndim != 1 or self.amplitudes.size < 1:
            raise ConfigurationError("amplitudes must be a nonempty vector")
        nrm = np.linalg.norm(self.amplitudes)
        if abs(nrm - 1.0) > 1e-12:
            if nrm < 1e-15:
                raise ConfigurationError("zero qudit amplitudes")
            self.amplitudes = self.amplitudes / nrm

    @property
    def d(self) -> int:
        return self.amplitudes.size


@dataclass
class QuditCloneResult:
    fidelity: float
    success_probability: float
    clone_density: DensityOperator


def qudit_formula(d: int):
    """Closed-form optimal cloning fidelity and success probability."""
    if d < 1:
        raise ConfigurationError("dimension must be >= 1")
    return 0.5 + 1.0 / (d + 1.0), (d + 1.0) / (2.0 * d)


def ancilla_basis(phi: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis with phi as the first column.

    Completion by modified Gram-Schmidt over the canonical unit vectors in
    fixed pivot order, skipping near-dependent candidates.
    """
    d = phi.size
    cols = [np.asarray(phi, dtype=complex)]
    for k in range(d):
        if len(cols) == d:
            break
        v = np.zeros(d, dtype=complex)
        v[k] = 1.0
        for c in cols:
            v = v - np.vdot(c, v) * c
        nrm = np.linalg.norm(v)
        if nrm > 1e-9:
            cols.append(v / nrm)
    if len(cols) != d:
        raise ConfigurationError("basis completion failed")
    return np.column_stack(cols)


def _default_labels(d: int, oam_flip: bool):
    if oam_flip:
        # symmetric integer set closed under negation, e.g. d=4 -> -3,-1,1,3
        return [2 * k - (d - 1) for k in range(d)]
    return list(range(d))


def qudit_clone(spec: QuditSpec, labels=None, oam_flip: bool = False) -> QuditCloneResult:
    """Run the symmetrization channel with an I_d/d ancilla.

    The ancilla mixture is taken over the deterministic basis whose first
    element is the input state itself.
    """
    d = spec.d
    labels = list(labels) if labels is not None else _default_labels(d, oam_flip)
    if len(set(labels)) != d:
        raise ConfigurationError("labels must be d distinct integers")
    if oam_flip and any(-m not in labels for m in labels):
        raise ConfigurationError("labels not closed under m -> -m; use oam_flip=False")
    basis = build_basis(("a", "b", "a_prime", "b_prime"), labels, pols=(_POL,))
    bs = elements.beam_splitter(basis, oam_flip=oam_flip)
    modes = basis.modes

    def embed(vec, path):
        return fock.superposition_state(
            basis, [(ModeIndex(path, _POL, labels[k]), vec[k])
                    for k in range(d) if abs(vec[k]) > 1e-15])

    psi_a = embed(spec.amplitudes, "a")
    anc = ancilla_basis(spec.amplitudes)
    success = 0.0
    acc = None
    for k in range(d):
        psi_b = embed(anc[:, k], "b")
        two = fock.symmetrize_product(psi_a, psi_b)
        out = elements.apply(bs, two)
        kept, prob = fock.project_keys(
            out, lambda i, j: modes[i].path == "a_prime" and modes[j].path == "a_prime")
        rho = fock.reduced_single_pure(kept)
        contrib = (prob / d) * rho.matrix
        acc = contrib if acc is None else acc + contrib
        success += prob / d
    clone = DensityOperator(basis, "single", acc / success)
    target = embed(spec.amplitudes, "a_prime").amplitudes
    fidelity = float(np.real(target.conj() @ clone.matrix @ target))
    # both BS ports contribute equally; quote the combined success probability
    return QuditCloneResult(fidelity, 2.0 * success, clone)


def brute_force_oracle(spec: QuditSpec):
    """Independent enumeration of the cloning channel, no shared machinery.

    Photons live in C^2 (x) C^d (path (x) level) and the beam splitter is
    the 2x2 splitter on the path factor alone.  For each equally likely
    ancilla basis state the bosonic output is built by explicit tensor
    symmetrization, projected on the a'a' block, and the case weights and
    per-case fidelities are accumulated.
    """
    d = spec.d
    if d > MAX_ORACLE_DIM:
        raise ConfigurationError(f"oracle limited to d <= {MAX_ORACLE_DIM}")
    phi = np.asarray(spec.amplitudes, dtype=complex)
    basis_u = ancilla_basis(phi)
    # path factor: index 0 = a / a', 1 = b / b'
    bs2 = np.array([[1.0, 1.0j], [1.0j, 1.0]]) / math.sqrt(2.0)
    u = np.kron(bs2, np.eye(d))

    proj_a = np.kron(np.diag([1.0, 0.0]), np.eye(d))
    p_same = 0.0
    fid_sum = 0.0
    for k in range(d):
        chi = basis_u[:, k]
        one = np.kron(np.array([1.0, 0.0]), phi)      # photon on path a
        two = np.kron(np.array([0.0, 1.0]), chi)      # photon on path b
        one, two = u @ one, u @ two
        # bosonic (unnormalized) ordered wavefunction and a'a' block
        psi = np.outer(one, two) + np.outer(two, one)
        psi_aa = proj_a @ psi @ proj_a.T
        # ordered-tensor norm^2, divided by 2 for the bosonic normalization
        norm2_in = np.sum(np.abs(psi) ** 2) / 2.0
        w_aa = np.sum(np.abs(psi_aa) ** 2) / 2.0
        prob = w_aa / norm2_in
        if prob < 1e-30:
            continue
        rho1 = (psi_aa @ psi_aa.conj().T) / np.sum(np.abs(psi_aa) ** 2)
        target = np.kron(np.array([1.0, 0.0]), phi)
        fid = float(np.real(target.conj() @ rho1 @ target))
        p_same += prob / d
        fid_sum += (prob / d) * fid
    total_p = 2.0 * p_same  # both exit ports
    return fid_sum / p_same, total_p


def case_probabilities(d: int):
    """Post-selected weights of the identical and orthogonal ancilla cases."""
    if d < 1:
        raise ConfigurationError("dimension must be >= 1")
    return 2.0 / (d + 1.0), (d - 1.0) / (d + 1.0)
