"""1 -> 2 symmetrization cloner for OAM qubits.

The qubit lives on the {+2, -2} OAM subspace.  The input photon enters path
a, the ancilla photon enters path b in the maximally mixed state, the two
interfere on the balanced beam splitter and the runs where both photons
emerge in a' are kept.  Each surviving photon carries the optimal clone:
fidelity 5/6, single-port success probability 3/8, Bloch vector shrunk to
two thirds of the input one.

Two independent routes compute the channel: ``run_cloner_full`` evolves the
two-photon state through the beam-splitter unitary, ``run_cloner_projector``
applies the Bell-exchange projector onto the coalesced port directly.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import numpy as np

from . import elements, fock
from .fock import (
    ConfigurationError,
    DensityOperator,
    InvalidStateError,
    ModeIndex,
    PhotonState,
    TwoPhotonState,
    build_basis,
)

OAM_PLUS = 2
OAM_MINUS = -2
_POL = "L"  # both photons share one polarization; the qubit is OAM only

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_FLIP = np.array([[0, 1], [1, 0]], dtype=complex)  # OAM sign inversion on o2

# the six states measured in the universality test, as (alpha, beta) on (+2, -2)
SIX_STATE_AMPLITUDES = {
    "h": (1 / math.sqrt(2), 1 / math.sqrt(2)),
    "v": (1 / (1j * math.sqrt(2)), -1 / (1j * math.sqrt(2))),
    "minus2": (0.0, 1.0),
    "plus2": (1.0, 0.0),
    "a": ((1 - 1j) / 2, (1 + 1j) / 2),
    "d": ((1 + 1j) / 2, (1 - 1j) / 2),
}


@dataclass
class QubitSpec:
    """Normalized qubit amplitudes on the {+2, -2} basis."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        nrm = math.sqrt(abs(self.alpha) ** 2 + abs(self.beta) ** 2)
        if abs(nrm - 1.0) > 1e-12:
            if nrm < 1e-15:
                raise InvalidStateError("zero qubit amplitudes")
            self.alpha /= nrm
            self.beta /= nrm

    @classmethod
    def from_bloch(cls, theta: float, phi: float) -> "QubitSpec":
        return cls(math.cos(theta / 2.0),
                   cmath.exp(1j * phi) * math.sin(theta / 2.0))

    @classmethod
    def named(cls, label: str) -> "QubitSpec":
        try:
            a, b = SIX_STATE_AMPLITUDES[label]
        except KeyError:
            raise ConfigurationError(f"unknown state label {label!r}") from None
        return cls(a, b)

    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    def bloch(self) -> np.ndarray:
        v = self.vector()
        return np.array([np.real(np.vdot(v, PAULI[ax] @ v)) for ax in "xyz"])

    def orthogonal(self) -> "QubitSpec":
        return QubitSpec(-self.beta.conjugate(), self.alpha.conjugate())


@dataclass
class CloneResult:
    """Outcome of one cloning run on the {+2, -2} sector."""

    clone_density: np.ndarray  # 2x2, unit trace
    success_probability: float
    fidelity: float
    stokes: np.ndarray

    def to_record(self, input_qubit: QubitSpec) -> dict:
        return {
            "input_bloch": [float(x) for x in input_qubit.bloch()],
            "fidelity": float(self.fidelity),
            "success_prob": float(self.success_probability),
            "stokes": [float(x) for x in self.stokes],
        }


@functools.lru_cache(maxsize=1)
def cloner_basis():
    return build_basis(("a", "b", "a_prime", "b_prime"),
                       (OAM_MINUS, OAM_PLUS), pols=(_POL,))


@functools.lru_cache(maxsize=1)
def _cloner_bs():
    return elements.beam_splitter(cloner_basis())


def embed_qubit(qubit: QubitSpec, basis, path: str) -> PhotonState:
    return fock.superposition_state(basis, [
        (ModeIndex(path, _POL, OAM_PLUS), qubit.alpha),
        (ModeIndex(path, _POL, OAM_MINUS), qubit.beta),
    ])


def stokes_vector(rho: np.ndarray) -> np.ndarray:
    """Pauli expectation values of a 2x2 density matrix on (+2, -2)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ConfigurationError("stokes_vector expects a 2x2 density matrix")
    return np.array([np.real(np.trace(rho @ PAULI[ax])) for ax in "xyz"])


def _extract_o2(rho1: DensityOperator, path: str = "a_prime") -> np.ndarray:
    basis = rho1.basis
    idx = [basis.index(ModeIndex(path, _POL, OAM_PLUS)),
           basis.index(ModeIndex(path, _POL, OAM_MINUS))]
    block = rho1.matrix[np.ix_(idx, idx)]
    tr = np.trace(block).real
    if tr < 1e-12:
        raise InvalidStateError("no population in the o2 sector")
    return block / tr


def _ancilla_states(n_samples, seed):
    """Ancilla ensemble realizing the maximally mixed state.

    Exact mode: the even {+2, -2} mixture.  Sampled mode: a half-wave plate
    at a uniformly random angle before the transferrer, i.e. real qubits
    (cos 2t, sin 2t) with t uniform, which average to I/2.
    """
    if n_samples is None:
        return [(QubitSpec(1.0, 0.0), 0.5), (QubitSpec(0.0, 1.0), 0.5)]
    if n_samples < 1:
        raise ConfigurationError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, math.pi, size=n_samples)
    w = 1.0 / n_samples
    return [(QubitSpec(math.cos(2 * t), math.sin(2 * t)), w) for t in angles]


def _assemble(branches, qubit: QubitSpec) -> CloneResult:
    """Combine per-ancilla post-selected branches into the clone state."""
    success = sum(w * p for _, w, p in branches)
    acc = np.zeros((2, 2), dtype=complex)
    for rho, w, p in branches:
        acc += w * p * rho
    clone = acc / success
    target = qubit.vector()
    fidelity = float(np.real(target.conj() @ clone @ target))
    return CloneResult(clone, float(success), fidelity, stokes_vector(clone))


def run_cloner_full(qubit: QubitSpec, n_ancilla_samples: int | None = None,
                    seed: int | None = None, ancilla: QubitSpec | None = None,
                    port: str = "a_prime") -> CloneResult:
    """Clone via the explicit beam-splitter evolution and same-port post-selection.

    ``ancilla`` replaces the maximally mixed ancilla by a pure state (used
    to reproduce the identical-photon limit); ``port`` selects which output
    port is post-selected, both yield the same clone state.
    """
    if port not in ("a_prime", "b_prime"):
        raise ConfigurationError("port must be 'a_prime' or 'b_prime'")
    basis = cloner_basis()
    bs = _cloner_bs()
    psi_a = embed_qubit(qubit, basis, "a")
    modes = basis.modes
    ensemble = ([(ancilla, 1.0)] if ancilla is not None
                else _ancilla_states(n_ancilla_samples, seed))
    branches = []
    for chi, w in ensemble:
        psi_b = embed_qubit(chi, basis, "b")
        two = fock.symmetrize_product(psi_a, psi_b)
        out = elements.apply(bs, two)
        kept, prob = fock.project_keys(
            out, lambda i, j: modes[i].path == port and modes[j].path == port)
        rho = _extract_o2(fock.reduced_single_pure(kept), path=port)
        if port == "b_prime":
            # the input photon reaches b' by reflection; undo the known OAM flip
            rho = _FLIP @ rho @ _FLIP
        branches.append((rho, w, prob))
    return _assemble(branches, qubit)


def bell_basis(basis, paths=("a", "b"), pol=_POL, oam_pair=(OAM_PLUS, OAM_MINUS)):
    """The four Bell states of the o2 pair on the given path pair.

    Returns (phi_plus, phi_minus, psi_plus, psi_minus).  For a same-path
    (coalesced) pair the antisymmetric psi_minus has no bosonic
    representation and is returned as None.
    """
    pa, pb = paths
    plus, minus = oam_pair
    same = pa == pb

    def two(terms):
        amps = {}
        for (ma, mb), amp in terms:
            i = basis.index(ModeIndex(pa, pol, ma))
            j = basis.index(ModeIndex(pb, pol, mb))
            key = (min(i, j), max(i, j))
            amps[key] = amps.get(key, 0.0) + amp
        amps = {k: a for k, a in amps.items() if abs(a) > 1e-15}
        state = TwoPhotonState(basis, amps)
        nrm = state.norm()
        if nrm < 1e-15:
            return None
        return TwoPhotonState(basis, {k: a / nrm for k, a in amps.items()})

    inv = 1.0 / math.sqrt(2.0)
    phi_plus = two([((plus, plus), inv), ((minus, minus), inv)])
    phi_minus = two([((plus, plus), inv), ((minus, minus), -inv)])
    if same:
        # |+2>|-2> and |-2>|+2> collapse onto one bosonic key
        psi_plus = two([((plus, minus), 1.0)])
        psi_minus = None
    else:
        psi_plus = two([((plus, minus), inv), ((minus, plus), inv)])
        psi_minus = two([((plus, minus), inv), ((minus, plus), -inv)])
    return phi_plus, phi_minus, psi_plus, psi_minus


# amplitude carried by each both-in-a' branch of the balanced splitter
_PROJECTOR_SCALE = 1.0 / math.sqrt(2.0)


def coalescence_projector(two_ab: TwoPhotonState) -> TwoPhotonState:
    """Apply the Bell-exchange projector mapping the ab pair onto the a' port.

    The projector swaps the symmetric Bell states Phi+ <-> Psi+ and maps
    Psi- -> Phi-, encoding the OAM sign inversion on reflection; the overall
    1/sqrt(2) amplitude reproduces the physical post-selection probability
    of the balanced splitter.
    """
    basis = two_ab.basis
    ab = bell_basis(basis, ("a", "b"))
    aa = bell_basis(basis, ("a_prime", "a_prime"))
    pairs = [(aa[2], ab[0]),   # |Psi+><Phi+|
             (aa[0], ab[2]),   # |Phi+><Psi+|
             (aa[1], ab[3])]   # |Phi-><Psi-|
    amps = {}
    for out_state, in_state in pairs:
        coeff = _PROJECTOR_SCALE * in_state.inner(two_ab)
        if abs(coeff) < 1e-15:
            continue
        for k, a in out_state.amplitudes.items():
            amps[k] = amps.get(k, 0.0) + coeff * a
    prob = sum(abs(a) ** 2 for a in amps.values())
    if prob < 1e-30:
        return TwoPhotonState(basis, {}, 0.0)
    scale = 1.0 / math.sqrt(prob)
    return TwoPhotonState(basis, {k: a * scale for k, a in amps.items()},
                          two_ab.weight * prob)


def run_cloner_projector(qubit: QubitSpec, n_ancilla_samples: int | None = None,
                         seed: int | None = None) -> CloneResult:
    """Clone via the coalesced-port Bell projector (independent route)."""
    basis = cloner_basis()
    psi_a = embed_qubit(qubit, basis, "a")
    branches = []
    for ancilla, w in _ancilla_states(n_ancilla_samples, seed):
        psi_b = embed_qubit(ancilla, basis, "b")
        two = fock.symmetrize_product(psi_a, psi_b)
        kept = coalescence_projector(two)
        prob = kept.weight / two.weight
        rho = _extract_o2(fock.reduced_single_pure(kept))
        branches.append((rho, w, prob))
    return _assemble(branches, qubit)


def clone_with_preparation_infidelity(qubit: QubitSpec, f_prep: float,
                                      runner=run_cloner_full) -> CloneResult:
    """Cloner fed the imperfectly prepared input F|phi><phi| + (1-F)|perp><perp|."""
    if not 0.5 <= f_prep <= 1.0:
        raise ConfigurationError("f_prep must lie in [0.5, 1]")
    good = runner(qubit)
    if f_prep == 1.0:
        return good
    bad = runner(qubit.orthogonal())
    success = f_prep * good.success_probability + (1 - f_prep) * bad.success_probability
    clone = (f_prep * good.success_probability * good.clone_density
             + (1 - f_prep) * bad.success_probability * bad.clone_density) / success
    target = qubit.vector()
    fid = float(np.real(target.conj() @ clone @ target))
    return CloneResult(clone, float(success), fid, stokes_vector(clone))


@dataclass
class SweepSummary:
    per_state: dict
    min_fidelity: float
    max_fidelity: float
    mean_fidelity: float
    std_fidelity: float


def universality_sweep(n: int, seed: int | None = 0, f_prep: float = 1.0) -> SweepSummary:
    """Clone the six reference states plus n Haar-random qubits."""
    if n < 1:
        raise ConfigurationError("n must be >= 1")
    rng = np.random.default_rng(seed)
    qubits = {label: QubitSpec.named(label) for label in SIX_STATE_AMPLITUDES}
    for k in range(n):
        qubits[f"random_{k}"] = haar_random_qubit(rng)
    fids = {}
    for label, q in qubits.items():
        if f_prep == 1.0:
            fids[label] = run_cloner_full(q).fidelity
        else:
            fids[label] = clone_with_preparation_infidelity(q, f_prep).fidelity
    values = np.array(list(fids.values()))
    return SweepSummary(fids, float(values.min()), float(values.max()),
                        float(values.mean()), float(values.std()))


def haar_random_qubit(rng) -> QubitSpec:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return QubitSpec(v[0], v[1])
