"""Ideal state-vector quantum simulator.

Registers are immutable vectors of 2^n complex amplitudes; evolution is by
unitary operators (dense up to a size cap, structured beyond); measurement is
full projective measurement in the computational basis.

Bit convention: qubit k corresponds to bit k of the basis-state integer, so
qubit 0 is the least significant bit.  ``tensor(a, b)`` places ``a``'s qubits
in the high bits and ``b``'s in the low bits, i.e. the amplitude of
``tensor(a, b)`` at index ``i * 2**b.n_qubits + j`` is ``a[i] * b[j]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import ShapeError, SizeError


class StateVector:
    """Immutable n-qubit register holding 2^n complex amplitudes."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray):
        if not 1 <= n_qubits <= config.MAX_QUBITS:
            raise SizeError(
                f"n_qubits={n_qubits} outside [1, {config.MAX_QUBITS}]")
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if amps.shape != (1 << n_qubits,):
            raise ShapeError(
                f"expected {1 << n_qubits} amplitudes, got {amps.shape}")
        norm_sq = float(np.sum(amps.real**2 + amps.imag**2))
        if abs(norm_sq - 1.0) > config.NORM_TOL:
            raise ValueError(f"state norm² = {norm_sq!r}, not 1")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "n_qubits", n_qubits)
        object.__setattr__(self, "amplitudes", amps)

    def __setattr__(self, name, value):
        raise AttributeError("StateVector is immutable")

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits})"


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of a projective measurement: classical index plus collapsed state."""

    outcome: int
    post_state: StateVector


class UnitaryOp:
    """Base for norm-preserving operators; subclasses implement `_apply`."""

    dim: int

    def _apply(self, amps: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class DenseUnitary(UnitaryOp):
    """Explicit matrix form, validated as unitary on construction."""

    def __init__(self, matrix: np.ndarray):
        m = np.asarray(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"matrix must be square, got {m.shape}")
        dim = m.shape[0]
        if dim & (dim - 1) or dim < 2:
            raise ShapeError(f"dimension {dim} is not a power of 2")
        if dim > config.MAX_DENSE_DIM:
            raise SizeError(
                f"dense form capped at dim {config.MAX_DENSE_DIM}; "
                "use a structured unitary")
        defect = np.linalg.norm(m.conj().T @ m - np.eye(dim))
        if defect > config.UNITARY_TOL:
            raise ValueError(f"matrix is not unitary (‖U†U − I‖ = {defect:.3g})")
        self.matrix = m
        self.dim = dim

    def _apply(self, amps):
        return self.matrix @ amps


class DiagonalUnitary(UnitaryOp):
    """Diagonal phase operator; entries must have unit modulus."""

    def __init__(self, phases: np.ndarray):
        d = np.asarray(phases, dtype=np.complex128)
        if d.ndim != 1 or (d.size & (d.size - 1)) or d.size < 2:
            raise ShapeError(f"need a power-of-2 length vector, got {d.shape}")
        if np.max(np.abs(np.abs(d) - 1.0)) > config.UNITARY_TOL:
            raise ValueError("diagonal entries must have unit modulus")
        self.phases = d
        self.dim = d.size

    def _apply(self, amps):
        return self.phases * amps


class SingleQubitUnitary(UnitaryOp):
    """A 2x2 gate acting on one wire of an n-qubit register.

    `wire` follows the package convention: wire 0 is the least significant
    bit of the basis-state index.
    """

    def __init__(self, gate: np.ndarray, wire: int, n_qubits: int):
        g = np.asarray(gate, dtype=np.complex128)
        if g.shape != (2, 2):
            raise ShapeError(f"gate must be 2x2, got {g.shape}")
        defect = np.linalg.norm(g.conj().T @ g - np.eye(2))
        if defect > config.UNITARY_TOL:
            raise ValueError(f"gate is not unitary (‖U†U − I‖ = {defect:.3g})")
        if not 0 <= wire < n_qubits:
            raise ShapeError(f"wire {wire} outside register of {n_qubits}")
        self.gate = g
        self.wire = wire
        self.n_qubits = n_qubits
        self.dim = 1 << n_qubits

    def _apply(self, amps):
        n = self.n_qubits
        # Axis 0 of the reshaped tensor is the most significant bit.
        axis = n - 1 - self.wire
        psi = amps.reshape([2] * n)
        psi = np.moveaxis(psi, axis, 0)
        psi = (self.gate @ psi.reshape(2, -1)).reshape(psi.shape)
        psi = np.moveaxis(psi, 0, axis)
        return psi.reshape(self.dim)


# Standard 2x2 gates.
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2 = np.eye(2, dtype=np.complex128)


def basis_state(n_qubits: int, index: int) -> StateVector:
    """Register collapsed onto one computational basis state."""
    dim = 1 << n_qubits
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} outside [0, {dim})")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n_qubits, amps)


def uniform_superposition(n_qubits: int,
                          max_qubits: int = config.MAX_QUBITS) -> StateVector:
    """All 2^n basis states with equal real positive amplitude 1/sqrt(2^n)."""
    if not 1 <= n_qubits <= max_qubits:
        raise SizeError(f"n_qubits={n_qubits} outside [1, {max_qubits}]")
    dim = 1 << n_qubits
    amps = np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128)
    return StateVector(n_qubits, amps)


def apply_unitary(u: UnitaryOp, s: StateVector) -> StateVector:
    """Evolve `s` by `u`, returning a fresh register."""
    if u.dim != s.dim:
        raise ShapeError(f"operator dim {u.dim} != state dim {s.dim}")
    return StateVector(s.n_qubits, u._apply(s.amplitudes))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Combine registers; `a` supplies the high bits, `b` the low bits."""
    n_total = a.n_qubits + b.n_qubits
    if n_total > config.MAX_QUBITS:
        raise SizeError(
            f"combined register of {n_total} qubits exceeds {config.MAX_QUBITS}")
    return StateVector(n_total, np.kron(a.amplitudes, b.amplitudes))


def probabilities(s: StateVector) -> np.ndarray:
    """Measurement distribution |amplitude|² per basis index."""
    a = s.amplitudes
    return a.real**2 + a.imag**2


def measure(s: StateVector, rng: np.random.Generator) -> MeasurementOutcome:
    """Projective measurement: sample an index, collapse the register."""
    p = probabilities(s)
    p = p / p.sum()  # absorb float drift so the sampler sees an exact pmf
    outcome = int(rng.choice(s.dim, p=p))
    return MeasurementOutcome(outcome, basis_state(s.n_qubits, outcome))


def is_product_2qubit(s: StateVector) -> bool:
    """True iff a 2-qubit state factors into two single-qubit states.

    Viewing the amplitudes as a 2x2 matrix, the state is a product exactly
    when that matrix has rank 1, i.e. its determinant vanishes.
    """
    if s.n_qubits != 2:
        raise ShapeError(f"need a 2-qubit register, got {s.n_qubits}")
    a = s.amplitudes
    det = a[0] * a[3] - a[1] * a[2]
    return bool(abs(det) < config.PRODUCT_TOL)
