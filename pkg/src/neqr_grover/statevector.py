"""Dense statevector simulation for the small gate set used by NEQR and Grover.

Basis index convention: qubit 0 is the least-significant bit of the amplitude
index. Bitstrings are rendered most-significant qubit first, so the string for
index ``i`` on ``n`` qubits is ``format(i, f"0{n}b")``.

Gates are applied by viewing the amplitude array as an ``n``-axis tensor of
shape ``(2,) * n`` and acting on basic-index slices, which touches only the
amplitudes a gate can change and never builds a matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "MAX_QUBITS",
    "X",
    "H",
    "Z",
    "CX",
    "CCX",
    "MCX",
    "MCZ",
    "Gate",
    "Circuit",
    "StateVector",
    "controlled_x",
    "new_basis_state",
    "zero_state",
    "apply_circuit",
    "probabilities",
    "marginal_probabilities",
    "sample",
    "inverse_circuit",
    "unitary",
    "equal_up_to_global_phase",
    "bitstring",
]

MAX_QUBITS = 24
NORM_TOLERANCE = 1e-10
_SQRT1_2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class X:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class H:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class Z:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class CX:
    control: int
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class CCX:
    control_a: int
    control_b: int
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control_a, self.control_b, self.target)


@dataclass(frozen=True)
class MCX:
    """NOT on ``target`` when every qubit in ``controls`` is 1."""

    controls: tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))

    @property
    def qubits(self) -> tuple[int, ...]:
        return (*self.controls, self.target)


@dataclass(frozen=True)
class MCZ:
    """Phase -1 on the all-ones pattern of ``qubits``; symmetric in its qubits."""

    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if not self.qubits:
            raise InvalidArgumentError("MCZ needs at least one qubit")


Gate = Union[X, H, Z, CX, CCX, MCX, MCZ]
_GATE_TYPES = (X, H, Z, CX, CCX, MCX, MCZ)


def controlled_x(controls: Sequence[int], target: int) -> Gate:
    """Smallest gate type that realises a NOT with ``controls``."""
    controls = tuple(controls)
    if len(controls) == 0:
        return X(target)
    if len(controls) == 1:
        return CX(controls[0], target)
    if len(controls) == 2:
        return CCX(controls[0], controls[1], target)
    return MCX(controls, target)


def _check_gate(gate, qubit_count: int) -> None:
    if not isinstance(gate, _GATE_TYPES):
        raise InvalidArgumentError(f"unsupported gate {gate!r}")
    qubits = gate.qubits
    if len(set(qubits)) != len(qubits):
        raise InvalidArgumentError(f"repeated qubit in {gate!r}")
    for q in qubits:
        if not 0 <= q < qubit_count:
            raise InvalidArgumentError(
                f"qubit {q} of {gate!r} out of range for {qubit_count} qubits"
            )


class Circuit:
    """Ordered gate list over a fixed number of qubits.

    The builder methods return ``self`` so preparation code can chain calls::

        Circuit(2).h(0).h(1).mcz([0, 1])
    """

    def __init__(self, qubit_count: int, gates: Iterable[Gate] = ()):
        if not 1 <= qubit_count <= MAX_QUBITS:
            raise InvalidArgumentError(
                f"qubit_count must be in 1..{MAX_QUBITS}, got {qubit_count}"
            )
        self.qubit_count = int(qubit_count)
        self._gates: list[Gate] = []
        self.extend(gates)

    @property
    def gates(self) -> tuple[Gate, ...]:
        return tuple(self._gates)

    def append(self, gate: Gate) -> "Circuit":
        _check_gate(gate, self.qubit_count)
        self._gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for gate in gates:
            self.append(gate)
        return self

    def x(self, q: int) -> "Circuit":
        return self.append(X(q))

    def h(self, q: int) -> "Circuit":
        return self.append(H(q))

    def z(self, q: int) -> "Circuit":
        return self.append(Z(q))

    def cx(self, c: int, t: int) -> "Circuit":
        return self.append(CX(c, t))

    def ccx(self, a: int, b: int, t: int) -> "Circuit":
        return self.append(CCX(a, b, t))

    def mcx(self, controls: Sequence[int], t: int) -> "Circuit":
        return self.append(MCX(tuple(controls), t))

    def mcz(self, qubits: Sequence[int]) -> "Circuit":
        return self.append(MCZ(tuple(qubits)))

    def __len__(self) -> int:
        return len(self._gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self._gates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.qubit_count == other.qubit_count and self._gates == other._gates

    def __repr__(self) -> str:
        return f"Circuit(qubit_count={self.qubit_count}, gates={len(self._gates)})"


@dataclass(frozen=True, eq=False)
class StateVector:
    qubit_count: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.qubit_count <= MAX_QUBITS:
            raise InvalidArgumentError(
                f"qubit_count must be in 1..{MAX_QUBITS}, got {self.qubit_count}"
            )
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != 1 << self.qubit_count:
            raise InvalidArgumentError(
                f"expected {1 << self.qubit_count} amplitudes, got {amps.size}"
            )
        if not np.all(np.isfinite(amps)):
            raise InvalidArgumentError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidArgumentError(f"state is not normalised (norm^2={norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def __len__(self) -> int:
        return self.amplitudes.size


def bitstring(index: int, qubit_count: int) -> str:
    return format(index, f"0{qubit_count}b")


def new_basis_state(qubit_count: int, basis_index: int) -> StateVector:
    if not 1 <= qubit_count <= MAX_QUBITS:
        raise InvalidArgumentError(
            f"qubit_count must be in 1..{MAX_QUBITS}, got {qubit_count}"
        )
    if not 0 <= basis_index < 1 << qubit_count:
        raise InvalidArgumentError(
            f"basis_index {basis_index} out of range for {qubit_count} qubits"
        )
    amps = np.zeros(1 << qubit_count, dtype=np.complex128)
    amps[basis_index] = 1.0
    return StateVector(qubit_count, amps)


def zero_state(qubit_count: int) -> StateVector:
    return new_basis_state(qubit_count, 0)


def _index(n: int, fixed: dict[int, int]) -> tuple:
    # Axis 0 of the (2,)*n view is the most significant qubit.
    idx = [slice(None)] * n
    for qubit, value in fixed.items():
        idx[n - 1 - qubit] = value
    return tuple(idx)


def _apply_gate(psi: np.ndarray, n: int, gate: Gate) -> None:
    """Apply ``gate`` in place to the tensor view ``psi``."""
    if isinstance(gate, H):
        i0 = _index(n, {gate.target: 0})
        i1 = _index(n, {gate.target: 1})
        a = psi[i0].copy()
        b = psi[i1]
        psi[i0] = (a + b) * _SQRT1_2
        psi[i1] = (a - b) * _SQRT1_2
        return
    if isinstance(gate, MCZ):
        psi[_index(n, dict.fromkeys(gate.qubits, 1))] *= -1
        return
    if isinstance(gate, Z):
        psi[_index(n, {gate.target: 1})] *= -1
        return
    if isinstance(gate, X):
        controls: tuple[int, ...] = ()
    elif isinstance(gate, CX):
        controls = (gate.control,)
    elif isinstance(gate, CCX):
        controls = (gate.control_a, gate.control_b)
    else:
        controls = gate.controls
    fixed = dict.fromkeys(controls, 1)
    i0 = _index(n, {**fixed, gate.target: 0})
    i1 = _index(n, {**fixed, gate.target: 1})
    tmp = psi[i0].copy()
    psi[i0] = psi[i1]
    psi[i1] = tmp


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    """Return ``U|state>`` for the ordered product ``U`` of the circuit's gates."""
    if state.qubit_count != circuit.qubit_count:
        raise InvalidArgumentError(
            f"state has {state.qubit_count} qubits, circuit has {circuit.qubit_count}"
        )
    n = state.qubit_count
    amps = state.amplitudes.copy()
    psi = amps.reshape((2,) * n)
    for gate in circuit:
        _apply_gate(psi, n, gate)
    return StateVector(n, amps)


def probabilities(state: StateVector) -> np.ndarray:
    amps = state.amplitudes
    return amps.real**2 + amps.imag**2


def marginal_probabilities(state: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Probabilities of the sub-register ``qubits``; ``qubits[0]`` is its LSB."""
    n = state.qubit_count
    qubits = list(qubits)
    if len(set(qubits)) != len(qubits) or any(not 0 <= q < n for q in qubits):
        raise InvalidArgumentError(f"invalid qubit selection {qubits}")
    p = probabilities(state).reshape((2,) * n)
    keep = [n - 1 - q for q in reversed(qubits)]
    drop = tuple(ax for ax in range(n) if ax not in keep)
    marg = p.sum(axis=drop) if drop else p
    # Remaining axes are in ascending axis order; reorder so reversed(qubits)
    # is most significant first.
    order = sorted(keep)
    marg = np.transpose(marg, [order.index(ax) for ax in keep])
    return marg.reshape(-1)


def sample(
    state: StateVector,
    shots: int,
    seed: int,
    qubits: Sequence[int] | None = None,
) -> dict[str, int]:
    """Multinomial measurement histogram, keyed by bitstring.

    With ``qubits`` given only that sub-register is measured and keys have
    ``len(qubits)`` characters. Zero-count outcomes are omitted; keys are
    sorted so equal inputs serialise identically.
    """
    if shots < 1:
        raise InvalidArgumentError(f"shots must be >= 1, got {shots}")
    if qubits is None:
        p = probabilities(state)
        width = state.qubit_count
    else:
        p = marginal_probabilities(state, qubits)
        width = len(qubits)
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, p / p.sum())
    return {bitstring(int(i), width): int(counts[i]) for i in np.flatnonzero(counts)}


def inverse_circuit(circuit: Circuit) -> Circuit:
    # Every supported gate is self-inverse.
    return Circuit(circuit.qubit_count, reversed(circuit.gates))


def unitary(circuit: Circuit, max_qubits: int = 12) -> np.ndarray:
    """Materialise the circuit's matrix column by column (small circuits only)."""
    n = circuit.qubit_count
    if n > max_qubits:
        raise InvalidArgumentError(f"refusing to materialise a {n}-qubit unitary")
    dim = 1 << n
    cols = np.eye(dim, dtype=np.complex128)
    for j in range(dim):
        psi = cols[j].reshape((2,) * n)
        for gate in circuit:
            _apply_gate(psi, n, gate)
    return cols.T


def equal_up_to_global_phase(a, b, atol: float = 1e-10) -> bool:
    """True when ``a = e^{i phi} b`` elementwise within ``atol``."""
    a = np.asarray(getattr(a, "amplitudes", a), dtype=np.complex128)
    b = np.asarray(getattr(b, "amplitudes", b), dtype=np.complex128)
    if a.shape != b.shape:
        return False
    flat_b = b.reshape(-1)
    k = int(np.argmax(np.abs(flat_b)))
    if abs(flat_b[k]) <= atol:
        return bool(np.allclose(a, b, atol=atol, rtol=0))
    ratio = a.reshape(-1)[k] / flat_b[k]
    if abs(abs(ratio) - 1.0) > atol:
        return False
    phase = ratio / abs(ratio)
    return bool(np.allclose(a, phase * b, atol=atol, rtol=0))
