"""NEQR encoding of grayscale images and decoding of measured bitstrings.

Register layout for a ``2**n x 2**n`` image with ``q`` intensity bits::

    qubits 0 .. q-1          intensity, qubit i holds bit i (LSB first)
    qubits q .. q+n-1        x (column), LSB first
    qubits q+n .. q+2n-1     y (row), LSB first

so basis index ``v + (x << q) + (y << (q + n))`` stores intensity ``v`` at
pixel ``(x, y)``, and the rendered bitstring reads ``y | x | v``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CapacityExceededError,
    InvalidArgumentError,
    InvalidImageError,
    NotAnNeqrStateError,
)
from .image import GrayImage
from .statevector import (
    MAX_QUBITS,
    Circuit,
    H,
    StateVector,
    X,
    apply_circuit,
    controlled_x,
    zero_state,
)

__all__ = [
    "INTENSITY_BITS",
    "NeqrLayout",
    "PreparedImage",
    "encode_neqr",
    "prepare_state",
    "decode_outcome",
    "reconstruct_image",
    "neqr_basis_index",
]

INTENSITY_BITS = 8
ZERO_TOLERANCE = 1e-6


@dataclass(frozen=True)
class NeqrLayout:
    """Qubit map for a NEQR register.

    ``q`` is 8 for grayscale. Smaller ``q`` is accepted only to keep
    brute-force tests tractable; it is not a grayscale encoding.
    """

    n: int
    q: int = INTENSITY_BITS

    def __post_init__(self):
        if self.n < 1 or self.q < 1:
            raise InvalidArgumentError(f"need n >= 1 and q >= 1, got n={self.n}, q={self.q}")
        if self.total_qubits > MAX_QUBITS:
            raise CapacityExceededError(
                f"NEQR register needs {self.total_qubits} qubits, cap is {MAX_QUBITS}"
            )

    @classmethod
    def for_image(cls, image: GrayImage, q: int = INTENSITY_BITS) -> "NeqrLayout":
        return cls(image.n, q)

    @property
    def side(self) -> int:
        return 1 << self.n

    @property
    def total_qubits(self) -> int:
        return self.q + 2 * self.n

    @property
    def intensity_qubits(self) -> list[int]:
        return list(range(self.q))

    @property
    def x_qubits(self) -> list[int]:
        return list(range(self.q, self.q + self.n))

    @property
    def y_qubits(self) -> list[int]:
        return list(range(self.q + self.n, self.q + 2 * self.n))

    @property
    def position_qubits(self) -> list[int]:
        return list(range(self.q, self.total_qubits))


@dataclass(frozen=True)
class PreparedImage:
    layout: NeqrLayout
    circuit: Circuit
    source: GrayImage


def neqr_basis_index(layout: NeqrLayout, x: int, y: int, intensity: int) -> int:
    return intensity | (x << layout.q) | (y << (layout.q + layout.n))


def encode_neqr(image: GrayImage, q: int = INTENSITY_BITS) -> PreparedImage:
    """Build the NEQR preparation circuit for ``image``.

    Hadamards put the position register in uniform superposition. Then, pixel
    by pixel, the position qubits that must read 0 are flipped so the pixel's
    address becomes all-ones, one multi-controlled NOT writes each set
    intensity bit, and the flips are undone. Zero pixels emit nothing.
    """
    layout = NeqrLayout.for_image(image, q)
    if max(image.pixels) >= 1 << q:
        raise InvalidImageError(f"intensity {max(image.pixels)} does not fit in {q} bits")
    pos = layout.position_qubits
    circuit = Circuit(layout.total_qubits, (H(p) for p in pos))
    for index, value in enumerate(image.pixels):
        if value == 0:
            continue
        address = index  # row-major index == (y << n) | x
        flips = [X(p) for i, p in enumerate(pos) if not (address >> i) & 1]
        circuit.extend(flips)
        for bit in range(q):
            if (value >> bit) & 1:
                circuit.append(controlled_x(pos, bit))
        circuit.extend(flips)
    return PreparedImage(layout, circuit, image)


def prepare_state(prepared: PreparedImage) -> StateVector:
    return apply_circuit(zero_state(prepared.layout.total_qubits), prepared.circuit)


def decode_outcome(bits: str, layout: NeqrLayout) -> tuple[int, int, int]:
    """Split a most-significant-first bitstring into ``(x, y, intensity)``."""
    if len(bits) != layout.total_qubits or set(bits) - {"0", "1"}:
        raise InvalidArgumentError(
            f"expected a {layout.total_qubits}-bit string, got {bits!r}"
        )
    value = int(bits, 2)
    intensity = value & ((1 << layout.q) - 1)
    x = (value >> layout.q) & ((1 << layout.n) - 1)
    y = value >> (layout.q + layout.n)
    return x, y, intensity


def reconstruct_image(state: StateVector, layout: NeqrLayout) -> GrayImage:
    """Read back the unique intensity stored at every position."""
    if state.qubit_count != layout.total_qubits:
        raise InvalidArgumentError(
            f"state has {state.qubit_count} qubits, layout needs {layout.total_qubits}"
        )
    side = layout.side
    branches = np.abs(state.amplitudes).reshape(side, side, 1 << layout.q)
    pixels = []
    for y in range(side):
        for x in range(side):
            nonzero = np.flatnonzero(branches[y, x] > ZERO_TOLERANCE)
            if nonzero.size != 1:
                raise NotAnNeqrStateError(
                    f"position ({x}, {y}) has {nonzero.size} intensity branches"
                )
            pixels.append(int(nonzero[0]))
    if max(pixels) > 255:
        raise NotAnNeqrStateError("decoded intensity exceeds 8 bits")
    return GrayImage(side, tuple(pixels))
