"""Phase oracles, diffusers, iteration planning and the three search modes.

``paper``
    Uniform start over the whole NEQR-sized register, an oracle that flips
    exactly the (intensity, position) bitstrings of the dark pixels, and the
    uniform diffuser. With three dark pixels in a 2x2 image this is a
    1024-state search with 3 marked items and 14 iterations.
``amplitude``
    Amplitude amplification started from the NEQR state itself, with a
    threshold oracle on the intensity register and a reflection about the
    NEQR state.
``semiclassical``
    One small Grover search per dark pixel over the position register, with
    the mark written through an ancilla in ``|->`` (phase kickback).

The number of marked items is always counted classically.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError, NoMarkedItemsError
from .image import DarkPixel, GrayImage, ThresholdConfig, classical_scan
from .neqr import NeqrLayout, decode_outcome, encode_neqr, neqr_basis_index, prepare_state
from .statevector import (
    MCZ,
    Circuit,
    Gate,
    H,
    StateVector,
    X,
    apply_circuit,
    bitstring,
    controlled_x,
    inverse_circuit,
    marginal_probabilities,
    probabilities,
    sample,
    zero_state,
)

__all__ = [
    "SearchMode",
    "GroverPlan",
    "Outcome",
    "SearchResult",
    "PixelRun",
    "build_threshold_oracle",
    "build_bitstring_oracle",
    "build_diffuser_uniform",
    "build_diffuser_about",
    "iteration_count",
    "success_probability",
    "grover_iterate",
    "run_search",
    "semiclassical_runs",
    "run_semiclassical_search",
]

# Absorbs float error in pi / (4 asin(sqrt(M/N))) when the exact value is an
# integer (M/N = 1/2 evaluates to 0.9999999999999999).
_FLOOR_SLACK = 1e-9


class SearchMode(str, enum.Enum):
    PAPER = "paper"
    AMPLITUDE = "amplitude"
    SEMICLASSICAL = "semiclassical"


def _flip_pattern(qubits: Sequence[int], value: int) -> list[Gate]:
    """X gates mapping the basis pattern ``value`` on ``qubits`` to all-ones."""
    return [X(qb) for i, qb in enumerate(qubits) if not (value >> i) & 1]


def _phase_flip(qubits: Sequence[int], value: int) -> list[Gate]:
    flips = _flip_pattern(qubits, value)
    return [*flips, MCZ(tuple(qubits)), *flips]


def build_threshold_oracle(layout: NeqrLayout, config: ThresholdConfig) -> Circuit:
    """Negate every basis state whose intensity register reads below the threshold.

    One X-conjugated MCZ over the intensity qubits per marked value; position
    qubits are untouched.
    """
    circuit = Circuit(layout.total_qubits)
    qubits = layout.intensity_qubits
    for value in range(min(config.threshold, 1 << layout.q)):
        circuit.extend(_phase_flip(qubits, value))
    return circuit


def build_bitstring_oracle(total_qubits: int, marked: Iterable[str]) -> Circuit:
    marked = sorted(set(marked))
    if not marked:
        raise NoMarkedItemsError("oracle needs at least one marked bitstring")
    for bits in marked:
        if len(bits) != total_qubits or set(bits) - {"0", "1"}:
            raise InvalidArgumentError(f"expected a {total_qubits}-bit string, got {bits!r}")
    circuit = Circuit(total_qubits)
    qubits = list(range(total_qubits))
    for bits in marked:
        circuit.extend(_phase_flip(qubits, int(bits, 2)))
    return circuit


def _reflection_about_zero(qubits: Sequence[int]) -> list[Gate]:
    # -(2|0><0| - I); the sign is a global phase.
    return _phase_flip(qubits, 0)


def build_diffuser_uniform(total_qubits: int, qubits: Sequence[int] | None = None) -> Circuit:
    """``2|u><u| - I`` (up to global phase) about the uniform state.

    ``qubits`` restricts the diffuser to a sub-register of a larger circuit.
    """
    qubits = list(range(total_qubits)) if qubits is None else list(qubits)
    hs = [H(qb) for qb in qubits]
    return Circuit(total_qubits, [*hs, *_reflection_about_zero(qubits), *hs])


def build_diffuser_about(preparation: Circuit) -> Circuit:
    """Reflection about ``A|0...0>`` for the preparation circuit ``A``.

    Gate order is ``A^-1``, then the reflection about ``|0...0>``, then ``A``.
    """
    qubits = list(range(preparation.qubit_count))
    return Circuit(
        preparation.qubit_count,
        [*inverse_circuit(preparation).gates, *_reflection_about_zero(qubits), *preparation.gates],
    )


def _check_counts(N: int, M: int) -> None:
    if M == 0:
        raise NoMarkedItemsError("no marked items")
    if N < 1 or M < 0 or M > N:
        raise InvalidArgumentError(f"need 1 <= M <= N, got N={N}, M={M}")


def iteration_count(N: int, M: int) -> int:
    """``floor(pi / (4 theta))`` with ``sin(theta) = sqrt(M / N)``."""
    _check_counts(N, M)
    theta = math.asin(math.sqrt(M / N))
    return math.floor(math.pi / (4 * theta) + _FLOOR_SLACK)


def success_probability(N: int, M: int, k: int) -> float:
    _check_counts(N, M)
    if k < 0:
        raise InvalidArgumentError(f"iterations must be >= 0, got {k}")
    theta = math.asin(math.sqrt(M / N))
    return math.sin((2 * k + 1) * theta) ** 2


def grover_iterate(
    state: StateVector, oracle: Circuit, diffuser: Circuit, k: int
) -> tuple[StateVector, int]:
    """Apply ``k`` rounds of oracle then diffuser; returns the state and oracle calls."""
    calls = 0
    for _ in range(k):
        state = apply_circuit(state, oracle)
        calls += 1
        state = apply_circuit(state, diffuser)
    return state, calls


@dataclass(frozen=True)
class GroverPlan:
    mode: SearchMode
    search_space_size: int
    marked_count: int
    iterations: int

    @classmethod
    def make(cls, mode: SearchMode, N: int, M: int) -> "GroverPlan":
        return cls(SearchMode(mode), N, M, iteration_count(N, M))


@dataclass(frozen=True)
class Outcome:
    bitstring: str
    x: int
    y: int
    intensity: int
    exact_probability: float
    count: int
    dark: bool
    in_image: bool

    @property
    def pixel(self) -> DarkPixel:
        return DarkPixel(self.x, self.y, self.intensity)


@dataclass(frozen=True)
class SearchResult:
    """Ranked, decoded outcomes of one search.

    ``total_dark_probability`` is the chance of measuring one of the image's
    dark pixels, i.e. an outcome that decodes to a dark intensity actually
    stored at that position. ``predicate_dark_probability`` counts every
    basis state whose intensity register is below the threshold, including
    (intensity, position) pairs absent from the image; in paper mode those
    carry a small residual mass after the final iteration.
    """

    plan: GroverPlan
    threshold: int
    outcomes: tuple[Outcome, ...]
    total_dark_probability: float
    predicate_dark_probability: float
    oracle_invocations: int
    shots: int
    seed: int
    final_state: StateVector = field(repr=False, compare=False)

    def top(self, count: int | None = None) -> list[Outcome]:
        """Highest-probability outcomes; defaults to the marked count."""
        return list(self.outcomes[: self.plan.marked_count if count is None else count])


def _predicate_mass(state: StateVector, layout: NeqrLayout, config: ThresholdConfig) -> float:
    p = probabilities(state).reshape(-1, 1 << layout.q)
    return float(p[:, : min(config.threshold, 1 << layout.q)].sum())


def _package(
    state: StateVector,
    image: GrayImage,
    layout: NeqrLayout,
    config: ThresholdConfig,
    plan: GroverPlan,
    calls: int,
    shots: int,
    seed: int,
    cutoff: float,
) -> SearchResult:
    p = probabilities(state)
    hist = sample(state, shots, seed)
    n = state.qubit_count
    keep = set(np.flatnonzero(p > cutoff).tolist())
    keep.update(int(b, 2) for b in hist)
    # Round before ranking so numerically equal probabilities tie-break by index.
    ranked = sorted(keep, key=lambda i: (-round(float(p[i]), 12), i))
    outcomes = []
    for i in ranked:
        bits = bitstring(i, n)
        x, y, v = decode_outcome(bits, layout)
        outcomes.append(
            Outcome(
                bits, x, y, v, float(p[i]), hist.get(bits, 0),
                dark=config.is_dark(v),
                in_image=image.pixel(x, y) == v,
            )
        )
    dark_indices = [
        neqr_basis_index(layout, d.x, d.y, d.intensity) for d in classical_scan(image, config)
    ]
    return SearchResult(
        plan=plan,
        threshold=config.threshold,
        outcomes=tuple(outcomes),
        total_dark_probability=float(p[dark_indices].sum()),
        predicate_dark_probability=_predicate_mass(state, layout, config),
        oracle_invocations=calls,
        shots=shots,
        seed=seed,
        final_state=state,
    )


def run_search(
    image: GrayImage,
    config: ThresholdConfig,
    mode: SearchMode | str,
    shots: int,
    seed: int,
    cutoff: float = 1e-12,
) -> SearchResult:
    """Locate every dark pixel of ``image`` with a single Grover run.

    Outcomes whose exact probability exceeds ``cutoff`` (or that were sampled)
    are listed, ranked by exact probability.
    """
    mode = SearchMode(mode)
    if shots < 1:
        raise InvalidArgumentError(f"shots must be >= 1, got {shots}")
    dark = classical_scan(image, config)
    if not dark:
        raise NoMarkedItemsError(f"no pixel is below threshold {config.threshold}")
    prepared = encode_neqr(image)
    layout = prepared.layout
    total = layout.total_qubits

    if mode is SearchMode.PAPER:
        plan = GroverPlan.make(mode, 1 << total, len(dark))
        marked = [bitstring(neqr_basis_index(layout, d.x, d.y, d.intensity), total) for d in dark]
        oracle = build_bitstring_oracle(total, marked)
        diffuser = build_diffuser_uniform(total)
        start = apply_circuit(zero_state(total), Circuit(total, (H(i) for i in range(total))))
    elif mode is SearchMode.AMPLITUDE:
        plan = GroverPlan.make(mode, layout.side**2, len(dark))
        oracle = build_threshold_oracle(layout, config)
        diffuser = build_diffuser_about(prepared.circuit)
        start = prepare_state(prepared)
    else:
        raise InvalidArgumentError("semiclassical mode runs through run_semiclassical_search")

    final, calls = grover_iterate(start, oracle, diffuser, plan.iterations)
    return _package(final, image, layout, config, plan, calls, shots, seed, cutoff)


@dataclass(frozen=True)
class PixelRun:
    """One per-pixel Grover search over the position register."""

    marked: tuple[int, int]
    located: tuple[int, int]
    plan: GroverPlan
    marked_probability: float
    histogram: dict[str, int]


def _pixel_search(n: int, x: int, y: int, shots: int, seed: int) -> PixelRun:
    side = 1 << n
    pos = list(range(2 * n))
    ancilla = 2 * n
    total = 2 * n + 1
    address = (y << n) | x

    prep = Circuit(total, [X(ancilla), H(ancilla), *(H(p) for p in pos)])
    flips = _flip_pattern(pos, address)
    oracle = Circuit(total, [*flips, controlled_x(pos, ancilla), *flips])
    diffuser = build_diffuser_uniform(total, pos)

    plan = GroverPlan.make(SearchMode.SEMICLASSICAL, side * side, 1)
    state = apply_circuit(zero_state(total), prep)
    state, _ = grover_iterate(state, oracle, diffuser, plan.iterations)

    marg = marginal_probabilities(state, pos)
    hist = sample(state, shots, seed, qubits=pos)
    best = min(hist, key=lambda b: (-hist[b], b))
    found = int(best, 2)
    return PixelRun(
        marked=(x, y),
        located=(found & (side - 1), found >> n),
        plan=plan,
        marked_probability=float(marg[address]),
        histogram=hist,
    )


def semiclassical_runs(
    image: GrayImage, config: ThresholdConfig, seed: int, shots: int = 64
) -> list[PixelRun]:
    """Run one position-register Grover search per classically found dark pixel.

    Each run samples ``shots`` measurements of the position register and
    reports the most frequent address. For 2x2 images the search is exact.
    """
    if shots < 1:
        raise InvalidArgumentError(f"shots must be >= 1, got {shots}")
    dark = classical_scan(image, config)
    children = np.random.SeedSequence(seed).spawn(len(dark))
    return [
        _pixel_search(image.n, d.x, d.y, shots, int(child.generate_state(1)[0]))
        for d, child in zip(dark, children)
    ]


def run_semiclassical_search(
    image: GrayImage, config: ThresholdConfig, seed: int, shots: int = 64
) -> list[DarkPixel]:
    return [
        DarkPixel(run.located[0], run.located[1], image.pixel(*run.located))
        for run in semiclassical_runs(image, config, seed, shots)
    ]
