"""Query-complexity comparison between Grover search and a classical scan."""
from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import InvalidArgumentError
from .grover import iteration_count

__all__ = ["ComplexityReport", "complexity_report"]

LITERAL_NOTE = (
    "paper_literal_* echo the published big-O expressions with m = n; the "
    "source uses m and n inconsistently, so these are not reconciled with the "
    "computed counts"
)


@dataclass(frozen=True)
class ComplexityReport:
    n: int
    q: int
    marked: int
    search_space: int
    grover_queries: int
    classical_comparisons: int
    paper_literal_grover: int
    paper_literal_classical: int
    literal_formulas_ambiguous: bool = True
    note: str = LITERAL_NOTE

    def to_dict(self) -> dict:
        return asdict(self)


def complexity_report(n: int, q: int, marked: int) -> ComplexityReport:
    """Counts for a ``2**n x 2**n`` image with ``q`` intensity bits.

    ``grover_queries`` is the oracle-call count for a search over the full
    ``q + 2n`` qubit register; ``classical_comparisons`` is one comparison per
    pixel.
    """
    if n < 1 or q < 1:
        raise InvalidArgumentError(f"need n >= 1 and q >= 1, got n={n}, q={q}")
    N = 1 << (q + 2 * n)
    if not 1 <= marked <= N:
        raise InvalidArgumentError(f"marked must be in 1..{N}, got {marked}")
    m = n
    return ComplexityReport(
        n=n,
        q=q,
        marked=marked,
        search_space=N,
        grover_queries=iteration_count(N, marked),
        classical_comparisons=1 << (2 * n),
        paper_literal_grover=1 << n,
        paper_literal_classical=1 << (2 * n + 2 * m),
    )
