"""IRMA-style hierarchical labels and retrieval-quality metrics.

A label is four axes TTTT-DDD-AAA-BBB (13 characters total). The error of
one retrieval weights each mismatched character by 1/10 times the
reciprocal of its 1-based position within its axis, so early (coarse)
digits cost more than late (fine) ones. The suitability score compares
runs by the product of wrong-digit rate, total error, and code length,
each normalized by the worst run; larger is better and the worst run
scores exactly 1.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

AXIS_NAMES = ("T", "D", "A", "B")
AXIS_LENGTHS = (4, 3, 3, 3)
TOTAL_DIGITS = sum(AXIS_LENGTHS)  # 13
WILDCARD = "*"
_ALLOWED = set("0123456789abcdefghijklmnopqrstuvwxyz*")


@dataclass(frozen=True)
class IrmaCode:
    """Parsed four-axis label; render with str() to get TTTT-DDD-AAA-BBB."""

    axes: tuple[str, str, str, str]

    def __post_init__(self) -> None:
        if len(self.axes) != 4:
            raise ValueError("code must have exactly 4 axes")
        for name, length, axis in zip(AXIS_NAMES, AXIS_LENGTHS, self.axes):
            if len(axis) != length:
                raise ValueError(f"axis {name} must have {length} characters")
            for ch in axis:
                if ch not in _ALLOWED:
                    raise ValueError(f"axis {name} contains illegal character {ch!r}")

    def __str__(self) -> str:
        return "-".join(self.axes)

    @property
    def characters(self) -> str:
        """All 13 characters, axis order, without separators."""
        return "".join(self.axes)


def parse_irma(s: str) -> IrmaCode:
    """Parse "TTTT-DDD-AAA-BBB"; alphabetic characters are lowercased."""
    groups = s.strip().lower().split("-")
    if len(groups) != 4:
        raise ValueError(f"code must have 4 groups separated by '-', got {len(groups)}")
    for name, length, group in zip(AXIS_NAMES, AXIS_LENGTHS, groups):
        if len(group) != length:
            raise ValueError(f"axis {name} must have {length} characters")
    return IrmaCode(axes=tuple(groups))  # type: ignore[arg-type]


def _delta(a: str, b: str, wildcard_half: bool) -> float:
    if wildcard_half and (a == WILDCARD or b == WILDCARD):
        return 0.5
    return 0.0 if a == b else 1.0


def code_error(query: IrmaCode, retrieved: IrmaCode, wildcard_half: bool = False) -> float:
    """Digit-position-weighted mismatch between two labels.

    Sum over axes and 1-based positions j of (1/10) * (1/j) * delta, where
    delta is 0 on equality and 1 on mismatch; with ``wildcard_half`` a
    position involving '*' contributes 0.5 instead.
    """
    terms = []
    for q_axis, r_axis in zip(query.axes, retrieved.axes):
        for j, (qc, rc) in enumerate(zip(q_axis, r_axis), start=1):
            d = _delta(qc, rc, wildcard_half)
            if d:
                terms.append(d / (10.0 * j))
    return math.fsum(terms)


def total_error(
    pairs: Sequence[tuple[IrmaCode, IrmaCode]], wildcard_half: bool = False
) -> float:
    """Sum of code_error over all (query, retrieved) pairs."""
    return math.fsum(code_error(q, r, wildcard_half) for q, r in pairs)


def wrong_digit_rate(pairs: Sequence[tuple[IrmaCode, IrmaCode]]) -> float:
    """Mismatched characters as a percentage of all 13-digit positions."""
    if not pairs:
        raise ValueError("wrong_digit_rate is undefined for an empty pair list")
    wrong = sum(
        1
        for q, r in pairs
        for qc, rc in zip(q.characters, r.characters)
        if qc != rc
    )
    return 100.0 * wrong / (TOTAL_DIGITS * len(pairs))


@dataclass(frozen=True)
class RunResult:
    """Aggregate quality of one retrieval run."""

    method_name: str
    n_wrong_rate: float  # percentage of wrong digits
    e_total: float
    code_length: int


def suitability(runs: Sequence[RunResult]) -> list[tuple[str, float, int]]:
    """Score runs by (max_wrong * max_error * max_length) / own product.

    Every factor must be strictly positive. Returns (method_name, eta,
    rank) ordered by rank; eta ties rank the lexicographically smaller
    name first.
    """
    if not runs:
        raise ValueError("suitability needs at least one run")
    for run in runs:
        if run.n_wrong_rate <= 0 or run.e_total <= 0 or run.code_length <= 0:
            raise ValueError(f"degenerate run for η: {run.method_name}")
    max_wrong = max(r.n_wrong_rate for r in runs)
    max_error = max(r.e_total for r in runs)
    max_length = max(r.code_length for r in runs)
    numerator = max_wrong * max_error * max_length
    scored = [
        (r.method_name, numerator / (r.n_wrong_rate * r.e_total * r.code_length))
        for r in runs
    ]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return [(name, eta, rank) for rank, (name, eta) in enumerate(scored, start=1)]


QueryRecord = tuple[str, IrmaCode, "object"]  # (id, code, barcode)


def evaluate_run(
    index,
    queries: Sequence[tuple],
    *,
    exclude_self: bool = False,
    wildcard_half: bool = False,
    method_name: Optional[str] = None,
    workers: Optional[int] = None,
) -> RunResult:
    """Retrieve the nearest record for every query and aggregate the metrics.

    ``queries`` holds (id, IrmaCode, Barcode) triples. With
    ``exclude_self`` a query never retrieves the index record carrying its
    own id (leave-one-out). The reductions use integer tallies and exact
    summation, so per-query parallelism cannot change the result.
    """
    from .retrieval import nearest  # deferred: retrieval imports this module

    if not queries:
        raise ValueError("evaluate_run needs at least one query")

    def retrieve(query: tuple) -> tuple[IrmaCode, IrmaCode]:
        qid, qcode, qbarcode = query
        if qcode is None:
            raise ValueError(f"query {qid!r} has no label code")
        match = nearest(qbarcode, index, exclude_id=qid if exclude_self else None)
        retrieved = index.record_by_id(match.id)
        if retrieved.code is None:
            raise ValueError(f"retrieved record {match.id!r} has no label code")
        return qcode, retrieved.code

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(retrieve, queries))
    else:
        pairs = [retrieve(q) for q in queries]

    if method_name is None:
        config = getattr(index, "encoder_config", None)
        method_name = getattr(config, "method_name", None) or "run"

    return RunResult(
        method_name=method_name,
        n_wrong_rate=wrong_digit_rate(pairs),
        e_total=total_error(pairs, wildcard_half),
        code_length=index.bit_length,
    )
