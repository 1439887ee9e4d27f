"""Empirical Lie closure of {I, A, A^dagger, N} on truncated matrices.

The span is grown breadth first: every ordered pair (older, newer) of basis
elements is commuted once, the result is restricted to the interior window,
scaled by its max-abs entry and orthogonalized against the current span
(modified Gram-Schmidt, two passes). A residual whose norm relative to the
scaled vector is at least ``tol`` enters the basis.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import RecurrenceSystem
from .errors import ConfigInvalid, NotFinite
from .operators import OperatorKind, TruncatedOperator, build_operator, commutator


class ClosureStatus(enum.Enum):
    FINITE = "Finite"
    EXCEEDED_CAP = "ExceededCap"
    DEPTH_EXHAUSTED = "DepthExhausted"


@dataclass(frozen=True)
class ClosureConfig:
    truncation: int = 128
    cap: int = 12
    tol: float = 1e-8
    max_depth: int = 8

    def __post_init__(self):
        if self.cap < 4:
            raise ConfigInvalid(f"cap must be >= 4, got {self.cap}")
        if not 0 < self.tol < 1e-3:
            raise ConfigInvalid(f"tol must lie in (0, 1e-3), got {self.tol}")
        if self.max_depth < 1:
            raise ConfigInvalid(f"max_depth must be >= 1, got {self.max_depth}")
        need = 2 * (self.cap + self.max_depth + 2)
        if self.truncation < need:
            raise ConfigInvalid(f"truncation {self.truncation} too small; need >= {need} "
                                f"for cap={self.cap}, max_depth={self.max_depth}")

    @property
    def masked_tail(self) -> int:
        return 2 * self.max_depth + 2

    @property
    def window(self) -> int:
        return self.truncation - self.masked_tail


@dataclass
class ClosureReport:
    status: ClosureStatus
    dim: int
    basis_labels: list
    max_projection_residual: float
    cap: int
    depth: int
    structure_constants: Optional[np.ndarray] = None
    structure_residual: Optional[float] = None
    basis: list = field(default_factory=list, repr=False)

    @property
    def is_finite(self) -> bool:
        return self.status is ClosureStatus.FINITE

    def to_json(self) -> dict:
        doc = {"status": self.status.value}
        if self.is_finite:
            doc["dim"] = self.dim
        else:
            doc["cap"] = self.cap
        doc["basis"] = list(self.basis_labels)
        if self.structure_constants is not None:
            doc["structure_constants"] = (np.round(self.structure_constants, 12) + 0.0).tolist()
            doc["structure_residual"] = self.structure_residual
        doc["residual"] = self.max_projection_residual
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False)


def seed_operators(sys: RecurrenceSystem, M: int) -> list[TruncatedOperator]:
    kinds = (OperatorKind.Identity, OperatorKind.A, OperatorKind.Adag, OperatorKind.Nop)
    return [build_operator(k, sys, M) for k in kinds]


class _Span:
    """Orthonormal basis of masked, vectorized operators."""

    def __init__(self, window: int, tol: float):
        self.window = window
        self.tol = tol
        self.q: list[np.ndarray] = []

    def vector(self, op: TruncatedOperator) -> np.ndarray:
        return op.entries[: self.window, : self.window].ravel()

    def residual(self, op: TruncatedOperator):
        v = self.vector(op)
        scale = float(np.max(np.abs(v))) if v.size else 0.0
        if scale == 0.0:
            return 0.0, None
        v = v / scale
        norm = float(np.linalg.norm(v))
        r = v.copy()
        for _ in range(2):
            for q in self.q:
                r -= np.dot(q, r) * q
        rel = float(np.linalg.norm(r)) / norm
        return rel, r

    def add(self, r: np.ndarray) -> None:
        self.q.append(r / np.linalg.norm(r))


def lie_closure(sys: RecurrenceSystem, config: ClosureConfig | None = None) -> ClosureReport:
    """Grow the commutator span of {I, A, A^dagger, N} until it closes.

    Each sweep commutes every pair (i, j), i < j, not tried in an earlier
    sweep, in lexicographic order. The result is Finite when a sweep admits
    nothing, ExceededCap once the span exceeds ``config.cap``, and
    DepthExhausted after ``config.max_depth`` sweeps that still grow.
    """
    config = config or ClosureConfig()
    M = config.truncation
    sys.require_positive(M - 1)
    span = _Span(config.window, config.tol)
    basis: list[TruncatedOperator] = []
    labels: list[str] = []
    worst_in_span = 0.0

    def offer(op: TruncatedOperator, label: str) -> bool:
        nonlocal worst_in_span
        rel, r = span.residual(op)
        if r is not None and rel >= config.tol:
            span.add(r)
            basis.append(op)
            labels.append(label)
            return True
        worst_in_span = max(worst_in_span, rel)
        return False

    for op, label in zip(seed_operators(sys, M), ("I", "A", "A†", "N")):
        offer(op, label)

    tried = 0  # pairs (i, j) with j < tried have all been commuted
    depth = 0
    while True:
        if len(basis) > config.cap:
            return ClosureReport(ClosureStatus.EXCEEDED_CAP, len(basis), labels,
                                 worst_in_span, config.cap, depth, basis=basis)
        if tried == len(basis):
            report = ClosureReport(ClosureStatus.FINITE, len(basis), labels,
                                   worst_in_span, config.cap, depth, basis=basis)
            report.structure_constants, report.structure_residual = _fit_structure(report, config)
            return report
        if depth == config.max_depth:
            return ClosureReport(ClosureStatus.DEPTH_EXHAUSTED, len(basis), labels,
                                 worst_in_span, config.cap, depth, basis=basis)
        depth += 1
        end = len(basis)
        for j in range(tried, end):
            for i in range(j):
                offer(commutator(basis[i], basis[j]), f"[{labels[i]},{labels[j]}]")
                if len(basis) > config.cap:
                    break
            if len(basis) > config.cap:
                break
        tried = end


def _fit_structure(report: ClosureReport, config: ClosureConfig):
    w = config.window
    B = np.stack([op.entries[:w, :w].ravel() for op in report.basis], axis=1)
    d = len(report.basis)
    consts = np.zeros((d, d, d))
    worst = 0.0
    for i in range(d):
        for j in range(i + 1, d):
            target = commutator(report.basis[i], report.basis[j]).entries[:w, :w].ravel()
            coef, *_ = np.linalg.lstsq(B, target, rcond=None)
            consts[i, j] = coef
            consts[j, i] = -coef
            scale = max(float(np.max(np.abs(target))), 1.0)
            worst = max(worst, float(np.max(np.abs(B @ coef - target))) / scale)
    return consts, worst


def structure_constants(report: ClosureReport, sys: RecurrenceSystem | None = None,
                        config: ClosureConfig | None = None) -> np.ndarray:
    """c[i, j, k] with [X_i, X_j] = sum_k c[i, j, k] X_k (least squares on the window)."""
    if not report.is_finite:
        raise NotFinite(f"closure status is {report.status.value}; no structure constants")
    if report.structure_constants is None:
        report.structure_constants, report.structure_residual = _fit_structure(
            report, config or ClosureConfig())
    return report.structure_constants


def bracket_decomposition(report: ClosureReport, i: str, j: str, tol: float = 1e-9) -> dict:
    """Nonzero coefficients of [X_i, X_j] in the basis, keyed by label."""
    c = structure_constants(report)
    ii, jj = report.basis_labels.index(i), report.basis_labels.index(j)
    return {lab: float(v) for lab, v in zip(report.basis_labels, c[ii, jj]) if abs(v) > tol}
