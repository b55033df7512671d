"""Brute-force checks: Frobenius Gram matrices, span ranks and residual reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .tensor import DenseOperator

DEFAULT_CUTOFF = 1e-9


@dataclass(frozen=True)
class VerificationReport:
    claim_id: str
    p: int | None
    d: int | None
    max_abs_deviation: float
    tolerance: float
    n_cases: int = 1
    labels: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.max_abs_deviation <= self.tolerance)

    def to_json(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "p": self.p,
            "d": self.d,
            "max_abs_deviation": float(self.max_abs_deviation),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "n_cases": self.n_cases,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(", ", ": "))


def _as_array(x) -> np.ndarray:
    return x.entries if isinstance(x, DenseOperator) else np.asarray(x)


def dense_gram(family) -> np.ndarray:
    """Frobenius inner products ``Tr(X_a^dagger X_b)``; real part for real-symmetric use."""
    family = list(family)
    if not family:
        raise ValueError("empty family")
    mats = [_as_array(x) for x in family]
    shape = mats[0].shape
    if any(m.shape != shape for m in mats):
        raise ValueError("shape mismatch in family")
    flat = np.stack([m.reshape(-1) for m in mats])
    gram = flat.conj() @ flat.T
    if np.all(np.isreal(flat)):
        return gram.real
    return gram


def span_rank(family, cutoff: float = DEFAULT_CUTOFF) -> int:
    """Number of Gram eigenvalues above ``cutoff`` times the largest one."""
    gram = dense_gram(family)
    evals = np.linalg.eigvalsh(gram)
    top = np.max(np.abs(evals))
    if top == 0:
        return 0
    return int(np.sum(evals > cutoff * top))


def normalized_deviation(lhs, rhs) -> float:
    """Max entrywise deviation, rescaled when the operators have entries above one."""
    a, b = _as_array(lhs), _as_array(rhs)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    dev = float(np.max(np.abs(a - b), initial=0.0))
    scale = max(float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)))
    return dev / scale if scale > 1.0 else dev


def assert_equal(lhs, rhs, claim_id: str, tol: float, p=None, d=None) -> VerificationReport:
    return VerificationReport(claim_id, p, d, normalized_deviation(lhs, rhs), tol)


def merge(claim_id: str, deviations, tol: float, p=None, d=None) -> VerificationReport:
    """One report summarizing many cases by their worst deviation."""
    deviations = list(deviations)
    worst = max(deviations, default=0.0)
    return VerificationReport(claim_id, p, d, float(worst), tol, len(deviations))
