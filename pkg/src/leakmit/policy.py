"""Mitigation policies: row-stochastic elevation maps over observation classes.

A policy is a k x k matrix whose row i gives the probability of reporting a
secret from class i as class j.  Moves must respect the class order (j >= i,
padding only adds delay), so entries below the diagonal are structurally
zero.  Deterministic policies have point-mass rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import ObservationClassSet
from .entropy import EntropyMeasure, entropy
from .errors import InfeasiblePolicyError

__all__ = [
    "MitigationPolicy",
    "identity_policy",
    "full_merge_policy",
    "blocks_policy",
    "validate",
    "ensure_valid",
    "expected_sizes",
    "expected_overhead",
    "EntropyReport",
    "build_report",
    "policy_to_json",
    "sanitize_matrix",
]

ROW_TOL = 1e-9


@dataclass(frozen=True)
class MitigationPolicy:
    """Row-stochastic class-elevation matrix."""

    matrix: np.ndarray
    deterministic: bool

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("policy matrix must be square")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def k(self) -> int:
        return self.matrix.shape[0]


def identity_policy(k: int) -> MitigationPolicy:
    return MitigationPolicy(np.eye(int(k)), deterministic=True)


def full_merge_policy(k: int) -> MitigationPolicy:
    """Send every class to the top class."""
    mat = np.zeros((int(k), int(k)))
    mat[:, -1] = 1.0
    return MitigationPolicy(mat, deterministic=True)


def blocks_policy(blocks, k: int) -> MitigationPolicy:
    """Deterministic policy elevating each contiguous block to its top class.

    ``blocks`` is a sequence of (lo, hi) index pairs, inclusive, covering
    0..k-1 in order.
    """
    mat = np.zeros((k, k))
    covered = 0
    for lo, hi in blocks:
        if lo != covered or hi < lo or hi >= k:
            raise ValueError("blocks must partition 0..k-1 in order")
        mat[lo : hi + 1, hi] = 1.0
        covered = hi + 1
    if covered != k:
        raise ValueError("blocks must cover all classes")
    return MitigationPolicy(mat, deterministic=True)


def validate(policy: MitigationPolicy, classes: ObservationClassSet) -> list[str]:
    """Return all violations; an empty list means the policy is well formed."""
    if policy.k != classes.k:
        raise ValueError(
            f"policy is {policy.k} x {policy.k} but there are {classes.k} classes"
        )
    mat = policy.matrix
    violations: list[str] = []
    for i in range(policy.k):
        row_sum = float(mat[i].sum())
        if abs(row_sum - 1.0) > ROW_TOL:
            violations.append(f"row {i} sums to {row_sum!r}")
        for j in range(policy.k):
            v = float(mat[i, j])
            if v < -ROW_TOL or v > 1.0 + ROW_TOL:
                violations.append(f"entry ({i},{j}) = {v!r} outside [0, 1]")
            if j < i and v > ROW_TOL:
                violations.append(f"order violated at ({i},{j})")
        if policy.deterministic:
            if not np.any(np.abs(mat[i] - 1.0) <= ROW_TOL):
                violations.append(f"row {i} is not a point mass")
    return violations


def ensure_valid(policy: MitigationPolicy, classes: ObservationClassSet) -> None:
    violations = validate(policy, classes)
    if violations:
        raise InfeasiblePolicyError("; ".join(violations))


def expected_sizes(policy: MitigationPolicy, sizes) -> np.ndarray:
    """Expected post-mitigation class sizes: C_j = sum_{i<=j} B_i * mu[i, j]."""
    b = np.asarray(sizes, dtype=float).ravel()
    if b.size != policy.k:
        raise ValueError("sizes length must match policy dimension")
    return np.clip(b @ policy.matrix, 0.0, None)


def expected_overhead(policy: MitigationPolicy, classes: ObservationClassSet) -> float:
    """Size-weighted mean move penalty: (1/B) * sum B_i * mu[i, j] * penalty[i, j]."""
    mat = policy.matrix
    pen = classes.penalty
    support = mat > ROW_TOL
    if np.any(support & np.isinf(pen)):
        raise InfeasiblePolicyError("policy puts mass on a forbidden move")
    weighted = mat * np.where(support, pen, 0.0)
    b = classes.sizes
    return float((b[:, None] * weighted).sum() / b.sum())


@dataclass(frozen=True)
class EntropyReport:
    """Before/after leakage summary for one synthesized or applied policy."""

    measure: EntropyMeasure
    entropy_before: float
    entropy_after: float
    expected_sizes: tuple[float, ...]
    expected_overhead: float
    delta_bound: float


def build_report(
    policy: MitigationPolicy,
    classes: ObservationClassSet,
    measure: EntropyMeasure | str,
    delta: float,
) -> EntropyReport:
    measure = EntropyMeasure(measure)
    ensure_valid(policy, classes)
    sizes = classes.sizes
    post = expected_sizes(policy, sizes)
    if abs(float(post.sum()) - float(sizes.sum())) > 1e-6:
        raise InfeasiblePolicyError("expected sizes do not conserve total size")
    overhead = expected_overhead(policy, classes)
    if overhead > delta + 1e-9:
        raise InfeasiblePolicyError(
            f"expected overhead {overhead!r} exceeds budget {delta!r}"
        )
    return EntropyReport(
        measure=measure,
        entropy_before=entropy(sizes, measure),
        entropy_after=entropy(post, measure),
        expected_sizes=tuple(float(c) for c in post),
        expected_overhead=overhead,
        delta_bound=float(delta),
    )


def policy_to_json(
    policy: MitigationPolicy, report: EntropyReport, diagnostics: dict | None = None
) -> dict:
    """Schema: {k, deterministic, matrix, measure, delta, expected_sizes,
    entropy_before, entropy_after, overhead} plus optional diagnostics."""
    data = {
        "k": policy.k,
        "deterministic": policy.deterministic,
        "matrix": [[float(v) for v in row] for row in policy.matrix],
        "measure": report.measure.value,
        "delta": None if np.isinf(report.delta_bound) else float(report.delta_bound),
        "expected_sizes": [float(c) for c in report.expected_sizes],
        "entropy_before": report.entropy_before,
        "entropy_after": report.entropy_after,
        "overhead": report.expected_overhead,
    }
    if diagnostics is not None:
        data["diagnostics"] = diagnostics
    return data


def sanitize_matrix(matrix: np.ndarray, zero_tol: float = 1e-9) -> np.ndarray:
    """Clean solver output: zero the forbidden triangle and dust entries, then
    absorb the row-sum deficit into each row's largest entry so the other
    probabilities (and the budget they price) stay untouched."""
    mat = np.array(matrix, dtype=float)
    k = mat.shape[0]
    mat[np.tril_indices(k, -1)] = 0.0
    mat[np.abs(mat) < zero_tol] = 0.0
    mat = np.clip(mat, 0.0, 1.0)
    for i in range(k):
        row_sum = mat[i].sum()
        if row_sum <= 0:
            raise InfeasiblePolicyError("a policy row lost all probability mass")
        mat[i, int(np.argmax(mat[i]))] += 1.0 - row_sum
    return np.clip(mat, 0.0, 1.0)
