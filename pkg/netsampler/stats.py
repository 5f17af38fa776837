"""
Statistics for comparing sampled networks and sampling techniques.

Two layers:
  - sample vs. original: Kolmogorov–Smirnov D between empirical distributions
  - technique vs. technique: externally studentized residuals per network
    column, with a two-tailed Student t-test on N−2 degrees of freedom

Residual of technique i on network j (peer-mean mode):
    r_ij = (x_ij − μ_ij) / (σ_ij · √(1 − 1/N))
    μ_ij = Σ_{k≠i} x_kj / (N − 1)
    σ_ij² = Σ_{k≠i} (x_kj − μ_ij)² / (N − 2)
True-value mode replaces μ_ij by the original network's own value in both
the numerator and the variance sum.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy import special

from .errors import NetSamplerError
from .graph import PropertyDistribution

# Relative spread below which a leave-one-out standard deviation counts as zero.
_DEGENERATE_RTOL = 1e-12


class ResidualMode(str, Enum):
    PEER_MEAN = "peer-mean"
    TRUE_VALUE = "true-value"


@dataclass(frozen=True, eq=False)
class PropertyMatrix:
    """x[i][j]: aggregated property value of network j under technique i."""
    values: np.ndarray
    techniques: tuple[str, ...]
    networks: tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise NetSamplerError("property matrix must be two-dimensional")
        if values.shape != (len(self.techniques), len(self.networks)):
            raise NetSamplerError(
                f"matrix shape {values.shape} does not match "
                f"{len(self.techniques)} techniques × {len(self.networks)} networks"
            )
        if values.shape[0] < 3:
            raise NetSamplerError(
                f"studentized residuals need at least 3 techniques, got {values.shape[0]}"
            )
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "techniques", tuple(str(t) for t in self.techniques))
        object.__setattr__(self, "networks", tuple(self.networks))

    @property
    def N(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class ResidualMatrix:
    residuals: np.ndarray
    significant: np.ndarray
    finite: np.ndarray
    critical_value: float
    mode: ResidualMode
    techniques: tuple[str, ...]
    networks: tuple[str, ...]

    def cell(self, technique: str, network: str) -> float:
        return float(self.residuals[self.techniques.index(str(technique)), self.networks.index(network)])

    def is_significant(self, technique: str, network: str) -> bool:
        return bool(self.significant[self.techniques.index(str(technique)), self.networks.index(network)])

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "critical_value": self.critical_value,
            "techniques": list(self.techniques),
            "networks": list(self.networks),
            "residuals": [[_json_float(v) for v in row] for row in self.residuals.tolist()],
            "significant": self.significant.tolist(),
            "finite": self.finite.tolist(),
        }


# ---------------------------------------------------------------------------
# Sample vs. original
# ---------------------------------------------------------------------------

def ks_distance(a: PropertyDistribution, b: PropertyDistribution) -> float:
    """sup_v |F_a(v) − F_b(v)| over the merged support of a and b."""
    if a.kind != b.kind:
        raise NetSamplerError(f"cannot compare a {a.kind.value} distribution with a {b.kind.value} one")
    if not len(a) or not len(b):
        raise NetSamplerError("KS distance needs two non-empty distributions")
    support = np.union1d(a.values, b.values)
    return float(np.max(np.abs(a.cdf(support) - b.cdf(support))))


# ---------------------------------------------------------------------------
# Technique vs. technique
# ---------------------------------------------------------------------------

def t_critical(df: int, p: float = 0.05) -> float:
    """
    Two-tailed critical value of Student's t with df degrees of freedom.

    P(|T| > t) = I_{df/(df+t²)}(df/2, 1/2), inverted through the regularized
    incomplete beta function.
    """
    if df < 1:
        raise ValueError(f"degrees of freedom must be ≥ 1, got {df}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    x = float(special.betaincinv(df / 2.0, 0.5, p))
    return math.sqrt(df * (1.0 - x) / x)


def studentized_residuals(x: PropertyMatrix, p: float = 0.05) -> ResidualMatrix:
    """Residuals against the leave-one-out mean of the peer techniques."""
    return _residual_matrix(x, truth=None, p=p)


def studentized_residuals_true(
    x: PropertyMatrix, truth: Sequence[float], p: float = 0.05
) -> ResidualMatrix:
    """Residuals against the original networks' true values."""
    truth = np.asarray(truth, dtype=np.float64).ravel()
    if truth.shape != (len(x.networks),):
        raise NetSamplerError(f"expected {len(x.networks)} true values, got {truth.size}")
    return _residual_matrix(x, truth=truth, p=p)


def reference_residual(x: PropertyMatrix, truth: Sequence[float]) -> np.ndarray:
    """
    Residual of each original network's own value against all N techniques,
    treating the original as an (N+1)-th held-out observation.
    """
    truth = np.asarray(truth, dtype=np.float64).ravel()
    values = x.values
    n = x.N
    centre = values.mean(axis=0)
    var = ((values - centre) ** 2).sum(axis=0) / (n - 1)
    return _studentize(truth - centre, var, math.sqrt(1.0 - 1.0 / (n + 1)), values)


def summarize_residuals(matrix: ResidualMatrix) -> dict[str, dict]:
    """Per-technique mean and standard deviation of residuals across networks."""
    summary: dict[str, dict] = {}
    for technique, row in zip(matrix.techniques, matrix.residuals):
        summary[technique] = {
            "mean": float(np.mean(row)),
            "std": float(np.std(row, ddof=1)) if row.size > 1 else 0.0,
        }
    return summary


# ---------------------------------------------------------------------------
# Internal helpers
# ---------------------------------------------------------------------------

def _residual_matrix(x: PropertyMatrix, truth: Optional[np.ndarray], p: float) -> ResidualMatrix:
    values = x.values
    n = x.N
    scale = math.sqrt(1.0 - 1.0 / n)
    residuals = np.empty_like(values)
    for i in range(n):
        peers = np.delete(values, i, axis=0)
        centre = peers.mean(axis=0) if truth is None else truth
        var = ((peers - centre) ** 2).sum(axis=0) / (n - 2)
        residuals[i] = _studentize(values[i] - centre, var, scale, values)

    critical = t_critical(n - 2, p)
    return ResidualMatrix(
        residuals=residuals,
        significant=np.abs(residuals) > critical,
        finite=np.isfinite(residuals),
        critical_value=critical,
        mode=ResidualMode.PEER_MEAN if truth is None else ResidualMode.TRUE_VALUE,
        techniques=x.techniques,
        networks=x.networks,
    )


def _studentize(numerator: np.ndarray, var: np.ndarray, scale: float, column_values: np.ndarray) -> np.ndarray:
    """numerator / (√var · scale); zero spread gives 0 on agreement, else ±inf."""
    tol = _DEGENERATE_RTOL * np.maximum(1.0, np.abs(column_values).max(axis=0))
    sd = np.sqrt(var)
    degenerate = sd <= tol
    out = np.empty_like(numerator, dtype=np.float64)
    out[~degenerate] = numerator[~degenerate] / (sd[~degenerate] * scale)
    agree = np.abs(numerator) <= tol
    out[degenerate & agree] = 0.0
    rest = degenerate & ~agree
    out[rest] = np.copysign(np.inf, numerator[rest])
    return out


def _json_float(value: float):
    """JSON has no infinities; encode them as strings."""
    if math.isfinite(value):
        return value
    if math.isnan(value):
        return "nan"
    return "inf" if value > 0 else "-inf"
