"""Power-law degree sequences and community-size sequences.

Sampling is exact inverse-CDF over the truncated discrete distribution; the
feasibility adjustments (lower-cutoff search, parity fix, sum clamping) are
spelled out here because the generation recipe leaves them implicit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, InvalidBoundsError, InvalidSpecError
from .rng import RandomSource


@dataclass(frozen=True)
class PowerLawSpec:
    """P(x) proportional to x**(-exponent) on the integer interval [lower, upper]."""

    exponent: float
    lower: int
    upper: int

    def __post_init__(self):
        if self.exponent <= 1.0:
            raise InvalidSpecError(f"exponent must exceed 1, got {self.exponent}")
        if self.lower < 1:
            raise InvalidSpecError(f"lower bound must be positive, got {self.lower}")
        if self.lower > self.upper:
            raise InvalidSpecError(f"lower {self.lower} exceeds upper {self.upper}")

    def support(self) -> np.ndarray:
        return np.arange(self.lower, self.upper + 1, dtype=np.float64)

    def pmf(self) -> np.ndarray:
        w = self.support() ** (-self.exponent)
        return w / w.sum()

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.pmf())

    def mean(self) -> float:
        return float(self.support() @ self.pmf())


def sample_power_law(spec: PowerLawSpec, rng: RandomSource) -> int:
    """One draw from the truncated power law."""
    u = rng.random()
    idx = int(np.searchsorted(spec.cdf(), u, side="right"))
    return spec.lower + min(idx, spec.upper - spec.lower)


def sample_power_law_array(spec: PowerLawSpec, size: int, rng: RandomSource) -> np.ndarray:
    u = rng.random_array(size)
    idx = np.searchsorted(spec.cdf(), u, side="right")
    np.clip(idx, 0, spec.upper - spec.lower, out=idx)
    return spec.lower + idx.astype(np.int64)


@dataclass(frozen=True)
class DegreeSequence:
    """Drawn degrees plus the fitted lower cutoff that produced them."""

    degrees: np.ndarray
    k_min: int
    k_max: int
    target_avg: float

    def __len__(self) -> int:
        return int(self.degrees.size)

    def __iter__(self):
        return iter(self.degrees.tolist())


def _truncated_mean(gamma: float, lower: int, upper: int) -> float:
    x = np.arange(lower, upper + 1, dtype=np.float64)
    w = x ** (-gamma)
    return float((x * w).sum() / w.sum())


def find_k_min(gamma: float, k_max: int, target_avg: float) -> int:
    """Integer lower cutoff whose truncated-power-law mean is closest to target.

    Bisection over the (monotone increasing in k_min) analytic mean.
    """
    if target_avg > k_max:
        raise InfeasibleError(
            f"target average degree {target_avg} exceeds k_max {k_max}"
        )
    lo, hi = 1, k_max
    if _truncated_mean(gamma, lo, k_max) >= target_avg:
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _truncated_mean(gamma, mid, k_max) <= target_avg:
            lo = mid
        else:
            hi = mid
    gap_lo = abs(_truncated_mean(gamma, lo, k_max) - target_avg)
    gap_hi = abs(_truncated_mean(gamma, hi, k_max) - target_avg)
    return lo if gap_lo <= gap_hi else hi


def build_degree_sequence(
    n: int,
    gamma: float,
    k_max: int,
    target_avg: float,
    rng: RandomSource,
    tolerance: float = 0.05,
) -> DegreeSequence:
    """Draw n degrees with mean within `tolerance` of target and an even sum."""
    if n < 1:
        raise InfeasibleError("need at least one node")
    if not 1 <= target_avg < k_max:
        raise InfeasibleError(
            f"target average {target_avg} must lie in [1, k_max={k_max})"
        )
    k_min = find_k_min(gamma, k_max, target_avg)
    analytic = _truncated_mean(gamma, k_min, k_max)
    if abs(analytic - target_avg) > tolerance * target_avg:
        raise InfeasibleError(
            f"no integer k_min in [1, {k_max}] reaches mean {target_avg} "
            f"(closest: {analytic:.3f} at k_min={k_min})"
        )
    spec = PowerLawSpec(gamma, k_min, k_max)
    for _ in range(100):
        degrees = sample_power_law_array(spec, n, rng)
        if degrees.sum() % 2 == 1:
            below = np.flatnonzero(degrees < k_max)
            if below.size == 0:
                continue
            degrees[below[rng.randint(below.size)]] += 1
        if abs(degrees.mean() - target_avg) <= tolerance * target_avg:
            return DegreeSequence(degrees, k_min, k_max, target_avg)
    raise InfeasibleError(
        f"drawn mean repeatedly missed {target_avg} +/- {tolerance * 100:.0f}%"
    )


def build_community_sizes(
    n: int,
    beta: float,
    c_min: int,
    c_max: int,
    rng: RandomSource,
) -> list[int]:
    """Community sizes summing to n exactly, each in [c_min, c_max].

    Sizes are drawn until the running sum covers n; the final draw is clamped
    to the remainder. A remainder too small to stand as its own community is
    spread over the smallest existing sizes instead, respecting c_max.
    """
    if not 3 <= c_min <= c_max <= n:
        raise InvalidBoundsError(
            f"need 3 <= c_min <= c_max <= n, got c_min={c_min}, c_max={c_max}, n={n}"
        )
    spec = PowerLawSpec(beta, c_min, c_max)
    sizes: list[int] = []
    total = 0
    while total < n:
        s = sample_power_law(spec, rng)
        if total + s >= n:
            remainder = n - total
            if remainder >= c_min:
                sizes.append(remainder)
                total = n
            else:
                sizes = _absorb_remainder(sizes, remainder, c_max)
                total = n
        else:
            sizes.append(s)
            total += s
    return sizes


def _absorb_remainder(sizes: list[int], remainder: int, c_max: int) -> list[int]:
    if not sizes:
        raise InvalidBoundsError("n smaller than c_min leaves no room for a community")
    out = list(sizes)
    while remainder > 0:
        order = sorted(range(len(out)), key=lambda i: (out[i], i))
        placed = False
        for i in order:
            headroom = c_max - out[i]
            if headroom > 0:
                take = min(headroom, remainder)
                out[i] += take
                remainder -= take
                placed = True
                break
        if not placed:
            raise InvalidBoundsError(
                "cannot absorb remainder without breaking the c_max bound"
            )
    return out
