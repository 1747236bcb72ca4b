"""Welch's unequal-variance t-test for comparing algorithm score samples.

The two-sided p-value comes from the t-distribution tail identity
P(|T| > t) = I_x(df/2, 1/2) with x = df / (df + t^2), where I is the
regularized incomplete beta function. Above NORMAL_APPROX_DF degrees of
freedom the normal tail is used instead; the two agree to well below the
reporting precision there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from scipy.special import betainc

from .errors import ParameterError, UndefinedStatisticError

NORMAL_APPROX_DF = 1e5

# p-values smaller than this are reported as plain 0 in tables.
P_REPORT_FLOOR = 1e-16


@dataclass(frozen=True)
class WelchResult:
    t: float
    df: float
    p: float
    n1: int
    n2: int
    mean1: float
    mean2: float


def _mean_var(sample: Sequence[float]) -> tuple[float, float]:
    n = len(sample)
    mean = sum(sample) / n
    var = sum((x - mean) ** 2 for x in sample) / (n - 1)
    return mean, var


def welch_t(sample_a: Sequence[float], sample_b: Sequence[float]) -> WelchResult:
    """Two-sided Welch test of mean equality with Welch-Satterthwaite df."""
    n1, n2 = len(sample_a), len(sample_b)
    if n1 < 2 or n2 < 2:
        raise ParameterError(f"both samples need >= 2 values, got {n1} and {n2}")
    mean1, var1 = _mean_var(sample_a)
    mean2, var2 = _mean_var(sample_b)
    se1, se2 = var1 / n1, var2 / n2
    pooled = se1 + se2
    if pooled == 0.0:
        raise UndefinedStatisticError("both samples have zero variance")
    t = (mean1 - mean2) / math.sqrt(pooled)
    df = pooled**2 / (se1**2 / (n1 - 1) + se2**2 / (n2 - 1))
    return WelchResult(t=t, df=df, p=t_two_sided_p(t, df), n1=n1, n2=n2, mean1=mean1, mean2=mean2)


def t_two_sided_p(t: float, df: float) -> float:
    if df <= 0:
        raise ParameterError(f"degrees of freedom must be positive, got {df}")
    if df > NORMAL_APPROX_DF:
        return math.erfc(abs(t) / math.sqrt(2))
    x = df / (df + t * t)
    return float(betainc(df / 2.0, 0.5, x))


def t_cdf(t: float, df: float) -> float:
    half_tail = t_two_sided_p(t, df) / 2.0
    return half_tail if t < 0 else 1.0 - half_tail


def format_p(p: float) -> str:
    """Table formatting rule: sub-1e-16 p-values collapse to 0."""
    if p < P_REPORT_FLOOR:
        return "0"
    return repr(p)
