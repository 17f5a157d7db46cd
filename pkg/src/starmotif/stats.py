"""Two-sample t-tests with Bonferroni correction over metric groups.

The p-value path is self-contained: the two-tailed Student-t survival
probability is evaluated through the regularized incomplete beta
function, itself computed with a modified-Lentz continued fraction
(iteration cap 300, convergence 1e-14).  Accuracy is better than 1e-10
absolute for df >= 1 and |t| <= 100.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .centrality import METRIC_NAMES, MetricRecord
from .agents import AgentType
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateVarianceError,
    InputError,
    InsufficientSampleError,
)

DEFAULT_ALPHA = 0.05

_CF_MAX_ITER = 300
_CF_EPS = 1e-14
_CF_TINY = 1e-300


class TestVariant(enum.Enum):
    __test__ = False  # domain class, not a pytest collection target

    STUDENT = "student"
    WELCH = "welch"


@dataclass(frozen=True)
class SampleSummary:
    """Size, mean, and unbiased (n-1 denominator) variance of one sample."""

    n: int
    mean: float
    variance: float

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 2:
            raise InputError(f"sample size must be an integer >= 2, got {self.n!r}")
        if not math.isfinite(self.mean):
            raise InputError(f"sample mean must be finite, got {self.mean!r}")
        if not math.isfinite(self.variance) or self.variance < 0:
            raise InputError(f"sample variance must be finite and >= 0, got {self.variance!r}")

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "SampleSummary":
        n = len(values)
        if n < 2:
            raise InputError(f"need at least 2 values to summarize a sample, got {n}")
        mean = math.fsum(values) / n
        variance = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
        return cls(n=n, mean=mean, variance=variance)


@dataclass(frozen=True)
class TestResult:
    """One comparison row: statistic, raw and corrected p, significance."""

    __test__ = False  # domain class, not a pytest collection target

    metric: str
    t_statistic: float
    df: float
    p_value: float
    corrected_p: float
    significant: bool


def two_sample_t(
    a: SampleSummary,
    b: SampleSummary,
    variant: TestVariant = TestVariant.STUDENT,
) -> tuple[float, float]:
    """Independent two-sample t statistic and degrees of freedom.

    Student pools the variances with df = n_a + n_b - 2; Welch uses the
    unpooled statistic with Welch-Satterthwaite df.  Zero variance in
    both samples is tolerated only when the means are equal (t = 0 by
    definition); with unequal means the statistic is undefined.
    """
    diff = a.mean - b.mean
    if variant is TestVariant.STUDENT:
        df = float(a.n + b.n - 2)
        pooled = ((a.n - 1) * a.variance + (b.n - 1) * b.variance) / df
        denom_sq = pooled * (1.0 / a.n + 1.0 / b.n)
    elif variant is TestVariant.WELCH:
        va_n = a.variance / a.n
        vb_n = b.variance / b.n
        denom_sq = va_n + vb_n
        if denom_sq > 0:
            df = denom_sq**2 / (va_n**2 / (a.n - 1) + vb_n**2 / (b.n - 1))
        else:
            df = float(a.n + b.n - 2)
    else:
        raise ConfigError(f"unknown test variant {variant!r}")

    if denom_sq == 0:
        if diff == 0:
            return 0.0, df
        raise DegenerateVarianceError(
            "zero variance in both samples with unequal means; t statistic undefined"
        )
    return diff / math.sqrt(denom_sq), df


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Modified-Lentz continued fraction for the incomplete beta integral."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        num = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + num * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + num / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + num * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + num / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < _CF_EPS:
            return h
    raise ConvergenceError(
        f"incomplete beta continued fraction did not converge for "
        f"a={a!r}, b={b!r}, x={x!r}"
    )


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not (a > 0 and b > 0):
        raise InputError(f"beta parameters must be positive, got a={a!r}, b={b!r}")
    if not 0.0 <= x <= 1.0:
        raise InputError(f"x must be in [0, 1], got {x!r}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # The continued fraction converges fastest on the side of the split point.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def t_p_value(t: float, df: float, tails: str = "two-sided") -> float:
    """Two-tailed p for a t statistic: I_x(df/2, 1/2) with x = df/(df + t^2)."""
    if tails != "two-sided":
        raise ConfigError(f"only the two-sided test is supported, got {tails!r}")
    if not df > 0:
        raise InputError(f"degrees of freedom must be positive, got {df!r}")
    if not math.isfinite(t):
        return 0.0 if math.isinf(t) else math.nan
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    p = regularized_incomplete_beta(df / 2.0, 0.5, x)
    return min(1.0, max(0.0, p))


def bonferroni(p: float, m: int) -> float:
    """Family-wise corrected p-value: min(1, p * m)."""
    if not 0.0 <= p <= 1.0:
        raise InputError(f"p must be in [0, 1], got {p!r}")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ConfigError(f"comparison count m must be an integer >= 1, got {m!r}")
    return min(1.0, p * m)


def compare_bots_humans(
    records: Iterable[MetricRecord],
    metrics: Sequence[str] = METRIC_NAMES,
    m: int | None = None,
    alpha: float = DEFAULT_ALPHA,
    variant: TestVariant = TestVariant.STUDENT,
) -> list[TestResult]:
    """Bot-vs-human test per metric, Bonferroni-corrected over ``m`` comparisons.

    ``m`` defaults to the number of metrics tested here, but can be set
    higher when these tests are part of a larger family.  Both groups
    need at least 2 records, and each metric needs a positive variance in
    at least one group.
    """
    if not metrics:
        raise ConfigError("metrics list must be non-empty")
    unknown = [name for name in metrics if name not in METRIC_NAMES]
    if unknown:
        raise ConfigError(f"unknown metric name(s) {unknown!r}; expected {METRIC_NAMES}")
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must be in (0, 1), got {alpha!r}")

    records = list(records)
    bots = [r for r in records if r.agent_type is AgentType.BOT]
    humans = [r for r in records if r.agent_type is AgentType.HUMAN]
    if len(bots) < 2:
        raise InsufficientSampleError("bot", len(bots))
    if len(humans) < 2:
        raise InsufficientSampleError("human", len(humans))

    m_effective = m if m is not None else len(metrics)
    results = []
    for name in metrics:
        a = SampleSummary.from_values([getattr(r, name) for r in bots])
        b = SampleSummary.from_values([getattr(r, name) for r in humans])
        if a.variance == 0 and b.variance == 0:
            raise DegenerateVarianceError(
                f"metric {name!r}: zero variance in both groups; test undefined"
            )
        t, df = two_sample_t(a, b, variant)
        p = t_p_value(t, df)
        corrected = bonferroni(p, m_effective)
        results.append(
            TestResult(
                metric=name,
                t_statistic=t,
                df=df,
                p_value=p,
                corrected_p=corrected,
                significant=corrected < alpha,
            )
        )
    return results
