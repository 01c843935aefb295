"""Signaling-time cost model over callflows.

Signaling time for a procedure is ``hops * m * alpha + steps * beta`` where
``m`` is the average message length in bits, ``alpha`` the per-bit per-hop
transfer time and ``beta`` the per-step ASN.1 processing time. The model is
deliberately uniform: every hop moves the same m bits and every processing
step costs the same beta.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .callflows import (
    Callflow,
    CallflowVariant,
    ValidationReport,
    build_callflow,
    validate_callflow,
)


class ParameterError(ValueError):
    """Raised for out-of-range cost or workload parameters."""


class InvalidCallflowError(ValueError):
    """Raised when an operation receives a structurally invalid callflow."""

    def __init__(self, report: ValidationReport):
        super().__init__(f"invalid callflow: {report}")
        self.report = report


@dataclass(frozen=True)
class CostParams:
    """Uniform signaling-cost parameters.

    alpha: transfer time per bit per hop (ms/bit). beta: processing time per
    encode/decode step (ms). m: average message length (bits). Zero alpha or
    beta is accepted so the transmission-only / processing-only limits can be
    evaluated; negative or non-finite values are rejected.
    """

    alpha: float = 1.0
    beta: float = 4.0
    m: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "m"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ParameterError(f"{name} must be finite, got {v!r}")
        if self.alpha < 0:
            raise ParameterError(f"alpha must be >= 0, got {self.alpha}")
        if self.beta < 0:
            raise ParameterError(f"beta must be >= 0, got {self.beta}")
        if self.m <= 0:
            raise ParameterError(f"m must be > 0, got {self.m}")

    @property
    def hop_ms(self) -> float:
        """Transfer time of one message over one hop."""
        return self.m * self.alpha


@dataclass(frozen=True)
class CostPolynomial:
    """Signaling time as coefficients of (m*alpha, beta)."""

    tx_hops: int
    proc_steps: int

    def __post_init__(self):
        if self.tx_hops < 0 or self.proc_steps < 0:
            raise ParameterError("coefficients must be non-negative")

    def time_ms(self, p: CostParams) -> float:
        return self.tx_hops * p.m * p.alpha + self.proc_steps * p.beta

    def __str__(self) -> str:
        return f"{self.tx_hops}*m*alpha + {self.proc_steps}*beta"


def symbolic_cost(cf: Callflow) -> CostPolynomial:
    """Sum hops and processing steps of a callflow into a polynomial.

    Callflows with structural violations (broken hop chains, processing at
    the wrong nodes) are rejected with their validation report attached.
    """
    report = validate_callflow(cf)
    if report.structural_violations:
        raise InvalidCallflowError(report)
    return CostPolynomial(cf.hop_count, cf.step_count)


def signaling_time(cf: Callflow, p: CostParams) -> float:
    """Total signaling time of one procedure run, in ms."""
    return symbolic_cost(cf).time_ms(p)


def improvement(baseline: float, proposed: float) -> float:
    """Fractional reduction (baseline - proposed) / baseline."""
    if not math.isfinite(baseline) or baseline <= 0:
        raise ParameterError(f"baseline must be > 0, got {baseline!r}")
    return (baseline - proposed) / baseline


def registration_breakeven(m: float, alpha: float) -> float:
    """Beta above which the centralized registration is strictly faster.

    The registration polynomials differ by ``14*beta - m*alpha``, so the
    threshold is ``m*alpha / 14``.
    """
    if not (math.isfinite(m) and m > 0):
        raise ParameterError(f"m must be > 0, got {m!r}")
    if not (math.isfinite(alpha) and alpha > 0):
        raise ParameterError(f"alpha must be > 0, got {alpha!r}")
    return m * alpha / 14.0


@dataclass(frozen=True)
class ComparisonRow:
    procedure: str
    baseline_ms: float
    proposed_ms: float
    improvement: float


@dataclass(frozen=True)
class ComparisonTable:
    params: CostParams
    rows: tuple[ComparisonRow, ...]


# Published reference values for the same comparison, kept alongside the
# formula-derived numbers because no single (m, alpha, beta) triple
# reproduces them for both procedures at once. The registration baseline is
# quoted as a range.
REFERENCE_COMPARISON = {
    "registration": {
        "baseline_ms": (74.0, 84.0),
        "proposed_ms": 60.0,
        "improvement": (0.12, 0.28),
    },
    "handover": {
        "baseline_ms": 78.5,
        "proposed_ms": 55.5,
        "improvement": 0.2929,
    },
}

_PROCEDURES = {
    "registration": (
        CallflowVariant.THREEGPP_REGISTRATION,
        CallflowVariant.PROPOSED_REGISTRATION,
    ),
    "handover": (
        CallflowVariant.THREEGPP_HANDOVER,
        CallflowVariant.PROPOSED_HANDOVER,
    ),
}


def compare_report(p: CostParams) -> ComparisonTable:
    """Evaluate both procedures under both architectures at ``p``."""
    rows = []
    for name, (base_v, prop_v) in _PROCEDURES.items():
        t_base = signaling_time(build_callflow(base_v), p)
        t_prop = signaling_time(build_callflow(prop_v), p)
        rows.append(ComparisonRow(name, t_base, t_prop, improvement(t_base, t_prop)))
    return ComparisonTable(p, tuple(rows))


def sig4(x: float) -> float:
    """Round to 4 significant digits (display convention for fractions)."""
    if x == 0:
        return 0.0
    return round(x, 3 - int(math.floor(math.log10(abs(x)))))


COMPARE_CSV_COLUMNS = ("procedure", "baseline_ms", "proposed_ms", "improvement")


def comparison_csv(table: ComparisonTable) -> str:
    """Comparison rows as CSV with full-precision floats."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COMPARE_CSV_COLUMNS)
    for r in table.rows:
        w.writerow([r.procedure, repr(r.baseline_ms), repr(r.proposed_ms), repr(r.improvement)])
    return buf.getvalue()


REFERENCE_CSV_COLUMNS = (
    "procedure",
    "baseline_ms_low",
    "baseline_ms_high",
    "proposed_ms",
    "improvement_low",
    "improvement_high",
)


def reference_csv() -> str:
    """Published reference comparison as CSV (ranges split into low/high)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REFERENCE_CSV_COLUMNS)
    for name, ref in REFERENCE_COMPARISON.items():
        base = ref["baseline_ms"]
        lo, hi = base if isinstance(base, tuple) else (base, base)
        imp = ref["improvement"]
        ilo, ihi = imp if isinstance(imp, tuple) else (imp, imp)
        w.writerow([name, repr(lo), repr(hi), repr(ref["proposed_ms"]), repr(ilo), repr(ihi)])
    return buf.getvalue()


def comparison_text(table: ComparisonTable) -> str:
    """Aligned text table: computed rows plus the reference block."""
    lines = [
        f"cost parameters: alpha={table.params.alpha} ms/bit, "
        f"beta={table.params.beta} ms, m={table.params.m} bits",
        "",
        f"{'procedure':<14}{'baseline_ms':>12}{'proposed_ms':>13}{'improvement':>13}",
    ]
    for r in table.rows:
        lines.append(
            f"{r.procedure:<14}{r.baseline_ms:>12.4g}{r.proposed_ms:>13.4g}"
            f"{sig4(r.improvement) * 100:>12.4g}%"
        )
    lines.append("")
    lines.append("reference values (published comparison):")
    reg = REFERENCE_COMPARISON["registration"]
    ho = REFERENCE_COMPARISON["handover"]
    lines.append(
        f"{'registration':<14}{'%g-%g' % reg['baseline_ms']:>12}"
        f"{reg['proposed_ms']:>13.4g}{'%g%%-%g%%' % (reg['improvement'][0] * 100, reg['improvement'][1] * 100):>13}"
    )
    lines.append(
        f"{'handover':<14}{ho['baseline_ms']:>12.4g}{ho['proposed_ms']:>13.4g}"
        f"{ho['improvement'] * 100:>12.4g}%"
    )
    return "\n".join(lines)
