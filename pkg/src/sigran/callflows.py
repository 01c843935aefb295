"""Canonical control-plane callflows for two 5G RAN architectures.

Two architectures are modeled:

* standard RAN: the base station (gNB) owns the radio control stack (RRC)
  and exchanges application-level signaling with the core AMF over NG-AP.
  Every NAS message between a UE and the AMF is therefore handled twice at
  the gNB: the RRC leg is decoded (encoded) and the NG-AP leg encoded
  (decoded).
* centralized RAN: the base station is reduced to a data-plane node (dNB)
  and the radio control stack lives in an enhanced core controller (eAMF).
  UE signaling is relayed through the dNB untouched; the eAMF programs dNB
  data flows over F1-AP (Create Flow / Modify Flow / status transfer).

Each procedure is an ordered sequence of :class:`MessageSpec`. Message ids
are short tokens named after the message they carry ("rr" = registration
request, "hreq" = handover request, ...). A trailing ``'`` marks the
NG-AP/F1-AP leg of an exchange, ``''`` marks a core-internal exchange that
never crosses the RAN boundary. Transmission cost is carried by ``hops``
(one entry per directed link traversal) and per-node ASN.1 work by
``processing``.

Reconstruction conventions, applied uniformly to all four catalogs:

* every gNB<->AMF application-protocol message costs two gNB steps
  (RRC handling plus NG-AP handling), uplink ``[rrc decode, ngap encode]``
  and downlink ``[ngap decode, rrc encode]``;
* every plain UE<->gNB RRC message costs one gNB step;
* two-hop UE<->dNB<->eAMF relays cost nothing at the dNB and one eAMF RRC
  step at the far end;
* core-internal (``''``) messages cost transmission only;
* in the registration flows the RRC reconfiguration is prepared together
  with the accept (no separate encode) and its completion is decoded
  together with the registration complete (a double decode on ``rc``).

All catalog data is immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class NodeKind(Enum):
    """Network elements that can source, sink, or relay signaling."""

    UE = "UE"
    GNB = "GNB"
    DNB = "DNB"
    AMF = "AMF"
    EAMF = "EAMF"
    CORE_PEER = "CORE"


class Layer(Enum):
    RRC = "RRC"
    NGAP = "NG-AP"
    F1AP = "F1-AP"


class Direction(Enum):
    ENCODE = "encode"
    DECODE = "decode"


class ProcessingStep(Enum):
    """One ASN.1 encode/decode step, priced at one beta each.

    The ten members are the complete set of (node, layer, direction)
    combinations that occur in the catalogs: gNB work in the standard
    architecture, eAMF/dNB work in the centralized one.
    """

    GNB_RRC_DECODE = (NodeKind.GNB, Layer.RRC, Direction.DECODE)
    GNB_RRC_ENCODE = (NodeKind.GNB, Layer.RRC, Direction.ENCODE)
    GNB_NGAP_ENCODE = (NodeKind.GNB, Layer.NGAP, Direction.ENCODE)
    GNB_NGAP_DECODE = (NodeKind.GNB, Layer.NGAP, Direction.DECODE)
    EAMF_RRC_ENCODE = (NodeKind.EAMF, Layer.RRC, Direction.ENCODE)
    EAMF_RRC_DECODE = (NodeKind.EAMF, Layer.RRC, Direction.DECODE)
    EAMF_F1AP_ENCODE = (NodeKind.EAMF, Layer.F1AP, Direction.ENCODE)
    EAMF_F1AP_DECODE = (NodeKind.EAMF, Layer.F1AP, Direction.DECODE)
    DNB_F1AP_ENCODE = (NodeKind.DNB, Layer.F1AP, Direction.ENCODE)
    DNB_F1AP_DECODE = (NodeKind.DNB, Layer.F1AP, Direction.DECODE)

    @property
    def node(self) -> NodeKind:
        return self.value[0]

    @property
    def layer(self) -> Layer:
        return self.value[1]

    @property
    def direction(self) -> Direction:
        return self.value[2]


# Step families used by the per-variant validity rules.
GNB_STEPS = frozenset(
    {
        ProcessingStep.GNB_RRC_DECODE,
        ProcessingStep.GNB_RRC_ENCODE,
        ProcessingStep.GNB_NGAP_ENCODE,
        ProcessingStep.GNB_NGAP_DECODE,
    }
)
CENTRALIZED_STEPS = frozenset(ProcessingStep) - GNB_STEPS


class CallflowVariant(Enum):
    THREEGPP_REGISTRATION = "3gpp-registration"
    PROPOSED_REGISTRATION = "proposed-registration"
    THREEGPP_HANDOVER = "3gpp-handover"
    PROPOSED_HANDOVER = "proposed-handover"

    @property
    def architecture(self) -> str:
        """Either ``"3gpp"`` or ``"proposed"``."""
        return self.value.split("-", 1)[0]


@dataclass(frozen=True)
class MessageSpec:
    """One signaling message: identity, directed hop path, processing."""

    uid: str
    display_name: str
    hops: tuple[tuple[NodeKind, NodeKind], ...]
    processing: tuple[ProcessingStep, ...] = ()
    core_internal: bool = False

    @property
    def hop_count(self) -> int:
        return len(self.hops)

    @property
    def step_count(self) -> int:
        return len(self.processing)

    def origin(self) -> NodeKind:
        return self.hops[0][0]

    def destination(self) -> NodeKind:
        return self.hops[-1][1]


@dataclass(frozen=True)
class Callflow:
    """An ordered message sequence for one procedure under one architecture."""

    variant: CallflowVariant
    messages: tuple[MessageSpec, ...]

    @property
    def hop_count(self) -> int:
        return sum(m.hop_count for m in self.messages)

    @property
    def step_count(self) -> int:
        return sum(m.step_count for m in self.messages)

    def step_histogram(self) -> dict[ProcessingStep, int]:
        hist: dict[ProcessingStep, int] = {}
        for m in self.messages:
            for s in m.processing:
                hist[s] = hist.get(s, 0) + 1
        return hist


# Expected (hop, step) totals per canonical variant.
CANONICAL_TOTALS: dict[CallflowVariant, tuple[int, int]] = {
    CallflowVariant.THREEGPP_REGISTRATION: (18, 24),
    CallflowVariant.PROPOSED_REGISTRATION: (19, 10),
    CallflowVariant.THREEGPP_HANDOVER: (13, 22),
    CallflowVariant.PROPOSED_HANDOVER: (12, 12),
}

# Node that opens each procedure (first hop of the first message).
PROCEDURE_INITIATOR: dict[CallflowVariant, NodeKind] = {
    CallflowVariant.THREEGPP_REGISTRATION: NodeKind.UE,
    CallflowVariant.PROPOSED_REGISTRATION: NodeKind.UE,
    CallflowVariant.THREEGPP_HANDOVER: NodeKind.GNB,
    CallflowVariant.PROPOSED_HANDOVER: NodeKind.EAMF,
}

_UE = NodeKind.UE
_GNB = NodeKind.GNB
_DNB = NodeKind.DNB
_AMF = NodeKind.AMF
_EAMF = NodeKind.EAMF
_CORE = NodeKind.CORE_PEER

_GD = ProcessingStep.GNB_RRC_DECODE
_GE = ProcessingStep.GNB_RRC_ENCODE
_GEP = ProcessingStep.GNB_NGAP_ENCODE
_GDP = ProcessingStep.GNB_NGAP_DECODE
_EE = ProcessingStep.EAMF_RRC_ENCODE
_ED = ProcessingStep.EAMF_RRC_DECODE
_EPE = ProcessingStep.EAMF_F1AP_ENCODE
_EPD = ProcessingStep.EAMF_F1AP_DECODE
_DE = ProcessingStep.DNB_F1AP_ENCODE
_DD = ProcessingStep.DNB_F1AP_DECODE


def _msg(uid, name, path, steps=(), core_internal=False):
    hops = tuple(zip(path[:-1], path[1:]))
    return MessageSpec(uid, name, hops, tuple(steps), core_internal)


def _threegpp_registration() -> tuple[MessageSpec, ...]:
    return (
        _msg("rr", "Registration Request", (_UE, _GNB), [_GD]),
        _msg("rr'", "Initial UE Message (Registration Request)", (_GNB, _AMF), [_GD, _GEP]),
        _msg("ireq'", "Downlink NAS Transport (Identity Request)", (_AMF, _GNB), [_GDP, _GE]),
        _msg("ireq", "Identity Request", (_GNB, _UE), [_GE]),
        _msg("iresp", "Identity Response", (_UE, _GNB), [_GD]),
        _msg("iresp'", "Uplink NAS Transport (Identity Response)", (_GNB, _AMF), [_GD, _GEP]),
        _msg("areq'", "Downlink NAS Transport (Authentication Request)", (_AMF, _GNB), [_GDP, _GE]),
        _msg("areq", "Authentication Request", (_GNB, _UE), [_GE]),
        _msg("aresp", "Authentication Response", (_UE, _GNB), [_GD]),
        _msg("aresp'", "Uplink NAS Transport (Authentication Response)", (_GNB, _AMF), [_GD, _GEP]),
        _msg("creq''", "Session Create Request", (_AMF, _CORE), core_internal=True),
        _msg("cresp''", "Session Create Response", (_CORE, _AMF), core_internal=True),
        _msg("ra'", "Initial Context Setup Request (Registration Accept)", (_AMF, _GNB), [_GDP, _GE]),
        _msg("ra", "Registration Accept", (_GNB, _UE), [_GE]),
        _msg("rcr", "RRC Connection Reconfiguration", (_GNB, _UE)),
        _msg("cresp'", "Initial Context Setup Response", (_GNB, _AMF), [_GD, _GEP]),
        _msg("rc", "Registration Complete", (_UE, _GNB), [_GD, _GD]),
        _msg("rc'", "Uplink NAS Transport (Registration Complete)", (_GNB, _AMF), [_GD, _GEP]),
    )


def _proposed_registration() -> tuple[MessageSpec, ...]:
    return (
        _msg("rr", "Registration Request", (_UE, _DNB, _EAMF), [_ED]),
        _msg("ireq", "Identity Request", (_EAMF, _DNB, _UE), [_EE]),
        _msg("iresp", "Identity Response", (_UE, _DNB, _EAMF), [_ED]),
        _msg("areq", "Authentication Request", (_EAMF, _DNB, _UE), [_EE]),
        _msg("aresp", "Authentication Response", (_UE, _DNB, _EAMF), [_ED]),
        _msg("creq''", "Session Create Request", (_EAMF, _CORE), core_internal=True),
        _msg("cresp''", "Session Create Response", (_CORE, _EAMF), core_internal=True),
        _msg("cf'", "Create Flow", (_EAMF, _DNB), [_EPE, _DD]),
        _msg("ra", "Registration Accept", (_EAMF, _DNB, _UE), [_EE]),
        _msg("rcr", "RRC Connection Reconfiguration", (_EAMF, _DNB, _UE)),
        _msg("rc", "Registration Complete", (_UE, _DNB, _EAMF), [_ED, _ED]),
    )


def _threegpp_handover() -> tuple[MessageSpec, ...]:
    return (
        _msg("mc", "Measurement Control", (_GNB, _UE), [_GE]),
        _msg("mr", "Measurement Report", (_UE, _GNB), [_GD]),
        _msg("hr", "Handover Required", (_GNB, _AMF), [_GD, _GEP]),
        _msg("hreq", "Handover Request", (_AMF, _GNB), [_GDP, _GE]),
        _msg("hreqa", "Handover Request Acknowledge", (_GNB, _AMF), [_GD, _GEP]),
        _msg("hc", "Handover Command", (_AMF, _GNB), [_GDP, _GE]),
        _msg("rcr", "RRC Connection Reconfiguration (Handover Command)", (_GNB, _UE), [_GE]),
        _msg("st", "Status Transfer (source to core)", (_GNB, _AMF), [_GD, _GEP]),
        _msg("st'", "Status Transfer (core to target)", (_AMF, _GNB), [_GDP, _GE]),
        _msg("rc", "Handover Confirm", (_UE, _GNB), [_GD]),
        _msg("hn", "Handover Notify", (_GNB, _AMF), [_GD, _GEP]),
        _msg("crel", "UE Context Release Command", (_AMF, _GNB), [_GDP, _GE]),
        _msg("crel'", "UE Context Release Complete", (_GNB, _AMF), [_GD, _GEP]),
    )


def _proposed_handover() -> tuple[MessageSpec, ...]:
    return (
        _msg("mc", "Measurement Control", (_EAMF, _DNB, _UE), [_EE]),
        _msg("mr", "Measurement Report", (_UE, _DNB, _EAMF), [_ED]),
        _msg("cf'", "Create Flow (target dNB)", (_EAMF, _DNB), [_EPE, _DD]),
        _msg("mf'", "Modify Flow (source dNB)", (_EAMF, _DNB), [_EPE, _DD]),
        _msg("rcr", "RRC Connection Reconfiguration (Handover Command)", (_EAMF, _DNB, _UE), [_EE]),
        _msg("st", "Status Transfer (source dNB to eAMF)", (_DNB, _EAMF), [_DE, _EPD]),
        _msg("st'", "Status Transfer (eAMF to target dNB)", (_EAMF, _DNB), [_EPE, _DD]),
        _msg("rc", "Handover Confirm", (_UE, _DNB, _EAMF), [_ED]),
    )


_CATALOGS: dict[CallflowVariant, tuple[MessageSpec, ...]] = {
    CallflowVariant.THREEGPP_REGISTRATION: _threegpp_registration(),
    CallflowVariant.PROPOSED_REGISTRATION: _proposed_registration(),
    CallflowVariant.THREEGPP_HANDOVER: _threegpp_handover(),
    CallflowVariant.PROPOSED_HANDOVER: _proposed_handover(),
}


def build_callflow(variant: CallflowVariant) -> Callflow:
    """Return the canonical callflow for ``variant``."""
    return Callflow(variant, _CATALOGS[variant])


def message_catalog(variant: CallflowVariant) -> list[MessageSpec]:
    """Messages of the canonical callflow, in causal order."""
    return list(_CATALOGS[variant])


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


# Violation codes that make a callflow structurally unusable (as opposed to
# merely deviating from the canonical coefficient totals).
STRUCTURAL_CODES = frozenset(
    {
        "empty-hops",
        "hop-discontinuity",
        "forbidden-processing",
        "forbidden-node",
        "relay-processing",
        "core-internal-processing",
        "initiator",
    }
)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def structural_violations(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.code in STRUCTURAL_CODES)

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(str(v) for v in self.violations)


def validate_callflow(cf: Callflow) -> ValidationReport:
    """Check a callflow against the architecture and catalog rules.

    Violations are reported as data; the canonical catalogs produce an
    empty report.
    """
    bad: list[Violation] = []
    proposed = cf.variant.architecture == "proposed"
    allowed_nodes = (
        {_UE, _DNB, _EAMF, _CORE} if proposed else {_UE, _GNB, _AMF, _CORE}
    )
    allowed_steps = CENTRALIZED_STEPS if proposed else GNB_STEPS

    for m in cf.messages:
        if not m.hops:
            bad.append(Violation("empty-hops", f"message {m.uid} has no hops"))
            continue
        for (a, b), (c, _) in zip(m.hops[:-1], m.hops[1:]):
            if b is not c:
                bad.append(
                    Violation(
                        "hop-discontinuity",
                        f"hop discontinuity in {m.uid}: {b.value} then {c.value}",
                    )
                )
        for a, b in m.hops:
            for n in (a, b):
                if n not in allowed_nodes:
                    bad.append(
                        Violation(
                            "forbidden-node",
                            f"node {n.value} not allowed in {cf.variant.value} ({m.uid})",
                        )
                    )
        endpoints = {m.origin(), m.destination()}
        for s in m.processing:
            if s not in allowed_steps:
                side = "gNB" if s in GNB_STEPS else "eAMF/dNB"
                bad.append(
                    Violation(
                        "forbidden-processing",
                        f"{side} processing in {cf.variant.architecture} variant ({m.uid}: {s.name})",
                    )
                )
            elif s.node not in endpoints:
                bad.append(
                    Violation(
                        "relay-processing",
                        f"processing at relay node {s.node.value} in {m.uid}",
                    )
                )
        if m.core_internal and m.processing:
            bad.append(
                Violation(
                    "core-internal-processing",
                    f"core-internal message {m.uid} carries processing steps",
                )
            )

    if cf.messages and cf.messages[0].hops:
        initiator = PROCEDURE_INITIATOR[cf.variant]
        first = cf.messages[0].hops[0][0]
        if first is not initiator:
            bad.append(
                Violation(
                    "initiator",
                    f"procedure opens at {first.value}, expected {initiator.value}",
                )
            )

    hops, steps = CANONICAL_TOTALS[cf.variant]
    if cf.hop_count != hops:
        bad.append(
            Violation(
                "coefficient-mismatch",
                f"hop total {cf.hop_count} != canonical {hops}",
            )
        )
    if cf.step_count != steps:
        bad.append(
            Violation(
                "coefficient-mismatch",
                f"processing total {cf.step_count} != canonical {steps}",
            )
        )
    return ValidationReport(tuple(bad))


CALLFLOW_RECORD_HEADER = "id\tname\thops\tsteps"


def callflow_records(cf: Callflow) -> list[str]:
    """Render a callflow as tab-separated records (id, name, hops, steps).

    One line per message; hops are ``A>B`` tokens and steps are lowercase
    step names, both comma-joined. Used for docs and diff-testing.
    """
    lines = []
    for m in cf.messages:
        hops = ",".join(f"{a.value}>{b.value}" for a, b in m.hops)
        steps = ",".join(s.name.lower() for s in m.processing)
        lines.append(f"{m.uid}\t{m.display_name}\t{hops}\t{steps}")
    return lines
