"""Finding-based validation for decoded objects and bundles.

Validation never raises: each problem becomes a Finding drawn from the
closed catalogue below. Codes are stable tokens and never change meaning;
downstream automation keys on them. Findings are deterministic and sorted
by (object_id, code, message).

Each finding is tagged with the awareness dimension it degrades:
``syntactic`` (structure and grammar), ``semantic`` (vocabulary, labels,
meaning), or ``operatic`` (sharing and contestation machinery).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple, Union

from . import vocab as vocab_mod
from .base import is_stix_id, id_type, parse_timestamp
from .codec import Bundle, StixEnvelope, WireObject, EXTENSION_ID
from .errors import AmbiguousTermError, UnknownTermError
from .model import (
    BOT_ROLES,
    CampaignDiamond,
    Infrastructure,
    KILL_CHAIN_STAGES,
    Msa,
    MSA_CLASSES,
    OPINION_VALUES,
    OpinionNote,
    Relationship,
    Target,
    TECHNIQUE_REF_RE,
    ThreatActor,
    object_id_of,
)

SEVERITIES = ("error", "warning", "info")
DIMENSIONS = ("syntactic", "semantic", "operatic")

CATALOGUE_VERSION = "1"

# code -> (severity, dimension, description)
FINDING_CATALOGUE: Dict[str, Tuple[str, str, str]] = {
    "BAD_ID_GRAMMAR": ("error", "syntactic", "id fails the stix-id grammar"),
    "ID_TYPE_MISMATCH": ("error", "syntactic", "id prefix differs from object type"),
    "BAD_TIMESTAMP": ("error", "syntactic", "timestamp field is not RFC3339 UTC"),
    "TIMESTAMP_ORDER": ("error", "syntactic", "modified precedes created"),
    "CONFIDENCE_RANGE": ("error", "syntactic", "confidence outside 0..100"),
    "MISSING_REQUIRED": ("error", "syntactic", "required field absent"),
    "WRONG_TYPE": ("error", "syntactic", "field value has the wrong JSON type"),
    "EMPTY_NAME": ("error", "syntactic", "threat actor name is empty"),
    "EMPTY_TARGET": ("error", "syntactic", "target current is empty"),
    "EMPTY_MAINBOT": ("error", "syntactic", "mainbots entry is empty"),
    "EMPTY_DEVICE": ("error", "syntactic", "physical device is empty"),
    "NEGATIVE_YOE": ("error", "syntactic", "yoe is negative"),
    "NEGATIVE_BOT_NUMBERS": ("error", "syntactic", "bot_numbers is negative"),
    "NEGATIVE_COUNT": ("error", "syntactic", "count field is negative"),
    "BAD_MSA_CLASS": ("error", "syntactic", "msa_class outside the three classes"),
    "CLASS_PROFILE_MISMATCH": ("error", "syntactic",
                               "profile presence inconsistent with msa_class"),
    "BAD_BOT_ROLE": ("error", "syntactic", "bot role outside the role vocabulary"),
    "BAD_TECHNIQUE_REF": ("error", "syntactic", "technique id fails the pattern"),
    "BAD_KILL_CHAIN_STAGE": ("error", "syntactic",
                             "ckc_stage outside the seven stages"),
    "DATE_ORDER": ("error", "syntactic", "end_date precedes start_date"),
    "NO_PROFILE": ("error", "syntactic",
                   "infrastructure lacks both logical and physical profiles"),
    "UNKNOWN_VOCAB_TERM": ("error", "semantic",
                           "term not registered in the vocabulary"),
    "AMBIGUOUS_VOCAB_TERM": ("error", "semantic",
                             "term matches several namespaces at a typed site"),
    "AMBIGUOUS_TERM_TEXT": ("warning", "semantic",
                            "ambiguous vocabulary surface used in free text"),
    "GENERIC_LABEL": ("warning", "semantic",
                      "labels carry no signal beyond suspicious/malicious"),
    "LOW_SIGNAL_TECHNIQUE": ("warning", "semantic",
                             "technique id is on the low-signal denylist"),
    "UNLABELLED": ("info", "semantic", "indicator-like object has no labels"),
    "NO_REFS": ("error", "operatic", "opinion references no objects"),
    "BAD_OPINION_VALUE": ("error", "operatic",
                          "opinion outside the five-point scale"),
    "DANGLING_REF": ("error", "semantic", "reference to an absent object"),
    "TYPE_MISMATCH": ("error", "syntactic",
                      "diamond ref points at an object of the wrong type"),
    "DUPLICATE_ID": ("error", "syntactic",
                     "same (id, modified) pair appears twice"),
    "MISSING_EXTENSION_DEFINITION": ("warning", "syntactic",
                                     "family objects present without the "
                                     "extension-definition"),
}

DEFAULT_DENYLIST = ("T0059", "T0131.001", "T0114.002", "T0132.003", "T0023.001")


@dataclass(frozen=True)
class Finding:
    severity: str
    code: str
    object_id: Optional[str]
    message: str
    dimension: str

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code,
            "object_id": self.object_id,
            "message": self.message,
            "dimension": self.dimension,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True,
                          separators=(",", ":"), ensure_ascii=False)

    def __str__(self) -> str:
        where = f" {self.object_id}" if self.object_id else ""
        return f"{self.severity} {self.code}{where}: {self.message}"


def make_finding(code: str, object_id: Optional[str], message: str) -> Finding:
    severity, dimension, _ = FINDING_CATALOGUE[code]
    return Finding(severity=severity, code=code, object_id=object_id,
                   message=message, dimension=dimension)


def sort_findings(findings: Iterable[Finding]) -> List[Finding]:
    return sorted(findings, key=lambda f: (f.object_id or "", f.code, f.message))


def load_denylist(path: str) -> Tuple[str, ...]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not all(isinstance(x, str) for x in data):
        raise ValueError("denylist file must be a JSON array of technique ids")
    return tuple(data)


# re-exported so registry plumbing has a single import point
VocabRegistry = vocab_mod.VocabRegistry
resolve_vocab_term = vocab_mod.resolve_vocab_term
default_registry = vocab_mod.default_registry
load_registry = vocab_mod.load_registry


def _registry(registry):
    return registry if registry is not None else vocab_mod.default_registry()


def _objects(bundle) -> tuple:
    if isinstance(bundle, Bundle):
        return tuple(bundle.objects)
    return tuple(bundle)


def _type_of(obj) -> str:
    if isinstance(obj, StixEnvelope):
        return obj.type
    return type(obj).TYPE


# --- per-object checks -----------------------------------------------------------


class _Checker:
    def __init__(self, object_id: str, registry):
        self.oid = object_id
        self.registry = registry
        self.findings: List[Finding] = []

    def add(self, code: str, message: str) -> None:
        self.findings.append(make_finding(code, self.oid, message))

    def required(self, value, field: str) -> bool:
        if value is None:
            self.add("MISSING_REQUIRED", f"{field} is required")
            return False
        return True

    def string(self, value, field: str, required: bool = True) -> bool:
        if value is None:
            if required:
                self.add("MISSING_REQUIRED", f"{field} is required")
            return False
        if not isinstance(value, str):
            self.add("WRONG_TYPE", f"{field} must be a string")
            return False
        return True

    def integer(self, value, field: str, required: bool = True) -> bool:
        if value is None:
            if required:
                self.add("MISSING_REQUIRED", f"{field} is required")
            return False
        if isinstance(value, bool) or not isinstance(value, int):
            self.add("WRONG_TYPE", f"{field} must be an integer")
            return False
        return True

    def timestamp(self, value, field: str, required: bool = True):
        if not self.string(value, field, required):
            return None
        try:
            return parse_timestamp(value)
        except ValueError:
            self.add("BAD_TIMESTAMP", f"{field} is not an RFC3339 UTC timestamp")
            return None

    def vocab(self, vocab_name: str, value, field: str,
              required: bool = True) -> None:
        if not self.string(value, field, required):
            return
        reg = self.registry
        if reg.is_open(vocab_name):
            return
        try:
            vocab_mod.resolve_vocab_term(reg, vocab_name, value)
        except AmbiguousTermError as exc:
            listing = ", ".join(str(t) for t in exc.candidates)
            self.add("AMBIGUOUS_VOCAB_TERM", f"{field} {value!r}: {listing}")
        except UnknownTermError:
            self.add("UNKNOWN_VOCAB_TERM",
                     f"{field} {value!r} not in {vocab_name}")

    def common_meta(self, common, expect_timestamps: bool) -> None:
        created = self.timestamp(common.created, "created",
                                 required=expect_timestamps)
        modified = self.timestamp(common.modified, "modified",
                                  required=expect_timestamps)
        if created is not None and modified is not None and modified < created:
            self.add("TIMESTAMP_ORDER",
                     f"modified {common.modified} precedes created {common.created}")
        conf = common.confidence
        if conf is not None and (isinstance(conf, bool)
                                 or not isinstance(conf, int)
                                 or not 0 <= conf <= 100):
            self.add("CONFIDENCE_RANGE", f"confidence {conf!r} outside 0..100")

    def id_shape(self, object_id, expected_type: str) -> None:
        if not is_stix_id(object_id):
            self.add("BAD_ID_GRAMMAR", f"id {object_id!r} fails the grammar")
            return
        if id_type(object_id) != expected_type:
            self.add("ID_TYPE_MISMATCH",
                     f"id prefix {id_type(object_id)!r} != type {expected_type!r}")

    def ref_shape(self, value, field: str) -> None:
        if value is not None and not is_stix_id(value):
            self.add("BAD_ID_GRAMMAR", f"{field} {value!r} fails the grammar")

    def free_text_ambiguity(self, value, field: str) -> None:
        if not isinstance(value, str) or not value:
            return
        lowered = value.lower()
        for vocab_name in self.registry.names():
            for surface in self.registry.ambiguous_surfaces(vocab_name):
                if re.search(rf"\b{re.escape(surface)}\b", lowered):
                    self.add("AMBIGUOUS_TERM_TEXT",
                             f"{field} mentions ambiguous term {surface!r} "
                             f"({vocab_name})")


def _check_threat_actor(obj: ThreatActor, c: _Checker) -> None:
    if c.string(obj.name, "name") and not obj.name:
        c.add("EMPTY_NAME", "name must be non-empty")
    c.vocab(vocab_mod.RESOURCE_LEVEL_VOCAB, obj.capacity, "capacity")
    if c.integer(obj.yoe, "yoe") and obj.yoe < 0:
        c.add("NEGATIVE_YOE", f"yoe {obj.yoe} is negative")
    c.string(obj.objective, "objective")
    c.string(obj.mitre_id, "mitre_id", required=False)
    c.free_text_ambiguity(obj.objective, "objective")
    if obj.apt is not None:
        c.string(obj.apt.affiliation, "apt.affiliation")
        c.string(obj.apt.support_type, "apt.support_type")
        if c.integer(obj.apt.human_resources, "apt.human_resources") \
                and obj.apt.human_resources < 0:
            c.add("NEGATIVE_COUNT", "apt.human_resources is negative")


def _check_infrastructure(obj: Infrastructure, c: _Checker) -> None:
    c.vocab(vocab_mod.INFRASTRUCTURE_TYPE_VOCAB, obj.infrastructure_type,
            "infrastructure_type")
    if obj.logical is None and obj.physical is None:
        c.add("NO_PROFILE", "neither logical nor physical profile present")
    if obj.logical is not None:
        p = obj.logical
        for i, bot in enumerate(p.mainbots):
            if not isinstance(bot, str):
                c.add("WRONG_TYPE", f"logical.mainbots[{i}] must be a string")
            elif not bot:
                c.add("EMPTY_MAINBOT", f"logical.mainbots[{i}] is empty")
        c.string(p.c2, "logical.c2")
        c.string(p.platform, "logical.platform")
        c.string(p.toolkit, "logical.toolkit")
    if obj.physical is not None:
        if c.string(obj.physical.device, "physical.device") \
                and not obj.physical.device:
            c.add("EMPTY_DEVICE", "physical.device must be non-empty")
        c.string(obj.physical.location, "physical.location")


def _check_memetic(p, c: _Checker) -> None:
    start = c.timestamp(p.start_date, "memetic.start_date")
    if p.end_date is not None:
        end = c.timestamp(p.end_date, "memetic.end_date")
        if start is not None and end is not None and end < start:
            c.add("DATE_ORDER",
                  f"memetic.end_date {p.end_date} precedes start_date "
                  f"{p.start_date}")
    c.string(p.platform, "memetic.platform")
    c.string(p.topic, "memetic.topic")
    c.string(p.mcf, "memetic.mcf")
    c.string(p.scf, "memetic.scf", required=False)
    c.string(p.landing_page, "memetic.landing_page", required=False)
    c.vocab(vocab_mod.ENGAGEMENT_LEVEL_VOCAB, p.engagement_level,
            "memetic.engagement_level")
    if c.integer(p.impressions, "memetic.impressions") and p.impressions < 0:
        c.add("NEGATIVE_COUNT", "memetic.impressions is negative")
    if c.integer(p.impressions_pro, "memetic.impressions_pro", required=False) \
            and p.impressions_pro < 0:
        c.add("NEGATIVE_COUNT", "memetic.impressions_pro is negative")
    c.free_text_ambiguity(p.topic, "memetic.topic")


def _check_transgressive(p, c: _Checker) -> None:
    c.timestamp(p.first_observation, "transgressive.first_observation")
    c.string(p.intrusion_type, "transgressive.intrusion_type")
    if c.string(p.ckc_stage, "transgressive.ckc_stage") \
            and p.ckc_stage not in KILL_CHAIN_STAGES:
        c.add("BAD_KILL_CHAIN_STAGE",
              f"transgressive.ckc_stage {p.ckc_stage!r} is not a kill-chain stage")
    c.vocab(vocab_mod.MALWARE_TYPE_VOCAB, p.malware_type,
            "transgressive.malware_type", required=False)
    for i, entry in enumerate(p.ioc):
        if not isinstance(entry, str):
            c.add("WRONG_TYPE", f"transgressive.ioc[{i}] must be a string")


def _check_msa(obj: Msa, c: _Checker) -> None:
    class_ok = False
    if c.string(obj.msa_class, "msa_class"):
        if obj.msa_class not in MSA_CLASSES:
            c.add("BAD_MSA_CLASS", f"msa_class {obj.msa_class!r} unknown")
        else:
            class_ok = True
    if class_ok:
        if (obj.msa_class == "memetic") != (obj.memetic is not None) or \
                (obj.msa_class == "transgressive") != (obj.transgressive is not None):
            c.add("CLASS_PROFILE_MISMATCH",
                  f"class {obj.msa_class} with memetic={obj.memetic is not None}, "
                  f"transgressive={obj.transgressive is not None}")
    if c.string(obj.intent, "intent") and not obj.intent:
        c.add("MISSING_REQUIRED", "intent must be non-empty")
    if c.integer(obj.bot_numbers, "bot_numbers") and obj.bot_numbers < 0:
        c.add("NEGATIVE_BOT_NUMBERS", f"bot_numbers {obj.bot_numbers} is negative")
    for role in sorted(obj.bot_roles):
        if role not in BOT_ROLES:
            c.add("BAD_BOT_ROLE", f"bot role {role!r} not in the role vocabulary")
    for ref in obj.technique_refs:
        if not isinstance(ref, str) or not TECHNIQUE_REF_RE.match(ref):
            c.add("BAD_TECHNIQUE_REF", f"technique ref {ref!r} fails the pattern")
    c.string(obj.c2, "c2", required=False)
    c.string(obj.supportive_ai, "supportive_ai", required=False)
    c.free_text_ambiguity(obj.intent, "intent")
    if obj.memetic is not None:
        _check_memetic(obj.memetic, c)
    if obj.transgressive is not None:
        _check_transgressive(obj.transgressive, c)


def _check_target(obj: Target, c: _Checker) -> None:
    if c.string(obj.current, "current") and not obj.current:
        c.add("EMPTY_TARGET", "current must be non-empty")
    for i, entry in enumerate(obj.lateral):
        if not isinstance(entry, str):
            c.add("WRONG_TYPE", f"lateral[{i}] must be a string")


def _check_campaign(obj: CampaignDiamond, c: _Checker) -> None:
    c.ref_shape(obj.actor_ref, "actor_ref")
    c.ref_shape(obj.infra_ref, "infra_ref")
    c.ref_shape(obj.msa_ref, "msa_ref")
    c.ref_shape(obj.target_ref, "target_ref")
    for rid in obj.relationship_ids:
        c.ref_shape(rid, "relationship_ids entry")


def _check_relationship(obj: Relationship, c: _Checker) -> None:
    c.string(obj.relationship_type, "relationship_type")
    if c.required(obj.source_ref, "source_ref"):
        c.ref_shape(obj.source_ref, "source_ref")
    if c.required(obj.target_ref, "target_ref"):
        c.ref_shape(obj.target_ref, "target_ref")


def _check_opinion(obj: OpinionNote, c: _Checker) -> None:
    if not obj.object_refs:
        c.add("NO_REFS", "object_refs must be non-empty")
    for ref in obj.object_refs:
        c.ref_shape(ref, "object_refs entry")
    if c.string(obj.opinion, "opinion") and obj.opinion not in OPINION_VALUES:
        c.add("BAD_OPINION_VALUE",
              f"opinion {obj.opinion!r} outside the five-point scale")
    c.string(obj.explanation, "explanation", required=False)


_RECORD_CHECKS = {
    ThreatActor: _check_threat_actor,
    Infrastructure: _check_infrastructure,
    Msa: _check_msa,
    Target: _check_target,
    CampaignDiamond: _check_campaign,
    Relationship: _check_relationship,
    OpinionNote: _check_opinion,
}


def validate_object(obj: WireObject,
                    registry: Optional[VocabRegistry] = None) -> List[Finding]:
    """All invariant violations of one object; empty list means valid."""
    registry = _registry(registry)
    if isinstance(obj, StixEnvelope):
        c = _Checker(obj.id, registry)
        c.id_shape(obj.id, obj.type)
        created = c.timestamp(obj.created, "created", required=False)
        modified = c.timestamp(obj.modified, "modified", required=False)
        if created is not None and modified is not None and modified < created:
            c.add("TIMESTAMP_ORDER",
                  f"modified {obj.modified} precedes created {obj.created}")
        conf = obj.confidence
        if conf is not None and (isinstance(conf, bool)
                                 or not isinstance(conf, int)
                                 or not 0 <= conf <= 100):
            c.add("CONFIDENCE_RANGE", f"confidence {conf!r} outside 0..100")
        return sort_findings(c.findings)

    c = _Checker(object_id_of(obj), registry)
    c.id_shape(object_id_of(obj), type(obj).TYPE)
    c.common_meta(obj.common, expect_timestamps=True)
    _RECORD_CHECKS[type(obj)](obj, c)
    return sort_findings(c.findings)


# --- bundle-level checks -----------------------------------------------------------

_VERTEX_REFS = (
    ("actor_ref", "threat-actor"),
    ("infra_ref", "infrastructure"),
    ("msa_ref", "msa"),
    ("target_ref", "target"),
)


def validate_bundle(bundle: Union[Bundle, Iterable[WireObject]],
                    registry: Optional[VocabRegistry] = None) -> List[Finding]:
    """Per-object findings plus referential-integrity findings."""
    registry = _registry(registry)
    objects = _objects(bundle)
    findings: List[Finding] = []
    by_id: Dict[str, WireObject] = {}
    seen_pairs = set()
    has_family = False
    has_extension_def = False

    for obj in objects:
        findings.extend(validate_object(obj, registry))
        oid = obj.id if isinstance(obj, StixEnvelope) else object_id_of(obj)
        if isinstance(oid, str):
            by_id.setdefault(oid, obj)
            modified = obj.modified if isinstance(obj, StixEnvelope) \
                else obj.common.modified
            pair = (oid, modified)
            if pair in seen_pairs:
                findings.append(make_finding(
                    "DUPLICATE_ID", oid,
                    f"(id, modified={modified}) appears more than once"))
            seen_pairs.add(pair)
        if isinstance(obj, (ThreatActor, Infrastructure, Msa, Target)):
            has_family = True
        if isinstance(obj, StixEnvelope) and obj.type == "extension-definition" \
                and obj.id == EXTENSION_ID:
            has_extension_def = True

    def dangling(owner_id: str, field: str, ref) -> None:
        if isinstance(ref, str) and is_stix_id(ref) and ref not in by_id:
            findings.append(make_finding(
                "DANGLING_REF", owner_id, f"{field} {ref} is not in the bundle"))

    for obj in objects:
        if isinstance(obj, Relationship):
            dangling(obj.id, "source_ref", obj.source_ref)
            dangling(obj.id, "target_ref", obj.target_ref)
        elif isinstance(obj, OpinionNote):
            for ref in obj.object_refs:
                dangling(obj.id, "object_refs entry", ref)
        elif isinstance(obj, CampaignDiamond):
            for field, expected_type in _VERTEX_REFS:
                ref = getattr(obj, field)
                if ref is None or not is_stix_id(ref):
                    continue
                if ref not in by_id:
                    dangling(obj.campaign_id, field, ref)
                elif _type_of(by_id[ref]) != expected_type:
                    findings.append(make_finding(
                        "TYPE_MISMATCH", obj.campaign_id,
                        f"{field} {ref} points at a "
                        f"{_type_of(by_id[ref])!r} object"))
            for rid in obj.relationship_ids:
                if not is_stix_id(rid):
                    continue
                if rid not in by_id:
                    dangling(obj.campaign_id, "relationship_ids entry", rid)
                elif _type_of(by_id[rid]) != "relationship":
                    findings.append(make_finding(
                        "TYPE_MISMATCH", obj.campaign_id,
                        f"relationship_ids entry {rid} points at a "
                        f"{_type_of(by_id[rid])!r} object"))

    if has_family and not has_extension_def:
        findings.append(make_finding(
            "MISSING_EXTENSION_DEFINITION", None,
            "bundle carries family objects but not the extension-definition"))
    return sort_findings(findings)


# --- label lint --------------------------------------------------------------------

GENERIC_LABELS = frozenset({"suspicious", "malicious"})

# Types whose instances are evidence-bearing enough that absent labels are
# worth an info-level nudge.
_INDICATOR_LIKE = frozenset({"indicator", "msa"})


def _labels_of(obj) -> Optional[list]:
    raw = obj.raw_properties if isinstance(obj, StixEnvelope) \
        else obj.common.raw_properties
    labels = raw.get("labels")
    if isinstance(labels, list) and all(isinstance(x, str) for x in labels):
        return labels
    return None


def lint_labels(bundle: Union[Bundle, Iterable[WireObject]],
                denylist: Optional[Iterable[str]] = None) -> List[Finding]:
    """Label-quality findings: generic labels, low-signal techniques,
    unlabelled indicator-like objects."""
    deny = frozenset(DEFAULT_DENYLIST if denylist is None else denylist)
    findings: List[Finding] = []
    for obj in _objects(bundle):
        oid = obj.id if isinstance(obj, StixEnvelope) else object_id_of(obj)
        labels = _labels_of(obj)
        if labels:
            if set(labels) <= GENERIC_LABELS:
                findings.append(make_finding(
                    "GENERIC_LABEL", oid,
                    f"labels {sorted(set(labels))} carry no analytic signal"))
        elif _type_of(obj) in _INDICATOR_LIKE:
            findings.append(make_finding(
                "UNLABELLED", oid, "no labels on an indicator-like object"))
        if isinstance(obj, Msa):
            for ref in obj.technique_refs:
                if ref in deny:
                    findings.append(make_finding(
                        "LOW_SIGNAL_TECHNIQUE", oid,
                        f"technique {ref} is on the low-signal denylist"))
    return sort_findings(findings)
