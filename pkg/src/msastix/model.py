"""Typed domain objects for the malicious-social-automation diamond model.

Four object families (threat actor, infrastructure, MSA, target) plus the
campaign diamond that relates them, opinion notes for contesting shared
objects, and the relationship records that wire a diamond together.

All records are immutable after construction and carry their envelope
metadata in ``common``; the ``build_*`` constructors are the only supported
way to create valid records by hand. Records decoded off the wire may be
invalid; the validator reports on those instead of raising.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple, Union

from . import vocab as vocab_mod
from .base import StixCommon, fresh_common, is_stix_id, make_id
from .base import canonical_timestamp, parse_timestamp
from .errors import (
    BadBotRoleError,
    BadIdGrammarError,
    BadKillChainStageError,
    BadMsaClassError,
    BadOpinionValueError,
    BadTechniqueRefError,
    BadTimestampError,
    ClassProfileMismatchError,
    ConfidenceOutOfRangeError,
    DateOrderError,
    EmptyDiamondError,
    EmptyNameError,
    EmptyTargetError,
    NegativeBotNumbersError,
    NegativeCountError,
    NegativeYoeError,
    NoProfileError,
    NoRefsError,
    UnknownTermError,
)

MSA_CLASSES = ("memetic", "transgressive", "supportive")

BOT_ROLES = ("generator", "short-term-supporter", "long-term-supporter")

KILL_CHAIN_STAGES = (
    "reconnaissance",
    "weaponization",
    "delivery",
    "exploitation",
    "installation",
    "command-and-control",
    "actions-on-objectives",
)

OPINION_VALUES = (
    "strongly-disagree", "disagree", "neutral", "agree", "strongly-agree",
)

# Diamond vertex name -> analysis role.
DIAMOND_ROLES = {
    "actor": "Attacker",
    "target": "Victim",
    "infrastructure": "Medium",
    "msa": "Capability",
}

REL_ATTRIBUTED_TO = "attributed-to"
REL_USES = "uses"
REL_TARGETS = "targets"

TECHNIQUE_REF_RE = re.compile(r"^(T\d+(\.\d+)?|C\d+)$")


# --- records ------------------------------------------------------------------


@dataclass(frozen=True)
class AptProfile:
    """State-affiliation details for an advanced persistent actor."""

    affiliation: str
    support_type: str
    human_resources: int  # offensive organisation / trollfarm size


@dataclass(frozen=True)
class ThreatActor:
    TYPE = "threat-actor"

    id: str
    name: str
    capacity: str  # attack-resource-level vocabulary member
    yoe: int  # years active
    objective: str
    mitre_id: Optional[str] = None
    apt: Optional[AptProfile] = None
    common: StixCommon = field(default_factory=StixCommon)


@dataclass(frozen=True)
class LogicalInfra:
    mainbots: Tuple[str, ...]  # ids of key automated accounts
    c2: str
    platform: str
    toolkit: str


@dataclass(frozen=True)
class PhysicalInfra:
    device: str
    location: str


@dataclass(frozen=True)
class Infrastructure:
    TYPE = "infrastructure"

    id: str
    infrastructure_type: str  # qualified term, e.g. "botnet--narrative"
    logical: Optional[LogicalInfra] = None
    physical: Optional[PhysicalInfra] = None
    common: StixCommon = field(default_factory=StixCommon)


@dataclass(frozen=True)
class MemeticProfile:
    """Message-spread campaign details."""

    start_date: str
    platform: str
    topic: str
    keywords: Tuple[str, ...]
    mcf: str  # main creative format
    engagement_level: str
    impressions: int  # estimated reach at record creation time
    end_date: Optional[str] = None  # absent while ongoing
    scf: Optional[str] = None  # secondary creative format
    landing_page: Optional[str] = None
    impressions_pro: Optional[int] = None  # projected reach, stored only


@dataclass(frozen=True)
class TransgressiveProfile:
    """Security-assumption-violation details."""

    first_observation: str
    intrusion_type: str
    ckc_stage: str  # one of KILL_CHAIN_STAGES
    malware_type: Optional[str] = None
    ioc: Tuple[str, ...] = ()  # opaque observable / content identifiers


@dataclass(frozen=True)
class Msa:
    TYPE = "msa"

    id: str
    msa_class: str  # one of MSA_CLASSES
    intent: str
    bot_numbers: int = 0
    bot_roles: frozenset = frozenset()  # subset of BOT_ROLES
    bot_actions: frozenset = frozenset()
    c2: Optional[str] = None
    supportive_ai: Optional[str] = None
    memetic: Optional[MemeticProfile] = None
    transgressive: Optional[TransgressiveProfile] = None
    technique_refs: Tuple[str, ...] = ()
    common: StixCommon = field(default_factory=StixCommon)


@dataclass(frozen=True)
class Target:
    TYPE = "target"

    id: str
    current: str
    lateral: Tuple[str, ...] = ()  # where the attack could jump to
    common: StixCommon = field(default_factory=StixCommon)


@dataclass(frozen=True)
class CampaignDiamond:
    TYPE = "campaign"

    campaign_id: str
    actor_ref: Optional[str] = None
    infra_ref: Optional[str] = None
    msa_ref: Optional[str] = None
    target_ref: Optional[str] = None
    relationship_ids: Tuple[str, ...] = ()
    common: StixCommon = field(default_factory=StixCommon)


@dataclass(frozen=True)
class Relationship:
    TYPE = "relationship"

    id: str
    relationship_type: str
    source_ref: str
    target_ref: str
    common: StixCommon = field(default_factory=StixCommon)


@dataclass(frozen=True)
class OpinionNote:
    TYPE = "opinion"

    id: str
    object_refs: Tuple[str, ...]
    opinion: str  # one of OPINION_VALUES
    explanation: Optional[str] = None
    common: StixCommon = field(default_factory=StixCommon)


MsaRecord = Union[
    ThreatActor, Infrastructure, Msa, Target,
    CampaignDiamond, Relationship, OpinionNote,
]


def object_id_of(obj) -> str:
    """The stix-id of any record (campaigns key on ``campaign_id``)."""
    if isinstance(obj, CampaignDiamond):
        return obj.campaign_id
    return obj.id


# --- construction helpers -------------------------------------------------------


def _common(created, confidence, marking_refs) -> StixCommon:
    if confidence is not None:
        if not isinstance(confidence, int) or not 0 <= confidence <= 100:
            raise ConfidenceOutOfRangeError("(new object)", confidence)
    try:
        return fresh_common(created, confidence, marking_refs)
    except ValueError as exc:
        raise BadTimestampError(str(exc)) from exc


def _canonical_ts(value: str, field_name: str) -> str:
    try:
        return canonical_timestamp(value)
    except ValueError as exc:
        raise BadTimestampError(f"{field_name}: {exc}") from exc


def _registry(registry):
    return registry if registry is not None else vocab_mod.default_registry()


def _check_memetic(profile: MemeticProfile, registry) -> MemeticProfile:
    start = _canonical_ts(profile.start_date, "start_date")
    end = None
    if profile.end_date is not None:
        end = _canonical_ts(profile.end_date, "end_date")
        if parse_timestamp(end) < parse_timestamp(start):
            raise DateOrderError(f"end_date {end} precedes start_date {start}")
    vocab_mod.resolve_vocab_term(
        registry, vocab_mod.ENGAGEMENT_LEVEL_VOCAB, profile.engagement_level)
    impressions = int(profile.impressions)
    if impressions < 0:
        raise NegativeCountError("impressions must be >= 0")
    impressions_pro = profile.impressions_pro
    if impressions_pro is not None:
        impressions_pro = int(impressions_pro)
        if impressions_pro < 0:
            raise NegativeCountError("impressions_pro must be >= 0")
    return replace(
        profile,
        start_date=start,
        end_date=end,
        keywords=tuple(profile.keywords),
        impressions=impressions,
        impressions_pro=impressions_pro,
    )


def _check_transgressive(profile: TransgressiveProfile,
                         registry) -> TransgressiveProfile:
    first = _canonical_ts(profile.first_observation, "first_observation")
    if profile.ckc_stage not in KILL_CHAIN_STAGES:
        raise BadKillChainStageError(
            f"unknown kill-chain stage: {profile.ckc_stage!r}")
    if profile.malware_type is not None:
        reg = _registry(registry)
        if not reg.is_open(vocab_mod.MALWARE_TYPE_VOCAB):
            vocab_mod.resolve_vocab_term(
                reg, vocab_mod.MALWARE_TYPE_VOCAB, profile.malware_type)
    return replace(profile, first_observation=first, ioc=tuple(profile.ioc))


# --- constructors ---------------------------------------------------------------


def build_threat_actor(name: str, capacity: str, yoe: int, objective: str,
                       apt: Optional[AptProfile] = None, *,
                       mitre_id: Optional[str] = None,
                       registry: Optional[vocab_mod.VocabRegistry] = None,
                       confidence: Optional[int] = None,
                       marking_refs=(), created: Optional[str] = None,
                       key: Optional[str] = None) -> ThreatActor:
    """Create a threat-actor record with a freshly generated id.

    ``key`` makes the id deterministic (same key, same id); it is the callers'
    producer-scoped stable name for the actor.
    """
    if not name:
        raise EmptyNameError("threat actor name must be non-empty")
    term = vocab_mod.resolve_vocab_term(
        _registry(registry), vocab_mod.RESOURCE_LEVEL_VOCAB, capacity)
    yoe = int(yoe)
    if yoe < 0:
        raise NegativeYoeError(f"yoe must be >= 0, got {yoe}")
    if apt is not None and int(apt.human_resources) < 0:
        raise NegativeCountError("apt human_resources must be >= 0")
    return ThreatActor(
        id=make_id(ThreatActor.TYPE, key),
        name=name,
        capacity=term.surface,
        yoe=yoe,
        objective=objective,
        mitre_id=mitre_id,
        apt=apt,
        common=_common(created, confidence, marking_refs),
    )


def build_msa(msa_class: str, intent: str, *,
              bot_numbers: int = 0, bot_roles=(), bot_actions=(),
              c2: Optional[str] = None, supportive_ai: Optional[str] = None,
              memetic: Optional[MemeticProfile] = None,
              transgressive: Optional[TransgressiveProfile] = None,
              technique_refs=(),
              registry: Optional[vocab_mod.VocabRegistry] = None,
              confidence: Optional[int] = None,
              marking_refs=(), created: Optional[str] = None,
              key: Optional[str] = None) -> Msa:
    """Create an MSA record; the profile argument must match the class.

    Memetic records carry a memetic profile, transgressive records a
    transgressive profile, supportive records neither.
    """
    if msa_class not in MSA_CLASSES:
        raise BadMsaClassError(f"unknown msa class: {msa_class!r}")
    if (msa_class == "memetic") != (memetic is not None) or \
            (msa_class == "transgressive") != (transgressive is not None):
        raise ClassProfileMismatchError(
            f"{msa_class} record with memetic={memetic is not None}, "
            f"transgressive={transgressive is not None}")
    if not intent:
        raise EmptyNameError("msa intent must be non-empty")
    roles = frozenset(bot_roles)
    bad = roles - set(BOT_ROLES)
    if bad:
        raise BadBotRoleError(f"not in the bot-role vocabulary: {sorted(bad)}")
    bot_numbers = int(bot_numbers)
    if bot_numbers < 0:
        raise NegativeBotNumbersError(f"bot_numbers must be >= 0, got {bot_numbers}")
    refs = tuple(technique_refs)
    for ref in refs:
        if not TECHNIQUE_REF_RE.match(ref):
            raise BadTechniqueRefError(f"bad technique id: {ref!r}")
    reg = _registry(registry)
    if memetic is not None:
        memetic = _check_memetic(memetic, reg)
    if transgressive is not None:
        transgressive = _check_transgressive(transgressive, reg)
    return Msa(
        id=make_id(Msa.TYPE, key),
        msa_class=msa_class,
        intent=intent,
        bot_numbers=bot_numbers,
        bot_roles=roles,
        bot_actions=frozenset(bot_actions),
        c2=c2,
        supportive_ai=supportive_ai,
        memetic=memetic,
        transgressive=transgressive,
        technique_refs=refs,
        common=_common(created, confidence, marking_refs),
    )


def build_infrastructure(infrastructure_type: str,
                         logical: Optional[LogicalInfra] = None,
                         physical: Optional[PhysicalInfra] = None, *,
                         registry: Optional[vocab_mod.VocabRegistry] = None,
                         confidence: Optional[int] = None,
                         marking_refs=(), created: Optional[str] = None,
                         key: Optional[str] = None) -> Infrastructure:
    """Create an infrastructure record with at least one sub-profile.

    ``infrastructure_type`` may embed a namespace qualifier
    (``botnet--narrative``); the stored value is always fully qualified so
    downstream consumers never face an ambiguous term.
    """
    if logical is None and physical is None:
        raise NoProfileError("at least one of logical/physical is required")
    term = vocab_mod.resolve_vocab_term(
        _registry(registry), vocab_mod.INFRASTRUCTURE_TYPE_VOCAB,
        infrastructure_type)
    if logical is not None:
        mainbots = tuple(logical.mainbots)
        if any(not b for b in mainbots):
            raise EmptyNameError("mainbots entries must be non-empty")
        logical = replace(logical, mainbots=mainbots)
    if physical is not None and not physical.device:
        raise EmptyNameError("physical device must be non-empty")
    return Infrastructure(
        id=make_id(Infrastructure.TYPE, key),
        infrastructure_type=term.qualified,
        logical=logical,
        physical=physical,
        common=_common(created, confidence, marking_refs),
    )


def build_target(current: str, lateral=(), *,
                 confidence: Optional[int] = None,
                 marking_refs=(), created: Optional[str] = None,
                 key: Optional[str] = None) -> Target:
    if not current:
        raise EmptyTargetError("target current must be non-empty")
    return Target(
        id=make_id(Target.TYPE, key),
        current=current,
        lateral=tuple(lateral),
        common=_common(created, confidence, marking_refs),
    )


def assemble_campaign(actor: Optional[ThreatActor] = None,
                      infra: Optional[Infrastructure] = None,
                      msa: Optional[Msa] = None,
                      target: Optional[Target] = None, *,
                      confidence: Optional[int] = None,
                      marking_refs=(), created: Optional[str] = None,
                      key: Optional[str] = None,
                      ) -> Tuple[CampaignDiamond, Tuple[Relationship, ...]]:
    """Relate present vertices under one campaign.

    Emits the campaign record plus one relationship per present vertex
    (actor: attributed-to, infrastructure/msa: uses, target: targets); the
    campaign's refs mirror the relationships. Vertex argument order never
    changes the result beyond the generated ids.
    """
    for obj, cls, slot in ((actor, ThreatActor, "actor"),
                           (infra, Infrastructure, "infra"),
                           (msa, Msa, "msa"),
                           (target, Target, "target")):
        if obj is not None and not isinstance(obj, cls):
            raise TypeError(f"{slot} must be a {cls.__name__}, got {type(obj).__name__}")
    if actor is None and infra is None and msa is None and target is None:
        raise EmptyDiamondError("a campaign needs at least one vertex")
    campaign_id = make_id(CampaignDiamond.TYPE, key)
    common = _common(created, confidence, marking_refs)
    relationships = []
    for vertex, obj, rel_type in (
            ("actor", actor, REL_ATTRIBUTED_TO),
            ("infrastructure", infra, REL_USES),
            ("msa", msa, REL_USES),
            ("target", target, REL_TARGETS)):
        if obj is None:
            continue
        rel_key = f"{key}/{vertex}" if key is not None else None
        relationships.append(Relationship(
            id=make_id(Relationship.TYPE, rel_key),
            relationship_type=rel_type,
            source_ref=campaign_id,
            target_ref=obj.id,
            common=StixCommon(created=common.created, modified=common.modified),
        ))
    diamond = CampaignDiamond(
        campaign_id=campaign_id,
        actor_ref=actor.id if actor else None,
        infra_ref=infra.id if infra else None,
        msa_ref=msa.id if msa else None,
        target_ref=target.id if target else None,
        relationship_ids=tuple(r.id for r in relationships),
        common=common,
    )
    return diamond, tuple(relationships)


def attach_opinion(object_refs, opinion: str,
                   explanation: Optional[str] = None, *,
                   confidence: Optional[int] = None,
                   marking_refs=(), created: Optional[str] = None,
                   key: Optional[str] = None) -> OpinionNote:
    """Create an opinion note contesting (or endorsing) shared objects.

    ``object_refs`` accepts records or stix-id strings.
    """
    refs = tuple(object_id_of(r) if not isinstance(r, str) else r
                 for r in object_refs)
    if not refs:
        raise NoRefsError("an opinion must reference at least one object")
    for ref in refs:
        if not is_stix_id(ref):
            raise BadIdGrammarError(ref)
    if opinion not in OPINION_VALUES:
        raise BadOpinionValueError(f"not a five-point opinion value: {opinion!r}")
    return OpinionNote(
        id=make_id(OpinionNote.TYPE, key),
        object_refs=refs,
        opinion=opinion,
        explanation=explanation,
        common=_common(created, confidence, marking_refs),
    )
