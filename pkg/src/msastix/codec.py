"""Bit-exact STIX 2.1 JSON codec for the MSA object families.

Canonical form: lexicographically sorted keys, compact separators, UTF-8,
millisecond ``...Z`` timestamps. Byte equality of canonical output is a
usable test oracle, so every encoding choice here is deterministic.

The four family objects carry their properties inside the extension map
keyed by this project's extension-definition id (``extension_type``
"new-sdo"); campaign diamond refs ride the same map as a property
extension. Opinions and relationships are plain core objects.

Decoding is tolerant by default: unknown object types come back as opaque
envelopes, unknown properties are preserved and warned about, and only hard
invariant violations (id grammar, confidence range) raise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace as dc_replace
from typing import Any, Dict, List, Optional, Tuple, Union

from .base import (
    SPEC_VERSION,
    StixCommon,
    canonical_timestamp,
    is_stix_id,
    id_type,
    make_id,
)
from .errors import (
    BadIdGrammarError,
    ConfidenceOutOfRangeError,
    InvalidObjectError,
    MalformedJsonError,
)
from .model import (
    AptProfile,
    CampaignDiamond,
    Infrastructure,
    LogicalInfra,
    MemeticProfile,
    Msa,
    OpinionNote,
    PhysicalInfra,
    Relationship,
    Target,
    ThreatActor,
    TransgressiveProfile,
    object_id_of,
)

EXTENSION_NAME = "msa-extension"
EXTENSION_VERSION = "1.0"
EXTENSION_ID = make_id(
    "extension-definition", f"{EXTENSION_NAME}/{EXTENSION_VERSION}")
_EXTENSION_CREATED = "2024-01-01T00:00:00.000Z"

# extension_type value per wire type
_EXT_TYPE_NEW_SDO = "new-sdo"
_EXT_TYPE_PROPERTY = "property-extension"

# Common STIX properties we do not model but pass through without warning.
_COMMON_PASSTHROUGH = {
    "labels", "name", "description", "created_by_ref",
    "external_references", "revoked", "lang", "granular_markings",
}
_TYPE_PASSTHROUGH = {
    "extension-definition": {"version", "extension_types",
                             "extension_properties", "schema"},
    "campaign": {"aliases", "first_seen", "last_seen", "objective"},
    "relationship": {"start_time", "stop_time"},
    "opinion": {"authors"},
}

_ENVELOPE_KEYS = {"type", "id", "spec_version", "created", "modified",
                  "confidence", "object_marking_refs", "extensions"}


@dataclass(frozen=True)
class DecodeWarning:
    """Non-fatal decode observation (foreign type, unknown property)."""

    code: str
    object_id: Optional[str]
    message: str


@dataclass(frozen=True)
class StixEnvelope:
    """Generic wrapper for objects the model does not type.

    ``raw_properties`` keeps every property beyond the envelope basics;
    ``extensions`` keeps whole extension maps untouched.
    """

    type: str
    id: str
    spec_version: str = SPEC_VERSION
    created: Optional[str] = None
    modified: Optional[str] = None
    confidence: Optional[int] = None
    object_marking_refs: Tuple[str, ...] = ()
    extensions: Dict[str, Any] = field(default_factory=dict)
    raw_properties: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Bundle:
    id: str
    objects: tuple = ()


WireObject = Union[
    ThreatActor, Infrastructure, Msa, Target,
    CampaignDiamond, Relationship, OpinionNote, StixEnvelope,
]


def canonical_json(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False)


def _put(d: dict, key: str, value) -> None:
    """Add a property unless it is absent or an empty collection."""
    if value is None:
        return
    if isinstance(value, (list, tuple, set, frozenset, dict)) and not value:
        return
    d[key] = value


# --- record -> wire -------------------------------------------------------------


def _apt_to_dict(apt: AptProfile) -> dict:
    return {"affiliation": apt.affiliation, "support_type": apt.support_type,
            "human_resources": apt.human_resources}


def _logical_to_dict(p: LogicalInfra) -> dict:
    d: dict = {"c2": p.c2, "platform": p.platform, "toolkit": p.toolkit}
    _put(d, "mainbots", list(p.mainbots))
    return d


def _physical_to_dict(p: PhysicalInfra) -> dict:
    return {"device": p.device, "location": p.location}


def _memetic_to_dict(p: MemeticProfile) -> dict:
    d: dict = {}
    _put(d, "start_date", p.start_date)
    _put(d, "end_date", p.end_date)
    _put(d, "platform", p.platform)
    _put(d, "topic", p.topic)
    _put(d, "keywords", list(p.keywords))
    _put(d, "mcf", p.mcf)
    _put(d, "scf", p.scf)
    _put(d, "landing_page", p.landing_page)
    _put(d, "engagement_level", p.engagement_level)
    _put(d, "impressions", p.impressions)
    _put(d, "impressions_pro", p.impressions_pro)
    return d


def _transgressive_to_dict(p: TransgressiveProfile) -> dict:
    d: dict = {}
    _put(d, "first_observation", p.first_observation)
    _put(d, "intrusion_type", p.intrusion_type)
    _put(d, "malware_type", p.malware_type)
    _put(d, "ioc", list(p.ioc))
    _put(d, "ckc_stage", p.ckc_stage)
    return d


def _ext_properties(obj) -> Optional[dict]:
    """The family-specific properties that live in the extension map."""
    d: dict = {}
    if isinstance(obj, ThreatActor):
        _put(d, "name", obj.name)
        _put(d, "capacity", obj.capacity)
        _put(d, "yoe", obj.yoe)
        _put(d, "objective", obj.objective)
        _put(d, "mitre_id", obj.mitre_id)
        if obj.apt is not None:
            d["apt"] = _apt_to_dict(obj.apt)
    elif isinstance(obj, Infrastructure):
        _put(d, "infrastructure_type", obj.infrastructure_type)
        if obj.logical is not None:
            d["logical"] = _logical_to_dict(obj.logical)
        if obj.physical is not None:
            d["physical"] = _physical_to_dict(obj.physical)
    elif isinstance(obj, Msa):
        _put(d, "msa_class", obj.msa_class)
        _put(d, "intent", obj.intent)
        _put(d, "bot_numbers", obj.bot_numbers)
        _put(d, "bot_roles", sorted(obj.bot_roles))
        _put(d, "bot_actions", sorted(obj.bot_actions))
        _put(d, "c2", obj.c2)
        _put(d, "supportive_ai", obj.supportive_ai)
        if obj.memetic is not None:
            d["memetic"] = _memetic_to_dict(obj.memetic)
        if obj.transgressive is not None:
            d["transgressive"] = _transgressive_to_dict(obj.transgressive)
        _put(d, "technique_refs", list(obj.technique_refs))
    elif isinstance(obj, Target):
        _put(d, "current", obj.current)
        _put(d, "lateral", list(obj.lateral))
    elif isinstance(obj, CampaignDiamond):
        _put(d, "actor_ref", obj.actor_ref)
        _put(d, "infra_ref", obj.infra_ref)
        _put(d, "msa_ref", obj.msa_ref)
        _put(d, "target_ref", obj.target_ref)
        _put(d, "relationship_ids", list(obj.relationship_ids))
    else:
        return None
    return d


def _merge_extension(extras: dict, modeled: dict, ext_type: str) -> dict:
    """Leftover decoded keys merge back under the modeled properties."""
    merged: dict = {"extension_type": ext_type}
    for key, value in extras.items():
        if key in modeled and isinstance(value, dict) \
                and isinstance(modeled[key], dict):
            merged[key] = {**value, **modeled[key]}
        else:
            merged[key] = value
    for key, value in modeled.items():
        if key not in merged or not (
                isinstance(value, dict) and isinstance(merged[key], dict)):
            merged[key] = value
    return merged


def to_wire_dict(obj: WireObject) -> dict:
    """The canonical JSON-ready dict for one record or envelope."""
    if isinstance(obj, StixEnvelope):
        d = dict(obj.raw_properties)
        d["type"] = obj.type
        d["id"] = obj.id
        d["spec_version"] = obj.spec_version
        _put(d, "created", obj.created)
        _put(d, "modified", obj.modified)
        _put(d, "confidence", obj.confidence)
        _put(d, "object_marking_refs", list(obj.object_marking_refs))
        _put(d, "extensions", obj.extensions)
        return d

    common: StixCommon = obj.common
    d = dict(common.raw_properties)
    d["type"] = type(obj).TYPE
    d["id"] = object_id_of(obj)
    d["spec_version"] = SPEC_VERSION
    _put(d, "created", common.created)
    _put(d, "modified", common.modified)
    _put(d, "confidence", common.confidence)
    _put(d, "object_marking_refs", list(common.object_marking_refs))

    if isinstance(obj, Relationship):
        d["relationship_type"] = obj.relationship_type
        d["source_ref"] = obj.source_ref
        d["target_ref"] = obj.target_ref
        _put(d, "extensions", dict(common.foreign_extensions))
    elif isinstance(obj, OpinionNote):
        d["object_refs"] = list(obj.object_refs)
        d["opinion"] = obj.opinion
        _put(d, "explanation", obj.explanation)
        _put(d, "extensions", dict(common.foreign_extensions))
    else:
        modeled = _ext_properties(obj)
        ext_type = _EXT_TYPE_PROPERTY if isinstance(obj, CampaignDiamond) \
            else _EXT_TYPE_NEW_SDO
        extensions = dict(common.foreign_extensions)
        if modeled or common.extension_extras:
            extensions[EXTENSION_ID] = _merge_extension(
                dict(common.extension_extras), modeled or {}, ext_type)
        _put(d, "extensions", extensions)
    return d


def _check_encodable(d: dict, details: str) -> None:
    if not is_stix_id(d.get("id")):
        raise InvalidObjectError(f"{details}: bad id {d.get('id')!r}")
    conf = d.get("confidence")
    if conf is not None and (isinstance(conf, bool) or not isinstance(conf, int)
                             or not 0 <= conf <= 100):
        raise InvalidObjectError(f"{details}: confidence {conf!r} out of range")
    created, modified = d.get("created"), d.get("modified")
    if created is not None and modified is not None and modified < created:
        raise InvalidObjectError(f"{details}: modified precedes created")


def encode_bundle(objects) -> str:
    """Serialize records/envelopes (or a Bundle) to canonical bundle JSON.

    The bundle id is a name-based digest of the serialized objects, so the
    same object set always encodes to the same bytes.
    """
    if isinstance(objects, Bundle):
        bundle_id = objects.id
        objects = objects.objects
    else:
        bundle_id = None
    dicts = []
    seen = set()
    for obj in objects:
        d = to_wire_dict(obj)
        _check_encodable(d, f"object {d.get('id')!r}")
        pair = (d["id"], d.get("modified"))
        if pair in seen:
            raise InvalidObjectError(f"duplicate (id, modified) pair: {pair}")
        seen.add(pair)
        dicts.append(d)
    objects_json = canonical_json(dicts)
    if bundle_id is None:
        bundle_id = make_id("bundle", objects_json)
    return ('{"id":"%s","objects":%s,"type":"bundle"}'
            % (bundle_id, objects_json))


def make_bundle(objects, bundle_id: Optional[str] = None) -> Bundle:
    if bundle_id is None:
        bundle_id = make_id(
            "bundle", canonical_json([to_wire_dict(o) for o in objects]))
    return Bundle(id=bundle_id, objects=tuple(objects))


# --- wire -> record -------------------------------------------------------------


def _norm_ts(value):
    """Normalize a parseable timestamp; leave anything else for the validator."""
    if isinstance(value, str):
        try:
            return canonical_timestamp(value)
        except ValueError:
            return value
    return value


def _take(src: dict, key: str, default=None):
    return src.pop(key, default)


def _tuple_of(value) -> tuple:
    if isinstance(value, list):
        return tuple(value)
    return () if value is None else (value,)


def _apt_from(src, warn) -> Optional[AptProfile]:
    if src is None:
        return None
    src = dict(src)
    apt = AptProfile(
        affiliation=_take(src, "affiliation"),
        support_type=_take(src, "support_type"),
        human_resources=_take(src, "human_resources"),
    )
    warn("apt", src)
    return apt


def _logical_from(src, warn) -> Optional[LogicalInfra]:
    if src is None:
        return None
    src = dict(src)
    p = LogicalInfra(
        mainbots=_tuple_of(_take(src, "mainbots", [])),
        c2=_take(src, "c2"),
        platform=_take(src, "platform"),
        toolkit=_take(src, "toolkit"),
    )
    warn("logical", src)
    return p


def _physical_from(src, warn) -> Optional[PhysicalInfra]:
    if src is None:
        return None
    src = dict(src)
    p = PhysicalInfra(device=_take(src, "device"),
                      location=_take(src, "location"))
    warn("physical", src)
    return p


def _memetic_from(src, warn) -> Optional[MemeticProfile]:
    if src is None:
        return None
    src = dict(src)
    p = MemeticProfile(
        start_date=_norm_ts(_take(src, "start_date")),
        end_date=_norm_ts(_take(src, "end_date")),
        platform=_take(src, "platform"),
        topic=_take(src, "topic"),
        keywords=_tuple_of(_take(src, "keywords", [])),
        mcf=_take(src, "mcf"),
        scf=_take(src, "scf"),
        landing_page=_take(src, "landing_page"),
        engagement_level=_take(src, "engagement_level"),
        impressions=_take(src, "impressions"),
        impressions_pro=_take(src, "impressions_pro"),
    )
    warn("memetic", src)
    return p


def _transgressive_from(src, warn) -> Optional[TransgressiveProfile]:
    if src is None:
        return None
    src = dict(src)
    p = TransgressiveProfile(
        first_observation=_norm_ts(_take(src, "first_observation")),
        intrusion_type=_take(src, "intrusion_type"),
        malware_type=_take(src, "malware_type"),
        ioc=_tuple_of(_take(src, "ioc", [])),
        ckc_stage=_take(src, "ckc_stage"),
    )
    warn("transgressive", src)
    return p


def _decode_confidence(data: dict, object_id: str) -> Optional[int]:
    conf = data.get("confidence")
    if conf is None:
        return None
    if isinstance(conf, bool) or not isinstance(conf, int) \
            or not 0 <= conf <= 100:
        raise ConfidenceOutOfRangeError(object_id, conf)
    return conf


def decode_object(data: dict) -> Tuple[WireObject, List[DecodeWarning]]:
    """Decode one wire dict to a typed record or opaque envelope.

    Raises BadIdGrammarError / ConfidenceOutOfRangeError on hard invariant
    violations; everything else is preserved and reported as warnings.
    """
    if not isinstance(data, dict):
        raise MalformedJsonError(f"object is not a JSON object: {data!r}")
    data = dict(data)
    object_id = data.get("id")
    if not is_stix_id(object_id):
        raise BadIdGrammarError(object_id if isinstance(object_id, str)
                                else repr(object_id))
    obj_type = data.get("type")
    if not isinstance(obj_type, str) or not obj_type:
        obj_type = id_type(object_id)
        data["type"] = obj_type
    confidence = _decode_confidence(data, object_id)

    warnings: List[DecodeWarning] = []

    def warn_leftover(where: str, leftover: dict) -> None:
        for key in sorted(leftover):
            warnings.append(DecodeWarning(
                "UNKNOWN_PROPERTY", object_id,
                f"unknown property {where}.{key} preserved"))

    if obj_type not in _DECODERS:
        envelope = _envelope_from(data, confidence)
        if obj_type != "extension-definition":
            warnings.append(DecodeWarning(
                "FOREIGN_TYPE", object_id,
                f"unknown object type {obj_type!r} preserved opaque"))
        return envelope, warnings

    obj = _DECODERS[obj_type](data, confidence, warn_leftover, warnings)
    return obj, warnings


def _envelope_from(data: dict, confidence) -> StixEnvelope:
    raw = {k: v for k, v in data.items() if k not in _ENVELOPE_KEYS}
    return StixEnvelope(
        type=data["type"],
        id=data["id"],
        spec_version=data.get("spec_version", SPEC_VERSION),
        created=data.get("created"),
        modified=data.get("modified"),
        confidence=confidence,
        object_marking_refs=_tuple_of(data.get("object_marking_refs", [])),
        extensions=dict(data.get("extensions", {})),
        raw_properties=raw,
    )


def _split_common(data: dict, confidence, obj_type: str, warnings,
                  modeled_top=(), extract_ext: bool = True
                  ) -> Tuple[StixCommon, dict]:
    """Common metadata plus this project's extension property map."""
    extensions = data.get("extensions") or {}
    if not isinstance(extensions, dict):
        extensions = {}
    if extract_ext:
        ext_props = dict(extensions.get(EXTENSION_ID, {}))
        foreign_ext = {k: v for k, v in extensions.items()
                       if k != EXTENSION_ID}
    else:
        ext_props = {}
        foreign_ext = dict(extensions)

    passthrough = _COMMON_PASSTHROUGH | _TYPE_PASSTHROUGH.get(obj_type, set())
    raw: dict = {}
    for key, value in data.items():
        if key in _ENVELOPE_KEYS or key in modeled_top:
            continue
        raw[key] = value
        if key not in passthrough:
            warnings.append(DecodeWarning(
                "UNKNOWN_PROPERTY", data["id"],
                f"unknown property {key} preserved"))

    expected = _EXT_TYPE_PROPERTY if obj_type == "campaign" else _EXT_TYPE_NEW_SDO
    if ext_props.get("extension_type") == expected and len(ext_props) > 1:
        ext_props.pop("extension_type")

    common = StixCommon(
        created=_norm_ts(data.get("created")),
        modified=_norm_ts(data.get("modified")),
        confidence=confidence,
        object_marking_refs=_tuple_of(data.get("object_marking_refs", [])),
        raw_properties=raw,
        extension_extras={},  # filled by the caller after popping fields
        foreign_extensions=foreign_ext,
    )
    return common, ext_props


def _with_extras(common: StixCommon, ext_props: dict, object_id: str,
                 warnings) -> StixCommon:
    for key in sorted(k for k in ext_props if k != "extension_type"):
        warnings.append(DecodeWarning(
            "UNKNOWN_PROPERTY", object_id,
            f"unknown property extensions.{key} preserved"))
    if not ext_props:
        return common
    return StixCommon(
        created=common.created, modified=common.modified,
        confidence=common.confidence,
        object_marking_refs=common.object_marking_refs,
        raw_properties=common.raw_properties,
        extension_extras=ext_props,
        foreign_extensions=common.foreign_extensions,
    )


def _decode_threat_actor(data, confidence, warn_leftover, warnings):
    common, ext = _split_common(data, confidence, "threat-actor", warnings)
    obj = ThreatActor(
        id=data["id"],
        name=_take(ext, "name"),
        capacity=_take(ext, "capacity"),
        yoe=_take(ext, "yoe"),
        objective=_take(ext, "objective"),
        mitre_id=_take(ext, "mitre_id"),
        apt=_apt_from(_take(ext, "apt"), warn_leftover),
        common=common,
    )
    return _replace_common(obj, _with_extras(common, ext, data["id"], warnings))


def _decode_infrastructure(data, confidence, warn_leftover, warnings):
    common, ext = _split_common(data, confidence, "infrastructure", warnings)
    obj = Infrastructure(
        id=data["id"],
        infrastructure_type=_take(ext, "infrastructure_type"),
        logical=_logical_from(_take(ext, "logical"), warn_leftover),
        physical=_physical_from(_take(ext, "physical"), warn_leftover),
        common=common,
    )
    return _replace_common(obj, _with_extras(common, ext, data["id"], warnings))


def _decode_msa(data, confidence, warn_leftover, warnings):
    common, ext = _split_common(data, confidence, "msa", warnings)
    obj = Msa(
        id=data["id"],
        msa_class=_take(ext, "msa_class"),
        intent=_take(ext, "intent"),
        bot_numbers=_take(ext, "bot_numbers", 0),
        bot_roles=frozenset(_tuple_of(_take(ext, "bot_roles", []))),
        bot_actions=frozenset(_tuple_of(_take(ext, "bot_actions", []))),
        c2=_take(ext, "c2"),
        supportive_ai=_take(ext, "supportive_ai"),
        memetic=_memetic_from(_take(ext, "memetic"), warn_leftover),
        transgressive=_transgressive_from(
            _take(ext, "transgressive"), warn_leftover),
        technique_refs=_tuple_of(_take(ext, "technique_refs", [])),
        common=common,
    )
    return _replace_common(obj, _with_extras(common, ext, data["id"], warnings))


def _decode_target(data, confidence, warn_leftover, warnings):
    common, ext = _split_common(data, confidence, "target", warnings)
    obj = Target(
        id=data["id"],
        current=_take(ext, "current"),
        lateral=_tuple_of(_take(ext, "lateral", [])),
        common=common,
    )
    return _replace_common(obj, _with_extras(common, ext, data["id"], warnings))


def _decode_campaign(data, confidence, warn_leftover, warnings):
    common, ext = _split_common(data, confidence, "campaign", warnings)
    obj = CampaignDiamond(
        campaign_id=data["id"],
        actor_ref=_take(ext, "actor_ref"),
        infra_ref=_take(ext, "infra_ref"),
        msa_ref=_take(ext, "msa_ref"),
        target_ref=_take(ext, "target_ref"),
        relationship_ids=_tuple_of(_take(ext, "relationship_ids", [])),
        common=common,
    )
    return _replace_common(obj, _with_extras(common, ext, data["id"], warnings))


def _decode_relationship(data, confidence, warn_leftover, warnings):
    common, _ = _split_common(
        data, confidence, "relationship", warnings,
        modeled_top=("relationship_type", "source_ref", "target_ref"),
        extract_ext=False)
    return Relationship(
        id=data["id"],
        relationship_type=data.get("relationship_type"),
        source_ref=data.get("source_ref"),
        target_ref=data.get("target_ref"),
        common=common,
    )


def _decode_opinion(data, confidence, warn_leftover, warnings):
    common, _ = _split_common(
        data, confidence, "opinion", warnings,
        modeled_top=("object_refs", "opinion", "explanation"),
        extract_ext=False)
    return OpinionNote(
        id=data["id"],
        object_refs=_tuple_of(data.get("object_refs", [])),
        opinion=data.get("opinion"),
        explanation=data.get("explanation"),
        common=common,
    )


def _replace_common(obj, common):
    if common is obj.common:
        return obj
    return dc_replace(obj, common=common)


_DECODERS = {
    "threat-actor": _decode_threat_actor,
    "infrastructure": _decode_infrastructure,
    "msa": _decode_msa,
    "target": _decode_target,
    "campaign": _decode_campaign,
    "relationship": _decode_relationship,
    "opinion": _decode_opinion,
}


def decode_bundle(json_text: Union[str, bytes], *,
                  strict: bool = False) -> Tuple[List[WireObject],
                                                 List[DecodeWarning]]:
    """Decode bundle JSON to (objects, warnings).

    Known types decode to typed records; unknown types are preserved as
    opaque envelopes with a FOREIGN_TYPE warning. ``strict`` upgrades any
    warning to InvalidObjectError.
    """
    try:
        data = json.loads(json_text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedJsonError(str(exc)) from exc
    if not isinstance(data, dict) or data.get("type") != "bundle":
        raise MalformedJsonError("top-level JSON value is not a bundle")
    bundle_id = data.get("id")
    if bundle_id is not None and not is_stix_id(bundle_id):
        raise BadIdGrammarError(str(bundle_id))
    raw_objects = data.get("objects", [])
    if not isinstance(raw_objects, list):
        raise MalformedJsonError("bundle objects is not a list")

    objects: List[WireObject] = []
    warnings: List[DecodeWarning] = []
    for key in sorted(set(data) - {"type", "id", "objects"}):
        warnings.append(DecodeWarning(
            "UNKNOWN_PROPERTY", bundle_id,
            f"unknown bundle property {key} ignored"))
    for raw in raw_objects:
        obj, obj_warnings = decode_object(raw)
        objects.append(obj)
        warnings.extend(obj_warnings)
    if strict and warnings:
        first = warnings[0]
        raise InvalidObjectError(f"{first.code}: {first.message}")
    return objects, warnings


# --- extension definition --------------------------------------------------------

_EXTENSION_SCHEMA = (
    "New SDO types: msa (msa_class, intent, bot_numbers, bot_roles, "
    "bot_actions, c2, supportive_ai, memetic, transgressive, technique_refs), "
    "target (current, lateral). Extended property schemas: threat-actor "
    "(name, capacity, yoe, objective, mitre_id, apt), infrastructure "
    "(infrastructure_type, logical, physical), campaign (actor_ref, "
    "infra_ref, msa_ref, target_ref, relationship_ids)."
)


def extension_definition() -> StixEnvelope:
    """The project's fixed extension-definition object.

    Deterministic id and timestamps, suitable for prepending to any bundle
    that carries family objects.
    """
    return StixEnvelope(
        type="extension-definition",
        id=EXTENSION_ID,
        created=_EXTENSION_CREATED,
        modified=_EXTENSION_CREATED,
        raw_properties={
            "name": EXTENSION_NAME,
            "version": EXTENSION_VERSION,
            "description": ("Property schemas for describing malicious "
                            "social automation campaigns as a diamond of "
                            "threat actor, infrastructure, MSA, and target."),
            "extension_types": [_EXT_TYPE_NEW_SDO, _EXT_TYPE_PROPERTY],
            "schema": _EXTENSION_SCHEMA,
        },
    )
