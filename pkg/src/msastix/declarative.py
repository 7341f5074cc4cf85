"""Plain-JSON campaign descriptions for the `encode` command.

Analysts never hand-write envelopes: a declarative document names objects by
local keys and mirrors the model field names; ids, timestamps, markings, and
relationship wiring are derived here. Encoding is fully deterministic, so
the same document always produces byte-identical bundles: ids are
name-based digests of ``producer/key`` (or of the entry content when no key
is given) and timestamps default to a fixed epoch unless supplied.

Document shape::

    {
      "producer": "cert-example",
      "created": "2024-05-01T00:00:00.000Z",        # optional default
      "include_extension_definition": true,          # default true
      "threat_actors":   [{"key": ..., "name": ..., ...}],
      "infrastructures": [{"key": ..., "infrastructure_type": ..., ...}],
      "msas":            [{"key": ..., "msa_class": ..., ...}],
      "targets":         [{"key": ..., "current": ..., ...}],
      "campaigns":       [{"key": ..., "actor": "<key>", ...}],
      "opinions":        [{"refs": ["<key-or-id>"], "opinion": ..., ...}]
    }

Each object entry may carry ``confidence`` (0..100) and ``tlp``
(clear/green/amber/red, emitted as the matching marking ref).
"""

from __future__ import annotations

import json
from dataclasses import replace
from typing import Dict, List, Optional

from .codec import canonical_json, extension_definition
from .model import (
    AptProfile,
    LogicalInfra,
    MemeticProfile,
    PhysicalInfra,
    TransgressiveProfile,
    assemble_campaign,
    attach_opinion,
    build_infrastructure,
    build_msa,
    build_target,
    build_threat_actor,
    object_id_of,
)
from .taxii.store import TLP_MARKING_IDS
from .vocab import VocabRegistry

DEFAULT_CREATED = "2024-01-01T00:00:00.000Z"

_DOC_KEYS = {
    "producer", "created", "include_extension_definition",
    "threat_actors", "infrastructures", "msas", "targets",
    "campaigns", "opinions",
}

_META_KEYS = {"key", "confidence", "tlp", "created", "labels"}

_PROFILE_FIELDS = {
    "apt": ("affiliation", "support_type", "human_resources"),
    "logical": ("mainbots", "c2", "platform", "toolkit"),
    "physical": ("device", "location"),
    "memetic": ("start_date", "end_date", "platform", "topic", "keywords",
                "mcf", "scf", "landing_page", "engagement_level",
                "impressions", "impressions_pro"),
    "transgressive": ("first_observation", "intrusion_type", "ckc_stage",
                      "malware_type", "ioc"),
}

_PROFILE_TYPES = {
    "apt": AptProfile,
    "logical": LogicalInfra,
    "physical": PhysicalInfra,
    "memetic": MemeticProfile,
    "transgressive": TransgressiveProfile,
}


def _reject_unknown(entry: dict, allowed, where: str) -> None:
    unknown = set(entry) - set(allowed) - _META_KEYS
    if unknown:
        raise ValueError(f"{where}: unknown field(s) {sorted(unknown)}")


def _profile(entry: dict, name: str, where: str):
    raw = entry.get(name)
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ValueError(f"{where}.{name} must be an object")
    fields = _PROFILE_FIELDS[name]
    unknown = set(raw) - set(fields)
    if unknown:
        raise ValueError(f"{where}.{name}: unknown field(s) {sorted(unknown)}")
    kwargs = {k: raw[k] for k in fields if k in raw}
    for list_field in ("mainbots", "keywords", "ioc"):
        if list_field in kwargs:
            kwargs[list_field] = tuple(kwargs[list_field])
    try:
        return _PROFILE_TYPES[name](**kwargs)
    except TypeError as exc:
        raise ValueError(f"{where}.{name}: {exc}") from exc


class _Builder:
    def __init__(self, doc: dict, registry: Optional[VocabRegistry]):
        if not isinstance(doc, dict):
            raise ValueError("declarative document must be a JSON object")
        unknown = set(doc) - _DOC_KEYS
        if unknown:
            raise ValueError(f"unknown document field(s): {sorted(unknown)}")
        self.doc = doc
        self.registry = registry
        self.producer = doc.get("producer", "local")
        self.default_created = doc.get("created", DEFAULT_CREATED)
        self.by_key: Dict[str, object] = {}

    def meta(self, entry: dict, section: str, index: int) -> dict:
        where = f"{section}[{index}]"
        key = entry.get("key")
        if key is None:
            # content-addressed fallback keeps ids deterministic without a key
            key = f"digest:{canonical_json(entry)}"
        tlp = entry.get("tlp")
        marking_refs = ()
        if tlp is not None:
            if tlp not in TLP_MARKING_IDS:
                raise ValueError(f"{where}: unknown tlp level {tlp!r}")
            marking_refs = (TLP_MARKING_IDS[tlp],)
        return {
            "key": f"{self.producer}/{key}",
            "local_key": entry.get("key"),
            "confidence": entry.get("confidence"),
            "marking_refs": marking_refs,
            "created": entry.get("created", self.default_created),
            "where": where,
        }

    def register(self, meta: dict, obj) -> None:
        if meta["local_key"] is not None:
            if meta["local_key"] in self.by_key:
                raise ValueError(f"duplicate key {meta['local_key']!r}")
            self.by_key[meta["local_key"]] = obj

    def lookup(self, section_key: Optional[str], where: str):
        if section_key is None:
            return None
        if section_key not in self.by_key:
            raise ValueError(f"{where}: unknown object key {section_key!r}")
        return self.by_key[section_key]


def build_objects(doc: dict,
                  registry: Optional[VocabRegistry] = None) -> List[object]:
    """Turn one declarative document into model records.

    The extension-definition object leads unless the document opts out.
    Raises ValueError on malformed documents and the model's own errors on
    invalid field values.
    """
    b = _Builder(doc, registry)
    objects: List[object] = []
    if doc.get("include_extension_definition", True):
        objects.append(extension_definition())

    for i, entry in enumerate(doc.get("threat_actors", ())):
        meta = b.meta(entry, "threat_actors", i)
        _reject_unknown(entry, ("name", "capacity", "yoe", "objective",
                                "mitre_id", "apt"), meta["where"])
        actor = build_threat_actor(
            entry.get("name"), entry.get("capacity"), entry.get("yoe", 0),
            entry.get("objective", ""),
            apt=_profile(entry, "apt", meta["where"]),
            mitre_id=entry.get("mitre_id"),
            registry=registry,
            confidence=meta["confidence"], marking_refs=meta["marking_refs"],
            created=meta["created"], key=meta["key"])
        actor = _with_labels(actor, entry)
        b.register(meta, actor)
        objects.append(actor)

    for i, entry in enumerate(doc.get("infrastructures", ())):
        meta = b.meta(entry, "infrastructures", i)
        _reject_unknown(entry, ("infrastructure_type", "logical", "physical"),
                        meta["where"])
        infra = build_infrastructure(
            entry.get("infrastructure_type"),
            logical=_profile(entry, "logical", meta["where"]),
            physical=_profile(entry, "physical", meta["where"]),
            registry=registry,
            confidence=meta["confidence"], marking_refs=meta["marking_refs"],
            created=meta["created"], key=meta["key"])
        infra = _with_labels(infra, entry)
        b.register(meta, infra)
        objects.append(infra)

    for i, entry in enumerate(doc.get("msas", ())):
        meta = b.meta(entry, "msas", i)
        _reject_unknown(entry, ("msa_class", "intent", "bot_numbers",
                                "bot_roles", "bot_actions", "c2",
                                "supportive_ai", "memetic", "transgressive",
                                "technique_refs"), meta["where"])
        msa = build_msa(
            entry.get("msa_class"), entry.get("intent"),
            bot_numbers=entry.get("bot_numbers", 0),
            bot_roles=entry.get("bot_roles", ()),
            bot_actions=entry.get("bot_actions", ()),
            c2=entry.get("c2"),
            supportive_ai=entry.get("supportive_ai"),
            memetic=_profile(entry, "memetic", meta["where"]),
            transgressive=_profile(entry, "transgressive", meta["where"]),
            technique_refs=entry.get("technique_refs", ()),
            registry=registry,
            confidence=meta["confidence"], marking_refs=meta["marking_refs"],
            created=meta["created"], key=meta["key"])
        msa = _with_labels(msa, entry)
        b.register(meta, msa)
        objects.append(msa)

    for i, entry in enumerate(doc.get("targets", ())):
        meta = b.meta(entry, "targets", i)
        _reject_unknown(entry, ("current", "lateral"), meta["where"])
        target = build_target(
            entry.get("current"), entry.get("lateral", ()),
            confidence=meta["confidence"], marking_refs=meta["marking_refs"],
            created=meta["created"], key=meta["key"])
        target = _with_labels(target, entry)
        b.register(meta, target)
        objects.append(target)

    for i, entry in enumerate(doc.get("campaigns", ())):
        meta = b.meta(entry, "campaigns", i)
        _reject_unknown(entry, ("actor", "infrastructure", "msa", "target"),
                        meta["where"])
        diamond, relationships = assemble_campaign(
            actor=b.lookup(entry.get("actor"), meta["where"]),
            infra=b.lookup(entry.get("infrastructure"), meta["where"]),
            msa=b.lookup(entry.get("msa"), meta["where"]),
            target=b.lookup(entry.get("target"), meta["where"]),
            confidence=meta["confidence"], marking_refs=meta["marking_refs"],
            created=meta["created"], key=meta["key"])
        b.register(meta, diamond)
        objects.append(diamond)
        objects.extend(relationships)

    for i, entry in enumerate(doc.get("opinions", ())):
        meta = b.meta(entry, "opinions", i)
        _reject_unknown(entry, ("refs", "opinion", "explanation"),
                        meta["where"])
        refs = []
        for ref in entry.get("refs", ()):
            obj = b.by_key.get(ref)
            refs.append(object_id_of(obj) if obj is not None else ref)
        note = attach_opinion(
            refs, entry.get("opinion"), entry.get("explanation"),
            confidence=meta["confidence"], marking_refs=meta["marking_refs"],
            created=meta["created"], key=meta["key"])
        b.register(meta, note)
        objects.append(note)

    return objects


def _with_labels(obj, entry: dict):
    labels = entry.get("labels")
    if not labels:
        return obj
    common = replace(obj.common,
                     raw_properties={**obj.common.raw_properties,
                                     "labels": list(labels)})
    return replace(obj, common=common)


def load_document(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
