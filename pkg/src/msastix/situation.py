"""Diamond-model situation assembly and scoring.

A situation is one campaign's diamond: up to four vertices (actor,
infrastructure, msa, target) each carrying a confidence. Scoring turns the
diamond into two numbers: presence completeness (quarter per vertex) and a
combined confidence that is the geometric mean of the vertex confidences,
hard-zeroed whenever any vertex is missing, because a partial diamond does
not support the big picture no matter how confident its parts are.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from .codec import Bundle, StixEnvelope, WireObject, canonical_json
from .errors import UnvalidatedBundleError
from .model import (
    CampaignDiamond,
    DIAMOND_ROLES,
    Infrastructure,
    Msa,
    REL_ATTRIBUTED_TO,
    REL_TARGETS,
    REL_USES,
    Relationship,
    Target,
    ThreatActor,
)
from .validator import VocabRegistry, validate_bundle

VERTEX_NAMES = ("actor", "infrastructure", "msa", "target")

# Confidence assumed for objects that do not carry the property; a silent
# 100 would overstate awareness.
ASSUMED_CONFIDENCE = 50

# Fields a producer would have to supply to fill each missing vertex.
VERTEX_FIELDS: Dict[str, Tuple[str, ...]] = {
    "actor": ("name", "capacity", "yoe", "objective"),
    "infrastructure": ("infrastructure_type", "logical", "physical"),
    "msa": ("msa_class", "intent", "bot_numbers", "bot_roles", "bot_actions"),
    "target": ("current", "lateral"),
}


@dataclass(frozen=True)
class VertexRef:
    object_id: str
    confidence: int  # 0..100
    assumed: bool = False  # confidence defaulted, not producer-supplied


@dataclass(frozen=True)
class Situation:
    campaign_id: str
    vertices: Mapping[str, Optional[VertexRef]]
    gaps: Tuple[str, ...]


@dataclass(frozen=True)
class GapEntry:
    vertex: str
    kind: str  # "missing" or "assumed-confidence"
    detail: str
    missing_fields: Tuple[str, ...] = ()


@dataclass(frozen=True)
class SituationScore:
    completeness: float  # (4 - gaps) / 4
    confidence: float  # geometric mean over 4 vertices, 0 when incomplete
    gap_report: Tuple[GapEntry, ...]


def _objects(bundle) -> tuple:
    if isinstance(bundle, Bundle):
        return tuple(bundle.objects)
    return tuple(bundle)


_VERTEX_RULES = {
    (REL_ATTRIBUTED_TO, ThreatActor): "actor",
    (REL_USES, Infrastructure): "infrastructure",
    (REL_USES, Msa): "msa",
    (REL_TARGETS, Target): "target",
}


def assemble_situations(bundle: Union[Bundle, Iterable[WireObject]],
                        registry: Optional[VocabRegistry] = None,
                        ) -> List[Situation]:
    """One Situation per campaign, vertices populated by walking the
    attributed-to/uses/targets relationships.

    Raises UnvalidatedBundleError when the bundle has dangling references;
    everything else is the validator's business, not this walker's.
    """
    objects = _objects(bundle)
    dangling = [f for f in validate_bundle(objects, registry)
                if f.code == "DANGLING_REF"]
    if dangling:
        raise UnvalidatedBundleError(
            f"bundle has {len(dangling)} dangling reference(s)",
            findings=dangling)

    by_id: Dict[str, WireObject] = {}
    campaigns: List[CampaignDiamond] = []
    relationships: List[Relationship] = []
    for obj in objects:
        if isinstance(obj, CampaignDiamond):
            campaigns.append(obj)
            by_id[obj.campaign_id] = obj
        else:
            oid = obj.id
            if isinstance(oid, str):
                by_id[oid] = obj
            if isinstance(obj, Relationship):
                relationships.append(obj)

    relationships.sort(key=lambda r: r.id or "")
    situations = []
    for campaign in sorted(campaigns, key=lambda cd: cd.campaign_id):
        vertices: Dict[str, Optional[VertexRef]] = {v: None for v in VERTEX_NAMES}
        for rel in relationships:
            if rel.source_ref != campaign.campaign_id:
                continue
            obj = by_id.get(rel.target_ref)
            if obj is None:
                continue
            vertex = _VERTEX_RULES.get((rel.relationship_type, type(obj)))
            if vertex is None or vertices[vertex] is not None:
                continue
            conf = obj.confidence if isinstance(obj, StixEnvelope) \
                else obj.common.confidence
            vertices[vertex] = VertexRef(
                object_id=rel.target_ref,
                confidence=conf if conf is not None else ASSUMED_CONFIDENCE,
                assumed=conf is None,
            )
        gaps = tuple(v for v in VERTEX_NAMES if vertices[v] is None)
        situations.append(Situation(
            campaign_id=campaign.campaign_id,
            vertices=vertices,
            gaps=gaps,
        ))
    return situations


def score(situation: Situation) -> SituationScore:
    """Completeness and combined confidence for one situation."""
    present = [situation.vertices.get(v) for v in VERTEX_NAMES
               if situation.vertices.get(v) is not None]
    completeness = len(present) / 4
    if len(present) == 4:
        product = 1.0
        for ref in present:
            product *= ref.confidence / 100
        confidence = product ** 0.25
    else:
        confidence = 0.0

    report: List[GapEntry] = []
    for vertex in VERTEX_NAMES:
        ref = situation.vertices.get(vertex)
        if ref is None:
            fields = VERTEX_FIELDS[vertex]
            report.append(GapEntry(
                vertex=vertex, kind="missing",
                detail=f"supply fields: {', '.join(fields)}",
                missing_fields=fields,
            ))
        elif ref.assumed:
            report.append(GapEntry(
                vertex=vertex, kind="assumed-confidence",
                detail=f"confidence assumed at {ASSUMED_CONFIDENCE} "
                       "(property absent)",
            ))
    return SituationScore(
        completeness=completeness,
        confidence=confidence,
        gap_report=tuple(report),
    )


def diamond_roles(situation: Situation) -> Dict[str, str]:
    """Analysis role of each present vertex."""
    return {vertex: DIAMOND_ROLES[vertex]
            for vertex in VERTEX_NAMES
            if situation.vertices.get(vertex) is not None}


def score_report_dict(situation: Situation, result: SituationScore) -> dict:
    return {
        "campaign_id": situation.campaign_id,
        "completeness": result.completeness,
        "confidence": result.confidence,
        "gaps": [
            {"vertex": entry.vertex,
             "missing_fields": list(entry.missing_fields)}
            for entry in result.gap_report if entry.kind == "missing"
        ],
    }


def score_report_json(situation: Situation, result: SituationScore) -> str:
    """Canonical one-line JSON score report (stable byte-for-byte)."""
    return canonical_json(score_report_dict(situation, result))
