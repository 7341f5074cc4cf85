"""msastix: model, validate, score, and exchange MSA campaign intelligence.

A STIX 2.1 extension toolkit for describing malicious social automation as
diamond-model campaigns: typed records, a bit-exact JSON codec, finding-based
validation and label linting, situation scoring, and a TAXII 2.1-subset
client/server with TLP enforcement.
"""

from . import errors
from .base import make_id
from .codec import (
    Bundle,
    DecodeWarning,
    EXTENSION_ID,
    StixEnvelope,
    decode_bundle,
    encode_bundle,
    extension_definition,
    make_bundle,
    to_wire_dict,
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
    assemble_campaign,
    attach_opinion,
    build_infrastructure,
    build_msa,
    build_target,
    build_threat_actor,
)
from .situation import (
    Situation,
    SituationScore,
    assemble_situations,
    diamond_roles,
    score,
    score_report_json,
)
from .validator import (
    DEFAULT_DENYLIST,
    FINDING_CATALOGUE,
    Finding,
    default_registry,
    lint_labels,
    load_registry,
    validate_bundle,
    validate_object,
)
from .vocab import NamespacedTerm, VocabRegistry, resolve_vocab_term

__version__ = "0.1.0"

__all__ = [
    "AptProfile",
    "Bundle",
    "errors",
    "CampaignDiamond",
    "DEFAULT_DENYLIST",
    "DecodeWarning",
    "EXTENSION_ID",
    "FINDING_CATALOGUE",
    "Finding",
    "Infrastructure",
    "LogicalInfra",
    "MemeticProfile",
    "Msa",
    "NamespacedTerm",
    "OpinionNote",
    "PhysicalInfra",
    "Relationship",
    "Situation",
    "SituationScore",
    "StixEnvelope",
    "Target",
    "ThreatActor",
    "TransgressiveProfile",
    "VocabRegistry",
    "assemble_campaign",
    "assemble_situations",
    "attach_opinion",
    "build_infrastructure",
    "build_msa",
    "build_target",
    "build_threat_actor",
    "decode_bundle",
    "default_registry",
    "diamond_roles",
    "encode_bundle",
    "extension_definition",
    "lint_labels",
    "load_registry",
    "make_bundle",
    "make_id",
    "score",
    "score_report_json",
    "to_wire_dict",
    "validate_bundle",
    "validate_object",
]
