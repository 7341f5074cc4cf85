"""Namespaced open vocabularies.

A surface form ("amplification") can legitimately mean different things in
different namespaces (flooding-style traffic attacks vs. narrative boosting
by bot networks). The registry never picks a namespace silently: lookups
either resolve uniquely, fail as unknown, or fail as ambiguous with the full
candidate list.

Vocabulary values embed an optional namespace qualifier after ``--``
(``botnet--narrative``); bare values resolve only when a single namespace
defines the surface.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

from .errors import AmbiguousTermError, UnknownTermError


@dataclass(frozen=True)
class NamespacedTerm:
    surface: str
    namespace: str
    definition: str = ""

    def __str__(self) -> str:
        return f"{self.surface}@{self.namespace}"

    @property
    def qualified(self) -> str:
        """Wire spelling of the fully-qualified term."""
        return f"{self.surface}--{self.namespace}"


def split_qualified(value: str) -> Tuple[str, Optional[str]]:
    """Split ``surface--namespace`` into its parts; bare values get no hint."""
    if "--" in value:
        surface, namespace = value.split("--", 1)
        return surface, namespace
    return value, None


@dataclass(frozen=True)
class VocabRegistry:
    """Immutable map of vocabulary name to its registered terms."""

    vocabularies: Dict[str, Tuple[NamespacedTerm, ...]] = field(default_factory=dict)

    def names(self) -> Tuple[str, ...]:
        return tuple(sorted(self.vocabularies))

    def has_vocab(self, vocab_name: str) -> bool:
        return vocab_name in self.vocabularies

    def terms(self, vocab_name: str) -> Tuple[NamespacedTerm, ...]:
        if vocab_name not in self.vocabularies:
            raise UnknownTermError(f"vocabulary not registered: {vocab_name!r}")
        return self.vocabularies[vocab_name]

    def is_open(self, vocab_name: str) -> bool:
        """A registered vocabulary with no terms yet constrains nothing."""
        return self.has_vocab(vocab_name) and not self.vocabularies[vocab_name]

    def ambiguous_surfaces(self, vocab_name: str) -> Tuple[str, ...]:
        """Surfaces defined in more than one namespace of this vocabulary."""
        seen: Dict[str, int] = {}
        for term in self.terms(vocab_name):
            seen[term.surface] = seen.get(term.surface, 0) + 1
        return tuple(sorted(s for s, n in seen.items() if n > 1))

    def with_terms(self, vocab_name: str,
                   terms: Iterable[NamespacedTerm]) -> "VocabRegistry":
        """A new registry with ``terms`` added to ``vocab_name``."""
        merged = dict(self.vocabularies)
        existing = list(merged.get(vocab_name, ()))
        keys = {(t.surface, t.namespace) for t in existing}
        for term in terms:
            if (term.surface, term.namespace) in keys:
                continue
            existing.append(term)
            keys.add((term.surface, term.namespace))
        merged[vocab_name] = tuple(existing)
        return VocabRegistry(merged)


def resolve_vocab_term(registry: VocabRegistry, vocab_name: str, surface: str,
                       namespace_hint: Optional[str] = None) -> NamespacedTerm:
    """Resolve a surface form within one vocabulary.

    Returns the unique matching term. Raises UnknownTermError when nothing
    matches and AmbiguousTermError (with the full candidate list) when the
    surface exists in several namespaces and no hint narrows it down.
    """
    if not registry.has_vocab(vocab_name):
        raise UnknownTermError(f"vocabulary not registered: {vocab_name!r}")
    surface, embedded = split_qualified(surface)
    hint = namespace_hint if namespace_hint is not None else embedded
    candidates = [t for t in registry.terms(vocab_name) if t.surface == surface]
    if hint is not None:
        candidates = [t for t in candidates if t.namespace == hint]
    if not candidates:
        where = f" in namespace {hint!r}" if hint else ""
        raise UnknownTermError(
            f"{surface!r} is not a registered {vocab_name} term{where}")
    if len(candidates) > 1:
        listing = ", ".join(str(t) for t in sorted(candidates, key=str))
        raise AmbiguousTermError(
            f"{surface!r} is ambiguous in {vocab_name}: {listing}",
            candidates=sorted(candidates, key=str),
        )
    return candidates[0]


# --- registry files -----------------------------------------------------------


def load_registry(path: str) -> VocabRegistry:
    """Load ``{vocab_name: [{surface, namespace, definition}]}`` from JSON."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    vocabularies: Dict[str, Tuple[NamespacedTerm, ...]] = {}
    for name, entries in data.items():
        terms = []
        keys = set()
        for entry in entries:
            term = NamespacedTerm(
                surface=entry["surface"],
                namespace=entry["namespace"],
                definition=entry.get("definition", ""),
            )
            if (term.surface, term.namespace) in keys:
                raise ValueError(
                    f"duplicate (surface, namespace) in {name}: {term}")
            keys.add((term.surface, term.namespace))
            terms.append(term)
        vocabularies[name] = tuple(terms)
    return VocabRegistry(vocabularies)


def dump_registry(registry: VocabRegistry) -> str:
    data = {
        name: [
            {"surface": t.surface, "namespace": t.namespace,
             "definition": t.definition}
            for t in terms
        ]
        for name, terms in sorted(registry.vocabularies.items())
    }
    return json.dumps(data, indent=2, sort_keys=True)


# --- defaults -----------------------------------------------------------------

RESOURCE_LEVEL_VOCAB = "attack-resource-level"
INFRASTRUCTURE_TYPE_VOCAB = "infrastructure-type"
ENGAGEMENT_LEVEL_VOCAB = "engagement-level"
MALWARE_TYPE_VOCAB = "malware-type"

_STIX_RESOURCE_LEVELS = (
    "individual", "club", "contest", "team", "organization", "government",
)

_DEFAULT_INFRA_TERMS = (
    NamespacedTerm("amplification", "flooding",
                   "traffic amplification that renders a service inoperable"),
    NamespacedTerm("amplification", "narrative",
                   "bot or troll accounts catalysing the spread of a narrative"),
    NamespacedTerm("botnet", "generic",
                   "network of compromised machines under common control"),
    NamespacedTerm("botnet", "narrative",
                   "coordinated network of social accounts pushing content"),
    NamespacedTerm("anonymization", "generic", "traffic anonymization layer"),
    NamespacedTerm("command-and-control", "generic",
                   "infrastructure used to direct deployed capabilities"),
    NamespacedTerm("hosting", "generic", "content or payload hosting"),
    NamespacedTerm("phishing", "generic", "credential or lure delivery"),
    NamespacedTerm("reconnaissance", "generic", "target survey infrastructure"),
    NamespacedTerm("staging", "generic", "pre-positioning of tooling or content"),
)

_DEFAULT_ENGAGEMENT_TERMS = (
    NamespacedTerm("viral", "msa", "self-propagating public engagement"),
    NamespacedTerm("organic", "msa", "engagement driven by genuine users"),
    NamespacedTerm("amplified", "msa", "engagement inflated by automation"),
    NamespacedTerm("dormant", "msa", "negligible current engagement"),
)


def default_registry() -> VocabRegistry:
    """The registry the toolkit ships with.

    ``malware-type`` is registered but left empty: it is an open namespace
    for users to populate, and empty vocabularies skip membership checks.
    """
    return VocabRegistry({
        RESOURCE_LEVEL_VOCAB: tuple(
            NamespacedTerm(s, "stix", "") for s in _STIX_RESOURCE_LEVELS),
        INFRASTRUCTURE_TYPE_VOCAB: _DEFAULT_INFRA_TERMS,
        ENGAGEMENT_LEVEL_VOCAB: _DEFAULT_ENGAGEMENT_TERMS,
        MALWARE_TYPE_VOCAB: (),
    })
