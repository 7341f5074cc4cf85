"""Identifiers, canonical timestamps, and shared wire metadata.

Everything here is deliberately free of domain logic so the model, codec,
and validator layers can all depend on it without cycles.
"""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Mapping, Optional

from .errors import BadTypeTokenError

# Fixed namespace for name-based (version 5) ids; equal inputs must yield
# equal ids across processes and platforms.
ID_NAMESPACE = uuid.UUID("d2810e23-6d47-5268-88fd-fed9b533cd7d")

TYPE_TOKEN_RE = re.compile(r"^[a-z][a-z0-9-]*$")
STIX_ID_RE = re.compile(
    r"^[a-z][a-z0-9-]*--"
    r"[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}$"
)

SPEC_VERSION = "2.1"


def make_id(object_type: str, deterministic_key: Optional[str] = None) -> str:
    """Return a ``{type}--{uuid}`` identifier.

    With ``deterministic_key`` the UUID is a name-based digest under the
    project namespace, so equal inputs give equal ids; without it a random
    UUID is used.
    """
    if not TYPE_TOKEN_RE.match(object_type):
        raise BadTypeTokenError(f"bad object type token: {object_type!r}")
    if deterministic_key is None:
        u = uuid.uuid4()
    else:
        u = uuid.uuid5(ID_NAMESPACE, f"{object_type}/{deterministic_key}")
    return f"{object_type}--{u}"


def is_stix_id(value: Any) -> bool:
    return isinstance(value, str) and bool(STIX_ID_RE.match(value))


def id_type(object_id: str) -> str:
    """The type prefix of a stix-id (text before the ``--`` separator)."""
    return object_id.split("--", 1)[0]


# --- timestamps ---------------------------------------------------------------

_TS_RE = re.compile(
    r"^(\d{4})-(\d{2})-(\d{2})[Tt](\d{2}):(\d{2}):(\d{2})"
    r"(?:\.(\d{1,6}))?(?:[Zz]|\+00:00)$"
)


def parse_timestamp(value: str) -> datetime:
    """Parse an RFC3339 UTC timestamp; raises ValueError on anything else."""
    m = _TS_RE.match(value) if isinstance(value, str) else None
    if not m:
        raise ValueError(f"not an RFC3339 UTC timestamp: {value!r}")
    frac = (m.group(7) or "").ljust(6, "0")
    return datetime(
        int(m.group(1)), int(m.group(2)), int(m.group(3)),
        int(m.group(4)), int(m.group(5)), int(m.group(6)),
        int(frac), tzinfo=timezone.utc,
    )


def format_timestamp(dt: datetime) -> str:
    """Canonical wire form: ``YYYY-MM-DDTHH:MM:SS.sssZ`` (millisecond precision)."""
    if dt.tzinfo is not None:
        dt = dt.astimezone(timezone.utc)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{dt.microsecond // 1000:03d}Z"


def canonical_timestamp(value: str) -> str:
    """Normalize any accepted timestamp spelling to the canonical wire form."""
    return format_timestamp(parse_timestamp(value))


def is_canonical_timestamp(value: Any) -> bool:
    if not isinstance(value, str):
        return False
    try:
        return canonical_timestamp(value) == value
    except ValueError:
        return False


def now_timestamp() -> str:
    return format_timestamp(datetime.now(timezone.utc))


# --- shared wire metadata -----------------------------------------------------


@dataclass(frozen=True)
class StixCommon:
    """Common STIX envelope properties carried by every typed record.

    ``raw_properties`` holds decoded top-level properties the model does not
    type (``labels``, ``description``, producer extras); ``extension_extras``
    holds unmodelled keys found inside this project's extension map; and
    ``foreign_extensions`` holds whole extension maps registered under other
    extension-definition ids. All three survive re-encoding untouched.
    """

    created: Optional[str] = None
    modified: Optional[str] = None
    confidence: Optional[int] = None
    object_marking_refs: tuple = ()
    raw_properties: Mapping[str, Any] = field(default_factory=dict)
    extension_extras: Mapping[str, Any] = field(default_factory=dict)
    foreign_extensions: Mapping[str, Any] = field(default_factory=dict)


def fresh_common(created: Optional[str] = None,
                 confidence: Optional[int] = None,
                 marking_refs=()) -> StixCommon:
    """Metadata for a newly constructed object: created == modified."""
    ts = canonical_timestamp(created) if created else now_timestamp()
    return StixCommon(
        created=ts,
        modified=ts,
        confidence=confidence,
        object_marking_refs=tuple(marking_refs),
    )
