"""Versioned, TLP-marked collection store behind the TAXII endpoints.

Collections hold canonical wire dicts in added order. Reads work on
immutable snapshots; writes are serialized per collection and publish a new
snapshot atomically. Persistence is an append-only JSON-lines file per
collection, replayed at startup.
"""

from __future__ import annotations

import base64
import binascii
import json
import os
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone
from typing import Dict, Iterable, List, Optional, Tuple

from ..base import make_id
from ..codec import decode_object, to_wire_dict
from ..errors import (
    BadCursorError,
    BadIdGrammarError,
    ConfidenceOutOfRangeError,
    MalformedJsonError,
    ReadForbiddenError,
    UnknownCollectionError,
    WriteForbiddenError,
)
from ..validator import validate_object

TLP_LEVELS = ("clear", "green", "amber", "red")
_TLP_RANK = {level: i for i, level in enumerate(TLP_LEVELS)}

# Objects arriving without an explicit marking share fail-closed.
DEFAULT_TLP = "amber"

# Deterministic marking-definition ids for the four levels; carried in
# object_marking_refs so TLP survives the wire.
TLP_MARKING_IDS = {
    level: make_id("marking-definition", f"tlp/{level}") for level in TLP_LEVELS
}
_TLP_BY_MARKING = {mid: level for level, mid in TLP_MARKING_IDS.items()}


def tlp_rank(level: str) -> int:
    if level not in _TLP_RANK:
        raise ValueError(f"unknown tlp level: {level!r}")
    return _TLP_RANK[level]


def tlp_of_markings(marking_refs: Iterable[str]) -> Optional[str]:
    """The most restrictive TLP level named by the given marking refs."""
    found = [_TLP_BY_MARKING[m] for m in marking_refs if m in _TLP_BY_MARKING]
    if not found:
        return None
    return max(found, key=tlp_rank)


@dataclass(frozen=True)
class ClientIdentity:
    token: str
    clearance: str  # max tlp level readable

    def __post_init__(self):
        tlp_rank(self.clearance)


@dataclass(frozen=True)
class StoredObject:
    envelope: dict  # canonical wire dict
    tlp: str
    added_at: str  # microsecond UTC timestamp, strictly increasing


@dataclass(frozen=True)
class Collection:
    id: str
    title: str
    can_read: bool = True
    can_write: bool = True
    records: Tuple[StoredObject, ...] = ()


def _now_micro() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def _bump_micro(ts: str) -> str:
    dt = datetime.strptime(ts, "%Y-%m-%dT%H:%M:%S.%fZ")
    return (dt + timedelta(microseconds=1)).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def encode_cursor(added_at: str) -> str:
    raw = f"v1:{added_at}".encode("ascii")
    return base64.urlsafe_b64encode(raw).decode("ascii")


def decode_cursor(cursor: str) -> str:
    try:
        raw = base64.urlsafe_b64decode(cursor.encode("ascii")).decode("ascii")
    except (binascii.Error, UnicodeError, ValueError) as exc:
        raise BadCursorError(f"undecodable cursor: {cursor!r}") from exc
    if not raw.startswith("v1:"):
        raise BadCursorError(f"unrecognized cursor format: {cursor!r}")
    return raw[3:]


class CollectionStore:
    """Thread-safe collection store with optional JSONL persistence."""

    def __init__(self, collections: Iterable[Collection],
                 data_dir: Optional[str] = None):
        self._data_dir = data_dir
        self._collections: Dict[str, Collection] = {}
        self._locks: Dict[str, threading.Lock] = {}
        self._last_added: Dict[str, str] = {}
        for coll in collections:
            self._collections[coll.id] = coll
            self._locks[coll.id] = threading.Lock()
            self._last_added[coll.id] = ""
        if data_dir:
            os.makedirs(data_dir, exist_ok=True)
            for coll_id in list(self._collections):
                self._replay(coll_id)

    # -- snapshots --------------------------------------------------------

    def collection_ids(self) -> Tuple[str, ...]:
        return tuple(sorted(self._collections))

    def get_collection(self, collection_id: str) -> Collection:
        coll = self._collections.get(collection_id)
        if coll is None:
            raise UnknownCollectionError(
                f"no such collection: {collection_id!r}")
        return coll

    def size(self, collection_id: str) -> int:
        return len(self.get_collection(collection_id).records)

    # -- persistence ------------------------------------------------------

    def _path(self, collection_id: str) -> str:
        return os.path.join(self._data_dir, f"{collection_id}.jsonl")

    def _replay(self, collection_id: str) -> None:
        path = self._path(collection_id)
        if not os.path.exists(path):
            return
        records: List[StoredObject] = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                entry = json.loads(line)
                records.append(StoredObject(
                    envelope=entry["object"],
                    tlp=entry["tlp"],
                    added_at=entry["added_at"],
                ))
        if records:
            coll = self._collections[collection_id]
            self._collections[collection_id] = replace(
                coll, records=tuple(records))
            self._last_added[collection_id] = records[-1].added_at

    def _persist(self, collection_id: str, stored: StoredObject) -> None:
        if not self._data_dir:
            return
        line = json.dumps(
            {"added_at": stored.added_at, "tlp": stored.tlp,
             "object": stored.envelope},
            sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        with open(self._path(collection_id), "a", encoding="utf-8") as fh:
            fh.write(line + "\n")

    # -- writes -----------------------------------------------------------

    def _next_added_at(self, collection_id: str) -> str:
        now = _now_micro()
        last = self._last_added[collection_id]
        if now <= last:
            now = _bump_micro(last)
        self._last_added[collection_id] = now
        return now


def put_objects(store: CollectionStore, collection_id: str, envelopes,
                tlp_map: Optional[Dict[str, str]] = None) -> dict:
    """Append objects, validating each individually.

    Invalid objects are rejected one by one (the batch continues); an
    identical (id, modified) resubmission is an idempotent success. Returns
    ``{"success_count": n, "failures": [{"id": ..., "reason": ...}]}``.
    """
    coll = store.get_collection(collection_id)
    if not coll.can_write:
        raise WriteForbiddenError(f"collection {collection_id} is read-only")
    tlp_map = tlp_map or {}
    for level in tlp_map.values():
        tlp_rank(level)

    success = 0
    failures: List[dict] = []
    lock = store._locks[collection_id]
    with lock:
        coll = store.get_collection(collection_id)
        existing = {(rec.envelope.get("id"), rec.envelope.get("modified"))
                    for rec in coll.records}
        new_records = list(coll.records)
        for envelope in envelopes:
            if not isinstance(envelope, dict):
                envelope = to_wire_dict(envelope)
            object_id = envelope.get("id")
            try:
                obj, _ = decode_object(envelope)
            except (BadIdGrammarError, ConfidenceOutOfRangeError,
                    MalformedJsonError) as exc:
                failures.append({"id": object_id, "reason": exc.code})
                continue
            errors = [f for f in validate_object(obj) if f.severity == "error"]
            if errors:
                failures.append({"id": object_id, "reason": errors[0].code})
                continue
            pair = (envelope.get("id"), envelope.get("modified"))
            if pair in existing:
                success += 1  # idempotent re-submission
                continue
            tlp = tlp_map.get(object_id) \
                or tlp_of_markings(envelope.get("object_marking_refs", ())) \
                or DEFAULT_TLP
            stored = StoredObject(
                envelope=envelope, tlp=tlp,
                added_at=store._next_added_at(collection_id))
            new_records.append(stored)
            existing.add(pair)
            store._persist(collection_id, stored)
            success += 1
        store._collections[collection_id] = replace(
            coll, records=tuple(new_records))
    return {"success_count": success, "failures": failures}


def query_objects(store: CollectionStore, collection_id: str,
                  identity: ClientIdentity,
                  filters: Optional[dict] = None,
                  limit: Optional[int] = None,
                  cursor: Optional[str] = None) -> Tuple[List[dict],
                                                         Optional[str]]:
    """One page of readable objects plus the cursor for the next page.

    Objects marked above the identity's clearance are never returned.
    Filters: added_after (exclusive), match_type, match_id.
    """
    coll = store.get_collection(collection_id)
    if not coll.can_read:
        raise ReadForbiddenError(f"collection {collection_id} is not readable")
    filters = filters or {}
    added_after = filters.get("added_after")
    match_type = filters.get("match_type")
    match_id = filters.get("match_id")
    position = decode_cursor(cursor) if cursor else None
    clearance = tlp_rank(identity.clearance)

    matched = []
    for rec in coll.records:  # records are in added_at order
        if tlp_rank(rec.tlp) > clearance:
            continue
        if added_after is not None and rec.added_at <= added_after:
            continue
        if position is not None and rec.added_at <= position:
            continue
        if match_type is not None and rec.envelope.get("type") != match_type:
            continue
        if match_id is not None and rec.envelope.get("id") != match_id:
            continue
        matched.append(rec)

    if limit is None or limit >= len(matched):
        page, remainder = matched, []
    else:
        page, remainder = matched[:limit], matched[limit:]
    next_cursor = encode_cursor(page[-1].added_at) if remainder else None
    return [rec.envelope for rec in page], next_cursor


def page_added_at_bounds(store: CollectionStore, collection_id: str,
                         page: List[dict]) -> Optional[Tuple[str, str]]:
    """(first, last) added_at for the given page of envelopes, if any."""
    if not page:
        return None
    coll = store.get_collection(collection_id)
    ids = {(env.get("id"), env.get("modified")) for env in page}
    stamps = [rec.added_at for rec in coll.records
              if (rec.envelope.get("id"), rec.envelope.get("modified")) in ids]
    if not stamps:
        return None
    return min(stamps), max(stamps)
