"""TAXII 2.1-subset client for pulling and pushing MSA bundles."""

from __future__ import annotations

import logging
from typing import Dict, List, Optional

import requests

from ..codec import Bundle, decode_object, make_bundle, to_wire_dict
from ..errors import (
    AuthFailedError,
    LocalValidationFailedError,
    NetworkError,
    ServerError,
)
from ..validator import validate_bundle
from .server import MEDIA_TYPE

logger = logging.getLogger(__name__)


class TaxiiClient:
    """Bearer-token client against one server.

    Single-flight per pull/push call; use one client per session when
    calling from multiple threads.
    """

    def __init__(self, url: str, token: str, timeout: float = 30.0):
        self.url = url.rstrip("/")
        self.timeout = timeout
        self._session = requests.Session()
        self._session.headers.update({
            "Authorization": f"Bearer {token}",
            "Accept": MEDIA_TYPE,
        })
        self._high_water: Dict[str, str] = {}

    def _request(self, method: str, path: str, *,
                 params: Optional[dict] = None,
                 json_body: Optional[dict] = None) -> requests.Response:
        try:
            response = self._session.request(
                method, f"{self.url}{path}", params=params, json=json_body,
                headers={"Content-Type": MEDIA_TYPE} if json_body is not None
                else None,
                timeout=self.timeout)
        except requests.RequestException as exc:
            raise NetworkError(f"{method} {path}: {exc}") from exc
        if response.status_code == 401:
            raise AuthFailedError(f"{method} {path}: authentication failed")
        if response.status_code >= 400:
            raise ServerError(response.status_code,
                              f"{method} {path}: {response.text[:200]}")
        return response

    def discovery(self) -> dict:
        return self._request("GET", "/taxii2/").json()

    def collections(self) -> List[dict]:
        payload = self._request("GET", "/api/collections/").json()
        return payload.get("collections", [])

    def pull(self, collection_id: str, added_after: Optional[str] = None,
             page_size: Optional[int] = None) -> Bundle:
        """Fetch all readable objects, following cursors until exhaustion.

        The highest added_at seen is recorded per collection for incremental
        resume (see ``high_water``).
        """
        path = f"/api/collections/{collection_id}/objects/"
        params: dict = {}
        if added_after is not None:
            params["added_after"] = added_after
        if page_size is not None:
            params["limit"] = page_size
        objects = []
        cursor = None
        while True:
            page_params = dict(params)
            if cursor is not None:
                page_params["next"] = cursor
            response = self._request("GET", path, params=page_params)
            payload = response.json()
            for raw in payload.get("objects", []):
                obj, _ = decode_object(raw)
                objects.append(obj)
            last = response.headers.get("X-TAXII-Date-Added-Last")
            if last and last > self._high_water.get(collection_id, ""):
                self._high_water[collection_id] = last
            cursor = payload.get("next")
            if not payload.get("more") or cursor is None:
                break
        return make_bundle(objects)

    def high_water(self, collection_id: str) -> Optional[str]:
        """Highest added_at fetched so far; pass as added_after to resume."""
        return self._high_water.get(collection_id)

    def push(self, collection_id: str, bundle) -> dict:
        """Validate locally, then post the objects; returns the status record.

        Bundles carrying local error findings are refused without any
        network traffic.
        """
        objects = bundle.objects if isinstance(bundle, Bundle) else tuple(bundle)
        errors = [f for f in validate_bundle(objects) if f.severity == "error"]
        if errors:
            raise LocalValidationFailedError(errors)
        body = {"objects": [to_wire_dict(obj) for obj in objects]}
        response = self._request(
            "POST", f"/api/collections/{collection_id}/objects/",
            json_body=body)
        return response.json()
