"""TAXII 2.1-subset HTTP server.

Endpoints (exact paths, trailing slashes included):

    GET  /taxii2/                                discovery
    GET  /api/                                   api-root information
    GET  /api/collections/                       collections list
    GET  /api/collections/{id}/                  one collection
    GET  /api/collections/{id}/objects/          object pages (query params:
         added_after, match[type], match[id], limit, next)
    POST /api/collections/{id}/objects/          add objects ({"objects": [...]})

Every response carries ``application/taxii+json;version=2.1``; the same
media type is required on POST bodies. Authentication is a static bearer
token mapped to a TLP clearance. Errors surface as HTTP statuses, never as
crashes. Transport is plain HTTP: deployments are expected to terminate TLS
in front of it (encrypt-in-transit).
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Dict, Iterable, List, Optional, Tuple
from urllib.parse import parse_qs, urlsplit

from ..errors import (
    BadCursorError,
    ReadForbiddenError,
    UnknownCollectionError,
    WriteForbiddenError,
)
from .store import (
    ClientIdentity,
    Collection,
    CollectionStore,
    page_added_at_bounds,
    put_objects,
    query_objects,
)

logger = logging.getLogger(__name__)

MEDIA_TYPE = "application/taxii+json;version=2.1"
API_ROOT = "/api/"
DEFAULT_PAGE_LIMIT = 100
MAX_CONTENT_LENGTH = 10 * 1024 * 1024


@dataclass(frozen=True)
class ServerConfig:
    port: int
    data_dir: Optional[str]
    tokens: Tuple[ClientIdentity, ...]
    collections: Tuple[Collection, ...]
    title: str = "MSA CTI exchange"


def load_server_config(path: str) -> ServerConfig:
    """Parse the JSON server config file.

    Shape: ``{port, data_dir, tokens: [{token, clearance}],
    collections: [{id, title, can_read, can_write}], title?}``.
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    tokens = tuple(
        ClientIdentity(token=t["token"], clearance=t["clearance"])
        for t in data.get("tokens", ()))
    collections = tuple(
        Collection(
            id=c["id"], title=c.get("title", c["id"]),
            can_read=bool(c.get("can_read", True)),
            can_write=bool(c.get("can_write", True)),
        )
        for c in data.get("collections", ()))
    return ServerConfig(
        port=int(data.get("port", 0)),
        data_dir=data.get("data_dir"),
        tokens=tokens,
        collections=collections,
        title=data.get("title", "MSA CTI exchange"),
    )


def _collection_info(coll: Collection) -> dict:
    return {
        "id": coll.id,
        "title": coll.title,
        "can_read": coll.can_read,
        "can_write": coll.can_write,
        "media_types": [MEDIA_TYPE],
    }


def _is_taxii_media_type(value: Optional[str]) -> bool:
    if not value:
        return False
    parts = [p.strip() for p in value.split(";")]
    if parts[0].lower() != "application/taxii+json":
        return False
    for param in parts[1:]:
        if param.lower().startswith("version=") and param.split("=", 1)[1] != "2.1":
            return False
    return True


class TaxiiApp:
    """Transport-independent request handling over a CollectionStore."""

    def __init__(self, store: CollectionStore,
                 identities: Iterable[ClientIdentity],
                 title: str = "MSA CTI exchange"):
        self.store = store
        self.title = title
        self._by_token: Dict[str, ClientIdentity] = {
            ident.token: ident for ident in identities}
        self.request_count = 0
        self._count_lock = threading.Lock()

    @classmethod
    def from_config(cls, config: ServerConfig) -> "TaxiiApp":
        store = CollectionStore(config.collections, data_dir=config.data_dir)
        return cls(store, config.tokens, title=config.title)

    def identify(self, headers: Dict[str, str]) -> Optional[ClientIdentity]:
        auth = None
        for key, value in headers.items():
            if key.lower() == "authorization":
                auth = value
                break
        if not auth or not auth.startswith("Bearer "):
            return None
        return self._by_token.get(auth[len("Bearer "):])

    def dispatch(self, method: str, path: str, headers: Dict[str, str],
                 body: bytes) -> Tuple[int, Dict[str, str], bytes]:
        with self._count_lock:
            self.request_count += 1
        identity = self.identify(headers)
        try:
            return self.handle_request(method, path, headers, body, identity)
        except Exception:  # must answer, never crash the connection
            logger.exception("unhandled error for %s %s", method, path)
            return self._reply(500, {"title": "internal error",
                                     "http_status": "500"})

    # -- request handling ---------------------------------------------------

    def handle_request(self, method: str, path: str, headers: Dict[str, str],
                       body: bytes, identity: Optional[ClientIdentity]
                       ) -> Tuple[int, Dict[str, str], bytes]:
        if identity is None:
            return self._error(401, "authentication required")
        url = urlsplit(path)
        route = url.path
        query = {k: v[-1] for k, v in parse_qs(url.query).items()}

        if route == "/taxii2/" and method == "GET":
            return self._reply(200, {"title": self.title,
                                     "api_roots": [API_ROOT]})
        if route == API_ROOT and method == "GET":
            return self._reply(200, {
                "title": self.title,
                "versions": [MEDIA_TYPE],
                "max_content_length": MAX_CONTENT_LENGTH,
            })
        if route == "/api/collections/" and method == "GET":
            collections = [
                _collection_info(self.store.get_collection(cid))
                for cid in self.store.collection_ids()
            ]
            return self._reply(200, {"collections": collections})

        parts = route.split("/")
        # /api/collections/{id}/ -> ['', 'api', 'collections', id, '']
        if len(parts) == 5 and parts[:3] == ["", "api", "collections"] \
                and parts[4] == "" and method == "GET":
            return self._get_collection(parts[3])
        # /api/collections/{id}/objects/
        if len(parts) == 6 and parts[:3] == ["", "api", "collections"] \
                and parts[4] == "objects" and parts[5] == "":
            if method == "GET":
                return self._get_objects(parts[3], identity, query)
            if method == "POST":
                return self._post_objects(parts[3], headers, body)
        return self._error(404, "unknown path")

    def _get_collection(self, collection_id: str):
        try:
            coll = self.store.get_collection(collection_id)
        except UnknownCollectionError:
            return self._error(404, "unknown collection")
        return self._reply(200, _collection_info(coll))

    def _get_objects(self, collection_id: str, identity: ClientIdentity,
                     query: Dict[str, str]):
        filters = {}
        if "added_after" in query:
            filters["added_after"] = query["added_after"]
        if "match[type]" in query:
            filters["match_type"] = query["match[type]"]
        if "match[id]" in query:
            filters["match_id"] = query["match[id]"]
        limit = DEFAULT_PAGE_LIMIT
        if "limit" in query:
            try:
                limit = int(query["limit"])
            except ValueError:
                return self._error(400, "limit must be an integer")
            if limit <= 0:
                return self._error(400, "limit must be positive")
        try:
            page, next_cursor = query_objects(
                self.store, collection_id, identity, filters=filters,
                limit=limit, cursor=query.get("next"))
        except UnknownCollectionError:
            return self._error(404, "unknown collection")
        except ReadForbiddenError:
            return self._error(403, "collection is not readable")
        except BadCursorError:
            return self._error(400, "bad pagination cursor")
        envelope: dict = {"more": next_cursor is not None, "objects": page}
        if next_cursor is not None:
            envelope["next"] = next_cursor
        extra_headers = {}
        bounds = page_added_at_bounds(self.store, collection_id, page)
        if bounds:
            extra_headers["X-TAXII-Date-Added-First"] = bounds[0]
            extra_headers["X-TAXII-Date-Added-Last"] = bounds[1]
        return self._reply(200, envelope, extra_headers)

    def _post_objects(self, collection_id: str, headers: Dict[str, str],
                      body: bytes):
        content_type = None
        for key, value in headers.items():
            if key.lower() == "content-type":
                content_type = value
                break
        if not _is_taxii_media_type(content_type):
            return self._error(415, f"unsupported media type: {content_type}")
        try:
            data = json.loads(body.decode("utf-8") if isinstance(body, bytes)
                              else body)
        except (json.JSONDecodeError, UnicodeDecodeError, AttributeError):
            return self._error(400, "body is not valid JSON")
        if not isinstance(data, dict) or not isinstance(data.get("objects"), list):
            return self._error(400, 'body must be {"objects": [...]}')
        try:
            status = put_objects(self.store, collection_id, data["objects"])
        except UnknownCollectionError:
            return self._error(404, "unknown collection")
        except WriteForbiddenError:
            return self._error(403, "collection is not writable")
        return self._reply(200, status)

    # -- responses ------------------------------------------------------------

    def _reply(self, status: int, payload: dict,
               extra_headers: Optional[Dict[str, str]] = None):
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        headers = {"Content-Type": MEDIA_TYPE}
        if extra_headers:
            headers.update(extra_headers)
        return status, headers, body

    def _error(self, status: int, description: str):
        return self._reply(status, {
            "title": description,
            "http_status": str(status),
        })


class _Handler(BaseHTTPRequestHandler):
    app: TaxiiApp = None  # set on the subclass by make_http_server
    protocol_version = "HTTP/1.1"

    def _run(self, method: str) -> None:
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length) if length else b""
        status, headers, payload = self.app.dispatch(
            method, self.path, dict(self.headers.items()), body)
        self.send_response(status)
        for key, value in headers.items():
            self.send_header(key, value)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def do_GET(self):
        self._run("GET")

    def do_POST(self):
        self._run("POST")

    def log_message(self, fmt, *args):
        logger.debug("%s %s", self.address_string(), fmt % args)


def make_http_server(app: TaxiiApp, host: str = "127.0.0.1",
                     port: int = 0) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"app": app})
    return ThreadingHTTPServer((host, port), handler)


class ServerThread:
    """Loopback server running in a daemon thread (tests, `serve` command)."""

    def __init__(self, app: TaxiiApp, host: str = "127.0.0.1", port: int = 0):
        self.app = app
        self.httpd = make_http_server(app, host, port)
        self.thread = threading.Thread(
            target=self.httpd.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self.httpd.server_address[:2]
        return f"http://{host}:{port}"

    def __enter__(self) -> "ServerThread":
        self.thread.start()
        return self

    def __exit__(self, *exc) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()
        self.thread.join(timeout=5)


def serve_forever(config: ServerConfig) -> None:
    app = TaxiiApp.from_config(config)
    httpd = make_http_server(app, host="0.0.0.0", port=config.port)
    host, port = httpd.server_address[:2]
    logger.info("serving TAXII subset on %s:%s", host, port)
    print(f"listening on http://{host}:{port} "
          f"({len(config.collections)} collection(s))")
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
