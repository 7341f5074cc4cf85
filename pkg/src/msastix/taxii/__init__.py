"""TAXII 2.1-subset exchange: collection store, server, and client."""

from .client import TaxiiClient
from .server import (
    MEDIA_TYPE,
    ServerConfig,
    ServerThread,
    TaxiiApp,
    load_server_config,
    make_http_server,
    serve_forever,
)
from .store import (
    DEFAULT_TLP,
    TLP_LEVELS,
    TLP_MARKING_IDS,
    ClientIdentity,
    Collection,
    CollectionStore,
    StoredObject,
    put_objects,
    query_objects,
    tlp_of_markings,
    tlp_rank,
)

__all__ = [
    "MEDIA_TYPE",
    "DEFAULT_TLP",
    "TLP_LEVELS",
    "TLP_MARKING_IDS",
    "ClientIdentity",
    "Collection",
    "CollectionStore",
    "StoredObject",
    "ServerConfig",
    "ServerThread",
    "TaxiiApp",
    "TaxiiClient",
    "load_server_config",
    "make_http_server",
    "put_objects",
    "query_objects",
    "serve_forever",
    "tlp_of_markings",
    "tlp_rank",
]
