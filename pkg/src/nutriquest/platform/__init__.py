"""Persistence and the HTTP sync/query service."""

from .api import create_app, parse_tokens, serve
from .log import RecordLog, encode_record, read_log
from .registry import CHW, Child, Registry, Team
from .store import PublishedLayers, Store, SyncBatch, parse_campaigns

__all__ = [
    "create_app", "parse_tokens", "serve", "RecordLog", "encode_record",
    "read_log", "CHW", "Child", "Registry", "Team", "PublishedLayers",
    "Store", "SyncBatch", "parse_campaigns",
]
