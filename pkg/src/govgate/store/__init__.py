"""Persistent policy registry with exact in-memory vector retrieval."""

from govgate.store.store import CACHE_FILENAME, PolicyStore, SearchHit, StoredPolicy

__all__ = ["CACHE_FILENAME", "PolicyStore", "SearchHit", "StoredPolicy"]
