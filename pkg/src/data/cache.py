class Cache:
    """In-memory cache for fixture documents and the instances parsed from them."""

    def __init__(self):
        self._documents_cache: dict[str, dict[str, any]] = {}
        self._instances_cache: dict[tuple[str, str], any] = {}

    def get_document(self, fixture_id: str) -> dict[str, any] | None:
        """Get the raw fixture document if it was read before."""
        return self._documents_cache.get(fixture_id)

    def set_document(self, fixture_id: str, data: dict[str, any]):
        self._documents_cache[fixture_id] = data

    def get_instance(self, fixture_id: str, variant: str = "original"):
        """Get a parsed (or rescaled) instance; variant names the scaling applied."""
        return self._instances_cache.get((fixture_id, variant))

    def set_instance(self, fixture_id: str, instance, variant: str = "original"):
        self._instances_cache[(fixture_id, variant)] = instance


# Global cache instance
_cache = Cache()


def get_cache() -> Cache:
    """Get the global cache instance."""
    return _cache
