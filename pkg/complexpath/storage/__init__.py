from .fixture_store import FixtureStore

__all__ = ["FixtureStore"]
