"""FastAPI service wrapping the game core."""

from .app import create_app

__all__ = ["create_app"]
