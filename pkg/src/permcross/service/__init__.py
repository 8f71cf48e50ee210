"""HTTP service exposing the crossover engine."""

from .app import app, create_app

__all__ = ["app", "create_app"]
