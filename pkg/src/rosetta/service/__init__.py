"""HTTP API and command-line client."""

from .app import create_app

__all__ = ["create_app"]
