"""
Handlers package
"""

from .cli_handler import CommandHandler

__all__ = [
    "CommandHandler",
]
