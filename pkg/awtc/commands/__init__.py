"""CLI subcommand handlers, one router per module."""
from . import bounds, coding, covering, secrecy
from .router import CommandOutput, CommandRouter

__all__ = ["CommandOutput", "CommandRouter", "bounds", "coding", "covering", "secrecy"]
