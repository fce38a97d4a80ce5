from cli.commands import cli, main
from cli.config import RunConfig

__all__ = ["cli", "main", "RunConfig"]
