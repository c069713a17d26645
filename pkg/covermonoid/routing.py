"""
Subcommand registration. Each concern declares a CommandRouter in covermonoid/routers and the
application includes them all, the way web routers are included into one app.
"""
import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from pydantic import BaseModel

from .errors import CommandError, CoverMonoidError, InvariantViolation
from .schemas import render_json, render_text

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace], Any]


@dataclass(frozen=True)
class Argument:
    flags: tuple[str, ...]
    options: dict = field(default_factory=dict)


def argument(*flags: str, **options) -> Argument:
    return Argument(flags, options)


@dataclass(frozen=True)
class Command:
    name: str
    help: Optional[str]
    arguments: tuple[Argument, ...]
    handler: Handler
    tags: tuple[str, ...]


class CommandRouter:
    def __init__(self, tags: Optional[Sequence[str]] = None):
        self.tags = tuple(tags or ())
        self.commands: list[Command] = []

    def command(self, name: str, help: Optional[str] = None, arguments: Sequence[Argument] = ()):
        def decorator(fn: Handler) -> Handler:
            self.commands.append(Command(name, help or fn.__doc__, tuple(arguments), fn, self.tags))
            return fn
        return decorator


class CommandApp:
    def __init__(self, title: str, version: str):
        self.title = title
        self.version = version
        self.commands: dict[str, Command] = {}

    def include_router(self, router: CommandRouter):
        for command in router.commands:
            if command.name in self.commands:
                raise ValueError(f"command {command.name!r} is registered twice")
            self.commands[command.name] = command

    def build_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--format", choices=["json", "text"], default="json", help="Output format.")
        common.add_argument("--out", default=None, help="Write the report to FILE instead of stdout.")

        parser = argparse.ArgumentParser(prog=self.title, description=f"{self.title} {self.version}")
        parser.add_argument("--version", action="version", version=f"{self.title} {self.version}")
        subparsers = parser.add_subparsers(dest="command", required=True)
        for name, command in self.commands.items():
            sub = subparsers.add_parser(name, parents=[common], help=command.help, description=command.help)
            for arg in command.arguments:
                sub.add_argument(*arg.flags, **arg.options)
        return parser

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        parser = self.build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return exc.code if isinstance(exc.code, int) else 2

        command = self.commands[args.command]
        status = 0
        try:
            result = command.handler(args)
        except CommandError as e:
            print(f"error: {e.detail}", file=sys.stderr)
            return e.status_code
        except InvariantViolation as e:
            logger.error(f"{args.command}: internal check failed: {e}")
            print(f"internal check failed: {e}", file=sys.stderr)
            return 1
        except CoverMonoidError as e:
            logger.error(f"{args.command}: {e}")
            print(f"error: {e}", file=sys.stderr)
            return 2

        if isinstance(result, tuple):
            result, status = result
        if not isinstance(result, BaseModel):
            raise TypeError(f"{args.command} returned {type(result).__name__}, not a report model")
        text = render_json(result) if args.format == "json" else render_text(result)
        if args.out:
            Path(args.out).write_text(text + "\n", encoding="utf-8")
        else:
            sys.stdout.write(text + "\n")
        return status
