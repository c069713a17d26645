import logging
import sys
from typing import Optional, Sequence

from . import __version__
from .config import LOG_LEVEL
from .routers import lattice, stack, two_degree, verify
from .routing import CommandApp

app = CommandApp(title="covermonoid", version=__version__)

# Include Routers
app.include_router(lattice.router)
app.include_router(two_degree.router)
app.include_router(stack.router)
app.include_router(verify.router)


def run(argv: Optional[Sequence[str]] = None) -> int:
    # stderr only, stdout carries the report
    logging.basicConfig(level=LOG_LEVEL, stream=sys.stderr)
    return app.run(argv)


def main():
    raise SystemExit(run())
