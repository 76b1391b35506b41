"""HTTP service wrapping the core library, plus the shared command
handlers the CLI calls in process.

create_app is resolved lazily so importing the handlers does not pull in
the web stack.
"""

from .handlers import HANDLERS, dispatch
from .schemas import REQUEST_MODELS, OutputRecord

__all__ = ["create_app", "dispatch", "HANDLERS", "REQUEST_MODELS",
           "OutputRecord"]


def __getattr__(name: str):
    if name == "create_app":
        from .app import create_app
        return create_app
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
