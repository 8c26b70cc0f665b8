"""tokviz: symbolic-music tokenization with an HTTP visualization service."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("tokviz")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.0.0.dev0"
