"""Multi-robot complete coverage planning over boustrophedon decompositions."""
from .kernels import BACKEND

__version__ = "0.1.0"


def main(argv=None) -> int:
    from .cli import main as _main

    return _main(argv)


__all__ = ["BACKEND", "__version__", "main"]
