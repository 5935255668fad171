"""Kernel backend selection.

The hot shooting loop has two interchangeable implementations: a compiled
Cython extension (``_core``) and a pure-Python twin (``pure``). The compiled
one is preferred when importable; setting the environment variable
``COLLARGEO_PURE=1`` forces the fallback. ``set_backend`` switches at runtime
(configuration-time only: do not flip it concurrently with running solvers).
"""

from __future__ import annotations

import os

from . import pure

_BACKENDS = {"pure": pure}

try:  # pragma: no cover - exercised only when the extension is present
    from . import _core

    _BACKENDS["compiled"] = _core
except ImportError:  # pragma: no cover
    _core = None

if os.environ.get("COLLARGEO_PURE", "") not in ("", "0") or _core is None:
    active = pure
else:
    active = _core


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def backend_name() -> str:
    return active.BACKEND_NAME


def get_backend(name: str):
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")


def set_backend(name: str) -> None:
    global active
    active = get_backend(name)
