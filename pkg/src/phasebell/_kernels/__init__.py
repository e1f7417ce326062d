"""Kernel backend selection.

The closed-form quasiprobability evaluations sit in the innermost loop of
every settings optimization, so they are implemented twice: a Cython
extension (``_fast``) and an interpreted twin (``_slow``). The compiled one
is preferred when importable; set ``PHASEBELL_BACKEND=python`` to force the
fallback (e.g. for the backend benchmark).
"""

from __future__ import annotations

import os

from . import _slow

_requested = os.environ.get("PHASEBELL_BACKEND", "").strip().lower()

if _requested in ("", "compiled", "fast"):
    try:
        from . import _fast as _active  # type: ignore[attr-defined]
    except ImportError:
        if _requested:
            raise
        _active = _slow
elif _requested in ("python", "slow"):
    _active = _slow
else:
    raise RuntimeError(f"unknown PHASEBELL_BACKEND value: {_requested!r}")

FAMILY_SINGLE_PHOTON = _slow.FAMILY_SINGLE_PHOTON
FAMILY_SQUEEZED_VACUUM = _slow.FAMILY_SQUEEZED_VACUUM
FAMILY_GHZ_ECS = _slow.FAMILY_GHZ_ECS

w3 = _active.w3
w2 = _active.w2
w1 = _active.w1
PreparedBell = _active.PreparedBell
photon_amplitudes = _slow.photon_amplitudes
ecs_norm_sq = _slow.ecs_norm_sq


def backend_name() -> str:
    return _active.BACKEND_NAME
