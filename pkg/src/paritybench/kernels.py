"""Hot-kernel dispatch: the compiled core when available, else pure Python.

The implementation is chosen once at import. Set ``PARITYBENCH_PURE_PYTHON=1``
to force the fallback. Both implementations expose the same functions:

``force(succ_ptr, succ_idx, owner, player, target) -> bool[n]``
    One-step controllable predecessor of ``target`` for ``player``.
``attractor(succ_ptr, succ_idx, pred_ptr, pred_idx, owner, player, target, alive)``
    ``player``'s attractor of ``target`` inside the sub-arena ``alive``;
    returns ``(members, rank)`` where ``rank`` is the insertion order (-1 outside).
``attractor_strategy(succ_ptr, succ_idx, owner, player, rank, target) -> int64[n]``
    Lowest-index successor of strictly smaller rank for attracted player nodes.
``spm_run(...)``
    Resumable small-progress-measure work-list loop (see :mod:`.classic`).
"""

import importlib
import os

IMPLEMENTATIONS = ("cython", "python")


def load(name: str):
    if name == "cython":
        return importlib.import_module("paritybench._ckernels")
    if name == "python":
        return importlib.import_module("paritybench._pykernels")
    raise ValueError(f"unknown kernel implementation {name!r}")


def available() -> list[str]:
    found = []
    for name in IMPLEMENTATIONS:
        try:
            load(name)
        except ImportError:
            continue
        found.append(name)
    return found


if os.environ.get("PARITYBENCH_PURE_PYTHON", "") not in ("", "0"):
    _impl = load("python")
else:
    try:
        _impl = load("cython")
    except ImportError:
        _impl = load("python")

BACKEND = _impl.NAME
force = _impl.force
attractor = _impl.attractor
attractor_strategy = _impl.attractor_strategy
spm_run = _impl.spm_run
