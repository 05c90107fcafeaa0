"""Backend selection for the batch outcome kernel.

The compiled extension is used when it imports; set ``EWLGAMES_PURE_PYTHON=1``
to force the numpy implementation.
"""
import os

from . import _pykernels

BACKENDS = {"python": _pykernels.outcome_probs_batch}

try:
    from . import _ckernels
except ImportError:
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels.outcome_probs_batch

if os.environ.get("EWLGAMES_PURE_PYTHON") or _ckernels is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

outcome_probs_batch = BACKENDS[BACKEND]
