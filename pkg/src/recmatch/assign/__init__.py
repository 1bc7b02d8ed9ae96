"""Assignment oracles with a compiled hot kernel and a numpy fallback.

The inner solver runs once per agent per solver iteration, which makes it the
hot loop of the whole package. ``backend`` resolves to the Cython extension
when it was built, otherwise to the pure numpy twin; set the environment
variable ``RECMATCH_BACKEND=python`` to force the fallback. Both kernels
produce bit-identical output.
"""

from __future__ import annotations

import os

if os.environ.get("RECMATCH_BACKEND", "").lower() == "python":
    from . import _kernel_py as backend

    BACKEND = "python"
else:
    try:
        from . import _kernel as backend  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernel_py as backend

        BACKEND = "python"

from .oracle import (  # noqa: E402
    PartialMatching,
    PermutationMatrix,
    max_weight_matching,
    max_weight_permutation,
)

__all__ = [
    "BACKEND",
    "backend",
    "PartialMatching",
    "PermutationMatrix",
    "max_weight_matching",
    "max_weight_permutation",
]
