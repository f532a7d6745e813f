"""Backend selection for the hot kernels.

Prefers the compiled Cython extension; falls back to the numpy
implementation when the extension is missing or CRKNOTS_PURE_PYTHON is
set.  Both backends expose poly_eval_batch and linking_sum with
identical semantics.
"""

import os

if os.environ.get("CRKNOTS_PURE_PYTHON"):
    from . import pure as _impl
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import pure as _impl

BACKEND = _impl.BACKEND
poly_eval_batch = _impl.poly_eval_batch
linking_sum = _impl.linking_sum


def available_backends():
    """Names of backends importable in this environment."""
    names = ["pure"]
    try:
        from . import _fast  # noqa: F401
        names.insert(0, "fast")
    except ImportError:
        pass
    return names


def get_backend(name):
    """Fetch a specific backend module ('fast' or 'pure')."""
    if name == "pure":
        from . import pure
        return pure
    if name == "fast":
        from . import _fast
        return _fast
    raise ValueError(f"unknown backend {name!r}")
