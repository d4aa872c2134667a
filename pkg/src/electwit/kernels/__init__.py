"""Hot-loop kernels with import-time implementation selection.

``impl`` is the active module: the compiled extension (``_fast``) when it was
built, otherwise the pure NumPy fallback (``_pure``). Set the environment
variable ``ELECTWIT_PURE_PYTHON=1`` before import to force the fallback, e.g.
for the fallback side of ``benchmarks/bench_kernels.py``.
"""

import os

from electwit.kernels import _pure

if os.environ.get("ELECTWIT_PURE_PYTHON") == "1":
    impl = _pure
else:
    try:
        from electwit.kernels import _fast as impl
    except ImportError:
        impl = _pure

USING_COMPILED = impl is not _pure

build_tree = impl.build_tree
smo_epoch = impl.smo_epoch

__all__ = ["build_tree", "smo_epoch", "impl", "USING_COMPILED"]
