"""Select the compiled hot loops when built, else the pure-Python ones.

Set ``QTETRA_PURE=1`` to force the fallback.
"""

import os

if os.environ.get("QTETRA_PURE"):
    from ._purecore import dot, fiber_sum, pair_sweep, qpoch, qpoch_inv

    COMPILED = False
else:
    try:
        from ._speedups import dot, fiber_sum, pair_sweep, qpoch, qpoch_inv

        COMPILED = True
    except ImportError:  # extension not built
        from ._purecore import dot, fiber_sum, pair_sweep, qpoch, qpoch_inv

        COMPILED = False

__all__ = ["COMPILED", "dot", "fiber_sum", "pair_sweep", "qpoch", "qpoch_inv"]
