"""Selects the integer-polynomial kernel at import time.

The compiled kernel (_cykernel, built by setup.py) is preferred; the pure
Python twin (_pykernel) is the fallback and the reference.  Setting the
environment variable QONSAGER_PURE=1 forces the pure kernel — handy for
debugging and for benchmarking one against the other.
"""

import os

if os.environ.get("QONSAGER_PURE"):
    from . import _pykernel as impl
else:
    try:
        from . import _cykernel as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernel as impl

KERNEL_NAME = "cython" if impl.__name__.endswith("_cykernel") else "pure-python"

pnorm = impl.pnorm
padd = impl.padd
psub = impl.psub
pneg = impl.pneg
pmul = impl.pmul
pmul_int = impl.pmul_int
pshift = impl.pshift
pcontent = impl.pcontent
pprim = impl.pprim
pdiv_exact = impl.pdiv_exact
prem = impl.prem
pgcd = impl.pgcd
