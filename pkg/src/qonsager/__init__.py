"""qonsager: exact-arithmetic certification of q-Onsager realizations inside
quantum loop algebras.

Subpackage map:

* scalars   — the exact coefficient field Q(q) and the numeric backend
* linmat    — dense matrices over either backend, gradings, q-brackets
* series    — truncated power series, Pade reconstruction, rational functions
* loopsl2   — level-zero loop-sl2 modules and their relation certificates
* onsager   — rank-one coideal family generation and certification
* spectra   — spectral factorization, Drinfeld data, coproduct checks
* ranka     — higher-rank (type A) families, braid words, degree checks
* cli       — batch driver emitting machine-readable reports

The integer-polynomial core is compiled (Cython) when available; set
QONSAGER_PURE=1 to force the pure-Python kernel.
"""

from ._kernel import KERNEL_NAME
from .scalars import (
    ONE,
    Q,
    ZERO,
    ExactField,
    NumericField,
    Scalar,
    parse_scalar,
    qbinom,
    qfact,
    qint,
    scalar_sqrt,
    specialize,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_NAME",
    "Scalar",
    "ZERO",
    "ONE",
    "Q",
    "ExactField",
    "NumericField",
    "parse_scalar",
    "qint",
    "qfact",
    "qbinom",
    "scalar_sqrt",
    "specialize",
    "__version__",
]
