"""RVSM sparse training on the one-layer no-overlap ReLU network.

Thin wrapper over the compiled core: closed-form population loss and
gradient, l1/l0/transformed-l1 thresholding operators, the RVSM and ADMM
optimizers with trajectory recording, Monte-Carlo estimators, and the
convergence checkers.
"""

from ._rvsm import *  # noqa: F401,F403
from ._rvsm import __doc__ as _core_doc  # noqa: F401
