"""Reversible Markov chains, coinless quantum walks, and the five solvable
Askey-scheme families (q-Hahn, Hahn, Krawtchouk, Charlier, Meixner)."""

from ._qmc import (
    CharlierSpec,
    HahnSpec,
    KrawtchoukSpec,
    MeixnerSpec,
    QHahnSpec,
    System,
    __version__,
    binom,
    build,
    eigendecompose,
    eigenvalue,
    hyp_terminating,
    kernel_entry,
    measure,
    norm_const_sq,
    poch,
    polynomial,
    qbinom,
    qhyp_terminating,
    qpoch,
    reversible_measure,
    simple_random_walk,
    validate_kernel,
)

__all__ = [
    "CharlierSpec",
    "HahnSpec",
    "KrawtchoukSpec",
    "MeixnerSpec",
    "QHahnSpec",
    "System",
    "__version__",
    "binom",
    "build",
    "eigendecompose",
    "eigenvalue",
    "hyp_terminating",
    "kernel_entry",
    "measure",
    "norm_const_sq",
    "poch",
    "polynomial",
    "qbinom",
    "qhyp_terminating",
    "qpoch",
    "reversible_measure",
    "simple_random_walk",
    "validate_kernel",
]
