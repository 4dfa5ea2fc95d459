"""
Collective Gaussian attacks on one-mode channels and the asymptotic key-rate
bounds of coherent-state heterodyne CV-QKD.

Modules
-------
symplectic  symplectic forms and the Euler decomposition of 2x2 symplectics
gaussian    Gaussian states, unitaries, partial trace, entropy
channel     one-mode channels, invariants, classification, decomposition
dilation    Stinespring dilations of the canonical forms
attack      collective Gaussian attacks and their theta parameters
keyrate     total noise and the direct/reverse reconciliation bounds
protocol    Monte-Carlo simulation with channel tomography
cli         command-line front end
"""

from . import attack, channel, dilation, gaussian, keyrate, protocol, symplectic
from .attack import CollectiveGaussianAttack
from .channel import GaussianChannel
from .errors import (
    CompletionError,
    DomainError,
    GaussrateError,
    InvalidChannelError,
    SizeError,
    UnsupportedRegimeError,
)
from .gaussian import GaussianState, GaussianUnitary
from .keyrate import RateReport

__version__ = "0.1.0"
