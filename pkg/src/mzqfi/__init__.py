"""Quantum Fisher information for a two-mode Mach-Zehnder interferometer
on truncated Fock spaces, with closed-form cross-checks, phase-matching
analysis and photon-loss models."""

from ._version import VERSION as __version__
from . import analytic, fock, interferometer, loss, qfi

__all__ = ["__version__", "analytic", "fock", "interferometer", "loss", "qfi"]
