"""AECM fitting: cycle-1/cycle-2 updates, Aitken stopping and the fit loop.

Submodules are imported explicitly (`skills.aecm.fitter` etc.).
"""
__all__ = ["config", "convergence", "cycles", "fitter", "moments"]
