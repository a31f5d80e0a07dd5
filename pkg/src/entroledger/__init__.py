"""Exact bipartite quantum dynamics with side-by-side thermodynamic ledgers."""

__version__ = "0.1.0"

from . import dynamics, ell_ledger, linalg, obs_ledger, qstate, scenarios  # noqa: F401
