"""Thermodynamics from pair correlations through generalized Maxwell relations.

Modules: ``hilbert`` (bases and operators), ``models`` (H = H0 + c G2hat),
``statmech`` (exact thermal traces), ``maxwell`` (grids, derivatives and
Maxwell-route reconstruction), ``bethe`` (Lieb-Liniger ground state),
``analytic`` (closed-form references), ``experiments`` (comparison tables),
``checks`` (invariant suite) and ``cli``.
"""

__version__ = "0.1.0"
