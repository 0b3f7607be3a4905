"""Exact computation of Hurwitz numbers, Hodge-type correlators, and the
series identities connecting them.

Everything is exact rational arithmetic; see the README for the module map
and the command-line entry points.
"""

__version__ = "0.1.0"
