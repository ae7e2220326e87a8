"""Exact trace functions for U_q(sl2) intertwiners and checks of their identities."""

__version__ = "0.1.0"
