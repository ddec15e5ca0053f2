"""Finite cylindric-algebra atom structures, coloured-graph games and an
exact rational hyperplane calculus."""

__version__ = "0.1.0"
