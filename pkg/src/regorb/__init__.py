"""Exact regular-orbit computations for coprime linear groups over prime fields."""

__version__ = "0.1.0"
