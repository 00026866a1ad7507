"""Rationality of norm one tori from permutation group data.

Modules: :mod:`~normtori.intlat` (exact integer linear algebra),
:mod:`~normtori.permgrp` (permutation groups and subgroup classes),
:mod:`~normtori.glattice` (G-lattices), :mod:`~normtori.cohom` (Tate
cohomology), :mod:`~normtori.flabby` (flabby resolutions),
:mod:`~normtori.rational` (decision procedures), :mod:`~normtori.catalog`
and :mod:`~normtori.cli`.
"""
from __future__ import annotations

from .catalog import lookup
from .flabby import flabby_resolution
from .glattice import GLattice, chevalley_module
from .permgrp import PermGroup
from .rational import ClassifyConfig, classify, is_invertible_class

__all__ = [
    "ClassifyConfig",
    "GLattice",
    "PermGroup",
    "chevalley_module",
    "classify",
    "flabby_resolution",
    "is_invertible_class",
    "lookup",
]
