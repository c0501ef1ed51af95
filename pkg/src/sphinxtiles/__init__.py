"""Sphinx rep-tile substitution engine.

Builds the sphinx substitution hierarchy on an exact triangular lattice,
derives the skeleton / epivertex / vertex-wire structure, constructs the
marked tile set (tile-, edge- and vertex-tiles with three color channels),
and verifies at desk scale that the marked tiles admit only substitution
decorations while plain sphinxes tile supertile regions in other ways too.
"""

__version__ = "0.1.0"
