"""Constant-length substitution shifts, their automatic codings and automorphisms.

Modules
-------
substitution   parsing, powers, languages, primitivity, height, recognizability
pairs          the pair graph, periodic pairs, minimal sets, asymptotic disjointness
automatic      automatic pairs (theta, tau) and their bijective presentations
automorphisms  letter labellings, the group G, rule verification, automorphism search
compression    compressions, twists, roots of the shift and their decomposition
cli            the ``autoshift`` command
"""
from .substitution import Substitution, SubstitutionError, parse_coding, parse_substitution, power

__version__ = "0.1.0"
__all__ = ["Substitution", "SubstitutionError", "parse_coding", "parse_substitution", "power"]
