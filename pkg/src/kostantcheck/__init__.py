"""Exact-arithmetic verification harness for parabolic Kostant calculus.

Subpackage map:

* ``ratlin``  — rational linear algebra (RREF, kernels, subspaces);
* ``gla``     — block-graded sl(m) with exact structure constants;
* ``kostant`` — Lie-algebra (co)homology differentials and Hodge theory;
* ``feff``    — the two Fefferman-type embeddings and curvature transfers;
* ``penrose`` — abstract-index tensor identities for the harmonic curvature;
* ``cochain_io`` — exact-rational JSON serialization of cochains;
* ``checks``  — the named verification suites behind the harness;
* ``cli``     — deterministic command-line verification harness.
"""

from __future__ import annotations

__all__ = ["ratlin", "gla", "kostant", "feff", "penrose", "cochain_io",
           "checks", "cli"]
__version__ = "0.1.0"
