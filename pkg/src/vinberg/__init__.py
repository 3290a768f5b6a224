"""Exact-arithmetic reflectivity testing for Lorentzian quadratic forms.

The package decides whether the integral automorphism group of an
admissible quadratic form of signature (n, 1) is generated, up to finite
index, by reflections.  It constructs the fundamental polyhedron wall by
wall, labels the resulting diagram with exact dihedral angles, and checks
finite volume, compactness, arithmeticity, minimality and doubling
structure.  All decisions are made in exact arithmetic over Z or the ring
of integers of a real quadratic field.
"""

from vinberg.ring import Field, RingElement, FieldElement
from vinberg.lattice import GramForm, Root, AdmissibilityReport
from vinberg.diagram import CoxeterDiagram, EdgeLabel, SubdiagramClass
from vinberg.engine import RunConfig, RunVerdict, PolyhedronReport, run

__all__ = [
    "Field",
    "RingElement",
    "FieldElement",
    "GramForm",
    "Root",
    "AdmissibilityReport",
    "CoxeterDiagram",
    "EdgeLabel",
    "SubdiagramClass",
    "RunConfig",
    "RunVerdict",
    "PolyhedronReport",
    "run",
]

__version__ = "0.1.0"
