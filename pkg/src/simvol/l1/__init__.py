"""Simplicial complexes, homology, subdivision and l1-norm certification."""
from __future__ import annotations

from .combinatorial import CombinatorialSimplex
from .complex import (
    ComplexError,
    HomologyGroup,
    ManifoldError,
    SimplicialChain,
    SimplicialComplex,
    barycentric_subdivide,
    boundary_of_simplex,
    fundamental_cycle,
    homology,
    klein_bottle,
    load_complex,
    standard_simplex,
    tetrahedron_boundary,
    torus7,
    triangle,
)
from .kernel import BACKEND
from .search import (
    Budget,
    Certified,
    Exhausted,
    enumerate_combinatorial_chains,
    semi_decide,
    simvol_events,
    simvol_stream,
    stream_cells,
)
from .snf import smith_normal_form, solve_integer
from .witness import Verdict, Witness, concatenate, make_witness, refine, verify_witness

__all__ = [
    "BACKEND",
    "Budget",
    "Certified",
    "CombinatorialSimplex",
    "ComplexError",
    "Exhausted",
    "HomologyGroup",
    "ManifoldError",
    "SimplicialChain",
    "SimplicialComplex",
    "Verdict",
    "Witness",
    "barycentric_subdivide",
    "boundary_of_simplex",
    "concatenate",
    "enumerate_combinatorial_chains",
    "fundamental_cycle",
    "homology",
    "klein_bottle",
    "load_complex",
    "make_witness",
    "refine",
    "semi_decide",
    "simvol_events",
    "simvol_stream",
    "smith_normal_form",
    "solve_integer",
    "standard_simplex",
    "stream_cells",
    "tetrahedron_boundary",
    "torus7",
    "triangle",
    "verify_witness",
]
