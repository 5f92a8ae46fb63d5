"""Exact-arithmetic toolkit for the central-model combinatorics of rational
surfaces: Picard-lattice enumeration, regular CW complexes with integer
homology, surface central-model chain complexes, and a formal abelian-group
calculus with first-quadrant spectral sequences."""

from .smith import FGAbelianGroup, SNFResult, smith_normal_form
from .lattice import BlowupLattice, DivisorClass, IncidenceGraph
from .complexes import (
    Cell,
    IntegerChainComplex,
    RegularCWComplex,
    load_complex_file,
)
from .surfaces import (
    BaseCase,
    GeneratorUniverse,
    SurfaceCentralModel,
    boundary,
    cubic_summary,
    elementary_transformation,
    enumerate_generators,
    row0_complex,
    row0_homology,
    syzygy_sphere_bl3,
    two_ray_game,
)
from .formal import (
    Atom,
    FormalGroup,
    FormalHom,
    check_exact,
    cokernel,
    homology_at,
    kernel,
    solve_extension,
)
from .spectral import (
    KnownHomologyRegistry,
    SpectralGrid,
    cremona_assemble,
    default_registry,
    five_term,
    k2_prime_candidates,
    schur_aut_quadric,
    schur_pgl,
    seven_term,
)

__version__ = "0.1.0"
