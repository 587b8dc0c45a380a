"""Exact Zariski decompositions, Zariski chambers, Minkowski bases and
Okounkov polygons on surfaces with rational polyhedral effective cone."""

from .cones import ConeRep, FaceLattice, dual_cone, face_lattice, membership, nef_cone, nef_rays
from .errors import MinkBasisError
from .minkowski import (
    CardinalityReport,
    Flag,
    MinkowskiBasis,
    cardinality_report,
    decompose_nef,
    minkowski_basis,
    minkowski_element,
)
from .ns_lattice import (
    DivisorClass,
    SurfaceDatum,
    adjunction_genus,
    cremona,
    del_pezzo,
    enumerate_negative_curves,
    enumerate_nef_nonbig,
    intersect,
    load_surface,
    weyl_orbit,
)
from .okounkov import Polygon, alpha_beta, area, minkowski_sum, mu_max, okounkov_body
from .zariski import (
    ChamberSupport,
    ZariskiDecomposition,
    chamber_witness,
    count_chambers,
    enumerate_chambers,
    is_big,
    is_nef,
    is_pseudoeffective,
    neg_support,
    zariski_decompose,
)

__version__ = "0.1.0"
