"""Numerical toolkit for the restricted unitary group on a split Hilbert space,
its centrally extended Lie-Poisson predual and the restricted Grassmannian."""

from __future__ import annotations

from .core import (
    DEFAULT_TOL,
    BlockOperator,
    PredualElement,
    RestrictedElement,
    SplitSpace,
    Tolerances,
    UnitaryElement,
    commutator,
    cone_pair_check,
    d_commutator,
    exp_offdiagonal,
    expm,
    operator_from_json,
    operator_to_json,
    polar,
    positivity_bound_check,
    predual_norm,
    restricted_norm,
    schatten_norm,
)
from .diagonalize import (
    block_diagonalize,
    carey_conditions,
    hinkkanen_check,
    in_neighborhood_v0,
    riccati_solve,
    spectral_gap,
    spectral_subalgebra,
)
from .errors import *  # noqa: F401,F403
from .grassmann import (
    GrassmannPoint,
    act,
    geodesic,
    grassmann_from_basis,
    grassmann_log,
    omega_gr,
    omega_gr_hom,
    phi_gamma,
    pullback_check,
)
from .lie_poisson import (
    ExtendedAlgebraElement,
    ExtendedElement,
    ScalarField,
    affine_action,
    characteristic_subspace,
    coad,
    cocycle_s,
    extended_bracket,
    fd_gradient,
    fundamental_field,
    hamiltonian_field,
    isotropy_algebra,
    pairing,
    poisson_bracket,
    sigma,
)
from .pathology import build_unbounded_family, cartan_witness, centralizer_of_J, cone_span_demo

__version__ = "0.1.0"
