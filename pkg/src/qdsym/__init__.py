"""Quadrature domains from rational normal matrix symbols.

Construct Blaschke-Potapov based matrix functions, verify the winding
criterion for generating a quadrature domain, compute the subnormal
matrix parameters (C, Lambda), discriminant curves, quadrature nodes and
weights, and polynomial defining equations.
"""

from .errors import (BoundaryPole, BranchAmbiguity, ConditioningError,
                     DegenerateCurve, DegenerateInput, DegreeBoundError,
                     EmptyModelSpace, FactorizationAmbiguous,
                     IllPosedComposition, InvalidFactor, InvalidTestFunction,
                     LeadingDropWarning, NoData, PreconditionViolation,
                     QdsymError, SymmetryViolation, TooCloseToBoundary)
from .exact import GaussianRational, gr
from .polys import (BivarPoly, CPoly, CRatFun, PolyMatrix, bivar_fit,
                    poly_roots, resultant, resultant_numeric)
from .symbols import (BlaschkeFactorSpec, BlaschkePotapov, Classification,
                      MatrixSymbol, ScalarBivarRational, bp_build,
                      classify_symbol, compose_psi, fourier_coeffs)
from .curves import (CurveTrace, DomainReport, GridSpec, membership,
                     trace_branches, verify_generates_domain, winding_number,
                     winding_from_trace, winding_grid)
from .sections import (OperatorSection, SectionRankReport, hankel_section,
                       normality_defect, self_commutator_rank,
                       toeplitz_section)
from .subnormal import (CoprimeFactorization, DiscriminantCurve, ModelBasis,
                        SubnormalParams, area_from_C, coprime_factorize,
                        discriminant_poly, matrix_parameters, model_basis)
from .domains import (AhlforsSample, DefiningEquation, Example1Scenario,
                      Example2Scenario, NodeWeightSet, UnivalenceReport,
                      ZBranches, ahlfors_curve_sample, defining_equation,
                      example1_build, example2_build, example3_build,
                      make_reflected_grid, measure_area,
                      schwartz_nodes_weights, trace_z_branches,
                      univalence_check, verify_quadrature_identity)

__version__ = "0.1.0"
