"""Minimum fleet size via bipartite matching, with pairwise-incompatible certificates."""

from .compat import CompatibilityGraph, build_graph, compatible_directed, compatible_pair
from .duality import (IncompatibleCertificate, IndependentSet, VertexCover, build_certificate,
                      extract_pairs, independent_set, koenig_cover, verify_certificate)
from .errors import (FleetminError, InvalidInputError, InvariantViolation, OracleRefused,
                     ParseError, VerificationError)
from .fleet import (FleetSolution, SolveResult, Trajectory, decompose_trajectories, solve,
                    solve_instance, verify_solution)
from .matching import Matching, max_matching, verify_matching
from .model import (Euclidean, Instance, Line1D, Manhattan, Matrix, Trip, make_instance,
                    travel_time, validate_instance)

__version__ = "0.1.0"
