"""Shifted combinatorial optimization over explicit sets, oracles and
bounded-treewidth graph structures."""

from .errors import (
    ArithmeticOverflow, CapExceeded, DecomposabilityViolated, DimensionMismatch,
    InvalidDecomposition, NotShifted, OracleProtocolError, ShiftOptError, SupportTooLarge,
)
from .shift import (
    ColumnMatrix, CostMatrix, Shape, WeightFunctions, sco_objective, shift, shiftedness,
    weight_functions,
)
from .explicit import (
    Composition, ExplicitInstance, LinOptOracle, OracleSolution, SolveResult, Status,
    brute_force_tuples, count_compositions, f_eval, solve_auto, solve_concave, solve_enum,
    solve_linopt_oracle, solve_vertex,
)
from .graph import Graph
from .treedec import (
    NiceDecomposition, TreeDecomposition, make_nice, min_fill_decomposition,
    validate_decomposition,
)
from .csp import CspInstance, CspSolution, HardConstraint, SoftConstraint, csp_brute, csp_solve
from .ilp import (
    DecomposableExtension, IlpSolution, IlpSystem, SeparableObjective, decompose,
    integer_points, separable_min,
)
from .catalog import BagAutomaton, Predicate, RunPolytope, build_automaton, enumerate_sets, run_polytope
from .pipeline import (
    PipelineResult, ab_coloring, chromatic_number, domatic_number, partition_solve,
    solve_sco_extension,
)
from .reductions import (
    MscInstance, WsmInstance, WsmSet, WsmSolution, build_lexicographic_objective,
    build_vulnerability_objective, domset_to_sco, msc_to_sco, solve_wsm,
)

__version__ = "0.1.0"
