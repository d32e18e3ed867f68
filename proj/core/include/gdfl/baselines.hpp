#ifndef GDFL_BASELINES_HPP
#define GDFL_BASELINES_HPP

#include "gdfl/graph.hpp"
#include "gdfl/qubo.hpp"

namespace gdfl {

/**
 * Degree-based greedy algorithm.
 *
 * MaxCut: nodes in descending degree order (ties to the smaller index) join
 * the side that cuts more weight to already placed neighbours; ties go to
 * side S (x = 1).
 * MIS: repeatedly take the node of minimum residual degree, then delete it
 * and its neighbours.
 * MVC: repeatedly take the node of maximum residual degree and delete its
 * incident edges until none remain.
 * Residual-degree ties go to the smaller index.
 */
BinaryAssignment dga(ProblemKind kind, const Graph& g);

/// First-improvement 1-flip descent in ascending node order. Only flips that
/// keep the assignment feasible are considered. Throws InvalidArgument when
/// x0 is infeasible.
BinaryAssignment one_flip_local_search(ProblemKind kind, const Graph& g,
                                       BinaryAssignment x0);

}  // namespace gdfl

#endif  // GDFL_BASELINES_HPP
