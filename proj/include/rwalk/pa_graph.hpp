#ifndef RWALK_PA_GRAPH_HPP
#define RWALK_PA_GRAPH_HPP

// Preferential-attachment trees and the step schedules they induce.  Each
// growth step attaches one new vertex to an existing vertex i with
// probability (d_i + delta) / (2(n-1) + n*delta); the running maximum degree
// then drives r_n = lambda * d_max(n) / (n+1).

#include <cstdint>
#include <vector>

#include "rwalk/rng.hpp"
#include "rwalk/schedule.hpp"

namespace rwalk {

struct PAGraph {
    double delta = 0.0;  // attachment bias, > -1
    std::vector<std::uint32_t> degrees;
    // Flattened edge list, two entries per edge; sampling proportional to
    // degree is a uniform pick from this list.
    std::vector<std::uint32_t> endpoints;
    // Lowest-index vertex of maximal degree (fixed tie-break so runs are
    // reproducible).
    std::size_t max_degree_vertex = 0;

    std::size_t n_vertices() const { return degrees.size(); }
    std::uint32_t max_degree() const { return degrees[max_degree_vertex]; }
};

// Two vertices joined by one edge.
PAGraph pa_seed(double delta);

// Full structural check: degree sum, endpoint multiplicities, max-degree
// bookkeeping.  Throws std::invalid_argument on any violation.
void validate(const PAGraph& graph);

// Attachment probabilities (d_i + delta) / (2(n-1) + n*delta) over the
// current vertices.
std::vector<double> attach_distribution(const PAGraph& graph);

void pa_grow_in_place(PAGraph& graph, RandomStream& stream);

// One growth step: adds a vertex with a single edge.
PAGraph pa_grow(PAGraph graph, RandomStream& stream);

// Grows a seed graph until it has n_max vertices and returns the running
// maximum degree indexed by vertex count.  Entries 0 and 1 (vertex counts
// with no tree yet) are padded with degree 1 so the sequence can be used for
// walk steps from n = 0.
std::vector<std::uint32_t> pa_max_degree_trajectory(double delta,
                                                    std::size_t n_max,
                                                    RandomStream& stream);

// GraphDerived schedule r_n = lambda * max_degrees[n] / (n+1).
StepSchedule graph_to_schedule(std::vector<std::uint32_t> max_degrees,
                               double lambda);

// Same, reading the maximum degrees off a consecutively grown trajectory
// (sizes 2, 3, ...).
StepSchedule graph_to_schedule(const std::vector<PAGraph>& trajectory,
                               double lambda);

}  // namespace rwalk

#endif
