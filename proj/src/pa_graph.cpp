#include "rwalk/pa_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rwalk {

PAGraph pa_seed(double delta) {
    if (!(delta > -1.0)) {
        throw std::invalid_argument("attachment bias delta must exceed -1");
    }
    PAGraph g;
    g.delta = delta;
    g.degrees = {1, 1};
    g.endpoints = {0, 1};
    g.max_degree_vertex = 0;
    return g;
}

void validate(const PAGraph& graph) {
    if (!(graph.delta > -1.0)) {
        throw std::invalid_argument("attachment bias delta must exceed -1");
    }
    const std::size_t n = graph.degrees.size();
    if (n < 2) {
        throw std::invalid_argument("graph needs at least two vertices");
    }
    if (graph.endpoints.size() != 2 * (n - 1)) {
        throw std::invalid_argument("edge count must be n_vertices - 1");
    }
    std::vector<std::uint32_t> counts(n, 0);
    for (std::uint32_t v : graph.endpoints) {
        if (v >= n) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        ++counts[v];
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (counts[i] == 0) {
            throw std::invalid_argument("vertex " + std::to_string(i) +
                                        " is isolated");
        }
        if (counts[i] != graph.degrees[i]) {
            throw std::invalid_argument("degree of vertex " +
                                        std::to_string(i) +
                                        " disagrees with the edge list");
        }
    }
    if (graph.max_degree_vertex >= n) {
        throw std::invalid_argument("max-degree vertex out of range");
    }
    auto leader = std::max_element(graph.degrees.begin(),
                                   graph.degrees.end());
    // max_element returns the first maximum, which is exactly the
    // lowest-index tie-break the growth step maintains.
    if (graph.max_degree_vertex !=
        static_cast<std::size_t>(leader - graph.degrees.begin())) {
        throw std::invalid_argument(
            "max-degree bookkeeping disagrees with the degree vector");
    }
}

std::vector<double> attach_distribution(const PAGraph& graph) {
    const std::size_t n = graph.degrees.size();
    const double total =
        2.0 * static_cast<double>(n - 1) + static_cast<double>(n) * graph.delta;
    std::vector<double> probs(n);
    for (std::size_t i = 0; i < n; ++i) {
        probs[i] = (static_cast<double>(graph.degrees[i]) + graph.delta) /
                   total;
    }
    return probs;
}

namespace {

std::size_t pick_target(const PAGraph& graph, RandomStream& stream) {
    const std::size_t n = graph.degrees.size();
    const double edge_weight = static_cast<double>(graph.endpoints.size());
    if (graph.delta >= 0.0) {
        // One uniform drives both the degree/uniform mixture and the index
        // within the chosen part.
        const double total = edge_weight + static_cast<double>(n) * graph.delta;
        double w = stream.next_uniform() * total;
        if (w < edge_weight) {
            auto slot = static_cast<std::size_t>(w);
            return graph.endpoints[std::min(slot, graph.endpoints.size() - 1)];
        }
        auto v = static_cast<std::size_t>((w - edge_weight) / graph.delta);
        return std::min(v, n - 1);
    }
    // Negative bias: propose proportional to degree, thin down to
    // degree + delta.  Acceptance exceeds (2 + delta) / 2 > 1/2.
    for (;;) {
        auto slot = static_cast<std::size_t>(stream.next_uniform() *
                                             edge_weight);
        std::uint32_t cand =
            graph.endpoints[std::min(slot, graph.endpoints.size() - 1)];
        double accept = (static_cast<double>(graph.degrees[cand]) +
                         graph.delta) /
                        static_cast<double>(graph.degrees[cand]);
        if (stream.next_uniform() < accept) return cand;
    }
}

}  // namespace

void pa_grow_in_place(PAGraph& graph, RandomStream& stream) {
    if (graph.degrees.size() < 2) {
        throw std::invalid_argument("graph needs at least two vertices");
    }
    const std::size_t target = pick_target(graph, stream);
    const auto fresh = static_cast<std::uint32_t>(graph.degrees.size());
    graph.endpoints.push_back(static_cast<std::uint32_t>(target));
    graph.endpoints.push_back(fresh);
    ++graph.degrees[target];
    graph.degrees.push_back(1);
    std::uint32_t grown = graph.degrees[target];
    std::uint32_t best = graph.degrees[graph.max_degree_vertex];
    if (grown > best || (grown == best && target < graph.max_degree_vertex)) {
        graph.max_degree_vertex = target;
    }
}

PAGraph pa_grow(PAGraph graph, RandomStream& stream) {
    pa_grow_in_place(graph, stream);
    return graph;
}

std::vector<std::uint32_t> pa_max_degree_trajectory(double delta,
                                                    std::size_t n_max,
                                                    RandomStream& stream) {
    if (n_max < 2) {
        throw std::invalid_argument(
            "trajectory needs at least the two-vertex seed");
    }
    PAGraph g = pa_seed(delta);
    std::vector<std::uint32_t> md(n_max + 1, 1);
    md[2] = g.max_degree();
    while (g.n_vertices() < n_max) {
        pa_grow_in_place(g, stream);
        md[g.n_vertices()] = g.max_degree();
    }
    return md;
}

StepSchedule graph_to_schedule(std::vector<std::uint32_t> max_degrees,
                               double lambda) {
    GraphDerivedSchedule sched{lambda, std::move(max_degrees)};
    StepSchedule out = std::move(sched);
    validate(out);
    return out;
}

StepSchedule graph_to_schedule(const std::vector<PAGraph>& trajectory,
                               double lambda) {
    std::vector<std::uint32_t> md;
    md.reserve(trajectory.size() + 2);
    md.push_back(1);
    md.push_back(1);
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
        if (trajectory[k].n_vertices() != k + 2) {
            throw std::invalid_argument(
                "trajectory must grow one vertex at a time from the seed");
        }
        md.push_back(trajectory[k].max_degree());
    }
    return graph_to_schedule(std::move(md), lambda);
}

}  // namespace rwalk
