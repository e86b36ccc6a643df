#ifndef IDE_NETWORK_HPP
#define IDE_NETWORK_HPP

#include <map>
#include <string>
#include <vector>

#include "ide/rational.hpp"
#include "ide/step_function.hpp"

namespace ide {

using NodeId = int;
using EdgeId = int;

struct Edge {
    NodeId tail = -1;
    NodeId head = -1;
    Rational transit_time;  // tau > 0
    Rational capacity;      // nu > 0
};

struct InstanceStats {
    Rational tau_min;
    int max_out_degree = 0;
    int inflow_breakpoint_count = 0;
    Rational total_inflow_volume;
};

/// The static problem instance: directed graph with per-edge transit time and
/// capacity, per-node inflow profile, and a single sink reachable from every
/// node. Node ids are strings in files and dense integers internally; edge
/// order is file order and serves as the global tie-break key.
class Network {
public:
    Network(std::vector<std::string> node_names, NodeId sink, std::vector<Edge> edges,
            std::map<NodeId, StepFunction> inflows);

    int node_count() const { return static_cast<int>(node_names_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    NodeId sink() const { return sink_; }

    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<EdgeId>& out_edges(NodeId v) const { return out_[v]; }
    const std::vector<EdgeId>& in_edges(NodeId v) const { return in_[v]; }

    const std::string& node_name(NodeId v) const { return node_names_[v]; }
    NodeId node_id(const std::string& name) const;

    /// Network inflow profile u_v, identically zero when absent in the file.
    const StepFunction& inflow(NodeId v) const { return inflows_[v]; }

    const Rational& tau_min() const { return tau_min_; }

    /// True when the graph has no directed cycle.
    bool is_acyclic() const;

    InstanceStats stats() const;

private:
    void validate() const;

    std::vector<std::string> node_names_;
    std::map<std::string, NodeId> name_to_id_;
    NodeId sink_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> out_, in_;
    std::vector<StepFunction> inflows_;
    Rational tau_min_;
};

/// Parses the JSON network document (fields: nodes, sink, edges, inflows;
/// rationals as "p/q" strings). Throws InputError on schema or validation
/// failures.
Network parse_network(const std::string& text);

/// Inverse of parse_network; re-parsing the output yields an equal network.
std::string serialize_network(const Network& n);

}  // namespace ide

#endif
