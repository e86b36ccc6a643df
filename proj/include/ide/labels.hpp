#ifndef IDE_LABELS_HPP
#define IDE_LABELS_HPP

#include <vector>

#include "ide/network.hpp"

namespace ide {

/// Node labels at a fixed time: exact shortest instantaneous travel times to
/// the sink, the active edge set, and (once a rate plan is fixed) the right
/// slopes of the labels.
struct LabelState {
    std::vector<Rational> value;  // per node
    std::vector<Rational> slope;  // per node, filled by the distribution pass
    std::vector<char> active;     // per edge, exact equality test
};

/// Instantaneous travel time tau_e + q_e / nu_e.
Rational edge_cost(const Edge& e, const Rational& queue);

/// Labels by shortest paths with weights tau_e + q_e/nu_e > 0, plus the
/// active set by exact equality. `queues` holds q_e(theta) per edge.
LabelState compute_labels(const Network& n, const std::vector<Rational>& queues);

/// Per-edge queue-derivative g_e(z)/nu_e given the queue sign at theta.
Rational cost_slope(const Edge& e, bool queue_positive, const Rational& inflow_rate);

/// Right slopes of all labels under a fixed rate plan, computed along a
/// sink-first topological order: slope_v = min over active e=vw of
/// g_e(z_e)/nu_e + slope_w.
std::vector<Rational> label_slopes(const Network& n, const LabelState& ls,
                                   const std::vector<Rational>& rates,
                                   const std::vector<Rational>& queues,
                                   const std::vector<NodeId>& order);

/// Instance constant L bounding |label slope| for every feasible flow:
/// L = sum_e max(1, L_e) with L_e = (sum of capacities into tail(e) + max
/// network inflow at tail(e)) / nu_e.
Rational slope_bound(const Network& n);

/// The maintained acyclic edge superset and its topological order (sink
/// first). The order is valid for every active set contained in the superset.
struct OrderState {
    std::vector<char> in_tilde;   // per edge
    std::vector<NodeId> order;    // sink first; heads precede tails
    std::vector<int> position;    // inverse of order
};

struct RemovedEdge {
    EdgeId edge;
    Rational tail_label;
    Rational head_label;
};

/// Sink-first topological order over the whole edge set; InternalError on a
/// cyclic graph (callers check acyclicity first).
std::vector<NodeId> full_topological_order(const Network& n);

/// Builds the initial order state from the active set at time 0.
OrderState initial_order(const Network& n, const LabelState& ls);

/// True when some active edge is missing from the superset.
bool needs_refresh(const OrderState& os, const LabelState& ls);

/// Adds the active edges to the superset, then removes from each remaining
/// cycle the edge maximizing head label minus tail label (ties by smallest
/// edge id) until acyclic, and recomputes the order. Every removed edge must
/// have tail label strictly below head label; anything else is a bug.
std::vector<RemovedEdge> refresh_order(OrderState& os, const Network& n, const LabelState& ls);

}  // namespace ide

#endif
