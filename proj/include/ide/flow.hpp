#ifndef IDE_FLOW_HPP
#define IDE_FLOW_HPP

#include <string>
#include <utility>
#include <vector>

#include "ide/network.hpp"
#include "ide/pwlinear.hpp"
#include "ide/step_function.hpp"

namespace ide {

/// One maximal extension of the construction: constant edge inflow rates on
/// [start, end), labels at start with their right slopes, and the edges that
/// are active on the open interval.
struct PhaseRecord {
    Rational start;
    Rational end;
    std::vector<Rational> inflow_rates;                 // per edge id
    std::vector<std::pair<Rational, Rational>> labels;  // per node: (value, right slope)
    std::vector<EdgeId> active_interior;                // sorted edge ids
    bool operator==(const PhaseRecord&) const = default;
};

/// Per-edge dynamic state. The inflow is defined on [0, frontier), the
/// outflow on [0, frontier + tau), and the queue on [0, frontier]; the queue
/// is derived from the inflow and never mutated independently.
struct EdgeFlow {
    StepFunction inflow;
    StepFunction outflow;
    PWLinear queue;
    Rational frontier;
    bool operator==(const EdgeFlow&) const = default;
};

class FlowOverTime {
public:
    FlowOverTime() = default;
    explicit FlowOverTime(const Network& n);

    const EdgeFlow& edge(EdgeId e) const { return edges_[e]; }
    EdgeFlow& edge_mutable(EdgeId e) { return edges_[e]; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    Rational queue_at(EdgeId e, const Rational& t) const { return edges_[e].queue.value_at(t); }

    /// Extends one edge by [frontier, to) at a constant inflow rate,
    /// propagating outflow and queue. The rate plan must keep the queue
    /// nonnegative without an interior depletion (depletions end phases).
    void extend_edge(const Network& n, EdgeId e, const Rational& to, const Rational& rate);

    /// Cuts every edge function back to frontier `t`.
    void truncate_at(const Network& n, const Rational& t);

    bool operator==(const FlowOverTime&) const = default;

private:
    std::vector<EdgeFlow> edges_;
};

/// Exact Vickrey queue dynamics for one edge: from the inflow alone, derive
/// the outflow on [0, upto + tau) and the queue on [0, upto]. The queue
/// drains at capacity while positive; outflow follows the two-branch rule.
std::pair<StepFunction, PWLinear> propagate_outflow(const Rational& tau, const Rational& nu,
                                                    const StepFunction& f_plus);

/// Gross node inflow b_v on [from, to): incoming edge outflows plus the
/// network inflow. All incoming outflows must be determined through `to`.
StepFunction gross_node_inflow(const FlowOverTime& f, const Network& n, NodeId v,
                               const Rational& from, const Rational& to);

/// Advances all frontiers from p.start to p.end with p's constant rates.
void commit_phase(FlowOverTime& f, const Network& n, const PhaseRecord& p);

/// CSV trace with one row per (edge, constant-rate interval); exact rationals
/// plus decimal columns for plotting.
std::string trace_csv(const FlowOverTime& f, const Network& n);

}  // namespace ide

#endif
