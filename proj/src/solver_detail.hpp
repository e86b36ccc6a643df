#ifndef IDE_SOLVER_DETAIL_HPP
#define IDE_SOLVER_DETAIL_HPP

#include <optional>
#include <vector>

#include "ide/flow.hpp"
#include "ide/labels.hpp"
#include "ide/network.hpp"
#include "ide/solver.hpp"
#include "ide/waterfill.hpp"

namespace ide::detail {

/// Network drained at theta: no queued flow, no flow in transit, no inflow
/// left. Once true the zero extension is the unique continuation.
bool is_empty(const Network& n, const FlowOverTime& f, const Rational& theta);

/// Latest time anything moves: max over network-inflow and edge-outflow
/// support ends.
Rational quiet_time(const Network& n, const FlowOverTime& f);

/// Splits b over the active out-edges of v by water filling (or by the
/// forced hint edge) and writes the chosen rates into `rates`. Returns the
/// node's label right-slope. `slopes` must already hold the downstream
/// values.
Rational distribute_node(const Network& n, NodeId v, const Rational& b,
                         const LabelState& ls, const std::vector<Rational>& queues,
                         const std::vector<Rational>& slopes,
                         const std::map<NodeId, EdgeId>& hints, std::vector<Rational>& rates);

/// Edges active at theta whose marginal slope equals the node slope; these
/// stay active on the open phase interval.
std::vector<EdgeId> interior_active(const Network& n, const LabelState& ls,
                                    const std::vector<Rational>& rates,
                                    const std::vector<Rational>& queues,
                                    const std::vector<Rational>& slopes);

/// Gross node inflow value at theta (right limit).
Rational gross_inflow_value(const Network& n, const FlowOverTime& f, NodeId v,
                            const Rational& theta);

/// Throws InputError on nonpositive horizon or step cap.
void validate_config(const SolverConfig& cfg);

void sort_events(std::vector<Event>& events);

}  // namespace ide::detail

#endif
