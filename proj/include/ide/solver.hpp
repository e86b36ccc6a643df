#ifndef IDE_SOLVER_HPP
#define IDE_SOLVER_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ide/flow.hpp"
#include "ide/labels.hpp"
#include "ide/network.hpp"

namespace ide {

enum class SolveMode { AutoDetect, Acyclic, General };

struct SolverConfig {
    /// Stop at this time; unset runs until the network empties.
    std::optional<Rational> horizon;
    /// Safety cap on extension steps (general) / local phases (acyclic).
    long max_steps = 200000;
    /// Forced out-edge per node, applied while the node has positive gross
    /// inflow. Only sound at nodes whose active out-edges are tied.
    std::map<NodeId, EdgeId> hints;
    SolveMode mode = SolveMode::AutoDetect;
    /// When set, receives one structured log line per phase with labels,
    /// active set, maintained edge set and node order.
    std::ostream* debug_labels = nullptr;
};

enum class EventKind { InflowBreak, GrossInflowBreak, QueueDepletion, Activation, OrderRefresh };

const char* event_kind_name(EventKind k);

struct Event {
    Rational time;
    EventKind kind;
    int subject;  // node id for (gross-)inflow breaks, edge id otherwise, -1 for refresh
    bool operator==(const Event&) const = default;
};

enum class SolveStatus { Completed, HorizonReached, StepLimit };

struct SolveResult {
    FlowOverTime flow;
    std::vector<PhaseRecord> phases;
    std::vector<Event> events;
    bool terminated = false;
    std::optional<Rational> termination_time;
    SolveStatus status = SolveStatus::Completed;
    long steps = 0;
    std::vector<Rational> order_refresh_times;
    std::vector<std::pair<Rational, RemovedEdge>> removed_edges;
};

/// Alpha-extension solver for general single-sink networks: per phase,
/// recompute labels and the active set, keep the maintained acyclic edge
/// superset topologically ordered, split every node's gross inflow by water
/// filling, extend by the maximal alpha, repeat until the network empties.
SolveResult solve_general(const Network& n, const SolverConfig& cfg);

/// Window-based variant for acyclic networks: a static topological order,
/// outer loop over windows of length tau_min, per-node cover of the window
/// by maximal local phases. Produces the same flow and phase list as
/// solve_general under equal tie-breaking. Throws InputError on cyclic input.
SolveResult solve_acyclic(const Network& n, const SolverConfig& cfg);

/// Mode dispatch: AutoDetect picks the acyclic variant for acyclic graphs.
SolveResult solve(const Network& n, const SolverConfig& cfg);

/// Maximal extension length at `theta` for a fixed rate plan, together with
/// the events at theta + alpha that bound it (empty when only the knowledge
/// horizon binds). Exposed for tests.
struct AlphaBound {
    Rational alpha;
    std::vector<Event> events;
};
AlphaBound extension_alpha(const Network& n, const FlowOverTime& f, const Rational& theta,
                           const std::vector<Rational>& rates, const LabelState& ls,
                           const std::vector<Rational>& queues,
                           const std::optional<Rational>& hard_cap);

/// Self-contained JSON document: embedded network, phase list, event log,
/// flow functions, termination data. Deterministic byte stream.
std::string serialize_solve_result(const SolveResult& r, const Network& n);

struct SolveDocument {
    Network network;
    FlowOverTime flow;
    std::vector<PhaseRecord> phases;
};
SolveDocument parse_solve_document(const std::string& text);

/// Event log as a line stream: `theta=p/q kind=... edge=...`.
std::string format_event_log(const std::vector<Event>& events, const Network& n);

}  // namespace ide

#endif
