#ifndef IDE_VERIFIER_HPP
#define IDE_VERIFIER_HPP

#include <string>
#include <vector>

#include "ide/flow.hpp"
#include "ide/network.hpp"

namespace ide {

enum class ViolationKind {
    Conservation,
    QueueNegative,
    OutflowRule,
    NoOutflowBeforeTau,
    InactiveEdgeInflow,
    SinkOverflow,
};

const char* violation_kind_name(ViolationKind k);

struct Violation {
    ViolationKind kind;
    std::string location;  // node or edge name
    Rational time;
    std::string details;
};

/// Checks feasibility and the equilibrium property of a flow against its
/// network, sharing no label or queue code with the solver: queues are
/// recomputed from the inflows via the cumulative-minimum formula, labels
/// from scratch by Bellman-Ford. Every maximal constant-rate interval is
/// sampled at both endpoints and its midpoint, which is exact because all
/// checked identities are affine there. Empty result = pass.
std::vector<Violation> verify(const Network& n, const FlowOverTime& f);

/// True iff every queue satisfies q(t + period) == q(t) exactly on the
/// joint breakpoint lattice of the two periods after window_start. The flow
/// must be defined for at least two periods past the window start.
bool check_periodicity(const FlowOverTime& f, const Network& n, const Rational& window_start,
                       const Rational& period);

/// JSON array report, one object per violation.
std::string violations_report(const std::vector<Violation>& vs);

}  // namespace ide

#endif
