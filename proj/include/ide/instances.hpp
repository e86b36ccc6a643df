#ifndef IDE_INSTANCES_HPP
#define IDE_INSTANCES_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ide/network.hpp"

namespace ide {

struct CnfFormula {
    int variable_count = 0;
    std::vector<std::array<int, 3>> clauses;  // signed 1-based variable indices
};

/// DIMACS clause list: `p cnf n m` header, zero-terminated clauses, exactly
/// three literals each.
CnfFormula parse_dimacs(const std::string& text);

/// The five-node oscillating instance: s->v (1,2), s->w (1,2), v->t (1,1),
/// w->x (1,1), x->t (1,1), inflow 2 at s on [0, U]. Its unique equilibrium
/// cycles with period four but ever-shrinking sub-phases, so the number of
/// phases grows linearly in U.
Network gen_oscillator(const Rational& U);

/// Structured result of the formula-to-network construction, with the
/// handles the behavioral checks need.
struct ThreeSatLayout {
    Network network;
    NodeId s1 = -1;                                     // indicator source
    NodeId s2 = -1;                                     // diversion collector
    NodeId subnet_source = -1;                          // wrapped network's source
    EdgeId s2_bottleneck = -1;                          // the capacity-1 edge s2->v
    EdgeId s1_to_subnet = -1;                           // indicator edge into the subnetwork
    std::vector<NodeId> clause_sources;                 // per clause
    std::vector<std::array<EdgeId, 3>> literal_edges;   // per clause, per literal
};

/// Builds the network for a 3-CNF formula: one source per clause feeding
/// three literal edges, one gadget per variable whose conflicting use spills
/// volume towards the collector node, and an indicator wrapping the given
/// subnetwork (single acyclic source/sink network with one constant inflow
/// interval starting at 0) that stays empty exactly when no spill arrives.
ThreeSatLayout gen_3sat(const CnfFormula& f, const Network& indicator_subnet);

/// Random DAG with enforced sink reachability and small integer data;
/// deterministic in the seed. density_percent adds extra forward edges,
/// rate_scale bounds inflow rates.
Network gen_random_acyclic(std::uint64_t seed, int node_count, int density_percent,
                           int rate_scale);

/// Random single-sink network with directed cycles (back edges added on top
/// of a reachability-preserving forward skeleton).
Network gen_random_cyclic(std::uint64_t seed, int node_count, int density_percent,
                          int rate_scale);

}  // namespace ide

#endif
