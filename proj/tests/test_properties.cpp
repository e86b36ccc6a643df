#include <doctest.h>

#include "ide/instances.hpp"
#include "ide/labels.hpp"
#include "ide/network.hpp"
#include "ide/solver.hpp"

using ide::Network;
using ide::Rational;
using ide::SolveResult;
using ide::SolverConfig;

namespace {
Rational r(long num, long den = 1) { return Rational(num, den); }
}  // namespace

TEST_CASE("tau_min is attained by some edge") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Network n = ide::gen_random_acyclic(seed, 6, 30, 3);
        ide::InstanceStats s = n.stats();
        bool attained = false;
        for (const ide::Edge& e : n.edges()) {
            CHECK(s.tau_min <= e.transit_time);
            attained = attained || s.tau_min == e.transit_time;
        }
        CHECK(attained);
    }
}

TEST_CASE("bellman optimality of the computed labels") {
    struct Rng {
        std::uint64_t state;
        int below(int n) {
            std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return static_cast<int>((z ^ (z >> 31)) % n);
        }
    } rng{99};
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        Network n = ide::gen_random_cyclic(seed, 6, 30, 3);
        std::vector<Rational> queues(n.edge_count());
        for (auto& q : queues) q = Rational(rng.below(9), 1 + rng.below(3));
        ide::LabelState ls = ide::compute_labels(n, queues);
        for (ide::EdgeId e = 0; e < n.edge_count(); ++e) {
            const ide::Edge& ed = n.edge(e);
            Rational through = ls.value[ed.head] + ide::edge_cost(ed, queues[e]);
            CHECK(ls.value[ed.tail] <= through);
            CHECK(ls.active[e] == (ls.value[ed.tail] == through));
        }
        // every node keeps at least one active out-edge (the sink excepted)
        for (ide::NodeId v = 0; v < n.node_count(); ++v) {
            if (v == n.sink()) continue;
            bool any = false;
            for (ide::EdgeId e : n.out_edges(v)) any = any || ls.active[e];
            CHECK(any);
        }
    }
}

TEST_CASE("label slopes at phase starts respect the instance bound") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Network n = ide::gen_random_cyclic(seed, 6, 25, 3);
        Rational bound = ide::slope_bound(n);
        SolverConfig cfg;
        SolveResult res = ide::solve(n, cfg);
        for (const auto& p : res.phases) {
            for (const auto& [value, slope] : p.labels) CHECK(ide::abs(slope) <= bound);
        }
    }
}

TEST_CASE("volume conservation at termination") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Network n = ide::gen_random_acyclic(seed, 7, 30, 3);
        SolverConfig cfg;
        SolveResult res = ide::solve(n, cfg);
        REQUIRE(res.terminated);
        Rational arrived(0);
        for (ide::EdgeId e : n.in_edges(n.sink())) {
            const ide::StepFunction& out = res.flow.edge(e).outflow;
            arrived += out.integrate(r(0), *out.domain_end());
        }
        CHECK(arrived == n.stats().total_inflow_volume);
    }
}

TEST_CASE("outflow rates never exceed the capacity") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        Network n = ide::gen_random_cyclic(seed, 6, 25, 3);
        SolverConfig cfg;
        SolveResult res = ide::solve(n, cfg);
        for (ide::EdgeId e = 0; e < n.edge_count(); ++e) {
            for (const auto& piece : res.flow.edge(e).outflow.pieces()) {
                CHECK(piece.value <= n.edge(e).capacity);
                CHECK(piece.value.sign() >= 0);
            }
        }
    }
}

TEST_CASE("unsatisfiable gadget feeds the wrapped network at full rate") {
    // after the bottleneck queue locks in, the indicator source routes its
    // whole inflow through the wrapped network; arrivals run at u_N from
    // shortly after 5 + theta0 through 5 + 2 theta0
    Network indicator = ide::parse_network(R"({
        "nodes": ["sN", "tN"],
        "sink": "tN",
        "edges": [{"tail": "sN", "head": "tN", "tau": "1", "nu": "2"}],
        "inflows": [{"node": "sN", "pieces": [{"from": "0", "to": "1", "rate": "2"}]}]
    })");
    ide::CnfFormula unsat = ide::parse_dimacs("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n");
    ide::ThreeSatLayout layout = ide::gen_3sat(unsat, indicator);
    SolverConfig cfg;
    SolveResult res = ide::solve(layout.network, cfg);
    REQUIRE(res.terminated);
    const ide::StepFunction& arrivals = res.flow.edge(layout.s1_to_subnet).outflow;
    // theta0 = 1: nothing before 6, rate u_N = 2 once the diversion locks in
    CHECK(arrivals.value_at(r(5)) == r(0));
    CHECK(arrivals.value_left_of(r(6)) == r(0));
    CHECK(arrivals.value_at(r(13, 2)) == r(2));
    CHECK(arrivals.value_left_of(r(7)) == r(2));
    CHECK(arrivals.value_at(r(7)) == r(0));
}
