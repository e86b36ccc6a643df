#include "ide/instances.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "ide/errors.hpp"
#include "ide/labels.hpp"

namespace ide {

namespace {

/// splitmix64: tiny, stable across platforms (std distributions are not).
struct Rng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

struct Builder {
    std::vector<std::string> names;
    std::map<std::string, NodeId> ids;
    std::vector<Edge> edges;
    std::map<NodeId, StepFunction> inflows;

    NodeId node(const std::string& name) {
        auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        NodeId v = static_cast<NodeId>(names.size());
        names.push_back(name);
        ids.emplace(name, v);
        return v;
    }
    EdgeId edge(const std::string& tail, const std::string& head, Rational tau, Rational nu) {
        edges.push_back({node(tail), node(head), std::move(tau), std::move(nu)});
        return static_cast<EdgeId>(edges.size() - 1);
    }
    void pulse(const std::string& at, Rational from, Rational to, Rational rate) {
        NodeId v = node(at);
        auto it = inflows.find(v);
        std::vector<std::tuple<Rational, Rational, Rational>> pieces{{from, to, rate}};
        if (it != inflows.end()) throw InternalError("instances: one pulse per node in builders");
        inflows.emplace(v, StepFunction::from_intervals(Rational(0), pieces));
    }
    Network build(const std::string& sink) {
        return Network(std::move(names), ids.at(sink), std::move(edges), std::move(inflows));
    }
};

}  // namespace

CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula f;
    std::istringstream in(text);
    std::string line;
    int expected_clauses = -1;
    std::vector<int> current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, cnf;
            if (!(ls >> p >> cnf >> f.variable_count >> expected_clauses) || cnf != "cnf")
                throw InputError("dimacs: bad problem line");
            continue;
        }
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (current.size() != 3) throw InputError("dimacs: clauses must have three literals");
                f.clauses.push_back({current[0], current[1], current[2]});
                current.clear();
            } else {
                if (std::abs(lit) > f.variable_count)
                    throw InputError("dimacs: literal out of range");
                current.push_back(lit);
            }
        }
    }
    if (!current.empty()) throw InputError("dimacs: unterminated clause");
    if (expected_clauses >= 0 && static_cast<int>(f.clauses.size()) != expected_clauses)
        throw InputError("dimacs: clause count does not match the header");
    if (expected_clauses < 0) throw InputError("dimacs: missing problem line");
    if (f.variable_count < 0) throw InputError("dimacs: negative variable count");
    return f;
}

Network gen_oscillator(const Rational& U) {
    if (U.sign() <= 0) throw InputError("oscillator: U must be positive");
    Builder b;
    b.node("s");
    b.node("v");
    b.node("w");
    b.node("x");
    b.node("t");
    b.edge("s", "v", Rational(1), Rational(2));
    b.edge("s", "w", Rational(1), Rational(2));
    b.edge("v", "t", Rational(1), Rational(1));
    b.edge("w", "x", Rational(1), Rational(1));
    b.edge("x", "t", Rational(1), Rational(1));
    b.pulse("s", Rational(0), U, Rational(2));
    return b.build("t");
}

namespace {

/// Free-flow distance from the source to the sink of an acyclic network.
Rational free_flow_distance(const Network& n, NodeId from) {
    std::vector<std::optional<Rational>> dist(n.node_count());
    dist[n.sink()] = Rational(0);
    // nodes in reverse topological order have all successors final
    std::vector<NodeId> order = full_topological_order(n);
    for (NodeId v : order) {
        if (v == n.sink()) continue;
        for (EdgeId e : n.out_edges(v)) {
            const Edge& ed = n.edge(e);
            if (!dist[ed.head]) continue;
            Rational cand = *dist[ed.head] + ed.transit_time;
            if (!dist[v] || cand < *dist[v]) dist[v] = std::move(cand);
        }
    }
    if (!dist[from]) throw InputError("3sat: subnetwork source cannot reach its sink");
    return *dist[from];
}

}  // namespace

ThreeSatLayout gen_3sat(const CnfFormula& f, const Network& indicator_subnet) {
    // an empty formula yields the bare indicator: no spill can ever reach the
    // collector, so the wrapped network stays empty
    for (const auto& cl : f.clauses) {
        for (int lit : cl)
            if (lit == 0 || std::abs(lit) > f.variable_count)
                throw InputError("3sat: literal out of range");
    }
    const Network& sub = indicator_subnet;
    if (!sub.is_acyclic()) throw InputError("3sat: indicator subnetwork must be acyclic");

    // the wrapped network must have one inflow, constant on [0, theta0]
    NodeId sub_source = -1;
    for (NodeId v = 0; v < sub.node_count(); ++v) {
        if (sub.inflow(v).support_end()) {
            if (sub_source >= 0) throw InputError("3sat: indicator subnetwork needs a single source");
            sub_source = v;
        }
    }
    if (sub_source < 0) throw InputError("3sat: indicator subnetwork has no inflow");
    const StepFunction& sub_u = sub.inflow(sub_source);
    if (sub_u.pieces().size() != 2 || !sub_u.pieces()[0].from.is_zero())
        throw InputError("3sat: indicator subnetwork inflow must be one interval from 0");
    Rational u_rate = sub_u.pieces()[0].value;
    Rational theta0 = sub_u.pieces()[1].from;

    // connector lengths: the route through the wrapped network must be one
    // longer than the bottleneck route, and from every y the collector route
    // one longer than the direct route
    Rational d_sub = free_flow_distance(sub, sub_source);
    Rational w_len = max(Rational(2), d_sub - Rational(1));  // v -> t
    Rational z_len = w_len - Rational(1);                    // z' -> t
    Rational y_len = w_len + Rational(2) - d_sub;            // subnetwork sink -> t

    Builder b;
    std::vector<NodeId> clause_sources;
    std::vector<std::array<EdgeId, 3>> literal_edges;

    // saturating stand-in for "unbounded": no feasible flow can queue on an
    // edge whose capacity matches the maximal possible inflow at its tail,
    // computed inductively along the construction below
    auto entry_name = [&](int lit) {
        return (lit > 0 ? "x" : "nx") + std::to_string(std::abs(lit));
    };

    // clause sources and literal edges (heads are the gadget entry nodes, so
    // the routing decision window [0,1] ends before any queue can form)
    std::map<std::string, Rational> entry_load;
    for (int j = 0; j < static_cast<int>(f.clauses.size()); ++j) {
        std::string c = "c" + std::to_string(j + 1);
        b.node(c);
        b.pulse(c, Rational(0), Rational(1), Rational(12));
        std::array<EdgeId, 3> lits{};
        for (int k = 0; k < 3; ++k) {
            std::string entry = entry_name(f.clauses[j][k]);
            lits[k] = b.edge(c, entry, Rational(1), Rational(12));
            entry_load[entry] += Rational(12);
        }
        clause_sources.push_back(b.ids.at(c));
        literal_edges.push_back(lits);
    }

    // variable gadgets
    for (int i = 1; i <= f.variable_count; ++i) {
        std::string x = "x" + std::to_string(i);
        std::string nx = "nx" + std::to_string(i);
        std::string b1 = x + "_b1";
        std::string b2 = x + "_b2";
        std::string y = "y" + std::to_string(i);
        std::string nm = nx + "_m";
        std::string z = "z" + std::to_string(i);
        std::string zp = z + "p";
        Rational x_in = entry_load.count(x) ? entry_load[x] : Rational(0);
        Rational nx_in = entry_load.count(nx) ? entry_load[nx] : Rational(0);
        Rational big_x = max(Rational(1), x_in);
        Rational big_nx = max(Rational(1), nx_in);
        Rational big_y = big_x + Rational(1);  // bypass plus the unit drip

        b.edge(x, y, Rational(1), Rational(1));
        b.edge(x, b1, Rational(1), big_x);
        b.edge(b1, b2, Rational(1), big_x);
        b.edge(b2, y, Rational(1), big_x);
        b.edge(y, z, Rational(1), big_y);
        b.edge(nx, nm, Rational(1), big_nx);
        b.edge(nm, z, Rational(1), big_nx);
        b.edge(z, zp, Rational(1), Rational(1));
        b.edge(y, "s2", Rational(1), big_y);
        b.edge(zp, "t", z_len, Rational(1));  // saturating: fed only by the unit bottleneck
    }

    // indicator: collector -> bottleneck -> sink, against the wrapped network
    EdgeId s2_bottleneck = b.edge("s2", "v_ind", Rational(1), Rational(1));
    b.edge("v_ind", "t", w_len, Rational(1));
    b.node("s1");
    EdgeId s1_to_subnet = b.edge("s1", "N_" + sub.node_name(sub_source), theta0, u_rate);
    b.edge("s1", "s2", theta0, u_rate);
    for (const Edge& e : sub.edges()) {
        b.edge("N_" + sub.node_name(e.tail), "N_" + sub.node_name(e.head), e.transit_time,
               e.capacity);
    }
    Rational exit_cap(0);
    for (EdgeId e : sub.in_edges(sub.sink())) exit_cap += sub.edge(e).capacity;
    b.edge("N_" + sub.node_name(sub.sink()), "t", y_len, max(Rational(1), exit_cap));
    b.pulse("s1", Rational(5), Rational(5) + theta0, u_rate);
    b.pulse("s2", Rational(4), Rational(5) + theta0, Rational(1));

    NodeId s1 = b.ids.at("s1");
    NodeId s2 = b.ids.at("s2");
    NodeId subnet_source = b.ids.at("N_" + sub.node_name(sub_source));
    return ThreeSatLayout{b.build("t"), s1,           s2, subnet_source, s2_bottleneck,
                          s1_to_subnet, clause_sources,   literal_edges};
}

Network gen_random_acyclic(std::uint64_t seed, int node_count, int density_percent,
                           int rate_scale) {
    if (node_count < 2) throw InputError("random network: need at least two nodes");
    Rng rng{seed * 2862933555777941757ULL + 3037000493ULL};
    Builder b;
    for (int i = 0; i < node_count; ++i) b.node("n" + std::to_string(i));
    auto rational_small = [&](int lo, int hi) {
        int num = lo + rng.below(hi - lo + 1);
        int den = 1 + rng.below(2);
        return Rational(num, den);  // denominators 1 or 2
    };
    // reachability skeleton: every node gets one forward edge
    for (int i = 0; i + 1 < node_count; ++i) {
        int span = std::min(3, node_count - 1 - i);
        int j = i + 1 + rng.below(span);
        b.edge("n" + std::to_string(i), "n" + std::to_string(j), rational_small(1, 3),
               rational_small(1, 3));
    }
    for (int i = 0; i + 1 < node_count; ++i) {
        for (int j = i + 1; j < node_count; ++j) {
            if (rng.below(100) < density_percent) {
                b.edge("n" + std::to_string(i), "n" + std::to_string(j), rational_small(1, 3),
                       rational_small(1, 3));
            }
        }
    }
    // inflows: node 0 always, others sometimes
    for (int i = 0; i + 1 < node_count; ++i) {
        if (i != 0 && rng.below(100) >= 40) continue;
        int from = rng.below(3);
        int len = 1 + rng.below(3);
        int rate = 1 + rng.below(std::max(1, rate_scale));
        b.pulse("n" + std::to_string(i), Rational(from), Rational(from + len), Rational(rate));
    }
    return b.build("n" + std::to_string(node_count - 1));
}

Network gen_random_cyclic(std::uint64_t seed, int node_count, int density_percent,
                          int rate_scale) {
    if (node_count < 3) throw InputError("random network: need at least three nodes");
    Rng rng{seed * 0xda942042e4dd58b5ULL + 0x9e3779b9ULL};
    Builder b;
    for (int i = 0; i < node_count; ++i) b.node("n" + std::to_string(i));
    auto rational_small = [&](int lo, int hi) {
        int num = lo + rng.below(hi - lo + 1);
        int den = 1 + rng.below(2);
        return Rational(num, den);
    };
    for (int i = 0; i + 1 < node_count; ++i) {
        int span = std::min(3, node_count - 1 - i);
        int j = i + 1 + rng.below(span);
        b.edge("n" + std::to_string(i), "n" + std::to_string(j), rational_small(1, 3),
               rational_small(1, 3));
    }
    for (int i = 0; i + 1 < node_count; ++i) {
        for (int j = i + 1; j < node_count; ++j) {
            if (rng.below(100) < density_percent) {
                b.edge("n" + std::to_string(i), "n" + std::to_string(j), rational_small(1, 3),
                       rational_small(1, 3));
            }
        }
    }
    // back edges close cycles; reachability is untouched
    int backs = 1 + rng.below(3);
    for (int k = 0; k < backs; ++k) {
        int j = 1 + rng.below(node_count - 1);
        int i = rng.below(j);
        b.edge("n" + std::to_string(j), "n" + std::to_string(i), rational_small(1, 3),
               rational_small(1, 3));
    }
    for (int i = 0; i + 1 < node_count; ++i) {
        if (i != 0 && rng.below(100) >= 40) continue;
        int from = rng.below(3);
        int len = 1 + rng.below(3);
        int rate = 1 + rng.below(std::max(1, rate_scale));
        b.pulse("n" + std::to_string(i), Rational(from), Rational(from + len), Rational(rate));
    }
    return b.build("n" + std::to_string(node_count - 1));
}

}  // namespace ide
