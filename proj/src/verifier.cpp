#include "ide/verifier.hpp"

#include <json.hpp>

#include <algorithm>
#include <optional>

#include "ide/errors.hpp"

namespace ide {

const char* violation_kind_name(ViolationKind k) {
    switch (k) {
        case ViolationKind::Conservation: return "conservation";
        case ViolationKind::QueueNegative: return "queue-negative";
        case ViolationKind::OutflowRule: return "outflow-rule";
        case ViolationKind::NoOutflowBeforeTau: return "no-outflow-before-tau";
        case ViolationKind::InactiveEdgeInflow: return "inactive-edge-inflow";
        case ViolationKind::SinkOverflow: return "sink-overflow";
    }
    return "?";
}

namespace {

std::string edge_name(const Network& n, EdgeId e) {
    return n.node_name(n.edge(e).tail) + "->" + n.node_name(n.edge(e).head) + "#" + std::to_string(e);
}

/// Queue from the inflow alone: q(t) = F(t) - min_{s <= t} (F(s) + nu (t-s)).
/// The minimum over s sits at a breakpoint of the cumulative inflow or at t.
class VickreyQueue {
public:
    VickreyQueue(const StepFunction& inflow, Rational nu) : inflow_(inflow), nu_(std::move(nu)) {
        Rational acc(0);
        const auto& ps = inflow.pieces();
        cumulative_.reserve(ps.size());
        for (std::size_t i = 0; i < ps.size(); ++i) {
            cumulative_.push_back(acc);
            if (i + 1 < ps.size()) acc += ps[i].value * (ps[i + 1].from - ps[i].from);
        }
    }

    Rational at(const Rational& t) const {
        const auto& ps = inflow_.pieces();
        Rational total = cumulative_at(t);
        Rational best(0);  // candidate s = t gives 0
        for (std::size_t i = 0; i < ps.size() && ps[i].from <= t; ++i) {
            Rational cand = total - cumulative_[i] - nu_ * (t - ps[i].from);
            best = max(best, cand);
        }
        return best;
    }

private:
    Rational cumulative_at(const Rational& t) const {
        const auto& ps = inflow_.pieces();
        std::size_t i = 0;
        while (i + 1 < ps.size() && ps[i + 1].from <= t) ++i;
        return cumulative_[i] + ps[i].value * (t - ps[i].from);
    }

    const StepFunction& inflow_;
    Rational nu_;
    std::vector<Rational> cumulative_;
};

/// Labels by Bellman-Ford over the given edge costs (all positive).
std::vector<Rational> bellman_labels(const Network& n, const std::vector<Rational>& costs) {
    std::vector<std::optional<Rational>> dist(n.node_count());
    dist[n.sink()] = Rational(0);
    for (int round = 0; round < n.node_count(); ++round) {
        bool changed = false;
        for (EdgeId e = 0; e < n.edge_count(); ++e) {
            const Edge& ed = n.edge(e);
            if (!dist[ed.head]) continue;
            Rational cand = *dist[ed.head] + costs[e];
            if (!dist[ed.tail] || cand < *dist[ed.tail]) {
                dist[ed.tail] = std::move(cand);
                changed = true;
            }
        }
        if (!changed) break;
    }
    std::vector<Rational> out(n.node_count());
    for (NodeId v = 0; v < n.node_count(); ++v) {
        if (!dist[v]) throw InputError("verify: network has a node that cannot reach the sink");
        out[v] = *dist[v];
    }
    return out;
}

}  // namespace

std::vector<Violation> verify(const Network& n, const FlowOverTime& f) {
    if (f.edge_count() != n.edge_count()) throw InputError("verify: flow and network shapes differ");
    std::vector<Violation> out;

    // common coverage of the flow
    Rational frontier(0);
    bool first = true;
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        const Rational& fe = f.edge(e).frontier;
        frontier = first ? fe : min(frontier, fe);
        first = false;
    }
    if (n.edge_count() == 0 || frontier.is_zero()) return out;

    std::vector<VickreyQueue> vq;
    vq.reserve(n.edge_count());
    for (EdgeId e = 0; e < n.edge_count(); ++e)
        vq.emplace_back(f.edge(e).inflow, n.edge(e).capacity);

    // grid of maximal constant-rate intervals within [0, frontier]
    std::vector<Rational> cuts{Rational(0), frontier};
    auto add_cuts = [&](const StepFunction& sf, const Rational& shift) {
        for (const auto& p : sf.pieces()) {
            Rational t = p.from - shift;
            if (t.sign() > 0 && t < frontier) cuts.push_back(std::move(t));
        }
    };
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        add_cuts(f.edge(e).inflow, Rational(0));
        add_cuts(f.edge(e).outflow, Rational(0));
        // outflow breaks mapped back by tau so that the (4) check sees them
        add_cuts(f.edge(e).outflow, n.edge(e).transit_time);
    }
    for (NodeId v = 0; v < n.node_count(); ++v) add_cuts(n.inflow(v), Rational(0));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto eq1_queue = [&](EdgeId e, const Rational& t) {
        const EdgeFlow& ef = f.edge(e);
        return ef.inflow.integrate(Rational(0), t) -
               ef.outflow.integrate(Rational(0), t + n.edge(e).transit_time);
    };

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rational& a = cuts[i];
        const Rational& b = cuts[i + 1];
        Rational m = (a + b) / 2;

        for (const Rational& t : {a, m}) {
            // conservation (2a)/(2b): rates are right-constant, so the two
            // sample points see the same values
            for (NodeId v = 0; v < n.node_count(); ++v) {
                Rational net(0);
                for (EdgeId e : n.out_edges(v)) net += f.edge(e).inflow.value_at(t);
                for (EdgeId e : n.in_edges(v)) net -= f.edge(e).outflow.value_at(t);
                net -= n.inflow(v).value_at(t);
                if (v == n.sink()) {
                    if (net.sign() > 0)
                        out.push_back({ViolationKind::SinkOverflow, n.node_name(v), t,
                                       "net outflow from the sink is " + net.str()});
                } else if (!net.is_zero()) {
                    out.push_back({ViolationKind::Conservation, n.node_name(v), t,
                                   "flow imbalance " + net.str()});
                }
            }
            for (EdgeId e = 0; e < n.edge_count(); ++e) {
                const Edge& ed = n.edge(e);
                // (3) no outflow before tau
                if (t < ed.transit_time && f.edge(e).outflow.value_at(t).sign() != 0) {
                    out.push_back({ViolationKind::NoOutflowBeforeTau, edge_name(n, e), t,
                                   "outflow before the transit time"});
                }
                // (4) outflow rule against the independently recomputed queue
                Rational q = vq[e].at(t);
                Rational expect = q.sign() > 0 ? ed.capacity
                                               : min(f.edge(e).inflow.value_at(t), ed.capacity);
                Rational actual = f.edge(e).outflow.value_at(t + ed.transit_time);
                if (actual != expect) {
                    out.push_back({ViolationKind::OutflowRule, edge_name(n, e), t,
                                   "outflow " + actual.str() + " at " + (t + ed.transit_time).str() +
                                       ", rule gives " + expect.str()});
                }
            }
        }

        // queue nonnegativity via the definition q = F+ - F-(.+tau)
        for (EdgeId e = 0; e < n.edge_count(); ++e) {
            for (const Rational& t : {a, b}) {
                if (eq1_queue(e, t).sign() < 0) {
                    out.push_back({ViolationKind::QueueNegative, edge_name(n, e), t,
                                   "cumulative outflow exceeds cumulative inflow"});
                }
            }
        }

        // equilibrium property at the midpoint: positive inflow only on
        // currently shortest paths
        std::vector<Rational> costs(n.edge_count());
        bool queues_ok = true;
        for (EdgeId e = 0; e < n.edge_count(); ++e) {
            Rational q = eq1_queue(e, m);
            if (q.sign() < 0) queues_ok = false;
            costs[e] = n.edge(e).transit_time + q / n.edge(e).capacity;
        }
        if (queues_ok) {
            std::vector<Rational> labels = bellman_labels(n, costs);
            for (EdgeId e = 0; e < n.edge_count(); ++e) {
                if (f.edge(e).inflow.value_at(m).sign() <= 0) continue;
                const Edge& ed = n.edge(e);
                if (labels[ed.tail] != labels[ed.head] + costs[e]) {
                    out.push_back({ViolationKind::InactiveEdgeInflow, edge_name(n, e), m,
                                   "inflow on an edge off the shortest paths (label " +
                                       labels[ed.tail].str() + " vs " +
                                       (labels[ed.head] + costs[e]).str() + ")"});
                }
            }
        }
    }
    return out;
}

bool check_periodicity(const FlowOverTime& f, const Network& n, const Rational& window_start,
                       const Rational& period) {
    if (period.sign() <= 0) throw InputError("check_periodicity: period must be positive");
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        if (f.edge(e).frontier < window_start + period * 2)
            throw InputError("check_periodicity: flow does not cover two periods");
    }
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        const PWLinear& q = f.edge(e).queue;
        std::vector<Rational> lattice{window_start, window_start + period};
        for (const Rational& bp : q.breakpoints()) {
            if (bp > window_start && bp < window_start + period) lattice.push_back(bp);
            if (bp > window_start + period && bp < window_start + period * 2)
                lattice.push_back(bp - period);
        }
        for (const Rational& t : lattice) {
            if (q.value_at(t) != q.value_at(t + period)) return false;
        }
    }
    return true;
}

std::string violations_report(const std::vector<Violation>& vs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Violation& v : vs) {
        arr.push_back({{"kind", violation_kind_name(v.kind)},
                       {"location", v.location},
                       {"time", v.time.str()},
                       {"details", v.details}});
    }
    return arr.dump(2) + "\n";
}

}  // namespace ide
