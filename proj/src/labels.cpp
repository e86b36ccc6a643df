#include "ide/labels.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "ide/errors.hpp"

namespace ide {

Rational edge_cost(const Edge& e, const Rational& queue) {
    return e.transit_time + queue / e.capacity;
}

LabelState compute_labels(const Network& n, const std::vector<Rational>& queues) {
    LabelState ls;
    ls.value.assign(n.node_count(), Rational(0));
    ls.slope.assign(n.node_count(), Rational(0));
    ls.active.assign(n.edge_count(), 0);

    // Dijkstra from the sink over reversed edges; all weights are >= tau_min > 0.
    // Ties in the queue are broken by node id for determinism.
    std::vector<char> done(n.node_count(), 0);
    std::vector<std::optional<Rational>> dist(n.node_count());
    std::set<std::pair<Rational, NodeId>> frontier;
    dist[n.sink()] = Rational(0);
    frontier.insert({Rational(0), n.sink()});
    while (!frontier.empty()) {
        auto [d, v] = *frontier.begin();
        frontier.erase(frontier.begin());
        if (done[v]) continue;
        done[v] = 1;
        for (EdgeId e : n.in_edges(v)) {
            NodeId u = n.edge(e).tail;
            if (done[u]) continue;
            Rational cand = d + edge_cost(n.edge(e), queues[e]);
            if (!dist[u] || cand < *dist[u]) {
                if (dist[u]) frontier.erase({*dist[u], u});
                dist[u] = cand;
                frontier.insert({cand, u});
            }
        }
    }
    for (NodeId v = 0; v < n.node_count(); ++v) {
        if (!dist[v]) throw InternalError("labels: sink not reachable (validation should reject this)");
        ls.value[v] = *dist[v];
    }
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        const Edge& ed = n.edge(e);
        if (ls.value[ed.tail] == ls.value[ed.head] + edge_cost(ed, queues[e])) ls.active[e] = 1;
    }
    return ls;
}

Rational cost_slope(const Edge& e, bool queue_positive, const Rational& inflow_rate) {
    if (queue_positive) return (inflow_rate - e.capacity) / e.capacity;
    return max(inflow_rate - e.capacity, Rational(0)) / e.capacity;
}

std::vector<Rational> label_slopes(const Network& n, const LabelState& ls,
                                   const std::vector<Rational>& rates,
                                   const std::vector<Rational>& queues,
                                   const std::vector<NodeId>& order) {
    std::vector<Rational> slope(n.node_count(), Rational(0));
    std::vector<char> ready(n.node_count(), 0);
    for (NodeId v : order) {
        if (v == n.sink()) {
            ready[v] = 1;
            continue;
        }
        bool first = true;
        for (EdgeId e : n.out_edges(v)) {
            if (!ls.active[e]) continue;
            NodeId w = n.edge(e).head;
            if (!ready[w]) throw InternalError("label_slopes: order is not topological for the active set");
            Rational s = cost_slope(n.edge(e), queues[e].sign() > 0, rates[e]) + slope[w];
            if (first || s < slope[v]) slope[v] = std::move(s);
            first = false;
        }
        if (first) throw InternalError("label_slopes: node without an active out-edge");
        ready[v] = 1;
    }
    return slope;
}

Rational slope_bound(const Network& n) {
    Rational total(0);
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        NodeId v = n.edge(e).tail;
        Rational lv(0);
        for (EdgeId in : n.in_edges(v)) lv += n.edge(in).capacity;
        Rational peak(0);
        for (const auto& p : n.inflow(v).pieces()) peak = max(peak, p.value);
        lv += peak;
        total += max(Rational(1), lv / n.edge(e).capacity);
    }
    return total;
}

namespace {

/// Sink-first topological order w.r.t. the marked edges: every marked edge
/// vw places w before v. Kahn on reversed marked edges, smallest node id
/// first for determinism.
std::vector<NodeId> topological_order(const Network& n, const std::vector<char>& marked) {
    std::vector<int> remaining(n.node_count(), 0);
    for (EdgeId e = 0; e < n.edge_count(); ++e)
        if (marked[e]) ++remaining[n.edge(e).tail];

    std::set<NodeId> ready;
    for (NodeId v = 0; v < n.node_count(); ++v)
        if (remaining[v] == 0) ready.insert(v);

    std::vector<NodeId> order;
    order.reserve(n.node_count());
    // the sink has no marked out-edges (active edges strictly decrease the
    // label), so it is ready from the start; emit it first
    if (ready.erase(n.sink())) order.push_back(n.sink());
    std::vector<char> emitted(n.node_count(), 0);
    emitted[n.sink()] = 1;
    auto relax = [&](NodeId w) {
        for (EdgeId e : n.in_edges(w)) {
            if (!marked[e]) continue;
            NodeId u = n.edge(e).tail;
            if (!emitted[u] && --remaining[u] == 0) ready.insert(u);
        }
    };
    relax(n.sink());
    while (!ready.empty()) {
        NodeId v = *ready.begin();
        ready.erase(ready.begin());
        if (emitted[v]) continue;
        emitted[v] = 1;
        order.push_back(v);
        relax(v);
    }
    if (static_cast<int>(order.size()) != n.node_count())
        throw InternalError("labels: marked edge set contains a cycle");
    return order;
}

/// Finds a directed cycle in the marked edges, as a list of edge ids.
/// Deterministic DFS from the smallest node over adjacency in edge order.
std::vector<EdgeId> find_cycle(const Network& n, const std::vector<char>& marked) {
    std::vector<int> state(n.node_count(), 0);  // 0 new, 1 on stack, 2 done
    std::vector<EdgeId> via(n.node_count(), -1);
    for (NodeId root = 0; root < n.node_count(); ++root) {
        if (state[root] != 0) continue;
        std::vector<std::pair<NodeId, std::size_t>> stack{{root, 0}};
        state[root] = 1;
        while (!stack.empty()) {
            NodeId v = stack.back().first;
            const auto& outs = n.out_edges(v);
            bool descended = false;
            while (stack.back().second < outs.size()) {
                EdgeId e = outs[stack.back().second++];
                if (!marked[e]) continue;
                NodeId w = n.edge(e).head;
                if (state[w] == 1) {
                    // unwind the cycle w -> ... -> v -> w
                    std::vector<EdgeId> cycle{e};
                    NodeId cur = v;
                    while (cur != w) {
                        cycle.push_back(via[cur]);
                        cur = n.edge(via[cur]).tail;
                    }
                    std::reverse(cycle.begin(), cycle.end());
                    return cycle;
                }
                if (state[w] == 0) {
                    state[w] = 1;
                    via[w] = e;
                    stack.push_back({w, 0});
                    descended = true;
                    break;
                }
            }
            if (!descended) {
                state[v] = 2;
                stack.pop_back();
            }
        }
    }
    return {};
}

}  // namespace

std::vector<NodeId> full_topological_order(const Network& n) {
    return topological_order(n, std::vector<char>(n.edge_count(), 1));
}

OrderState initial_order(const Network& n, const LabelState& ls) {
    OrderState os;
    os.in_tilde.assign(n.edge_count(), 0);
    refresh_order(os, n, ls);
    return os;
}

bool needs_refresh(const OrderState& os, const LabelState& ls) {
    for (std::size_t e = 0; e < ls.active.size(); ++e)
        if (ls.active[e] && !os.in_tilde[e]) return true;
    return false;
}

std::vector<RemovedEdge> refresh_order(OrderState& os, const Network& n, const LabelState& ls) {
    if (os.in_tilde.empty()) os.in_tilde.assign(n.edge_count(), 0);
    for (EdgeId e = 0; e < n.edge_count(); ++e)
        if (ls.active[e]) os.in_tilde[e] = 1;

    std::vector<RemovedEdge> removed;
    while (true) {
        std::vector<EdgeId> cycle = find_cycle(n, os.in_tilde);
        if (cycle.empty()) break;
        EdgeId worst = -1;
        Rational worst_gap;
        for (EdgeId e : cycle) {
            Rational gap = ls.value[n.edge(e).head] - ls.value[n.edge(e).tail];
            if (worst < 0 || gap > worst_gap || (gap == worst_gap && e < worst)) {
                worst = e;
                worst_gap = gap;
            }
        }
        const Edge& ed = n.edge(worst);
        if (!(ls.value[ed.tail] < ls.value[ed.head]))
            throw InternalError("refresh_order: removed edge does not satisfy the label inequality");
        os.in_tilde[worst] = 0;
        removed.push_back({worst, ls.value[ed.tail], ls.value[ed.head]});
    }
    os.order = topological_order(n, os.in_tilde);
    os.position.assign(n.node_count(), 0);
    for (int i = 0; i < static_cast<int>(os.order.size()); ++i) os.position[os.order[i]] = i;
    return removed;
}

}  // namespace ide
