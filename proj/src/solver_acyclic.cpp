#include <algorithm>
#include <set>

#include "ide/errors.hpp"
#include "ide/solver.hpp"
#include "ide/waterfill.hpp"
#include "solver_detail.hpp"

namespace ide {

namespace {

/// Label trajectory of one node over the current window: value and right
/// slope per local piece, right-open, in order.
struct LabelPiece {
    Rational from;
    Rational value;
    Rational slope;
};

struct Trajectory {
    std::vector<LabelPiece> pieces;

    const LabelPiece& at(const Rational& t) const {
        std::size_t i = pieces.size() - 1;
        while (pieces[i].from > t) --i;
        return pieces[i];
    }
    Rational value_at(const Rational& t) const {
        const LabelPiece& p = at(t);
        return p.value + p.slope * (t - p.from);
    }
    std::optional<Rational> next_piece_after(const Rational& t) const {
        for (const auto& p : pieces)
            if (p.from > t) return p.from;
        return std::nullopt;
    }
};

}  // namespace

SolveResult solve_acyclic(const Network& n, const SolverConfig& cfg) {
    if (!n.is_acyclic()) throw InputError("solve_acyclic: network has a directed cycle");
    detail::validate_config(cfg);

    SolveResult r;
    r.flow = FlowOverTime(n);
    const std::vector<NodeId> order = full_topological_order(n);
    const Rational tau_min = n.tau_min();

    std::vector<Trajectory> traj(n.node_count());
    std::vector<Rational> scratch_rates(n.edge_count(), Rational(0));
    std::vector<Rational> scratch_slopes(n.node_count(), Rational(0));
    std::vector<Rational> scratch_values(n.node_count(), Rational(0));

    Rational window = Rational(0);
    bool step_limit = false;

    while (true) {
        if (detail::is_empty(n, r.flow, window)) {
            r.terminated = true;
            break;
        }
        if (cfg.horizon && window >= *cfg.horizon) {
            r.status = SolveStatus::HorizonReached;
            break;
        }
        if (step_limit || r.steps >= cfg.max_steps) {
            r.status = SolveStatus::StepLimit;
            break;
        }
        Rational window_end = window + tau_min;
        if (cfg.horizon && *cfg.horizon < window_end) window_end = *cfg.horizon;

        for (auto& t : traj) t.pieces.clear();
        traj[n.sink()].pieces.push_back({window, Rational(0), Rational(0)});

        for (NodeId v : order) {
            if (v == n.sink()) continue;
            StepFunction b_fun = gross_node_inflow(r.flow, n, v, window, window_end);

            // a gross-inflow jump exactly on the window boundary is invisible
            // inside either window; detect it against the left limit
            if (window.sign() > 0) {
                Rational before = n.inflow(v).value_left_of(window);
                for (EdgeId e : n.in_edges(v)) before += r.flow.edge(e).outflow.value_left_of(window);
                if (before != b_fun.value_at(window)) {
                    bool from_u = n.inflow(v).value_left_of(window) != n.inflow(v).value_at(window);
                    r.events.push_back(
                        {window, from_u ? EventKind::InflowBreak : EventKind::GrossInflowBreak, v});
                }
            }

            Rational theta = window;
            while (theta < window_end) {
                if (r.steps >= cfg.max_steps) {
                    step_limit = true;
                    break;
                }
                // head labels and slopes from the finished downstream trajectories
                LabelState ls;
                ls.active.assign(n.edge_count(), 0);
                for (EdgeId e : n.out_edges(v)) {
                    NodeId w = n.edge(e).head;
                    const LabelPiece& p = traj[w].at(theta);
                    scratch_values[w] = p.value + p.slope * (theta - p.from);
                    scratch_slopes[w] = p.slope;
                }
                std::vector<Rational> queues(n.edge_count(), Rational(0));
                bool have_value = false;
                Rational own_value;
                for (EdgeId e : n.out_edges(v)) {
                    queues[e] = r.flow.queue_at(e, theta);
                    Rational through = scratch_values[n.edge(e).head] + edge_cost(n.edge(e), queues[e]);
                    if (!have_value || through < own_value) own_value = std::move(through);
                    have_value = true;
                }
                if (!have_value) throw InternalError("solve_acyclic: node without out-edges");
                for (EdgeId e : n.out_edges(v)) {
                    Rational through = scratch_values[n.edge(e).head] + edge_cost(n.edge(e), queues[e]);
                    if (through == own_value) ls.active[e] = 1;
                }
                ls.value = scratch_values;
                ls.value[v] = own_value;

                for (EdgeId e : n.out_edges(v)) scratch_rates[e] = Rational(0);
                Rational b = b_fun.value_at(theta);
                Rational own_slope = detail::distribute_node(n, v, b, ls, queues, scratch_slopes,
                                                             cfg.hints, scratch_rates);

                // maximal local phase: next event at this node, next kink of a
                // downstream label, or the window end
                Rational limit = window_end;
                std::vector<Event> causes;
                auto consider = [&](const Rational& t, EventKind kind, int subject, bool silent) {
                    if (t <= theta || t > limit) return;
                    if (t < limit) {
                        limit = t;
                        causes.clear();
                    }
                    if (!silent) causes.push_back({t, kind, subject});
                };

                if (auto t = b_fun.next_breakpoint_after(theta)) {
                    bool from_u = false;
                    if (auto ut = n.inflow(v).next_breakpoint_after(theta)) from_u = (*ut == *t);
                    consider(*t, from_u ? EventKind::InflowBreak : EventKind::GrossInflowBreak, v,
                             false);
                }
                for (EdgeId e : n.out_edges(v)) {
                    NodeId w = n.edge(e).head;
                    if (auto t = traj[w].next_piece_after(theta))
                        consider(*t, EventKind::OrderRefresh, -1, true);  // kind unused: silent
                    if (queues[e].sign() > 0) {
                        Rational drain = n.edge(e).capacity - scratch_rates[e];
                        if (drain.sign() > 0)
                            consider(theta + queues[e] / drain, EventKind::QueueDepletion, e, false);
                    }
                    if (!ls.active[e]) {
                        Rational gap = scratch_values[w] + edge_cost(n.edge(e), queues[e]) - own_value;
                        if (gap.sign() <= 0)
                            throw InternalError("solve_acyclic: inactive edge without a label gap");
                        Rational closing =
                            own_slope - (scratch_slopes[w] +
                                         cost_slope(n.edge(e), queues[e].sign() > 0, scratch_rates[e]));
                        if (closing.sign() > 0)
                            consider(theta + gap / closing, EventKind::Activation, e, false);
                    }
                }

                for (EdgeId e : n.out_edges(v)) r.flow.extend_edge(n, e, limit, scratch_rates[e]);
                traj[v].pieces.push_back({theta, own_value, own_slope});
                for (const Event& ev : causes) r.events.push_back(ev);
                ++r.steps;
                theta = limit;
            }
            if (step_limit) break;
        }
        if (step_limit) continue;  // re-enter the loop head to finish with StepLimit
        // edges out of the sink never carry flow but keep their frontiers aligned
        for (EdgeId e : n.out_edges(n.sink())) r.flow.extend_edge(n, e, window_end, Rational(0));
        window = window_end;
    }

    // Final extent of the phase list: the time the network went quiet, the
    // horizon, or (under the step cap) the raggedness-free prefix.
    Rational cut = detail::quiet_time(n, r.flow);
    if (cfg.horizon && *cfg.horizon < cut) cut = *cfg.horizon;
    if (r.status == SolveStatus::StepLimit) {
        for (EdgeId e = 0; e < n.edge_count(); ++e) cut = min(cut, r.flow.edge(e).frontier);
    }
    if (r.terminated) r.termination_time = cut;
    if (cut.sign() > 0)
        r.flow.truncate_at(n, cut);
    else
        r.flow = FlowOverTime(n);  // the step cap can strike before any extension

    // phase reconstruction on the recorded event times
    std::set<Rational> boundary_set;
    std::vector<Event> kept_events;
    for (const Event& ev : r.events) {
        if (ev.time > cut) continue;
        kept_events.push_back(ev);
        if (ev.time.sign() > 0 && ev.time < cut) boundary_set.insert(ev.time);
    }
    r.events = std::move(kept_events);
    detail::sort_events(r.events);

    if (cut.sign() > 0) {
        std::vector<Rational> boundaries{Rational(0)};
        boundaries.insert(boundaries.end(), boundary_set.begin(), boundary_set.end());
        boundaries.push_back(cut);
        for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
            const Rational& a = boundaries[i];
            PhaseRecord p;
            p.start = a;
            p.end = boundaries[i + 1];
            p.inflow_rates.reserve(n.edge_count());
            std::vector<Rational> queues(n.edge_count());
            for (EdgeId e = 0; e < n.edge_count(); ++e) {
                queues[e] = r.flow.queue_at(e, a);
                p.inflow_rates.push_back(r.flow.edge(e).inflow.value_at(a));
            }
            LabelState ls = compute_labels(n, queues);
            std::vector<Rational> slopes = label_slopes(n, ls, p.inflow_rates, queues, order);
            p.labels.reserve(n.node_count());
            for (NodeId v = 0; v < n.node_count(); ++v) p.labels.emplace_back(ls.value[v], slopes[v]);
            p.active_interior = detail::interior_active(n, ls, p.inflow_rates, queues, slopes);
            r.phases.push_back(std::move(p));
        }
    }
    return r;
}

}  // namespace ide
