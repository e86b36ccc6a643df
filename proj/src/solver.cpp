#include "ide/solver.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

#include "ide/errors.hpp"
#include "ide/waterfill.hpp"
#include "solver_detail.hpp"

namespace ide {

using json = nlohmann::ordered_json;

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::InflowBreak: return "inflow-break";
        case EventKind::GrossInflowBreak: return "gross-inflow-break";
        case EventKind::QueueDepletion: return "queue-depletion";
        case EventKind::Activation: return "activation";
        case EventKind::OrderRefresh: return "order-refresh";
    }
    return "?";
}

namespace detail {

bool is_empty(const Network& n, const FlowOverTime& f, const Rational& theta) {
    for (NodeId v = 0; v < n.node_count(); ++v) {
        auto end = n.inflow(v).support_end();
        if (end && *end > theta) return false;
    }
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        if (f.queue_at(e, theta).sign() > 0) return false;
        auto end = f.edge(e).outflow.support_end();
        if (end && *end > theta) return false;
    }
    return true;
}

Rational quiet_time(const Network& n, const FlowOverTime& f) {
    Rational t(0);
    for (NodeId v = 0; v < n.node_count(); ++v) {
        if (auto end = n.inflow(v).support_end()) t = max(t, *end);
    }
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        if (auto end = f.edge(e).outflow.support_end()) t = max(t, *end);
    }
    return t;
}

Rational gross_inflow_value(const Network& n, const FlowOverTime& f, NodeId v,
                            const Rational& theta) {
    Rational b = n.inflow(v).value_at(theta);
    for (EdgeId e : n.in_edges(v)) b += f.edge(e).outflow.value_at(theta);
    return b;
}

Rational distribute_node(const Network& n, NodeId v, const Rational& b,
                         const LabelState& ls, const std::vector<Rational>& queues,
                         const std::vector<Rational>& slopes,
                         const std::map<NodeId, EdgeId>& hints, std::vector<Rational>& rates) {
    std::vector<EdgeId> active_out;
    for (EdgeId e : n.out_edges(v))
        if (ls.active[e]) active_out.push_back(e);
    if (active_out.empty()) throw InternalError("solver: node without an active out-edge");

    auto hint = hints.find(v);
    if (hint != hints.end() && b.sign() > 0) {
        if (!ls.active[hint->second] || n.edge(hint->second).tail != v)
            throw InputError("solver: hinted edge is not active at its node");
        rates[hint->second] = b;
        // slope = min over active edges under the forced plan
        bool first = true;
        Rational level;
        for (EdgeId e : active_out) {
            Rational s = cost_slope(n.edge(e), queues[e].sign() > 0, rates[e]) +
                         slopes[n.edge(e).head];
            if (first || s < level) level = std::move(s);
            first = false;
        }
        return level;
    }

    std::vector<MarginalFn> ms = build_marginals(n, v, active_out, queues, slopes);
    Distribution dist = waterfill(b, ms);
    for (std::size_t i = 0; i < ms.size(); ++i) rates[ms[i].edge] = dist.rates[i];
    return dist.level;
}

std::vector<EdgeId> interior_active(const Network& n, const LabelState& ls,
                                    const std::vector<Rational>& rates,
                                    const std::vector<Rational>& queues,
                                    const std::vector<Rational>& slopes) {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        if (!ls.active[e]) continue;
        const Edge& ed = n.edge(e);
        Rational s = cost_slope(ed, queues[e].sign() > 0, rates[e]) + slopes[ed.head];
        if (s == slopes[ed.tail]) out.push_back(e);
    }
    return out;
}

void sort_events(std::vector<Event>& events) {
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        return a.subject < b.subject;
    });
}

}  // namespace detail

AlphaBound extension_alpha(const Network& n, const FlowOverTime& f, const Rational& theta,
                           const std::vector<Rational>& rates, const LabelState& ls,
                           const std::vector<Rational>& queues,
                           const std::optional<Rational>& hard_cap) {
    // (d) knowledge horizon: outflows are determined tau_e ahead of the
    // frontier, so b_v is only known for tau_min
    Rational limit = theta + n.tau_min();
    if (hard_cap && *hard_cap < limit) limit = *hard_cap;
    if (limit <= theta) throw InternalError("extension_alpha: empty extension window");

    std::vector<Event> candidates;
    auto consider = [&](const Rational& t, EventKind kind, int subject) {
        if (t <= theta || t > limit) return;
        if (t < limit) {
            limit = t;
            candidates.clear();
        }
        candidates.push_back({t, kind, subject});
    };

    // (a) gross node inflow breakpoints, cancellation-aware; the sink never
    // distributes flow, so its arrivals bound nothing
    Rational window_end = theta + n.tau_min();
    for (NodeId v = 0; v < n.node_count(); ++v) {
        if (v == n.sink()) continue;
        if (n.in_edges(v).empty() && !n.inflow(v).support_end()) continue;
        StepFunction b = gross_node_inflow(f, n, v, theta, window_end);
        if (auto t = b.next_breakpoint_after(theta)) {
            bool from_u = false;
            if (auto ut = n.inflow(v).next_breakpoint_after(theta)) from_u = (*ut == *t);
            consider(*t, from_u ? EventKind::InflowBreak : EventKind::GrossInflowBreak, v);
        }
    }

    // (b) queue depletions under the committed plan
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        if (queues[e].sign() <= 0) continue;
        Rational drain = n.edge(e).capacity - rates[e];
        if (drain.sign() <= 0) continue;
        consider(theta + queues[e] / drain, EventKind::QueueDepletion, e);
    }

    // (c) activation crossings of inactive edges (labels and costs are exact
    // lines up to the earliest event, so the first crossing is real)
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        if (ls.active[e]) continue;
        const Edge& ed = n.edge(e);
        if (ed.tail == n.sink()) continue;  // never activates: labels stay positive
        Rational gap = ls.value[ed.head] + edge_cost(ed, queues[e]) - ls.value[ed.tail];
        if (gap.sign() <= 0) throw InternalError("extension_alpha: inactive edge without a label gap");
        Rational closing = ls.slope[ed.tail] -
                           (ls.slope[ed.head] + cost_slope(ed, queues[e].sign() > 0, rates[e]));
        if (closing.sign() <= 0) continue;
        consider(theta + gap / closing, EventKind::Activation, e);
    }

    AlphaBound out;
    out.alpha = limit - theta;
    out.events = std::move(candidates);
    if (out.alpha.sign() <= 0) throw InternalError("extension_alpha: zero extension");
    return out;
}

namespace {

void dump_debug_labels(std::ostream* os, const Network& n, const Rational& theta,
                       const LabelState& ls, const OrderState& order) {
    if (!os) return;
    json line;
    line["theta"] = theta.str();
    json labels = json::object();
    for (NodeId v = 0; v < n.node_count(); ++v) labels[n.node_name(v)] = ls.value[v].str();
    line["labels"] = labels;
    json active = json::array();
    for (EdgeId e = 0; e < n.edge_count(); ++e)
        if (ls.active[e]) active.push_back(e);
    line["active"] = active;
    json tilde = json::array();
    for (EdgeId e = 0; e < n.edge_count(); ++e)
        if (order.in_tilde[e]) tilde.push_back(e);
    line["tilde"] = tilde;
    json ord = json::array();
    for (NodeId v : order.order) ord.push_back(n.node_name(v));
    line["order"] = ord;
    (*os) << line.dump() << "\n";
}

}  // namespace

namespace detail {

void validate_config(const SolverConfig& cfg) {
    if (cfg.horizon && cfg.horizon->sign() <= 0)
        throw InputError("solve: horizon must be positive");
    if (cfg.max_steps <= 0) throw InputError("solve: step cap must be positive");
}

}  // namespace detail

SolveResult solve_general(const Network& n, const SolverConfig& cfg) {
    detail::validate_config(cfg);
    SolveResult r;
    r.flow = FlowOverTime(n);
    Rational theta(0);
    Rational arrived(0);
    OrderState order;
    bool order_ready = false;
    std::vector<Event> boundary_events;  // events that ended the previous phase

    while (true) {
        if (detail::is_empty(n, r.flow, theta)) {
            r.terminated = true;
            break;
        }
        if (cfg.horizon && theta >= *cfg.horizon) {
            r.status = SolveStatus::HorizonReached;
            break;
        }
        if (r.steps >= cfg.max_steps) {
            r.status = SolveStatus::StepLimit;
            break;
        }

        // Gross-inflow jumps landing exactly on the knowledge horizon are
        // invisible from inside the previous phase; detect them against the
        // left limits so every boundary is justified by an explicit event.
        if (theta.sign() > 0) {
            for (NodeId v = 0; v < n.node_count(); ++v) {
                if (v == n.sink()) continue;
                if (n.in_edges(v).empty() && !n.inflow(v).support_end()) continue;
                bool seen = false;
                for (const Event& ev : boundary_events) {
                    seen = seen || ((ev.kind == EventKind::InflowBreak ||
                                     ev.kind == EventKind::GrossInflowBreak) &&
                                    ev.subject == v);
                }
                if (seen) continue;
                Rational before = n.inflow(v).value_left_of(theta);
                for (EdgeId e : n.in_edges(v)) before += r.flow.edge(e).outflow.value_left_of(theta);
                if (before != detail::gross_inflow_value(n, r.flow, v, theta)) {
                    bool from_u = n.inflow(v).value_left_of(theta) != n.inflow(v).value_at(theta);
                    Event ev{theta, from_u ? EventKind::InflowBreak : EventKind::GrossInflowBreak, v};
                    boundary_events.push_back(ev);
                    r.events.push_back(ev);
                }
            }
        }

        std::vector<Rational> queues(n.edge_count());
        for (EdgeId e = 0; e < n.edge_count(); ++e) queues[e] = r.flow.queue_at(e, theta);
        LabelState ls = compute_labels(n, queues);

        if (!order_ready || needs_refresh(order, ls)) {
            auto removed = refresh_order(order, n, ls);
            r.order_refresh_times.push_back(theta);
            r.events.push_back({theta, EventKind::OrderRefresh, -1});
            for (auto& rm : removed) r.removed_edges.emplace_back(theta, rm);
            order_ready = true;
        }

        // distribute every node's gross inflow along the maintained order
        std::vector<Rational> rates(n.edge_count(), Rational(0));
        ls.slope.assign(n.node_count(), Rational(0));
        for (NodeId v : order.order) {
            if (v == n.sink()) continue;
            Rational b = detail::gross_inflow_value(n, r.flow, v, theta);
            ls.slope[v] = detail::distribute_node(n, v, b, ls, queues, ls.slope, cfg.hints, rates);
        }

        dump_debug_labels(cfg.debug_labels, n, theta, ls, order);

        std::optional<Rational> hard_cap = cfg.horizon;
        AlphaBound ab = extension_alpha(n, r.flow, theta, rates, ls, queues, hard_cap);
        Rational end = theta + ab.alpha;

        PhaseRecord p;
        p.start = theta;
        p.end = end;
        p.inflow_rates = rates;
        p.labels.reserve(n.node_count());
        for (NodeId v = 0; v < n.node_count(); ++v) p.labels.emplace_back(ls.value[v], ls.slope[v]);
        p.active_interior = detail::interior_active(n, ls, rates, queues, ls.slope);

        commit_phase(r.flow, n, p);
        for (EdgeId e : n.in_edges(n.sink())) arrived += r.flow.edge(e).outflow.integrate(theta, end);
        ++r.steps;

        // A boundary justified by no event is a pure knowledge-horizon cut;
        // the continuation is provably identical, so merge the records.
        if (!r.phases.empty() && boundary_events.empty() && r.phases.back().end == theta) {
            PhaseRecord& prev = r.phases.back();
            bool continues = prev.inflow_rates == p.inflow_rates &&
                             prev.active_interior == p.active_interior;
            if (continues) {
                Rational dt = theta - prev.start;
                for (NodeId v = 0; v < n.node_count() && continues; ++v) {
                    continues = prev.labels[v].second == p.labels[v].second &&
                                prev.labels[v].first + prev.labels[v].second * dt == p.labels[v].first;
                }
            }
            if (!continues)
                throw InternalError("solver: state changed across a pure horizon cut");
            prev.end = p.end;
        } else {
            r.phases.push_back(std::move(p));
        }

        for (const Event& ev : ab.events) r.events.push_back(ev);
        boundary_events = std::move(ab.events);
        theta = end;
    }

    if (r.terminated) {
        Rational injected = n.stats().total_inflow_volume;
        if (injected != arrived)
            throw InternalError("solver: volume mismatch at termination (" + injected.str() +
                                " in, " + arrived.str() + " out)");
        // The loop stops on the first boundary with a drained network, which
        // can overshoot the last arrival by up to tau_min; cut everything
        // back to the exact quiet time.
        Rational quiet = detail::quiet_time(n, r.flow);
        r.termination_time = quiet;
        r.flow.truncate_at(n, quiet);
        while (!r.phases.empty() && r.phases.back().start >= quiet) r.phases.pop_back();
        if (!r.phases.empty() && r.phases.back().end > quiet) r.phases.back().end = quiet;
    }
    detail::sort_events(r.events);
    return r;
}

SolveResult solve(const Network& n, const SolverConfig& cfg) {
    switch (cfg.mode) {
        case SolveMode::Acyclic: return solve_acyclic(n, cfg);
        case SolveMode::General: return solve_general(n, cfg);
        case SolveMode::AutoDetect: return n.is_acyclic() ? solve_acyclic(n, cfg) : solve_general(n, cfg);
    }
    throw InputError("solve: unknown mode");
}

std::string format_event_log(const std::vector<Event>& events, const Network& n) {
    std::ostringstream out;
    for (const Event& ev : events) {
        out << "theta=" << ev.time.str() << " kind=" << event_kind_name(ev.kind);
        switch (ev.kind) {
            case EventKind::InflowBreak:
            case EventKind::GrossInflowBreak:
                out << " node=" << n.node_name(ev.subject);
                break;
            case EventKind::QueueDepletion:
            case EventKind::Activation: {
                const Edge& ed = n.edge(ev.subject);
                out << " edge=" << n.node_name(ed.tail) << "->" << n.node_name(ed.head) << "#"
                    << ev.subject;
                break;
            }
            case EventKind::OrderRefresh:
                break;
        }
        out << "\n";
    }
    return out.str();
}

namespace {

json step_function_json(const StepFunction& f) {
    json pieces = json::array();
    for (const auto& p : f.pieces()) pieces.push_back({p.from.str(), p.value.str()});
    return pieces;
}

}  // namespace

std::string serialize_solve_result(const SolveResult& r, const Network& n) {
    json doc;
    doc["network"] = json::parse(serialize_network(n));
    json phases = json::array();
    for (const PhaseRecord& p : r.phases) {
        json jp;
        jp["start"] = p.start.str();
        jp["end"] = p.end.str();
        json rates = json::array();
        for (const Rational& z : p.inflow_rates) rates.push_back(z.str());
        jp["rates"] = rates;
        json labels = json::array();
        for (const auto& [value, slope] : p.labels) labels.push_back({value.str(), slope.str()});
        jp["labels"] = labels;
        jp["active"] = p.active_interior;
        phases.push_back(std::move(jp));
    }
    doc["phases"] = std::move(phases);
    json events = json::array();
    for (const Event& ev : r.events) {
        json je;
        je["theta"] = ev.time.str();
        je["kind"] = event_kind_name(ev.kind);
        if (ev.kind == EventKind::InflowBreak || ev.kind == EventKind::GrossInflowBreak)
            je["node"] = n.node_name(ev.subject);
        else if (ev.kind != EventKind::OrderRefresh)
            je["edge"] = ev.subject;
        events.push_back(std::move(je));
    }
    doc["events"] = std::move(events);
    doc["terminated"] = r.terminated;
    doc["termination_time"] = r.termination_time ? json(r.termination_time->str()) : json(nullptr);
    switch (r.status) {
        case SolveStatus::Completed: doc["status"] = "completed"; break;
        case SolveStatus::HorizonReached: doc["status"] = "horizon-reached"; break;
        case SolveStatus::StepLimit: doc["status"] = "step-limit"; break;
    }
    json flow_edges = json::array();
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        const EdgeFlow& ef = r.flow.edge(e);
        json je;
        je["frontier"] = ef.frontier.str();
        je["inflow"] = ef.frontier.is_zero() ? json::array() : step_function_json(ef.inflow);
        je["outflow"] = step_function_json(ef.outflow);
        flow_edges.push_back(std::move(je));
    }
    doc["flow"] = {{"edges", std::move(flow_edges)}};
    return doc.dump(2) + "\n";
}

SolveDocument parse_solve_document(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("solve document: invalid JSON: ") + e.what());
    }
    try {
        if (!doc.contains("network")) throw InputError("solve document: missing network");
        Network net = parse_network(doc["network"].dump());
        FlowOverTime flow(net);
        const json& edges = doc.at("flow").at("edges");
        if (static_cast<int>(edges.size()) != net.edge_count())
            throw InputError("solve document: flow edge count mismatch");
        for (EdgeId e = 0; e < net.edge_count(); ++e) {
            const json& je = edges[e];
            Rational frontier = Rational::parse(je.at("frontier").get<std::string>());
            if (frontier.is_zero()) continue;
            EdgeFlow& ef = flow.edge_mutable(e);
            auto parse_sf = [](const json& pieces, const Rational& end) {
                StepFunction f(Rational(0), Rational(0), end);
                bool first = true;
                for (const auto& p : pieces) {
                    Rational from = Rational::parse(p.at(0).get<std::string>());
                    Rational value = Rational::parse(p.at(1).get<std::string>());
                    if (first) {
                        if (!from.is_zero()) throw InputError("solve document: flow must start at 0");
                        f = StepFunction(Rational(0), value, end);
                        first = false;
                    } else {
                        f.add_on(from, end, value - f.value_at(from));
                    }
                }
                if (first) throw InputError("solve document: empty step function");
                return f;
            };
            ef.frontier = frontier;
            ef.inflow = parse_sf(je.at("inflow"), frontier);
            ef.outflow = parse_sf(je.at("outflow"), frontier + net.edge(e).transit_time);
            ef.queue = propagate_outflow(net.edge(e).transit_time, net.edge(e).capacity, ef.inflow).second;
        }
        std::vector<PhaseRecord> phases;
        if (doc.contains("phases")) {
            for (const auto& jp : doc["phases"]) {
                PhaseRecord p;
                p.start = Rational::parse(jp.at("start").get<std::string>());
                p.end = Rational::parse(jp.at("end").get<std::string>());
                for (const auto& z : jp.at("rates"))
                    p.inflow_rates.push_back(Rational::parse(z.get<std::string>()));
                for (const auto& l : jp.at("labels"))
                    p.labels.emplace_back(Rational::parse(l.at(0).get<std::string>()),
                                          Rational::parse(l.at(1).get<std::string>()));
                for (const auto& a : jp.at("active")) p.active_interior.push_back(a.get<int>());
                phases.push_back(std::move(p));
            }
        }
        return SolveDocument{std::move(net), std::move(flow), std::move(phases)};
    } catch (const json::exception& e) {
        throw InputError(std::string("solve document: ") + e.what());
    }
}

}  // namespace ide
