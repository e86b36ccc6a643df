#include "ide/flow.hpp"

#include <algorithm>
#include <sstream>

#include "ide/errors.hpp"

namespace ide {

FlowOverTime::FlowOverTime(const Network& n) {
    edges_.reserve(n.edge_count());
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        const Rational& tau = n.edge(e).transit_time;
        // The inflow domain [0, frontier) is empty until the first extension;
        // an unbounded zero stub stands in for it (frontier carries the true
        // extent). Outflow starts as 0 on [0, tau).
        edges_.push_back(EdgeFlow{
            StepFunction(Rational(0), Rational(0)),
            StepFunction(Rational(0), Rational(0), tau),
            PWLinear(Rational(0), Rational(0)),
            Rational(0),
        });
    }
}

void FlowOverTime::extend_edge(const Network& n, EdgeId e, const Rational& to, const Rational& rate) {
    EdgeFlow& ef = edges_[e];
    const Edge& ed = n.edge(e);
    if (to <= ef.frontier) throw InternalError("flow: extension must advance the frontier");
    if (rate.sign() < 0) throw InternalError("flow: negative inflow rate");

    Rational q0 = ef.queue.value_at(ef.frontier);
    if (q0.sign() < 0) throw InternalError("flow: negative queue");

    Rational out_value;
    Rational q_slope;
    if (q0.sign() > 0) {
        out_value = ed.capacity;
        q_slope = rate - ed.capacity;
        // interior depletions are phase boundaries; the caller must not
        // extend past one
        if (q_slope.sign() < 0 && q0 + q_slope * (to - ef.frontier) < Rational(0))
            throw InternalError("flow: extension crosses a queue depletion");
    } else {
        out_value = min(rate, ed.capacity);
        q_slope = max(rate - ed.capacity, Rational(0));
    }

    if (ef.frontier.is_zero()) {
        ef.inflow = StepFunction(Rational(0), rate, to);
    } else {
        ef.inflow.append(to, rate);
    }
    ef.outflow.append(to + ed.transit_time, out_value);
    ef.queue.append_segment(to, q_slope);
    ef.frontier = to;
}

void FlowOverTime::truncate_at(const Network& n, const Rational& t) {
    for (EdgeId e = 0; e < edge_count(); ++e) {
        EdgeFlow& ef = edges_[e];
        if (ef.frontier <= t) continue;
        ef.inflow.truncate_at(t);
        ef.outflow.truncate_at(t + n.edge(e).transit_time);
        PWLinear q(Rational(0), Rational(0));
        for (const auto& seg : ef.queue.segments()) {
            if (seg.to <= t) {
                q.append_segment(seg.to, seg.slope);
            } else {
                if (q.last_breakpoint() < t) q.append_segment(t, seg.slope);
                break;
            }
        }
        ef.queue = std::move(q);
        ef.frontier = t;
    }
}

std::pair<StepFunction, PWLinear> propagate_outflow(const Rational& tau, const Rational& nu,
                                                    const StepFunction& f_plus) {
    if (!f_plus.domain_end()) throw InputError("propagate_outflow: inflow must be bounded");
    const Rational& upto = *f_plus.domain_end();
    StepFunction outflow(Rational(0), Rational(0), tau);
    PWLinear queue(Rational(0), Rational(0));

    Rational t = f_plus.domain_start();
    if (!t.is_zero()) throw InputError("propagate_outflow: inflow must start at 0");
    Rational q(0);
    const auto& pieces = f_plus.pieces();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        Rational lo = pieces[i].from;
        Rational hi = (i + 1 < pieces.size()) ? pieces[i + 1].from : upto;
        const Rational& rate = pieces[i].value;
        while (lo < hi) {
            if (q.sign() > 0) {
                Rational slope = rate - nu;
                Rational seg_end = hi;
                if (slope.sign() < 0) {
                    Rational depletion = lo + q / (nu - rate);
                    if (depletion < hi) seg_end = depletion;
                }
                outflow.append(seg_end + tau, nu);
                queue.append_segment(seg_end, slope);
                q += slope * (seg_end - lo);
                lo = seg_end;
            } else {
                Rational slope = max(rate - nu, Rational(0));
                outflow.append(hi + tau, min(rate, nu));
                queue.append_segment(hi, slope);
                q += slope * (hi - lo);
                lo = hi;
            }
        }
    }
    return {std::move(outflow), std::move(queue)};
}

StepFunction gross_node_inflow(const FlowOverTime& f, const Network& n, NodeId v,
                               const Rational& from, const Rational& to) {
    std::vector<std::pair<const StepFunction*, Rational>> terms;
    for (EdgeId e : n.in_edges(v)) {
        const EdgeFlow& ef = f.edge(e);
        if (!ef.outflow.domain_end() || *ef.outflow.domain_end() < to)
            throw InternalError("gross_node_inflow: incoming outflow not determined through window");
        terms.emplace_back(&ef.outflow, Rational(1));
    }
    terms.emplace_back(&n.inflow(v), Rational(1));
    return StepFunction::combine(terms, from, to);
}

void commit_phase(FlowOverTime& f, const Network& n, const PhaseRecord& p) {
    if (static_cast<int>(p.inflow_rates.size()) != n.edge_count())
        throw InternalError("commit_phase: rate vector size mismatch");
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        if (f.edge(e).frontier != p.start)
            throw InternalError("commit_phase: phase start does not match the frontier");
    }
    for (EdgeId e = 0; e < n.edge_count(); ++e)
        f.extend_edge(n, e, p.end, p.inflow_rates[e]);
}

std::string trace_csv(const FlowOverTime& f, const Network& n) {
    std::ostringstream out;
    out << "edge,theta_from,theta_to,inflow_rate,outflow_rate,queue_at_from,queue_slope,"
           "inflow_rate_dec,queue_at_from_dec\n";
    for (EdgeId e = 0; e < n.edge_count(); ++e) {
        const EdgeFlow& ef = f.edge(e);
        std::string name = n.node_name(n.edge(e).tail) + "->" + n.node_name(n.edge(e).head) +
                           "#" + std::to_string(e);
        // rows follow the union of inflow and queue breakpoints
        std::vector<Rational> cuts{Rational(0)};
        for (const auto& p : ef.inflow.pieces()) cuts.push_back(p.from);
        for (const auto& b : ef.queue.breakpoints()) cuts.push_back(b);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        while (!cuts.empty() && cuts.back() >= ef.frontier) cuts.pop_back();
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            const Rational& a = cuts[i];
            Rational b = (i + 1 < cuts.size()) ? cuts[i + 1] : ef.frontier;
            Rational inrate = ef.inflow.value_at(a);
            Rational outrate = ef.outflow.value_at(a);
            Rational qa = ef.queue.value_at(a);
            Rational qslope = (ef.queue.value_at(b) - qa) / (b - a);
            out << name << ',' << a.str() << ',' << b.str() << ',' << inrate.str() << ','
                << outrate.str() << ',' << qa.str() << ',' << qslope.str() << ',' << inrate.approx()
                << ',' << qa.approx() << '\n';
        }
    }
    return out.str();
}

}  // namespace ide
