#include "ide/network.hpp"

#include <json.hpp>

#include <algorithm>

#include "ide/errors.hpp"

namespace ide {

using json = nlohmann::ordered_json;

Network::Network(std::vector<std::string> node_names, NodeId sink, std::vector<Edge> edges,
                 std::map<NodeId, StepFunction> inflows)
    : node_names_(std::move(node_names)), sink_(sink), edges_(std::move(edges)) {
    for (NodeId v = 0; v < node_count(); ++v) {
        if (!name_to_id_.emplace(node_names_[v], v).second)
            throw InputError("network: duplicate node id '" + node_names_[v] + "'");
    }
    out_.resize(node_count());
    in_.resize(node_count());
    for (EdgeId e = 0; e < edge_count(); ++e) {
        const Edge& ed = edges_[e];
        if (ed.tail < 0 || ed.tail >= node_count() || ed.head < 0 || ed.head >= node_count())
            throw InputError("network: edge endpoint out of range");
        out_[ed.tail].push_back(e);
        in_[ed.head].push_back(e);
    }
    inflows_.assign(node_count(), StepFunction(Rational(0), Rational(0)));
    for (auto& [v, f] : inflows) {
        if (v < 0 || v >= node_count()) throw InputError("network: inflow node out of range");
        inflows_[v] = std::move(f);
    }
    validate();
    tau_min_ = edges_.empty() ? Rational(0) : edges_[0].transit_time;
    for (const Edge& ed : edges_) tau_min_ = min(tau_min_, ed.transit_time);
}

NodeId Network::node_id(const std::string& name) const {
    auto it = name_to_id_.find(name);
    if (it == name_to_id_.end()) throw InputError("network: unknown node '" + name + "'");
    return it->second;
}

void Network::validate() const {
    if (sink_ < 0 || sink_ >= node_count()) throw InputError("network: sink out of range");
    for (const Edge& e : edges_) {
        if (e.tail == e.head) throw InputError("network: self-loops are rejected");
        if (e.transit_time.sign() <= 0) throw InputError("network: transit time must be positive");
        if (e.capacity.sign() <= 0) throw InputError("network: capacity must be positive");
    }
    // sink reachable from every node: reverse search from the sink
    std::vector<char> reaches(node_count(), 0);
    std::vector<NodeId> stack{sink_};
    reaches[sink_] = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (EdgeId e : in_[v]) {
            NodeId u = edges_[e].tail;
            if (!reaches[u]) {
                reaches[u] = 1;
                stack.push_back(u);
            }
        }
    }
    for (NodeId v = 0; v < node_count(); ++v) {
        if (!reaches[v])
            throw InputError("network: sink unreachable from node '" + node_names_[v] + "'");
    }
    for (NodeId v = 0; v < node_count(); ++v) {
        const StepFunction& u = inflows_[v];
        for (const auto& p : u.pieces()) {
            if (p.value.sign() < 0) throw InputError("network: negative inflow rate");
        }
        if (!u.pieces().back().value.is_zero())
            throw InputError("network: inflow must have bounded support");
        if (v == sink_ && u.support_end())
            throw InputError("network: inflow at the sink is rejected");
    }
}

bool Network::is_acyclic() const {
    // Kahn's algorithm
    std::vector<int> in_degree(node_count(), 0);
    for (const Edge& e : edges_) ++in_degree[e.head];
    std::vector<NodeId> stack;
    for (NodeId v = 0; v < node_count(); ++v)
        if (in_degree[v] == 0) stack.push_back(v);
    int seen = 0;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        ++seen;
        for (EdgeId e : out_[v]) {
            if (--in_degree[edges_[e].head] == 0) stack.push_back(edges_[e].head);
        }
    }
    return seen == node_count();
}

InstanceStats Network::stats() const {
    InstanceStats s;
    s.tau_min = tau_min_;
    for (NodeId v = 0; v < node_count(); ++v)
        s.max_out_degree = std::max(s.max_out_degree, static_cast<int>(out_[v].size()));
    s.inflow_breakpoint_count = 0;
    s.total_inflow_volume = Rational(0);
    for (NodeId v = 0; v < node_count(); ++v) {
        const StepFunction& u = inflows_[v];
        s.inflow_breakpoint_count += u.jump_count();
        if (auto end = u.support_end()) s.total_inflow_volume += u.integrate(u.domain_start(), *end);
    }
    return s;
}

namespace {

Rational parse_rational_field(const json& j, const char* what) {
    if (!j.is_string()) throw InputError(std::string("network: ") + what + " must be a rational string");
    try {
        return Rational::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("network: bad rational in ") + what + ": " + e.what());
    }
}

}  // namespace

namespace {

Network parse_network_doc(const json& doc) {
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("sink") || !doc.contains("edges"))
        throw InputError("network: document must contain nodes, sink and edges");

    std::vector<std::string> names;
    for (const auto& n : doc["nodes"]) {
        if (!n.is_string()) throw InputError("network: node ids must be strings");
        names.push_back(n.get<std::string>());
    }
    std::map<std::string, NodeId> ids;
    for (NodeId v = 0; v < static_cast<NodeId>(names.size()); ++v) {
        if (!ids.emplace(names[v], v).second)
            throw InputError("network: duplicate node id '" + names[v] + "'");
    }
    auto lookup = [&](const json& j, const char* what) {
        if (!j.is_string()) throw InputError(std::string("network: ") + what + " must be a node id");
        auto it = ids.find(j.get<std::string>());
        if (it == ids.end())
            throw InputError("network: unknown node '" + j.get<std::string>() + "' in " + what);
        return it->second;
    };

    NodeId sink = lookup(doc["sink"], "sink");

    std::vector<Edge> edges;
    for (const auto& e : doc["edges"]) {
        Edge ed;
        ed.tail = lookup(e.at("tail"), "edge tail");
        ed.head = lookup(e.at("head"), "edge head");
        ed.transit_time = parse_rational_field(e.at("tau"), "tau");
        ed.capacity = parse_rational_field(e.at("nu"), "nu");
        edges.push_back(std::move(ed));
    }

    std::map<NodeId, StepFunction> inflows;
    if (doc.contains("inflows")) {
        for (const auto& item : doc["inflows"]) {
            NodeId v = lookup(item.at("node"), "inflow node");
            std::vector<std::tuple<Rational, Rational, Rational>> pieces;
            for (const auto& p : item.at("pieces")) {
                pieces.emplace_back(parse_rational_field(p.at("from"), "inflow from"),
                                    parse_rational_field(p.at("to"), "inflow to"),
                                    parse_rational_field(p.at("rate"), "inflow rate"));
            }
            if (!inflows.emplace(v, StepFunction::from_intervals(Rational(0), pieces)).second)
                throw InputError("network: duplicate inflow entry for '" + names[v] + "'");
        }
    }

    return Network(std::move(names), sink, std::move(edges), std::move(inflows));
}

}  // namespace

Network parse_network(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("network: invalid document: ") + e.what());
    }
    try {
        return parse_network_doc(doc);
    } catch (const json::exception& e) {
        throw InputError(std::string("network: ") + e.what());
    }
}

std::string serialize_network(const Network& n) {
    json doc;
    doc["nodes"] = json::array();
    for (NodeId v = 0; v < n.node_count(); ++v) doc["nodes"].push_back(n.node_name(v));
    doc["sink"] = n.node_name(n.sink());
    doc["edges"] = json::array();
    for (const Edge& e : n.edges()) {
        doc["edges"].push_back({{"tail", n.node_name(e.tail)},
                                {"head", n.node_name(e.head)},
                                {"tau", e.transit_time.str()},
                                {"nu", e.capacity.str()}});
    }
    doc["inflows"] = json::array();
    for (NodeId v = 0; v < n.node_count(); ++v) {
        const StepFunction& u = n.inflow(v);
        if (!u.support_end()) continue;
        json pieces = json::array();
        const auto& ps = u.pieces();
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (ps[i].value.is_zero()) continue;
            // bounded support guarantees a following piece
            pieces.push_back({{"from", ps[i].from.str()},
                              {"to", ps[i + 1].from.str()},
                              {"rate", ps[i].value.str()}});
        }
        doc["inflows"].push_back({{"node", n.node_name(v)}, {"pieces", pieces}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace ide
