#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ide/errors.hpp"
#include "ide/flow.hpp"
#include "ide/instances.hpp"
#include "ide/network.hpp"
#include "ide/solver.hpp"
#include "ide/verifier.hpp"

namespace {

using ide::Rational;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw ide::InputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ide::InputError("cannot open '" + path + "' for writing");
    out << text;
}

Rational parse_rational_flag(const std::string& s, const char* what) {
    try {
        return Rational::parse(s);
    } catch (const std::invalid_argument& e) {
        throw ide::InputError(std::string(what) + ": " + e.what());
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Exact solver for instantaneous dynamic equilibrium flows over time"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Compute an equilibrium flow for a network");
    std::string solve_network = "-";
    std::string solve_out = "-";
    std::string solve_trace, solve_events, solve_hints, solve_horizon, solve_debug,
        solve_mode = "auto";
    long solve_max_steps = 200000;
    solve_cmd->add_option("--network", solve_network, "Network document (- for stdin)");
    solve_cmd->add_option("--horizon", solve_horizon, "Stop at this time (rational, e.g. 40 or 81/2)");
    solve_cmd->add_option("--max-phases", solve_max_steps, "Safety cap on extension steps");
    solve_cmd->add_option("--hints", solve_hints, "JSON file mapping node id to forced edge index");
    solve_cmd->add_option("--out", solve_out, "Result document (- for stdout)");
    solve_cmd->add_option("--trace", solve_trace, "Write a CSV trace of all edge rates and queues");
    solve_cmd->add_option("--events", solve_events, "Write the event log as a line stream");
    solve_cmd->add_option("--debug-labels", solve_debug,
                          "Write per-phase labels, active set, maintained edges and order as JSON lines");
    solve_cmd->add_option("--mode", solve_mode, "auto | acyclic | general")
        ->check(CLI::IsMember({"auto", "acyclic", "general"}));

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Check feasibility and the equilibrium property");
    std::string verify_network, verify_flow = "-";
    verify_cmd->add_option("--network", verify_network,
                           "Network document (defaults to the one embedded in the flow)");
    verify_cmd->add_option("--flow", verify_flow, "Solve result document (- for stdin)");

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "Emit a named instance as a network document");
    auto* gen_osc = gen_cmd->add_subcommand("oscillator", "Five-node instance with Omega(U) phases");
    std::string osc_u = "8";
    gen_osc->add_option("--U", osc_u, "Length of the inflow interval (rational)");
    auto* gen_sat = gen_cmd->add_subcommand("3sat", "Formula-to-network reduction instance");
    std::string sat_cnf, sat_indicator, sat_assignment, sat_hints_out;
    gen_sat->add_option("--cnf", sat_cnf, "DIMACS file with three literals per clause")->required();
    gen_sat->add_option("--indicator", sat_indicator,
                        "Network document wrapped inside the indicator gadget")->required();
    gen_sat->add_option("--assignment", sat_assignment,
                        "Comma-separated signed literals (e.g. 1,-2,3) used to emit steering hints");
    gen_sat->add_option("--hints-out", sat_hints_out, "Where to write the steering hints JSON");
    auto* gen_rand = gen_cmd->add_subcommand("random", "Seeded random single-sink instance");
    std::uint64_t rand_seed = 1;
    int rand_nodes = 6, rand_density = 25, rand_rate = 3;
    bool rand_cyclic = false;
    gen_rand->add_option("--seed", rand_seed, "PRNG seed");
    gen_rand->add_option("--nodes", rand_nodes, "Node count (>= 2)");
    gen_rand->add_option("--density", rand_density, "Extra-edge probability in percent");
    gen_rand->add_option("--rate-scale", rand_rate, "Upper bound on inflow rates");
    gen_rand->add_flag("--cyclic", rand_cyclic, "Add back edges to close directed cycles");
    std::string gen_out = "-";
    gen_cmd->add_option("--out", gen_out, "Output path (- for stdout)");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Print instance statistics");
    std::string stats_network = "-";
    stats_cmd->add_option("--network", stats_network, "Network document (- for stdin)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (solve_cmd->parsed()) {
        ide::Network net = ide::parse_network(read_input(solve_network));
        ide::SolverConfig cfg;
        cfg.max_steps = solve_max_steps;
        if (!solve_horizon.empty()) cfg.horizon = parse_rational_flag(solve_horizon, "--horizon");
        if (solve_mode == "acyclic") cfg.mode = ide::SolveMode::Acyclic;
        if (solve_mode == "general") cfg.mode = ide::SolveMode::General;
        if (!solve_hints.empty()) {
            auto doc = nlohmann::json::parse(read_input(solve_hints));
            for (auto& [node, edge] : doc.items())
                cfg.hints[net.node_id(node)] = edge.get<int>();
        }
        std::ofstream debug_stream;
        if (!solve_debug.empty()) {
            debug_stream.open(solve_debug);
            if (!debug_stream) throw ide::InputError("cannot open '" + solve_debug + "' for writing");
            cfg.debug_labels = &debug_stream;
            // the per-phase dump lives in the order-maintaining variant
            if (cfg.mode == ide::SolveMode::AutoDetect) cfg.mode = ide::SolveMode::General;
        }
        ide::SolveResult result = ide::solve(net, cfg);
        write_output(solve_out, ide::serialize_solve_result(result, net));
        if (!solve_trace.empty()) write_output(solve_trace, ide::trace_csv(result.flow, net));
        if (!solve_events.empty()) write_output(solve_events, ide::format_event_log(result.events, net));
        if (result.status == ide::SolveStatus::StepLimit) {
            std::cerr << "solve: step cap reached, result is partial\n";
            return 3;
        }
        return 0;
    }

    if (verify_cmd->parsed()) {
        ide::SolveDocument doc = ide::parse_solve_document(read_input(verify_flow));
        ide::Network net = verify_network.empty() ? std::move(doc.network)
                                                  : ide::parse_network(read_input(verify_network));
        std::vector<ide::Violation> vs = ide::verify(net, doc.flow);
        std::cout << ide::violations_report(vs);
        return vs.empty() ? 0 : 1;
    }

    if (gen_cmd->parsed()) {
        std::string out_doc;
        if (gen_osc->parsed()) {
            out_doc = ide::serialize_network(ide::gen_oscillator(parse_rational_flag(osc_u, "--U")));
        } else if (gen_sat->parsed()) {
            ide::CnfFormula formula = ide::parse_dimacs(read_input(sat_cnf));
            ide::Network indicator = ide::parse_network(read_input(sat_indicator));
            ide::ThreeSatLayout layout = ide::gen_3sat(formula, indicator);
            out_doc = ide::serialize_network(layout.network);
            if (!sat_hints_out.empty()) {
                if (sat_assignment.empty())
                    throw ide::InputError("generate 3sat: --hints-out needs --assignment");
                std::vector<int> lits;
                std::stringstream ss(sat_assignment);
                std::string item;
                while (std::getline(ss, item, ',')) lits.push_back(std::stoi(item));
                std::vector<char> truth(formula.variable_count + 1, 0);
                for (int lit : lits) {
                    if (lit == 0 || std::abs(lit) > formula.variable_count)
                        throw ide::InputError("generate 3sat: assignment literal out of range");
                    truth[std::abs(lit)] = lit > 0 ? 1 : -1;
                }
                nlohmann::ordered_json hints;
                for (std::size_t j = 0; j < formula.clauses.size(); ++j) {
                    int chosen = -1;
                    for (int k = 0; k < 3; ++k) {
                        int lit = formula.clauses[j][k];
                        if ((lit > 0 && truth[lit] > 0) || (lit < 0 && truth[-lit] < 0)) {
                            chosen = k;
                            break;
                        }
                    }
                    if (chosen < 0)
                        throw ide::InputError("generate 3sat: assignment does not satisfy clause " +
                                              std::to_string(j + 1));
                    hints[layout.network.node_name(layout.clause_sources[j])] =
                        layout.literal_edges[j][chosen];
                }
                write_output(sat_hints_out, hints.dump(2) + "\n");
            }
        } else if (gen_rand->parsed()) {
            ide::Network net = rand_cyclic
                                   ? ide::gen_random_cyclic(rand_seed, rand_nodes, rand_density, rand_rate)
                                   : ide::gen_random_acyclic(rand_seed, rand_nodes, rand_density, rand_rate);
            out_doc = ide::serialize_network(net);
        } else {
            throw ide::InputError("generate: pick oscillator, 3sat or random");
        }
        write_output(gen_out, out_doc);
        return 0;
    }

    if (stats_cmd->parsed()) {
        ide::Network net = ide::parse_network(read_input(stats_network));
        ide::InstanceStats s = net.stats();
        nlohmann::ordered_json doc;
        doc["tau_min"] = s.tau_min.str();
        doc["max_out_degree"] = s.max_out_degree;
        doc["inflow_breakpoint_count"] = s.inflow_breakpoint_count;
        doc["total_inflow_volume"] = s.total_inflow_volume.str();
        std::cout << doc.dump(2) << "\n";
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ide::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ide::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
