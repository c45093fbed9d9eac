// uniprep: synthesis, verification, and Grover-experiment frontend.
//
// Subcommands: prep, verify, count, sample, grover, sweep.  Exit codes:
// 0 success, 1 verification failure, 2 usage or input error, 3 simulator
// capacity exceeded.  Every output embeds the tool version and the full
// configuration (seed included wherever randomness is involved), and an
// identical invocation always produces byte-identical output: CSV uses LF
// endings, '#'-prefixed metadata lines, one header row, and doubles are
// rendered with 17 significant digits.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uniprep/circuit.hpp"
#include "uniprep/coloring.hpp"
#include "uniprep/prep.hpp"
#include "uniprep/qasm.hpp"
#include "uniprep/simulate.hpp"
#include "uniprep/stats.hpp"
#include "uniprep/version.hpp"

namespace {

using uniprep::detail::format_double;

/// Writes the accumulated output to --out PATH if given, else stdout.
void deliver(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
        throw std::invalid_argument("cannot open output file: " + out_path);
    }
    file << text;
}

std::string metadata_header(const std::string& command) {
    std::string text;
    text += std::string("# uniprep version ") + uniprep::kVersion + "\n";
    text += "# command: " + command + "\n";
    return text;
}

std::string polarity_name(uniprep::Polarity polarity) {
    return polarity == uniprep::Polarity::Positive ? "positive" : "negative";
}

// ---------------------------------------------------------------- prep --

int cmd_prep(std::uint64_t n, const std::string& qasm_path, bool as_json,
             const std::string& out_path) {
    const uniprep::Circuit circuit = uniprep::generate(n);
    const std::vector<uniprep::PlannedRotation> rotations = uniprep::plan(n);

    if (!qasm_path.empty()) {
        std::ofstream file(qasm_path, std::ios::binary);
        if (!file) {
            throw std::invalid_argument("cannot open output file: " + qasm_path);
        }
        file << uniprep::export_qasm(circuit);
    }

    std::string text;
    if (as_json) {
        nlohmann::ordered_json document;
        document["version"] = uniprep::kVersion;
        document["command"] = "prep";
        document["n"] = n;
        document["wires"] = circuit.wire_count;
        document["two_wire_gates"] = uniprep::two_wire_gate_count(circuit);
        document["gates"] = nlohmann::ordered_json::array();
        for (const uniprep::PlannedRotation& rotation : rotations) {
            nlohmann::ordered_json gate;
            gate["kind"] = rotation.control ? "cry" : "ry";
            if (rotation.control) {
                gate["control"] = *rotation.control;
                gate["polarity"] = polarity_name(rotation.polarity);
            }
            gate["target"] = rotation.target;
            gate["theta"] = uniprep::planned_theta(rotation);
            gate["closed_form"] = uniprep::planned_angle_text(rotation);
            document["gates"].push_back(gate);
        }
        if (!qasm_path.empty()) {
            document["qasm_file"] = qasm_path;
        }
        text = document.dump(2) + "\n";
    } else {
        text += metadata_header("prep");
        text += "# n: " + std::to_string(n) + "\n";
        text += "# wires: " + std::to_string(circuit.wire_count) + "\n";
        text += "# gates: " + std::to_string(circuit.gates.size()) + "\n";
        text += "# two_wire_gates: " + std::to_string(uniprep::two_wire_gate_count(circuit)) +
                "\n";
        if (!qasm_path.empty()) {
            text += "# qasm_file: " + qasm_path + "\n";
        }
        if (rotations.empty()) {
            text += "circuit is empty: a single-state superposition needs no gates\n";
        }
        for (std::size_t index = 0; index < rotations.size(); ++index) {
            const uniprep::PlannedRotation& rotation = rotations[index];
            text += "[" + std::to_string(index) + "] ";
            if (rotation.control) {
                text += "cry q" + std::to_string(*rotation.control) + " -> q" +
                        std::to_string(rotation.target) + " (" +
                        polarity_name(rotation.polarity) + ")";
            } else {
                text += "ry q" + std::to_string(rotation.target);
            }
            text += " theta=" + format_double(uniprep::planned_theta(rotation)) + " (" +
                    uniprep::planned_angle_text(rotation) + ")\n";
        }
    }
    deliver(text, out_path);
    return 0;
}

// -------------------------------------------------------------- verify --

int cmd_verify(std::uint64_t n, double tolerance, const std::string& out_path) {
    const uniprep::Circuit circuit = uniprep::generate(n);
    const uniprep::StateVector state = uniprep::simulate(circuit);
    const uniprep::UniformityReport report = uniprep::check_uniformity(state, n);
    const bool pass = report.max_probability_deviation <= tolerance &&
                      report.max_stray_amplitude <= tolerance;

    std::string text = metadata_header("verify");
    text += "# n: " + std::to_string(n) + "\n";
    text += "# tolerance: " + format_double(tolerance) + "\n";
    text += "# wires: " + std::to_string(circuit.wire_count) + "\n";
    text += "# two_wire_gates: " + std::to_string(uniprep::two_wire_gate_count(circuit)) + "\n";
    text += "max_probability_deviation: " + format_double(report.max_probability_deviation) +
            "\n";
    text += "max_stray_amplitude: " + format_double(report.max_stray_amplitude) + "\n";
    text += std::string("result: ") + (pass ? "PASS" : "FAIL") + "\n";
    deliver(text, out_path);
    return pass ? 0 : 1;
}

// --------------------------------------------------------------- count --

int cmd_count(std::uint64_t max_n, const std::string& out_path) {
    if (max_n < 2) {
        throw std::invalid_argument("--max must be at least 2");
    }
    std::string text = metadata_header("count");
    text += "# max: " + std::to_string(max_n) + "\n";
    text += "n,actual_two_wire,closed_form,eq5_sum,agree\n";
    for (std::uint64_t n = 2; n <= max_n; ++n) {
        const std::size_t actual = uniprep::two_wire_gate_count(uniprep::generate(n));
        const std::size_t closed = uniprep::predicted_two_wire_count(n);
        const std::int64_t summation = uniprep::eq5_summation(n);
        const bool agree =
            actual == closed && static_cast<std::int64_t>(closed) == summation;
        text += std::to_string(n) + "," + std::to_string(actual) + "," +
                std::to_string(closed) + "," + std::to_string(summation) + "," +
                (agree ? "true" : "false") + "\n";
    }
    deliver(text, out_path);
    return 0;
}

// -------------------------------------------------------------- sample --

int cmd_sample(std::uint64_t n, std::uint64_t shots, std::uint64_t seed,
               const std::string& out_path) {
    if (shots == 0) {
        throw std::invalid_argument("--shots must be at least 1");
    }
    const uniprep::StateVector state = uniprep::simulate(uniprep::generate(n));
    const uniprep::Histogram histogram = uniprep::sample(state, shots, seed);

    std::uint64_t min_count = UINT64_MAX;
    std::uint64_t max_count = 0;
    std::string rows;
    auto emit_row = [&](std::uint64_t basis_state, std::uint64_t count) {
        rows += std::to_string(basis_state) + "," + std::to_string(count) + "\n";
        min_count = std::min(min_count, count);
        max_count = std::max(max_count, count);
    };
    for (std::uint64_t k = 0; k < n; ++k) {
        const auto it = histogram.counts.find(k);
        emit_row(k, it == histogram.counts.end() ? 0 : it->second);
    }
    // A correct circuit never populates states >= n; emit them anyway if
    // present so a defect cannot hide.
    for (const auto& [basis_state, count] : histogram.counts) {
        if (basis_state >= n) {
            emit_row(basis_state, count);
        }
    }

    const double chi_square = uniprep::chi_square_uniform(histogram, n);
    const double p_value =
        n < 2 ? 1.0 : uniprep::chi_square_pvalue(chi_square, n - 1);

    std::string text = metadata_header("sample");
    text += "# n: " + std::to_string(n) + "\n";
    text += "# shots: " + std::to_string(shots) + "\n";
    text += "# seed: " + std::to_string(seed) + "\n";
    text += "state,count\n";
    text += rows;
    text += "# min_count: " + std::to_string(min_count) + "\n";
    text += "# max_count: " + std::to_string(max_count) + "\n";
    text += "# expected_count: " +
            format_double(static_cast<double>(shots) / static_cast<double>(n)) + "\n";
    text += "# chi_square: " + format_double(chi_square) + "\n";
    text += "# p_value: " + format_double(p_value) + "\n";
    deliver(text, out_path);
    return 0;
}

// -------------------------------------------------------------- grover --

uniprep::ColoringProblem load_problem(const std::string& graph_path, std::size_t line_nodes,
                                      std::uint64_t line_colors, std::string* description) {
    if (!graph_path.empty()) {
        std::ifstream file(graph_path, std::ios::binary);
        if (!file) {
            throw std::invalid_argument("cannot read graph file: " + graph_path);
        }
        const std::string text((std::istreambuf_iterator<char>(file)),
                               std::istreambuf_iterator<char>());
        *description = "file " + graph_path;
        return uniprep::parse_problem(text);
    }
    if (line_nodes == 0 || line_colors == 0) {
        throw std::invalid_argument("provide either --graph PATH or --line K with --colors C");
    }
    *description =
        "line nodes=" + std::to_string(line_nodes) + " colors=" + std::to_string(line_colors);
    return uniprep::line_graph(line_nodes, line_colors);
}

uniprep::InitMode parse_mode(const std::string& mode) {
    if (mode == "restricted") {
        return uniprep::InitMode::Restricted;
    }
    if (mode == "hadamard") {
        return uniprep::InitMode::Hadamard;
    }
    throw std::invalid_argument("--mode must be 'restricted' or 'hadamard'");
}

int cmd_grover(const std::string& graph_path, std::size_t line_nodes, std::uint64_t line_colors,
               const std::string& mode_text, std::size_t trials, std::uint64_t seed,
               const std::string& out_path) {
    std::string description;
    const uniprep::ColoringProblem problem =
        load_problem(graph_path, line_nodes, line_colors, &description);
    const uniprep::InitMode mode = parse_mode(mode_text);
    const uniprep::WireLayout lay = uniprep::layout(problem);
    const uniprep::SearchSpaces spaces = uniprep::search_space_sizes(problem);
    const uniprep::GrowthPolicy policy;
    const uniprep::SearchStats stats =
        uniprep::run_search(problem, mode, policy, trials, seed);

    std::string text = metadata_header("grover");
    text += "# problem: " + description + "\n";
    text += "# vertices: " + std::to_string(problem.vertex_colors.size()) + "\n";
    text += "# edges: " + std::to_string(problem.edges.size()) + "\n";
    text += "# mode: " + std::string(uniprep::mode_name(mode)) + "\n";
    text += "# trials: " + std::to_string(trials) + "\n";
    text += "# seed: " + std::to_string(seed) + "\n";
    text += "# wires: " + std::to_string(lay.total_wires) + "\n";
    text += "# search_space_hadamard: " + std::to_string(spaces.hadamard) + "\n";
    text += "# search_space_restricted: " + std::to_string(spaces.restricted) + "\n";
    text += "# lambda: " + format_double(policy.lambda) + "\n";
    text += "trial,repetitions,success\n";
    for (std::size_t trial = 0; trial < stats.trials.size(); ++trial) {
        const uniprep::TrialResult& result = stats.trials[trial];
        text += std::to_string(trial) + "," + std::to_string(result.repetitions) + "," +
                (result.success ? "true" : "false") + "\n";
    }
    text += "# successes: " + std::to_string(stats.successes) + "\n";
    text += "# mean_repetitions: " + format_double(stats.mean_repetitions) + "\n";
    deliver(text, out_path);
    return 0;
}

// --------------------------------------------------------------- sweep --

void parse_node_range(const std::string& range, std::size_t* first, std::size_t* last) {
    const std::size_t separator = range.find("..");
    try {
        if (separator == std::string::npos) {
            *first = *last = std::stoull(range);
        } else {
            *first = std::stoull(range.substr(0, separator));
            *last = std::stoull(range.substr(separator + 2));
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("--nodes expects A..B or a single count, got: " + range);
    }
    if (*first == 0 || *last < *first) {
        throw std::invalid_argument("--nodes range must satisfy 1 <= A <= B, got: " + range);
    }
}

int cmd_sweep(std::uint64_t colors, const std::string& node_range, std::size_t trials,
              std::uint64_t seed, const std::string& out_path) {
    std::size_t first_nodes = 0;
    std::size_t last_nodes = 0;
    parse_node_range(node_range, &first_nodes, &last_nodes);

    std::string text = metadata_header("sweep");
    text += "# colors: " + std::to_string(colors) + "\n";
    text += "# nodes: " + std::to_string(first_nodes) + ".." + std::to_string(last_nodes) + "\n";
    text += "# trials: " + std::to_string(trials) + "\n";
    text += "# seed: " + std::to_string(seed) + "\n";
    text += "nodes,mode,mean_repetitions,trials\n";
    for (std::size_t nodes = first_nodes; nodes <= last_nodes; ++nodes) {
        const uniprep::ColoringProblem problem = uniprep::line_graph(nodes, colors);
        for (const uniprep::InitMode mode :
             {uniprep::InitMode::Restricted, uniprep::InitMode::Hadamard}) {
            try {
                const uniprep::SearchStats stats =
                    uniprep::run_search(problem, mode, uniprep::GrowthPolicy{}, trials, seed);
                text += std::to_string(nodes) + "," + uniprep::mode_name(mode) + "," +
                        format_double(stats.mean_repetitions) + "," +
                        std::to_string(stats.trials.size()) + "\n";
            } catch (const uniprep::CapacityError& error) {
                std::cerr << "warning: skipping nodes=" << nodes << " mode="
                          << uniprep::mode_name(mode) << ": " << error.what() << "\n";
            }
        }
    }
    deliver(text, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uniform-superposition synthesis and Grover coloring experiments"};
    app.require_subcommand(1);

    std::uint64_t prep_n = 0;
    std::string prep_qasm;
    bool prep_json = false;
    std::string prep_out;
    CLI::App* prep = app.add_subcommand("prep", "synthesize the circuit for N states");
    prep->add_option("N", prep_n, "number of basis states")->required();
    prep->add_option("--qasm", prep_qasm, "also write OpenQASM 2.0 to this path");
    prep->add_flag("--json", prep_json, "emit the gate list as JSON");
    prep->add_option("--out", prep_out, "write output to this path instead of stdout");

    std::uint64_t verify_n = 0;
    double verify_tol = 1e-10;
    std::string verify_out;
    CLI::App* verify = app.add_subcommand("verify", "simulate and check uniformity");
    verify->add_option("N", verify_n, "number of basis states")->required();
    verify->add_option("--tol", verify_tol, "tolerance on probabilities and stray amplitudes");
    verify->add_option("--out", verify_out, "write output to this path instead of stdout");

    std::uint64_t count_max = 0;
    std::string count_out;
    CLI::App* count = app.add_subcommand("count", "two-wire gate counts for N = 2..max");
    count->add_option("--max", count_max, "largest N")->required();
    count->add_option("--out", count_out, "write output to this path instead of stdout");

    std::uint64_t sample_n = 0;
    std::uint64_t sample_shots = 10000;
    std::uint64_t sample_seed = 1;
    std::string sample_out;
    CLI::App* sample = app.add_subcommand("sample", "seeded measurement histogram");
    sample->add_option("N", sample_n, "number of basis states")->required();
    sample->add_option("--shots", sample_shots, "number of measurements");
    sample->add_option("--seed", sample_seed, "sampling seed");
    sample->add_option("--out", sample_out, "write output to this path instead of stdout");

    std::string grover_graph;
    std::size_t grover_line = 0;
    std::uint64_t grover_colors = 0;
    std::string grover_mode = "restricted";
    std::size_t grover_trials = 100;
    std::uint64_t grover_seed = 1;
    std::string grover_out;
    CLI::App* grover = app.add_subcommand("grover", "Grover coloring search on one graph");
    grover->add_option("--graph", grover_graph, "problem JSON path");
    grover->add_option("--line", grover_line, "line graph with this many nodes");
    grover->add_option("--colors", grover_colors, "colors per vertex for --line");
    grover->add_option("--mode", grover_mode, "initializer: restricted or hadamard");
    grover->add_option("--trials", grover_trials, "independent search trials");
    grover->add_option("--seed", grover_seed, "experiment seed");
    grover->add_option("--out", grover_out, "write output to this path instead of stdout");

    std::uint64_t sweep_colors = 0;
    std::string sweep_nodes;
    std::size_t sweep_trials = 100;
    std::uint64_t sweep_seed = 1;
    std::string sweep_out;
    CLI::App* sweep = app.add_subcommand("sweep", "both modes across a range of line graphs");
    sweep->add_option("--colors", sweep_colors, "colors per vertex")->required();
    sweep->add_option("--nodes", sweep_nodes, "node range A..B")->required();
    sweep->add_option("--trials", sweep_trials, "trials per point and mode");
    sweep->add_option("--seed", sweep_seed, "experiment seed");
    sweep->add_option("--out", sweep_out, "write output to this path instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::CallForAllHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        std::cerr << error.what() << "\n";
        return 2;
    }

    try {
        if (prep->parsed()) {
            return cmd_prep(prep_n, prep_qasm, prep_json, prep_out);
        }
        if (verify->parsed()) {
            return cmd_verify(verify_n, verify_tol, verify_out);
        }
        if (count->parsed()) {
            return cmd_count(count_max, count_out);
        }
        if (sample->parsed()) {
            return cmd_sample(sample_n, sample_shots, sample_seed, sample_out);
        }
        if (grover->parsed()) {
            return cmd_grover(grover_graph, grover_line, grover_colors, grover_mode,
                              grover_trials, grover_seed, grover_out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_colors, sweep_nodes, sweep_trials, sweep_seed, sweep_out);
        }
    } catch (const uniprep::CapacityError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 3;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    }
    return 2;
}
