// Command-line front end: graph enumeration, Hopf structure maps, subtraction
// runs, flow-coefficient extraction, and conformal operator checks, all with
// machine-readable JSON output.
//
// Exit codes: 0 success, 1 numerical-tolerance failure, 2 resource/bound
// refusal, 64 usage error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hopfren/character.hpp"
#include "hopfren/conformal.hpp"
#include "hopfren/errors.hpp"
#include "hopfren/expr.hpp"
#include "hopfren/feynman.hpp"
#include "hopfren/graph.hpp"
#include "hopfren/hopf.hpp"
#include "hopfren/json_io.hpp"
#include "hopfren/laurent.hpp"
#include "hopfren/rg.hpp"
#include "hopfren/spectral.hpp"

namespace {

using hopfren::Json;

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitResource = 2;
constexpr int kExitUsage = 64;

void emit(const Json& payload, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << payload.dump(2) << "\n";
        return;
    }
    std::ofstream out(output_path);
    if (!out) throw std::invalid_argument("cannot open output file: " + output_path);
    out << payload.dump(2) << "\n";
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

// The documented cap on worker threads.  Every kernel in the current build is
// sequential, so the cap is honored by construction; parsing it here keeps the
// interface contract (and rejects nonsense values loudly).
int thread_cap() {
    const char* raw = std::getenv("HOPF_RENORM_THREADS");
    if (raw == nullptr) return 1;
    try {
        const int value = std::stoi(raw);
        if (value >= 1) return value;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid HOPF_RENORM_THREADS value\n";
    return 1;
}

struct BackendFlags {
    std::string file;
    std::string kind = "torus";
    int dim = 6;
    double period = 1.0;
    double radius = 1.0;
    double mass = 1.0;
    int cutoff = 6;
};

void add_backend_flags(CLI::App* cmd, BackendFlags& flags) {
    cmd->add_option("--backend", flags.file, "JSON file with the eigenmode backend config");
    cmd->add_option("--kind", flags.kind, "backend family: torus or circle")
        ->check(CLI::IsMember({"torus", "circle"}));
    cmd->add_option("--dim", flags.dim, "torus dimension");
    cmd->add_option("--period", flags.period, "common torus period");
    cmd->add_option("--radius", flags.radius, "circle radius");
    cmd->add_option("--mass", flags.mass, "field mass m");
    cmd->add_option("--cutoff", flags.cutoff, "per-axis mode cutoff");
}

hopfren::SpectralBackend make_backend(const BackendFlags& flags) {
    if (!flags.file.empty()) return hopfren::backend_from_json(load_json_file(flags.file));
    if (flags.kind == "circle") {
        return hopfren::SpectralBackend::circle(flags.radius, flags.mass, flags.cutoff);
    }
    return hopfren::SpectralBackend::torus(
        std::vector<double>(static_cast<size_t>(flags.dim), flags.period), flags.mass,
        flags.cutoff);
}

// ---------------------------------------------------------------- graphs ----

int cmd_graphs(int loops, int ext, int max_loop_bound, const std::string& output) {
    hopfren::EnumerationOptions opts;
    opts.max_loop_bound = max_loop_bound;
    const std::vector<hopfren::FeynmanGraph> graphs =
        hopfren::enumerate_1pi_graphs(loops, ext, opts);
    Json list = Json::array();
    for (const auto& g : graphs) list.push_back(hopfren::graph_to_json(g));
    emit(Json{{"loops", loops},
              {"external_legs", ext},
              {"count", graphs.size()},
              {"graphs", std::move(list)}},
         output);
    return kExitOk;
}

// ------------------------------------------------------------------ hopf ----

Json side_to_json(const hopfren::Monomial& m,
                  const std::map<std::string, std::string>& names) {
    Json factors = Json::array();
    for (const auto& [label, exponent] : m) {
        Json factor{{"generator", label}, {"exponent", exponent}};
        const auto alias = names.find(label);
        if (alias != names.end()) factor["display_name"] = alias->second;
        factors.push_back(std::move(factor));
    }
    return factors;
}

int cmd_hopf(const std::string& operation, const std::string& graph_file,
             const std::string& fixture, const std::string& output) {
    Json graph_json;
    if (!fixture.empty()) {
        graph_json = Json{{"fixture", fixture}};
    } else if (!graph_file.empty()) {
        graph_json = load_json_file(graph_file);
    } else {
        throw std::invalid_argument("provide a graph with --graph or --fixture");
    }

    // the empty graph denotes the algebra unit: coproduct 1 (x) 1, antipode 1
    const bool empty_graph = graph_json.contains("vertices") &&
                             graph_json.at("vertices").empty() &&
                             graph_json.value("edges", Json::array()).empty();

    hopfren::GraphCatalog catalog;
    std::string label;
    hopfren::HopfPolynomial element;
    if (empty_graph) {
        element = hopfren::HopfPolynomial::unit();
    } else {
        const hopfren::FeynmanGraph g = hopfren::graph_from_json(graph_json);
        label = catalog.add(g);
        element = hopfren::HopfPolynomial::generator(label);
    }

    Json result{{"operation", operation}};
    if (!empty_graph) {
        result["generator"] = label;
        result["loops"] = catalog.loops(label);
    }

    if (operation == "coproduct") {
        const hopfren::TensorPolynomial tensor = hopfren::coproduct(element, catalog);
        const std::map<std::string, std::string> names = catalog.display_names();
        Json terms = Json::array();
        for (const auto& [key, coefficient] : tensor.terms()) {
            terms.push_back(Json{{"coefficient", hopfren::to_string(coefficient)},
                                 {"left", side_to_json(key.first, names)},
                                 {"right", side_to_json(key.second, names)}});
        }
        result["terms"] = std::move(terms);
    } else if (operation == "antipode") {
        const hopfren::HopfPolynomial s = hopfren::antipode(element, catalog);
        const std::map<std::string, std::string> names = catalog.display_names();
        result["polynomial"] = hopfren::polynomial_to_json(s, &names);
    } else {
        throw std::invalid_argument("unknown hopf operation: " + operation);
    }
    emit(result, output);
    return kExitOk;
}

// ------------------------------------------------------------------ bphz ----

std::vector<std::string> enumerate_universe(hopfren::GraphCatalog& catalog, int loops,
                                            const std::vector<int>& ext_list,
                                            int max_loop_bound) {
    hopfren::EnumerationOptions opts;
    opts.max_loop_bound = max_loop_bound;
    std::set<std::string> seen;
    std::vector<std::string> universe;
    for (int ext : ext_list) {
        for (const auto& g : hopfren::enumerate_1pi_graphs(loops, ext, opts)) {
            const std::string label = catalog.add(g);
            if (seen.insert(label).second) universe.push_back(label);
        }
    }
    return universe;
}

int cmd_bphz(const BackendFlags& backend_flags, const std::string& character_file,
             int loops, std::vector<int> ext_list, int max_loop_bound, int order,
             double coupling, const std::string& output) {
    if (ext_list.empty()) ext_list = {2};
    hopfren::GraphCatalog catalog;
    Json backend_json;
    hopfren::Character gamma(order);

    if (!character_file.empty()) {
        // synthetic run: the character is given, graphs come from fixtures by label
        const Json j = load_json_file(character_file);
        gamma = hopfren::character_from_json(j);
        if (j.contains("graphs")) {
            for (const Json& graph_json : j.at("graphs")) {
                catalog.add(hopfren::graph_from_json(graph_json));
            }
        } else {
            for (const auto& fixture :
                 {hopfren::FeynmanGraph::bubble(), hopfren::FeynmanGraph::triangle(),
                  hopfren::FeynmanGraph::nested_two_loop()}) {
                catalog.add(fixture);
            }
        }
    } else {
        const hopfren::SpectralBackend backend = make_backend(backend_flags);
        backend_json = hopfren::backend_to_json(backend);
        const std::vector<std::string> universe =
            enumerate_universe(catalog, loops, ext_list, max_loop_bound);
        hopfren::EvalOptions eval;
        eval.coupling = coupling;
        gamma = hopfren::character_from_rules(backend, universe, catalog, order, eval);
    }

    const hopfren::BirkhoffFactors factors = hopfren::birkhoff(gamma, catalog);
    const std::map<std::string, std::string> names = catalog.display_names();

    Json rows = Json::array();
    for (const std::string& label : gamma.labels()) {
        const hopfren::LaurentSeries& value = gamma.rule(label);
        const hopfren::LaurentSeries& minus = factors.minus.rule(label);
        const hopfren::LaurentSeries& plus = factors.plus.rule(label);
        const hopfren::Complex renormalized = plus.eval_at_zero();
        Json row{{"generator", label},
                 {"display_name", catalog.display_name(label)},
                 {"loops", catalog.loops(label)},
                 {"external_legs", catalog.external_legs(label)},
                 {"gamma", hopfren::series_to_json(value)},
                 {"counterterm", hopfren::series_to_json(minus)},
                 {"renormalized", hopfren::series_to_json(plus)},
                 {"renormalized_value",
                  Json{{"re", renormalized.real()}, {"im", renormalized.imag()}}},
                 {"pole_order", value.pole_order()}};
        rows.push_back(std::move(row));
    }
    Json result{{"truncation_order", gamma.order()}, {"graphs", std::move(rows)}};
    if (!backend_json.is_null()) {
        result["backend"] = backend_json;
        result["coupling"] = coupling;
    }
    emit(result, output);
    return kExitOk;
}

// ------------------------------------------------------------------ beta ----

Json locality_to_json(const hopfren::LocalityReport& report) {
    Json deviations = Json::object();
    for (const auto& [label, value] : report.deviation) deviations[label] = value;
    return Json{{"pass", report.pass},
                {"tolerance", report.tolerance},
                {"worst_deviation", report.worst_deviation},
                {"per_generator", std::move(deviations)}};
}

int cmd_beta(const BackendFlags& backend_flags, const std::string& character_file,
             const std::string& literature, const std::vector<double>& synthetic,
             int loops, std::vector<int> ext_list, int max_loop_bound, int order,
             double coupling, double tolerance, const std::string& output) {
    if (!literature.empty()) {
        Json table = Json::array();
        for (const auto& entry : hopfren::physics_beta_report(literature)) {
            table.push_back(Json{{"theory", entry.theory},
                                 {"coupling", entry.coupling},
                                 {"one_loop_value", entry.one_loop_value},
                                 {"note", entry.note}});
        }
        emit(Json{{"table", std::move(table)}}, output);
        return kExitOk;
    }

    if (ext_list.empty()) ext_list = {2};
    hopfren::GraphCatalog catalog;
    hopfren::Character gamma(order);
    Json backend_json;

    if (!synthetic.empty()) {
        if (synthetic.size() != 5) {
            throw std::invalid_argument(
                "--synthetic needs five values: a,b,c1,d1,e for the two-loop fixture");
        }
        const double a = synthetic[0], b = synthetic[1], c1 = synthetic[2],
                     d1 = synthetic[3], e = synthetic[4];
        const std::string bubble = catalog.add(hopfren::FeynmanGraph::bubble(), "B");
        const std::string nested =
            catalog.add(hopfren::FeynmanGraph::nested_two_loop(), "G2");
        using hopfren::LaurentSeries;
        gamma.set(bubble, LaurentSeries::monomial(c1, -1, order) +
                              LaurentSeries::constant(d1, order));
        gamma.set(nested, LaurentSeries::monomial(a, -2, order) +
                              LaurentSeries::monomial(b, -1, order) +
                              LaurentSeries::constant(e, order));
    } else if (!character_file.empty()) {
        const Json j = load_json_file(character_file);
        gamma = hopfren::character_from_json(j);
        if (j.contains("graphs")) {
            for (const Json& graph_json : j.at("graphs")) {
                catalog.add(hopfren::graph_from_json(graph_json));
            }
        } else {
            for (const auto& fixture :
                 {hopfren::FeynmanGraph::bubble(), hopfren::FeynmanGraph::triangle(),
                  hopfren::FeynmanGraph::nested_two_loop()}) {
                catalog.add(fixture);
            }
        }
    } else {
        const hopfren::SpectralBackend backend = make_backend(backend_flags);
        backend_json = hopfren::backend_to_json(backend);
        const std::vector<std::string> universe =
            enumerate_universe(catalog, loops, ext_list, max_loop_bound);
        hopfren::EvalOptions eval;
        eval.coupling = coupling;
        gamma = hopfren::character_from_rules(backend, universe, catalog, order, eval);
    }

    const std::vector<double> samples{std::exp(1.0), std::exp(-1.0), std::exp(0.5)};
    const hopfren::LocalityReport locality =
        hopfren::check_locality(gamma, samples, catalog, tolerance);

    std::map<std::string, hopfren::Complex> flow;
    try {
        flow = hopfren::beta(gamma, catalog, tolerance);
    } catch (const hopfren::locality_error& e) {
        Json refusal{{"error", "locality violation"},
                     {"message", e.what()},
                     {"deviation", e.deviation},
                     {"locality", locality_to_json(locality)}};
        emit(refusal, output);
        std::cerr << "flow extraction refused: " << e.what() << "\n";
        return kExitNumerical;
    }

    Json rows = Json::array();
    for (const auto& [label, value] : flow) {
        rows.push_back(Json{{"generator", label},
                            {"display_name", catalog.display_name(label)},
                            {"loops", catalog.loops(label)},
                            {"beta", Json{{"re", value.real()}, {"im", value.imag()}}}});
    }
    Json result{{"locality", locality_to_json(locality)}, {"beta", std::move(rows)}};
    if (!backend_json.is_null()) {
        result["backend"] = backend_json;
        result["coupling"] = coupling;
    }
    emit(result, output);
    return kExitOk;
}

// ------------------------------------------------------------- conformal ----

int cmd_conformal_check(int n, int grid_points, const std::string& f_text, double z,
                        double mass, const std::string& base_text,
                        const std::string& output) {
    if (n != 2) {
        throw std::invalid_argument("conformal check supports --n 2 (grid operators)");
    }
    hopfren::Grid grid{n, grid_points};
    std::vector<double> base_values(grid.size(), 0.0);
    if (!base_text.empty()) {
        base_values = hopfren::ScalarExpression(base_text).sample(n, grid_points);
    }
    const hopfren::ConformalMetric base(grid, base_values);
    const std::vector<double> f = hopfren::ScalarExpression(f_text).sample(n, grid_points);
    const hopfren::ExpansionCheckReport report =
        hopfren::conformal_expansion_check(base, f, hopfren::Complex(z, 0.0), mass);

    const double asserted_tolerance = 1e-10;
    const bool pass = !report.f_constant || report.relative_deviation < asserted_tolerance;
    Json result{{"n", n},
                {"grid", grid_points},
                {"z", z},
                {"mass", mass},
                {"f", f_text},
                {"f_constant", report.f_constant},
                {"relative_deviation", report.relative_deviation},
                {"lhs_norm", report.lhs_norm},
                {"rhs_norm", report.rhs_norm},
                {"asserted", report.f_constant},
                {"tolerance", asserted_tolerance},
                {"pass", pass}};
    emit(result, output);
    return pass ? kExitOk : kExitNumerical;
}

// ------------------------------------------------------------------ main ----

int dispatch(int argc, char** argv) {
    CLI::App app{"Hopf-algebraic subtraction toolkit for scalar graphs on compact flat "
                 "geometries"};
    app.require_subcommand(1);
    (void)thread_cap();

    // graphs
    auto* graphs = app.add_subcommand("graphs", "enumerate canonical 1PI graphs");
    int loops = 1;
    int ext = 2;
    int max_loop_bound = 4;
    std::string output;
    graphs->add_option("--loops", loops, "loop order")->required()->check(CLI::NonNegativeNumber);
    graphs->add_option("--ext", ext, "external legs")->required()->check(CLI::PositiveNumber);
    graphs->add_option("--max-loop-bound", max_loop_bound, "enumeration guard")
        ->check(CLI::PositiveNumber);
    graphs->add_option("-o,--output", output, "write JSON here instead of stdout");

    // hopf
    auto* hopf = app.add_subcommand("hopf", "structure maps of one generator");
    std::string hopf_op;
    std::string hopf_graph_file;
    std::string hopf_fixture;
    std::string hopf_output;
    hopf->add_option("operation", hopf_op, "coproduct or antipode")
        ->required()
        ->check(CLI::IsMember({"coproduct", "antipode"}));
    hopf->add_option("--graph", hopf_graph_file, "graph JSON file");
    hopf->add_option("--fixture", hopf_fixture, "built-in graph name")
        ->check(CLI::IsMember(
            {"bubble", "triangle", "nested_two_loop", "single_vertex_tree"}));
    hopf->add_option("-o,--output", hopf_output, "write JSON here instead of stdout");

    // bphz
    auto* bphz = app.add_subcommand("bphz", "regularize and subtract a graph universe");
    BackendFlags bphz_backend;
    add_backend_flags(bphz, bphz_backend);
    std::string bphz_character;
    int bphz_loops = 1;
    std::vector<int> bphz_ext;
    int bphz_bound = 4;
    int bphz_order = hopfren::LaurentSeries::kDefaultOrder;
    double bphz_coupling = 1.0;
    std::string bphz_output;
    bphz->add_option("--character", bphz_character,
                     "character JSON file (skips the eigenmode evaluation)");
    bphz->add_option("--loops", bphz_loops, "universe loop bound")->check(CLI::PositiveNumber);
    bphz->add_option("--ext", bphz_ext, "external leg counts (repeatable)");
    bphz->add_option("--max-loop-bound", bphz_bound, "enumeration guard")
        ->check(CLI::PositiveNumber);
    bphz->add_option("--order", bphz_order, "series truncation order")
        ->check(CLI::Range(0, 16));
    bphz->add_option("--coupling", bphz_coupling, "vertex coupling constant");
    bphz->add_option("-o,--output", bphz_output, "write JSON here instead of stdout");

    // beta
    auto* beta = app.add_subcommand("beta", "flow coefficients and locality audit");
    BackendFlags beta_backend;
    add_backend_flags(beta, beta_backend);
    std::string beta_character;
    std::string beta_literature;
    std::vector<double> beta_synthetic;
    int beta_loops = 1;
    std::vector<int> beta_ext;
    int beta_bound = 4;
    int beta_order = hopfren::LaurentSeries::kDefaultOrder;
    double beta_coupling = 1.0;
    double beta_tolerance = 1e-9;
    std::string beta_output;
    beta->add_option("--character", beta_character, "character JSON file");
    beta->add_option("--literature", beta_literature,
                     "print the documented one-loop table for a theory tag (or 'all')");
    beta->add_option("--synthetic", beta_synthetic,
                     "a,b,c1,d1,e coefficients for the two-loop fixture character")
        ->delimiter(',');
    beta->add_option("--loops", beta_loops, "universe loop bound")->check(CLI::PositiveNumber);
    beta->add_option("--ext", beta_ext, "external leg counts (repeatable)");
    beta->add_option("--max-loop-bound", beta_bound, "enumeration guard")
        ->check(CLI::PositiveNumber);
    beta->add_option("--order", beta_order, "series truncation order")->check(CLI::Range(0, 16));
    beta->add_option("--coupling", beta_coupling, "vertex coupling constant");
    beta->add_option("--tolerance", beta_tolerance, "locality tolerance")
        ->check(CLI::Range(1e-15, 1.0));
    beta->add_option("-o,--output", beta_output, "write JSON here instead of stdout");

    // conformal
    auto* conformal = app.add_subcommand("conformal", "conformal operator checks");
    auto* check = conformal->add_subcommand("check", "rescaling identity deviation report");
    int conf_n = 2;
    int conf_grid = 32;
    std::string conf_f = "0";
    double conf_z = 0.1;
    double conf_mass = 1.0;
    std::string conf_base;
    std::string conf_output;
    check->add_option("--n", conf_n, "dimension (2)")->check(CLI::Range(1, 6));
    check->add_option("--grid", conf_grid, "points per axis")->check(CLI::Range(3, 256));
    check->add_option("--f", conf_f, "conformal factor expression, e.g. 0.1*cos(2*pi*x)")
        ->required();
    check->add_option("--z", conf_z, "complex-power offset (real)");
    check->add_option("--mass", conf_mass, "mass m > 0");
    check->add_option("--base-f", conf_base, "conformal factor of the base metric");
    check->add_option("-o,--output", conf_output, "write JSON here instead of stdout");
    conformal->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (graphs->parsed()) return cmd_graphs(loops, ext, max_loop_bound, output);
    if (hopf->parsed()) return cmd_hopf(hopf_op, hopf_graph_file, hopf_fixture, hopf_output);
    if (bphz->parsed()) {
        return cmd_bphz(bphz_backend, bphz_character, bphz_loops, bphz_ext, bphz_bound,
                        bphz_order, bphz_coupling, bphz_output);
    }
    if (beta->parsed()) {
        return cmd_beta(beta_backend, beta_character, beta_literature, beta_synthetic,
                        beta_loops, beta_ext, beta_bound, beta_order, beta_coupling,
                        beta_tolerance, beta_output);
    }
    if (conformal->parsed() && check->parsed()) {
        return cmd_conformal_check(conf_n, conf_grid, conf_f, conf_z, conf_mass, conf_base,
                                   conf_output);
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const hopfren::resource_limit_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const hopfren::capability_error& e) {
        std::cerr << "not supported: " << e.what() << "\n";
        return kExitResource;
    } catch (const hopfren::incomplete_universe_error& e) {
        std::cerr << "universe closure failure: " << e.what() << "\n";
        return kExitResource;
    } catch (const hopfren::locality_error& e) {
        std::cerr << "locality failure (deviation " << e.deviation << "): " << e.what()
                  << "\n";
        return kExitNumerical;
    } catch (const hopfren::pole_error& e) {
        std::cerr << "pole encountered: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const hopfren::unknown_generator_error& e) {
        std::cerr << "unknown generator: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const hopfren::convergence_error& e) {
        std::cerr << "tolerance failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const hopfren::spectrum_error& e) {
        std::cerr << "spectrum failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const hopfren::invariant_violation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
