// Command-line front end: model validation, spectral/ergodic analysis, DSC
// export, simulation and brute-force oracle checks for concurrent systems.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "csergo/report.hpp"

namespace {

using namespace csergo;

Tolerances tolerances_from(double tol_flag) {
    Tolerances tol;
    if (const char* env = std::getenv("CSERGO_TOL")) tol.zero = std::atof(env);
    if (tol_flag > 0) tol.zero = tol_flag;
    return tol;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

int run(int argc, char** argv) {
    CLI::App app{"analysis of probabilistic concurrent systems"};
    app.require_subcommand(1);

    std::string path, csv_path, dot_path, emit_path, state_name, alphabet_path;
    std::string preset_name;
    double tol_flag = 0.0;
    bool as_json = false;
    int steps = 10000, grid = 5, max_len = 8, preset_n = 5;
    std::uint64_t seed = 0;

    auto* validate = app.add_subcommand("validate", "parse and validate a model file");
    validate->add_option("path", path)->required();

    auto* analyze_cmd = app.add_subcommand("analyze", "full spectral and structural analysis");
    analyze_cmd->add_option("path", path)->required();
    analyze_cmd->add_option("--tol", tol_flag, "zero-classification tolerance");
    analyze_cmd->add_flag("--json", as_json, "emit the report as JSON");

    auto* dsc_cmd = app.add_subcommand("dsc", "export the graph of state-and-cliques");
    dsc_cmd->add_option("path", path)->required();
    dsc_cmd->add_option("--dot", dot_path, "output DOT file (default stdout)");

    auto* speedup_cmd = app.add_subcommand("speedup", "analytic speedup per final component");
    speedup_cmd->add_option("path", path)->required();

    auto* simulate = app.add_subcommand("simulate", "sample the chain of state-and-cliques");
    simulate->add_option("path", path)->required();
    simulate->add_option("--state", state_name, "start state (default: first)");
    simulate->add_option("--steps", steps);
    simulate->add_option("--seed", seed);
    simulate->add_option("--csv", csv_path, "output CSV file (default stdout)");

    auto* boltzmann = app.add_subcommand("boltzmann", "cylinder-probability convergence table");
    boltzmann->add_option("path", path)->required();
    boltzmann->add_option("--grid", grid, "number of grid points s = rho(1-10^-k)");

    auto* oracle = app.add_subcommand("oracle", "brute-force series and roundtrip checks");
    oracle->add_option("path", path)->required();
    oracle->add_option("--max-len", max_len);

    auto* preset = app.add_subcommand("preset", "emit a built-in model");
    preset->add_option("name", preset_name, "toy|dimer|cyc6|philosophers|free|doubled")->required();
    preset->add_option("--n", preset_n, "size parameter for philosophers/free");
    preset->add_option("--alphabet", alphabet_path, "alphabet file for the doubled preset");
    preset->add_option("--emit", emit_path, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);
    Tolerances tol = tolerances_from(tol_flag);

    if (validate->parsed()) {
        load_model(path).build();
        std::cout << "ok\n";
        return 0;
    }
    if (analyze_cmd->parsed()) {
        Analysis a = analyze(load_model(path).build(), tol);
        if (as_json)
            std::cout << report_json(a).dump(2) << "\n";
        else
            std::cout << report_text(a);
        return 0;
    }
    if (dsc_cmd->parsed()) {
        Analysis a = analyze(load_model(path).build(), tol, /*with_gaps=*/false);
        write_output(dot_path, to_dot(a.sys, a.dsc, &a.cond));
        return 0;
    }
    if (speedup_cmd->parsed()) {
        Analysis a = analyze(load_model(path).build(), tol, /*with_gaps=*/false);
        std::cout << "s=" << format_double(a.speedup.speedup) << "\n";
        for (std::size_t i = 0; i < a.speedup.final_components.size(); ++i) {
            const auto& comp = a.cond.components[a.speedup.final_components[i]];
            std::cout << "component " << i << " (" << comp.vertices.size()
                      << " vertices): s_J=" << format_double(a.speedup.per_component[i]) << "\n";
        }
        std::cout << "max discrepancy: " << format_double(a.speedup.max_discrepancy) << "\n";
        return 0;
    }
    if (simulate->parsed()) {
        Analysis a = analyze(load_model(path).build(), tol, /*with_gaps=*/false);
        int start = state_name.empty() ? 0 : a.sys.state_index(state_name);
        Trajectory t = sample_trajectory(a.sys, a.dsc, a.kernel, start, steps, seed);
        write_output(csv_path, simulation_csv(a, t));
        return 0;
    }
    if (boltzmann->parsed()) {
        Analysis a = analyze(load_model(path).build(), tol, /*with_gaps=*/false);
        std::vector<std::pair<int, Trace>> samples;
        for (int st = 0; st < a.sys.n_states(); ++st)
            for (const Trace& x : a.sys.enumerate_trajectories(st, 4)) samples.emplace_back(st, x);
        std::cout << "k,s,max_cylinder_error,max_ratio_error\n";
        for (const auto& row : boltzmann_convergence(a.sys, a.spec, samples, grid))
            std::cout << row.k << "," << format_double(row.s) << ","
                      << format_double(row.max_cylinder_error) << ","
                      << format_double(row.max_ratio_error) << "\n";
        return 0;
    }
    if (oracle->parsed()) {
        ConcurrentSystem sys = load_model(path).build();
        TraceCensus words = census(sys, max_len);
        TraceCensus chains = census_by_cliques(sys, max_len);
        bool routes_agree = words.counts == chains.counts && words.weighted == chains.weighted;
        SeriesCheck sc = series_check(words, mobius_matrix(sys), max_len);
        bool roundtrip = mobius_roundtrip_check(sys.alphabet(), 5);
        std::cout << "census_routes: " << (routes_agree ? "PASS" : "FAIL") << "\n";
        std::cout << "series_check: " << (sc.pass ? "PASS" : "FAIL");
        if (!sc.pass)
            std::cout << " (degree " << sc.fail_degree << ", " << sys.state_name(sc.fail_from)
                      << "->" << sys.state_name(sc.fail_to) << ": expected "
                      << to_string(sc.expected) << ", got " << to_string(sc.actual) << ")";
        std::cout << "\nmobius_roundtrip: " << (roundtrip ? "PASS" : "FAIL") << "\n";
        return routes_agree && sc.pass && roundtrip ? 0 : 5;
    }
    if (preset->parsed()) {
        std::optional<Alphabet> alph;
        if (!alphabet_path.empty()) alph = load_alphabet(alphabet_path);
        ModelDocument doc = make_preset(preset_name, preset_n, alph ? &*alph : nullptr);
        write_output(emit_path, doc.to_json().dump(2) + "\n");
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const csergo::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const csergo::ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const csergo::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const csergo::IrreducibilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const csergo::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
}
