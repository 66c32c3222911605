// pbrlab: runs the PBR and overlap checks from the command line or from
// scenario files.
//
//   pbrlab pbr-table
//   pbrlab pbr-feasibility --q 0.3 --grid 8 --dump-lp lp.txt
//   pbrlab closure --rule subset --grid 8
//   pbrlab run scenarios/paper/pbr_feasibility_q03.json --format json
//   pbrlab suite scenarios/paper --out suite.json
//
// Exit codes: 0 consistent, 1 certificate emitted, 2 usage or parse error,
// 3 internal error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pbrlab/scenario.hpp"

namespace {

using pbrlab::Json;

struct Flags {
    std::string out;
    std::string format = "text";
    std::string dump_lp;
    bool timing = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> grid;
    std::optional<std::uint64_t> trials;
    std::optional<double> q;
    std::optional<std::string> rule;
    bool full_born = false;
    std::vector<std::string> set;
};

void add_output_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--out", f.out, "Also write the JSON report to this file");
    sub->add_option("--format", f.format, "Report format on stdout")->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--timing", f.timing, "Include wall-clock milliseconds in the report");
}

void add_parameter_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--seed", f.seed, "RNG seed");
    sub->add_option("--grid", f.grid, "Ontic points per system (L), or quadrature points (G) for fermion");
    sub->add_option("--trials", f.trials, "Monte Carlo trials");
    sub->add_option("--q", f.q, "Overlap of the single-system distributions");
    sub->add_option("--rule", f.rule, "Superposition rule")->check(CLI::IsMember({"mixture", "subset"}));
    sub->add_option("--set", f.set, "Extra parameter as key=value (value read as JSON, else as a string)");
}

Json parameter_overrides(const Flags& f) {
    Json p = Json::object();
    if (f.seed) p["seed"] = *f.seed;
    if (f.grid) p["grid"] = *f.grid;
    if (f.trials) p["trials"] = *f.trials;
    if (f.q) p["q"] = *f.q;
    if (f.rule) p["rule"] = *f.rule;
    if (f.full_born) p["full_born"] = true;
    for (const auto& kv : f.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw pbrlab::ScenarioError("--set expects key=value, got '" + kv + "'");
        const std::string value = kv.substr(eq + 1);
        Json v = Json::parse(value, nullptr, false);
        p[kv.substr(0, eq)] = v.is_discarded() ? Json(value) : v;
    }
    return p;
}

bool has_overrides(const Flags& f) {
    return f.seed || f.grid || f.trials || f.q || f.rule || f.full_born || !f.set.empty();
}

int emit(const Json& json, const std::string& text, const Flags& f) {
    if (!f.out.empty()) {
        std::ofstream out(f.out, std::ios::binary);
        if (!out) {
            std::cerr << "pbrlab: cannot write '" << f.out << "'\n";
            return pbrlab::kExitUsage;
        }
        out << json.dump(2) << "\n";
    }
    if (f.format == "json") {
        std::cout << json.dump(2) << "\n";
    } else {
        std::cout << text;
    }
    return 0;
}

int emit_report(const pbrlab::Report& report, const Flags& f) {
    if (const int rc = emit(pbrlab::report_to_json(report), pbrlab::report_to_text(report), f)) return rc;
    if (!report.error.empty() && f.format == "json") std::cerr << "pbrlab: " << report.error << "\n";
    return report.exit_code;
}

pbrlab::RunOptions run_options(const Flags& f) {
    pbrlab::RunOptions o;
    o.timing = f.timing;
    if (!f.dump_lp.empty()) o.lp_dump = f.dump_lp;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ontological-model checks for the PBR theorem"};
    app.require_subcommand(1);
    app.set_version_flag("--version", pbrlab::version());

    Flags flags;
    std::string file;
    std::string directory;
    std::optional<pbrlab::Command> direct;
    bool run_file = false;
    bool run_dir = false;

    const std::vector<std::pair<pbrlab::Command, const char*>> commands = {
        {pbrlab::Command::kPbrTable, "Born table of the four product states in the entangled basis"},
        {pbrlab::Command::kPbrFeasibility, "LP feasibility of the forbidden-outcome constraints at overlap q"},
        {pbrlab::Command::kClosure, "Superposition closure of the +-z, +-x (+-y) family"},
        {pbrlab::Command::kLeakage, "Probability of an orthogonal outcome caused by overlap q"},
        {pbrlab::Command::kSternGerlach, "Relative phase flip of |+x> without measurement"},
        {pbrlab::Command::kFermion, "Coincidence mass of symmetrized and antisymmetrized pairs"},
        {pbrlab::Command::kOverlapSearch, "Largest overlap compatible with the Born statistics"},
        {pbrlab::Command::kSampleRun, "Monte Carlo sampling of a model against its predictions"},
    };
    for (const auto& [command, description] : commands) {
        auto* sub = app.add_subcommand(pbrlab::command_cli_name(command), description);
        add_output_flags(sub, flags);
        add_parameter_flags(sub, flags);
        if (command == pbrlab::Command::kPbrFeasibility) {
            sub->add_option("--dump-lp", flags.dump_lp, "Write the strict LP in pbrlab-lp text form");
            sub->add_flag("--full-born", flags.full_born, "Also impose the twelve non-forbidden Born probabilities");
        }
        sub->callback([&direct, command] { direct = command; });
    }

    auto* run = app.add_subcommand("run", "Run one scenario file");
    run->add_option("file", file, "Scenario JSON")->required();
    add_output_flags(run, flags);
    add_parameter_flags(run, flags);
    run->add_option("--dump-lp", flags.dump_lp, "PBR_FEASIBILITY only: write the strict LP");
    run->callback([&run_file] { run_file = true; });

    auto* suite = app.add_subcommand("suite", "Run every scenario file in a directory");
    suite->add_option("directory", directory, "Directory of scenario JSON files")->required();
    add_output_flags(suite, flags);
    suite->callback([&run_dir] { run_dir = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return pbrlab::kExitUsage;
    }

    try {
        const auto options = run_options(flags);
        if (run_dir) {
            const auto result = pbrlab::run_suite(directory, options);
            if (const int rc = emit(pbrlab::suite_to_json(result), pbrlab::suite_to_text(result), flags)) return rc;
            return result.exit_code;
        }
        if (run_file) {
            if (has_overrides(flags)) {
                const auto scenario = pbrlab::with_parameters(pbrlab::load_scenario(file), parameter_overrides(flags));
                auto report = pbrlab::run_scenario(scenario, options);
                report.source = std::filesystem::path(file).filename().string();
                return emit_report(report, flags);
            }
            return emit_report(pbrlab::run_scenario_file(file, options), flags);
        }
        const auto scenario =
            pbrlab::make_scenario(pbrlab::command_cli_name(*direct), *direct, parameter_overrides(flags));
        return emit_report(pbrlab::run_scenario(scenario, options), flags);
    } catch (const pbrlab::InvariantViolation& e) {
        std::cerr << "pbrlab: internal error: " << e.what() << "\n";
        return pbrlab::kExitInternal;
    } catch (const pbrlab::Error& e) {
        std::cerr << "pbrlab: " << e.what() << "\n";
        return pbrlab::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "pbrlab: internal error: " << e.what() << "\n";
        return pbrlab::kExitInternal;
    }
}
