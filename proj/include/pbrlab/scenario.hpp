#pragma once

// Scenario files and the reports written for them. A scenario is a flat JSON
// object
//
//     {"name": "...", "command": "PBR_FEASIBILITY", "parameters": {"q": 0.3, "grid": 8}}
//
// whose parameters are validated per command and completed with defaults
// before dispatch. Reports are deterministic: the same scenario yields the
// same bytes unless timing is requested.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pbrlab/certificate.hpp"
#include "pbrlab/errors.hpp"
#include "pbrlab/serialization.hpp"

namespace pbrlab {

enum class Command {
    kPbrTable,
    kPbrFeasibility,
    kClosure,
    kLeakage,
    kSternGerlach,
    kFermion,
    kOverlapSearch,
    kSampleRun,
};

/// "PBR_TABLE", "PBR_FEASIBILITY", ...
const char* to_string(Command command);
/// Accepts the upper-case name or the CLI spelling ("pbr-table", ...).
Command command_from_string(const std::string& name);
/// CLI subcommand spelling.
std::string command_cli_name(Command command);

enum ExitCode : int {
    kExitConsistent = 0,
    kExitCertificate = 1,
    kExitUsage = 2,
    kExitInternal = 3,
};

/// Malformed or invalid scenario; maps to kExitUsage.
class ScenarioError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

struct Scenario {
    std::string name;
    Command command = Command::kPbrTable;
    /// Validated, with every default filled in.
    Json parameters = Json::object();
    /// Directory that relative paths in the parameters resolve against.
    std::filesystem::path base_dir;
};

/// Checks parameter names and types for `command` and fills defaults. Keys
/// "L" and "G" are accepted as spellings of "grid". Throws ScenarioError.
Scenario make_scenario(std::string name, Command command, const Json& parameters,
                       std::filesystem::path base_dir = {});
Scenario parse_scenario(const Json& j, std::filesystem::path base_dir = {});
/// Reads a UTF-8 JSON file. Throws ScenarioError.
Scenario load_scenario(const std::filesystem::path& path);

/// Overrides parameters (CLI flags); the result is re-validated.
Scenario with_parameters(const Scenario& scenario, const Json& overrides);

/// {"name", "command", "parameters"}
Json scenario_to_json(const Scenario& scenario);

struct RunOptions {
    bool timing = false;
    /// PBR_FEASIBILITY only: write the strict LP in write_lp_text form.
    std::optional<std::filesystem::path> lp_dump;
};

struct Report {
    /// Echo of the scenario; null when it failed to parse.
    Json scenario;
    std::string source;
    Json result = Json::object();
    std::optional<ContradictionCertificate> certificate;
    std::vector<std::string> notes;
    /// Human-readable table of the result.
    std::vector<std::string> lines;
    std::string error;
    int exit_code = kExitConsistent;
    std::optional<double> elapsed_ms;
};

/// Dispatches to the module operation. Never throws: parameter errors give
/// kExitUsage and InvariantViolation or anything unexpected gives
/// kExitInternal, each with `error` set.
Report run_scenario(const Scenario& scenario, const RunOptions& options = {});
/// Loads then runs; a load failure yields a kExitUsage report.
Report run_scenario_file(const std::filesystem::path& path, const RunOptions& options = {});

Json report_to_json(const Report& report);
std::string report_to_text(const Report& report);

struct SuiteReport {
    std::string directory;
    std::vector<Report> reports;
    std::size_t consistent = 0;
    std::size_t certificates = 0;
    std::size_t usage_errors = 0;
    std::size_t internal_errors = 0;
    /// kExitInternal if any scenario hit it, else kExitUsage if any failed
    /// to parse or validate, else kExitConsistent.
    int exit_code = kExitConsistent;
};

/// Runs every *.json file in `directory`; reports are ordered by scenario
/// name (file name for those that fail to parse). Throws ScenarioError if
/// `directory` is not a directory.
SuiteReport run_suite(const std::filesystem::path& directory, const RunOptions& options = {});

Json suite_to_json(const SuiteReport& suite);
std::string suite_to_text(const SuiteReport& suite);

/// Library version string.
const char* version();

}  // namespace pbrlab
