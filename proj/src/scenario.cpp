#include "pbrlab/scenario.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <utility>

#include "pbrlab/ontology.hpp"
#include "pbrlab/overlap_search.hpp"
#include "pbrlab/paradox.hpp"
#include "pbrlab/pbr.hpp"

#ifndef PBRLAB_VERSION
#define PBRLAB_VERSION "0.0.0"
#endif

namespace pbrlab {

namespace {

constexpr std::array<Command, 8> kCommands = {
    Command::kPbrTable,     Command::kPbrFeasibility, Command::kClosure,       Command::kLeakage,
    Command::kSternGerlach, Command::kFermion,        Command::kOverlapSearch, Command::kSampleRun,
};

// ---------------------------------------------------------------------------
// Parameter schema

enum class Kind { kNumber, kUnsigned, kBool, kString, kState };

struct Param {
    const char* key;
    Kind kind;
    /// null: required.
    Json fallback;
};

std::vector<Param> schema(Command command) {
    switch (command) {
        case Command::kPbrTable: return {};
        case Command::kPbrFeasibility:
            return {{"q", Kind::kNumber, nullptr}, {"grid", Kind::kUnsigned, 8}, {"full_born", Kind::kBool, false}};
        case Command::kClosure:
            return {{"rule", Kind::kString, "mixture"}, {"grid", Kind::kUnsigned, 8}, {"with_y", Kind::kBool, true}};
        case Command::kLeakage:
            return {{"q", Kind::kNumber, nullptr},
                    {"psi1", Kind::kState, "0"},
                    {"psi2", Kind::kState, "+"},
                    {"psi1_perp", Kind::kState, "1"}};
        case Command::kSternGerlach: return {{"phase", Kind::kNumber, std::numbers::pi}};
        case Command::kFermion:
            return {{"grid", Kind::kUnsigned, 64},     {"lo", Kind::kNumber, -4.0},   {"hi", Kind::kNumber, 4.0},
                    {"separation", Kind::kNumber, 1.0}, {"sigma", Kind::kNumber, 0.5}};
        case Command::kOverlapSearch:
            return {{"mode", Kind::kString, "pbr"},    {"constraints", Kind::kString, "entangled"},
                    {"psi1", Kind::kState, "0"},       {"psi2", Kind::kState, "+"},
                    {"bases", Kind::kString, "Z,X"},   {"grid", Kind::kUnsigned, 8},
                    {"restarts", Kind::kUnsigned, 4},  {"seed", Kind::kUnsigned, 1}};
        case Command::kSampleRun:
            return {{"model", Kind::kString, "mub"},     {"model_file", Kind::kString, ""},
                    {"prep", Kind::kString, "+x"},       {"meas", Kind::kString, "Z"},
                    {"trials", Kind::kUnsigned, 100000}, {"seed", Kind::kUnsigned, 1},
                    {"q", Kind::kNumber, 0.3},           {"grid", Kind::kUnsigned, 8},
                    {"response", Kind::kString, "uniform"}};
    }
    return {};
}

const std::map<std::string, QuantumState>& state_presets() {
    static const auto presets = [] {
        std::map<std::string, QuantumState> m;
        for (const auto& s : mub_family()) m.emplace(s.label(), s);
        m.emplace("0", states::zero().with_label("0"));
        m.emplace("1", states::one().with_label("1"));
        m.emplace("+", states::plus().with_label("+"));
        m.emplace("-", states::minus().with_label("-"));
        return m;
    }();
    return presets;
}

QuantumState state_param(const Json& j) {
    if (j.is_string()) {
        const auto& presets = state_presets();
        const auto it = presets.find(j.get<std::string>());
        if (it == presets.end()) throw ScenarioError("unknown state preset '" + j.get<std::string>() + "'");
        return it->second;
    }
    return state_from_json(j);
}

Json check_value(const Param& p, const Json& v) {
    const std::string key = p.key;
    switch (p.kind) {
        case Kind::kNumber:
            if (!v.is_number() || !std::isfinite(v.get<double>())) {
                throw ScenarioError("parameter '" + key + "' must be a finite number");
            }
            return v.get<double>();
        case Kind::kUnsigned:
            if (v.is_number_unsigned()) return v;
            if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
            if (v.is_number_float()) {
                const double x = v.get<double>();
                if (x >= 0.0 && x <= 9007199254740992.0 && std::floor(x) == x) return static_cast<std::uint64_t>(x);
            }
            throw ScenarioError("parameter '" + key + "' must be a non-negative integer");
        case Kind::kBool:
            if (!v.is_boolean()) throw ScenarioError("parameter '" + key + "' must be true or false");
            return v;
        case Kind::kString:
            if (!v.is_string()) throw ScenarioError("parameter '" + key + "' must be a string");
            return v;
        case Kind::kState:
            if (!v.is_string() && !v.is_object()) {
                throw ScenarioError("parameter '" + key + "' must be a state preset or {label, amplitudes}");
            }
            try {
                (void)state_param(v);
            } catch (const ScenarioError&) {
                throw;
            } catch (const Error& e) {
                throw ScenarioError("parameter '" + key + "': " + e.what());
            }
            return v;
    }
    return v;
}

void require_unit_interval(const Json& params, const char* key) {
    const double q = params[key].get<double>();
    if (q < 0.0 || q > 1.0) throw ScenarioError(std::string("parameter '") + key + "' must lie in [0, 1]");
}

void require_one_of(const Json& params, const char* key, std::initializer_list<const char*> allowed) {
    const auto v = params[key].get<std::string>();
    std::string list;
    for (const char* a : allowed) {
        if (v == a) return;
        list += list.empty() ? a : std::string(", ") + a;
    }
    throw ScenarioError(std::string("parameter '") + key + "' must be one of: " + list);
}

void check_command_constraints(Command command, const Json& params) {
    switch (command) {
        case Command::kPbrFeasibility:
        case Command::kLeakage: require_unit_interval(params, "q"); break;
        case Command::kClosure: require_one_of(params, "rule", {"mixture", "subset"}); break;
        case Command::kOverlapSearch:
            require_one_of(params, "mode", {"pbr", "pair"});
            require_one_of(params, "constraints", {"entangled", "none", "z"});
            if (params["restarts"].get<std::uint64_t>() < 1) throw ScenarioError("parameter 'restarts' must be >= 1");
            break;
        case Command::kSampleRun:
            require_one_of(params, "model", {"mub", "pbr", "pbr_overlap", "file"});
            require_one_of(params, "response", {"uniform", "lp"});
            require_unit_interval(params, "q");
            if (params["trials"].get<std::uint64_t>() < 1) throw ScenarioError("parameter 'trials' must be >= 1");
            if (params["model"] == "file" && params["model_file"].get<std::string>().empty()) {
                throw ScenarioError("model 'file' needs parameter 'model_file'");
            }
            break;
        default: break;
    }
}

std::string canonical_key(const std::string& key) {
    if (key == "L" || key == "G") return "grid";
    return key;
}

// ---------------------------------------------------------------------------
// Formatting

std::string num(double x, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    return buf;
}

std::string amplitude_text(const Complex& z) {
    return "(" + num(z.real(), 6) + (z.imag() < 0 ? " - " : " + ") + num(std::abs(z.imag()), 6) + "i)";
}

std::string state_text(const QuantumState& s) {
    std::string out = s.label().empty() ? "[" : s.label() + " = [";
    for (std::size_t i = 0; i < s.dim(); ++i) out += (i ? ", " : "") + amplitude_text(s[i]);
    return out + "]";
}

std::string pad(std::string s, std::size_t width) {
    s.append(s.size() < width ? width - s.size() : 1, ' ');
    return s;
}

Json vector_json(std::span<const double> v) {
    Json out = Json::array();
    for (double x : v) out.push_back(x);
    return out;
}

std::vector<Basis> parse_bases(const std::string& list) {
    std::vector<Basis> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
        if (item.empty()) continue;
        if (item == "Z" || item == "z") out.push_back(z_basis());
        else if (item == "X" || item == "x") out.push_back(x_basis());
        else if (item == "Y" || item == "y") out.push_back(y_basis());
        else throw ScenarioError("unknown basis '" + item + "' (expected Z, X or Y)");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Commands

constexpr const char* kNonlocalNote =
    "A measurement on one member of an entangled pair fixing the distribution of the other is not modelled; "
    "only independently prepared product states enter.";

void run_pbr_table(const Scenario&, Report& r) {
    const auto scenario = pbr_scenario();
    const auto table = forbidden_table(scenario);
    Json rows = Json::array();
    for (const auto& row : table) rows.push_back(vector_json(row));
    Json outcomes = Json::array();
    for (const auto& v : scenario.entangled_basis.vectors()) outcomes.push_back(v.label());
    Json forbidden = Json::array();
    for (const auto& [i, k] : scenario.forbidden) {
        forbidden.push_back(Json{{"preparation", kPbrPreparations[i]},
                                 {"outcome", scenario.entangled_basis[k].label()},
                                 {"probability", table[i][k]}});
    }
    Json preps = Json::array();
    for (const auto& s : scenario.product_states) preps.push_back(state_to_json(s));
    r.result = Json{{"preparations", std::move(preps)},
                    {"basis", basis_to_json(scenario.entangled_basis)},
                    {"outcomes", std::move(outcomes)},
                    {"table", std::move(rows)},
                    {"forbidden", std::move(forbidden)}};
    r.notes.push_back(kNonlocalNote);

    std::string header = pad("prep", 6);
    for (const auto& v : scenario.entangled_basis.vectors()) header += pad(v.label(), 12);
    r.lines.push_back(header);
    for (std::size_t i = 0; i < 4; ++i) {
        std::string line = pad(kPbrPreparations[i], 6);
        for (std::size_t k = 0; k < 4; ++k) line += pad(num(table[i][k]) + (k == scenario.forbidden[i].second ? "*" : ""), 12);
        r.lines.push_back(line);
    }
    r.lines.push_back("* forbidden outcome");
}

void run_pbr_feasibility(const Scenario& s, Report& r, const RunOptions& options) {
    const double q = s.parameters["q"].get<double>();
    const auto grid = s.parameters["grid"].get<std::size_t>();
    const auto res = pbr_feasibility(q, grid, {.full_born = s.parameters["full_born"].get<bool>()});
    if (options.lp_dump) {
        std::ofstream out(*options.lp_dump);
        if (!out) throw ScenarioError("cannot write LP dump to '" + options.lp_dump->string() + "'");
        write_lp_text(res.lp, out);
    }
    Json forbidden = Json::object();
    for (std::size_t i = 0; i < 4; ++i) forbidden[kPbrPreparations[i]] = res.forbidden_probability[i];
    r.result = Json{{"q", res.q},
                    {"grid", res.grid},
                    {"block_size", res.block_size},
                    {"full_born", res.full_born},
                    {"product_space_size", res.product_space->size()},
                    {"lp", lp_summary_to_json(res.lp)},
                    {"status", to_string(res.solution.status)},
                    {"feasible", res.feasible()},
                    {"min_violation", res.min_violation},
                    {"forbidden_probability_at_least_violation", std::move(forbidden)}};
    if (res.response) r.result["response"] = response_to_json(*res.response);
    r.certificate = res.certificate;
    if (!res.full_born) {
        r.notes.push_back(
            "Only the four forbidden-outcome constraints are imposed; Born reproduction of the other twelve "
            "outcomes is not required.");
    }
    r.notes.push_back(kNonlocalNote);

    r.lines.push_back("q = " + num(q) + ", L = " + std::to_string(grid) + ", shared block = " +
                      std::to_string(res.block_size) + " points");
    r.lines.push_back("LP: " + std::to_string(res.lp.num_vars()) + " variables, " +
                      std::to_string(res.lp.constraints.size()) + " rows, status " + to_string(res.solution.status));
    r.lines.push_back("least total violation = " + num(res.min_violation, 12));
    for (std::size_t i = 0; i < 4; ++i) {
        r.lines.push_back("  P(forbidden | " + std::string(kPbrPreparations[i]) +
                          ") = " + num(res.forbidden_probability[i], 12));
    }
}

void run_closure(const Scenario& s, Report& r) {
    const auto rule = support_rule_from_string(s.parameters["rule"].get<std::string>());
    const auto grid = s.parameters["grid"].get<std::size_t>();
    const auto family = ClosureFamily::mub(s.parameters["with_y"].get<bool>());
    const auto res = superposition_closure_check(family, rule, grid);
    Json states = Json::array();
    for (const auto& st : family.all_states()) states.push_back(st.label());
    r.result = Json{{"rule", to_string(res.rule)}, {"grid", res.grid}, {"states", std::move(states)}};
    r.certificate = res.certificate;
    if (rule == SupportRule::kMixture) {
        Json dists = Json::object();
        for (const auto& [label, mu] : res.distributions) dists[label] = weights_to_json(mu);
        Json pairs = Json::array();
        for (const auto& p : res.orthogonal_pairs) {
            pairs.push_back(Json{{"first", p.first}, {"second", p.second}, {"overlap", p.overlap}, {"shared", p.shared}});
            r.lines.push_back("overlap(" + p.first + ", " + p.second + ") = " + num(p.overlap, 12) +
                              " (orthogonal: 0 required)");
        }
        r.result["distributions"] = std::move(dists);
        r.result["orthogonal_pairs"] = std::move(pairs);
    } else {
        Json supports = Json::object();
        for (const auto& [label, sup] : res.supports) {
            supports[label] = sup;
            std::string line = "supp(" + label + ") = {";
            for (std::size_t i = 0; i < sup.size(); ++i) line += (i ? ", " : "") + sup[i];
            r.lines.push_back(line + "}");
        }
        r.result["supports"] = std::move(supports);
        r.result["min_points"] = res.min_points ? Json(*res.min_points) : Json(nullptr);
        r.result["patterns"] = res.patterns;
        if (res.min_points) {
            r.lines.push_back("fewest ontic points needed: " + std::to_string(*res.min_points) + " of " +
                              std::to_string(grid));
        }
    }
}

void run_leakage(const Scenario& s, Report& r) {
    const double q = s.parameters["q"].get<double>();
    const auto psi1 = state_param(s.parameters["psi1"]);
    const auto psi2 = state_param(s.parameters["psi2"]);
    const auto perp = state_param(s.parameters["psi1_perp"]);
    const auto res = leakage_probability(q, psi1, psi2, perp);
    r.result = Json{{"q", q},
                    {"psi1", state_to_json(psi1)},
                    {"psi2", state_to_json(psi2)},
                    {"psi1_perp", state_to_json(perp)},
                    {"amplitude", complex_to_json(res.amplitude)},
                    {"probability", res.probability},
                    {"quantum_value", res.quantum_value}};
    r.certificate = res.certificate;
    r.lines.push_back("<psi1_perp|psi2> = " + amplitude_text(res.amplitude));
    r.lines.push_back("P(report psi1_perp | prepared psi1) = " + num(res.probability, 12) + " (quantum: " +
                      num(res.quantum_value) + ")");
}

void run_stern_gerlach(const Scenario& s, Report& r) {
    const auto res = stern_gerlach_check(s.parameters["phase"].get<double>());
    r.result = Json{{"phase", res.phase},
                    {"input", state_to_json(res.input)},
                    {"output", state_to_json(res.output)},
                    {"overlap_with_minus_x", res.overlap_with_minus_x},
                    {"output_is_minus_x", res.output_is_minus_x},
                    {"support_overlap", res.support_overlap},
                    {"born", born_report_to_json(res.born)}};
    r.certificate = res.certificate;
    r.lines.push_back("input  " + state_text(res.input));
    r.lines.push_back("output " + state_text(res.output));
    r.lines.push_back("|<-x|U|+x>| = " + num(res.overlap_with_minus_x, 15));
    r.lines.push_back("overlap of input and output distributions = " + num(res.support_overlap, 12));
}

void run_fermion(const Scenario& s, Report& r) {
    const FermionOptions opts{.grid = s.parameters["grid"].get<std::size_t>(),
                              .lo = s.parameters["lo"].get<double>(),
                              .hi = s.parameters["hi"].get<double>(),
                              .separation = s.parameters["separation"].get<double>(),
                              .sigma = s.parameters["sigma"].get<double>()};
    const auto res = fermion_distribution_check(opts);
    r.result = Json{{"grid", opts.grid},
                    {"lo", opts.lo},
                    {"hi", opts.hi},
                    {"separation", opts.separation},
                    {"sigma", opts.sigma},
                    {"symmetric_norm2", res.symmetric.norm2()},
                    {"antisymmetric_norm2", res.antisymmetric.norm2()},
                    {"symmetric_diagonal_mass", res.symmetric_diagonal_mass},
                    {"antisymmetric_max_diagonal", res.antisymmetric_max_diagonal},
                    {"exchange_exact", res.exchange_exact}};
    r.certificate = res.certificate;
    r.lines.push_back("G = " + std::to_string(opts.grid) + " on [" + num(opts.lo) + ", " + num(opts.hi) + "]");
    r.lines.push_back("symmetric diagonal mass     = " + num(res.symmetric_diagonal_mass, 12));
    r.lines.push_back("antisymmetric max |diagonal| = " + num(res.antisymmetric_max_diagonal, 12));
    r.lines.push_back(std::string("exchange (anti)symmetry exact: ") + (res.exchange_exact ? "yes" : "no"));
}

void run_overlap_search(const Scenario& s, Report& r) {
    const auto& p = s.parameters;
    const auto grid = p["grid"].get<std::size_t>();
    const auto restarts = p["restarts"].get<std::size_t>();
    const auto seed = p["seed"].get<std::uint64_t>();
    OverlapSearchResult res;
    Json extra = Json::object();
    if (p["mode"] == "pbr") {
        const auto set = pbr_constraint_set_from_string(p["constraints"].get<std::string>());
        res = pbr_overlap_bound(grid, set, restarts, seed);
        extra["constraints"] = to_string(set);
    } else {
        const auto psi1 = state_param(p["psi1"]);
        const auto psi2 = state_param(p["psi2"]);
        const auto bases = parse_bases(p["bases"].get<std::string>());
        res = max_overlap_alternating(psi1, psi2, bases, grid, restarts, seed);
        Json names = Json::array();
        for (const auto& b : bases) names.push_back(b.label());
        extra["bases"] = std::move(names);
        extra["upper_bound"] = overlap_upper_bound(psi1, psi2, bases);
    }
    r.result = Json{{"mode", p["mode"]}};
    for (auto& [k, v] : extra.items()) r.result[k] = v;
    r.result["best_q"] = res.best_q;
    r.result["feasible"] = res.feasible;
    r.result["lower_bound"] = res.lower_bound;
    r.result["iterations"] = res.iterations;
    r.result["converged"] = res.converged;
    r.result["restarts"] = res.restarts;
    r.result["first"] = Json{{"label", res.first_label},
                             {"weights", res.first ? weights_to_json(*res.first) : Json(nullptr)}};
    r.result["second"] = Json{{"label", res.second_label},
                              {"weights", res.second ? weights_to_json(*res.second) : Json(nullptr)}};
    r.result["born"] = res.born ? born_report_to_json(*res.born) : Json(nullptr);
    if (res.lower_bound) {
        r.notes.push_back(
            "best_q is attained by the returned model; the alternating search does not certify a global maximum.");
    }
    r.lines.push_back("overlap(" + res.first_label + ", " + res.second_label + ") = " + num(res.best_q, 12));
    if (extra.contains("upper_bound")) r.lines.push_back("min-sum upper bound = " + num(extra["upper_bound"], 12));
    r.lines.push_back(std::to_string(res.iterations) + " iterations over " + std::to_string(res.restarts) +
                      " restarts, converged: " + (res.converged ? "yes" : "no"));
    if (res.born) r.lines.push_back("Born max deviation = " + num(res.born->max_deviation, 3));
}

Json comparison_json(const SampleComparison& c) {
    Json counts = Json::array();
    for (auto n : c.sample.counts) counts.push_back(n);
    return Json{{"counts", std::move(counts)},
                {"frequencies", vector_json(c.sample.frequencies)},
                {"predicted", vector_json(c.predicted)},
                {"sigma", vector_json(c.sigma)},
                {"deviation_sigmas", vector_json(c.deviation_sigmas)},
                {"within_envelope", c.within_envelope}};
}

void comparison_lines(const std::string& prep, const SampleComparison& c, Report& r) {
    for (std::size_t k = 0; k < c.predicted.size(); ++k) {
        r.lines.push_back(pad(prep, 6) + "outcome " + std::to_string(k) + ": " + pad(num(c.sample.frequencies[k]), 12) +
                          "predicted " + pad(num(c.predicted[k]), 12) + num(c.deviation_sigmas[k], 3) + " sigma");
    }
}

void run_sample(const Scenario& s, Report& r) {
    const auto& p = s.parameters;
    const auto trials = p["trials"].get<std::uint64_t>();
    const auto seed = p["seed"].get<std::uint64_t>();
    const auto model_kind = p["model"].get<std::string>();
    r.result = Json{{"model", model_kind}, {"trials", trials}, {"seed", seed}, {"nsigma", 4.0}};

    if (model_kind == "pbr" || model_kind == "pbr_overlap") {
        const auto model = model_kind == "pbr"
                               ? make_pbr_psi_complete_model()
                               : make_pbr_overlap_model(p["q"].get<double>(), p["grid"].get<std::size_t>(),
                                                        p["response"] == "lp" ? PbrResponse::kLpOptimal
                                                                              : PbrResponse::kUniformOnBlock);
        const auto protocol = run_pbr_protocol(model, trials, seed);
        Json entries = Json::array();
        bool within = true;
        for (std::size_t i = 0; i < 4; ++i) {
            const auto& e = protocol.entries[i];
            const auto c = compare_sample(model, e.preparation, kPbrMeasurement, trials, seed + i);
            within = within && c.within_envelope;
            Json entry = comparison_json(c);
            entry["preparation"] = e.preparation;
            entry["forbidden_outcome"] = e.forbidden_outcome;
            entry["forbidden_frequency"] = e.frequency;
            entry["forbidden_predicted"] = e.predicted;
            entries.push_back(std::move(entry));
            r.lines.push_back(pad(e.preparation, 6) + "forbidden outcome " + std::to_string(e.forbidden_outcome) +
                              ": frequency " + pad(num(e.frequency), 12) + "predicted " + num(e.predicted));
        }
        if (model_kind == "pbr_overlap") {
            r.result["q"] = p["q"];
            r.result["grid"] = p["grid"];
            r.result["response"] = p["response"];
        }
        r.result["measurement"] = kPbrMeasurement;
        r.result["preparations"] = std::move(entries);
        r.result["max_forbidden_predicted"] = protocol.max_predicted;
        r.result["within_envelope"] = within;
        r.lines.push_back(std::string("all outcomes within 4 sigma: ") + (within ? "yes" : "no"));
        return;
    }

    std::optional<OntologicalModel> model;
    if (model_kind == "mub") {
        const auto f = mub_family();
        const std::vector<Basis> bases{z_basis(), x_basis(), y_basis()};
        model.emplace(make_psi_complete_model(f, bases));
    } else {
        auto path = std::filesystem::path(p["model_file"].get<std::string>());
        if (path.is_relative()) path = s.base_dir / path;
        std::ifstream in(path);
        if (!in) throw ScenarioError("cannot read model file '" + p["model_file"].get<std::string>() + "'");
        Json j;
        try {
            j = Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw ScenarioError("model file: " + std::string(e.what()));
        }
        model.emplace(model_from_json(j));
        r.result["model_file"] = p["model_file"];
    }
    const auto prep = p["prep"].get<std::string>();
    const auto meas = p["meas"].get<std::string>();
    const auto c = compare_sample(*model, prep, meas, trials, seed);
    r.result["preparation"] = prep;
    r.result["measurement"] = meas;
    const Json sampled = comparison_json(c);
    for (const auto& [k, v] : sampled.items()) r.result[k] = v;
    comparison_lines(prep, c, r);
    r.lines.push_back(std::string("all outcomes within 4 sigma: ") + (c.within_envelope ? "yes" : "no"));
}

const char* status_name(int code) {
    switch (code) {
        case kExitConsistent: return "consistent";
        case kExitCertificate: return "certificate";
        case kExitUsage: return "usage_error";
        default: return "internal_error";
    }
}

}  // namespace

const char* version() { return PBRLAB_VERSION; }

const char* to_string(Command command) {
    switch (command) {
        case Command::kPbrTable: return "PBR_TABLE";
        case Command::kPbrFeasibility: return "PBR_FEASIBILITY";
        case Command::kClosure: return "CLOSURE";
        case Command::kLeakage: return "LEAKAGE";
        case Command::kSternGerlach: return "STERN_GERLACH";
        case Command::kFermion: return "FERMION";
        case Command::kOverlapSearch: return "OVERLAP_SEARCH";
        case Command::kSampleRun: return "SAMPLE_RUN";
    }
    return "?";
}

std::string command_cli_name(Command command) {
    std::string s = to_string(command);
    for (auto& c : s) c = c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

Command command_from_string(const std::string& name) {
    for (auto c : kCommands) {
        if (name == to_string(c) || name == command_cli_name(c)) return c;
    }
    throw ScenarioError("unknown command '" + name + "'");
}

Scenario make_scenario(std::string name, Command command, const Json& parameters, std::filesystem::path base_dir) {
    if (name.empty()) throw ScenarioError("scenario name must not be empty");
    if (!parameters.is_null() && !parameters.is_object()) throw ScenarioError("'parameters' must be an object");
    const auto params = schema(command);
    Json given = Json::object();
    if (parameters.is_object()) {
        for (const auto& [key, value] : parameters.items()) {
            const std::string k = canonical_key(key);
            if (given.contains(k)) throw ScenarioError("parameter '" + k + "' given twice");
            given[k] = value;
        }
    }
    Json out = Json::object();
    for (const auto& p : params) {
        if (given.contains(p.key)) {
            out[p.key] = check_value(p, given[p.key]);
            given.erase(p.key);
        } else if (p.fallback.is_null()) {
            throw ScenarioError(std::string(to_string(command)) + " needs parameter '" + p.key + "'");
        } else {
            out[p.key] = p.fallback;
        }
    }
    if (!given.empty()) {
        throw ScenarioError("unknown parameter '" + given.begin().key() + "' for " + to_string(command));
    }
    check_command_constraints(command, out);
    return Scenario{std::move(name), command, std::move(out), std::move(base_dir)};
}

Scenario parse_scenario(const Json& j, std::filesystem::path base_dir) {
    if (!j.is_object()) throw ScenarioError("scenario must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "name" && key != "command" && key != "parameters") {
            throw ScenarioError("unknown scenario field '" + key + "'");
        }
    }
    if (!j.contains("name") || !j["name"].is_string()) throw ScenarioError("scenario needs a string 'name'");
    if (!j.contains("command") || !j["command"].is_string()) throw ScenarioError("scenario needs a string 'command'");
    const Json params = j.contains("parameters") ? j["parameters"] : Json::object();
    return make_scenario(j["name"].get<std::string>(), command_from_string(j["command"].get<std::string>()), params,
                         std::move(base_dir));
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot read scenario '" + path.string() + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(path.filename().string() + ": " + e.what());
    }
    return parse_scenario(j, path.parent_path());
}

Scenario with_parameters(const Scenario& scenario, const Json& overrides) {
    Json merged = scenario.parameters;
    for (const auto& [key, value] : overrides.items()) merged[canonical_key(key)] = value;
    return make_scenario(scenario.name, scenario.command, merged, scenario.base_dir);
}

Json scenario_to_json(const Scenario& scenario) {
    return Json{{"name", scenario.name}, {"command", to_string(scenario.command)}, {"parameters", scenario.parameters}};
}

Report run_scenario(const Scenario& scenario, const RunOptions& options) {
    Report r;
    r.scenario = scenario_to_json(scenario);
    const auto start = std::chrono::steady_clock::now();
    try {
        switch (scenario.command) {
            case Command::kPbrTable: run_pbr_table(scenario, r); break;
            case Command::kPbrFeasibility: run_pbr_feasibility(scenario, r, options); break;
            case Command::kClosure: run_closure(scenario, r); break;
            case Command::kLeakage: run_leakage(scenario, r); break;
            case Command::kSternGerlach: run_stern_gerlach(scenario, r); break;
            case Command::kFermion: run_fermion(scenario, r); break;
            case Command::kOverlapSearch: run_overlap_search(scenario, r); break;
            case Command::kSampleRun: run_sample(scenario, r); break;
        }
        r.exit_code = r.certificate ? kExitCertificate : kExitConsistent;
    } catch (const InvariantViolation& e) {
        r.exit_code = kExitInternal;
        r.error = e.what();
    } catch (const Error& e) {
        r.exit_code = kExitUsage;
        r.error = e.what();
    } catch (const std::exception& e) {
        r.exit_code = kExitInternal;
        r.error = e.what();
    }
    if (r.exit_code >= kExitUsage) {
        r.result = Json::object();
        r.certificate.reset();
        r.lines.clear();
        r.notes.clear();
    }
    if (options.timing) {
        r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return r;
}

Report run_scenario_file(const std::filesystem::path& path, const RunOptions& options) {
    Scenario s;
    try {
        s = load_scenario(path);
    } catch (const Error& e) {
        Report r;
        r.scenario = nullptr;
        r.source = path.filename().string();
        r.exit_code = kExitUsage;
        r.error = e.what();
        return r;
    }
    auto r = run_scenario(s, options);
    r.source = path.filename().string();
    return r;
}

Json report_to_json(const Report& report) {
    Json out{{"tool", "pbrlab"}, {"version", version()}};
    if (!report.source.empty()) out["source"] = report.source;
    out["scenario"] = report.scenario;
    out["status"] = status_name(report.exit_code);
    out["exit_code"] = report.exit_code;
    out["result"] = report.result;
    out["certificate"] = report.certificate ? certificate_to_json(*report.certificate) : Json(nullptr);
    out["notes"] = report.notes;
    if (!report.error.empty()) out["error"] = report.error;
    if (report.elapsed_ms) out["timing_ms"] = *report.elapsed_ms;
    return out;
}

std::string report_to_text(const Report& report) {
    std::ostringstream out;
    if (report.scenario.is_object()) {
        out << report.scenario["name"].get<std::string>() << " [" << report.scenario["command"].get<std::string>()
            << "]\n";
    } else {
        out << report.source << "\n";
    }
    for (auto line : report.lines) {
        line.erase(line.find_last_not_of(' ') + 1);
        out << "  " << line << "\n";
    }
    if (report.certificate) {
        out << "  certificate: " << to_string(report.certificate->kind)
            << " magnitude " << num(report.certificate->magnitude, 12) << "\n";
    }
    for (const auto& note : report.notes) out << "  note: " << note << "\n";
    if (!report.error.empty()) out << "  error: " << report.error << "\n";
    out << "  status: " << status_name(report.exit_code) << " (exit " << report.exit_code << ")";
    if (report.elapsed_ms) out << ", " << num(*report.elapsed_ms, 4) << " ms";
    out << "\n";
    return out.str();
}

SuiteReport run_suite(const std::filesystem::path& directory, const RunOptions& options) {
    if (!std::filesystem::is_directory(directory)) {
        throw ScenarioError("'" + directory.string() + "' is not a directory");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    SuiteReport suite;
    suite.directory = directory.filename().empty() ? directory.parent_path().filename().string()
                                                   : directory.filename().string();
    for (const auto& f : files) {
        RunOptions per = options;
        per.lp_dump.reset();
        suite.reports.push_back(run_scenario_file(f, per));
    }
    const auto key = [](const Report& r) {
        return r.scenario.is_object() ? r.scenario["name"].get<std::string>() : r.source;
    };
    std::stable_sort(suite.reports.begin(), suite.reports.end(),
                     [&](const Report& a, const Report& b) { return key(a) < key(b); });
    for (const auto& r : suite.reports) {
        switch (r.exit_code) {
            case kExitConsistent: ++suite.consistent; break;
            case kExitCertificate: ++suite.certificates; break;
            case kExitUsage: ++suite.usage_errors; break;
            default: ++suite.internal_errors; break;
        }
    }
    suite.exit_code = suite.internal_errors ? kExitInternal : suite.usage_errors ? kExitUsage : kExitConsistent;
    return suite;
}

Json suite_to_json(const SuiteReport& suite) {
    Json reports = Json::array();
    for (const auto& r : suite.reports) reports.push_back(report_to_json(r));
    return Json{{"tool", "pbrlab"},
                {"version", version()},
                {"directory", suite.directory},
                {"scenarios", suite.reports.size()},
                {"consistent", suite.consistent},
                {"certificates", suite.certificates},
                {"usage_errors", suite.usage_errors},
                {"internal_errors", suite.internal_errors},
                {"exit_code", suite.exit_code},
                {"reports", std::move(reports)}};
}

std::string suite_to_text(const SuiteReport& suite) {
    std::ostringstream out;
    out << "suite " << suite.directory << ": " << suite.reports.size() << " scenarios\n";
    for (const auto& r : suite.reports) {
        const std::string name = r.scenario.is_object() ? r.scenario["name"].get<std::string>() : r.source;
        const std::string command = r.scenario.is_object() ? r.scenario["command"].get<std::string>() : "-";
        std::string line = "  " + pad(name, 30) + pad(command, 17) + pad(status_name(r.exit_code), 16);
        if (r.certificate) {
            line += std::string(to_string(r.certificate->kind)) + " " + num(r.certificate->magnitude, 12);
        } else if (!r.error.empty()) {
            line += r.error;
        }
        line.erase(line.find_last_not_of(' ') + 1);
        out << line << "\n";
    }
    out << "consistent " << suite.consistent << ", certificates " << suite.certificates << ", usage errors "
        << suite.usage_errors << ", internal errors " << suite.internal_errors << "\n";
    return out.str();
}

}  // namespace pbrlab
