#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lppn/io.hpp"

namespace lppn {

using Json = nlohmann::ordered_json;

/// Invalid configuration; field() names the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

//---------------------------------------------------------------------------//
/*!
 * Typed, validated access to one experiment's parameter object.
 *
 * Every value read (or defaulted) is recorded in resolved(), so the manifest
 * echoes the effective configuration. finish() rejects unread keys.
 */
//---------------------------------------------------------------------------//
class Params {
public:
    Params(const Json& raw, std::string prefix);

    double real(const std::string& key, double fallback, double lo, double hi);
    //! Open interval (0,1).
    double probability(const std::string& key, double fallback);
    int integer(const std::string& key, int fallback, int lo, int hi);
    std::string text(const std::string& key, const std::string& fallback,
                     const std::vector<std::string>& allowed);
    std::vector<double> reals(const std::string& key, std::vector<double> fallback, double lo,
                              double hi);
    std::vector<int> integers(const std::string& key, std::vector<int> fallback, int lo, int hi);
    bool has(const std::string& key) const;
    const Json& raw(const std::string& key);

    [[noreturn]] void fail(const std::string& key, const std::string& message) const;
    void finish() const;

    const Json& resolved() const { return resolved_; }

private:
    const Json* lookup(const std::string& key);

    Json raw_;
    std::string prefix_;
    Json resolved_ = Json::object();
    std::set<std::string> used_;
};

struct Assertion {
    std::string name;
    bool hard = true;  //!< only hard failures change the exit code
    bool passed = false;
    std::string detail;
};

struct ExperimentOutput {
    std::vector<io::CsvTable> tables;
    std::vector<Assertion> assertions;
    Json summary = Json::object();
};

struct RunContext {
    std::uint64_t seed = 0;
    int threads = 1;
};

using ExperimentRunner = std::function<ExperimentOutput(const RunContext&)>;

struct ExperimentInfo {
    std::string name;
    std::string description;
    //! Reads and validates params, returns the work to do.
    std::function<ExperimentRunner(Params&)> prepare;
};

const std::map<std::string, ExperimentInfo>& experiment_registry();

struct ExperimentSpec {
    std::string name;
    Json params = Json::object();
};

struct RunConfig {
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    std::vector<ExperimentSpec> experiments;
};

//! Top-level fields seed, output_dir, experiments.
RunConfig parse_run_config(const Json& doc);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitAssertion = 2;

inline constexpr const char* kToolVersion = "1.0.0";

//! Validates every experiment, runs them in order, writes CSVs, summaries and manifest.json.
int run_experiments(const RunConfig& cfg, int threads, std::ostream& log);
//! Same, resolving experiment names in the given registry.
int run_experiments(const RunConfig& cfg, int threads, std::ostream& log,
                    const std::map<std::string, ExperimentInfo>& registry);

}  // namespace lppn
