#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tlw/io.hpp"

namespace tlw {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct GridSpec {
    int n = 1;
    int L = 2;
    int J = 6;
    int k_min = 0;
    int k_max = 3;
};

/// exp2: t_k = 2^{ks}; power: t_k = 2^{ks} |x|^alpha; grid: weights file.
struct WeightSpec {
    std::string kind = "exp2";
    double s = 0.0;
    double alpha = 0.0;
    std::string file;
    WeightMeta meta;
};

struct Tolerances {
    double identity = 1e-12;
    double refinement = 0.10;
    double growth = 0.05;
    double hoelder = 1e-10;
    double extremal = 1e-9;
    double roundtrip = 1e-9;
    double filter_support = 1e-14;
    double filter_identity = 1e-12;
};

struct ExperimentConfig {
    GridSpec grid;
    WeightSpec weight;
    std::vector<std::string> suites;  ///< sorted, without duplicates
    int trials = 20;
    std::uint64_t seed = 1;
    Tolerances tolerances;
    std::filesystem::path base_dir;  ///< relative weight files resolve here
    Json source;                     ///< the parsed document, for hashing
};

const std::vector<std::string>& suite_names();

/// ConfigError with the offending field path.
ExperimentConfig parse_config(const Json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Weights of the configured family on the configured grid, or at finest
/// level J when given. PositivityError for a nonpositive weight file.
WeightSequence make_weights(const ExperimentConfig& cfg, std::optional<int> J = std::nullopt);

enum class Status { Pass, Fail, Measured, Skip };
/// Hard checks are exact identities or inequalities; soft checks compare
/// measured constants against regression bands.
enum class Severity { Hard, Soft };

std::string to_string(Status s);
std::string to_string(Severity s);

struct CheckResult {
    std::string name;
    Status status = Status::Measured;
    Severity severity = Severity::Hard;
    std::optional<double> value;
    std::optional<double> tolerance;
    std::vector<int> levels;  ///< finest levels J the value was computed at
    Json witness = Json::object();
    std::string reason;
};

struct SuiteResult {
    std::string name;
    std::vector<CheckResult> checks;
};

struct Report {
    std::string version = kToolkitVersion;
    std::string config_hash;
    std::uint64_t seed = 0;
    Json grid = Json::object();
    Json weight = Json::object();
    std::vector<SuiteResult> suites;
};

std::uint64_t fnv1a(std::string_view bytes);
/// FNV-1a of the compact JSON dump of the parsed config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

SuiteResult run_suite(const std::string& name, const ExperimentConfig& cfg);
/// Runs the selected suites on up to `threads` workers; results sorted by name.
Report run(const ExperimentConfig& cfg, int threads);

/// Worker cap from TLW_THREADS, default the hardware concurrency.
int thread_budget();

bool has_hard_failure(const Report& r);
bool has_soft_failure(const Report& r);
/// 1 on a hard failure, or on a soft failure with strict; else 0.
int exit_status(const Report& r, bool strict);

Json to_json(const Report& r);
Report report_from_json(const Json& j);
/// One row per check; header only for an empty report.
std::string to_csv(const Report& r);

}  // namespace tlw
