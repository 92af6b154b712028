#pragma once

#include <concepts>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctlab/blocks.hpp"

namespace ctlab {

/// CSV file: UTF-8, header row, LF endings, '.' decimals, RFC 4180 quoting.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& file, const std::vector<std::string>& header);

    CsvWriter& operator<<(const std::string& field);
    CsvWriter& operator<<(const char* field) { return *this << std::string(field); }
    template <std::integral T>
    CsvWriter& operator<<(T value) {
        return *this << std::to_string(value);
    }
    CsvWriter& operator<<(double value);
    void end_row();

    static std::string format(double value);
    static std::string quote(const std::string& field);

private:
    std::ofstream out_;
    std::size_t columns_;
    std::size_t filled_ = 0;
};

struct SuiteConfig {
    std::string name;
    std::size_t samples = 200;
    std::uint64_t seed = 1;
    std::map<std::string, double> thresholds;
    // Suite-specific keys: curve, n, N, from, to.
    std::string curve = "a";
    std::vector<int> ns{1, 2, 4, 8, 16};
    std::vector<int> Ns{1, 2, 3};
    std::string from = "ac";
    std::string to = "CA";
    bool exhaustive = true;  // retract: sweep every trusted edge

    double threshold(const std::string& key, double fallback) const;
};

struct ExperimentConfig {
    BallOptions ball;
    int max_radius = 8;
    std::filesystem::path cache = "cache";
    std::vector<BlockSpec> stack;
    std::vector<SuiteConfig> suites;
    std::filesystem::path output = "out";
    int jobs = 1;

    // Defaults for a suite absent from `suites`.
    SuiteConfig suite(const std::string& name) const;
};

// Suites in dependency order.
const std::vector<std::string>& known_suites();

// Throws ConfigError naming the offending key or value.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& file);
// The config used when no file is given: R=6 margin 2, the retraction stack with n=4, no suites.
ExperimentConfig default_config();

struct SuiteResult {
    std::string id;
    bool pass = false;
    std::vector<std::pair<std::string, double>> constants;
    std::string witness;
    double runtime = 0;  // seconds; reported on the log only
    std::vector<std::string> artifacts;
};

struct RunOutcome {
    int exit_code = 0;  // 0 all pass, 1 suite failure, 2 config error, 3 resource cap
    std::vector<SuiteResult> results;
    std::string error;
};

// Runs the configured suites in dependency order, writing one CSV per suite and
// summary.csv into the output directory. Progress goes to `log` when set.
RunOutcome run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

}  // namespace ctlab
