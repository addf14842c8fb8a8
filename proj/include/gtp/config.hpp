#pragma once

// Flat key-value run configuration:
//
//   # comment
//   strategy.kind = past-average
//   strategy.c    = 0.5
//   reality.kind  = constant-bias
//   reality.b     = 0.2
//   run.horizon   = 10000
//
// Keys are dotted; unknown keys are rejected so typos never silently
// fall back to defaults.

#include "gtp/reality.hpp"
#include "gtp/strategies.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtp {

/// A configuration problem, tagged with the offending key (or file).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(std::istream& in, const std::string& source = "<config>");
    static KeyValueConfig load(const std::filesystem::path& path);

    void set(const std::string& key, std::string value);
    bool has(const std::string& key) const;
    std::optional<std::string> raw(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    /// Comma-separated list; present-but-empty yields an empty list.
    std::optional<std::vector<double>> get_double_list(const std::string& key) const;
    std::optional<std::vector<std::uint64_t>> get_uint_list(const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& key) const;

    /// Directory relative paths in the config resolve against.
    const std::filesystem::path& base_dir() const { return base_dir_; }
    void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
    std::filesystem::path base_dir_ = ".";
};

struct RunConfig {
    StrategySpec strategy = PastAverage{};
    RealitySpec reality = FairCoin{};
    std::int64_t horizon = 1000;
    std::uint64_t seed = 1;
    std::int64_t record_every = 1;
    std::string output;
    std::vector<std::string> checks;
};

/// Whitespace-delimited square matrix, one row per line.
Matrix load_matrix(const std::filesystem::path& path);
Matrix parse_matrix(std::istream& in, const std::string& source);

StrategySpec build_strategy(const KeyValueConfig& cfg);
RealitySpec build_reality(const KeyValueConfig& cfg);
/// Builds and validates everything; throws ConfigError before any run starts.
RunConfig build_run_config(const KeyValueConfig& cfg);

}  // namespace gtp
