#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ridge {

/// Exit codes of the command-line front end.
enum ExitCode : int { exit_ok = 0, exit_property_failure = 1, exit_config_error = 2 };

/// Resolved key=value settings for one subcommand.
class RunConfig {
public:
    std::string subcommand;

    const std::string& raw(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    long long get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::vector<long long> get_int_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    const std::map<std::string, std::string>& values() const { return values_; }

    /// "# key=value" lines in key order.
    void write_header(std::ostream& out) const;

private:
    std::map<std::string, std::string> values_;
};

/// Every subcommand understood by dispatch.
const std::vector<std::string>& subcommands();

/// Defaults for a subcommand, then the config file (may be empty for none), then overrides in order.
/// Throws ConfigError naming the key for unknown keys, malformed lines, or unknown subcommands.
RunConfig parse_config(const std::string& subcommand, const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides);

/// Runs a subcommand; CSV goes to `out`. Returns an ExitCode.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full front end: argv without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ridge
