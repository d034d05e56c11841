#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cornu/config.hpp"
#include "cornu/core.hpp"

namespace cornu::app {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { kExitPass = 0, kExitTolerance = 1, kExitUsage = 2, kExitCostGate = 3 };

struct CommandResult {
  std::string command;
  std::vector<VerificationRecord> records;
  /// Command-specific payload (fit, window data, ...), deterministic.
  nlohmann::json details = nlohmann::json::object();
  /// Sample rows for a CSV sweep; empty when the command has none.
  std::vector<std::vector<double>> sweep;
  std::vector<std::string> sweep_header;
  /// Set when something other than a record failed (ill-conditioning).
  bool flagged = false;

  int exit_code() const noexcept;
};

CommandResult run_verify_basics(const AppConfig& cfg);

enum class IntegralRoute { direct, omega };

/// Throws quad::CostGateError for (n, route) outside {1,2}/direct, {2,3}/omega.
CommandResult run_integrals(const std::vector<int>& orders, IntegralRoute route, bool with_j,
                            const AppConfig& cfg);

struct EvolveRequest {
  std::optional<double> lambda;
  std::optional<double> a;
  std::optional<double> R;
  /// Writes a trajectory CSV here when set.
  std::optional<std::string> trajectory_path;
  bool spinor_columns = false;
};

CommandResult run_evolve(const EvolveRequest& req, const AppConfig& cfg);

CommandResult run_extract(const AppConfig& cfg, bool synthetic, unsigned threads);

enum class Zeta2Choice { raw, parametric, both };

CommandResult run_zeta2(Zeta2Choice method, const AppConfig& cfg);

struct ManifestInfo {
  std::string command_line;
  std::string started_at;
  std::string finished_at;
  unsigned threads = 1;
};

/// Manifest JSON: command, command_line, config, records, version,
/// timestamps and thread count.
nlohmann::json make_manifest(const CommandResult& result, const AppConfig& cfg, const ManifestInfo& info);

nlohmann::json record_json(const VerificationRecord& rec);

/// One header line and one row per record.
std::string records_csv(const std::vector<VerificationRecord>& records);

std::string version_string();

/// UTC time in ISO 8601.
std::string utc_timestamp();

}  // namespace cornu::app
