#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "qfi/errors.hpp"
#include "qfi/family.hpp"
#include "qfi/grouping.hpp"
#include "qfi/measurement.hpp"
#include "qfi/metrics.hpp"
#include "qfi/protocol.hpp"

namespace qfi {

/// Every problem found while validating a scenario, reported in one go.
class ConfigValidationError : public ArgumentError {
 public:
  explicit ConfigValidationError(std::vector<std::string> failures);
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

struct FamilySpec {
  enum class Kind { Bell, Ghz, Unitary, Diagonal, Random };
  Kind kind = Kind::Bell;
  int n_qubits = 3;                        // ghz
  Eigen::Index dim = 2;                    // random / diagonal
  Eigen::Index rank = 1;                   // random
  std::optional<ComplexMatrix> state;      // unitary
  std::optional<ComplexMatrix> generator;  // unitary
  RealVector weights, amplitudes, phases;  // diagonal
};

struct MeasurementSpec {
  enum class Kind { SldOptimal, Computational, BellBasis, Explicit };
  Kind kind = Kind::SldOptimal;
  std::vector<ComplexMatrix> projectors;  // explicit
  std::optional<double> at_x;             // sld-optimal reference, default sweep midpoint
};

struct AuxiliarySpec {
  Eigen::Index dim = 2;
  std::optional<RealVector> weights;  // diagonal mixed state; absent means pure |0>
};

struct ProtocolSpec {
  enum class Kind { OrthogonalAuto, Explicit };
  Kind kind = Kind::OrthogonalAuto;
  std::vector<ComplexMatrix> unitaries;  // explicit
};

struct SweepSpec {
  double x_start = 0.0;
  double x_end = 1.0;
  int n_points = 1;
};

struct GroupingSpec {
  bool enabled = false;
  std::optional<double> residual_tol;
  std::optional<double> at_x;  // default sweep midpoint
};

struct ScenarioConfig {
  FamilySpec family;
  DerivativeStrategy derivative = DerivativeStrategy::analytic();
  MeasurementSpec measurement;
  AuxiliarySpec auxiliary;
  ProtocolSpec protocol;
  SweepSpec sweep;
  GroupingSpec grouping;
  std::uint64_t seed = 0;
  Tolerances tol;
  nlohmann::json echo;  // the raw scenario document, replayed into reports
};

/// Parses and validates a scenario document. All structural and consistency
/// failures are collected into one ConfigValidationError.
ScenarioConfig parse_scenario(const nlohmann::json& doc);

/// The concrete objects a scenario describes, cross-validated for dimensional
/// consistency.
struct ScenarioParts {
  ParamStateFamily family;
  ProjectiveMeasurement measurement;
  AuxiliaryState auxiliary;
  ControlledUnitary protocol;
};

ScenarioParts assemble_scenario(const ScenarioConfig& cfg);

struct RunRecord {
  double x = 0.0;
  bool ok = false;
  std::string error;        // failure description when !ok
  ProtocolReport protocol;  // meaningful only when ok
  MetricReport metrics_b;   // metrics of the transferred state, only when ok
};

struct GroupingReport {
  std::size_t original_count = 0;
  std::size_t reduced_count = 0;
  std::vector<std::vector<std::size_t>> groups;
  std::vector<double> residuals;
  double x_ref = 0.0;
  double cfi_full = 0.0;
  double cfi_grouped = 0.0;
  double difference = 0.0;   // closed-form cfi_full - cfi_grouped
  double f_b_original = 0.0; // transferred QFI at x_ref, full measurement
  double f_b_reduced = 0.0;  // same under the merged measurement
};

struct RunReport {
  std::string version;
  int schema_version = 0;
  nlohmann::json config_echo;
  std::vector<RunRecord> records;
  std::optional<GroupingReport> grouping;
  bool any_violation = false;  // chain/ceiling breach or per-point failure
  double wall_time_ms = 0.0;
};

/// Sweeps the scenario grid, auditing the transfer chain at every point.
/// Per-point numeric failures land in their record; the run continues.
/// jobs > 1 fans points out over threads; results are identical to jobs = 1.
RunReport run_scenario(const ScenarioConfig& cfg, int jobs = 1);

/// run_scenario plus the projector-merge analysis at the grouping reference
/// point, including the transferred QFI re-run under the merged measurement.
RunReport run_grouping(const ScenarioConfig& cfg, int jobs = 1);

nlohmann::json report_to_json(const RunReport& report);

/// One line per grid point: x, f_a, f_b, f_sub_b, cfi_a.
std::string report_to_csv(const RunReport& report);

std::vector<double> linspace(double a, double b, int n);

}  // namespace qfi
