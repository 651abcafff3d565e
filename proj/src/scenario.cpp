#include "qfi/scenario.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <thread>

#include "qfi/gram.hpp"
#include "qfi/linalg.hpp"
#include "qfi/log.hpp"
#include "qfi/matrix_io.hpp"
#include "qfi/random_states.hpp"
#include "qfi/sld.hpp"
#include "qfi/version.hpp"

namespace qfi {

namespace {

std::string join_failures(const std::vector<std::string>& failures) {
  std::ostringstream os;
  os << "scenario validation failed (" << failures.size() << " problem"
     << (failures.size() == 1 ? "" : "s") << "):";
  for (const auto& f : failures) os << "\n  - " << f;
  return os.str();
}

struct Collector {
  std::vector<std::string> failures;
  void fail(const std::string& msg) { failures.push_back(msg); }
};

void check_known_keys(const nlohmann::json& obj, const std::string& path,
                      std::initializer_list<const char*> known, Collector& coll) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) { ok = true; break; }
    if (!ok) coll.fail(path + ": unknown key '" + it.key() + "'");
  }
}

std::optional<std::string> get_string(const nlohmann::json& obj, const char* key,
                                      const std::string& path, Collector& coll) {
  if (!obj.contains(key)) return std::nullopt;
  if (!obj[key].is_string()) {
    coll.fail(path + "." + key + ": expected a string");
    return std::nullopt;
  }
  return obj[key].get<std::string>();
}

std::optional<double> get_number(const nlohmann::json& obj, const char* key,
                                 const std::string& path, Collector& coll) {
  if (!obj.contains(key)) return std::nullopt;
  if (!obj[key].is_number()) {
    coll.fail(path + "." + key + ": expected a number");
    return std::nullopt;
  }
  const double v = obj[key].get<double>();
  if (!std::isfinite(v)) {
    coll.fail(path + "." + key + ": must be finite");
    return std::nullopt;
  }
  return v;
}

std::optional<long long> get_integer(const nlohmann::json& obj, const char* key,
                                     const std::string& path, Collector& coll) {
  if (!obj.contains(key)) return std::nullopt;
  if (!obj[key].is_number_integer()) {
    coll.fail(path + "." + key + ": expected an integer");
    return std::nullopt;
  }
  return obj[key].get<long long>();
}

std::optional<RealVector> get_real_vector(const nlohmann::json& obj, const char* key,
                                          const std::string& path, Collector& coll) {
  if (!obj.contains(key)) return std::nullopt;
  if (!obj[key].is_array() || obj[key].empty()) {
    coll.fail(path + "." + key + ": expected a nonempty array of numbers");
    return std::nullopt;
  }
  RealVector v(static_cast<Eigen::Index>(obj[key].size()));
  for (std::size_t i = 0; i < obj[key].size(); ++i) {
    if (!obj[key][i].is_number() || !std::isfinite(obj[key][i].get<double>())) {
      coll.fail(path + "." + key + ": entries must be finite numbers");
      return std::nullopt;
    }
    v(static_cast<Eigen::Index>(i)) = obj[key][i].get<double>();
  }
  return v;
}

std::optional<ComplexMatrix> get_matrix(const nlohmann::json& obj, const char* key,
                                        const std::string& path, Collector& coll) {
  if (!obj.contains(key)) return std::nullopt;
  try {
    return matrix_from_json(obj[key]);
  } catch (const std::exception& e) {
    coll.fail(path + "." + key + ": " + e.what());
    return std::nullopt;
  }
}

// Family dimension when it is statically decidable, -1 otherwise.
Eigen::Index static_family_dim(const FamilySpec& fam) {
  switch (fam.kind) {
    case FamilySpec::Kind::Bell: return 4;
    case FamilySpec::Kind::Ghz:
      return fam.n_qubits >= 1 && fam.n_qubits < 13 ? (Eigen::Index{1} << fam.n_qubits) : -1;
    case FamilySpec::Kind::Unitary: return fam.state ? fam.state->rows() : -1;
    case FamilySpec::Kind::Diagonal: return fam.weights.size() > 0 ? fam.weights.size() : -1;
    case FamilySpec::Kind::Random: return fam.dim;
  }
  return -1;
}

FamilySpec parse_family(const nlohmann::json& doc, Collector& coll) {
  FamilySpec fam;
  if (!doc.contains("family") || !doc["family"].is_object()) {
    coll.fail("family: required object is missing");
    return fam;
  }
  const auto& j = doc["family"];
  check_known_keys(j, "family",
                   {"kind", "n_qubits", "dim", "rank", "state", "generator", "weights",
                    "amplitudes", "phases", "derivative"},
                   coll);

  const auto kind = get_string(j, "kind", "family", coll);
  if (!kind) {
    coll.fail("family.kind: required");
    return fam;
  }
  if (*kind == "bell") {
    fam.kind = FamilySpec::Kind::Bell;
  } else if (*kind == "ghz") {
    fam.kind = FamilySpec::Kind::Ghz;
    const auto n = get_integer(j, "n_qubits", "family", coll);
    if (!n) {
      coll.fail("family.n_qubits: required for ghz");
    } else if (*n < 2 || *n > 12) {
      coll.fail("family.n_qubits: must lie in [2, 12]");
    } else {
      fam.n_qubits = static_cast<int>(*n);
    }
  } else if (*kind == "unitary") {
    fam.kind = FamilySpec::Kind::Unitary;
    fam.state = get_matrix(j, "state", "family", coll);
    fam.generator = get_matrix(j, "generator", "family", coll);
    if (!j.contains("state")) coll.fail("family.state: required for unitary");
    if (!j.contains("generator")) coll.fail("family.generator: required for unitary");
    if (fam.state && fam.generator && fam.state->rows() != fam.generator->rows())
      coll.fail("family: state and generator dimensions differ");
  } else if (*kind == "diagonal") {
    fam.kind = FamilySpec::Kind::Diagonal;
    const auto w = get_real_vector(j, "weights", "family", coll);
    const auto a = get_real_vector(j, "amplitudes", "family", coll);
    const auto p = get_real_vector(j, "phases", "family", coll);
    if (!w || !a || !p) {
      if (!j.contains("weights")) coll.fail("family.weights: required for diagonal");
      if (!j.contains("amplitudes")) coll.fail("family.amplitudes: required for diagonal");
      if (!j.contains("phases")) coll.fail("family.phases: required for diagonal");
    } else if (w->size() != a->size() || w->size() != p->size()) {
      coll.fail("family: weights, amplitudes, phases must share one size");
    } else {
      fam.weights = *w;
      fam.amplitudes = *a;
      fam.phases = *p;
      for (Eigen::Index i = 0; i < fam.weights.size(); ++i) {
        if (!(fam.weights(i) > 0.0)) coll.fail("family.weights: entries must be positive");
        if (!(std::abs(fam.amplitudes(i)) < 1.0))
          coll.fail("family.amplitudes: entries must satisfy |a| < 1");
      }
    }
  } else if (*kind == "random") {
    fam.kind = FamilySpec::Kind::Random;
    const auto dim = get_integer(j, "dim", "family", coll);
    const auto rank = get_integer(j, "rank", "family", coll);
    if (!dim || *dim < 2 || *dim > kMaxDenseDim) {
      coll.fail("family.dim: required integer in [2, " + std::to_string(kMaxDenseDim) + "]");
    } else {
      fam.dim = static_cast<Eigen::Index>(*dim);
    }
    fam.rank = rank ? static_cast<Eigen::Index>(*rank) : fam.dim;
    if (fam.rank < 1 || fam.rank > fam.dim) coll.fail("family.rank: must lie in [1, dim]");
  } else {
    coll.fail("family.kind: unknown kind '" + *kind + "'");
  }
  return fam;
}

DerivativeStrategy parse_derivative(const nlohmann::json& doc, Collector& coll) {
  DerivativeStrategy strat = DerivativeStrategy::analytic();
  if (!doc.contains("family") || !doc["family"].is_object() ||
      !doc["family"].contains("derivative"))
    return strat;
  const auto& j = doc["family"]["derivative"];
  if (!j.is_object()) {
    coll.fail("family.derivative: expected an object");
    return strat;
  }
  check_known_keys(j, "family.derivative", {"kind", "step"}, coll);
  const auto kind = get_string(j, "kind", "family.derivative", coll);
  const auto step = get_number(j, "step", "family.derivative", coll);
  if (!kind) {
    coll.fail("family.derivative.kind: required");
    return strat;
  }
  if (*kind == "analytic") {
    strat = DerivativeStrategy::analytic();
  } else if (*kind == "central-difference") {
    strat = step ? DerivativeStrategy::central_difference(*step)
                 : DerivativeStrategy::central_difference();
    if (step && !(*step > 0.0)) coll.fail("family.derivative.step: must be positive");
  } else if (*kind == "parameter-shift") {
    strat = step ? DerivativeStrategy::parameter_shift(*step)
                 : DerivativeStrategy::parameter_shift();
    if (step && !(*step > 0.0 && *step <= std::numbers::pi / 2))
      coll.fail("family.derivative.step: must lie in (0, pi/2]");
  } else {
    coll.fail("family.derivative.kind: unknown kind '" + *kind + "'");
  }
  return strat;
}

MeasurementSpec parse_measurement(const nlohmann::json& doc, Eigen::Index fam_dim,
                                  Collector& coll) {
  MeasurementSpec meas;
  if (!doc.contains("measurement") || !doc["measurement"].is_object()) {
    coll.fail("measurement: required object is missing");
    return meas;
  }
  const auto& j = doc["measurement"];
  check_known_keys(j, "measurement", {"kind", "projectors", "at_x"}, coll);
  const auto kind = get_string(j, "kind", "measurement", coll);
  if (!kind) {
    coll.fail("measurement.kind: required");
    return meas;
  }
  if (*kind == "sld-optimal") {
    meas.kind = MeasurementSpec::Kind::SldOptimal;
    meas.at_x = get_number(j, "at_x", "measurement", coll);
  } else if (*kind == "computational") {
    meas.kind = MeasurementSpec::Kind::Computational;
  } else if (*kind == "bell-basis") {
    meas.kind = MeasurementSpec::Kind::BellBasis;
    if (fam_dim > 0 && fam_dim != 4)
      coll.fail("measurement: bell-basis needs a dimension-4 family");
  } else if (*kind == "explicit") {
    meas.kind = MeasurementSpec::Kind::Explicit;
    if (!j.contains("projectors") || !j["projectors"].is_array() || j["projectors"].empty()) {
      coll.fail("measurement.projectors: required nonempty array for explicit");
    } else {
      for (std::size_t i = 0; i < j["projectors"].size(); ++i) {
        try {
          meas.projectors.push_back(matrix_from_json(j["projectors"][i]));
        } catch (const std::exception& e) {
          coll.fail("measurement.projectors[" + std::to_string(i) + "]: " + e.what());
        }
      }
      if (!meas.projectors.empty() && fam_dim > 0 && meas.projectors.front().rows() != fam_dim)
        coll.fail("measurement: projector dimension does not match the family");
    }
  } else {
    coll.fail("measurement.kind: unknown kind '" + *kind + "'");
  }
  return meas;
}

AuxiliarySpec parse_auxiliary(const nlohmann::json& doc, Collector& coll) {
  AuxiliarySpec aux;
  if (!doc.contains("auxiliary") || !doc["auxiliary"].is_object()) {
    coll.fail("auxiliary: required object is missing");
    return aux;
  }
  const auto& j = doc["auxiliary"];
  check_known_keys(j, "auxiliary", {"dim", "weights"}, coll);
  const auto dim = get_integer(j, "dim", "auxiliary", coll);
  if (!dim || *dim < 2 || *dim > kMaxDenseDim) {
    coll.fail("auxiliary.dim: required integer in [2, " + std::to_string(kMaxDenseDim) + "]");
  } else {
    aux.dim = static_cast<Eigen::Index>(*dim);
  }
  if (j.contains("weights")) {
    const auto w = get_real_vector(j, "weights", "auxiliary", coll);
    if (w) {
      aux.weights = *w;
      if (w->size() != aux.dim) coll.fail("auxiliary.weights: size must equal auxiliary.dim");
      if (w->minCoeff() < 0.0) coll.fail("auxiliary.weights: entries must be >= 0");
      if (std::abs(w->sum() - 1.0) > 1e-10) coll.fail("auxiliary.weights: must sum to 1");
    }
  }
  return aux;
}

ProtocolSpec parse_protocol(const nlohmann::json& doc, Eigen::Index aux_dim,
                            Eigen::Index meas_count, Collector& coll) {
  ProtocolSpec proto;
  if (!doc.contains("protocol") || !doc["protocol"].is_object()) {
    coll.fail("protocol: required object is missing");
    return proto;
  }
  const auto& j = doc["protocol"];
  check_known_keys(j, "protocol", {"kind", "unitaries"}, coll);
  const auto kind = get_string(j, "kind", "protocol", coll);
  if (!kind) {
    coll.fail("protocol.kind: required");
    return proto;
  }
  if (*kind == "orthogonal-auto") {
    proto.kind = ProtocolSpec::Kind::OrthogonalAuto;
    if (meas_count > 0 && aux_dim > 0 && meas_count > aux_dim)
      coll.fail("protocol: auxiliary dimension " + std::to_string(aux_dim) +
                " cannot host " + std::to_string(meas_count) + " orthogonal shift images");
  } else if (*kind == "explicit") {
    proto.kind = ProtocolSpec::Kind::Explicit;
    if (!j.contains("unitaries") || !j["unitaries"].is_array() || j["unitaries"].empty()) {
      coll.fail("protocol.unitaries: required nonempty array for explicit");
    } else {
      for (std::size_t i = 0; i < j["unitaries"].size(); ++i) {
        try {
          proto.unitaries.push_back(matrix_from_json(j["unitaries"][i]));
        } catch (const std::exception& e) {
          coll.fail("protocol.unitaries[" + std::to_string(i) + "]: " + e.what());
        }
      }
      for (const auto& u : proto.unitaries)
        if (aux_dim > 0 && u.rows() != aux_dim) {
          coll.fail("protocol: unitary dimension does not match auxiliary.dim");
          break;
        }
      if (meas_count > 0 && !proto.unitaries.empty() &&
          static_cast<Eigen::Index>(proto.unitaries.size()) != meas_count)
        coll.fail("protocol: need exactly one unitary per measurement outcome (" +
                  std::to_string(meas_count) + ")");
    }
  } else {
    coll.fail("protocol.kind: unknown kind '" + *kind + "'");
  }
  return proto;
}

SweepSpec parse_sweep(const nlohmann::json& doc, Collector& coll) {
  SweepSpec sweep;
  if (!doc.contains("sweep") || !doc["sweep"].is_object()) {
    coll.fail("sweep: required object is missing");
    return sweep;
  }
  const auto& j = doc["sweep"];
  check_known_keys(j, "sweep", {"x_start", "x_end", "n_points"}, coll);
  const auto x0 = get_number(j, "x_start", "sweep", coll);
  const auto x1 = get_number(j, "x_end", "sweep", coll);
  const auto n = get_integer(j, "n_points", "sweep", coll);
  if (!x0) coll.fail("sweep.x_start: required number");
  if (!x1) coll.fail("sweep.x_end: required number");
  if (!n || *n < 1) {
    coll.fail("sweep.n_points: required integer >= 1");
  } else {
    sweep.n_points = static_cast<int>(*n);
  }
  if (x0) sweep.x_start = *x0;
  if (x1) sweep.x_end = *x1;
  if (x0 && x1 && sweep.n_points > 1 && !(*x1 > *x0))
    coll.fail("sweep: x_end must exceed x_start when n_points > 1");
  return sweep;
}

GroupingSpec parse_grouping(const nlohmann::json& doc, Collector& coll) {
  GroupingSpec grouping;
  if (!doc.contains("grouping")) return grouping;
  const auto& j = doc["grouping"];
  if (!j.is_object()) {
    coll.fail("grouping: expected an object");
    return grouping;
  }
  check_known_keys(j, "grouping", {"enabled", "residual_tol", "at_x"}, coll);
  if (j.contains("enabled")) {
    if (!j["enabled"].is_boolean())
      coll.fail("grouping.enabled: expected a boolean");
    else
      grouping.enabled = j["enabled"].get<bool>();
  }
  grouping.residual_tol = get_number(j, "residual_tol", "grouping", coll);
  if (grouping.residual_tol && !(*grouping.residual_tol >= 0.0))
    coll.fail("grouping.residual_tol: must be >= 0");
  grouping.at_x = get_number(j, "at_x", "grouping", coll);
  return grouping;
}

Tolerances parse_tolerances(const nlohmann::json& doc, Collector& coll) {
  Tolerances tol;
  if (!doc.contains("tolerances")) return tol;
  const auto& j = doc["tolerances"];
  if (!j.is_object()) {
    coll.fail("tolerances: expected an object");
    return tol;
  }
  const std::initializer_list<std::pair<const char*, double Tolerances::*>> fields = {
      {"herm", &Tolerances::herm},     {"trace", &Tolerances::trace},
      {"psd", &Tolerances::psd},       {"norm", &Tolerances::norm},
      {"eig", &Tolerances::eig},       {"metric", &Tolerances::metric},
      {"prob", &Tolerances::prob},     {"pure", &Tolerances::pure},
      {"kernel", &Tolerances::kernel}, {"sld", &Tolerances::sld},
      {"degen", &Tolerances::degen},   {"gram", &Tolerances::gram},
      {"proj", &Tolerances::proj},     {"proto", &Tolerances::proto},
      {"chain", &Tolerances::chain},   {"cross", &Tolerances::cross}};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const auto& [name, member] : fields) {
      if (it.key() != name) continue;
      known = true;
      if (!it.value().is_number() || !(it.value().get<double>() > 0.0)) {
        coll.fail("tolerances." + it.key() + ": must be a positive number");
      } else {
        tol.*member = it.value().get<double>();
      }
      break;
    }
    if (!known) coll.fail("tolerances: unknown key '" + it.key() + "'");
  }
  return tol;
}

}  // namespace

ConfigValidationError::ConfigValidationError(std::vector<std::string> failures)
    : ArgumentError(join_failures(failures)), failures_(std::move(failures)) {}

ScenarioConfig parse_scenario(const nlohmann::json& doc) {
  Collector coll;
  if (!doc.is_object()) {
    coll.fail("scenario: top level must be an object");
    throw ConfigValidationError(std::move(coll.failures));
  }
  check_known_keys(doc, "scenario",
                   {"family", "measurement", "auxiliary", "protocol", "sweep", "grouping",
                    "seed", "tolerances"},
                   coll);

  ScenarioConfig cfg;
  cfg.echo = doc;
  cfg.family = parse_family(doc, coll);
  cfg.derivative = parse_derivative(doc, coll);
  const Eigen::Index fam_dim = static_family_dim(cfg.family);
  cfg.measurement = parse_measurement(doc, fam_dim, coll);
  cfg.auxiliary = parse_auxiliary(doc, coll);

  Eigen::Index meas_count = -1;
  switch (cfg.measurement.kind) {
    case MeasurementSpec::Kind::Computational: meas_count = fam_dim; break;
    case MeasurementSpec::Kind::BellBasis: meas_count = 4; break;
    case MeasurementSpec::Kind::Explicit:
      meas_count = static_cast<Eigen::Index>(cfg.measurement.projectors.size());
      break;
    case MeasurementSpec::Kind::SldOptimal: meas_count = -1; break;
  }
  cfg.protocol = parse_protocol(doc, cfg.auxiliary.dim, meas_count, coll);
  cfg.sweep = parse_sweep(doc, coll);
  cfg.grouping = parse_grouping(doc, coll);
  cfg.tol = parse_tolerances(doc, coll);

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned())
      coll.fail("seed: expected a non-negative integer");
    else
      cfg.seed = doc["seed"].get<std::uint64_t>();
  }

  if (!coll.failures.empty()) throw ConfigValidationError(std::move(coll.failures));
  return cfg;
}

namespace {

PureState ghz_state(int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  ComplexVector v = ComplexVector::Zero(dim);
  v(0) = 1.0 / std::numbers::sqrt2;
  v(dim - 1) = 1.0 / std::numbers::sqrt2;
  return PureState(std::move(v));
}

ParamStateFamily build_family(const ScenarioConfig& cfg) {
  const Tolerances& tol = cfg.tol;
  switch (cfg.family.kind) {
    case FamilySpec::Kind::Bell:
      return unitary_family(DensityOperator::from_pure(ghz_state(2), tol),
                            collective_spin(2, Axis::Z, tol), tol);
    case FamilySpec::Kind::Ghz:
      return unitary_family(DensityOperator::from_pure(ghz_state(cfg.family.n_qubits), tol),
                            collective_spin(cfg.family.n_qubits, Axis::Z, tol), tol);
    case FamilySpec::Kind::Unitary:
      return unitary_family(DensityOperator(*cfg.family.state, tol),
                            make_generator(*cfg.family.generator, "config", tol), tol);
    case FamilySpec::Kind::Diagonal:
      return diagonal_family(
          cfg.family.weights.size(),
          sinusoid_curve(cfg.family.weights, cfg.family.amplitudes, cfg.family.phases),
          "diagonal", tol);
    case FamilySpec::Kind::Random: {
      std::mt19937_64 rng(cfg.seed);
      DensityOperator rho0 = random_density(cfg.family.dim, cfg.family.rank, rng, tol);
      HermitianGenerator gen =
          make_generator(random_hermitian(cfg.family.dim, rng), "random", tol);
      return unitary_family(rho0, gen, tol);
    }
  }
  throw StateError("unreachable family kind");
}

std::vector<ComplexMatrix> bell_basis_projectors() {
  ComplexVector plus = ComplexVector::Zero(4), minus = ComplexVector::Zero(4);
  plus(0) = plus(3) = 1.0 / std::numbers::sqrt2;
  minus(0) = 1.0 / std::numbers::sqrt2;
  minus(3) = -1.0 / std::numbers::sqrt2;
  ComplexMatrix p01 = ComplexMatrix::Zero(4, 4), p10 = ComplexMatrix::Zero(4, 4);
  p01(1, 1) = 1.0;
  p10(2, 2) = 1.0;
  return {plus * plus.adjoint(), minus * minus.adjoint(), p01, p10};
}

ComplexMatrix cyclic_shift(Eigen::Index dim) {
  ComplexMatrix c = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) c((k + 1) % dim, k) = 1.0;
  return c;
}

std::vector<ComplexMatrix> shift_powers(Eigen::Index dim, std::size_t count) {
  const ComplexMatrix c = cyclic_shift(dim);
  std::vector<ComplexMatrix> ops;
  ops.reserve(count);
  ComplexMatrix acc = ComplexMatrix::Identity(dim, dim);
  for (std::size_t i = 0; i < count; ++i) {
    ops.push_back(acc);
    acc = c * acc;
  }
  return ops;
}

double sweep_midpoint(const SweepSpec& sweep) {
  return 0.5 * (sweep.x_start + sweep.x_end);
}

ProjectiveMeasurement build_measurement(const ScenarioConfig& cfg,
                                        const ParamStateFamily& family) {
  const Tolerances& tol = cfg.tol;
  switch (cfg.measurement.kind) {
    case MeasurementSpec::Kind::Computational:
      return ProjectiveMeasurement::computational(family.dim(), tol);
    case MeasurementSpec::Kind::BellBasis: {
      if (family.dim() != 4)
        throw ConfigError("measurement: bell-basis needs a dimension-4 family");
      return ProjectiveMeasurement(bell_basis_projectors(), tol);
    }
    case MeasurementSpec::Kind::Explicit:
      return ProjectiveMeasurement(cfg.measurement.projectors, tol);
    case MeasurementSpec::Kind::SldOptimal: {
      const double x_ref = cfg.measurement.at_x.value_or(sweep_midpoint(cfg.sweep));
      return optimal_measurement(family.state_at(x_ref), family.derivative_at(x_ref), tol);
    }
  }
  throw StateError("unreachable measurement kind");
}

AuxiliaryState build_auxiliary(const ScenarioConfig& cfg) {
  const Tolerances& tol = cfg.tol;
  if (cfg.auxiliary.weights)
    return AuxiliaryState::from_density(
        DensityOperator::from_populations(*cfg.auxiliary.weights, tol));
  return AuxiliaryState::from_density(
      DensityOperator::from_pure(PureState::basis(cfg.auxiliary.dim, 0, tol), tol));
}

ControlledUnitary build_protocol(const ScenarioConfig& cfg, const ProjectiveMeasurement& meas,
                                 const AuxiliaryState& aux) {
  const Tolerances& tol = cfg.tol;
  std::vector<ComplexMatrix> ops;
  if (cfg.protocol.kind == ProtocolSpec::Kind::Explicit) {
    ops = cfg.protocol.unitaries;
  } else {
    if (static_cast<Eigen::Index>(meas.count()) > aux.dim())
      throw ConfigError("protocol: auxiliary dimension " + std::to_string(aux.dim()) +
                        " cannot host " + std::to_string(meas.count()) +
                        " orthogonal shift images");
    ops = shift_powers(aux.dim(), meas.count());
  }
  ControlledUnitary cu = build_controlled_unitary(meas, std::move(ops), tol);
  if (!cu.propagating())
    log::warn("protocol: all auxiliary unitaries coincide; nothing reaches the auxiliary");
  return cu;
}

}  // namespace

ScenarioParts assemble_scenario(const ScenarioConfig& cfg) {
  ParamStateFamily family = build_family(cfg).with_strategy(cfg.derivative);
  ProjectiveMeasurement meas = build_measurement(cfg, family);
  AuxiliaryState aux = build_auxiliary(cfg);
  ControlledUnitary cu = build_protocol(cfg, meas, aux);
  return ScenarioParts{std::move(family), std::move(meas), std::move(aux), std::move(cu)};
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw ArgumentError("linspace: need at least one point");
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    xs.push_back(a);
    return xs;
  }
  for (int i = 0; i < n; ++i)
    xs.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return xs;
}

namespace {

RunRecord run_point(const ScenarioParts& parts, double x, const Tolerances& tol) {
  RunRecord rec;
  rec.x = x;
  try {
    rec.protocol = audit_chain(parts.family, parts.auxiliary, parts.protocol, x, tol);
    const ParamStateFamily fam_b =
        transferred_family(parts.family, parts.auxiliary, parts.protocol, tol);
    rec.metrics_b = evaluate_metrics(fam_b, x, tol);
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

bool record_violates(const RunRecord& rec) {
  return !rec.ok || !rec.protocol.chain_ok || !rec.protocol.ceiling_ok;
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& cfg, int jobs) {
  if (jobs < 1) throw ArgumentError("run_scenario: jobs must be >= 1");
  const auto started = std::chrono::steady_clock::now();

  const ScenarioParts parts = assemble_scenario(cfg);
  const std::vector<double> xs = linspace(cfg.sweep.x_start, cfg.sweep.x_end,
                                          cfg.sweep.n_points);

  RunReport report;
  report.version = kVersion;
  report.schema_version = kReportSchemaVersion;
  report.config_echo = cfg.echo;
  report.records.resize(xs.size());

  const int workers = std::min<int>(jobs, static_cast<int>(xs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      report.records[i] = run_point(parts, xs[i], cfg.tol);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < xs.size(); i = next.fetch_add(1))
          report.records[i] = run_point(parts, xs[i], cfg.tol);
      });
    }
    for (auto& t : pool) t.join();
  }

  for (const auto& rec : report.records)
    if (record_violates(rec)) report.any_violation = true;

  report.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - started)
                            .count();
  return report;
}

RunReport run_grouping(const ScenarioConfig& cfg, int jobs) {
  RunReport report = run_scenario(cfg, jobs);
  const auto started = std::chrono::steady_clock::now();

  const ScenarioParts parts = assemble_scenario(cfg);
  const double x_ref = cfg.grouping.at_x.value_or(sweep_midpoint(cfg.sweep));

  GroupingPlan plan = reduce_projectors(parts.measurement, parts.family, x_ref,
                                        cfg.grouping.residual_tol, cfg.tol);
  const ProjectiveMeasurement merged = merged_measurement(parts.measurement, plan, cfg.tol);

  // Re-run the transfer under the merged measurement: explicit protocols keep
  // each group's first unitary, automatic ones get fresh shift powers.
  std::vector<ComplexMatrix> merged_ops;
  if (cfg.protocol.kind == ProtocolSpec::Kind::Explicit) {
    for (const auto& group : plan.groups)
      merged_ops.push_back(parts.protocol.aux_unitaries()[group.front()]);
  } else {
    merged_ops = shift_powers(parts.auxiliary.dim(), plan.groups.size());
  }
  const ControlledUnitary merged_cu =
      build_controlled_unitary(merged, std::move(merged_ops), cfg.tol);

  GroupingReport grouping;
  grouping.original_count = parts.measurement.count();
  grouping.reduced_count = plan.groups.size();
  grouping.groups = plan.groups;
  grouping.residuals = plan.residuals;
  grouping.x_ref = x_ref;
  grouping.cfi_full = plan.cfi_before;
  grouping.cfi_grouped = plan.cfi_after;

  const RealVector probs = parts.measurement.probabilities(parts.family.state_at(x_ref));
  const RealVector dprobs = parts.measurement.expectations(parts.family.derivative_at(x_ref));
  grouping.difference = cfi_group_difference(probs, dprobs, plan.groups, cfg.tol);

  grouping.f_b_original = qfi_spectral(
      transferred_family(parts.family, parts.auxiliary, parts.protocol, cfg.tol), x_ref,
      cfg.tol);
  grouping.f_b_reduced = qfi_spectral(
      transferred_family(parts.family, parts.auxiliary, merged_cu, cfg.tol), x_ref, cfg.tol);

  // The closed-form difference must reproduce the direct one; disagreement
  // means the grouping arithmetic went wrong somewhere.
  if (std::abs(grouping.difference - (grouping.cfi_full - grouping.cfi_grouped)) >
      cfg.tol.metric)
    report.any_violation = true;

  report.grouping = std::move(grouping);
  report.wall_time_ms += std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - started)
                             .count();
  return report;
}

namespace {

nlohmann::json vector_to_json(const RealVector& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  return nlohmann::json(out);
}

}  // namespace

nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : report.records) {
    nlohmann::json r{
        {"x", rec.x},
        {"ok", rec.ok},
        {"error", rec.error},
        {"f_a", rec.protocol.f_a},
        {"f_b", rec.protocol.f_b},
        {"f_sub_b", rec.protocol.f_sub_b},
        {"cfi_a", rec.protocol.cfi_a},
        {"f_composite", rec.protocol.f_composite},
        {"additivity_gap", rec.protocol.additivity_gap},
        {"chain_ok", rec.protocol.chain_ok},
        {"ceiling_ok", rec.protocol.ceiling_ok},
        {"probs", vector_to_json(rec.protocol.probs)},
        {"dprobs", vector_to_json(rec.protocol.dprobs)},
        {"metrics",
         {{"qfi", rec.metrics_b.qfi},
          {"sub_qfi", rec.metrics_b.sub_qfi},
          {"purity", rec.metrics_b.purity},
          {"method_tags", rec.metrics_b.method_tags}}},
    };
    records.push_back(std::move(r));
  }

  nlohmann::json out{
      {"schema_version", report.schema_version},
      {"version", report.version},
      {"config", report.config_echo},
      {"any_violation", report.any_violation},
      {"wall_time_ms", report.wall_time_ms},
      {"records", std::move(records)},
      {"grouping", nullptr},
  };
  if (report.grouping) {
    const GroupingReport& g = *report.grouping;
    out["grouping"] = nlohmann::json{
        {"original_count", g.original_count},
        {"reduced_count", g.reduced_count},
        {"groups", g.groups},
        {"residuals", g.residuals},
        {"x_ref", g.x_ref},
        {"cfi_full", g.cfi_full},
        {"cfi_grouped", g.cfi_grouped},
        {"difference", g.difference},
        {"f_b_original", g.f_b_original},
        {"f_b_reduced", g.f_b_reduced},
    };
  }
  return out;
}

std::string report_to_csv(const RunReport& report) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "x,f_a,f_b,f_sub_b,cfi_a\n";
  for (const auto& rec : report.records) {
    if (rec.ok) {
      os << rec.x << ',' << rec.protocol.f_a << ',' << rec.protocol.f_b << ','
         << rec.protocol.f_sub_b << ',' << rec.protocol.cfi_a << '\n';
    } else {
      os << rec.x << ",nan,nan,nan,nan\n";
    }
  }
  return os.str();
}

}  // namespace qfi
