#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "../support.hpp"
#include "qfi/bloch.hpp"
#include "qfi/generators.hpp"
#include "qfi/gram.hpp"
#include "qfi/grouping.hpp"
#include "qfi/linalg.hpp"
#include "qfi/measurement.hpp"
#include "qfi/metrics.hpp"
#include "qfi/protocol.hpp"
#include "qfi/scenario.hpp"
#include "qfi/states.hpp"

using namespace qfi;

namespace {

// Tracks the first failed bound inside one criterion and the worst slack seen
// across the passing ones, so the printed line carries evidence either way.
class Gate {
 public:
  void check(bool ok, const std::string& what) {
    if (ok) return;
    pass_ = false;
    if (why_.empty()) why_ = what;
  }
  void observe(double deviation) { worst_ = std::max(worst_, deviation); }
  bool pass() const { return pass_; }
  const std::string& why() const { return why_; }
  double worst() const { return worst_; }

 private:
  bool pass_ = true;
  std::string why_;
  double worst_ = 0.0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

ParamStateFamily entangled_pair_family() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::numbers::sqrt2;
  return unitary_family(DensityOperator::from_pure(PureState(v)), collective_spin(2, Axis::Z));
}

ProjectiveMeasurement pair_parity_basis() {
  ComplexVector plus = ComplexVector::Zero(4), minus = ComplexVector::Zero(4);
  plus(0) = plus(3) = 1.0 / std::numbers::sqrt2;
  minus(0) = 1.0 / std::numbers::sqrt2;
  minus(3) = -1.0 / std::numbers::sqrt2;
  ComplexMatrix p01 = ComplexMatrix::Zero(4, 4), p10 = ComplexMatrix::Zero(4, 4);
  p01(1, 1) = 1.0;
  p10(2, 2) = 1.0;
  return ProjectiveMeasurement({PureState(plus).projector(), PureState(minus).projector(),
                                p01, p10});
}

ControlledUnitary entangled_pair_protocol() {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  return build_controlled_unitary(pair_parity_basis(), {id, pauli_x(), id, id});
}

AuxiliaryState pure_aux(Eigen::Index dim, Eigen::Index k = 0) {
  return AuxiliaryState::from_density(DensityOperator::from_pure(PureState::basis(dim, k)));
}

ComplexMatrix cyclic_shift(Eigen::Index d) {
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) s((j + 1) % d, j) = 1.0;
  return s;
}

std::vector<ComplexMatrix> shift_powers(Eigen::Index dim, std::size_t count) {
  const ComplexMatrix c = cyclic_shift(dim);
  std::vector<ComplexMatrix> ops;
  ComplexMatrix acc = ComplexMatrix::Identity(dim, dim);
  for (std::size_t i = 0; i < count; ++i) {
    ops.push_back(acc);
    acc = c * acc;
  }
  return ops;
}

ProjectiveMeasurement random_projective(Eigen::Index dim, Eigen::Index outcomes,
                                        std::mt19937_64& g) {
  const ComplexMatrix u = random_unitary(dim, g);
  std::vector<ComplexMatrix> ps(static_cast<std::size_t>(outcomes),
                                ComplexMatrix::Zero(dim, dim));
  for (Eigen::Index c = 0; c < dim; ++c) {
    const Eigen::Index block = std::min(c, outcomes - 1);
    ps[static_cast<std::size_t>(block)] += u.col(c) * u.col(c).adjoint();
  }
  return ProjectiveMeasurement(std::move(ps));
}

std::vector<std::vector<std::size_t>> random_partition(Eigen::Index n, std::mt19937_64& g) {
  const Eigen::Index buckets = test::uniform_index(g, 1, n);
  std::vector<std::vector<std::size_t>> parts(static_cast<std::size_t>(buckets));
  for (Eigen::Index i = 0; i < n; ++i)
    parts[static_cast<std::size_t>(test::uniform_index(g, 0, buckets - 1))].push_back(
        static_cast<std::size_t>(i));
  std::erase_if(parts, [](const auto& p) { return p.empty(); });
  return parts;
}

std::pair<RealVector, RealVector> merge_stats(
    const RealVector& p, const RealVector& dp,
    const std::vector<std::vector<std::size_t>>& parts) {
  RealVector pm = RealVector::Zero(static_cast<Eigen::Index>(parts.size()));
  RealVector dpm = RealVector::Zero(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t k = 0; k < parts.size(); ++k) {
    for (const std::size_t j : parts[k]) {
      pm(static_cast<Eigen::Index>(k)) += p(static_cast<Eigen::Index>(j));
      dpm(static_cast<Eigen::Index>(k)) += dp(static_cast<Eigen::Index>(j));
    }
  }
  return {pm, dpm};
}

// 1: the entangled-pair example transfers its full information content. The
// auxiliary ends in diag((1 + cos2x)/2, (1 - cos2x)/2) and every figure in
// the audit chain sits at 4 across a 32-point sweep of [0, pi].
bool criterion_pair_example(std::string& note) {
  const auto t0 = std::chrono::steady_clock::now();
  Gate gate;

  const ParamStateFamily fam = entangled_pair_family();
  const AuxiliaryState aux = pure_aux(2);
  const ControlledUnitary cu = entangled_pair_protocol();

  const auto xs = linspace(std::numbers::pi / 64.0, 63.0 * std::numbers::pi / 64.0, 32);
  for (const double x : xs) {
    const ProtocolReport rec = audit_chain(fam, aux, cu, x);
    for (const double v : {rec.f_a, rec.f_b, rec.f_sub_b, rec.cfi_a}) {
      gate.observe(std::abs(v - 4.0));
      gate.check(std::abs(v - 4.0) <= 1e-7, fmt("audit value %.6f != 4 at x=%.3f", v, x));
    }
    gate.check(rec.chain_ok && rec.ceiling_ok, fmt("chain flags down at x=%.3f", x));

    const DensityOperator out = apply_protocol(fam.state_at(x), aux, cu);
    ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
    expected(0, 0) = 0.5 * (1.0 + std::cos(2.0 * x));
    expected(1, 1) = 0.5 * (1.0 - std::cos(2.0 * x));
    const double dev = max_abs(out.matrix() - expected);
    gate.observe(dev);
    gate.check(dev <= 1e-10, fmt("transferred state off by %.2e at x=%.3f", dev, x));
  }

  const double dt = seconds_since(t0);
  gate.check(dt < 1.0, fmt("runtime %.2f s exceeds 1 s", dt));
  note = gate.pass() ? fmt("max deviation %.1e, %.2f s", gate.worst(), dt) : gate.why();
  return gate.pass();
}

// 2: the finite-difference limit of the fidelity bound, Richardson
// extrapolated over a descending step sequence, reproduces the closed form.
bool criterion_limit_form(std::string& note) {
  const auto t0 = std::chrono::steady_clock::now();
  Gate gate;
  const std::vector<double> steps = {1e-2, 5e-3, 2.5e-3};

  std::vector<ParamStateFamily> families;
  families.push_back(entangled_pair_family());
  auto g = test::rng(2026);
  for (int i = 0; i < 10; ++i) families.push_back(test::random_unitary_family(2, 2, g));
  for (int i = 0; i < 10; ++i)
    families.push_back(test::random_unitary_family(3, 2 + (i % 2), g));

  const double x = 0.3;
  for (const auto& fam : families) {
    const double closed = sub_qfi_general(fam, x);
    const double est = sub_qfi_limit(fam, x, steps).extrapolated;
    gate.observe(std::abs(est - closed));
    gate.check(std::abs(est - closed) <= 1e-4,
               fmt("extrapolation off by %.2e (closed %.4f)", std::abs(est - closed), closed));
  }

  const double dt = seconds_since(t0);
  gate.check(dt < 5.0, fmt("runtime %.2f s exceeds 5 s", dt));
  note = gate.pass() ? fmt("21 families, max deviation %.1e, %.2f s", gate.worst(), dt)
                     : gate.why();
  return gate.pass();
}

// 3: the unitary-encoding closed form of the fidelity bound agrees with the
// general state-plus-derivative form.
bool criterion_form_agreement(std::string& note) {
  Gate gate;
  auto g = test::rng(303);
  for (int t = 0; t < 500; ++t) {
    const Eigen::Index d = 2 + (t % 7);
    const Eigen::Index rank = test::uniform_index(g, 1, d);
    const DensityOperator rho0 = random_density(d, rank, g);
    const HermitianGenerator gen = make_generator(random_hermitian(d, g), "acc");
    const ParamStateFamily fam = unitary_family(rho0, gen);
    const double x = t % 2 == 0 ? 0.0 : test::uniform(g, -1.5, 1.5);

    const double a = sub_qfi_unitary(rho0, gen);
    const double b = sub_qfi_general(fam, x);
    gate.observe(std::abs(a - b));
    gate.check(std::abs(a - b) <= 1e-8,
               fmt("forms differ by %.2e at dim %.0f", std::abs(a - b), double(d)));
  }
  note = gate.pass() ? fmt("500 pairs, max deviation %.1e", gate.worst()) : gate.why();
  return gate.pass();
}

// 4: the fidelity bound never exceeds the information itself, and collapses
// to it for every pure family and every single-qubit family.
bool criterion_lower_bound(std::string& note) {
  Gate gate;
  auto g = test::rng(404);
  int equalities = 0;
  for (int t = 0; t < 1000; ++t) {
    const int kind = t % 3;
    const Eigen::Index d = kind == 1 ? 2 : 2 + (t % 5);
    const Eigen::Index rank = kind == 0 ? 1 : test::uniform_index(g, 1, d);
    const ParamStateFamily fam = test::random_unitary_family(d, rank, g);
    const double x = 0.4;

    const double f = qfi_spectral(fam, x);
    const double sub = sub_qfi_general(fam, x);
    gate.check(sub <= f + 1e-7, fmt("bound above information by %.2e", sub - f));
    if (rank == 1 || d == 2) {
      ++equalities;
      gate.observe(std::abs(sub - f));
      gate.check(std::abs(sub - f) <= 1e-8,
                 fmt("equality gap %.2e for %s family", std::abs(sub - f),
                     rank == 1 ? 1.0 : 2.0));
    }
  }
  note = gate.pass() ? fmt("1000 families, %.0f equality cases, max gap %.1e",
                           double(equalities), gate.worst())
                     : gate.why();
  return gate.pass();
}

// 5: superfidelity dominates fidelity, coincides with its square for qubits,
// and both quantities decompose through the eigenvalue pair-product sum.
bool criterion_superfidelity(std::string& note) {
  Gate gate;
  auto g = test::rng(505);

  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index d = 2 + (t % 5);
    const DensityOperator r1 = random_density(d, test::uniform_index(g, 1, d), g);
    const DensityOperator r2 = random_density(d, test::uniform_index(g, 1, d), g);
    const double f = uhlmann_fidelity(r1, r2);
    const double sg = superfidelity(r1, r2);
    gate.check(std::sqrt(sg) >= f - 1e-10,
               fmt("sqrt(g)=%.12f below f=%.12f", std::sqrt(sg), f));

    if (t < 300) {
      const double cross = (r1.matrix() * r2.matrix()).trace().real();
      const double s1 = eig_pair_product_sum(r1.matrix());
      const double s2 = eig_pair_product_sum(r2.matrix());
      const double g_dev = std::abs(sg - (cross + std::sqrt(s1 * s2)));
      gate.observe(g_dev);
      gate.check(g_dev <= 1e-9, fmt("superfidelity decomposition off by %.2e", g_dev));

      const ComplexMatrix sqrt1 = matrix_sqrt_psd(r1.matrix());
      const ComplexMatrix inner =
          matrix_sqrt_psd(ComplexMatrix(sqrt1 * r2.matrix() * sqrt1));
      const double f_dev = std::abs(f * f - (cross + eig_pair_product_sum(inner)));
      gate.observe(f_dev);
      gate.check(f_dev <= 1e-9, fmt("fidelity decomposition off by %.2e", f_dev));
    }
  }

  for (int t = 0; t < 300; ++t) {
    const DensityOperator r1 = random_density(2, 1 + (t % 2), g);
    const DensityOperator r2 = random_density(2, 1 + ((t + 1) % 2), g);
    const double f = uhlmann_fidelity(r1, r2);
    const double sg = superfidelity(r1, r2);
    gate.observe(std::abs(sg - f * f));
    gate.check(std::abs(sg - f * f) <= 1e-10,
               fmt("qubit identity gap %.2e", std::abs(sg - f * f)));
  }

  note = gate.pass() ? fmt("1300 pairs, max deviation %.1e", gate.worst()) : gate.why();
  return gate.pass();
}

// 6: the compressed-solver routes agree with the spectral solver on random
// ensembles, the weight information is a ceiling, and the ceiling is attained
// exactly on orthogonal ensembles.
bool criterion_ensemble_solvers(std::string& note) {
  Gate gate;
  auto g = test::rng(606);

  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = test::uniform_index(g, 2, 5);
    const Eigen::Index d = test::uniform_index(g, n, 8);
    const auto basis = test::random_ensemble(d, n, g);
    const RealVector p = test::random_weights(n, g);
    const RealVector dp = test::random_dweights(n, g);

    GramSystem sys = GramSystem::from_ensemble(basis, p, dp);
    const auto [rho, drho] = test::assemble_ensemble(basis, p, dp);
    const double v1 = gram_qfi(sys);
    const double v2 = decomposed_qfi(p, dp, sys.S(), sys.L());
    const double v3 = qfi_spectral(rho, drho);
    gate.observe(std::abs(v1 - v3));
    gate.observe(std::abs(v2 - v3));
    gate.check(std::abs(v1 - v2) <= 1e-7 && std::abs(v1 - v3) <= 1e-7,
               fmt("solver spread %.2e", std::max(std::abs(v1 - v2), std::abs(v1 - v3))));

    const double cfi = classical_fisher(p, dp);
    gate.check(v3 <= cfi + 1e-10, fmt("information above weight ceiling by %.2e", v3 - cfi));

    double overlap = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i + 1; j < basis.size(); ++j)
        overlap = std::max(overlap,
                           std::abs(basis[i].amplitudes().dot(basis[j].amplitudes())));
    const bool equal = std::abs(cfi - v3) <= 1e-8;
    const bool orthogonal = overlap <= 1e-10;
    gate.check(equal == orthogonal,
               fmt("equality/orthogonality mismatch: gap %.2e, overlap %.2e", cfi - v3,
                   overlap));
  }

  for (int t = 0; t < 30; ++t) {
    const Eigen::Index n = test::uniform_index(g, 2, 5);
    const Eigen::Index d = test::uniform_index(g, n, 8);
    const ComplexMatrix u = random_unitary(d, g);
    std::vector<PureState> basis;
    for (Eigen::Index i = 0; i < n; ++i) basis.emplace_back(ComplexVector(u.col(i)));
    const RealVector p = test::random_weights(n, g);
    const RealVector dp = test::random_dweights(n, g);

    const auto [rho, drho] = test::assemble_ensemble(basis, p, dp);
    const double gap = std::abs(classical_fisher(p, dp) - qfi_spectral(rho, drho));
    gate.observe(gap);
    gate.check(gap <= 1e-8, fmt("orthogonal ensemble misses the ceiling by %.2e", gap));
  }

  note = gate.pass() ? fmt("130 ensembles, max deviation %.1e", gate.worst()) : gate.why();
  return gate.pass();
}

// 7: the closed-form single-qubit maximum dominates a dense grid scan, the
// optimum sits at the antipodal pure configuration, and parallel Bloch
// vectors carry exactly zero information.
bool criterion_qubit_optimum(std::string& note) {
  Gate gate;

  for (const double p1 : {0.3, 0.5, 0.62}) {
    for (const double dp1 : {1.0, -0.7}) {
      const SingleQubitOptimum opt = optimize_single_qubit(p1, dp1, 200, 200);
      const double f_max = dp1 * dp1 / (p1 * (1.0 - p1));
      gate.observe(std::abs(opt.f_max - f_max));
      gate.check(std::abs(opt.f_max - f_max) <= 1e-12 * f_max,
                 fmt("closed-form maximum %.6f != %.6f", opt.f_max, f_max));
      gate.check(opt.grid_max <= opt.f_max + 1e-12,
                 fmt("grid exceeds the closed form by %.2e", opt.grid_max - opt.f_max));
      gate.check(opt.best.chi == -2.0 && opt.best.r == 1.0,
                 fmt("optimum not at the antipodal pure point (chi %.3f)", opt.best.chi));
      gate.check(opt.grid_chi_index == 0 && opt.grid_r_index == 199,
                 fmt("interior argmax drifted to (%g, %g)", double(opt.grid_chi_index),
                     double(opt.grid_r_index)));
    }
  }

  for (const double r : {0.2, 0.5, 0.9}) {
    for (const double p1 : {0.25, 0.5, 0.8}) {
      BlochConfig cfg;
      cfg.r = r;
      cfg.chi = 0.0;
      gate.check(single_qubit_qfi(p1, 1.3, cfg) == 0.0, "parallel vectors not exactly zero");
    }
  }

  note = gate.pass() ? fmt("6 grids of 200x200, max deviation %.1e", gate.worst())
                     : gate.why();
  return gate.pass();
}

// 8: the closed-form information loss of merging outcomes equals the direct
// before-minus-after difference, never goes negative, and lossless merges
// leave both the classical figure and the downstream transfer unchanged.
bool criterion_merge_loss(std::string& note) {
  Gate gate;
  auto g = test::rng(808);

  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index n = test::uniform_index(g, 3, 8);
    const RealVector p = test::random_weights(n, g);
    const RealVector dp = test::random_dweights(n, g);
    const auto parts = random_partition(n, g);

    const double closed = cfi_group_difference(p, dp, parts);
    const auto [pm, dpm] = merge_stats(p, dp, parts);
    const double direct = classical_fisher(p, dp) - classical_fisher(pm, dpm);
    gate.observe(std::abs(closed - direct));
    gate.check(std::abs(closed - direct) <= 1e-9,
               fmt("loss formula off by %.2e", std::abs(closed - direct)));
    gate.check(closed >= -1e-12, fmt("negative loss %.2e", closed));
  }

  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = test::uniform_index(g, 2, 6);
    const RealVector q = test::random_weights(n, g);
    const RealVector dq = test::random_dweights(n, g);
    const double c = test::uniform(g, 0.2, 0.8);
    RealVector p(n + 1), dp(n + 1);
    p(0) = c * q(0);
    p(1) = (1.0 - c) * q(0);
    dp(0) = c * dq(0);
    dp(1) = (1.0 - c) * dq(0);
    for (Eigen::Index i = 1; i < n; ++i) {
      p(i + 1) = q(i);
      dp(i + 1) = dq(i);
    }
    std::vector<std::vector<std::size_t>> parts = {{0, 1}};
    for (Eigen::Index i = 2; i <= n; ++i) parts.push_back({static_cast<std::size_t>(i)});

    const double closed = cfi_group_difference(p, dp, parts);
    const auto [pm, dpm] = merge_stats(p, dp, parts);
    const double direct = classical_fisher(p, dp) - classical_fisher(pm, dpm);
    gate.observe(std::max(std::abs(closed), std::abs(direct)));
    gate.check(std::abs(closed) <= 1e-10 && std::abs(direct) <= 1e-10,
               fmt("lossless split changes the figure by %.2e", std::max(std::abs(closed),
                                                                         std::abs(direct))));
  }

  // Downstream check on the entangled-pair setup: the two dead outcomes fold
  // into a live one without moving the transferred information.
  {
    const ParamStateFamily fam = entangled_pair_family();
    const ProjectiveMeasurement meas = pair_parity_basis();
    const AuxiliaryState aux = pure_aux(2);
    const ControlledUnitary full = entangled_pair_protocol();
    const double x = 0.55;

    const GroupingPlan plan = reduce_projectors(meas, fam, x);
    gate.check(plan.groups == std::vector<std::vector<std::size_t>>{{0, 2, 3}, {1}},
               "unexpected merge structure for the pair example");
    gate.check(std::abs(plan.cfi_before - plan.cfi_after) <= 1e-10,
               fmt("lossless merge moved the classical figure by %.2e",
                   std::abs(plan.cfi_before - plan.cfi_after)));

    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    const ControlledUnitary reduced = build_controlled_unitary(
        merged_measurement(meas, plan), {id, pauli_x()});
    const double fb_full = qfi_spectral(transferred_family(fam, aux, full), x);
    const double fb_red = qfi_spectral(transferred_family(fam, aux, reduced), x);
    gate.observe(std::abs(fb_full - fb_red));
    gate.check(std::abs(fb_full - fb_red) <= 1e-7,
               fmt("transfer moved by %.2e under the merge", std::abs(fb_full - fb_red)));
  }

  // Same check on a full-support diagonal family with a proportional pair.
  {
    RealVector w(4), a(4), ph(4);
    w << 0.2, 0.3, 0.4, 0.1;
    a << 0.5, 0.5, -0.3, 0.0;
    ph << 0.1, 0.1, 1.2, 0.0;
    const ParamStateFamily fam = diagonal_family(4, sinusoid_curve(w, a, ph), "diag");
    const ProjectiveMeasurement meas = ProjectiveMeasurement::computational(4);
    const AuxiliaryState aux = pure_aux(4);
    const double x = 0.7;

    const GroupingPlan plan = reduce_projectors(meas, fam, x);
    gate.check(plan.groups.size() == 3, "proportional pair did not merge");
    gate.check(std::abs(plan.cfi_before - plan.cfi_after) <= 1e-10,
               fmt("lossless merge moved the classical figure by %.2e",
                   std::abs(plan.cfi_before - plan.cfi_after)));

    const ControlledUnitary full = build_controlled_unitary(meas, shift_powers(4, 4));
    const ControlledUnitary reduced = build_controlled_unitary(
        merged_measurement(meas, plan), shift_powers(4, plan.groups.size()));
    const double fb_full = qfi_spectral(transferred_family(fam, aux, full), x);
    const double fb_red = qfi_spectral(transferred_family(fam, aux, reduced), x);
    gate.observe(std::abs(fb_full - fb_red));
    gate.check(std::abs(fb_full - fb_red) <= 1e-7,
               fmt("transfer moved by %.2e under the merge", std::abs(fb_full - fb_red)));
  }

  note = gate.pass() ? fmt("1200 partitions + 2 transfers, max deviation %.1e", gate.worst())
                     : gate.why();
  return gate.pass();
}

// 9: the information chain F_a >= F_b >= F_sub_b and the measurement ceiling
// hold across random protocol configurations, pure and mixed auxiliaries.
bool criterion_chain(std::string& note) {
  Gate gate;
  auto g = test::rng(909);

  for (int t = 0; t < 500; ++t) {
    const Eigen::Index d = 2 + (t % 7);
    const Eigen::Index aux_dim = 2 + (t % 3);
    const Eigen::Index span = std::min(d, aux_dim);
    const Eigen::Index outcomes = span == 2 ? 2 : test::uniform_index(g, 2, span);
    const ParamStateFamily fam =
        test::random_unitary_family(d, test::uniform_index(g, 1, d), g);
    const ProjectiveMeasurement meas = random_projective(d, outcomes, g);
    const ControlledUnitary cu = build_controlled_unitary(meas, shift_powers(aux_dim,
                                                          meas.count()));
    const AuxiliaryState aux =
        t % 2 == 0 ? pure_aux(aux_dim)
                   : AuxiliaryState::from_density(
                         DensityOperator::from_populations(test::random_weights(aux_dim, g)));
    const double x = test::uniform(g, -1.0, 1.0);

    const ProtocolReport rec = audit_chain(fam, aux, cu, x);
    gate.observe(std::max(rec.f_b - rec.f_a, rec.f_sub_b - rec.f_b));
    gate.check(rec.f_a >= rec.f_b - 1e-7,
               fmt("transfer gained information: f_a %.6f < f_b %.6f", rec.f_a, rec.f_b));
    gate.check(rec.f_b >= rec.f_sub_b - 1e-7,
               fmt("bound above information: f_b %.6f < f_sub_b %.6f", rec.f_b, rec.f_sub_b));
    gate.check(rec.chain_ok && rec.ceiling_ok, fmt("audit flags down at trial %.0f",
                                                   double(t)));
    gate.check(rec.additivity_gap <= 1e-7,
               fmt("composite additivity gap %.2e", rec.additivity_gap));
  }

  note = gate.pass() ? "500 configurations, chain and ceiling intact" : gate.why();
  return gate.pass();
}

// 10: splitting outcome weights across a normalized row matrix leaves the
// classical information unchanged, and mixed-auxiliary transfers respect it.
bool criterion_mixed_ceiling(std::string& note) {
  Gate gate;
  auto g = test::rng(1010);

  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = test::uniform_index(g, 2, 5);
    const Eigen::Index m = test::uniform_index(g, 2, 4);
    const RealVector p = test::random_weights(n, g);
    const RealVector dp = test::random_dweights(n, g);
    RealMatrix weights(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) weights(i, j) = test::uniform(g, 0.05, 1.0);
      weights.row(i) /= weights.row(i).sum();
    }

    const double coarse = classical_fisher(p, dp);
    const double ceiling = mixed_aux_ceiling(p, dp, weights);
    RealVector q(n * m), dq(n * m);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        q(i * m + j) = p(i) * weights(i, j);
        dq(i * m + j) = dp(i) * weights(i, j);
      }
    }
    const double fine = classical_fisher(q, dq);
    gate.observe(std::abs(ceiling - coarse));
    gate.observe(std::abs(fine - coarse));
    gate.check(std::abs(ceiling - coarse) <= 1e-10 && std::abs(fine - coarse) <= 1e-10,
               fmt("weight split moved the figure by %.2e",
                   std::max(std::abs(ceiling - coarse), std::abs(fine - coarse))));
  }

  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d = 2 + (t % 5);
    const Eigen::Index aux_dim = 2 + (t % 3);
    const Eigen::Index span = std::min(d, aux_dim);
    const Eigen::Index outcomes = span == 2 ? 2 : test::uniform_index(g, 2, span);
    const ParamStateFamily fam =
        test::random_unitary_family(d, test::uniform_index(g, 1, d), g);
    const ProjectiveMeasurement meas = random_projective(d, outcomes, g);
    const ControlledUnitary cu = build_controlled_unitary(meas, shift_powers(aux_dim,
                                                          meas.count()));
    const AuxiliaryState aux = AuxiliaryState::from_density(
        DensityOperator::from_populations(test::random_weights(aux_dim, g)));
    const ProtocolReport rec = audit_chain(fam, aux, cu, test::uniform(g, -1.0, 1.0));
    gate.check(rec.f_b <= rec.cfi_a + 1e-7,
               fmt("mixed-auxiliary transfer %.6f above ceiling %.6f", rec.f_b, rec.cfi_a));
  }

  note = gate.pass() ? fmt("300 configurations, max deviation %.1e", gate.worst())
                     : gate.why();
  return gate.pass();
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    bool (*run)(std::string&);
  };
  const Entry entries[] = {
      {"entangled-pair information transfer", criterion_pair_example},
      {"finite-difference limit of the fidelity bound", criterion_limit_form},
      {"unitary and general bound forms agree", criterion_form_agreement},
      {"bound below information, tight for pure and qubit", criterion_lower_bound},
      {"superfidelity bounds and decompositions", criterion_superfidelity},
      {"ensemble solver agreement and weight ceiling", criterion_ensemble_solvers},
      {"single-qubit closed-form optimum", criterion_qubit_optimum},
      {"outcome-merge loss accounting", criterion_merge_loss},
      {"information chain on random protocols", criterion_chain},
      {"mixed-auxiliary ceiling", criterion_mixed_ceiling},
  };

  int failed = 0;
  int index = 0;
  for (const Entry& e : entries) {
    ++index;
    std::string detail;
    const bool ok = e.run(detail);
    if (!ok) ++failed;
    std::printf("criterion %2d: %s  %s (%s)\n", index, ok ? "PASS" : "FAIL", e.name,
                detail.c_str());
  }
  if (failed == 0)
    std::printf("all %d criteria passed\n", index);
  else
    std::printf("%d of %d criteria failed\n", failed, index);
  return failed == 0 ? 0 : 1;
}
