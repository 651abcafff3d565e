#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qfi/errors.hpp"
#include "qfi/linalg.hpp"
#include "qfi/metrics.hpp"
#include "qfi/protocol.hpp"
#include "qfi/random_states.hpp"
#include "support.hpp"

using namespace qfi;

namespace {

// cos(x)|00> + sin(x)|11> as a unitary family: the generator swaps the block
// {|00>, |11>} like a spin flip and leaves the rest alone.
ParamStateFamily bell_sweep_family() {
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(3, 0) = Complex(0, 1);
  h(0, 3) = Complex(0, -1);
  return unitary_family(DensityOperator::from_pure(PureState::basis(4, 0)),
                        make_generator(h, "bell-block"));
}

ProjectiveMeasurement bell_basis() {
  auto pair_state = [](int i, int j, double sign) {
    ComplexVector v = ComplexVector::Zero(4);
    v(i) = 1.0 / std::sqrt(2.0);
    v(j) = sign / std::sqrt(2.0);
    return PureState(v);
  };
  std::vector<ComplexMatrix> ps = {
      pair_state(0, 3, 1.0).projector(), pair_state(0, 3, -1.0).projector(),
      pair_state(1, 2, 1.0).projector(), pair_state(1, 2, -1.0).projector()};
  return ProjectiveMeasurement(std::move(ps));
}

ControlledUnitary bell_protocol() {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  return build_controlled_unitary(bell_basis(), {id, pauli_x(), id, id});
}

AuxiliaryState pure_aux(Eigen::Index dim, Eigen::Index k = 0) {
  return AuxiliaryState::from_density(DensityOperator::from_pure(PureState::basis(dim, k)));
}

// Random complete projective measurement with the given number of outcomes,
// blocks carved out of the columns of a Haar unitary.
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

ComplexMatrix cyclic_shift(Eigen::Index d) {
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) s((j + 1) % d, j) = 1.0;
  return s;
}

}  // namespace

TEST_CASE("controlled unitaries are assembled and validated") {
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);

  SUBCASE("one projector, one unitary: nothing propagates") {
    const ProjectiveMeasurement trivial({ComplexMatrix::Identity(3, 3)});
    const ControlledUnitary cu = build_controlled_unitary(trivial, {cyclic_shift(2)});
    CHECK_FALSE(cu.propagating());
    CHECK(cu.dim_a() == 3);
    CHECK(cu.dim_b() == 2);
    CHECK(max_abs(cu.matrix() - kron(ComplexMatrix::Identity(3, 3), cyclic_shift(2))) == 0.0);
  }

  SUBCASE("identical branch unitaries do not propagate, distinct ones do") {
    const ProjectiveMeasurement comp = ProjectiveMeasurement::computational(2);
    CHECK_FALSE(build_controlled_unitary(comp, {id2, id2}).propagating());
    CHECK(build_controlled_unitary(comp, {id2, pauli_x()}).propagating());
  }

  SUBCASE("the assembled matrix is unitary") {
    auto gen = test::rng(121);
    const ProjectiveMeasurement meas = random_projective(3, 2, gen);
    const ControlledUnitary cu =
        build_controlled_unitary(meas, {random_unitary(2, gen), random_unitary(2, gen)});
    CHECK(max_abs(cu.matrix().adjoint() * cu.matrix() - ComplexMatrix::Identity(6, 6)) <=
          1e-12);
  }

  SUBCASE("count mismatch is rejected") {
    const ProjectiveMeasurement comp = ProjectiveMeasurement::computational(2);
    CHECK_THROWS_AS(build_controlled_unitary(comp, {id2}), ArgumentError);
  }

  SUBCASE("non-unitary branch operators are rejected") {
    const ProjectiveMeasurement comp = ProjectiveMeasurement::computational(2);
    CHECK_THROWS_AS(build_controlled_unitary(comp, {id2, 0.5 * id2}), ArgumentError);
  }

  SUBCASE("inconsistent auxiliary dimensions are rejected") {
    const ProjectiveMeasurement comp = ProjectiveMeasurement::computational(2);
    CHECK_THROWS_AS(build_controlled_unitary(comp, {id2, ComplexMatrix::Identity(3, 3)}),
                    ArgumentError);
  }

  SUBCASE("composite dimensions beyond the dense budget are rejected") {
    ComplexMatrix block = ComplexMatrix::Zero(70, 70);
    ComplexMatrix rest = ComplexMatrix::Zero(70, 70);
    for (Eigen::Index i = 0; i < 35; ++i) block(i, i) = 1.0;
    for (Eigen::Index i = 35; i < 70; ++i) rest(i, i) = 1.0;
    const ProjectiveMeasurement wide({block, rest});
    const ComplexMatrix id60 = ComplexMatrix::Identity(60, 60);
    CHECK_THROWS_AS(build_controlled_unitary(wide, {id60, id60}), ResourceError);
  }
}

TEST_CASE("protocol output in closed form on a diagonal example") {
  RealVector p(2);
  p << 0.7, 0.3;
  const DensityOperator rho_a = DensityOperator::from_populations(p);
  const ControlledUnitary cu = build_controlled_unitary(
      ProjectiveMeasurement::computational(2), {ComplexMatrix::Identity(2, 2), pauli_x()});

  const DensityOperator rho_b = apply_protocol(rho_a, pure_aux(2), cu);
  CHECK(rho_b.matrix()(0, 0).real() == doctest::Approx(0.7));
  CHECK(rho_b.matrix()(1, 1).real() == doctest::Approx(0.3));
  CHECK(std::abs(rho_b.matrix()(0, 1)) <= 1e-15);

  CHECK_THROWS_AS(apply_protocol(DensityOperator::maximally_mixed(3), pure_aux(2), cu),
                  ArgumentError);
  CHECK_THROWS_AS(apply_protocol(rho_a, pure_aux(3), cu), ArgumentError);
}

TEST_CASE("closed-form and conjugate-and-trace protocol paths agree") {
  auto gen = test::rng(122);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index da = 2 + test::uniform_index(gen, 0, 2);
    const Eigen::Index db = 2 + test::uniform_index(gen, 0, 1);
    const Eigen::Index outcomes = 2 + test::uniform_index(gen, 0, da - 2);

    const ProjectiveMeasurement meas = random_projective(da, outcomes, gen);
    std::vector<ComplexMatrix> ops;
    for (Eigen::Index i = 0; i < outcomes; ++i) ops.push_back(random_unitary(db, gen));
    const ControlledUnitary cu = build_controlled_unitary(meas, ops);

    const DensityOperator rho_a = random_density(da, 1 + test::uniform_index(gen, 0, da - 1), gen);
    const AuxiliaryState sigma =
        AuxiliaryState::from_density(random_density(db, 1 + test::uniform_index(gen, 0, db - 1), gen));

    const DensityOperator direct = apply_protocol(rho_a, sigma, cu);
    const DensityOperator dense = apply_protocol_dense(rho_a, sigma, cu);
    CHECK(max_abs(direct.matrix() - dense.matrix()) <= 1e-10);
  }
}

TEST_CASE("bell sweep transfers its full information to the auxiliary") {
  const ParamStateFamily fam = bell_sweep_family();
  const ControlledUnitary cu = bell_protocol();
  const AuxiliaryState sigma = pure_aux(2);

  SUBCASE("the transferred state is the expected diagonal qubit") {
    const ParamStateFamily fam_b = transferred_family(fam, sigma, cu);
    for (double x : {0.2, 0.6, 1.1}) {
      const ComplexMatrix rb = fam_b.state_at(x).matrix();
      CHECK(rb(0, 0).real() == doctest::Approx((1 + std::sin(2 * x)) / 2).epsilon(1e-12));
      CHECK(rb(1, 1).real() == doctest::Approx((1 - std::sin(2 * x)) / 2).epsilon(1e-12));
      CHECK(std::abs(rb(0, 1)) <= 1e-14);
    }
  }

  SUBCASE("every link of the chain sits at the pure-state ceiling") {
    for (double x : {0.2, 0.6, 1.1, -0.4}) {
      const ProtocolReport rep = audit_chain(fam, sigma, cu, x);
      CHECK(rep.f_a == doctest::Approx(4.0).epsilon(1e-9));
      CHECK(rep.cfi_a == doctest::Approx(4.0).epsilon(1e-9));
      CHECK(rep.f_b == doctest::Approx(4.0).epsilon(1e-9));
      CHECK(rep.f_sub_b == doctest::Approx(4.0).epsilon(1e-9));
      CHECK(rep.f_composite == doctest::Approx(4.0).epsilon(1e-9));
      CHECK(rep.additivity_gap <= 1e-7);
      CHECK(rep.chain_ok);
      CHECK(rep.ceiling_ok);
    }
  }
}

TEST_CASE("audited chains hold across random protocols") {
  auto gen = test::rng(123);
  int strict = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const Eigen::Index da = 2 + test::uniform_index(gen, 0, 1);
    const Eigen::Index db = 2;
    const Eigen::Index outcomes = 2 + test::uniform_index(gen, 0, da - 2);

    const ParamStateFamily fam =
        test::random_unitary_family(da, 1 + test::uniform_index(gen, 0, da - 1), gen);
    const ProjectiveMeasurement meas = random_projective(da, outcomes, gen);
    std::vector<ComplexMatrix> ops;
    for (Eigen::Index i = 0; i < outcomes; ++i) ops.push_back(random_unitary(db, gen));
    const ControlledUnitary cu = build_controlled_unitary(meas, ops);
    const AuxiliaryState sigma = AuxiliaryState::from_density(
        random_density(db, 1 + test::uniform_index(gen, 0, db - 1), gen));

    const double x = test::uniform(gen, -1.5, 1.5);
    const ProtocolReport rep = audit_chain(fam, sigma, cu, x);
    CHECK(rep.chain_ok);
    CHECK(rep.ceiling_ok);
    if (rep.f_a - rep.f_b > 1e-9 * std::max(1.0, rep.f_a)) ++strict;
  }
  // a random readout is essentially never optimal, so information is lost
  CHECK(strict >= trials * 95 / 100);
}

TEST_CASE("transferred information is invariant under a common auxiliary rotation") {
  auto gen = test::rng(124);
  const ParamStateFamily fam = test::random_unitary_family(3, 3, gen);
  const ProjectiveMeasurement meas = random_projective(3, 3, gen);
  const AuxiliaryState sigma = AuxiliaryState::from_density(random_density(2, 2, gen));

  std::vector<ComplexMatrix> ops;
  for (int i = 0; i < 3; ++i) ops.push_back(random_unitary(2, gen));
  const ComplexMatrix w = random_unitary(2, gen);
  std::vector<ComplexMatrix> rotated;
  for (const auto& o : ops) rotated.push_back(ComplexMatrix(w * o));

  const ControlledUnitary cu = build_controlled_unitary(meas, ops);
  const ControlledUnitary cu_rot = build_controlled_unitary(meas, rotated);

  for (double x : {0.1, 0.9}) {
    const double f = qfi_spectral(transferred_family(fam, sigma, cu), x);
    const double f_rot = qfi_spectral(transferred_family(fam, sigma, cu_rot), x);
    CHECK(f == doctest::Approx(f_rot).epsilon(1e-9));
  }
}

TEST_CASE("orthogonal transfer onto a pure auxiliary saturates the classical ceiling") {
  auto gen = test::rng(125);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index da = 3;
    const Eigen::Index outcomes = 3;
    const ParamStateFamily fam = test::random_unitary_family(da, da, gen);
    const ProjectiveMeasurement meas = random_projective(da, outcomes, gen);

    // shift powers send |0> to distinct basis states: perfectly distinguishable
    const ComplexMatrix s = cyclic_shift(outcomes);
    std::vector<ComplexMatrix> ops = {ComplexMatrix::Identity(outcomes, outcomes), s,
                                      ComplexMatrix(s * s)};
    const ControlledUnitary cu = build_controlled_unitary(meas, ops);

    const double x = test::uniform(gen, -1.0, 1.0);
    const ProtocolReport rep = audit_chain(fam, pure_aux(outcomes), cu, x);
    CHECK(std::abs(rep.f_b - rep.cfi_a) <= 1e-9 * std::max(1.0, rep.cfi_a));
    CHECK(rep.chain_ok);
    CHECK(rep.ceiling_ok);

    // overwriting the branches with a common unitary erases the transfer
    const ControlledUnitary blind = build_controlled_unitary(
        meas, {ops[0], ops[0], ops[0]});
    CHECK(qfi_spectral(transferred_family(fam, pure_aux(outcomes), blind), x) <= 1e-10);
  }
}

TEST_CASE("mixed auxiliary ceiling refines but never changes the classical bound") {
  RealVector p(3), dp(3);
  p << 0.5, 0.3, 0.2;
  dp << 0.1, -0.25, 0.15;
  const double coarse = classical_fisher(p, dp);

  SUBCASE("a single auxiliary weight column is the identity refinement") {
    RealMatrix w = RealMatrix::Ones(3, 1);
    CHECK(mixed_aux_ceiling(p, dp, w) == doctest::Approx(coarse).epsilon(1e-12));
  }

  SUBCASE("uniform refinement") {
    RealMatrix w = RealMatrix::Constant(3, 4, 0.25);
    CHECK(mixed_aux_ceiling(p, dp, w) == doctest::Approx(coarse).epsilon(1e-12));
  }

  SUBCASE("random refinement rows") {
    auto gen = test::rng(126);
    RealMatrix w(3, 5);
    for (int i = 0; i < 3; ++i) w.row(i) = test::random_weights(5, gen).transpose();
    CHECK(mixed_aux_ceiling(p, dp, w) == doctest::Approx(coarse).epsilon(1e-10));
  }

  SUBCASE("a vanished outcome with surviving derivative weight is singular") {
    RealVector pz(2), dpz(2);
    pz << 0.0, 1.0;
    dpz << 0.1, -0.1;
    RealMatrix w = RealMatrix::Constant(2, 2, 0.5);
    CHECK_THROWS_AS(mixed_aux_ceiling(pz, dpz, w), SingularError);
  }

  SUBCASE("weight rows are validated") {
    RealMatrix bad_sum = RealMatrix::Constant(3, 2, 0.4);
    CHECK_THROWS_AS(mixed_aux_ceiling(p, dp, bad_sum), ArgumentError);

    RealMatrix negative(3, 2);
    negative.setConstant(0.5);
    negative(1, 0) = -0.1;
    negative(1, 1) = 1.1;
    CHECK_THROWS_AS(mixed_aux_ceiling(p, dp, negative), ArgumentError);

    RealMatrix wrong_rows = RealMatrix::Ones(2, 1);
    CHECK_THROWS_AS(mixed_aux_ceiling(p, dp, wrong_rows), ArgumentError);
  }
}

TEST_CASE("family builders reject mismatched protocol dimensions") {
  auto gen = test::rng(127);
  const ParamStateFamily fam = test::random_unitary_family(3, 2, gen);
  const ControlledUnitary cu = build_controlled_unitary(
      ProjectiveMeasurement::computational(2), {ComplexMatrix::Identity(2, 2), pauli_x()});

  CHECK_THROWS_AS(transferred_family(fam, pure_aux(2), cu), ArgumentError);
  CHECK_THROWS_AS(composite_family(fam, pure_aux(2), cu), ArgumentError);

  const ParamStateFamily ok = test::random_unitary_family(2, 2, gen);
  CHECK_THROWS_AS(transferred_family(ok, pure_aux(3), cu), ArgumentError);
  CHECK_THROWS_AS(composite_family(ok, pure_aux(3), cu), ArgumentError);
}
