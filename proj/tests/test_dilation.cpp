#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "collapse/dilation.hpp"
#include "collapse/random.hpp"
#include "collapse/update_rules.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace collapse;
using namespace collapse::testing;

namespace {

Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
  return out;
}

Vector pointer_basis_vector(const MeasurementDilation& dil, int idx) {
  Vector v = Vector::Zero(dil.pointer_dim());
  v(idx) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("the sigma_z dilation entangles system and pointer as constructed") {
  const ProjectorFamily fam = projector_family(Observable(sigma_z()));
  const MeasurementDilation dil = build_dilation(fam);
  REQUIRE(dil.pointer_dim() == 2);
  REQUIRE(dil.ready_index() == 1);

  const Vector ready = pointer_basis_vector(dil, dil.ready_index());
  // ascending eigenvalues: outcome 0 is -1 (eigenvector e1), outcome 1 is +1 (e0)
  const Vector e0 = Vector::Unit(2, 0);
  const Vector e1 = Vector::Unit(2, 1);
  CHECK((dil.unitary() * tensor(e0, ready) - tensor(e0, pointer_basis_vector(dil, 1))).norm() <=
        1e-12);
  CHECK((dil.unitary() * tensor(e1, ready) - tensor(e1, pointer_basis_vector(dil, 0))).norm() <=
        1e-12);
}

TEST_CASE("the unit-observable dilation leaves the system factor alone") {
  const ProjectorFamily fam = projector_family(Observable(Matrix::Identity(3, 3)));
  const MeasurementDilation dil = build_dilation(fam);
  REQUIRE(dil.pointer_dim() == 2);  // extra ready slot keeps the isometry nontrivial
  Rng rng(700);
  const Vector psi = random_pure(3, rng);
  const Vector ready = pointer_basis_vector(dil, dil.ready_index());
  const Vector expected = tensor(psi, pointer_basis_vector(dil, 0));
  CHECK((dil.unitary() * tensor(psi, ready) - expected).norm() <= 1e-12);

  const DensityOperator rho(random_density(3, 2, rng));
  CHECK(approx_equal(dilated_measurement(rho, dil).matrix(), rho.matrix(), 1e-12));
}

TEST_CASE("the dilation isometry preserves norms on the ready sector") {
  Rng rng(701);
  const Observable obs(random_hermitian_with_spectrum(4, {2, 1, 1}, rng));
  const ProjectorFamily fam = projector_family(obs);
  const MeasurementDilation dil = build_dilation(fam);
  const Vector ready = pointer_basis_vector(dil, dil.ready_index());
  for (int t = 0; t < 1000; ++t) {
    Rng stream = rng.child(t);
    const Vector psi = random_pure(4, stream);
    CHECK(std::abs((dil.unitary() * tensor(psi, ready)).norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("the completed dilation operator is unitary") {
  Rng rng(702);
  const Observable obs(random_hermitian_with_spectrum(5, {2, 2, 1}, rng));
  const MeasurementDilation dil = build_dilation(projector_family(obs));
  const int n = dil.system_dim() * dil.pointer_dim();
  CHECK(max_abs(dil.unitary().adjoint() * dil.unitary() - Matrix::Identity(n, n)) <= 1e-9);

  // the invariant U(psi x ready) = sum_a (P_a psi) x a_a holds for random psi
  const ProjectorFamily& fam = dil.family();
  const Vector ready = pointer_basis_vector(dil, dil.ready_index());
  for (int t = 0; t < 100; ++t) {
    Rng stream = rng.child(t);
    const Vector psi = random_pure(5, stream);
    Vector expected = Vector::Zero(n);
    for (std::size_t a = 0; a < fam.size(); ++a)
      expected += tensor(fam.projector(a) * psi, pointer_basis_vector(dil, static_cast<int>(a)));
    CHECK((dil.unitary() * tensor(psi, ready) - expected).norm() <= 1e-9);
  }
}

TEST_CASE("tracing out the pointer reproduces the maximally mixed qubit") {
  const ProjectorFamily fam = projector_family(Observable(sigma_z()));
  const MeasurementDilation dil = build_dilation(fam);
  const DensityOperator rho{PureState(plus_state())};
  CHECK(approx_equal(dilated_measurement(rho, dil).matrix(), Matrix::Identity(2, 2) / 2.0, 1e-12));
}

TEST_CASE("commuting states pass through the dilation untouched") {
  const ProjectorFamily fam = projector_family(Observable(sigma_z()));
  const MeasurementDilation dil = build_dilation(fam);
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.7;
  diag(1, 1) = 0.3;
  const DensityOperator rho(diag);
  CHECK(approx_equal(dilated_measurement(rho, dil).matrix(), diag, 1e-12));
}

TEST_CASE("the dilation reproduces the worked nonselective example") {
  const ProjectorFamily fam = projector_family(Observable(degenerate_observable()));
  const MeasurementDilation dil = build_dilation(fam);
  const DensityOperator rho{PureState(uniform_three_state())};
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = expected(0, 1) = expected(1, 0) = expected(1, 1) = 1.0 / 3.0;
  expected(2, 2) = 1.0 / 3.0;
  CHECK(approx_equal(dilated_measurement(rho, dil).matrix(), expected, 1e-12));
}

TEST_CASE("dilated evolution matches the Lüders pinching on random pairs") {
  Rng rng(703);
  for (int t = 0; t < 40; ++t) {
    Rng stream = rng.child(t);
    const int dim = 2 + static_cast<int>(stream.below(5));
    const Observable obs(
        random_hermitian_with_spectrum(dim, random_multiplicities(dim, stream), stream));
    const ProjectorFamily fam = projector_family(obs);
    const MeasurementDilation dil = build_dilation(fam);
    const DensityOperator rho(
        random_density(dim, 1 + static_cast<int>(stream.below(dim)), stream));
    CHECK(max_abs(dilated_measurement(rho, dil).matrix() -
                  luders_nonselective(rho, fam).matrix()) <= 1e-9);
  }
}

TEST_CASE("pointer statistics are a point mass on an eigenstate") {
  const ProjectorFamily fam = projector_family(Observable(sigma_z()));
  const MeasurementDilation dil = build_dilation(fam);
  const DensityOperator rho{PureState(Vector::Unit(2, 0))};  // +1 eigenstate
  const OutcomeDistribution dist = pointer_distribution(rho, dil);
  CHECK(dist.probability(0) <= 1e-12);
  CHECK(dist.probability(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pointer statistics split evenly for |+>") {
  const ProjectorFamily fam = projector_family(Observable(sigma_z()));
  const MeasurementDilation dil = build_dilation(fam);
  const OutcomeDistribution dist = pointer_distribution(DensityOperator{PureState(plus_state())}, dil);
  CHECK(dist.probability(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dist.probability(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pointer statistics equal the Born rule on random states") {
  Rng rng(704);
  const Observable obs(random_hermitian_with_spectrum(4, {2, 2}, rng));
  const ProjectorFamily fam = projector_family(obs);
  const MeasurementDilation dil = build_dilation(fam);
  for (int t = 0; t < 25; ++t) {
    Rng stream = rng.child(t);
    const DensityOperator rho(random_density(4, 1 + static_cast<int>(stream.below(4)), stream));
    const OutcomeDistribution pointer = pointer_distribution(rho, dil);
    const OutcomeDistribution direct = born(rho, fam);
    for (std::size_t k = 0; k < fam.size(); ++k)
      CHECK(std::abs(pointer.probability(k) - direct.probability(k)) <= 1e-10);
  }
}

TEST_CASE("any unitary completion gives the same reduced dynamics") {
  const ProjectorFamily fam = projector_family(Observable(degenerate_observable()));
  const MeasurementDilation dil = build_dilation(fam);

  // permute two non-ready domain columns: a different completion of the same isometry
  Matrix alt = dil.unitary();
  alt.col(0).swap(alt.col(2));  // pointer slot 0 of system basis 0 and 1
  const MeasurementDilation other(fam, dil.pointer_dim(), dil.ready_index(), std::move(alt));

  Rng rng(705);
  const DensityOperator rho(random_density(3, 2, rng));
  CHECK(approx_equal(dilated_measurement(rho, dil).matrix(),
                     dilated_measurement(rho, other).matrix(), 1e-12));
  const OutcomeDistribution a = pointer_distribution(rho, dil);
  const OutcomeDistribution b = pointer_distribution(rho, other);
  for (std::size_t k = 0; k < a.size(); ++k)
    CHECK(std::abs(a.probability(k) - b.probability(k)) <= 1e-12);
}

TEST_CASE("global purity survives the interaction while the subsystem mixes") {
  const ProjectorFamily fam = projector_family(Observable(sigma_z()));
  const MeasurementDilation dil = build_dilation(fam);
  const DensityOperator rho{PureState(plus_state())};

  Matrix ready = Matrix::Zero(2, 2);
  ready(dil.ready_index(), dil.ready_index()) = 1.0;
  const Matrix before = kron(rho.matrix(), ready);
  const Matrix after = dil.unitary() * before * dil.unitary().adjoint();
  CHECK((before * before).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((after * after).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(purity_rank(dilated_measurement(rho, dil)).purity == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("rank is invariant under conjugation but not under measurement") {
  Rng rng(706);
  const DensityOperator pure{PureState(random_pure(3, rng))};
  const RankInvarianceReport rep = rank_invariance_demo(pure, 100, rng);
  CHECK(rep.rank_always_preserved);
  CHECK(rep.max_spectrum_dev <= 1e-9);
  CHECK(rep.exhibit_input_rank == 1);
  CHECK(rep.exhibit_output_rank == 2);
  CHECK(rep.measurement_raised_rank);
}

TEST_CASE("dimension mismatches are reported") {
  const ProjectorFamily fam = projector_family(Observable(sigma_z()));
  const MeasurementDilation dil = build_dilation(fam);
  const DensityOperator rho(Matrix::Identity(3, 3) / 3.0);
  CHECK_THROWS_AS(dilated_measurement(rho, dil), DimensionMismatch);
  CHECK_THROWS_AS(pointer_distribution(rho, dil), DimensionMismatch);
}
