#include <doctest.h>

#include "pathid/density_matrix.hpp"
#include "pathid/errors.hpp"

using namespace pathid;

namespace {

ComplexMatrix diag(std::initializer_list<double> values) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("valid density matrix keeps entries and labels") {
  ComplexMatrix m = diag({0.5, 0.5});
  m(0, 1) = Complex(0.25, 0.1);
  m(1, 0) = Complex(0.25, -0.1);
  const DensityMatrix rho(m, {"H", "V"});
  CHECK(rho.dim() == 2);
  CHECK(rho.basis_labels()[1] == "V");
  CHECK(rho(0, 1) == Complex(0.25, 0.1));
  CHECK(rho.hermiticity_error() == doctest::Approx(0.0));
  CHECK(rho.trace_error() == doctest::Approx(0.0));
  CHECK(rho.is_positive_semidefinite());
}

TEST_CASE("construction rejects bad matrices") {
  SUBCASE("non hermitian") {
    ComplexMatrix m = diag({0.5, 0.5});
    m(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix(m, {"a", "b"}), ValidationError);
  }
  SUBCASE("trace") { CHECK_THROWS_AS(DensityMatrix(diag({0.6, 0.6}), {"a", "b"}), ValidationError); }
  SUBCASE("negative eigenvalue") {
    CHECK_THROWS_AS(DensityMatrix(diag({1.2, -0.2}), {"a", "b"}), ValidationError);
    CHECK_NOTHROW(DensityMatrix(diag({1.2, -0.2}), {"a", "b"}, DensityChecks::kHermitianUnitTrace));
  }
  SUBCASE("label count") { CHECK_THROWS_AS(DensityMatrix(diag({0.5, 0.5}), {"a"}), ValidationError); }
  SUBCASE("not square") { CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::Zero(2, 3), {"a", "b"}), ValidationError); }
}

TEST_CASE("partial trace of a product state returns the second factor") {
  Eigen::Matrix2cd a;
  a << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
  Eigen::Matrix3cd b = Eigen::Matrix3cd::Zero();
  b(0, 0) = 0.2;
  b(1, 1) = 0.5;
  b(2, 2) = 0.3;
  b(0, 2) = Complex(0.0, 0.1);
  b(2, 0) = Complex(0.0, -0.1);
  ComplexMatrix ab(6, 6);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) ab.block(3 * i, 3 * j, 3, 3) = a(i, j) * b;
  }
  const ComplexMatrix reduced = trace_out_first(ab, 2, 3);
  CHECK(max_abs(reduced - ComplexMatrix(b)) < 1e-15);
  CHECK_THROWS_AS(trace_out_first(ab, 4, 2), ValidationError);
}

TEST_CASE("hermitian eigenvalues are ascending") {
  ComplexMatrix m(2, 2);
  m << 0.5, Complex(0.0, 0.5), Complex(0.0, -0.5), 0.5;
  const auto ev = hermitian_eigenvalues(m);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(1.0));
}

TEST_CASE("product labels follow row-major order") {
  const auto labels = product_labels({"H_I", "V_I"}, {"H_S", "V_S"});
  REQUIRE(labels.size() == 4);
  CHECK(labels[0] == "H_I H_S");
  CHECK(labels[1] == "H_I V_S");
  CHECK(labels[2] == "V_I H_S");
  CHECK(labels[3] == "V_I V_S");
}
