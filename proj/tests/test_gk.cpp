#include <doctest.h>

#include <chrono>

#include "fuzzysweep/fixtures.hpp"
#include "fuzzysweep/gk.hpp"
#include "test_fixtures.hpp"

using namespace fuzzysweep;

namespace {

GkConfig gk_config(int k, std::uint64_t seed, double gamma = 1e-4) {
  return GkConfig{ClusterConfig{k, 2.0, 1e-5, 300, seed}, {}, gamma};
}

double log_det(const Eigen::MatrixXd& a) {
  return Eigen::LLT<Eigen::MatrixXd>(a).matrixLLT().diagonal().array().log().sum() * 2.0;
}

}  // namespace

TEST_CASE("fuzzy_covariance of a two-point cluster") {
  Matrix p(2, 2);
  p << -1, 0, 1, 0;
  const DataSet x(p);
  const MembershipMatrix crisp(Eigen::MatrixXd::Ones(1, 2));
  const Matrix center = Matrix::Zero(1, 2);

  const Eigen::MatrixXd raw = fuzzy_covariance(crisp, x, center, 2.0, 0, 0.0);
  CHECK(raw(0, 0) == 1.0);
  CHECK(raw(0, 1) == 0.0);
  CHECK(raw(1, 0) == 0.0);
  CHECK(raw(1, 1) == 0.0);

  const double g = 1e-4;
  const Eigen::MatrixXd reg = fuzzy_covariance(crisp, x, center, 2.0, 0, g);
  CHECK(reg(0, 0) == doctest::Approx(1.0 * (1 - g) + g * 0.5).epsilon(1e-15));
  CHECK(reg(1, 1) == doctest::Approx(g * 0.5).epsilon(1e-15));
  CHECK(reg(0, 1) == 0.0);
}

TEST_CASE("fuzzy_covariance of an isotropic blob approaches the identity") {
  const DataSet x = testing::gaussian_blobs({{0.0, 0.0}}, 1000, 1.0, 17);
  const MembershipMatrix crisp(Eigen::MatrixXd::Ones(1, 1000));
  const Matrix center = x.grand_mean();
  const Eigen::MatrixXd c = fuzzy_covariance(crisp, x, center, 2.0, 0, 1e-4);
  CHECK((c - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.15);
}

TEST_CASE("fuzzy_covariance rejects an empty cluster") {
  Eigen::MatrixXd mu(2, 3);
  mu << 1, 1, 1, 0, 0, 0;
  std::mt19937_64 rng(1);
  const DataSet x = testing::random_dataset(rng, 3, 2);
  CHECK_THROWS_AS(fuzzy_covariance(MembershipMatrix(mu), x, Matrix::Zero(2, 2), 2.0, 1, 0.0),
                  DegenerateClusterError);
}

TEST_CASE("norm_matrix") {
  for (int d : {1, 2, 5}) {
    const Eigen::MatrixXd a = norm_matrix(Eigen::MatrixXd::Identity(d, d), 1.0);
    CHECK((a - Eigen::MatrixXd::Identity(d, d)).norm() < 1e-14);
  }

  Eigen::MatrixXd c = Eigen::Vector2d(4.0, 1.0).asDiagonal();
  Eigen::MatrixXd a = norm_matrix(c, 1.0);
  CHECK(a(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(a(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(a.determinant() == doctest::Approx(1.0).epsilon(1e-12));

  a = norm_matrix(2.0 * Eigen::MatrixXd::Identity(3, 3), 1.0);
  CHECK((a - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-14);

  // volume constraint for a random SPD matrix and rho != 1
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd b(4, 4);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = n(rng);
  const Eigen::MatrixXd spd = b * b.transpose() + 0.1 * Eigen::MatrixXd::Identity(4, 4);
  a = norm_matrix(spd, 2.5);
  CHECK(std::exp(log_det(a)) == doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("norm_matrix rejects singular covariances") {
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(norm_matrix(zero, 1.0, 3), SingularCovarianceError);
  Eigen::MatrixXd tiny = 1e-160 * Eigen::MatrixXd::Identity(2, 2);
  try {
    norm_matrix(tiny, 1.0, 1);
    FAIL("expected SingularCovarianceError");
  } catch (const SingularCovarianceError& e) {
    CHECK(e.cluster() == 1);
  }
}

TEST_CASE("gk_distance_sq") {
  const std::vector<double> x{3.0, -1.0}, v{2.0, -1.0};
  CHECK(gk_distance_sq(x, x, Eigen::MatrixXd::Identity(2, 2)) == 0.0);
  CHECK(gk_distance_sq(x, v, Eigen::MatrixXd::Identity(2, 2)) == sq_euclidean(x, v));
  const Eigen::MatrixXd a = Eigen::Vector2d(0.5, 2.0).asDiagonal();
  CHECK(gk_distance_sq(x, v, a) == 0.5);
  CHECK_THROWS_AS(gk_distance_sq(x, v, Eigen::MatrixXd::Identity(3, 3)), InvalidArgument);
}

TEST_CASE("gk_step with identity norms reproduces fcm_step bit for bit") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const DataSet x = testing::random_dataset(rng, 15 + t, 1 + t % 4);
    const MembershipMatrix u = testing::random_memberships(rng, 2 + t % 3, 15 + t);
    GkConfig cfg = gk_config(2 + t % 3, 0);
    const GkStep g = gk_step(x, u, cfg, true);
    const FcmStep f = fcm_step(x, u, cfg.base.m);
    CHECK(g.centers == f.centers);
    CHECK(g.memberships.values() == f.memberships.values());
    CHECK(g.objective == f.objective);
  }
}

TEST_CASE("gk_run keeps cluster volumes and covariance shape invariants") {
  const DataSet x = iris();
  Rng rng(3);
  int iterations = 0;
  const FcmResult r = gk_run(x, gk_config(3, 3), rng, [&](const GkStep& step) {
    ++iterations;
    for (std::size_t i = 0; i < step.norm_matrices.size(); ++i) {
      CHECK(std::abs(std::exp(log_det(step.norm_matrices[i])) - 1.0) < 1e-6);
      const auto& c = step.covariances[i];
      CHECK((c - c.transpose()).cwiseAbs().maxCoeff() < 1e-9);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
      CHECK(eig.eigenvalues().minCoeff() >= 0.0);
    }
  });
  CHECK(r.converged);
  CHECK(iterations == r.iterations);
  for (std::size_t t = 1; t < r.objective_trace.size(); ++t) {
    CHECK(r.objective_trace[t] <= r.objective_trace[t - 1] * (1.0 + 1e-6));
  }
}

TEST_CASE("gk_run honours per-cluster volumes") {
  const DataSet x = iris();
  Rng rng(5);
  GkConfig cfg = gk_config(3, 5);
  cfg.rho = {0.5, 1.0, 2.0};
  gk_run(x, cfg, rng, [&](const GkStep& step) {
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::exp(log_det(step.norm_matrices[i])) == doctest::Approx(cfg.rho[i]).epsilon(1e-6));
    }
  });
}

TEST_CASE("gk_run separates elongated parallel blobs") {
  const DataSet x = testing::elongated_blobs();
  Rng rng(1);
  const FcmResult r = gk_run(x, gk_config(2, 1), rng);
  const auto assign = hard_assign(r.memberships);
  CHECK(best_permutation_accuracy(assign, x.labels()) == 1.0);
}

TEST_CASE("gk_run matches fcm on spherical blobs") {
  const DataSet x = testing::gaussian_blobs({{0, 0}, {12, 0}, {0, 12}}, 40, 1.0, 8);
  Rng a(6), b(6);
  const FcmResult g = gk_run(x, gk_config(3, 6), a);
  const FcmResult f = fcm_run(x, ClusterConfig{3, 2.0, 1e-5, 300, 6}, b);
  CHECK(hard_assign(g.memberships) == hard_assign(f.memberships));
}

TEST_CASE("gk_run reports singular data") {
  Matrix same = Matrix::Ones(6, 2);
  const DataSet x(same);
  Rng rng(0);
  CHECK_THROWS_AS(gk_run(x, gk_config(2, 0, 0.0), rng), SingularCovarianceError);
}

TEST_CASE("gk_run is slower than fcm on iris") {
  const DataSet x = iris();
  using clock = std::chrono::steady_clock;
  double fcm_ms = 0.0, gk_ms = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng a(seed), b(seed);
    auto t0 = clock::now();
    fcm_run(x, ClusterConfig{3, 2.0, 1e-5, 300, seed}, a);
    auto t1 = clock::now();
    gk_run(x, gk_config(3, seed), b);
    auto t2 = clock::now();
    fcm_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
    gk_ms += std::chrono::duration<double, std::milli>(t2 - t1).count();
  }
  CHECK(gk_ms > fcm_ms);
}

TEST_CASE("GkConfig validation") {
  GkConfig cfg = gk_config(3, 0);
  cfg.cov_regularization = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = gk_config(3, 0);
  cfg.rho = {1.0, 2.0};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.rho = {-1.0};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}
