#include <doctest.h>

#include <numeric>

#include "cvi_oracle.hpp"
#include "fuzzysweep/cvi.hpp"
#include "fuzzysweep/fcm.hpp"
#include "fuzzysweep/fixtures.hpp"
#include "test_fixtures.hpp"

using namespace fuzzysweep;
namespace naive = fuzzysweep::testing::naive;

namespace {

naive::Grid grid(const Eigen::MatrixXd& a) {
  naive::Grid g(static_cast<std::size_t>(a.rows()), std::vector<double>(static_cast<std::size_t>(a.cols())));
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) g[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = a(r, c);
  }
  return g;
}

MembershipMatrix columns(int n, std::initializer_list<double> col) {
  Eigen::MatrixXd mu(static_cast<Eigen::Index>(col.size()), n);
  Eigen::Index i = 0;
  for (double v : col) mu.row(i++).setConstant(v);
  return MembershipMatrix(mu);
}

MembershipMatrix crisp(const std::vector<int>& assign, int c) {
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(c, static_cast<Eigen::Index>(assign.size()));
  for (std::size_t k = 0; k < assign.size(); ++k) mu(assign[k], static_cast<Eigen::Index>(k)) = 1.0;
  return MembershipMatrix(mu);
}

std::optional<double> value_of(const std::vector<IndexValue>& all, IndexName name) {
  for (const auto& v : all) {
    if (v.name == name) return v.value;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("index names and directions") {
  CHECK(direction_of(IndexName::PC) == Direction::Max);
  CHECK(direction_of(IndexName::NPC) == Direction::Max);
  CHECK(direction_of(IndexName::BWS) == Direction::Max);
  for (IndexName n : {IndexName::FHV, IndexName::FS, IndexName::XB, IndexName::BH}) {
    CHECK(direction_of(n) == Direction::Min);
  }
  for (IndexName n : kAllIndexes) CHECK(parse_index(to_string(n)) == n);
  CHECK_FALSE(parse_index("DB").has_value());
}

TEST_CASE("PC and NPC anchors") {
  CHECK(cvi::pc(crisp({0, 1, 1, 0}, 2)) == 1.0);
  CHECK(cvi::npc(crisp({0, 1, 2, 0}, 3)) == 1.0);
  CHECK(cvi::pc(columns(6, {0.25, 0.25, 0.25, 0.25})) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(cvi::npc(columns(6, {0.25, 0.25, 0.25, 0.25}))) < 1e-15);
  CHECK(cvi::pc(columns(5, {0.6, 0.4})) == doctest::Approx(0.52).epsilon(1e-14));
  CHECK(cvi::npc(columns(5, {0.6, 0.4})) == doctest::Approx(0.04).epsilon(1e-12));
  CHECK_THROWS_AS(cvi::npc(columns(3, {1.0})), UndefinedIndexError);
}

TEST_CASE("FHV examples") {
  Matrix p(2, 2);
  p << -1, 0, 1, 0;
  Matrix v = Matrix::Zero(1, 2);
  CHECK(cvi::fhv(crisp({0, 0}, 1), DataSet(p), v, 2.0) == 0.0);

  // two clusters, each the four points (+-1, +-1) around its center, so F = I
  Matrix q(8, 2);
  q << -1, -1, -1, 1, 1, -1, 1, 1, 9, -1, 9, 1, 11, -1, 11, 1;
  Matrix centers(2, 2);
  centers << 0, 0, 10, 0;
  CHECK(cvi::fhv(crisp({0, 0, 0, 0, 1, 1, 1, 1}, 2), DataSet(q), centers, 2.0) ==
        doctest::Approx(2.0).epsilon(1e-14));

  const DataSet x = iris();
  Rng rng(1);
  const FcmResult r = fcm_run(x, ClusterConfig{3, 2.0, 1e-5, 300, 1}, rng);
  const double lib = cvi::fhv(r.memberships, x, r.model.centers, 2.0);
  const double ref = naive::fhv(grid(r.memberships.values()), grid(x.points()), grid(r.model.centers), 2.0);
  CHECK(testing::rel_close(lib, ref, 1e-8));
}

TEST_CASE("FS examples") {
  const DataSet x = testing::two_blobs();
  const Matrix at_mean = x.grand_mean().replicate(2, 1);
  const MembershipMatrix u = columns(20, {0.5, 0.5});
  CHECK(cvi::fs(u, x, at_mean, 2.0) == doctest::Approx(objective(u, x, at_mean, 2.0)).epsilon(1e-12));

  std::vector<int> assign(20, 0);
  std::fill(assign.begin() + 10, assign.end(), 1);
  Matrix means(2, 2);
  means.row(0) = x.points().topRows(10).colwise().mean();
  means.row(1) = x.points().bottomRows(10).colwise().mean();
  CHECK(cvi::fs(crisp(assign, 2), x, means, 2.0) < 0.0);

  const MembershipMatrix one = columns(20, {1.0});
  const Matrix g = x.grand_mean();
  const double scatter = (x.points().rowwise() - x.grand_mean()).squaredNorm();
  CHECK(cvi::fs(one, x, g, 2.0) == doctest::Approx(scatter).epsilon(1e-12));
}

TEST_CASE("XB examples") {
  const DataSet x = testing::two_blobs();
  Matrix means(2, 2);
  means.row(0) = x.points().topRows(10).colwise().mean();
  means.row(1) = x.points().bottomRows(10).colwise().mean();
  std::vector<int> assign(20, 0);
  std::fill(assign.begin() + 10, assign.end(), 1);
  CHECK(cvi::xb(crisp(assign, 2), x, means, 2.0) < 1e-4);

  Matrix same(2, 2);
  same << 1, 1, 1, 1;
  CHECK_THROWS_AS(cvi::xb(columns(20, {0.5, 0.5}), x, same, 2.0), UndefinedIndexError);
  CHECK_THROWS_AS(cvi::xb(columns(20, {1.0}), x, x.grand_mean(), 2.0), UndefinedIndexError);
}

TEST_CASE("BH examples") {
  // both points at distance 2 from center 0: J = 8, compactness 8 / 2 = 4; D = 2
  Matrix p(2, 1);
  p << 2, -2;
  Eigen::MatrixXd mu(2, 2);
  mu << 1, 1, 0, 0;
  Matrix v(2, 1);
  v << 0, std::sqrt(2.0);
  const MembershipMatrix u(mu);
  CHECK(cvi::bh_compactness(u, DataSet(p), v, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(cvi::bh(u, DataSet(p), v, 2.0) == doctest::Approx(2.0).epsilon(1e-14));

  // with U frozen, pushing the centers apart strictly shrinks the separation factor
  std::mt19937_64 rng(5);
  const DataSet x = testing::random_dataset(rng, 12, 2);
  const MembershipMatrix w = testing::random_memberships(rng, 2, 12);
  Matrix centers(2, 2);
  centers << -0.5, 0, 0.5, 0;
  double previous = cvi::bh(w, x, centers, 2.0) / cvi::bh_compactness(w, x, centers, 2.0);
  for (int step = 0; step < 10; ++step) {
    centers(0, 0) -= 0.5;
    centers(1, 0) += 0.5;
    const double factor = cvi::bh(w, x, centers, 2.0) / cvi::bh_compactness(w, x, centers, 2.0);
    CHECK(factor < previous);
    previous = factor;
  }

  CHECK_THROWS_AS(cvi::bh(columns(12, {1.0}), x, x.grand_mean(), 2.0), UndefinedIndexError);
}

TEST_CASE("BWS examples") {
  std::mt19937_64 rng(6);
  const DataSet x = testing::random_dataset(rng, 15, 3);
  const MembershipMatrix u = testing::random_memberships(rng, 3, 15);
  const Matrix at_mean = x.grand_mean().replicate(3, 1);
  CHECK(cvi::bws(u, x, at_mean, 2.0) == 0.0);

  const Matrix v = testing::random_centers(rng, 3, 3);
  for (double s : {0.5, 3.0}) {
    const DataSet scaled(x.points() * s);
    CHECK(testing::rel_close(cvi::bws(u, scaled, v * s, 2.0), cvi::bws(u, x, v, 2.0), 1e-12));
  }

  const DataSet blobs = testing::two_blobs();
  Rng a(1), b(1);
  const FcmResult two = fcm_run(blobs, ClusterConfig{2, 2.0, 1e-9, 300, 1}, a);
  const FcmResult three = fcm_run(blobs, ClusterConfig{3, 2.0, 1e-9, 300, 1}, b);
  CHECK(cvi::bws(two.memberships, blobs, two.model.centers, 2.0) >
        cvi::bws(three.memberships, blobs, three.model.centers, 2.0));

  Matrix same = Matrix::Ones(4, 2);
  CHECK_THROWS_AS(cvi::bws(columns(4, {0.5, 0.5}), DataSet(same), Matrix::Ones(2, 2), 2.0),
                  UndefinedIndexError);
}

TEST_CASE("evaluate_all definedness and shape") {
  const DataSet x = testing::two_blobs();
  const auto single = evaluate_all(columns(20, {1.0}), x, x.grand_mean(), 2.0);
  REQUIRE(single.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) CHECK(single[i].name == kAllIndexes[i]);
  CHECK(value_of(single, IndexName::PC).has_value());
  CHECK(value_of(single, IndexName::FHV).has_value());
  CHECK(value_of(single, IndexName::FS).has_value());
  CHECK(value_of(single, IndexName::BWS).has_value());
  CHECK_FALSE(value_of(single, IndexName::NPC).has_value());
  CHECK_FALSE(value_of(single, IndexName::XB).has_value());
  CHECK_FALSE(value_of(single, IndexName::BH).has_value());
  for (const auto& v : single) {
    if (!v.value) CHECK_FALSE(v.reason.empty());
  }

  std::vector<int> assign(20, 0);
  std::fill(assign.begin() + 10, assign.end(), 1);
  Matrix means(2, 2);
  means.row(0) = x.points().topRows(10).colwise().mean();
  means.row(1) = x.points().bottomRows(10).colwise().mean();
  const auto two = evaluate_all(crisp(assign, 2), x, means, 2.0);
  CHECK(value_of(two, IndexName::PC) == 1.0);
  CHECK(value_of(two, IndexName::NPC) == 1.0);
  for (const auto& v : two) CHECK(v.value.has_value());
}

TEST_CASE("library indexes agree with the naive oracle") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 60; ++t) {
    const int n = 5 + t % 16, c = 2 + t % 3, d = 1 + t % 3;
    const DataSet x = testing::random_dataset(rng, n, d);
    const MembershipMatrix u = testing::random_memberships(rng, c, n);
    const Matrix v = testing::random_centers(rng, c, d);
    const double m = 1.5 + 0.25 * (t % 4);
    const auto gu = grid(u.values()), gx = grid(x.points()), gv = grid(v);
    CHECK(testing::rel_close(cvi::pc(u), naive::pc(gu), 1e-10));
    CHECK(testing::rel_close(cvi::npc(u), naive::npc(gu), 1e-10));
    CHECK(testing::rel_close(cvi::fhv(u, x, v, m), naive::fhv(gu, gx, gv, m), 1e-10));
    // FS is a difference of two positive sums; measure error against their size
    const double fs_scale = naive::j_m(gu, gx, gv, m);
    CHECK(std::abs(cvi::fs(u, x, v, m) - naive::fs(gu, gx, gv, m)) <= 1e-10 * fs_scale);
    CHECK(testing::rel_close(cvi::xb(u, x, v, m), naive::xb(gu, gx, gv, m), 1e-10));
    CHECK(testing::rel_close(cvi::bh(u, x, v, m), naive::bh(gu, gx, gv, m), 1e-10));
    CHECK(testing::rel_close(cvi::bws(u, x, v, m), naive::bws(gu, gx, gv, m), 1e-10));
  }
}

TEST_CASE("uniform scaling laws") {
  std::mt19937_64 rng(77);
  const int d = 3;
  const DataSet x = testing::random_dataset(rng, 18, d);
  const MembershipMatrix u = testing::random_memberships(rng, 3, 18);
  const Matrix v = testing::random_centers(rng, 3, d);
  for (double s : {0.5, 3.0}) {
    const DataSet xs(x.points() * s);
    const Matrix vs = v * s;
    CHECK(testing::rel_close(cvi::xb(u, xs, vs, 2.0), cvi::xb(u, x, v, 2.0), 1e-12));
    CHECK(testing::rel_close(cvi::bws(u, xs, vs, 2.0), cvi::bws(u, x, v, 2.0), 1e-12));
    CHECK(testing::rel_close(cvi::fs(u, xs, vs, 2.0), s * s * cvi::fs(u, x, v, 2.0), 1e-10));
    CHECK(testing::rel_close(cvi::bh_compactness(u, xs, vs, 2.0),
                             s * s * cvi::bh_compactness(u, x, v, 2.0), 1e-12));
    CHECK(testing::rel_close(cvi::fhv(u, xs, vs, 2.0), std::pow(s, d) * cvi::fhv(u, x, v, 2.0),
                             1e-10));
  }
}

TEST_CASE("relabeling clusters leaves every index bit-identical") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const int c = 2 + t % 3;
    const DataSet x = testing::random_dataset(rng, 14, 2);
    const MembershipMatrix u = testing::random_memberships(rng, c, 14);
    const Matrix v = testing::random_centers(rng, c, 2);
    std::vector<int> perm(static_cast<std::size_t>(c));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd pu(c, 14);
    Matrix pv(c, 2);
    for (int i = 0; i < c; ++i) {
      pu.row(i) = u.values().row(perm[static_cast<std::size_t>(i)]);
      pv.row(i) = v.row(perm[static_cast<std::size_t>(i)]);
    }
    const auto a = evaluate_all(u, x, v, 2.0);
    const auto b = evaluate_all(MembershipMatrix(pu), x, pv, 2.0);
    for (std::size_t i = 0; i < 7; ++i) CHECK(a[i].value == b[i].value);
  }
}

TEST_CASE("PC and NPC depend only on the memberships") {
  std::mt19937_64 rng(9);
  const MembershipMatrix u = testing::random_memberships(rng, 3, 10);
  const auto a = evaluate_all(u, testing::random_dataset(rng, 10, 2), testing::random_centers(rng, 3, 2), 2.0);
  const auto b = evaluate_all(u, testing::random_dataset(rng, 10, 4), testing::random_centers(rng, 3, 4), 3.0);
  CHECK(a[0].value == b[0].value);
  CHECK(a[1].value == b[1].value);
}

TEST_CASE("index ranges on random partitions") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 30; ++t) {
    const int c = 2 + t % 4;
    const DataSet x = testing::random_dataset(rng, 20, 2);
    const MembershipMatrix u = testing::random_memberships(rng, c, 20);
    const Matrix v = testing::random_centers(rng, c, 2);
    const double pc = cvi::pc(u);
    CHECK(pc >= 1.0 / c - 1e-12);
    CHECK(pc <= 1.0 + 1e-12);
    const double npc = cvi::npc(u);
    CHECK(npc >= -1e-12);
    CHECK(npc <= 1.0 + 1e-12);
    CHECK(cvi::fhv(u, x, v, 2.0) >= 0.0);
    CHECK(cvi::xb(u, x, v, 2.0) >= 0.0);
    CHECK(cvi::bh(u, x, v, 2.0) >= 0.0);
    CHECK(cvi::bws(u, x, v, 2.0) >= 0.0);
  }
}
