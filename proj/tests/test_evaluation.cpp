#include <doctest.h>

#include <set>

#include "oracles/oracles.hpp"
#include "support/support.hpp"
#include "vocalscreen/error.hpp"
#include "vocalscreen/evaluation.hpp"
#include "vocalscreen/model.hpp"

using namespace vocalscreen;

namespace {

constexpr Label D = Label::Depression;
constexpr Label C = Label::Control;

// Two well separated clusters: depression around +3, control around -3.
void separable(testing::Gen& g, std::size_t n_dep, std::size_t n_ctl, std::vector<FeatureValues>& x,
               std::vector<Label>& y) {
  for (std::size_t i = 0; i < n_dep + n_ctl; ++i) {
    const bool dep = i < n_dep;
    FeatureValues v;
    for (double& e : v) e = (dep ? 3.0 : -3.0) + g.uniform(-0.5, 0.5);
    x.push_back(v);
    y.push_back(dep ? D : C);
  }
}

}  // namespace

TEST_CASE("confusion examples") {
  std::vector<Label> truth{D, D, D, D, C, C, C, C, C, C};
  CHECK(confusion(truth, truth) == ConfusionMatrix{4, 0, 0, 6});
  const std::vector<Label> none(3, C), three_pos(3, D);
  CHECK(confusion(none, three_pos).fn == 3);
  CHECK_THROWS_AS(confusion(none, truth), LengthMismatch);
  CHECK_THROWS_AS(confusion(std::vector<Label>{}, std::vector<Label>{}), EmptyInput);
}

TEST_CASE("precision_recall_f1 examples") {
  const auto s = precision_recall_f1({93, 2, 7, 0});
  CHECK(s.precision == 93.0 / 95.0);
  CHECK(s.precision == doctest::Approx(0.9789).epsilon(1e-4));
  CHECK(s.recall == 0.93);
  CHECK(s.f1 == doctest::Approx(0.9538).epsilon(1e-4));
  // The reported 0.96 is not the harmonic mean of 0.98 and 0.93.
  CHECK(2 * 0.98 * 0.93 / (0.98 + 0.93) == doctest::Approx(0.9543).epsilon(1e-4));

  const auto perfect = precision_recall_f1({5, 0, 0, 5});
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);
  CHECK(perfect.accuracy == 1.0);

  CHECK(precision_recall_f1({0, 0, 3, 4}).precision == 0.0);
  const auto empty = precision_recall_f1({0, 0, 0, 0});
  CHECK(empty.precision == 0.0);
  CHECK(empty.recall == 0.0);
  CHECK(empty.f1 == 0.0);
  CHECK(empty.accuracy == 0.0);
}

TEST_CASE("property: metric identities") {
  testing::for_all(300, 50, [](testing::Gen& g, std::size_t) {
    const ConfusionMatrix cm{g.index(50), g.index(50), g.index(50), g.index(50)};
    const auto s = precision_recall_f1(cm);
    const std::int64_t tp = cm.tp, fp = cm.fp, fn = cm.fn, tn = cm.tn;
    CHECK(oracle::equals(oracle::ratio(tp + tn, tp + fp + fn + tn), s.accuracy));
    CHECK(oracle::equals(oracle::ratio(tp, tp + fp), s.precision));
    CHECK(oracle::equals(oracle::ratio(tp, tp + fn), s.recall));
    CHECK(oracle::equals(oracle::ratio(2 * tp, 2 * tp + fp + fn), s.f1));
    if (s.precision > 0 && s.recall > 0) {
      CHECK(s.f1 >= std::min(s.precision, s.recall) - 1e-15);
      CHECK(s.f1 <= std::max(s.precision, s.recall) + 1e-15);
    }
  });
}

TEST_CASE("stratified_folds partition and stratify") {
  testing::for_all(20, 51, [](testing::Gen& g, std::size_t) {
    const std::size_t folds = 2 + g.index(5);
    std::vector<Label> y;
    const std::size_t nd = folds + g.index(40), nc = folds + g.index(40);
    for (std::size_t i = 0; i < nd + nc; ++i) y.push_back(g.coin() ? D : C);
    std::size_t dep = 0;
    for (auto l : y) dep += l == D;
    if (dep < folds || y.size() - dep < folds) return;
    const auto f = stratified_folds(y, folds, g.bits());
    REQUIRE(f.size() == y.size());
    std::vector<std::size_t> per_dep(folds), per_ctl(folds);
    for (std::size_t i = 0; i < y.size(); ++i) {
      REQUIRE(f[i] < folds);
      (y[i] == D ? per_dep : per_ctl)[f[i]]++;
    }
    for (std::size_t k = 0; k < folds; ++k) {
      CHECK(per_dep[k] + 1 >= *std::max_element(per_dep.begin(), per_dep.end()));
      CHECK(per_ctl[k] + 1 >= *std::max_element(per_ctl.begin(), per_ctl.end()));
    }
  });
  CHECK_THROWS_AS(stratified_folds(std::vector<Label>{D, D, C}, 2, 1), TooFewSamplesPerClass);
  CHECK_THROWS_AS(stratified_folds(std::vector<Label>{D, D, C, C}, 1, 1), InvalidArgument);
}

TEST_CASE("cross_validate: majority-class candidate on 60/40 data") {
  // k = n_train - 1 style: a k large enough that the vote is always the
  // training majority. With 60 control / 40 depression and 5 stratified folds
  // every training set is 48/32, so k=79 votes control everywhere.
  testing::Gen g(52);
  std::vector<FeatureValues> x;
  std::vector<Label> y;
  separable(g, 40, 60, x, y);
  const auto scores = cross_validate({79, 2.0, true}, x, y, 5, 1);
  REQUIRE(scores.size() == 5);
  for (double s : scores) CHECK(s == 12.0 / 20.0);
}

TEST_CASE("cross_validate: determinism and duplicates with k=1") {
  testing::Gen g(53);
  std::vector<FeatureValues> x;
  std::vector<Label> y;
  separable(g, 25, 35, x, y);
  const auto a = cross_validate({1, 2.0, true}, x, y, 5, 9);
  const auto b = cross_validate({1, 2.0, true}, x, y, 5, 9);
  CHECK(a == b);

  auto x2 = x;
  auto y2 = y;
  x2.insert(x2.end(), x.begin(), x.end());
  y2.insert(y2.end(), y.begin(), y.end());
  auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
  CHECK(mean(cross_validate({1, 2.0, true}, x2, y2, 5, 9)) == mean(a));
  CHECK(mean(a) == 1.0);
}

TEST_CASE("cross_validate: every row is held out exactly once") {
  testing::Gen g(54);
  std::vector<FeatureValues> x;
  std::vector<Label> y;
  separable(g, 13, 17, x, y);
  const auto f = stratified_folds(y, 5, 3);
  std::vector<std::size_t> sizes(5);
  for (auto k : f) sizes[k]++;
  CHECK(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == x.size());
  for (auto s : sizes) CHECK(s >= 5);
}

TEST_CASE("grid_select examples") {
  testing::Gen g(55);
  std::vector<FeatureValues> x;
  std::vector<Label> y;
  separable(g, 20, 20, x, y);

  const std::vector<Candidate> single{{5, 1.0, false}};
  const auto r1 = grid_select(single, x, y, 5, 1);
  CHECK(r1.best_index == 0);
  CHECK(r1.generations == std::vector<double>{r1.candidates[0].mean_score});

  const std::vector<Candidate> pair{{5, 2.0, true}, {3, 2.0, true}};
  const auto r2 = grid_select(pair, x, y, 5, 1);
  REQUIRE(r2.candidates[0].mean_score == r2.candidates[1].mean_score);
  CHECK(r2.best().candidate.k == 3);

  const auto grid = default_grid();
  CHECK(grid.size() == 16);
  CHECK(grid.front() == Candidate{1, 1.0, true});
  CHECK(grid[1] == Candidate{1, 1.0, false});
  CHECK(grid.back() == Candidate{7, 2.0, false});
  const auto serial = grid_select(grid, x, y, 5, 7, 1);
  const auto threaded = grid_select(grid, x, y, 5, 7, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(serial.candidates[i].fold_scores == threaded.candidates[i].fold_scores);
  }
  CHECK(std::is_sorted(serial.generations.begin(), serial.generations.end()));
  CHECK_THROWS(grid_select(std::vector<Candidate>{}, x, y, 5, 1));
  CHECK(Candidate{3, 2.0, true}.describe() == "StandardScaler -> KNeighborsClassifier(n_neighbors=3, p=2)");
  CHECK(Candidate{3, 1.0, false}.describe() == "KNeighborsClassifier(n_neighbors=3, p=1)");
}

TEST_CASE("pick_best tie rules and affine invariance") {
  auto result = [](std::size_t k, double p, bool s, double mean) {
    CandidateResult r;
    r.candidate = {k, p, s};
    r.mean_score = mean;
    return r;
  };
  std::vector<CandidateResult> rs{result(5, 1, true, 0.9), result(3, 2, false, 0.9), result(3, 2, true, 0.9),
                                  result(3, 1, false, 0.9), result(7, 1, true, 0.8)};
  CHECK(pick_best(rs) == 3);  // k=3, p=1
  rs[3].mean_score = 0.85;
  CHECK(pick_best(rs) == 2);  // k=3, p=2, scaled beats unscaled

  testing::for_all(50, 56, [](testing::Gen& g, std::size_t) {
    std::vector<CandidateResult> cs;
    for (const auto& c : default_grid()) {
      CandidateResult r;
      r.candidate = c;
      r.mean_score = static_cast<double>(g.integer(0, 4)) / 4.0;  // exact ties are common
      cs.push_back(r);
    }
    const auto best = pick_best(cs);
    const double a = std::pow(2.0, g.integer(-3, 3)), b = static_cast<double>(g.integer(-4, 4));
    for (auto& r : cs) r.mean_score = a * r.mean_score + b;
    CHECK(pick_best(cs) == best);
  });
}

TEST_CASE("two_sample_t examples") {
  const std::vector<double> a{1, 2, 3}, b{2, 3, 4};
  const auto same = two_sample_t(a, a);
  CHECK(same.t == 0.0);
  CHECK(same.df == 4);
  // By hand: means 2 and 3, both sample variances 1, pooled variance 1,
  // standard error sqrt(2/3), so t = -1 / sqrt(2/3).
  CHECK(two_sample_t(a, b).t == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-12));
  CHECK(std::abs(two_sample_t(a, b).t - oracle::pooled_t(a, b)) <= 1e-12);

  const std::vector<double> big_a(1632, 0.0), big_b(2337, 1.0);
  auto aa = big_a;
  aa[0] = 1.0;
  CHECK(two_sample_t(aa, big_b).df == 3967);

  CHECK_THROWS_AS(two_sample_t(std::vector<double>{1.0}, b), GroupTooSmall);
}

TEST_CASE("property: t is antisymmetric and matches the pooled oracle") {
  testing::for_all(100, 57, [](testing::Gen& g, std::size_t) {
    const auto a = g.vec(2 + g.index(30), -10, 10);
    const auto b = g.vec(2 + g.index(30), -5, 15);
    const auto ab = two_sample_t(a, b), ba = two_sample_t(b, a);
    CHECK(ab.t == -ba.t);
    CHECK(ab.df == ba.df);
    CHECK(ab.df == a.size() + b.size() - 2);
    CHECK(std::abs(ab.t - oracle::pooled_t(a, b)) <= 1e-9 * std::max(1.0, std::abs(ab.t)));
  });
}

TEST_CASE("describe and descriptive_stats") {
  const auto d = describe(std::vector<double>{1, 2, 3});
  CHECK(d.mean == 2.0);
  CHECK(d.sd == 1.0);
  CHECK_FALSE(d.degenerate);
  const auto one = describe(std::vector<double>{4.0});
  CHECK(one.sd == 0.0);
  CHECK(one.degenerate);
  CHECK_THROWS_AS(describe(std::vector<double>{}), EmptyInput);

  testing::Gen g(58);
  std::vector<FeatureValues> x;
  std::vector<Label> y;
  separable(g, 6, 8, x, y);
  const auto rows = descriptive_stats(x, y);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].name == "MFCC Mean");
  CHECK(rows[1].name == "Spectral Centroid");
  CHECK(rows[2].name == "Spectral Complexity");
  CHECK(rows[3].name == "Zero Crossing Rate");
  for (const auto& r : rows) {
    CHECK(r.depression.n == 6);
    CHECK(r.control.n == 8);
    CHECK(r.has_t);
    CHECK(r.t.df == 12);
  }
  double mfcc_mean = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < 13; ++j) m += x[i][j];
    mfcc_mean += m / 13.0;
  }
  CHECK(rows[0].depression.mean == doctest::Approx(mfcc_mean / 6.0).epsilon(1e-12));
  CHECK(rows[3].control.mean == doctest::Approx(describe([&] {
                                  std::vector<double> v;
                                  for (std::size_t i = 6; i < 14; ++i) v.push_back(x[i][15]);
                                  return v;
                                }()).mean));
  const auto text = render_stats_table(rows);
  CHECK(text.find("Zero Crossing Rate") != std::string::npos);
  CHECK(to_json(rows).size() == 4);
  CHECK_THROWS_AS(descriptive_stats(std::vector<FeatureValues>(2), std::vector<Label>{D, D}), EmptyInput);
}
