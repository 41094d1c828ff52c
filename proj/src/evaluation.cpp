#include "vocalscreen/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "vocalscreen/error.hpp"
#include "vocalscreen/model.hpp"
#include "vocalscreen/parallel.hpp"
#include "vocalscreen/random.hpp"

namespace vocalscreen {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> truth) {
  if (predictions.size() != truth.size()) {
    throw LengthMismatch("confusion: " + std::to_string(predictions.size()) + " predictions vs " +
                         std::to_string(truth.size()) + " labels");
  }
  if (truth.empty()) throw EmptyInput("confusion: nothing to score");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool pred_pos = predictions[i] == Label::Depression;
    const bool true_pos = truth[i] == Label::Depression;
    if (pred_pos && true_pos) ++cm.tp;
    else if (pred_pos) ++cm.fp;
    else if (true_pos) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

ScoreSummary precision_recall_f1(const ConfusionMatrix& cm) {
  ScoreSummary s;
  s.precision = ratio(cm.tp, cm.tp + cm.fp);
  s.recall = ratio(cm.tp, cm.tp + cm.fn);
  s.f1 = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn);
  s.accuracy = ratio(cm.tp + cm.tn, cm.total());
  return s;
}

std::string Candidate::describe() const {
  std::string out = scaled ? "StandardScaler -> " : "";
  out += "KNeighborsClassifier(n_neighbors=" + std::to_string(k) + ", p=" + fixed(p, p == std::floor(p) ? 0 : 3) +
         ")";
  return out;
}

std::vector<Candidate> default_grid() {
  std::vector<Candidate> grid;
  for (std::size_t k : {1, 3, 5, 7}) {
    for (double p : {1.0, 2.0}) {
      for (bool scaled : {true, false}) grid.push_back({k, p, scaled});
    }
  }
  return grid;
}

std::vector<std::size_t> stratified_folds(std::span<const Label> labels, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  std::vector<std::size_t> positive, negative;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == Label::Depression ? positive : negative).push_back(i);
  }
  if (positive.size() < folds || negative.size() < folds) {
    throw TooFewSamplesPerClass("stratified " + std::to_string(folds) + "-fold CV needs at least " +
                                std::to_string(folds) + " rows per class (have depression=" +
                                std::to_string(positive.size()) + ", control=" + std::to_string(negative.size()) +
                                ")");
  }
  SplitMix64 rng(seed);
  std::vector<std::size_t> fold_of(labels.size(), 0);
  for (auto* cls : {&positive, &negative}) {
    shuffle(std::span<std::size_t>(*cls), rng);
    for (std::size_t j = 0; j < cls->size(); ++j) fold_of[(*cls)[j]] = j % folds;
  }
  return fold_of;
}

std::vector<double> cross_validate(const Candidate& candidate, std::span<const FeatureValues> features,
                                   std::span<const Label> labels, std::size_t folds, std::uint64_t seed) {
  if (features.size() != labels.size()) throw LengthMismatch("cross_validate: features and labels differ in length");
  const auto fold_of = stratified_folds(labels, folds, seed);
  std::vector<double> scores;
  scores.reserve(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<FeatureValues> train_x;
    std::vector<Label> train_y;
    std::vector<std::size_t> held_out;
    for (std::size_t i = 0; i < features.size(); ++i) {
      if (fold_of[i] == f) {
        held_out.push_back(i);
      } else {
        train_x.push_back(features[i]);
        train_y.push_back(labels[i]);
      }
    }
    const ScalerParams scaler = candidate.scaled ? fit_scaler(train_x) : ScalerParams::identity();
    const KnnModel model = knn_fit(train_x, train_y, candidate.k, candidate.p, scaler, candidate.scaled);
    std::size_t correct = 0;
    for (std::size_t i : held_out) correct += knn_predict(model, features[i]).label == labels[i] ? 1 : 0;
    scores.push_back(static_cast<double>(correct) / static_cast<double>(held_out.size()));
  }
  return scores;
}

std::size_t pick_best(std::span<const CandidateResult> results) {
  if (results.empty()) throw EmptyInput("no candidates to choose from");
  auto better = [](const CandidateResult& a, const CandidateResult& b) {
    if (a.mean_score != b.mean_score) return a.mean_score > b.mean_score;
    if (a.candidate.k != b.candidate.k) return a.candidate.k < b.candidate.k;
    if (a.candidate.p != b.candidate.p) return a.candidate.p < b.candidate.p;
    return a.candidate.scaled && !b.candidate.scaled;
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (better(results[i], results[best])) best = i;
  }
  return best;
}

SelectionReport grid_select(std::span<const Candidate> space, std::span<const FeatureValues> features,
                            std::span<const Label> labels, std::size_t folds, std::uint64_t seed,
                            std::size_t jobs) {
  if (space.empty()) throw EmptyInput("grid_select: empty candidate space");
  SelectionReport report;
  report.candidates.resize(space.size());
  parallel_for(space.size(), jobs, [&](std::size_t i) {
    auto& r = report.candidates[i];
    r.candidate = space[i];
    r.fold_scores = cross_validate(space[i], features, labels, folds, seed);
    double sum = 0.0;
    for (double s : r.fold_scores) sum += s;
    r.mean_score = sum / static_cast<double>(r.fold_scores.size());
  });
  report.best_index = pick_best(report.candidates);
  double running = -1.0;
  for (const auto& r : report.candidates) {
    running = std::max(running, r.mean_score);
    report.generations.push_back(running);
  }
  return report;
}

TTestResult two_sample_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw GroupTooSmall("t-test needs at least two values per group");
  const GroupStats sa = describe(a);
  const GroupStats sb = describe(b);
  TTestResult out;
  out.df = a.size() + b.size() - 2;
  const double pooled = ((static_cast<double>(sa.n) - 1.0) * sa.sd * sa.sd +
                         (static_cast<double>(sb.n) - 1.0) * sb.sd * sb.sd) /
                        static_cast<double>(out.df);
  const double diff = sa.mean - sb.mean;
  const double se = std::sqrt(pooled * (1.0 / static_cast<double>(sa.n) + 1.0 / static_cast<double>(sb.n)));
  if (diff == 0.0) {
    out.t = 0.0;
  } else {
    out.t = diff / se;  // +-inf when both groups are constant but differ
  }
  return out;
}

GroupStats describe(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("describe: no values");
  GroupStats s;
  s.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n == 1) {
    s.degenerate = true;
    return s;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  return s;
}

std::vector<FeatureRowStats> descriptive_stats(std::span<const FeatureValues> features,
                                               std::span<const Label> labels) {
  if (features.size() != labels.size()) throw LengthMismatch("descriptive_stats: features and labels differ");
  struct Column {
    const char* name;
    double (*value)(const FeatureValues&);
  };
  static constexpr Column kColumns[] = {
      {"MFCC Mean",
       [](const FeatureValues& v) {
         double s = 0.0;
         for (std::size_t i = 0; i < kMfccCount; ++i) s += v[i];
         return s / static_cast<double>(kMfccCount);
       }},
      {"Spectral Centroid", [](const FeatureValues& v) { return v[kCentroidIndex]; }},
      {"Spectral Complexity", [](const FeatureValues& v) { return v[kComplexityIndex]; }},
      {"Zero Crossing Rate", [](const FeatureValues& v) { return v[kZcrIndex]; }},
  };

  std::vector<FeatureRowStats> rows;
  for (const auto& col : kColumns) {
    std::vector<double> dep, ctl;
    for (std::size_t i = 0; i < features.size(); ++i) {
      (labels[i] == Label::Depression ? dep : ctl).push_back(col.value(features[i]));
    }
    if (dep.empty() || ctl.empty()) throw EmptyInput("descriptive_stats: both groups need at least one row");
    FeatureRowStats row;
    row.name = col.name;
    row.depression = describe(dep);
    row.control = describe(ctl);
    if (dep.size() >= 2 && ctl.size() >= 2) {
      row.has_t = true;
      row.t = two_sample_t(dep, ctl);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_stats_table(const std::vector<FeatureRowStats>& rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-20s %-6s %14s %14s\n", "Feature", "Metric", "Depression", "No depression");
  out << line;
  out << std::string(57, '-') << '\n';
  auto cell = [](const GroupStats& g, bool sd) {
    if (sd && g.degenerate) return std::string("n/a (n=1)");
    return fixed(sd ? g.sd : g.mean, 4);
  };
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-20s %-6s %14s %14s\n", r.name.c_str(), "Mean",
                  cell(r.depression, false).c_str(), cell(r.control, false).c_str());
    out << line;
    std::snprintf(line, sizeof(line), "%-20s %-6s %14s %14s\n", "", "SD", cell(r.depression, true).c_str(),
                  cell(r.control, true).c_str());
    out << line;
  }
  out << '\n' << "Pooled two-sample t-tests (depression vs no depression):\n";
  for (const auto& r : rows) {
    if (r.has_t) {
      out << "  " << r.name << ": t(" << r.t.df << ")=" << fixed(r.t.t, 3) << '\n';
    } else {
      out << "  " << r.name << ": not computed (a group has fewer than 2 rows)\n";
    }
  }
  return out.str();
}

std::string render_metrics_table(const ScoreSummary& s, const ConfusionMatrix& cm) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-10s %12s\n", "Metric", "Depression");
  out << line << std::string(23, '-') << '\n';
  for (const auto& [name, value] : {std::pair{"Precision", s.precision}, std::pair{"Recall", s.recall},
                                    std::pair{"F1-Score", s.f1}, std::pair{"Accuracy", s.accuracy}}) {
    std::snprintf(line, sizeof(line), "%-10s %12s\n", name, fixed(value, 4).c_str());
    out << line;
  }
  out << "\nConfusion matrix (positive = depression): tp=" << cm.tp << " fp=" << cm.fp << " fn=" << cm.fn
      << " tn=" << cm.tn << '\n';
  return out.str();
}

nlohmann::json to_json(const ConfusionMatrix& cm) {
  return nlohmann::json{{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

nlohmann::json to_json(const ScoreSummary& s) {
  return nlohmann::json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"accuracy", s.accuracy}};
}

nlohmann::json to_json(const SelectionReport& report) {
  auto candidate_json = [](const CandidateResult& r) {
    return nlohmann::json{{"pipeline", r.candidate.describe()},
                          {"k", r.candidate.k},
                          {"p", r.candidate.p},
                          {"scaler", r.candidate.scaled},
                          {"fold_scores", r.fold_scores},
                          {"mean_score", r.mean_score}};
  };
  nlohmann::json candidates = nlohmann::json::array();
  for (const auto& r : report.candidates) candidates.push_back(candidate_json(r));
  return nlohmann::json{{"candidates", candidates},
                        {"best", candidate_json(report.best())},
                        {"best_index", report.best_index},
                        {"generations", report.generations}};
}

nlohmann::json to_json(const std::vector<FeatureRowStats>& rows) {
  auto group = [](const GroupStats& g) {
    return nlohmann::json{{"n", g.n}, {"mean", g.mean}, {"sd", g.sd}, {"degenerate", g.degenerate}};
  };
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row{{"feature", r.name}, {"depression", group(r.depression)}, {"control", group(r.control)}};
    if (r.has_t) {
      row["t_test"] = {{"t", r.t.t}, {"df", r.t.df}, {"variance", "pooled"}};
    } else {
      row["t_test"] = nullptr;
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace vocalscreen
