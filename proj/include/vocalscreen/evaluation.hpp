#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vocalscreen/dataset.hpp"
#include "vocalscreen/dsp_features.hpp"

namespace vocalscreen {

// Depression is the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Throws LengthMismatch or EmptyInput.
ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> truth);

struct ScoreSummary {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
};

// Every 0/0 ratio is reported as 0. F1 is evaluated as 2tp / (2tp + fp + fn),
// the harmonic mean of precision and recall in a single rounding step.
ScoreSummary precision_recall_f1(const ConfusionMatrix& cm);

// One point of the model-selection grid.
struct Candidate {
  std::size_t k = 3;
  double p = 2.0;
  bool scaled = true;

  std::string describe() const;
  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// {k in 1,3,5,7} x {p in 1,2} x {scaler on, off}, k outermost.
std::vector<Candidate> default_grid();

// Stratified fold assignment: each class is shuffled with SplitMix64(seed)
// (depression rows first, then control rows, sharing one stream) and dealt
// round-robin to folds 0..folds-1. Returns the fold of every row.
// Throws InvalidArgument (folds < 2) or TooFewSamplesPerClass.
std::vector<std::size_t> stratified_folds(std::span<const Label> labels, std::size_t folds, std::uint64_t seed);

// Held-out accuracy per fold, fitting scaler + KNN on the remaining folds.
std::vector<double> cross_validate(const Candidate& candidate, std::span<const FeatureValues> features,
                                   std::span<const Label> labels, std::size_t folds, std::uint64_t seed);

struct CandidateResult {
  Candidate candidate;
  std::vector<double> fold_scores;
  double mean_score = 0.0;
};

struct SelectionReport {
  std::vector<CandidateResult> candidates;  // grid order
  std::size_t best_index = 0;
  std::vector<double> generations;  // running best mean over grid order

  const CandidateResult& best() const { return candidates.at(best_index); }
};

// Index of the winner: highest mean, then fewer neighbours, then lower p, then scaled.
std::size_t pick_best(std::span<const CandidateResult> results);

// Cross-validates every candidate (concurrently when jobs > 1; results keep grid order).
SelectionReport grid_select(std::span<const Candidate> space, std::span<const FeatureValues> features,
                            std::span<const Label> labels, std::size_t folds, std::uint64_t seed,
                            std::size_t jobs = 1);

struct TTestResult {
  double t = 0.0;
  std::size_t df = 0;
};

// Pooled-variance Student t of mean(a) - mean(b). Throws GroupTooSmall.
TTestResult two_sample_t(std::span<const double> group_a, std::span<const double> group_b);

struct GroupStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;        // sample SD (n - 1); 0 when n == 1
  bool degenerate = false;  // n == 1, SD undefined
};

// Throws EmptyInput.
GroupStats describe(std::span<const double> values);

struct FeatureRowStats {
  std::string name;
  GroupStats depression;
  GroupStats control;
  bool has_t = false;  // both groups have n >= 2
  TTestResult t;
};

// The four reported rows: "MFCC Mean" (per-segment mean of the 13 MFCCs),
// "Spectral Centroid", "Spectral Complexity", "Zero Crossing Rate".
// Throws EmptyInput when either group is empty.
std::vector<FeatureRowStats> descriptive_stats(std::span<const FeatureValues> features,
                                               std::span<const Label> labels);

// Plain-text tables.
std::string render_stats_table(const std::vector<FeatureRowStats>& rows);
std::string render_metrics_table(const ScoreSummary& scores, const ConfusionMatrix& cm);

nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const ScoreSummary& s);
nlohmann::json to_json(const SelectionReport& report);
nlohmann::json to_json(const std::vector<FeatureRowStats>& rows);

}  // namespace vocalscreen
