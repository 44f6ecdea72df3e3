#pragma once

#include "spotgeom/geometry.hpp"
#include "spotgeom/labelgen.hpp"
#include "spotgeom/lexicon.hpp"

#include <span>
#include <string>
#include <vector>

namespace spotgeom {

struct DetectionResult {
  Polygon polygon;
  std::string transcription;  // empty for detection-only results
  double score = 1.0;
};

struct Match {
  std::size_t gt = 0;
  std::size_t det = 0;
  double iou = 0.0;

  bool operator==(const Match&) const = default;
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::vector<Match> matches;
  std::size_t num_gt_care = 0;       // recall denominator
  std::size_t num_gt_ignored = 0;
  std::size_t num_det_kept = 0;      // precision denominator
  std::size_t num_det_ignored = 0;   // discarded for covering an ignored GT
};

struct MatchOptions {
  double iou_threshold = 0.5;
  /// A detection whose area share inside one ignored GT exceeds this is discarded.
  double ignore_overlap = 0.5;
};

struct TranscriptionOptions {
  bool case_insensitive = true;
  bool strip_punctuation = true;
  /// Only alphanumeric GT words of length >= 3 are scored; others are ignored.
  bool word_spotting = false;
};

/// Fills precision/recall/F from the counts and match list.
void finalize(EvalReport& report);

/// Greedy one-to-one IoU matching: detections in descending score order
/// take the unmatched cared-for GT of highest IoU at or above the threshold.
EvalReport match_detections(std::span<const TextInstance> gts, std::span<const DetectionResult> dets,
                            const MatchOptions& options = {});

/// Micro-averaged metrics over per-image reports.
EvalReport detection_metrics(std::span<const EvalReport> reports);

/// Transcription normalization used by end-to-end scoring.
std::string normalize_transcription(std::string_view s, const TranscriptionOptions& options = {});

/// True for words kept by word spotting.
bool is_spotting_word(std::string_view s);

/// Detection matching followed by a transcription check on each match.
/// With a lexicon, predictions are corrected before comparison.
EvalReport e2e_metrics(std::span<const TextInstance> gts, std::span<const DetectionResult> dets,
                       const MatchOptions& options = {}, const Lexicon* lexicon = nullptr,
                       const TranscriptionOptions& text = {});

}  // namespace spotgeom
