#include "spotgeom/eval.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace spotgeom {

void finalize(EvalReport& report) {
  const double hits = static_cast<double>(report.matches.size());
  report.precision = report.num_det_kept ? hits / static_cast<double>(report.num_det_kept) : 0.0;
  report.recall = report.num_gt_care ? hits / static_cast<double>(report.num_gt_care) : 0.0;
  const double sum = report.precision + report.recall;
  report.f_measure = sum > 0.0 ? 2.0 * report.precision * report.recall / sum : 0.0;
}

EvalReport match_detections(std::span<const TextInstance> gts, std::span<const DetectionResult> dets,
                            const MatchOptions& options) {
  EvalReport report;
  std::vector<bool> det_kept(dets.size(), true);
  for (std::size_t d = 0; d < dets.size(); ++d) {
    const double det_area = area(dets[d].polygon);
    for (const TextInstance& gt : gts) {
      if (!gt.ignore) continue;
      if (intersection_area(dets[d].polygon, gt.polygon) / det_area > options.ignore_overlap) {
        det_kept[d] = false;
        break;
      }
    }
  }
  for (const TextInstance& gt : gts) (gt.ignore ? report.num_gt_ignored : report.num_gt_care)++;
  for (bool kept : det_kept) (kept ? report.num_det_kept : report.num_det_ignored)++;

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });

  std::vector<bool> gt_taken(gts.size(), false);
  for (std::size_t d : order) {
    if (!det_kept[d]) continue;
    double best_iou = -1.0;
    std::size_t best_gt = gts.size();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gts[g].ignore || gt_taken[g]) continue;
      const double iou = polygon_iou(gts[g].polygon, dets[d].polygon);
      if (iou > best_iou) {
        best_iou = iou;
        best_gt = g;
      }
    }
    if (best_gt < gts.size() && best_iou >= options.iou_threshold) {
      gt_taken[best_gt] = true;
      report.matches.push_back({best_gt, d, best_iou});
    }
  }
  finalize(report);
  return report;
}

EvalReport detection_metrics(std::span<const EvalReport> reports) {
  // Match indices stay per-image; only their count enters the metrics.
  EvalReport total;
  for (const EvalReport& r : reports) {
    total.matches.insert(total.matches.end(), r.matches.begin(), r.matches.end());
    total.num_gt_care += r.num_gt_care;
    total.num_gt_ignored += r.num_gt_ignored;
    total.num_det_kept += r.num_det_kept;
    total.num_det_ignored += r.num_det_ignored;
  }
  finalize(total);
  return total;
}

std::string normalize_transcription(std::string_view s, const TranscriptionOptions& options) {
  if (options.strip_punctuation) {
    auto is_punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && is_punct(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_punct(s.back())) s.remove_suffix(1);
  }
  return options.case_insensitive ? to_lower_ascii(s) : std::string(s);
}

bool is_spotting_word(std::string_view s) {
  if (s.size() < 3) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; });
}

EvalReport e2e_metrics(std::span<const TextInstance> gts, std::span<const DetectionResult> dets,
                       const MatchOptions& options, const Lexicon* lexicon, const TranscriptionOptions& text) {
  std::vector<TextInstance> scored(gts.begin(), gts.end());
  if (text.word_spotting) {
    for (TextInstance& gt : scored) {
      if (!is_spotting_word(normalize_transcription(gt.transcription, text))) gt.ignore = true;
    }
  }
  EvalReport report = match_detections(scored, dets, options);

  std::vector<Match> correct;
  for (const Match& m : report.matches) {
    std::string pred = dets[m.det].transcription;
    if (lexicon) pred = lexicon_correct(pred, *lexicon);
    if (normalize_transcription(pred, text) == normalize_transcription(scored[m.gt].transcription, text)) {
      correct.push_back(m);
    }
  }
  report.matches = std::move(correct);
  finalize(report);
  return report;
}

}  // namespace spotgeom
