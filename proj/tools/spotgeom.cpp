// Command-line front end: label generation, proposal extraction, RoI
// masking, benchmark rotation, evaluation and visualization.

#include "spotgeom/eval.hpp"
#include "spotgeom/io.hpp"
#include "spotgeom/labelgen.hpp"
#include "spotgeom/lexicon.hpp"
#include "spotgeom/proposal.hpp"
#include "spotgeom/roi.hpp"
#include "spotgeom/rotate.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spotgeom;

namespace {

// Exit statuses.
constexpr int kOk = 0;
constexpr int kIoFailure = 1;
constexpr int kBadInput = 2;
constexpr int kOutOfRange = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CanvasArg {
  int height = 0;
  int width = 0;
};

CanvasArg parse_canvas(const std::string& text) {
  const auto x = text.find_first_of("xX");
  CanvasArg c;
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    c.height = std::stoi(text.substr(0, x), &used);
    c.width = std::stoi(text.substr(x + 1));
  } catch (const std::exception&) {
    throw UsageError("canvas must be given as HxW, got '" + text + "'");
  }
  if (c.height < 1 || c.width < 1) throw UsageError("canvas dimensions must be positive");
  return c;
}

std::string angle_tag(double angle) {
  std::ostringstream os;
  if (angle == std::round(angle)) {
    os << static_cast<long>(angle);
  } else {
    os << angle;
  }
  return os.str();
}

std::vector<Polygon> polygons_of(const json& j) {
  std::vector<Polygon> out;
  if (j.is_object()) {
    for (const TextInstance& inst : io::annotations_from_json(j).instances) out.push_back(inst.polygon);
  } else {
    for (const Proposal& p : io::proposals_from_json(j)) out.push_back(p.polygon);
  }
  return out;
}

// --- labelgen -------------------------------------------------------------

struct LabelgenArgs {
  std::string annotations;
  std::string canvas;
  double shrink_ratio = kDefaultShrinkRatio;
  std::string out;
};

int run_labelgen(const LabelgenArgs& a) {
  if (!(a.shrink_ratio >= 0.0 && a.shrink_ratio <= 1.0)) throw UsageError("shrink ratio out of range");
  json j = io::read_json(a.annotations);
  if (!a.canvas.empty()) {
    const CanvasArg c = parse_canvas(a.canvas);
    if (!j.is_object()) throw io::FormatError("annotation file must hold a JSON object");
    j["height"] = c.height;
    j["width"] = c.width;
  }
  const AnnotationSet ann = io::annotations_from_json(j);
  io::write_png(a.out, io::binary_map_to_image(make_seg_label(ann, a.shrink_ratio)));
  return kOk;
}

// --- propose --------------------------------------------------------------

struct ProposeArgs {
  std::string segmap;
  double threshold = kDefaultBinarizeThreshold;
  double unclip_ratio = kDefaultUnclipRatio;
  double min_area = kDefaultMinArea;
  double simplify = 0.0;
  std::string out;
};

int run_propose(const ProposeArgs& a) {
  if (!(a.threshold >= 0.0 && a.threshold <= 1.0)) throw UsageError("threshold out of range");
  if (!(a.unclip_ratio > 0.0)) throw UsageError("unclip ratio out of range");
  if (!(a.min_area >= 0.0)) throw UsageError("min area out of range");
  const Grid<double> s = io::image_to_probability(io::read_png(a.segmap));
  ProposalOptions options;
  options.threshold = a.threshold;
  options.unclip_ratio = a.unclip_ratio;
  options.min_area = a.min_area;
  options.simplify_epsilon = a.simplify;
  io::write_file_atomic(a.out, io::to_json(extract_proposals(s, options)).dump() + "\n");
  return kOk;
}

// --- maskroi --------------------------------------------------------------

struct MaskRoiArgs {
  std::string features;
  std::string proposals;
  long index = 0;
  double spatial_scale = 1.0;
  int out_size = kRoiSize;
  std::string out;
};

int run_maskroi(const MaskRoiArgs& a) {
  if (!(a.spatial_scale > 0.0)) throw UsageError("spatial scale must be positive");
  const FeatureGrid<float> features = io::read_tensor(a.features);
  const std::vector<Proposal> proposals = io::proposals_from_json(io::read_json(a.proposals));
  if (a.index < 0 || a.index >= static_cast<long>(proposals.size())) {
    throw IndexError("proposal index " + std::to_string(a.index) + " out of range (" +
                     std::to_string(proposals.size()) + " proposals)");
  }
  const Proposal& p = proposals[static_cast<std::size_t>(a.index)];
  const double k = a.spatial_scale;
  const AxisAlignedBox box{p.box.x_min * k, p.box.y_min * k, p.box.x_max * k, p.box.y_max * k};
  std::vector<Point> scaled;
  for (const Point& v : p.polygon) scaled.push_back(v * k);
  const Polygon polygon(std::move(scaled));

  const RoiGrid<float> r0 = roi_align(features, box, {a.out_size, 1});
  const RoiGrid<float> masked = hard_roi_mask(r0, render_polygon_mask(polygon, box, a.out_size));
  io::write_tensor(a.out, io::as_feature_grid(masked));
  return kOk;
}

// --- rotate ---------------------------------------------------------------

struct RotateArgs {
  std::string image;
  std::string annotations;
  std::optional<double> angle;
  std::vector<double> angles;
  std::string out_dir;
};

int run_rotate(const RotateArgs& a) {
  std::vector<double> angles = a.angles;
  if (a.angle) angles.insert(angles.begin(), *a.angle);
  if (angles.empty()) throw UsageError("give --angle or --angles");
  for (double angle : angles) {
    if (!(angle >= -180.0 && angle <= 180.0)) throw UsageError("angle out of range");
  }
  const Image image = io::read_png(a.image);
  const AnnotationSet ann = io::annotations_from_json(io::read_json(a.annotations));
  const std::string stem = fs::path(a.image).stem().string();

  // Every angle is rendered before anything is written.
  std::vector<std::future<RotatedItem>> jobs;
  for (double angle : angles) {
    jobs.push_back(std::async(std::launch::async, [&, angle] { return rotate_item(image, ann, angle); }));
  }
  std::vector<RotatedItem> items;
  for (auto& job : jobs) items.push_back(job.get());

  fs::create_directories(a.out_dir);
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const fs::path base = fs::path(a.out_dir) / (stem + "_rot" + angle_tag(angles[k]));
    io::write_png(fs::path(base).concat(".png"), items[k].image);
    io::write_file_atomic(fs::path(base).concat(".json"), io::to_json(items[k].annotations).dump(2) + "\n");
  }
  return kOk;
}

// --- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string task = "det";
  std::string gt;
  std::string pred;
  double iou = 0.5;
  std::string lexicon;
  std::string lexicon_kind = "generic";
};

Lexicon load_lexicon(const std::string& path, const std::string& kind) {
  std::istringstream is(io::read_file(path));
  std::vector<std::string> words;
  for (std::string line; std::getline(is, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  const LexiconKind k = kind == "strong" ? LexiconKind::kStrong
                        : kind == "weak" ? LexiconKind::kWeak
                                         : LexiconKind::kGeneric;
  Lexicon lex(std::move(words), k);
  if (lex.empty()) throw io::FormatError("lexicon " + path + " is empty");
  return lex;
}

int run_eval(const EvalArgs& a) {
  if (!(a.iou > 0.0 && a.iou < 1.0)) throw UsageError("iou threshold out of range");
  const auto gt = io::read_keyed_json(a.gt);
  const auto pred = io::read_keyed_json(a.pred);

  std::vector<std::string> missing;
  for (const auto& [key, _] : gt) {
    if (!pred.contains(key)) missing.push_back("prediction missing for '" + key + "'");
  }
  for (const auto& [key, _] : pred) {
    if (!gt.contains(key)) missing.push_back("ground truth missing for '" + key + "'");
  }
  if (!missing.empty()) {
    std::string msg = "key mismatch between ground truth and predictions:";
    for (const std::string& m : missing) msg += "\n  " + m;
    throw io::FormatError(msg);
  }

  std::optional<Lexicon> lexicon;
  if (!a.lexicon.empty()) lexicon = load_lexicon(a.lexicon, a.lexicon_kind);
  MatchOptions match;
  match.iou_threshold = a.iou;
  TranscriptionOptions text;
  text.word_spotting = a.task == "spotting";

  struct Item {
    std::vector<TextInstance> gts;
    std::vector<DetectionResult> dets;
  };
  std::vector<Item> items;
  for (const auto& [key, value] : gt) {
    try {
      items.push_back({io::annotations_from_json(value).instances, io::detections_from_json(pred.at(key))});
    } catch (const io::FormatError& e) {
      throw io::FormatError("image '" + key + "': " + e.what());
    }
  }

  std::vector<std::future<EvalReport>> jobs;
  for (const Item& item : items) {
    jobs.push_back(std::async(std::launch::async, [&] {
      if (a.task == "det") return match_detections(item.gts, item.dets, match);
      return e2e_metrics(item.gts, item.dets, match, lexicon ? &*lexicon : nullptr, text);
    }));
  }
  std::vector<EvalReport> reports;
  for (auto& job : jobs) reports.push_back(job.get());
  const EvalReport total = detection_metrics(reports);

  const json out = {{"precision", total.precision}, {"recall", total.recall}, {"f_measure", total.f_measure},
                    {"matched", total.matches.size()}, {"total_gt", total.num_gt_care},
                    {"total_det", total.num_det_kept}};
  std::cout << out.dump() << '\n';
  return kOk;
}

// --- visualize ------------------------------------------------------------

struct VisualizeArgs {
  std::string image;
  std::string proposals;
  std::string annotations;
  std::string canvas;
  std::string out;
};

int run_visualize(const VisualizeArgs& a) {
  if (a.proposals.empty() == a.annotations.empty()) throw UsageError("give exactly one of --proposals or --annotations");
  const json j = io::read_json(a.proposals.empty() ? a.annotations : a.proposals);
  const std::vector<Polygon> polygons = polygons_of(j);

  if (!a.image.empty()) {
    io::write_png(a.out, io::draw_polygons(io::read_png(a.image), polygons));
    return kOk;
  }
  int width = 0;
  int height = 0;
  if (!a.canvas.empty()) {
    const CanvasArg c = parse_canvas(a.canvas);
    width = c.width;
    height = c.height;
  } else if (j.is_object()) {
    width = j.at("width").get<int>();
    height = j.at("height").get<int>();
  } else {
    for (const Polygon& p : polygons) {
      const AxisAlignedBox b = min_aabb(p);
      width = std::max(width, static_cast<int>(std::ceil(b.x_max)));
      height = std::max(height, static_cast<int>(std::ceil(b.y_max)));
    }
  }
  io::write_file_atomic(a.out, io::polygons_to_svg(polygons, std::max(width, 1), std::max(height, 1)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spotgeom: segmentation proposals, hard RoI masking and text-spotting evaluation"};
  app.require_subcommand(1);

  LabelgenArgs labelgen;
  auto* cmd_labelgen = app.add_subcommand("labelgen", "Render the shrunk segmentation label of an annotation file");
  cmd_labelgen->add_option("--annotations", labelgen.annotations, "Annotation JSON")->required();
  cmd_labelgen->add_option("--canvas", labelgen.canvas, "Override canvas as HxW");
  cmd_labelgen->add_option("--shrink-ratio", labelgen.shrink_ratio, "Shrink ratio r")
      ->envname("SPOTGEOM_SHRINK_RATIO");
  cmd_labelgen->add_option("--out", labelgen.out, "Output PNG")->required();

  ProposeArgs propose;
  auto* cmd_propose = app.add_subcommand("propose", "Extract polygon proposals from a probability PNG");
  cmd_propose->add_option("--segmap", propose.segmap, "8-bit grayscale PNG, v/255 probability")->required();
  cmd_propose->add_option("--threshold", propose.threshold, "Binarization threshold t")
      ->envname("SPOTGEOM_THRESHOLD");
  cmd_propose->add_option("--unclip-ratio", propose.unclip_ratio, "Un-clip ratio")
      ->envname("SPOTGEOM_UNCLIP_RATIO");
  cmd_propose->add_option("--min-area", propose.min_area, "Minimum component pixel count")
      ->envname("SPOTGEOM_MIN_AREA");
  cmd_propose->add_option("--simplify", propose.simplify, "Douglas-Peucker epsilon for contours (0 = off)");
  cmd_propose->add_option("--out", propose.out, "Output proposals JSON")->required();

  MaskRoiArgs maskroi;
  auto* cmd_maskroi = app.add_subcommand("maskroi", "Hard-mask the RoI feature of one proposal");
  cmd_maskroi->add_option("--features", maskroi.features, "Feature tensor (SPNF)")->required();
  cmd_maskroi->add_option("--proposals", maskroi.proposals, "Proposals JSON")->required();
  cmd_maskroi->add_option("--index", maskroi.index, "Proposal index")->required();
  cmd_maskroi->add_option("--spatial-scale", maskroi.spatial_scale, "Image-to-feature coordinate scale");
  cmd_maskroi->add_option("--out-size", maskroi.out_size, "RoI grid size")->envname("SPOTGEOM_ROI_SIZE");
  cmd_maskroi->add_option("--out", maskroi.out, "Output tensor (SPNF)")->required();

  RotateArgs rotate;
  auto* cmd_rotate = app.add_subcommand("rotate", "Rotate an image and its annotations into an expanded canvas");
  cmd_rotate->add_option("--image", rotate.image, "Input PNG")->required();
  cmd_rotate->add_option("--annotations", rotate.annotations, "Annotation JSON")->required();
  cmd_rotate->add_option("--angle", rotate.angle, "Angle in degrees");
  cmd_rotate->add_option("--angles", rotate.angles, "Comma-separated batch of angles, e.g. 15,30,45,60,75,90")
      ->delimiter(',');
  cmd_rotate->add_option("--out-dir", rotate.out_dir, "Output directory")->required();

  EvalArgs eval;
  auto* cmd_eval = app.add_subcommand("eval", "Score predictions against ground truth");
  cmd_eval->add_option("--task", eval.task, "det, e2e or spotting")
      ->check(CLI::IsMember({"det", "e2e", "spotting"}));
  cmd_eval->add_option("--gt", eval.gt, "Ground truth: keyed JSON object or directory of annotation files")
      ->required();
  cmd_eval->add_option("--pred", eval.pred, "Predictions: keyed JSON object or directory of detection files")
      ->required();
  cmd_eval->add_option("--iou", eval.iou, "IoU threshold")->envname("SPOTGEOM_IOU");
  cmd_eval->add_option("--lexicon", eval.lexicon, "Lexicon file, one word per line");
  cmd_eval->add_option("--lexicon-kind", eval.lexicon_kind, "strong, weak or generic")
      ->check(CLI::IsMember({"strong", "weak", "generic"}));

  VisualizeArgs visualize;
  auto* cmd_visualize = app.add_subcommand("visualize", "Draw polygons over an image (PNG) or as SVG");
  cmd_visualize->add_option("--image", visualize.image, "Background PNG; omit for SVG output");
  cmd_visualize->add_option("--proposals", visualize.proposals, "Proposals JSON");
  cmd_visualize->add_option("--annotations", visualize.annotations, "Annotation JSON");
  cmd_visualize->add_option("--canvas", visualize.canvas, "SVG canvas as HxW");
  cmd_visualize->add_option("--out", visualize.out, "Output PNG or SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*cmd_labelgen) return run_labelgen(labelgen);
    if (*cmd_propose) return run_propose(propose);
    if (*cmd_maskroi) return run_maskroi(maskroi);
    if (*cmd_rotate) return run_rotate(rotate);
    if (*cmd_eval) return run_eval(eval);
    if (*cmd_visualize) return run_visualize(visualize);
  } catch (const IndexError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOutOfRange;
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
