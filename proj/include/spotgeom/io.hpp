#pragma once

#include "spotgeom/eval.hpp"
#include "spotgeom/image.hpp"
#include "spotgeom/labelgen.hpp"
#include "spotgeom/proposal.hpp"
#include "spotgeom/roi.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spotgeom::io {

/// Malformed input file (bad JSON, bad tensor header, invalid polygon...).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure (missing or unwritable file).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- JSON -----------------------------------------------------------------

// Annotation schema:
// {"width": int, "height": int,
//  "instances": [{"polygon": [[x, y], ...], "transcription": str, "ignore": bool}]}
AnnotationSet annotations_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AnnotationSet& ann);

// Proposal schema: [{"polygon": [[x, y]...], "shrunk": [[x, y]...],
//                    "box": [x0, y0, x1, y1], "score": float}]
nlohmann::json to_json(const std::vector<Proposal>& proposals);
std::vector<Proposal> proposals_from_json(const nlohmann::json& j);

/// Detection list: [{"polygon": [[x, y]...], "transcription"?: str, "score"?: float}].
/// Proposal files are accepted as detections, and so are annotation objects
/// (their non-ignored instances, score 1).
std::vector<DetectionResult> detections_from_json(const nlohmann::json& j);

nlohmann::json polygon_to_json(const Polygon& p);
Polygon polygon_from_json(const nlohmann::json& j);

nlohmann::json read_json(const std::filesystem::path& path);

/// Loads a keyed collection: either one JSON object mapping keys to entries,
/// or a directory of *.json files keyed by file stem.
std::map<std::string, nlohmann::json> read_keyed_json(const std::filesystem::path& path);

// --- Files ----------------------------------------------------------------

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

// --- PNG ------------------------------------------------------------------

/// 8-bit PNG decode; channels follow the file (1 gray, 2 gray+alpha, 3 RGB, 4 RGBA).
Image read_png(const std::filesystem::path& path);
std::string encode_png(const Image& image);
void write_png(const std::filesystem::path& path, const Image& image);

Image binary_map_to_image(const BinaryMap& map);

/// Gray image to probability map v / 255. Throws FormatError on color input.
Grid<double> image_to_probability(const Image& image);

// --- Raw tensor -----------------------------------------------------------

// "SPNF", then C, H, W as uint32 little-endian, then C*H*W float32
// little-endian values in channel-major, row-major order.
std::string encode_tensor(const FeatureGrid<float>& f);
FeatureGrid<float> decode_tensor(const std::string& bytes);
FeatureGrid<float> read_tensor(const std::filesystem::path& path);
void write_tensor(const std::filesystem::path& path, const FeatureGrid<float>& f);

/// RoI grids serialize as C x N x N tensors.
FeatureGrid<float> as_feature_grid(const RoiGrid<float>& r);

// --- Visualization --------------------------------------------------------

/// Strokes closed polygons in red over an RGB copy. An empty list returns the
/// image unchanged.
Image draw_polygons(const Image& image, const std::vector<Polygon>& polygons);

/// One closed <path> element per polygon.
std::string polygons_to_svg(const std::vector<Polygon>& polygons, int width, int height);

}  // namespace spotgeom::io
