#include "spotgeom/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace spotgeom::io {

namespace fs = std::filesystem;
using nlohmann::json;

// --- JSON -----------------------------------------------------------------

nlohmann::json polygon_to_json(const Polygon& p) {
  json out = json::array();
  for (const Point& v : p) out.push_back({v.x(), v.y()});
  return out;
}

Polygon polygon_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw FormatError("polygon must be an array of [x, y] pairs");
  std::vector<Point> pts;
  pts.reserve(j.size());
  for (const json& v : j) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw FormatError("polygon vertex must be a [x, y] number pair");
    }
    pts.emplace_back(v[0].get<double>(), v[1].get<double>());
  }
  try {
    return Polygon(std::move(pts));
  } catch (const InvalidPolygon& e) {
    throw FormatError(e.what());
  }
}

AnnotationSet annotations_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("annotation file must hold a JSON object");
  AnnotationSet ann;
  try {
    ann.image_width = j.at("width").get<int>();
    ann.image_height = j.at("height").get<int>();
  } catch (const json::exception&) {
    throw FormatError("annotation needs integer width and height");
  }
  const json& instances = j.contains("instances") ? j.at("instances") : json::array();
  if (!instances.is_array()) throw FormatError("instances must be an array");
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const json& inst = instances[k];
    const std::string where = " at instance " + std::to_string(k);
    if (!inst.is_object() || !inst.contains("polygon")) throw FormatError("malformed instance" + where);
    std::optional<Polygon> polygon;
    try {
      polygon = polygon_from_json(inst.at("polygon"));
    } catch (const FormatError& e) {
      throw FormatError("invalid polygon" + where + ": " + e.what());
    }
    std::string transcription;
    bool ignore = false;
    try {
      if (inst.contains("transcription")) transcription = inst.at("transcription").get<std::string>();
      if (inst.contains("ignore")) ignore = inst.at("ignore").get<bool>();
    } catch (const json::exception&) {
      throw FormatError("malformed transcription or ignore flag" + where);
    }
    ann.instances.push_back({std::move(*polygon), std::move(transcription), ignore});
  }
  try {
    validate(ann);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return ann;
}

nlohmann::json to_json(const AnnotationSet& ann) {
  json instances = json::array();
  for (const TextInstance& inst : ann.instances) {
    instances.push_back(
        {{"polygon", polygon_to_json(inst.polygon)}, {"transcription", inst.transcription}, {"ignore", inst.ignore}});
  }
  return {{"width", ann.image_width}, {"height", ann.image_height}, {"instances", std::move(instances)}};
}

nlohmann::json to_json(const std::vector<Proposal>& proposals) {
  json out = json::array();
  for (const Proposal& p : proposals) {
    out.push_back({{"polygon", polygon_to_json(p.polygon)},
                   {"shrunk", polygon_to_json(p.shrunk_region)},
                   {"box", {p.box.x_min, p.box.y_min, p.box.x_max, p.box.y_max}},
                   {"score", p.score}});
  }
  return out;
}

std::vector<Proposal> proposals_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw FormatError("proposal file must hold a JSON array");
  std::vector<Proposal> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& e = j[k];
    const std::string where = " at proposal " + std::to_string(k);
    try {
      Polygon polygon = polygon_from_json(e.at("polygon"));
      Polygon shrunk = e.contains("shrunk") ? polygon_from_json(e.at("shrunk")) : polygon;
      AxisAlignedBox box = min_aabb(polygon);
      if (e.contains("box")) {
        const auto b = e.at("box").get<std::vector<double>>();
        if (b.size() != 4) throw FormatError("box must hold 4 numbers");
        box = {b[0], b[1], b[2], b[3]};
      }
      const double score = e.value("score", 1.0);
      out.push_back({std::move(polygon), std::move(shrunk), box, score});
    } catch (const json::exception& ex) {
      throw FormatError("malformed entry" + where + ": " + ex.what());
    } catch (const FormatError& ex) {
      throw FormatError("invalid entry" + where + ": " + ex.what());
    }
  }
  return out;
}

std::vector<DetectionResult> detections_from_json(const nlohmann::json& j) {
  if (j.is_object()) {
    std::vector<DetectionResult> out;
    for (TextInstance& inst : annotations_from_json(j).instances) {
      if (!inst.ignore) out.push_back({std::move(inst.polygon), std::move(inst.transcription), 1.0});
    }
    return out;
  }
  if (!j.is_array()) throw FormatError("detection list must be a JSON array or an annotation object");
  std::vector<DetectionResult> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& e = j[k];
    const std::string where = " at detection " + std::to_string(k);
    try {
      Polygon polygon = polygon_from_json(e.at("polygon"));
      std::string text = e.value("transcription", std::string());
      const double score = e.value("score", 1.0);
      out.push_back({std::move(polygon), std::move(text), score});
    } catch (const json::exception& ex) {
      throw FormatError("malformed entry" + where + ": " + ex.what());
    } catch (const FormatError& ex) {
      throw FormatError("invalid entry" + where + ": " + ex.what());
    }
  }
  return out;
}

nlohmann::json read_json(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::map<std::string, nlohmann::json> read_keyed_json(const fs::path& path) {
  std::map<std::string, json> out;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        out.emplace(entry.path().stem().string(), read_json(entry.path()));
      }
    }
    return out;
  }
  json j = read_json(path);
  if (!j.is_object()) throw FormatError(path.string() + ": expected a JSON object keyed by image");
  for (auto& [key, value] : j.items()) out.emplace(key, value);
  return out;
}

// --- Files ----------------------------------------------------------------

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write " + path.string());
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw IoError("cannot write " + path.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot write " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// --- PNG ------------------------------------------------------------------

namespace {

png_uint_32 png_format_for(int channels) {
  switch (channels) {
    case 1: return PNG_FORMAT_GRAY;
    case 2: return PNG_FORMAT_GA;
    case 3: return PNG_FORMAT_RGB;
    default: return PNG_FORMAT_RGBA;
  }
}

}  // namespace

Image read_png(const fs::path& path) {
  const std::string bytes = read_file(path);
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw FormatError(path.string() + ": not a readable PNG (" + img.message + ")");
  }
  int channels = 1;
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const bool alpha = (img.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  channels = (color ? 3 : 1) + (alpha ? 1 : 0);
  img.format = png_format_for(channels);
  Image out(static_cast<int>(img.width), static_cast<int>(img.height), channels);
  if (!png_image_finish_read(&img, nullptr, out.data.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw FormatError(path.string() + ": " + msg);
  }
  return out;
}

std::string encode_png(const Image& image) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = png_format_for(image.channels);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, image.data.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + img.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, image.data.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

void write_png(const fs::path& path, const Image& image) { write_file_atomic(path, encode_png(image)); }

Image binary_map_to_image(const BinaryMap& map) {
  Image out(static_cast<int>(map.cols()), static_cast<int>(map.rows()), 1);
  for (int i = 0; i < out.height; ++i) {
    for (int j = 0; j < out.width; ++j) out.at(i, j, 0) = map(i, j) ? 255 : 0;
  }
  return out;
}

Grid<double> image_to_probability(const Image& image) {
  if (image.channels != 1) throw FormatError("segmentation map must be an 8-bit grayscale PNG");
  Grid<double> s(image.height, image.width);
  for (int i = 0; i < image.height; ++i) {
    for (int j = 0; j < image.width; ++j) s(i, j) = image.at(i, j, 0) / 255.0;
  }
  return s;
}

// --- Raw tensor -----------------------------------------------------------

namespace {

constexpr char kTensorMagic[4] = {'S', 'P', 'N', 'F'};
constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + k])) << (8 * k);
  return v;
}

}  // namespace

std::string encode_tensor(const FeatureGrid<float>& f) {
  const auto c = static_cast<std::uint32_t>(f.num_channels());
  const auto h = static_cast<std::uint32_t>(f.height());
  const auto w = static_cast<std::uint32_t>(f.width());
  std::string out(kTensorMagic, 4);
  put_u32(out, c);
  put_u32(out, h);
  put_u32(out, w);
  out.reserve(kHeaderBytes + 4ull * c * h * w);
  for (const Grid<float>& channel : f.channels) {
    for (Eigen::Index i = 0; i < channel.rows(); ++i) {
      for (Eigen::Index j = 0; j < channel.cols(); ++j) put_u32(out, std::bit_cast<std::uint32_t>(channel(i, j)));
    }
  }
  return out;
}

FeatureGrid<float> decode_tensor(const std::string& bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw FormatError("tensor header truncated: " + std::to_string(bytes.size()) + " of 16 bytes");
  }
  if (std::memcmp(bytes.data(), kTensorMagic, 4) != 0) throw FormatError("bad tensor magic (expected SPNF)");
  const std::uint64_t c = get_u32(bytes, 4);
  const std::uint64_t h = get_u32(bytes, 8);
  const std::uint64_t w = get_u32(bytes, 12);
  if (c == 0 || h == 0 || w == 0) throw FormatError("tensor dimensions must be positive");
  const std::uint64_t expected = kHeaderBytes + 4 * c * h * w;
  if (bytes.size() != expected) {
    throw FormatError("tensor payload size mismatch: expected " + std::to_string(expected) + " bytes, got " +
                      std::to_string(bytes.size()));
  }
  FeatureGrid<float> f(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w));
  std::size_t at = kHeaderBytes;
  for (Grid<float>& channel : f.channels) {
    for (Eigen::Index i = 0; i < channel.rows(); ++i) {
      for (Eigen::Index j = 0; j < channel.cols(); ++j, at += 4) channel(i, j) = std::bit_cast<float>(get_u32(bytes, at));
    }
  }
  return f;
}

FeatureGrid<float> read_tensor(const fs::path& path) { return decode_tensor(read_file(path)); }

void write_tensor(const fs::path& path, const FeatureGrid<float>& f) { write_file_atomic(path, encode_tensor(f)); }

FeatureGrid<float> as_feature_grid(const RoiGrid<float>& r) {
  FeatureGrid<float> f;
  f.channels = r.channels;
  return f;
}

// --- Visualization --------------------------------------------------------

Image draw_polygons(const Image& image, const std::vector<Polygon>& polygons) {
  if (polygons.empty()) return image;
  Image out(image.width, image.height, 3);
  for (int i = 0; i < image.height; ++i) {
    for (int j = 0; j < image.width; ++j) {
      for (int ch = 0; ch < 3; ++ch) out.at(i, j, ch) = image.at(i, j, image.channels >= 3 ? ch : 0);
    }
  }
  auto plot = [&](long col, long row) {
    if (row < 0 || col < 0 || row >= out.height || col >= out.width) return;
    out.at(static_cast<int>(row), static_cast<int>(col), 0) = 255;
    out.at(static_cast<int>(row), static_cast<int>(col), 1) = 0;
    out.at(static_cast<int>(row), static_cast<int>(col), 2) = 0;
  };
  for (const Polygon& p : polygons) {
    for (std::size_t k = 0; k < p.size(); ++k) {
      const Point a = p[k] - Point(0.5, 0.5);
      const Point b = p[(k + 1) % p.size()] - Point(0.5, 0.5);
      const int steps = std::max(1, static_cast<int>(std::ceil((b - a).lpNorm<Eigen::Infinity>())));
      for (int s = 0; s <= steps; ++s) {
        const Point q = a + (b - a) * (static_cast<double>(s) / steps);
        plot(std::lround(q.x()), std::lround(q.y()));
      }
    }
  }
  return out;
}

std::string polygons_to_svg(const std::vector<Polygon>& polygons, int width, int height) {
  std::ostringstream os;
  os.precision(17);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  for (const Polygon& p : polygons) {
    os << "  <path d=\"";
    for (std::size_t k = 0; k < p.size(); ++k) os << (k == 0 ? "M " : " L ") << p[k].x() << ' ' << p[k].y();
    os << " Z\" fill=\"none\" stroke=\"red\" stroke-width=\"1\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace spotgeom::io
