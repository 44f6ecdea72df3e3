#include "spotgeom/io.hpp"

#include "cli_runner.hpp"

#include <gtest/gtest.h>

#include <cstring>

namespace spotgeom {
namespace {

using cli::fixture;
using cli::quote;
using cli::run;
using cli::TempDir;
using nlohmann::json;
namespace fs = std::filesystem;

std::string q(const fs::path& p) { return quote(p.string()); }

int white_pixels(const fs::path& png) {
  int n = 0;
  for (auto v : io::read_png(png).data) n += v == 255;
  return n;
}

void write_two_blob_png(const fs::path& p) {
  Image img(100, 100, 1);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      img.at(10 + i, 10 + j, 0) = 255;
      img.at(60 + i, 60 + j, 0) = 255;
    }
  io::write_png(p, img);
}

std::size_t count_paths(const std::string& svg) {
  std::size_t n = 0;
  for (auto at = svg.find("<path"); at != std::string::npos; at = svg.find("<path", at + 1)) ++n;
  return n;
}

TEST(CliLabelgen, EmptyInstancesGiveBlackImage) {
  TempDir t("cli");
  const auto r = run("labelgen --annotations " + quote(fixture("empty.json")) + " --out " + q(t / "l.png"), t);
  ASSERT_EQ(r.status, 0) << r.err;
  const Image img = io::read_png(t / "l.png");
  EXPECT_EQ(img.width, 64);
  EXPECT_EQ(img.height, 48);
  EXPECT_EQ(white_pixels(t / "l.png"), 0);
}

TEST(CliLabelgen, TwoVertexPolygonIsRejected) {
  TempDir t("cli");
  const auto r = run("labelgen --annotations " + quote(fixture("two_vertex.json")) + " --out " + q(t / "l.png"), t);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("invalid polygon at instance 1"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(t / "l.png"));
}

TEST(CliLabelgen, SquareCount) {
  TempDir t("cli");
  const auto r = run("labelgen --annotations " + quote(fixture("square.json")) + " --out " + q(t / "l.png"), t);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(white_pixels(t / "l.png"), 58 * 58);
  // Canvas override and ratio from the environment.
  const auto r2 = run("labelgen --annotations " + quote(fixture("square.json")) + " --canvas 150x120 --out " +
                          q(t / "m.png"),
                      t, "SPOTGEOM_SHRINK_RATIO=1");
  ASSERT_EQ(r2.status, 0) << r2.err;
  const Image m = io::read_png(t / "m.png");
  EXPECT_EQ(m.height, 150);
  EXPECT_EQ(m.width, 120);
  EXPECT_EQ(white_pixels(t / "m.png"), 100 * 100);
}

TEST(CliPropose, BlackImageGivesEmptyList) {
  TempDir t("cli");
  io::write_png(t / "black.png", Image(30, 20, 1));
  const auto r = run("propose --segmap " + q(t / "black.png") + " --out " + q(t / "p.json"), t);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(cli::slurp(t / "p.json"), "[]\n");
}

TEST(CliPropose, TwoBlobs) {
  TempDir t("cli");
  write_two_blob_png(t / "blobs.png");
  const auto r = run("propose --segmap " + q(t / "blobs.png") + " --out " + q(t / "p.json"), t);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(io::read_json(t / "p.json").size(), 2u);
}

TEST(CliPropose, ThresholdValidation) {
  TempDir t("cli");
  write_two_blob_png(t / "blobs.png");
  const std::string base = "propose --segmap " + q(t / "blobs.png") + " --out " + q(t / "p.json");
  auto r = run(base + " --threshold 1.1", t);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("threshold out of range"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(t / "p.json"));
  // Environment applies when no flag is given; a flag wins over it.
  EXPECT_EQ(run(base, t, "SPOTGEOM_THRESHOLD=1.1").status, 2);
  EXPECT_EQ(run(base + " --threshold 0.5", t, "SPOTGEOM_THRESHOLD=1.1").status, 0);
}

TEST(CliPropose, RejectsColorInput) {
  TempDir t("cli");
  io::write_png(t / "rgb.png", Image(8, 8, 3));
  const auto r = run("propose --segmap " + q(t / "rgb.png") + " --out " + q(t / "p.json"), t);
  EXPECT_NE(r.status, 0);
  EXPECT_FALSE(fs::exists(t / "p.json"));
}

class CliMaskRoi : public ::testing::Test {
 protected:
  void SetUp() override {
    FeatureGrid<float> f(2, 32, 32);
    f.channels[0].setOnes();
    f.channels[1].setConstant(-3.0f);
    io::write_tensor(t / "f.spnf", f);
    const json square = json::parse(R"([{"polygon": [[2,2],[30,2],[30,30],[2,30]],
        "shrunk": [[10,10],[20,10],[20,20],[10,20]], "box": [2,2,30,30], "score": 1.0},
        {"polygon": [[2,2],[30,2],[2,30]], "shrunk": [[4,4],[8,4],[4,8]], "box": [2,2,30,30], "score": 0.5}])");
    io::write_file_atomic(t / "p.json", square.dump());
  }
  std::string args(int index, const fs::path& features) const {
    return "maskroi --features " + q(features) + " --proposals " + q(t / "p.json") + " --index " +
           std::to_string(index) + " --out " + q(t / "r.spnf");
  }
  TempDir t{"cli"};
};

TEST_F(CliMaskRoi, FullBoxPolygonKeepsEverything) {
  const auto r = run(args(0, t / "f.spnf"), t);
  ASSERT_EQ(r.status, 0) << r.err;
  const FeatureGrid<float> out = io::read_tensor(t / "r.spnf");
  ASSERT_EQ(out.num_channels(), 2);
  EXPECT_EQ(out.height(), 32);
  EXPECT_TRUE((out.channels[0] == 1.0f).all());
  EXPECT_TRUE((out.channels[1] == -3.0f).all());
}

TEST_F(CliMaskRoi, MaskZeroRegionIsBitExactZero) {
  const auto r = run(args(1, t / "f.spnf"), t);
  ASSERT_EQ(r.status, 0) << r.err;
  const FeatureGrid<float> out = io::read_tensor(t / "r.spnf");
  const PolygonMask m = render_polygon_mask(Polygon({{2, 2}, {30, 2}, {2, 30}}), {2, 2, 30, 30});
  int zeros = 0;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      const float v = out.channels[1](i, j);
      std::uint32_t bits;
      std::memcpy(&bits, &v, 4);
      if (m.values(i, j)) {
        EXPECT_EQ(v, -3.0f);
      } else {
        EXPECT_EQ(bits, 0u);
        ++zeros;
      }
    }
  EXPECT_GT(zeros, 400);
}

TEST_F(CliMaskRoi, Errors) {
  std::string bytes = cli::slurp(t / "f.spnf");
  io::write_file_atomic(t / "bad.spnf", "XPNF" + bytes.substr(4));
  io::write_file_atomic(t / "short.spnf", bytes.substr(0, bytes.size() - 8));
  auto r = run(args(0, t / "bad.spnf"), t);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("magic"), std::string::npos) << r.err;
  r = run(args(0, t / "short.spnf"), t);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("bytes"), std::string::npos) << r.err;
  r = run(args(5, t / "f.spnf"), t);
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.err.find("out of range"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(t / "r.spnf"));
}

TEST(CliRotate, AngleZeroAndQuarterTurn) {
  TempDir t("cli");
  io::write_png(t / "scene.png", Image(640, 480, 3));
  const AnnotationSet ann{640, 480, {{Polygon({{10, 20}, {200, 20}, {200, 60}, {10, 60}}), "sign", false}}};
  io::write_file_atomic(t / "scene.json", io::to_json(ann).dump());
  const std::string base = "rotate --image " + q(t / "scene.png") + " --annotations " + q(t / "scene.json") +
                           " --out-dir " + q(t / "out");
  auto r = run(base + " --angle 0", t);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(io::read_json(t / "out/scene_rot0.json"), io::to_json(ann));
  r = run(base + " --angle 90", t);
  ASSERT_EQ(r.status, 0) << r.err;
  const Image rotated = io::read_png(t / "out/scene_rot90.png");
  EXPECT_EQ(rotated.width, 480);
  EXPECT_EQ(rotated.height, 640);
}

TEST(CliRotate, BatchWritesSixPairs) {
  TempDir t("cli");
  io::write_png(t / "scene.png", Image(40, 30, 1));
  io::write_file_atomic(t / "scene.json", R"({"width":40,"height":30,"instances":[]})");
  const auto r = run("rotate --image " + q(t / "scene.png") + " --annotations " + q(t / "scene.json") +
                         " --angles 15,30,45,60,75,90 --out-dir " + q(t / "out"),
                     t);
  ASSERT_EQ(r.status, 0) << r.err;
  int pngs = 0, jsons = 0;
  for (const auto& e : fs::directory_iterator(t / "out")) {
    pngs += e.path().extension() == ".png";
    jsons += e.path().extension() == ".json";
  }
  EXPECT_EQ(pngs, 6);
  EXPECT_EQ(jsons, 6);
  EXPECT_TRUE(fs::exists(t / "out/scene_rot45.png"));
}

TEST(CliRotate, UnreadableImage) {
  TempDir t("cli");
  io::write_file_atomic(t / "scene.png", "not a png");
  const auto r = run("rotate --image " + q(t / "scene.png") + " --annotations " + quote(fixture("empty.json")) +
                         " --angle 15 --out-dir " + q(t / "out"),
                     t);
  EXPECT_NE(r.status, 0);
}

// GT with six words, predictions hitting three of them plus one miss.
void write_bench_fixture(const TempDir& t) {
  json gt = json::object(), pred = json::object();
  for (int img = 0; img < 2; ++img) {
    json inst = json::array(), dets = json::array();
    for (int k = 0; k < 3; ++k) {
      const double x = 10 + 30 * k;
      const json poly = {{x, 10}, {x + 20, 10}, {x + 20, 20}, {x, 20}};
      inst.push_back({{"polygon", poly}, {"transcription", "w" + std::to_string(k)}, {"ignore", false}});
      if ((img == 0 && k < 2) || (img == 1 && k == 0)) dets.push_back({{"polygon", poly}, {"transcription", "w" + std::to_string(k)}});
    }
    if (img == 1) dets.push_back({{"polygon", {{10, 50}, {30, 50}, {30, 60}, {10, 60}}}, {"transcription", "x"}});
    const std::string key = "img" + std::to_string(img);
    gt[key] = {{"width", 120}, {"height", 80}, {"instances", inst}};
    pred[key] = dets;
  }
  io::write_file_atomic(t / "gt.json", gt.dump());
  io::write_file_atomic(t / "pred.json", pred.dump());
  json none = json::object();
  for (auto& [key, _] : gt.items()) none[key] = json::array();
  io::write_file_atomic(t / "none.json", none.dump());
  io::write_file_atomic(t / "partial.json", json{{"img0", json::array()}}.dump());
}

TEST(CliEval, Metrics) {
  TempDir t("cli");
  write_bench_fixture(t);
  auto r = run("eval --gt " + q(t / "gt.json") + " --pred " + q(t / "pred.json"), t);
  ASSERT_EQ(r.status, 0) << r.err;
  json m = json::parse(r.out);
  EXPECT_EQ(m["precision"], 0.75);
  EXPECT_EQ(m["recall"], 0.5);
  EXPECT_NEAR(m["f_measure"].get<double>(), 0.6, 1e-15);
  EXPECT_EQ(m["matched"], 3);
  EXPECT_EQ(m["total_gt"], 6);
  EXPECT_EQ(m["total_det"], 4);

  r = run("eval --task e2e --gt " + q(t / "gt.json") + " --pred " + q(t / "pred.json"), t);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["matched"], 3);

  r = run("eval --gt " + quote(fixture("synth")) + " --pred " + quote(fixture("synth")), t);
  ASSERT_EQ(r.status, 0) << r.err;
  m = json::parse(r.out);
  EXPECT_EQ(m["precision"], 1.0);
  EXPECT_EQ(m["recall"], 1.0);
  EXPECT_EQ(m["f_measure"], 1.0);

  r = run("eval --gt " + q(t / "gt.json") + " --pred " + q(t / "none.json"), t);
  ASSERT_EQ(r.status, 0) << r.err;
  m = json::parse(r.out);
  EXPECT_EQ(m["precision"], 0.0);
  EXPECT_EQ(m["recall"], 0.0);
  EXPECT_EQ(m["f_measure"], 0.0);
}

TEST(CliEval, KeyMismatchListsMissingKeys) {
  TempDir t("cli");
  write_bench_fixture(t);
  const auto r = run("eval --gt " + q(t / "gt.json") + " --pred " + q(t / "partial.json"), t);
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("img1"), std::string::npos) << r.err;
}

TEST(CliEval, Lexicon) {
  TempDir t("cli");
  const json poly = {{0, 0}, {30, 0}, {30, 10}, {0, 10}};
  io::write_file_atomic(t / "gt.json", json{{"a", {{"width", 40}, {"height", 20},
      {"instances", {{{"polygon", poly}, {"transcription", "hello"}, {"ignore", false}}}}}}}.dump());
  io::write_file_atomic(t / "pred.json", json{{"a", {{{"polygon", poly}, {"transcription", "hcllo"}}}}}.dump());
  io::write_file_atomic(t / "lex.txt", "hello\nworld\n");
  const std::string base = "eval --task e2e --gt " + q(t / "gt.json") + " --pred " + q(t / "pred.json");
  EXPECT_EQ(json::parse(run(base, t).out)["matched"], 0);
  const auto r = run(base + " --lexicon " + q(t / "lex.txt") + " --lexicon-kind strong", t);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["matched"], 1);
}

TEST(CliVisualize, OutputsMatchPolygonCounts) {
  TempDir t("cli");
  Image img(40, 40, 1);
  img.at(3, 4, 0) = 99;
  io::write_png(t / "bg.png", img);
  io::write_file_atomic(t / "empty.json", "[]");
  auto r = run("visualize --image " + q(t / "bg.png") + " --proposals " + q(t / "empty.json") + " --out " +
                   q(t / "v.png"),
               t);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(io::read_png(t / "v.png"), img);

  r = run("visualize --annotations " + quote(fixture("square.json")) + " --out " + q(t / "one.svg"), t);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(count_paths(cli::slurp(t / "one.svg")), 1u);

  write_two_blob_png(t / "blobs.png");
  ASSERT_EQ(run("propose --segmap " + q(t / "blobs.png") + " --out " + q(t / "p.json"), t).status, 0);
  r = run("visualize --proposals " + q(t / "p.json") + " --canvas 100x100 --out " + q(t / "two.svg"), t);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(count_paths(cli::slurp(t / "two.svg")), 2u);
}

TEST(CliUsage, BadArgumentsExitTwo) {
  TempDir t("cli");
  EXPECT_EQ(run("", t).status, 2);
  EXPECT_EQ(run("frobnicate", t).status, 2);
  EXPECT_EQ(run("labelgen --out x.png", t).status, 2);
  EXPECT_EQ(run("labelgen --annotations " + q(t / "missing.json") + " --out " + q(t / "l.png"), t).status, 1);
  EXPECT_EQ(run("--help", t).status, 0);
}

}  // namespace
}  // namespace spotgeom
