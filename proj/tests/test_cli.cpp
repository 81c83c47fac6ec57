#include "support.hpp"

#include "cli.hpp"

#include "ebsr/baselines.hpp"
#include "ebsr/color.hpp"
#include "ebsr/image_io.hpp"
#include "ebsr/linear_operator.hpp"
#include "ebsr/metrics.hpp"

#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace ebsr;
using ebsr::test::TempDir;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.status = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_timing(const std::string &report) {
  auto doc = nlohmann::json::parse(report);
  doc.erase("total_seconds");
  return doc.dump();
}

std::filesystem::path write_scene(const TempDir &dir, Eigen::Index n,
                                  const std::string &name = "hr.pgm") {
  const auto path = dir / name;
  save_image(ebsr::test::synthetic_scene(n), path);
  return path;
}

} // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).status == cli::kExitUsage);
    CHECK(run({"frobnicate"}).status == cli::kExitUsage);
    CHECK(run({"sr", "--input", "a.pgm", "--output", "b.pgm", "--scale", "0"})
              .status == cli::kExitUsage);
    CHECK(run({"sr", "--input", "a.pgm"}).status == cli::kExitUsage);
    CHECK(run({"sr", "--input", "a.pgm", "--output", "b.pgm", "--seed", "3"})
              .status == cli::kExitUsage);
    CHECK(run({"degrade", "--input", "a.pgm", "--output", "b.pgm"}).status ==
          cli::kExitUsage);
    CHECK(run({"sr", "--input", "a.pgm", "--output", "b.pgm", "--kernel-size",
               "4"})
              .status == cli::kExitUsage);
    const Outcome help = run({"--help"});
    CHECK(help.status == cli::kExitOk);
    CHECK(help.out.find("degrade") != std::string::npos);
  }

  TEST_CASE("sr triples the dimensions and writes a report") {
    TempDir dir;
    const auto hr = write_scene(dir, 48);
    REQUIRE(run({"degrade", "--input", hr.string(), "--output",
                 (dir / "lr.pgm").string(), "--scale", "3", "--seed", "1"})
                .status == 0);
    const Outcome o = run({"sr", "--input", (dir / "lr.pgm").string(), "--scale",
                           "3", "--output", (dir / "sr.pgm").string(),
                           "--iters", "3", "--report",
                           (dir / "report.json").string()});
    CHECK(o.status == 0);
    const Image out = load_gray(dir / "sr.pgm");
    CHECK(out.rows() == 48);
    CHECK(out.cols() == 48);
    const auto report = nlohmann::json::parse(read_file(dir / "report.json"));
    CHECK(report["iterations"].size() == 3);
    CHECK(report["kernel"]["height"] == 7);
    CHECK(report["kernel"]["width"] == 7);
    CHECK(report["kernel"]["std"].get<double>() == doctest::Approx(2.0));
    CHECK(report["scale"] == 3);
  }

  TEST_CASE("failures write nothing") {
    TempDir dir;
    const Outcome missing = run({"sr", "--input", (dir / "none.pgm").string(),
                                 "--output", (dir / "out.pgm").string()});
    CHECK(missing.status == cli::kExitFailure);
    CHECK(missing.err.find("none.pgm") != std::string::npos);
    const Outcome deblur = run({"deblur", "--input", (dir / "none.pgm").string(),
                                "--output", (dir / "out.pgm").string()});
    CHECK(deblur.status == cli::kExitFailure);
    // a 7-tap kernel cannot act on a 2x2 image without wrapping onto itself
    save_image(Image::Constant(2, 2, 9.0), dir / "tiny.pgm");
    CHECK(run({"sr", "--input", (dir / "tiny.pgm").string(), "--output",
               (dir / "out.pgm").string(), "--scale", "1", "--report",
               (dir / "r.json").string()})
              .status == cli::kExitFailure);
    CHECK(run({"sr", "--input", (dir / "tiny.pgm").string(), "--output",
               (dir / "out.pgm").string(), "--filters",
               (dir / "nobank.json").string()})
              .status == cli::kExitFailure);
    std::vector<std::string> names;
    for (const auto &e : std::filesystem::directory_iterator(dir.path())) {
      names.push_back(e.path().filename().string());
    }
    CHECK(names == std::vector<std::string>{"tiny.pgm"});
  }

  TEST_CASE("color input super-resolves luma and beats nearest neighbour") {
    TempDir dir;
    const auto truth = ebsr::test::data_dir() / "coffee_color.ppm";
    REQUIRE(run({"degrade", "--input", truth.string(), "--output",
                 (dir / "lr.ppm").string(), "--scale", "3", "--seed", "4"})
                .status == 0);
    REQUIRE(run({"sr", "--input", (dir / "lr.ppm").string(), "--output",
                 (dir / "sr.ppm").string(), "--scale", "3"})
                .status == 0);
    REQUIRE(run({"baseline", "--method", "nn", "--input",
                 (dir / "lr.ppm").string(), "--output",
                 (dir / "nn.ppm").string(), "--scale", "3"})
                .status == 0);
    const auto sr = load_image(dir / "sr.ppm");
    REQUIRE(std::holds_alternative<ColorImage>(sr));
    CHECK(std::get<ColorImage>(sr).rows() == 96);
    const Image y = load_gray(truth);
    const double p_sr = psnr(y, load_gray(dir / "sr.ppm"));
    const double p_nn = psnr(y, load_gray(dir / "nn.ppm"));
    MESSAGE("color sample luma PSNR: ebsr " << p_sr << " dB, nn " << p_nn << " dB");
    CHECK(p_sr > p_nn);
  }

  TEST_CASE("degrade") {
    TempDir dir;
    const auto hr = write_scene(dir, 64);
    const auto out = [&](const char *name) { return (dir / name).string(); };
    REQUIRE(run({"degrade", "--input", hr.string(), "--output", out("same.pgm"),
                 "--scale", "1", "--kernel-size", "1", "--seed", "0"})
                .status == 0);
    CHECK(read_file(dir / "same.pgm") == read_file(hr));

    for (const char *name : {"a.pgm", "b.pgm"}) {
      REQUIRE(run({"degrade", "--input", hr.string(), "--output", out(name),
                   "--scale", "3", "--noise-sigma", "2", "--seed", "17"})
                  .status == 0);
    }
    CHECK(read_file(dir / "a.pgm") == read_file(dir / "b.pgm"));
    CHECK(read_file(dir / "a.pgm.json") == read_file(dir / "b.pgm.json"));
    REQUIRE(run({"degrade", "--input", hr.string(), "--output", out("c.pgm"),
                 "--scale", "3", "--noise-sigma", "2", "--seed", "18"})
                .status == 0);
    CHECK(read_file(dir / "a.pgm") != read_file(dir / "c.pgm"));

    const auto sidecar = nlohmann::json::parse(read_file(dir / "a.pgm.json"));
    CHECK(sidecar["scale"] == 3);
    CHECK(sidecar["noise_sigma"] == 2.0);
    CHECK(sidecar["seed"] == 17);
    CHECK(sidecar["kernel"]["size"] == 7);
    CHECK(sidecar["kernel"]["taps"].size() == 49);

    REQUIRE(run({"degrade", "--input", hr.string(), "--output", out("n.pgm"),
                 "--scale", "1", "--noise-sigma", "4", "--seed", "5"})
                .status == 0);
    const Image x = load_gray(hr);
    const Image clean = blur_decimate(x, gaussian_kernel(2.0 / 3.0, 3), {1, 0, 0});
    const Image diff = load_gray(dir / "n.pgm") - clean;
    const double sd = std::sqrt((diff.array() - diff.mean()).square().mean());
    MESSAGE("empirical noise std " << sd);
    CHECK(sd >= 3.0);
    CHECK(sd <= 5.0);

    CHECK(run({"degrade", "--input", hr.string(), "--output", out("neg.pgm"),
               "--noise-sigma", "-1", "--seed", "5"})
              .status == cli::kExitUsage);
    CHECK_FALSE(std::filesystem::exists(dir / "neg.pgm"));
  }

  TEST_CASE("degrade center-crops sizes that are not multiples of the scale") {
    TempDir dir;
    save_image(ebsr::test::synthetic_scene(64).block(0, 0, 50, 47), dir / "odd.pgm");
    const Outcome o = run({"degrade", "--input", (dir / "odd.pgm").string(),
                           "--output", (dir / "lr.pgm").string(), "--scale",
                           "3", "--seed", "2"});
    CHECK(o.status == 0);
    CHECK(o.err.find("center-cropped") != std::string::npos);
    const Image lr = load_gray(dir / "lr.pgm");
    CHECK(lr.rows() == 16);
    CHECK(lr.cols() == 15);
    const auto sidecar = nlohmann::json::parse(read_file(dir / "lr.pgm.json"));
    CHECK(sidecar["crop"]["top"] == 1);
    CHECK(sidecar["crop"]["left"] == 1);
  }

  TEST_CASE("eval") {
    TempDir dir;
    const auto a = write_scene(dir, 32, "a.pgm");
    const Outcome same = run({"eval", "--reference", a.string(), "--input",
                              a.string()});
    REQUIRE(same.status == 0);
    const auto doc = nlohmann::json::parse(same.out);
    CHECK(doc["psnr"] == "inf");
    CHECK(doc["ssim"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["mse"].get<double>() == 0.0);
    CHECK(nlohmann::json::parse(doc.dump()) == doc);

    Image b = load_gray(a);
    b.block(0, 0, 32, 2).array() += 40.0;
    save_image(b, dir / "b.pgm");
    const auto full = nlohmann::json::parse(
        run({"eval", "--reference", a.string(), "--input", (dir / "b.pgm").string()})
            .out);
    CHECK(full["psnr"].is_number());
    const auto shaved = nlohmann::json::parse(
        run({"eval", "--reference", a.string(), "--input",
             (dir / "b.pgm").string(), "--shave", "3"})
            .out);
    CHECK(shaved["psnr"] == "inf");

    save_image(Image::Zero(31, 32), dir / "c.pgm");
    CHECK(run({"eval", "--reference", a.string(), "--input",
               (dir / "c.pgm").string()})
              .status == cli::kExitFailure);
  }

  TEST_CASE("baseline") {
    TempDir dir;
    Image small(2, 2);
    small << 10, 20, 30, 40;
    save_image(small, dir / "s.pgm");
    REQUIRE(run({"baseline", "--method", "nn", "--scale", "2", "--input",
                 (dir / "s.pgm").string(), "--output", (dir / "nn.pgm").string()})
                .status == 0);
    CHECK(load_gray(dir / "nn.pgm") == nearest_neighbor_upscale(small, 2));

    const auto scene = write_scene(dir, 16, "scene.pgm");
    REQUIRE(run({"baseline", "--method", "bicubic", "--scale", "1", "--input",
                 scene.string(), "--output", (dir / "bi.pgm").string()})
                .status == 0);
    CHECK(read_file(dir / "bi.pgm") == read_file(scene));

    const Outcome bad = run({"baseline", "--method", "lanczos", "--input",
                             scene.string(), "--output",
                             (dir / "x.pgm").string()});
    CHECK(bad.status == cli::kExitUsage);
    CHECK(bad.err.find("nn") != std::string::npos);
    CHECK(bad.err.find("bicubic") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(dir / "x.pgm"));
  }

  TEST_CASE("deblur equals sr at scale one") {
    TempDir dir;
    const auto hr = write_scene(dir, 40);
    REQUIRE(run({"degrade", "--input", hr.string(), "--output",
                 (dir / "blur.pgm").string(), "--scale", "1", "--kernel-std",
                 "2", "--kernel-size", "7", "--noise-sigma", "2", "--seed", "3"})
                .status == 0);
    const std::vector<std::string> common{
        "--input", (dir / "blur.pgm").string(), "--kernel-std", "2",
        "--kernel-size", "7", "--iters", "4"};
    auto args = [&](std::vector<std::string> head, const std::string &out,
                    const std::string &report) {
      head.insert(head.end(), common.begin(), common.end());
      head.insert(head.end(), {"--output", (dir / out).string(), "--report",
                               (dir / report).string()});
      return head;
    };
    REQUIRE(run(args({"deblur"}, "d.pgm", "d.json")).status == 0);
    REQUIRE(run(args({"sr", "--scale", "1"}, "s.pgm", "s.json")).status == 0);
    CHECK(read_file(dir / "d.pgm") == read_file(dir / "s.pgm"));
    CHECK(without_timing(read_file(dir / "d.json")) ==
          without_timing(read_file(dir / "s.json")));
  }

  TEST_CASE("identity deblur keeps the image") {
    TempDir dir;
    const auto hr = write_scene(dir, 32);
    REQUIRE(run({"deblur", "--input", hr.string(), "--output",
                 (dir / "out.pgm").string(), "--kernel-size", "1"})
                .status == 0);
    CHECK(psnr(load_gray(hr), load_gray(dir / "out.pgm")) >= 40.0);
  }
}
