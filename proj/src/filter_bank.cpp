#include "ebsr/filter_bank.hpp"

#include "ebsr/convolution.hpp"
#include "ebsr/parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace ebsr {

using nlohmann::json;

void FilterBank::validate(double zero_mean_tolerance) const {
  if (filters.empty()) {
    throw FilterBankError("filter bank '" + name + "' has no filters");
  }
  for (std::size_t l = 0; l < filters.size(); ++l) {
    const double s = filters[l].sum();
    if (!(std::abs(s) <= zero_mean_tolerance)) {
      throw FilterBankError("filter " + std::to_string(l) + " of '" + name +
                            "' is not zero-mean (sum " + std::to_string(s) +
                            ")");
    }
  }
}

FilterBank default_filter_bank() {
  auto stencil = [](std::initializer_list<double> taps) {
    Image k(3, 3);
    std::copy(taps.begin(), taps.end(), k.data());
    return Kernel2D(k / k.norm());
  };
  FilterBank bank;
  bank.name = "derivatives-3x3";
  bank.source = FilterBankSource::BuiltinDerivatives;
  bank.filters = {
      stencil({0, 0, 0, 0, -1, 1, 0, 0, 0}),   // d/dx
      stencil({0, 0, 0, 0, -1, 0, 0, 1, 0}),   // d/dy
      stencil({0, 0, 0, 0, -1, 0, 0, 0, 1}),   // diagonal
      stencil({0, 0, 0, 0, -1, 0, 1, 0, 0}),   // anti-diagonal
      stencil({0, 0, 0, 1, -2, 1, 0, 0, 0}),   // d2/dx2
      stencil({0, 1, 0, 0, -2, 0, 0, 1, 0}),   // d2/dy2
      stencil({0, 1, 0, 1, -4, 1, 0, 1, 0}),   // Laplacian
      stencil({1, 0, -1, 0, 0, 0, -1, 0, 1}),  // d2/dxdy
  };
  return bank;
}

FilterBank parse_filter_bank(const std::string &json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw FilterBankError(std::string("filter bank: invalid JSON: ") +
                          e.what());
  }
  auto fail = [](const std::string &msg) {
    throw FilterBankError("filter bank schema: " + msg);
  };
  if (!doc.is_object()) {
    fail("top level must be an object");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != 1) {
    fail("\"version\" must be 1");
  }
  if (!doc.contains("name") || !doc["name"].is_string()) {
    fail("\"name\" must be a string");
  }
  if (!doc.contains("filters") || !doc["filters"].is_array()) {
    fail("\"filters\" must be an array");
  }
  FilterBank bank;
  bank.name = doc["name"].get<std::string>();
  bank.source = FilterBankSource::LoadedFile;
  for (const auto &f : doc["filters"]) {
    if (!f.is_object() || !f.contains("height") || !f.contains("width") ||
        !f.contains("taps") || !f["height"].is_number_integer() ||
        !f["width"].is_number_integer() || !f["taps"].is_array()) {
      fail("each filter needs integer height/width and a taps array");
    }
    const long rows = f["height"].get<long>();
    const long cols = f["width"].get<long>();
    if (rows < 1 || cols < 1 || rows % 2 == 0 || cols % 2 == 0) {
      fail("filter dimensions must be odd and positive, got " +
           std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (static_cast<long>(f["taps"].size()) != rows * cols) {
      fail("taps length does not equal height*width");
    }
    Image taps(rows, cols);
    for (long i = 0; i < rows * cols; ++i) {
      const auto &t = f["taps"][i];
      if (!t.is_number()) {
        fail("taps must be numbers");
      }
      taps.data()[i] = t.get<double>();
    }
    if (!taps.allFinite()) {
      fail("taps must be finite");
    }
    bank.filters.emplace_back(std::move(taps));
  }
  bank.validate(kLoadedZeroMeanTolerance);
  return bank;
}

FilterBank load_filter_bank(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw FilterBankError("cannot open filter bank " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_filter_bank(ss.str());
}

std::string serialize_filter_bank(const FilterBank &bank) {
  json doc;
  doc["version"] = 1;
  doc["name"] = bank.name;
  doc["filters"] = json::array();
  for (const auto &k : bank.filters) {
    json f;
    f["height"] = k.rows();
    f["width"] = k.cols();
    f["taps"] = std::vector<double>(k.taps().data(),
                                    k.taps().data() + k.taps().size());
    doc["filters"].push_back(std::move(f));
  }
  return doc.dump(2);
}

void save_filter_bank(const FilterBank &bank,
                      const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw FilterBankError("cannot write filter bank " + path.string());
  }
  out << serialize_filter_bank(bank) << '\n';
}

std::vector<Image> filter_responses(const FilterBank &bank, const Image &img) {
  std::vector<Image> out(bank.size());
  parallel_for(bank.size(), [&](std::size_t l) {
    out[l] = conv2_circular(img, bank.filters[l]);
  });
  return out;
}

} // namespace ebsr
