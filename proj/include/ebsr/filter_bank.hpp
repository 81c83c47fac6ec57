#ifndef EBSR_FILTER_BANK_HPP
#define EBSR_FILTER_BANK_HPP

#include "ebsr/image.hpp"
#include "ebsr/kernel.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebsr {

class FilterBankError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class FilterBankSource { BuiltinDerivatives, LoadedFile };

/// Ordered expert filters of the field-of-experts prior. Every filter is
/// zero-mean, so constant images produce no response.
struct FilterBank {
  std::string name;
  FilterBankSource source = FilterBankSource::BuiltinDerivatives;
  std::vector<Kernel2D> filters;

  std::size_t size() const { return filters.size(); }

  /// Throws FilterBankError on an empty bank or a filter whose taps do not
  /// sum to zero within `zero_mean_tolerance`.
  void validate(double zero_mean_tolerance) const;
};

inline constexpr double kBuiltinZeroMeanTolerance = 1e-9;
inline constexpr double kLoadedZeroMeanTolerance = 1e-6;

/// Eight unit-norm 3x3 derivative stencils: first differences along x, y and
/// both diagonals, second differences along x and y, the 5-point Laplacian and
/// the mixed second derivative.
FilterBank default_filter_bank();

/// JSON: {"version":1,"name":s,"filters":[{"height":h,"width":w,"taps":[..]}]}
FilterBank load_filter_bank(const std::filesystem::path &path);
FilterBank parse_filter_bank(const std::string &json_text);
std::string serialize_filter_bank(const FilterBank &bank);
void save_filter_bank(const FilterBank &bank, const std::filesystem::path &path);

/// Element l is conv2_circular(img, k_l).
std::vector<Image> filter_responses(const FilterBank &bank, const Image &img);

} // namespace ebsr

#endif // EBSR_FILTER_BANK_HPP
