#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace sipseq {

/// Alternative hypothesis on the paired difference a - b.
enum class Alternative { kLess, kGreater, kTwoSided };

std::string_view alternative_name(Alternative alt);
std::optional<Alternative> parse_alternative(std::string_view name);

struct WilcoxonResult {
  double statistic = 0.0;  // W+, the rank sum of positive differences
  double p_value = 1.0;
  std::size_t n = 0;       // pairs left after dropping zero differences
  double p_less = 1.0;
  double p_greater = 1.0;
};

/// Largest number of non-zero differences the exact null distribution is
/// computed for (2^n must fit the 64-bit pattern counts).
inline constexpr std::size_t kMaxExactPairs = 60;

/// Exact Wilcoxon signed-rank test.
///
/// Zero differences are dropped and tied magnitudes share the average rank.
/// The null distribution of W+ over all 2^n equally likely sign assignments
/// is counted exactly (subset-sum over doubled ranks), so p-values are exact
/// pattern fractions. Two-sided p is min(1, 2 * min(p_less, p_greater)).
/// Throws StatsError when every difference is zero, when no pairs are given,
/// or when more than kMaxExactPairs remain.
WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    Alternative alternative);

/// Pairs file: one `a,b` record per line; an optional non-numeric header line
/// is skipped. Throws ParseError with the line number on malformed records.
std::vector<std::pair<double, double>> read_pairs(std::istream& in);
std::vector<std::pair<double, double>> read_pairs(const std::filesystem::path& path);

}  // namespace sipseq
