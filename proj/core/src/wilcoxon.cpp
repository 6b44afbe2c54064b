#include "sipseq/wilcoxon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <string>

#include "sipseq/errors.hpp"

namespace sipseq {

std::string_view alternative_name(Alternative alt) {
  switch (alt) {
    case Alternative::kLess: return "less";
    case Alternative::kGreater: return "greater";
    case Alternative::kTwoSided: return "two_sided";
  }
  return "?";
}

std::optional<Alternative> parse_alternative(std::string_view name) {
  if (name == "less") return Alternative::kLess;
  if (name == "greater") return Alternative::kGreater;
  if (name == "two_sided" || name == "two-sided") return Alternative::kTwoSided;
  return std::nullopt;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    Alternative alternative) {
  if (pairs.empty()) throw StatsError("wilcoxon test needs at least one pair");

  std::vector<double> diffs;
  diffs.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const double d = a - b;
    if (d != 0.0) diffs.push_back(d);
  }
  const std::size_t n = diffs.size();
  if (n == 0) throw StatsError("wilcoxon test is undefined: all differences are zero");
  if (n > kMaxExactPairs) {
    throw StatsError("exact wilcoxon test supports at most " + std::to_string(kMaxExactPairs) +
                     " non-zero differences, got " + std::to_string(n));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(diffs[i]) < std::abs(diffs[j]);
  });

  // Doubled ranks keep tied averages integral: a tie group spanning
  // positions first..last (1-based) shares rank (first + last) / 2.
  std::vector<std::uint32_t> rank2(n);
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo;
    while (hi + 1 < n && std::abs(diffs[order[hi + 1]]) == std::abs(diffs[order[lo]])) ++hi;
    const auto shared = static_cast<std::uint32_t>((lo + 1) + (hi + 1));
    for (std::size_t k = lo; k <= hi; ++k) rank2[order[k]] = shared;
    lo = hi + 1;
  }

  std::uint64_t observed2 = 0;
  std::uint64_t total2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total2 += rank2[i];
    if (diffs[i] > 0) observed2 += rank2[i];
  }

  // counts[s] = number of sign patterns whose doubled W+ equals s.
  std::vector<std::uint64_t> counts(total2 + 1, 0);
  counts[0] = 1;
  std::uint64_t reach = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t r = rank2[i];
    for (std::uint64_t s = reach + 1; s-- > 0;) {
      if (counts[s]) counts[s + r] += counts[s];
    }
    reach += r;
  }

  std::uint64_t at_or_below = 0;
  std::uint64_t at_or_above = 0;
  for (std::uint64_t s = 0; s <= total2; ++s) {
    if (s <= observed2) at_or_below += counts[s];
    if (s >= observed2) at_or_above += counts[s];
  }
  const long double patterns = std::ldexp(1.0L, static_cast<int>(n));

  WilcoxonResult result;
  result.n = n;
  result.statistic = static_cast<double>(observed2) / 2.0;
  result.p_less = static_cast<double>(static_cast<long double>(at_or_below) / patterns);
  result.p_greater = static_cast<double>(static_cast<long double>(at_or_above) / patterns);
  switch (alternative) {
    case Alternative::kLess: result.p_value = result.p_less; break;
    case Alternative::kGreater: result.p_value = result.p_greater; break;
    case Alternative::kTwoSided:
      result.p_value = std::min(1.0, 2.0 * std::min(result.p_less, result.p_greater));
      break;
  }
  return result;
}

namespace {

bool parse_double(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

std::vector<std::pair<double, double>> read_pairs(std::istream& in) {
  std::vector<std::pair<double, double>> pairs;
  std::string line;
  std::size_t line_no = 0;
  bool first_record = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (text.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const auto comma = text.find(',');
    double a = 0.0;
    double b = 0.0;
    const bool ok = comma != std::string_view::npos && parse_double(text.substr(0, comma), a) &&
                    parse_double(text.substr(comma + 1), b);
    if (!ok) {
      if (first_record) {
        first_record = false;
        continue;  // header
      }
      throw ParseError(line_no, "expected 'a,b' with two numbers");
    }
    first_record = false;
    pairs.emplace_back(a, b);
  }
  return pairs;
}

std::vector<std::pair<double, double>> read_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open pairs file " + path.string());
  return read_pairs(in);
}

}  // namespace sipseq
