#pragma once

// Test-only reference implementations. None of these share code with the
// library paths they check: the Kneser-Ney oracle rescans raw padded token
// sequences for every query, and the ordering oracle ranks by sorting.

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace oracle {

/// Interpolated Kneser-Ney by direct counting over padded sentences.
class NaiveKneserNey {
 public:
  NaiveKneserNey(const std::vector<std::vector<std::string>>& sentences, int order, double discount)
      : order_(order), d_(discount) {
    for (const auto& s : sentences) {
      std::vector<std::string> padded(static_cast<std::size_t>(order - 1), "<s>");
      padded.insert(padded.end(), s.begin(), s.end());
      padded.push_back("</s>");
      for (const auto& t : s) vocab_.insert(t);
      padded_.push_back(std::move(padded));
    }
    vocab_.insert("</s>");
    vocab_.insert("<unk>");
  }

  /// Predictive vocabulary (everything but <s>).
  const std::set<std::string>& vocab() const { return vocab_; }

  double prob(const std::vector<std::string>& context, const std::string& w) const {
    return level(order_, context, w);
  }

 private:
  // Does padded[i-len+1 .. i] equal `gram`?
  static bool ends_at(const std::vector<std::string>& p, std::size_t i, const std::vector<std::string>& gram) {
    if (gram.size() > i + 1) return false;
    for (std::size_t k = 0; k < gram.size(); ++k) {
      if (p[i + 1 - gram.size() + k] != gram[k]) return false;
    }
    return true;
  }

  // Count of `ctx + w` at level n: raw occurrences at the top order,
  // number of distinct left neighbours below it.
  double count(int n, const std::vector<std::string>& ctx, const std::string& w) const {
    std::vector<std::string> gram = ctx;
    gram.push_back(w);
    if (n == order_) {
      double c = 0;
      for (const auto& p : padded_) {
        for (std::size_t i = static_cast<std::size_t>(order_ - 1); i < p.size(); ++i) {
          if (ends_at(p, i, gram)) ++c;
        }
      }
      return c;
    }
    std::set<std::string> left;
    for (const auto& p : padded_) {
      for (std::size_t i = static_cast<std::size_t>(order_ - 1); i < p.size(); ++i) {
        if (ends_at(p, i, gram)) left.insert(p[i - static_cast<std::size_t>(n)]);
      }
    }
    return static_cast<double>(left.size());
  }

  double level(int n, const std::vector<std::string>& ctx, const std::string& w) const {
    const double lower =
        n == 1 ? 1.0 / static_cast<double>(vocab_.size())
               : level(n - 1, std::vector<std::string>(ctx.begin() + 1, ctx.end()), w);
    double total = 0.0;
    double types = 0.0;
    for (const auto& v : vocab_) {
      const double c = count(n, ctx, v);
      total += c;
      if (c > 0) ++types;
    }
    if (total == 0.0) return lower;
    return std::max(count(n, ctx, w) - d_, 0.0) / total + d_ * types / total * lower;
  }

  int order_;
  double d_;
  std::set<std::string> vocab_;
  std::vector<std::vector<std::string>> padded_;
};

/// Ordering score by ranking: sort the three levels best-first (stable on
/// easy, medium, hard) and look the permutation up.
inline double logical_score_by_rank(double e, double m, double h, bool higher_is_better) {
  if (!higher_is_better) {
    e = -e;
    m = -m;
    h = -h;
  }
  if (e == m && m == h) return 0.0;
  std::array<std::pair<char, double>, 3> levels{{{'e', e}, {'m', m}, {'h', h}}};
  std::stable_sort(levels.begin(), levels.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const std::string perm{levels[0].first, levels[1].first, levels[2].first};
  if (perm == "emh") return 0.75;
  if (perm == "ehm") return 0.375;
  if (perm == "mhe" || perm == "meh") return 0.0;
  if (perm == "hem") return -0.375;
  return -0.75;  // "hme"
}

inline double uid_sl_direct(const std::vector<double>& s, double k) {
  long double acc = 0;
  for (const double v : s) acc += std::pow(static_cast<long double>(v), static_cast<long double>(k));
  return static_cast<double>(acc / s.size());
}

inline double uid_var_direct(const std::vector<double>& s, double mu) {
  long double acc = 0;
  for (const double v : s) acc += (static_cast<long double>(v) - mu) * (static_cast<long double>(v) - mu);
  return static_cast<double>(acc / s.size());
}

}  // namespace oracle
