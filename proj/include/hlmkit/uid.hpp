#pragma once

// Uniform-information-density difficulty scores. Both return the mean
// quantity itself (the inverse UID), so higher means harder.
//
// mu_lang is applied in whatever log base the surprisals are expressed in;
// the default 3.8845 carries no unit of its own.

#include <cmath>
#include <span>
#include <vector>

#include "hlmkit/error.hpp"

namespace hlmkit {

struct UidSlConfig {
  double k = 1.25;
};

struct UidVarConfig {
  double mu_lang = 3.8845;
};

namespace detail {

inline void require_nonempty(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyDocument, "surprisal sequence is empty");
}

}  // namespace detail

/// Mean of s^k over the sequence.
inline double uid_superlinear(std::span<const double> surprisals, const UidSlConfig& cfg = {}) {
  detail::require_nonempty(surprisals);
  if (!(cfg.k > 0.0) || !std::isfinite(cfg.k)) {
    throw Error(ErrorCode::ValidationError, "k must be a finite value > 0");
  }
  double sum = 0.0;
  for (const double s : surprisals) {
    if (!(s >= 0.0)) throw Error(ErrorCode::ValidationError, "surprisal must be >= 0");
    sum += std::pow(s, cfg.k);
  }
  return sum / static_cast<double>(surprisals.size());
}

/// Mean squared deviation from mu_lang.
inline double uid_variance(std::span<const double> surprisals, const UidVarConfig& cfg = {}) {
  detail::require_nonempty(surprisals);
  if (!std::isfinite(cfg.mu_lang)) throw Error(ErrorCode::ValidationError, "mu_lang must be finite");
  double sum = 0.0;
  for (const double s : surprisals) {
    const double d = s - cfg.mu_lang;
    sum += d * d;
  }
  return sum / static_cast<double>(surprisals.size());
}

/// Opt-in sentence-level variant: the unweighted mean of per-sentence scores.
template <typename Score>
double per_sentence_mean(const std::vector<std::vector<double>>& sentences, Score&& score) {
  if (sentences.empty()) throw Error(ErrorCode::EmptyDocument, "document has no sentences");
  double sum = 0.0;
  for (const auto& s : sentences) sum += score(std::span<const double>(s));
  return sum / static_cast<double>(sentences.size());
}

}  // namespace hlmkit
