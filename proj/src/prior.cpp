#include "humeval/prior.hpp"

#include <cmath>
#include <limits>

#include "humeval/error.hpp"

namespace humeval {

double prior_score(double positive_logit, double negative_logit) {
  if (!std::isfinite(positive_logit) || !std::isfinite(negative_logit)) {
    throw Error(ErrorKind::input, "prior logits must be finite");
  }
  const double diff = positive_logit - negative_logit;
  double p;
  if (diff >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-diff));
  } else {
    const double e = std::exp(diff);
    p = e / (1.0 + e);
  }
  // Rounding sends |diff| > ~37 to exactly 1 and |diff| > ~745 to exactly 0.
  constexpr double lo = std::numeric_limits<double>::denorm_min();
  const double hi = std::nextafter(1.0, 0.0);
  return std::fmin(std::fmax(p, lo), hi);
}

double prior_score(const VlmPriorRecord& record) {
  return prior_score(record.positive_logit, record.negative_logit);
}

}  // namespace humeval
