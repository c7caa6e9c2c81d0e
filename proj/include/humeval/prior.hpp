#pragma once

#include "humeval/types.hpp"

namespace humeval {

/// Softmax of the VLM's "Yes"/"No" logits, i.e. logistic(positive - negative).
/// Saturated results are kept strictly inside (0, 1). Throws ErrorKind::input
/// on non-finite logits.
double prior_score(double positive_logit, double negative_logit);
double prior_score(const VlmPriorRecord& record);

}  // namespace humeval
