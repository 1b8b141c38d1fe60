#pragma once

#include <string>
#include <vector>

#include "hs2/coupling.hpp"
#include "hs2/errors.hpp"
#include "hs2/params.hpp"

namespace hs2 {

/// A parameter set for each row of the stability table, with the minimizer the
/// sweeps perturb (the degenerate one where there is one).
struct CaseInstance {
  std::string label;
  HSParams params;
  ExtendedT t0;
};

inline CaseInstance case_instance(const std::string& label) {
  if (label == "I") return {label, make_params(3, 1.0, 2, 2, 1, 1, 1), ExtendedT::finite(1.0)};
  if (label == "II.1") {
    const auto d = degenerate_case_params(1.4, 1.6, 1.0);
    return {label, make_params(3, 1.5, 1.4, 1.6, d.lambda, d.mu, 1.0), ExtendedT::finite(d.t0)};
  }
  if (label == "II.2") return {label, make_params(3, 1.0, 2, 2, 2, 1, 1), ExtendedT::finite(0.0)};
  if (label == "II.3") return {label, make_params(3, 1.0, 2, 2, 1, 2, 1), ExtendedT::infinity()};
  // alpha = 3, beta = 2: g''(0) = 0 but g is nondegenerate at infinity.
  if (label == "II.4") return {label, make_params(3, 0.5, 3, 2, 2, 2, 1), ExtendedT::finite(0.0)};
  if (label == "CONSTANT_G")
    return {label, make_params(3, 1.0, 2, 2, 2, 2, 1), ExtendedT::finite(1.0)};
  throw DomainError("unknown case preset '" + label +
                    "' (expected I, II.1, II.2, II.3, II.4 or CONSTANT_G)");
}

inline std::vector<std::string> case_instance_labels() {
  return {"I", "II.1", "II.2", "II.3", "II.4", "CONSTANT_G"};
}

}  // namespace hs2
