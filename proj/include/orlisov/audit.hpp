#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace orlisov {

/// Outcome of a sampled structural check. `worst_margin` is signed: negative
/// values measure the size of the worst violation.
struct AuditReport {
  std::string name;
  bool pass = true;
  double worst_margin = 0.0;
  std::size_t samples = 0;
  std::vector<std::pair<std::string, double>> values;
  std::string note;

  double value(const std::string& key) const;
};

}  // namespace orlisov
