#pragma once

#include <string>
#include <vector>

#include "orlisov/audit.hpp"
#include "orlisov/config.hpp"

namespace orlisov {

/// Names of the property groups, in execution order.
std::vector<std::string> property_groups();

/// Runs every property group matching one of `filters` (all when empty). A
/// filter matches a group or row whose name starts with it. A property that
/// throws is reported as a failed row carrying the message.
std::vector<AuditReport> run_property_suite(const RunConfig& cfg,
                                            const std::vector<std::string>& filters = {});

}  // namespace orlisov
