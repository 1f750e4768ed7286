#pragma once

// JSON command dispatcher over the mutating operations. One command object
// names an `op`, carries `at` (timestamp) and `actor`, plus op-specific
// arguments in the same shape the bundle document uses. The CLI, the Python
// module and the property tests all drive the engine through here.

#include <string>
#include <vector>

#include "recap/diagnostics.hpp"
#include "recap/model.hpp"

namespace recap {

// Supported `op` values.
const std::vector<std::string>& command_names();

// E_USAGE for unknown ops or malformed arguments; otherwise whatever the
// underlying operation reports. On success exactly one event is appended.
Result<ProjectBundle> execute(const ProjectBundle& bundle, const Json& command);

}  // namespace recap
