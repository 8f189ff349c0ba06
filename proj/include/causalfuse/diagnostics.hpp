#ifndef CAUSALFUSE_DIAGNOSTICS_HPP_
#define CAUSALFUSE_DIAGNOSTICS_HPP_

#include <string>
#include <vector>

namespace causalfuse {

/// Non-fatal findings (gate approximations, degenerate nodes, ...) collected
/// during parsing and transformation. Kept separate from results so callers
/// can route them to a diagnostics channel.
using Diagnostics = std::vector<std::string>;

inline void warn(Diagnostics* sink, std::string message) {
  if (sink != nullptr) sink->push_back(std::move(message));
}

}  // namespace causalfuse

#endif  // CAUSALFUSE_DIAGNOSTICS_HPP_
