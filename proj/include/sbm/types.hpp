#pragma once

#include <cstdint>
#include <vector>

namespace sbm {

using NodeId = std::uint32_t;

/// Sorted, duplicate-free set of node ids.
using Support = std::vector<NodeId>;

}  // namespace sbm
