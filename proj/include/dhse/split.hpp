#pragma once

#include <vector>

#include "dhse/graph.hpp"

namespace dhse {

// Disjoint node partition: labeled training rows, labeled validation rows,
// and the remainder (test rows double as the unlabeled set).
struct Split {
  std::vector<NodeId> train;
  std::vector<NodeId> valid;
  std::vector<NodeId> test;
};

}  // namespace dhse
