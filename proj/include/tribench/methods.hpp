#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tribench/triangulation.hpp"

namespace tribench {

/// Named triangulation method with its view-count constraints. Two-view
/// closed-form solvers have max_views = 2; the N-view extensions are
/// unbounded (max_views = 0).
struct Method {
  std::string name;
  int min_views = 2;
  int max_views = 0;  // 0 = any
  std::function<TriangulationResult(std::span<const Camera>,
                                    std::span<const Pixel>)>
      solve;

  bool supports(int n_views) const {
    return n_views >= min_views && (max_views == 0 || n_views <= max_views);
  }
};

/// All registered methods: midpoint, midpoint-irls, l2, l1, angular-l1,
/// angular-l2 (two-view) and l2-refine, l1-irls (N-view extensions).
const std::vector<Method>& method_registry();

/// Throws FormatError for unknown names.
const Method& find_method(const std::string& name);

/// Parses a comma-separated method list; empty string means the default set
/// for the given view count: the six two-view methods for n = 2, and
/// {midpoint, midpoint-irls, l2-refine, l1-irls} for n > 2.
std::vector<const Method*> select_methods(const std::string& comma_list, int n_views);

}  // namespace tribench
