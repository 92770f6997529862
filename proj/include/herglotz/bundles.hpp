#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "herglotz/io.hpp"

namespace herglotz {

/// A reference problem shipped with the library: its config plus the values
/// the acceptance tests expect from it.
struct BundledProblem {
  std::string name;
  std::string description;
  ProblemConfig config;
  nlohmann::ordered_json expected;
};

const std::vector<BundledProblem>& bundled_problems();

/// Throws Config for an unknown name.
const BundledProblem& find_bundle(std::string_view name);

}  // namespace herglotz
