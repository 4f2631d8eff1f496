#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "accretia/scenario.hpp"

namespace accretia::scenario {

/// A scenario shipped with the library. `config` is its JSON source.
struct CatalogueEntry {
  std::string_view id;
  Theorem theorem;
  std::string_view summary;
  std::string_view config;
};

/// Bundled scenarios in a fixed order.
std::span<const CatalogueEntry> catalogue();

const CatalogueEntry* find_bundled(std::string_view id);

/// Parsed config of a bundled scenario. Throws std::out_of_range for unknown ids.
ScenarioConfig bundled_config(std::string_view id);

}  // namespace accretia::scenario
