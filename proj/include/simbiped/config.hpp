#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simbiped/scenario.hpp"

namespace simbiped::config {

// Parses a JSON document. Fields absent from the document take the
// scenario's defaults; `scenario` replaces the document's id when given.
// Throws ParseError naming the offending key.
scenario::ScenarioConfig parse_config(std::string_view json_text,
                                      std::optional<scenario::ScenarioId> scenario = {});
// Throws IoError when unreadable, ParseError when malformed.
scenario::ScenarioConfig load_config(const std::string& path,
                                     std::optional<scenario::ScenarioId> scenario = {});

std::string dump_config(const scenario::ScenarioConfig& config);
void save_config(const scenario::ScenarioConfig& config, const std::string& path);

// Summary as a JSON object; `steps` counts support exchanges.
std::string dump_summary(const scenario::Summary& summary);

// Applies "a.b.c=value" overrides; value is parsed as JSON, falling back to
// a plain string. Throws ParseError for unknown keys or bad values.
scenario::ScenarioConfig apply_overrides(const scenario::ScenarioConfig& config,
                                         const std::vector<std::string>& overrides);

// Sweep axis parsed from "key:lo:hi:n".
struct GridAxis {
  std::string key;
  double lo = 0.0;
  double hi = 0.0;
  int n = 1;

  std::vector<double> values() const;
};

GridAxis parse_grid(std::string_view text);

}  // namespace simbiped::config
