#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "config.hpp"
#include "output.hpp"

namespace cli {

struct Run {
  Section cfg;
  Outputs out;
  std::optional<std::uint64_t> seed_flag;
  unsigned workers;
  std::optional<double> tolerance_flag;
  //! Headline numbers echoed into the manifest.
  nlohmann::json summary = nlohmann::json::object();
  //! Values the command actually used for seed and tolerance.
  nlohmann::json used = nlohmann::json::object();
};

//! Each returns 0 when every tolerance is met and 1 otherwise.
int cmd_sticky(Run& run);
int cmd_hopflax(Run& run);
int cmd_flowmap(Run& run);
int cmd_genpot(Run& run);
int cmd_fronttrack(Run& run);
int cmd_mc_stats(Run& run);
int cmd_fm_shocks(Run& run);
int cmd_crosscheck(Run& run);

}  // namespace cli
