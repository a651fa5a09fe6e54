#pragma once

#include <string>

namespace sortforge::fixtures {

// Writes the bundled synthetic capture set under `root`:
//   captures/            12 green-screen views (3 categories x 4 views)
//   manual/              analytic ground-truth object masks per capture
//   background.png       target-scene background plate
//   target_patch.png     object crop from the sorting scene (HM/EQ target)
//   manifest.json        capture manifest referencing all of the above
//   sim/items.jsonl      20-item conveyor stream
//   sim/config.json      simulator configuration
//   propagate.json       box-propagation configuration
// Everything is procedurally generated and deterministic.
void write_fixture_set(const std::string& root);

} // namespace sortforge::fixtures
