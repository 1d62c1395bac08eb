#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hjr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDivergence = 2;

/**
 * Batch front end. `args` excludes the program name.
 *
 * Flags: --config PATH (required), --output-dir PATH (default ./out),
 * --emit field|csv|contours (repeatable), --traj "x0,x1,..." (repeatable),
 * --quiet. Writes value.hjrf, value.csv, contours_<slice>.csv,
 * trajectory_<i>.csv and manifest.txt into the output directory.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hjr
