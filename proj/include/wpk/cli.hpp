#pragma once

namespace wpk::cli {

/// Batch front end. Subcommands: validate, flow, wpt, propagate, transport,
/// detect. Returns the process exit status: 0 success, 1 failed validation,
/// 2 configuration error, 3 numerical failure.
int run(int argc, const char* const* argv);

}  // namespace wpk::cli
