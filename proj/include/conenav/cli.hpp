#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "conenav/geometry.hpp"
#include "conenav/sphere_world.hpp"

namespace conenav {

/// Command-line entry point. Subcommands: simulate, batch, field,
/// equilibria, lidar-debug, validate. Returns 0 on success, 1 on usage or
/// validation errors, 2 on safety/assertion failures.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Extracts the ball decomposition of an all-ball environment; throws
/// InputError when an implicit primitive is present.
SphereWorld sphere_world_from_environment(const Environment& env);

}  // namespace conenav
