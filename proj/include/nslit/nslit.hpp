#pragma once

#include "errors.hpp"
#include "fringe.hpp"
#include "kpower.hpp"
#include "resolvability.hpp"
#include "rng.hpp"
#include "shot_noise.hpp"
#include "util.hpp"

namespace nslit {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace nslit
