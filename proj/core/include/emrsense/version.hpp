#pragma once

#define EMRSENSE_VERSION_STRING "0.1.0"

namespace emrsense {

constexpr const char* version() noexcept { return EMRSENSE_VERSION_STRING; }

}  // namespace emrsense
