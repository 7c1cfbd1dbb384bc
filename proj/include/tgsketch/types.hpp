#pragma once

#include <cstdint>
#include <limits>

namespace tgsketch {

using node_id = std::uint32_t;
using type_id = std::uint16_t;
using timestamp_t = std::int64_t;

inline constexpr timestamp_t min_timestamp = std::numeric_limits<timestamp_t>::min();

}  // namespace tgsketch
