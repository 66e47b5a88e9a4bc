#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <string>

namespace rarefan {

// shortest decimal that round-trips to the same double
inline std::string format_number(double v)
{
    std::array<char, 32> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline std::string format_number(std::int64_t v) { return std::to_string(v); }

}
