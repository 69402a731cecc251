#ifndef SQPSIM_SIM_TEXT_H_
#define SQPSIM_SIM_TEXT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sqpsim::text {

std::string_view Trim(std::string_view s);
std::vector<std::string_view> Split(std::string_view s, char sep);

// Whole-string parses; surrounding whitespace is not accepted.
std::optional<int64_t> ParseInt(std::string_view s);
std::optional<double> ParseDouble(std::string_view s);

// Shortest round-trip representation.
std::string FormatDouble(double v);

}  // namespace sqpsim::text

#endif  // SQPSIM_SIM_TEXT_H_
