#pragma once

#include <string>

namespace grulstm {

// Shortest decimal string that round-trips the exact 64-bit value.
std::string format_double(double v);

// Strict double parse of the whole token; returns false on trailing junk.
bool parse_double(const std::string& token, double& out);

bool parse_long(const std::string& token, long long& out);

}  // namespace grulstm
