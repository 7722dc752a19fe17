#pragma once

#include <stdexcept>
#include <string>

namespace grulstm {

// Every failure carries a short machine-parseable code next to the human
// message. The CLI prints "error code=<code> <message>" on one line.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

namespace errc {
inline constexpr const char* kDim = "E_DIM";                // shape mismatch
inline constexpr const char* kSchema = "E_SCHEMA";          // CSV header problem
inline constexpr const char* kParse = "E_PARSE";            // non-numeric cell, bad file body
inline constexpr const char* kValidation = "E_VALIDATION";  // value out of contract range
inline constexpr const char* kIo = "E_IO";                  // file system failure
inline constexpr const char* kFormat = "E_FORMAT";          // model/baseline file malformed
inline constexpr const char* kNumeric = "E_NUMERIC";        // NaN/Inf where finite required
inline constexpr const char* kUsage = "E_USAGE";            // bad CLI invocation
inline constexpr const char* kContract = "E_CONTRACT";      // API precondition broken
}  // namespace errc

}  // namespace grulstm
