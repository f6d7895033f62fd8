#ifndef CAPDDP_ERROR_HPP
#define CAPDDP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace capddp {

enum class ErrorCode {
    InvalidArgument = 1,
    Config = 2,
    Io = 3,
    Numerical = 4,
    State = 5,
};

// All library failures are reported through this exception; the C API maps
// the code onto capddp_status.
class Error : public std::runtime_error {
 public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

 private:
    ErrorCode code_;
};

}  // namespace capddp

#endif  // CAPDDP_ERROR_HPP
