#pragma once

#include <stdexcept>
#include <string>

namespace landval {

enum class errc {
    domain,          // invalid parameters or inputs
    kink,            // evaluation at a non-differentiable regime boundary
    numeric,         // iteration failed to converge
    internal,        // dual-route cross-check disagreement
    config,          // config file problem (CLI exit 2)
    no_certificate,  // tail bound unavailable (CLI exit 3)
};

class Error : public std::runtime_error {
public:
    Error(errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace landval
