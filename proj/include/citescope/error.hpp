#ifndef CITESCOPE_ERROR_HPP
#define CITESCOPE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace citescope {

// Domain and input errors raised by the library. The CLI maps these to
// exit status 2; anything else is treated as an internal failure.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace citescope

#endif
