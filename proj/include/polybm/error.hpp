#pragma once

#include <stdexcept>
#include <string>

namespace polybm {

// Precondition violations throw std::invalid_argument (bad shape or sign) or
// std::out_of_range (degree/index/domain). Failures of an otherwise valid
// computation throw NumericalError.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace polybm
