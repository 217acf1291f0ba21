#pragma once

#include <stdexcept>

namespace quatconf {

// A construction's hypothesis does not hold for the given input (wrong holomorphy
// class, surjective normal, value outside the ball, ...).
class HypothesisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace quatconf
