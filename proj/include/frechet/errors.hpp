#pragma once

#include <stdexcept>
#include <string>

namespace frechet {

// Invalid or malformed input data (bad values, failed validity checks).
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Size/dimension mismatch between objects that must be comparable.
class dimension_error : public input_error {
public:
    explicit dimension_error(const std::string& what) : input_error(what) {}
};

// A statistic is undefined because the sample carries no spread.
class degenerate_error : public std::runtime_error {
public:
    explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

// Too many resampling replicates were unusable to form a p-value or interval.
class resampling_error : public degenerate_error {
public:
    explicit resampling_error(const std::string& what) : degenerate_error(what) {}
};

}  // namespace frechet
