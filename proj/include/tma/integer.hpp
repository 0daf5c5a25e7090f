#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace tma {

/// Unbounded integers used by the concrete semantics and interval bounds.
using Integer = boost::multiprecision::cpp_int;

inline std::string to_string(const Integer& value) { return value.str(); }

}  // namespace tma
