#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace conecell {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Library errors carry a stable machine-readable code next to the message.
struct Error : std::runtime_error {
    std::string code;
    Error(std::string c, const std::string& msg)
        : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
    throw Error(code, msg);
}

inline int sgn(const Int& v) { return v == 0 ? 0 : (v > 0 ? 1 : -1); }

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

}  // namespace conecell
