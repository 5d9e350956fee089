#pragma once

#include <string>

#include "iim/iim.hpp"

namespace fixtures {

inline const char* const kMixed7 =
    "a1 <- b1 + b2\n"
    "a2 <- b1*b3 + b2\n"
    "a3 <- b1*b2*b3\n"
    "a4 <- b1 + b2 + b3\n"
    "b1 <- a1 + a2*a3\n"
    "b2 <- a1 + a3\n"
    "b3 <- a1*a2\n";

inline iim::DependencySystem mixed7() { return iim::parse_text(kMixed7); }

/// b1 <- a1, a2 <- b1, b2 <- a2, a3 <- b3.
inline iim::DependencySystem chain() { return iim::parse_text("b1 <- a1\na2 <- b1\nb2 <- a2\na3 <- b3\n"); }

inline iim::EntitySet set(const iim::DependencySystem& s, std::initializer_list<std::string_view> names) {
  return s.make_set(names);
}

}  // namespace fixtures
