#pragma once

#include <string>

#ifndef EXTREE_VERSION
#define EXTREE_VERSION "0.0.0"
#endif

namespace extree {

inline std::string version_string() { return std::string("extree ") + EXTREE_VERSION; }

}  // namespace extree
