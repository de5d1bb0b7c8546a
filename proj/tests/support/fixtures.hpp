#pragma once

#include <map>
#include <string>

#include "multitile/scheme.hpp"

namespace fixtures {

inline std::string scheme_path(const std::string& name) { return std::string(MULTITILE_SCHEME_DIR) + "/" + name + ".json"; }

inline const multitile::Scheme& scheme(const std::string& name) {
  static std::map<std::string, multitile::Scheme> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, multitile::load_scheme(scheme_path(name))).first;
  return it->second;
}

inline const multitile::Scheme& square() { return scheme("square"); }
inline const multitile::Scheme& triangles() { return scheme("triangles"); }
inline const multitile::Scheme& kakutani() { return scheme("kakutani-1-3"); }
inline const multitile::Scheme& fixed_half() { return scheme("fixed-half"); }

}  // namespace fixtures
