// Copyright 2026 The fluxtheo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace fluxtheo {

// Diagnostics go to stderr when FLUXTHEO_LOG is set to anything but "" or "0".
inline bool log_enabled() {
  static const bool on = [] {
    const char* v = std::getenv("FLUXTHEO_LOG");
    return v != nullptr && v[0] != '\0' && std::string(v) != "0";
  }();
  return on;
}

inline void log_line(const std::string& msg) {
  if (log_enabled()) std::cerr << "[fluxtheo] " << msg << "\n";
}

}  // namespace fluxtheo
