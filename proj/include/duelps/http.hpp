// Copyright 2026 The duelps Authors.
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

#include <string>

// Eigen before httplib: glibc's <resolv.h> defines a `_res` macro that
// collides with Eigen parameter names.
#include "duelps/service.hpp"

#include "httplib.h"

namespace duelps {

/// Registers the /api/v1 routes of `service` on `server`. Responses carry
/// Access-Control-Allow-Origin: `cors_origin`.
void mount_routes(httplib::Server& server, DuelService& service,
                  const std::string& cors_origin = "*");

}  // namespace duelps
