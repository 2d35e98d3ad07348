// Copyright 2026 The hmpc Authors
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


#ifndef HMPC_CLI_REGISTRY_HPP_
#define HMPC_CLI_REGISTRY_HPP_

#include <string>
#include <vector>

#include "hmpc_cli/config.hpp"

namespace hmpc::cli {

/// Built-in scenarios; scenarios/<id>.ini holds the same configurations.
const std::vector<ScenarioConfig> & scenario_registry();

/// Throws ConfigError for unknown ids.
const ScenarioConfig & find_scenario(const std::string & id);

}  // namespace hmpc::cli

#endif  // HMPC_CLI_REGISTRY_HPP_
