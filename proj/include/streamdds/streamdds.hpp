// Copyright 2026 The streamdds Authors
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

#ifndef STREAMDDS__STREAMDDS_HPP_
#define STREAMDDS__STREAMDDS_HPP_

#include "streamdds/errors.hpp"
#include "streamdds/msgdef.hpp"
#include "streamdds/plan.hpp"
#include "streamdds/runtime.hpp"
#include "streamdds/serde.hpp"
#include "streamdds/topology.hpp"
#include "streamdds/value.hpp"

#endif  // STREAMDDS__STREAMDDS_HPP_
