// Copyright 2026 The DialogForge Authors
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

#ifndef DIALOGFORGE_GENERATOR_HPP
#define DIALOGFORGE_GENERATOR_HPP

#include "dialogforge/generator/act_map.hpp"
#include "dialogforge/generator/goals.hpp"
#include "dialogforge/generator/graph.hpp"
#include "dialogforge/generator/ontology.hpp"
#include "dialogforge/generator/paraphrase.hpp"

#endif  // DIALOGFORGE_GENERATOR_HPP
