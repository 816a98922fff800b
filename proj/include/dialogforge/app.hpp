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

// Application layer: configuration, pipeline stages, session store and
// HTTP API.

#ifndef DIALOGFORGE_APP_HPP
#define DIALOGFORGE_APP_HPP

#include "dialogforge/app/config.hpp"
#include "dialogforge/app/pipeline.hpp"
#include "dialogforge/app/server.hpp"
#include "dialogforge/app/store.hpp"

#endif  // DIALOGFORGE_APP_HPP
