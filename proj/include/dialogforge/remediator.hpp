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

// Metrics, root causes, suggestions, clustering, paths and reports.

#ifndef DIALOGFORGE_REMEDIATOR_HPP
#define DIALOGFORGE_REMEDIATOR_HPP

#include "dialogforge/remediator/bootstrap.hpp"
#include "dialogforge/remediator/clustering.hpp"
#include "dialogforge/remediator/metrics.hpp"
#include "dialogforge/remediator/paths.hpp"
#include "dialogforge/remediator/report.hpp"
#include "dialogforge/remediator/root_cause.hpp"
#include "dialogforge/remediator/suggestions.hpp"

#endif  // DIALOGFORGE_REMEDIATOR_HPP
