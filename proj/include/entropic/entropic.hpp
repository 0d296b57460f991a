// Copyright 2026 The Entropic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENTROPIC_ENTROPIC_HPP
#define ENTROPIC_ENTROPIC_HPP

#include "entropic/arena.hpp"
#include "entropic/clustering.hpp"
#include "entropic/controller.hpp"
#include "entropic/evolution.hpp"
#include "entropic/experiment.hpp"
#include "entropic/fitness.hpp"
#include "entropic/robot_sim.hpp"

#endif  // ENTROPIC_ENTROPIC_HPP
