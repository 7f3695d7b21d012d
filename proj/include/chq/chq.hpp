// Copyright 2026 The chq Authors
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

#pragma once

// Umbrella header for the whole library.

#include "chq/capacity.hpp"
#include "chq/corpus.hpp"
#include "chq/errors.hpp"
#include "chq/extended_game.hpp"
#include "chq/game.hpp"
#include "chq/grid_oracle.hpp"
#include "chq/lp.hpp"
#include "chq/polytope.hpp"
#include "chq/random.hpp"
#include "chq/rational.hpp"
#include "chq/solver.hpp"
#include "chq/state_space.hpp"
#include "chq/subset.hpp"
#include "chq/type_space.hpp"
