// Copyright 2026 The qwalk Authors
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

#include "qwalk/abelian_class.hpp"
#include "qwalk/coarse_grain.hpp"
#include "qwalk/dihedral.hpp"
#include "qwalk/error.hpp"
#include "qwalk/groups.hpp"
#include "qwalk/lattice.hpp"
#include "qwalk/least_squares.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/momentum.hpp"
#include "qwalk/presentation.hpp"
#include "qwalk/walk.hpp"
#include "qwalk/walk_file.hpp"
