// Copyright 2026 The cvmem Authors
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

#include "cvmem/commands.hpp"
#include "cvmem/config.hpp"
#include "cvmem/csv.hpp"
#include "cvmem/errors.hpp"
#include "cvmem/full_model.hpp"
#include "cvmem/gaussian.hpp"
#include "cvmem/mapping.hpp"
#include "cvmem/params.hpp"
#include "cvmem/readout.hpp"
#include "cvmem/trajectories.hpp"
#include "cvmem/validation.hpp"
