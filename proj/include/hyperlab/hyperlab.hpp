// Copyright 2026 The Hyperlab Authors
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

#include "hyperlab/error.hpp"
#include "hyperlab/word.hpp"
#include "hyperlab/interval.hpp"
#include "hyperlab/rng.hpp"
#include "hyperlab/mat2.hpp"
#include "hyperlab/spaces.hpp"
#include "hyperlab/boundary.hpp"
#include "hyperlab/gromov.hpp"
#include "hyperlab/busemann.hpp"
#include "hyperlab/spectrum.hpp"
#include "hyperlab/rigidsets.hpp"
#include "hyperlab/filling.hpp"
#include "hyperlab/models.hpp"
#include "hyperlab/harness/report.hpp"
#include "hyperlab/harness/scenario.hpp"
#include "hyperlab/harness/ops.hpp"
#include "hyperlab/harness/run.hpp"
#include "hyperlab/harness/verify.hpp"
