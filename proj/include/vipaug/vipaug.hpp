// Copyright 2026 The vipaug Authors.
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

// Umbrella header for the in-memory library (no image codecs).

#include "vipaug/analyzer.hpp"
#include "vipaug/augment.hpp"
#include "vipaug/batch.hpp"
#include "vipaug/config.hpp"
#include "vipaug/fft.hpp"
#include "vipaug/grid.hpp"
#include "vipaug/pixel_ops.hpp"
#include "vipaug/pool.hpp"
#include "vipaug/rng.hpp"
#include "vipaug/spectrum.hpp"
#include "vipaug/vitality.hpp"
