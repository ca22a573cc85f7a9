// Copyright 2026 SVC-Forge Authors
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

#include "svcforge/audio/frame_spec.hpp"
#include "svcforge/audio/wav_io.hpp"
#include "svcforge/audio/waveform.hpp"
#include "svcforge/core/range.hpp"
#include "svcforge/core/rng.hpp"
#include "svcforge/dsp/fft.hpp"
#include "svcforge/f0/contour.hpp"
#include "svcforge/f0/perturb.hpp"
#include "svcforge/f0/yin.hpp"
#include "svcforge/fx/chain.hpp"
#include "svcforge/fx/echo.hpp"
#include "svcforge/fx/pitch_shift.hpp"
#include "svcforge/fx/reverb.hpp"
#include "svcforge/nsf/excitation.hpp"
#include "svcforge/pipeline/config.hpp"
#include "svcforge/pipeline/run.hpp"
#include "svcforge/pipeline/stats.hpp"
