// Copyright 2026 The spectomo Authors
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

#include "spectomo/density.hpp"
#include "spectomo/density_io.hpp"
#include "spectomo/errors.hpp"
#include "spectomo/fourier.hpp"
#include "spectomo/grid.hpp"
#include "spectomo/interferometer.hpp"
#include "spectomo/measurement.hpp"
#include "spectomo/metrics.hpp"
#include "spectomo/reconstruction.hpp"
#include "spectomo/record_io.hpp"
#include "spectomo/report_io.hpp"
#include "spectomo/states.hpp"
#include "spectomo/transverse.hpp"
