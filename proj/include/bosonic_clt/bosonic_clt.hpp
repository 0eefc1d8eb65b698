// Copyright 2026 The bosonic-clt Authors
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

#include "bosonic_clt/errors.hpp"
#include "bosonic_clt/linalg.hpp"
#include "bosonic_clt/fock.hpp"
#include "bosonic_clt/channels.hpp"
#include "bosonic_clt/convolution.hpp"
#include "bosonic_clt/gaussification.hpp"
#include "bosonic_clt/analysis.hpp"
#include "bosonic_clt/channel_spec.hpp"
#include "bosonic_clt/report_io.hpp"
#include "bosonic_clt/cli.hpp"
