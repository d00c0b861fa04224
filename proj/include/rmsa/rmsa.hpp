// Copyright 2026 The rmsa-bp Authors
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

#include "rmsa/backend.hpp"
#include "rmsa/backends.hpp"
#include "rmsa/error.hpp"
#include "rmsa/experiment.hpp"
#include "rmsa/external_backend.hpp"
#include "rmsa/instance.hpp"
#include "rmsa/io.hpp"
#include "rmsa/model.hpp"
#include "rmsa/model_io.hpp"
#include "rmsa/oracle.hpp"
#include "rmsa/preprocess.hpp"
#include "rmsa/segments.hpp"
#include "rmsa/solve.hpp"
#include "rmsa/verify.hpp"
