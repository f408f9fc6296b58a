// Copyright 2026 The thinlab Authors
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

#include "thinlab/attenuator.hpp"
#include "thinlab/entropy.hpp"
#include "thinlab/errors.hpp"
#include "thinlab/extremal.hpp"
#include "thinlab/harness.hpp"
#include "thinlab/io.hpp"
#include "thinlab/parallel.hpp"
#include "thinlab/prob_vec.hpp"
#include "thinlab/random.hpp"
