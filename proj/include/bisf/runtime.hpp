// Copyright 2026 The bisf Authors. All Rights Reserved.
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

namespace bisf {

/// Name of the environment variable that caps the OpenMP thread count.
inline constexpr const char* kThreadsEnv = "BISF_NUM_THREADS";

/// Process-wide setup for executables: applies BISF_NUM_THREADS when set and
/// keeps large matrix buffers in the heap instead of fresh mappings, which
/// otherwise page-fault on every objective evaluation. Returns the thread
/// count in effect.
int configure_runtime();

}  // namespace bisf
