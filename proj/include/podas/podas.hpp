/*
 * Copyright 2026 The podas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PODAS_PODAS_HPP
#define PODAS_PODAS_HPP

#include "podas/active_subspace.hpp"
#include "podas/errors.hpp"
#include "podas/evaluation.hpp"
#include "podas/gpr.hpp"
#include "podas/io.hpp"
#include "podas/param_space.hpp"
#include "podas/pod.hpp"
#include "podas/rbf.hpp"
#include "podas/rom.hpp"

#endif  // PODAS_PODAS_HPP
