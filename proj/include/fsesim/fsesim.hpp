/*
 * fsesim : Fast Spin Echo motion simulation toolkit
 *
 * Copyright 2026 The fsesim Authors
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

#ifndef FSESIM_FSESIM_HPP
#define FSESIM_FSESIM_HPP

#include "fsesim/config.hpp"
#include "fsesim/dataset.hpp"
#include "fsesim/dictionary.hpp"
#include "fsesim/fft.hpp"
#include "fsesim/grid.hpp"
#include "fsesim/image_io.hpp"
#include "fsesim/metrics.hpp"
#include "fsesim/motion.hpp"
#include "fsesim/noise.hpp"
#include "fsesim/phantom.hpp"
#include "fsesim/rigid.hpp"
#include "fsesim/rng.hpp"
#include "fsesim/schedule.hpp"
#include "fsesim/signal.hpp"

#endif // FSESIM_FSESIM_HPP
