// Copyright 2026 The ppdiff Authors
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

#include "ppdiff/almost_periods.hpp"
#include "ppdiff/atomic_measure.hpp"
#include "ppdiff/autocorrelation.hpp"
#include "ppdiff/averaging.hpp"
#include "ppdiff/box.hpp"
#include "ppdiff/core.hpp"
#include "ppdiff/diffraction.hpp"
#include "ppdiff/eigen_group.hpp"
#include "ppdiff/generators.hpp"
#include "ppdiff/observable.hpp"
#include "ppdiff/parallel.hpp"
#include "ppdiff/perturbation.hpp"
#include "ppdiff/quadrature.hpp"
#include "ppdiff/test_function.hpp"
