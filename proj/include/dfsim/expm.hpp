// Copyright 2026 The dfs-cavity-sim Authors
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

#include "dfsim/hilbert.hpp"

namespace dfsim {

/// Dense exp(A) by scaling and squaring with a diagonal Pade approximant of
/// degree 3, 5, 7, 9 or 13, picked from the 1-norm of A (Higham 2005 bounds).
CMatrix expm(const CMatrix& a);

/// U_cond(t) = exp(-i H t).
CMatrix conditional_propagator(const CMatrix& h, double t);

}  // namespace dfsim
